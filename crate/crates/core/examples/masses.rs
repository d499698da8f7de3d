//! Compute certified mass enclosures at a given truncation order.
//!
//! Usage: `cargo run --release -p spheremass-core --example masses [N] [digits]`

use spheremass_core::mass::{distinctness_table, mass_estimate, Manifold};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: u32 = args.first().map(|s| s.parse().unwrap()).unwrap_or(20);
    let digits: u32 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(12);

    let start = std::time::Instant::now();
    let estimates: Vec<_> = Manifold::ALL
        .iter()
        .map(|&m| mass_estimate(m, n, digits).expect("positive mass"))
        .collect();
    for est in &estimates {
        println!(
            "{}  N={}  mass in {}  (bound {:.3e})",
            est.manifold,
            est.truncation,
            est.mass.decimal_string(digits),
            rational_f64(&est.error_bound),
        );
        println!("    t0     in {}", est.t0.decimal_string(digits));
        println!("    2 t0   in {}", est.t0_double.decimal_string(digits));
    }
    for row in distinctness_table(&estimates[0], &estimates[1], &estimates[2]) {
        println!(
            "{:24} {} vs {} -> {}",
            row.topology, row.left_label, row.right_label, row.verdict
        );
    }
    println!("elapsed: {:.1?}", start.elapsed());
}

fn rational_f64(r: &spheremass_core::Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
