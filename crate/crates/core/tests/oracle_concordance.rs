//! Floating-point quadrature as an independent check on the exact
//! integrals. The full grid lives in the acceptance suite; this is the
//! smoke version.

use spheremass_core::exactnum::decimal_lower;
use spheremass_core::integrals::moment;
use spheremass_core::quad::adaptive_quad_square;
use spheremass_core::xyfunc::{conformal_laplacian, source_term};

/// The source term evaluated directly from its formula, independent of
/// the symbolic machinery.
fn f_direct(x: f64, y: f64) -> f64 {
    if x + y == 0.0 {
        return 0.0;
    }
    8.0 * x * x * y * y * (5.0 * x * x - 8.0 * x * y + 5.0 * y * y) / (9.0 * (x + y).powi(5))
}

fn moment_f64(p: u32, q: u32) -> f64 {
    let enc = moment(p, q).enclosure(15);
    decimal_lower(enc.lo(), 13).parse().unwrap()
}

#[test]
fn base_moment_to_eight_digits() {
    let r = adaptive_quad_square(f_direct, 1e-9).unwrap();
    assert!(
        (r.value - moment_f64(0, 0)).abs() <= 1e-8,
        "quad {} vs exact {}",
        r.value,
        moment_f64(0, 0)
    );
}

#[test]
fn low_moments_concord() {
    for p in 0..=3u32 {
        for q in p..=3u32 {
            let r = adaptive_quad_square(
                |x, y| f_direct(x, y) * x.powi(p as i32) * y.powi(q as i32),
                1e-8,
            )
            .unwrap();
            let exact = moment_f64(p, q);
            assert!(
                (r.value - exact).abs() <= 1e-6,
                "moment ({p},{q}): quad {} vs exact {exact}",
                r.value
            );
        }
    }
}

#[test]
fn boxed_source_l2_concords() {
    let boxed = conformal_laplacian(&source_term());
    let r = adaptive_quad_square(|x, y| boxed.eval_f64(x, y).powi(2), 1e-7).unwrap();
    let expect = 61547.0 / 45045.0;
    assert!(
        (r.value - expect).abs() <= 1e-5,
        "quad {} vs 61547/45045 = {expect}",
        r.value
    );
}
