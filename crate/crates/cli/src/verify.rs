//! Verification suites: every identity the exact pipeline is built on,
//! checked end to end, plus floating-point concordance.

use spheremass_core::basis::{legendre_inner_product, shifted_legendre};
use spheremass_core::exactnum::{rat, rat_int, ExactValue, RatInterval, Rational};
use spheremass_core::integrals::{
    box_source_l2_sq, moment, moment_via_triangles, tri_integral, tri_integral_n5_closed,
};
use spheremass_core::mass::{
    check_distinct, error_bound, eigenvalue, mass_estimate, partial_sum, Manifold, Verdict,
};
use spheremass_core::quad::adaptive_quad_square;
use spheremass_core::xyfunc::{conformal_laplacian, green_singular_part, legendre_mode, source_term};

pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(results: &mut Vec<CheckResult>, name: &str, pass: bool, detail: String) {
    results.push(CheckResult { name: name.to_string(), pass, detail });
}

fn parse(s: &str) -> Rational {
    s.parse().unwrap()
}

/// Exact symbolic identities of the operator and the basis.
pub fn suite_symbolic() -> Vec<CheckResult> {
    let mut r = Vec::new();

    let g = green_singular_part();
    let f = source_term();
    let boxed = conformal_laplacian(&g);
    check(
        &mut r,
        "box(G_-2) = f",
        boxed == f,
        format!("box image: {boxed}"),
    );

    let mut eigen_ok = true;
    for j in 0..=10 {
        for k in 0..=10 {
            let mode = legendre_mode(j, k);
            if conformal_laplacian(&mode) != mode.scale(&rat_int(eigenvalue(j, k) as i64)) {
                eigen_ok = false;
            }
        }
    }
    check(
        &mut r,
        "box(P_j P_k) = lambda_{j,k} P_j P_k for j,k <= 10",
        eigen_ok,
        String::new(),
    );

    let mut endpoints_ok = true;
    for j in 0..=50u32 {
        let p = shifted_legendre(j);
        let at0 = p.eval(&Rational::from_integer(0.into()));
        let at1 = p.eval(&rat_int(1));
        let expect1 = if j % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        if at0 != rat_int(1) || at1 != expect1 {
            endpoints_ok = false;
        }
    }
    check(&mut r, "P_j(1) = 1 and P_j(-1) = (-1)^j for j <= 50", endpoints_ok, String::new());

    let mut orth_ok = true;
    for j in 0..=15u32 {
        for k in 0..=15u32 {
            let expect = if j == k {
                Rational::new(1.into(), (2 * j as i64 + 1).into())
            } else {
                Rational::from_integer(0.into())
            };
            if legendre_inner_product(j, k) != expect {
                orth_ok = false;
            }
        }
    }
    check(
        &mut r,
        "int P_j(1-2x) P_k(1-2x) dx = delta/(2j+1) for j,k <= 15",
        orth_ok,
        String::new(),
    );

    let corners_ok = g.evaluate(&rat_int(1), &rat_int(1)) == Ok(rat(13, 72))
        && g.evaluate(&rat_int(1), &rat_int(0)) == Ok(rat(1, 4))
        && f.evaluate(&rat_int(1), &rat_int(1)) == Ok(rat(1, 18));
    check(
        &mut r,
        "corner values G_-2(1,1) = 13/72, G_-2(1,0) = 1/4, f(1,1) = 1/18",
        corners_ok,
        String::new(),
    );
    r
}

/// The triangle-integral reductions and the moment table.
pub fn suite_appendix() -> Vec<CheckResult> {
    let mut r = Vec::new();

    let mut base_ok = true;
    for p in 0..=10u32 {
        for q in 0..=10u32 {
            let direct = {
                let sign = if p % 2 == 0 { 1 } else { -1 };
                let coeff = rat(sign, (p + q + 1) as i64);
                ExactValue::new(-spheremass_core::basis::alt_harmonic(p) * &coeff, coeff)
            };
            if tri_integral(p, q, 1) != Ok(direct) {
                base_ok = false;
            }
        }
    }
    check(&mut r, "I(p,q;1) matches the logarithmic base for p,q <= 10", base_ok, String::new());

    let mut closed_ok = true;
    for p in 0..=12u32 {
        for q in 0..=12u32 {
            let covered = p >= 4 || (p == 3 && q >= 1) || (p == 2 && q >= 2);
            if !covered {
                continue;
            }
            if tri_integral_n5_closed(p, q).ok() != tri_integral(p, q, 5).ok() {
                closed_ok = false;
            }
        }
    }
    check(&mut r, "closed n=5 forms match the recursion for p,q <= 12", closed_ok, String::new());

    let mut dual_ok = true;
    let mut sym_ok = true;
    for p in 0..=12u32 {
        for q in 0..=12u32 {
            if moment(p, q) != moment_via_triangles(p, q) {
                dual_ok = false;
            }
            if moment(p, q) != moment(q, p) {
                sym_ok = false;
            }
        }
    }
    check(&mut r, "moment closed form = triangle assembly for p,q <= 12", dual_ok, String::new());
    check(&mut r, "moment symmetry m(p,q) = m(q,p) for p,q <= 12", sym_ok, String::new());

    // Single-triangle value at p = 0: (8/9)(5 I(4,q+2;5) - 8 I(3,q+3;5)
    // + 5 I(2,q+4;5)) = -109/(36(q+3)) + (80/(18(q+3))) ln 2.
    let mut p0_ok = true;
    for q in 0..=8u32 {
        let t = (tri_integral(4, q + 2, 5).unwrap().scale(&rat_int(5))
            + tri_integral(2, q + 4, 5).unwrap().scale(&rat_int(5))
            - tri_integral(3, q + 3, 5).unwrap().scale(&rat_int(8)))
        .scale(&rat(8, 9));
        let expect = ExactValue::new(rat(-109, 36 * (q as i64 + 3)), rat(80, 18 * (q as i64 + 3)));
        if t != expect {
            p0_ok = false;
        }
    }
    check(&mut r, "single-triangle assembly at p = 0 matches its closed form", p0_ok, String::new());
    r
}

/// The rational constant of the error estimate.
pub fn suite_l2norm() -> Vec<CheckResult> {
    let mut r = Vec::new();
    match box_source_l2_sq() {
        Ok(v) => {
            check(
                &mut r,
                "int int (box f)^2 = 61547/45045 exactly",
                v == ExactValue::from_rational(rat(61547, 45045)),
                format!("computed: {v}"),
            );
            check(&mut r, "ln 2 coefficient of the integral vanishes", v.is_rational(), String::new());
        }
        Err(err) => check(&mut r, "int int (box f)^2 evaluates", false, err.to_string()),
    }
    r
}

/// Floating-point quadrature concordance.
pub fn suite_quadrature(tol: f64) -> Vec<CheckResult> {
    let mut r = Vec::new();

    let f_direct = |x: f64, y: f64| -> f64 {
        if x + y == 0.0 {
            return 0.0;
        }
        8.0 * x * x * y * y * (5.0 * x * x - 8.0 * x * y + 5.0 * y * y) / (9.0 * (x + y).powi(5))
    };

    let simple = adaptive_quad_square(|x, y| x * y, tol);
    check(
        &mut r,
        "quadrature: int int x y = 1/4",
        simple.map(|q| (q.value - 0.25).abs() <= tol).unwrap_or(false),
        String::new(),
    );

    let mut worst: f64 = 0.0;
    let mut moments_ok = true;
    for p in 0..=6u32 {
        for q in p..=6u32 {
            let quad = adaptive_quad_square(
                |x, y| f_direct(x, y) * x.powi(p as i32) * y.powi(q as i32),
                tol * 0.1,
            );
            let exact = moment_mid_f64(p, q);
            match quad {
                Ok(qr) => {
                    let err = (qr.value - exact).abs();
                    worst = worst.max(err);
                    if err > tol {
                        moments_ok = false;
                    }
                }
                Err(_) => moments_ok = false,
            }
        }
    }
    check(
        &mut r,
        "quadrature matches exact moments for p,q <= 6",
        moments_ok,
        format!("worst deviation {worst:.2e} (tolerance {tol:.0e})"),
    );

    let boxed = conformal_laplacian(&source_term());
    let l2 = adaptive_quad_square(|x, y| boxed.eval_f64(x, y).powi(2), tol * 0.1);
    let expect = 61547.0 / 45045.0;
    check(
        &mut r,
        "quadrature matches 61547/45045 for (box f)^2",
        l2.map(|q| (q.value - expect).abs() <= tol.max(1e-6) * 10.0).unwrap_or(false),
        format!("target {expect:.7}"),
    );
    r
}

fn moment_mid_f64(p: u32, q: u32) -> f64 {
    let enc = moment(p, q).enclosure(15);
    spheremass_core::exactnum::decimal_lower(enc.lo(), 13)
        .parse()
        .expect("decimal parses")
}

/// The hand-scale numbers: everything the first partial sum pins down.
pub fn suite_hand() -> Vec<CheckResult> {
    let mut r = Vec::new();

    let s0 = partial_sum(Manifold::S2xS2, 0);
    check(
        &mut r,
        "S_0 = (121 - 160 ln 2)/18",
        s0 == ExactValue::new(rat(121, 18), rat(-160, 18)),
        format!("S_0 = {s0}"),
    );

    let s1 = partial_sum(Manifold::S2xS2, 1);
    check(
        &mut r,
        "S_1 = 4777/1260 - (208/45) ln 2",
        s1 == ExactValue::new(rat(4777, 1260), rat(-208, 45)),
        format!("S_1 = {s1}"),
    );

    let combo = moment(0, 0).scale(&rat_int(53)) - moment(1, 0).scale(&rat_int(57))
        - moment(0, 1).scale(&rat_int(57))
        + moment(1, 1).scale(&rat_int(72));
    let s1_alt = ExactValue::from_rational(rat(2, 3)) - combo.scale(&rat(12, 56));
    check(&mut r, "S_1 = 2/3 - (12/56)(53 m00 - 57 m10 - 57 m01 + 72 m11)", s1 == s1_alt, String::new());

    let b1 = error_bound(Manifold::S2xS2, 1);
    check(
        &mut r,
        "error bound at N = 1 lies in (0.0928, 0.0929)",
        b1 > parse("928/10000") && b1 < parse("929/10000"),
        format!("bound = {b1}"),
    );

    match mass_estimate(Manifold::S2xS2, 1, 6) {
        Ok(est) => {
            let lo_ok = est.mass.lo() > &parse("4940/10000") && est.mass.lo() < &parse("4950/10000");
            let hi_ok = est.mass.hi() > &parse("6800/10000") && est.mass.hi() < &parse("6810/10000");
            check(
                &mut r,
                "N = 1 mass interval endpoints in (0.4940,0.4950) x (0.6800,0.6810)",
                lo_ok && hi_ok,
                format!("interval {}", est.mass.decimal_string(6)),
            );
            let window = RatInterval::new(parse("-2247/10000"), parse("-1632/10000"));
            check(
                &mut r,
                "t0 interval inside (-0.2247, -0.1632)",
                est.t0.is_subset_of(&window),
                format!("t0 {}", est.t0.decimal_string(6)),
            );
            check(
                &mut r,
                "-1/3 provably excluded at N = 1",
                check_distinct(&RatInterval::point(rat(-1, 3)), &est.t0) == Verdict::Proven,
                String::new(),
            );
        }
        Err(err) => check(&mut r, "N = 1 mass estimate", false, err.to_string()),
    }
    r
}

pub fn run_suite(name: &str, tol: f64) -> Option<Vec<CheckResult>> {
    match name {
        "symbolic" => Some(suite_symbolic()),
        "appendix" => Some(suite_appendix()),
        "l2norm" => Some(suite_l2norm()),
        "quadrature" => Some(suite_quadrature(tol)),
        "hand" => Some(suite_hand()),
        _ => None,
    }
}

pub const ALL_SUITES: [&str; 5] = ["symbolic", "appendix", "l2norm", "quadrature", "hand"];
