//! Exact integration engine.
//!
//! The workhorse is the triangle integral
//!
//! ```text
//! I(p,q;n) = int_0^1 int_0^y x^p y^q / (x+y)^n dx dy ,
//! ```
//!
//! finite precisely when `n = 1` or `p + q > n - 2`. Integration by
//! parts in `x` lowers `(p, n)` to `(p-1, n-1)`:
//!
//! ```text
//! I(p,q;n) = -1 / (2^(n-1) (n-1) (p+q+2-n)) + p/(n-1) · I(p-1,q;n-1)
//! ```
//!
//! for `n > 1`, `p >= 1`. The boundary term at the lower limit vanishes
//! only for `p >= 1`; the recursion bottoms out at two explicit bases:
//!
//! * `n = 1`: `I(p,q;1) = (-1)^p (ln 2 - A(p)) / (p+q+1)`, where `A` is
//!   the alternating harmonic partial sum — the only place ln 2 enters;
//! * `p = 0`, `n > 1`: `I(0,q;n) = (1 - 2^(1-n)) / ((n-1)(q+2-n))`,
//!   purely rational.
//!
//! On top of this sit the closed forms for `n = 5`, the moment table
//! `m(p,q) = int int f · x^p y^q` of the source term over the unit
//! square (evaluated two independent ways), and a general exact
//! integrator for the `(x+y)`-denominator family.

use num_bigint::BigInt;
use num_traits::One;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::RwLock;

use crate::basis::alt_harmonic;
use crate::exactnum::{rat, rat_int, ExactValue, Rational};
use crate::xyfunc::XYRational;
use crate::{Error, Result};

/// `I(p,q;1)`: the logarithmic base case.
fn tri_integral_log_base(p: u32, q: u32) -> ExactValue {
    let sign = if p % 2 == 0 { 1 } else { -1 };
    let coeff = rat(sign, (p + q + 1) as i64);
    ExactValue::new(-alt_harmonic(p) * &coeff, coeff)
}

/// `I(0,q;n)` for `n > 1`: the boundary term at `x = 0` survives and
/// the integral is rational, `(1 - 2^(1-n)) / ((n-1)(q+2-n))`.
fn tri_integral_rational_base(q: u32, n: u32) -> Rational {
    debug_assert!(n > 1 && q + 2 > n);
    let two_pow = BigInt::from(2u32).pow(n - 1);
    let num = &two_pow - BigInt::one();
    let den = two_pow * BigInt::from((n - 1) as u64) * BigInt::from((q + 2 - n) as u64);
    Rational::new(num, den)
}

/// Exact triangle integral `I(p,q;n)`.
///
/// Errors on parameter combinations where the integral diverges.
pub fn tri_integral(p: u32, q: u32, n: u32) -> Result<ExactValue> {
    assert!(n >= 1, "denominator power must be positive");
    if n > 1 && p + q + 2 <= n {
        return Err(Error::DivergentIntegral { p, q, n });
    }
    if n == 1 {
        return Ok(tri_integral_log_base(p, q));
    }
    if p == 0 {
        return Ok(ExactValue::from_rational(tri_integral_rational_base(q, n)));
    }
    let boundary = -Rational::new(
        BigInt::one(),
        BigInt::from(2u32).pow(n - 1)
            * BigInt::from((n - 1) as u64)
            * BigInt::from((p + q + 2 - n) as u64),
    );
    let rec = tri_integral(p - 1, q, n - 1)?;
    Ok(rec.scale(&rat(p as i64, (n - 1) as i64)) + &ExactValue::from_rational(boundary))
}

/// Closed forms for `I(p,q;5)` on their validity domain:
/// `p >= 4` (general form), `p = 3, q >= 1`, `p = 2, q >= 2`.
/// Outside that domain the integral either diverges or needs the
/// recursion; both are rejected.
pub fn tri_integral_n5_closed(p: u32, q: u32) -> Result<ExactValue> {
    if p >= 4 {
        let pi = p as i64;
        let qi = q as i64;
        let rational = rat(-(4 * pi * pi * pi - 10 * pi * pi + 8 * pi + 3), 192 * (pi + qi - 3));
        let falling = pi * (pi - 1) * (pi - 2) * (pi - 3);
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let coeff = rat(sign * falling, 24 * (pi + qi - 3));
        return Ok(ExactValue::new(
            rational - alt_harmonic(p - 4) * &coeff,
            coeff,
        ));
    }
    if p == 3 && q >= 1 {
        return Ok(ExactValue::from_rational(rat(1, 64 * q as i64)));
    }
    if p == 2 && q >= 2 {
        return Ok(ExactValue::from_rational(rat(5, 192 * (q as i64 - 1))));
    }
    Err(Error::DivergentIntegral { p, q, n: 5 })
}

type PairKey = (u32, u32);

static MOMENTS: Lazy<RwLock<HashMap<PairKey, ExactValue>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Moment of the source term against `x^p y^q` over the unit square,
/// from the closed form
///
/// ```text
/// m(p,q) = 1/(18(p+q+3)) { -109 - 68(p+q) - 33(p^2+q^2) - 6(p^3+q^3)
///          + 4(-1)^p (p+1)(p+2)(3p^2+9p+10)(ln 2 - A(p))
///          + 4(-1)^q (q+1)(q+2)(3q^2+9q+10)(ln 2 - A(q)) } .
/// ```
///
/// Symmetric in `(p, q)`; memoized (these values are the shared kernel
/// of every mass computation).
pub fn moment(p: u32, q: u32) -> ExactValue {
    let key = (p.min(q), p.max(q));
    {
        let cache = MOMENTS.read().unwrap();
        if let Some(v) = cache.get(&key) {
            return v.clone();
        }
    }
    let v = moment_closed_form(key.0, key.1);
    MOMENTS.write().unwrap().entry(key).or_insert(v.clone());
    v
}

fn moment_closed_form(p: u32, q: u32) -> ExactValue {
    let pi = p as i64;
    let qi = q as i64;
    let front = rat(1, 18 * (pi + qi + 3));
    let constant = rat_int(
        -109 - 68 * (pi + qi) - 33 * (pi * pi + qi * qi) - 6 * (pi * pi * pi + qi * qi * qi),
    );
    let half = |r: u32| -> ExactValue {
        let ri = r as i64;
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let coeff = rat_int(sign * 4 * (ri + 1) * (ri + 2) * (3 * ri * ri + 9 * ri + 10));
        ExactValue::new(-alt_harmonic(r) * &coeff, coeff)
    };
    (ExactValue::from_rational(constant) + half(p) + half(q)).scale(&front)
}

/// The same moment assembled the long way from the `n = 5` triangle
/// integrals, for cross-validation:
/// `(8/9)(5 I(p+4,q+2;5) - 8 I(p+3,q+3;5) + 5 I(p+2,q+4;5))`
/// symmetrized in `(p, q)`.
pub fn moment_via_triangles(p: u32, q: u32) -> ExactValue {
    let one_triangle = |p: u32, q: u32| -> ExactValue {
        let t1 = tri_integral(p + 4, q + 2, 5).expect("convergent by construction");
        let t2 = tri_integral(p + 3, q + 3, 5).expect("convergent by construction");
        let t3 = tri_integral(p + 2, q + 4, 5).expect("convergent by construction");
        (t1.scale(&rat_int(5)) + t3.scale(&rat_int(5)) - t2.scale(&rat_int(8))).scale(&rat(8, 9))
    };
    one_triangle(p, q) + one_triangle(q, p)
}

/// Snapshot of the moment cache, sorted by key, for persistence.
pub fn moment_cache_snapshot() -> Vec<(u32, u32, ExactValue)> {
    let cache = MOMENTS.read().unwrap();
    let mut entries: Vec<_> = cache.iter().map(|(&(p, q), v)| (p, q, v.clone())).collect();
    entries.sort_by_key(|&(p, q, _)| (p, q));
    entries
}

/// Seed the moment cache (e.g. from a persisted coefficient file).
///
/// Callers must only supply values produced by this crate; the cache is
/// trusted, so integrity checking belongs to the persistence layer.
pub fn moment_cache_seed(entries: impl IntoIterator<Item = (u32, u32, ExactValue)>) {
    let mut cache = MOMENTS.write().unwrap();
    for (p, q, v) in entries {
        cache.entry((p.min(q), p.max(q))).or_insert(v);
    }
}

/// Exact `int_0^1 int_0^1 u dx dy` for a bounded member of the
/// `(x+y)`-denominator family.
///
/// The square splits into the triangles `x < y` and `x > y`; each
/// numerator monomial `c x^a y^b / (x+y)^k` contributes
/// `c (I(a,b;k) + I(b,a;k))`. Boundedness of each monomial
/// (`a + b >= k - 1` after canonicalization) makes every triangle
/// integral convergent; anything else is rejected.
pub fn integrate_unit_square(u: &XYRational) -> Result<ExactValue> {
    let k = u.den_power();
    let mut total = ExactValue::zero();
    for (&(a, b), c) in u.num().terms() {
        if k == 0 {
            let piece = Rational::new(BigInt::one(), BigInt::from((a as u64 + 1) * (b as u64 + 1)));
            total += ExactValue::from_rational(c * piece);
            continue;
        }
        if a + b + 1 < k {
            return Err(Error::UnboundedIntegrand { a, b, k });
        }
        let both = tri_integral(a, b, k)? + tri_integral(b, a, k)?;
        total += both.scale(c);
    }
    Ok(total)
}

/// Exact `int int (box f)^2` over the unit square; the constant in the
/// truncation-error estimate. Equals `61547/45045`, which is asserted
/// by the verification suites rather than assumed here.
pub fn box_source_l2_sq() -> Result<ExactValue> {
    let f = crate::xyfunc::source_term();
    let boxed = crate::xyfunc::conformal_laplacian(&f);
    integrate_unit_square(&boxed.mul(&boxed))
}
