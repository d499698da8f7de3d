//! Spectral basis data: shifted Legendre coefficients, alternating
//! harmonic partial sums, and the combinatorial coefficients of the
//! mass series.
//!
//! The torus-invariant eigenfunctions on the sphere factor are the
//! shifted Legendre polynomials `P_j(1-2x)`, with the explicit integer
//! expansion
//!
//! ```text
//! P_j(1-2x) = sum_p C(j,p) C(j+p,p) (-x)^p .
//! ```
//!
//! Normalization constants involving pi or square roots never appear
//! here: in the mass series they cancel into the rational weights
//! `(2j+1)(2k+1)`, so the exact pipeline touches no irrational other
//! than ln 2.
//!
//! Memo tables are process-global write-once caches; all lookups are
//! pure, so concurrent use is safe and observable behavior does not
//! depend on access order.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::sync::{Arc, RwLock};

use crate::exactnum::Rational;
use crate::{Error, Result};

static PASCAL: Lazy<RwLock<Vec<Vec<BigInt>>>> =
    Lazy::new(|| RwLock::new(vec![vec![BigInt::one()]]));

/// Binomial coefficient `C(n, k)` via cached Pascal rows.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    {
        let rows = PASCAL.read().unwrap();
        if (n as usize) < rows.len() {
            return rows[n as usize][k as usize].clone();
        }
    }
    let mut rows = PASCAL.write().unwrap();
    while rows.len() <= n as usize {
        let prev = rows.last().unwrap();
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(BigInt::one());
        for w in prev.windows(2) {
            row.push(&w[0] + &w[1]);
        }
        row.push(BigInt::one());
        rows.push(row);
    }
    rows[n as usize][k as usize].clone()
}

/// Integer coefficient vector of the shifted Legendre polynomial.
///
/// `coeffs[p]` is the coefficient of `x^p` in `P_j(1-2x)`, namely
/// `(-1)^p C(j,p) C(j+p,p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedLegendre {
    pub j: u32,
    pub coeffs: Vec<BigInt>,
}

impl ShiftedLegendre {
    /// Exact value `P_j(1-2x)` at a rational `x`.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }
}

static LEGENDRE: Lazy<RwLock<Vec<Arc<ShiftedLegendre>>>> = Lazy::new(|| RwLock::new(Vec::new()));

/// Shifted Legendre coefficients for degree `j`, memoized.
pub fn shifted_legendre(j: u32) -> Arc<ShiftedLegendre> {
    {
        let cache = LEGENDRE.read().unwrap();
        if (j as usize) < cache.len() {
            return cache[j as usize].clone();
        }
    }
    let mut cache = LEGENDRE.write().unwrap();
    while cache.len() <= j as usize {
        let deg = cache.len() as u32;
        let coeffs = (0..=deg)
            .map(|p| {
                let c = binomial(deg, p) * binomial(deg + p, p);
                if p % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        cache.push(Arc::new(ShiftedLegendre { j: deg, coeffs }));
    }
    cache[j as usize].clone()
}

static ALT_HARMONIC: Lazy<RwLock<Vec<Rational>>> =
    Lazy::new(|| RwLock::new(vec![Rational::zero()]));

/// Partial sum of the alternating harmonic series,
/// `A(p) = sum_{i=1..p} (-1)^(i-1)/i`, with `A(0) = 0`. Memoized.
pub fn alt_harmonic(p: u32) -> Rational {
    {
        let cache = ALT_HARMONIC.read().unwrap();
        if (p as usize) < cache.len() {
            return cache[p as usize].clone();
        }
    }
    let mut cache = ALT_HARMONIC.write().unwrap();
    while cache.len() <= p as usize {
        let i = cache.len() as i64;
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let next = cache.last().unwrap() + Rational::new(BigInt::from(sign), BigInt::from(i));
        cache.push(next);
    }
    cache[p as usize].clone()
}

/// Series coefficient `(-1)^(p+q) C(j,p) C(j+p,p) C(k,q) C(k+q,q)`,
/// the product of shifted-Legendre coefficients attached to the moment
/// `(p, q)` inside mode `(j, k)`. Requires `p <= j` and `q <= k`.
pub fn legendre_product_coeff(j: u32, k: u32, p: u32, q: u32) -> Result<BigInt> {
    if p > j || q > k {
        return Err(Error::CoefficientRange { j, k, p, q });
    }
    let c = binomial(j, p) * binomial(j + p, p) * binomial(k, q) * binomial(k + q, q);
    Ok(if (p + q) % 2 == 0 { c } else { -c })
}

/// Exact `int_0^1 P_j(1-2x) P_k(1-2x) dx` from the coefficient vectors.
///
/// Test helper for the orthogonality relation; the integral is
/// `delta_{jk} / (2j+1)`.
pub fn legendre_inner_product(j: u32, k: u32) -> Rational {
    let pj = shifted_legendre(j);
    let pk = shifted_legendre(k);
    let mut acc = Rational::zero();
    for (p, cp) in pj.coeffs.iter().enumerate() {
        for (q, cq) in pk.coeffs.iter().enumerate() {
            acc += Rational::new(cp * cq, BigInt::from((p + q + 1) as u64));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(10, 10), BigInt::from(1));
        assert_eq!(binomial(3, 7), BigInt::from(0));
        assert_eq!(
            binomial(200, 100).to_string(),
            "90548514656103281165404177077484163874504589675413336841320"
        );
    }

    #[test]
    fn legendre_low_degrees() {
        assert_eq!(shifted_legendre(0).coeffs, vec![BigInt::from(1)]);
        // P_1(z) = z at z = 1-2x gives 1 - 2x.
        assert_eq!(shifted_legendre(1).coeffs, vec![BigInt::from(1), BigInt::from(-2)]);
        // P_2(z) = (3z^2-1)/2 at z = 1-2x gives 1 - 6x + 6x^2.
        assert_eq!(
            shifted_legendre(2).coeffs,
            vec![BigInt::from(1), BigInt::from(-6), BigInt::from(6)]
        );
    }

    #[test]
    fn legendre_endpoints() {
        for j in 0..=50u32 {
            let p = shifted_legendre(j);
            assert_eq!(p.eval(&Rational::zero()), rat_int(1), "P_{j}(1) != 1");
            let at_one = p.eval(&rat_int(1));
            let expect = if j % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            assert_eq!(at_one, expect, "P_{j}(-1) != (-1)^{j}");
        }
    }

    #[test]
    fn legendre_orthogonality() {
        for j in 0..=15u32 {
            for k in 0..=15u32 {
                let ip = legendre_inner_product(j, k);
                let expect = if j == k {
                    Rational::new(BigInt::one(), BigInt::from(2 * j + 1))
                } else {
                    Rational::zero()
                };
                assert_eq!(ip, expect, "orthogonality fails at ({j},{k})");
            }
        }
    }

    #[test]
    fn alt_harmonic_values() {
        assert_eq!(alt_harmonic(0), Rational::zero());
        assert_eq!(alt_harmonic(1), rat_int(1));
        assert_eq!(alt_harmonic(3), rat(5, 6));
        // A(p) - A(p-1) = (-1)^(p-1)/p
        for p in 1..=30u32 {
            let diff = alt_harmonic(p) - alt_harmonic(p - 1);
            let sign = if p % 2 == 1 { 1 } else { -1 };
            assert_eq!(diff, rat(sign, p as i64));
        }
    }

    #[test]
    fn product_coeff_values() {
        assert_eq!(legendre_product_coeff(0, 0, 0, 0).unwrap(), BigInt::from(1));
        assert_eq!(legendre_product_coeff(1, 1, 1, 1).unwrap(), BigInt::from(4));
        assert_eq!(legendre_product_coeff(1, 0, 1, 0).unwrap(), BigInt::from(-2));
        assert!(legendre_product_coeff(1, 1, 2, 0).is_err());
    }

    #[test]
    fn product_coeff_symmetry() {
        for j in 0..=6u32 {
            for k in 0..=6u32 {
                for p in 0..=j {
                    for q in 0..=k {
                        assert_eq!(
                            legendre_product_coeff(j, k, p, q).unwrap(),
                            legendre_product_coeff(k, j, q, p).unwrap()
                        );
                    }
                }
            }
        }
    }
}
