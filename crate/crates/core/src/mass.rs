//! The mass series and its certified truncation.
//!
//! For each manifold the mass is
//!
//! ```text
//! m = c - 12 sum_{j,k>=0} (2j+1)(2k+1)/lambda_{j,k} · w(j,k) · M(j,k) ,
//! ```
//!
//! with eigenvalues `lambda_{j,k} = 6(j(j+1)+k(k+1)) + 4`, per-manifold
//! constant `c` and parity weight `w`, and mode coefficients
//! `M(j,k) = sum_{p<=j,q<=k} c_{j,k}^{p,q} m(p,q)` built from the moment
//! table. The square partial sum `S_N` truncates at `j, k <= N` and is
//! computed exactly as an element of ℚ + ℚ·ln 2.
//!
//! The truncation error is bounded by `corners · sqrt(L2 · F(N)^2)`
//! where `L2 = 61547/45045` is the exact squared L² norm of the boxed
//! source term, `F` is an explicit rational-root envelope obtained from
//! integral tests on the spectral tail, and `corners` counts the
//! Green's-function evaluations feeding the mass (1, 2 or 4). For
//! ℝP²×ℝP² the series is supported on even-even modes only, and a
//! parity-aware integral test gives a sharper envelope; the bound used
//! is the smaller of the two (both are certified).

use num_bigint::BigInt;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use crate::basis::shifted_legendre;
use crate::exactnum::{rat, rat_int, sqrt_upper, sum_exact, ExactValue, RatInterval, Rational};
use crate::integrals::moment;
use crate::Result;

/// The three closed Einstein manifolds whose Green's-function metric
/// masses the series computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Manifold {
    S2xS2,
    G24,
    Rp2xRp2,
}

impl Manifold {
    pub const ALL: [Manifold; 3] = [Manifold::S2xS2, Manifold::G24, Manifold::Rp2xRp2];

    /// Constant term of the mass formula: `2/3`, `17/6`, `53/6`.
    pub fn constant_term(&self) -> Rational {
        match self {
            Manifold::S2xS2 => rat(2, 3),
            Manifold::G24 => rat(17, 6),
            Manifold::Rp2xRp2 => rat(53, 6),
        }
    }

    /// Parity weight of mode `(j, k)`:
    /// `1`, `1 + (-1)^(j+k)`, or `1 + (-1)^j + (-1)^k + (-1)^(j+k)`.
    pub fn weight(&self, j: u32, k: u32) -> u32 {
        match self {
            Manifold::S2xS2 => 1,
            Manifold::G24 => {
                if (j + k) % 2 == 0 {
                    2
                } else {
                    0
                }
            }
            Manifold::Rp2xRp2 => {
                if j % 2 == 0 && k % 2 == 0 {
                    4
                } else {
                    0
                }
            }
        }
    }

    /// Number of Green's-function corner evaluations feeding the mass
    /// (the quotient lifts the pole to 1, 2 or 4 preimages); each one
    /// contributes an independent copy of the pointwise tail bound.
    pub fn corner_count(&self) -> u32 {
        match self {
            Manifold::S2xS2 => 1,
            Manifold::G24 => 2,
            Manifold::Rp2xRp2 => 4,
        }
    }

    pub fn key(&self) -> &'static str {
        match self {
            Manifold::S2xS2 => "s2xs2",
            Manifold::G24 => "g24",
            Manifold::Rp2xRp2 => "rp2xrp2",
        }
    }

    pub fn parse(s: &str) -> Option<Manifold> {
        match s {
            "s2xs2" => Some(Manifold::S2xS2),
            "g24" => Some(Manifold::G24),
            "rp2xrp2" => Some(Manifold::Rp2xRp2),
            _ => None,
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Manifold::S2xS2 => "S2 x S2",
            Manifold::G24 => "G(2,4)",
            Manifold::Rp2xRp2 => "RP2 x RP2",
        };
        write!(f, "{name}")
    }
}

/// Eigenvalue of the conformal Laplacian on invariant mode `(j, k)`:
/// `6(j(j+1) + k(k+1)) + 4`.
pub fn eigenvalue(j: u32, k: u32) -> u64 {
    let j = j as u64;
    let k = k as u64;
    6 * (j * (j + 1) + k * (k + 1)) + 4
}

static MODE_COEFFS: Lazy<RwLock<HashMap<(u32, u32), ExactValue>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Mode coefficient `sum_{p<=j} sum_{q<=k} c_{j,k}^{p,q} m(p,q)`:
/// the Fourier coefficient of the source term against mode `(j, k)`,
/// stripped of the normalization that cancels in the series. Symmetric
/// in `(j, k)`; memoized.
pub fn mode_coefficient(j: u32, k: u32) -> ExactValue {
    let key = (j.min(k), j.max(k));
    {
        let cache = MODE_COEFFS.read().unwrap();
        if let Some(v) = cache.get(&key) {
            return v.clone();
        }
    }
    let v = compute_mode_coefficient(key.0, key.1);
    MODE_COEFFS.write().unwrap().entry(key).or_insert(v.clone());
    v
}

fn compute_mode_coefficient(j: u32, k: u32) -> ExactValue {
    let pj = shifted_legendre(j);
    let pk = shifted_legendre(k);
    let mut terms = Vec::with_capacity(pj.coeffs.len() * pk.coeffs.len());
    for (p, cp) in pj.coeffs.iter().enumerate() {
        for (q, cq) in pk.coeffs.iter().enumerate() {
            let c = Rational::from_integer(cp * cq);
            terms.push(moment(p as u32, q as u32).scale(&c));
        }
    }
    sum_exact(terms)
}

/// Snapshot of the mode-coefficient cache, sorted by key.
pub fn mode_cache_snapshot() -> Vec<(u32, u32, ExactValue)> {
    let cache = MODE_COEFFS.read().unwrap();
    let mut entries: Vec<_> = cache.iter().map(|(&(j, k), v)| (j, k, v.clone())).collect();
    entries.sort_by_key(|&(j, k, _)| (j, k));
    entries
}

/// Seed the mode-coefficient cache from persisted values.
pub fn mode_cache_seed(entries: impl IntoIterator<Item = (u32, u32, ExactValue)>) {
    let mut cache = MODE_COEFFS.write().unwrap();
    for (j, k, v) in entries {
        cache.entry((j.min(k), j.max(k))).or_insert(v);
    }
}

/// Exact square partial sum `S_N` of the mass series.
///
/// Terms are pure and independent, so the `(j, k)` grid is mapped in
/// parallel; exactness makes the result identical for any thread count.
pub fn partial_sum(manifold: Manifold, n: u32) -> ExactValue {
    // Warm the moment table serially: every mode reads it.
    for p in 0..=n {
        for q in p..=n {
            moment(p, q);
        }
    }
    let mut tasks = Vec::new();
    for j in 0..=n {
        for k in j..=n {
            let w = manifold.weight(j, k);
            if w == 0 {
                continue;
            }
            let sym = if j < k { 2 } else { 1 };
            tasks.push((j, k, w * sym));
        }
    }
    let terms: Vec<ExactValue> = tasks
        .par_iter()
        .map(|&(j, k, mult)| {
            let num = BigInt::from(-12i64)
                * BigInt::from((2 * j as u64 + 1) * (2 * k as u64 + 1) * mult as u64);
            let factor = Rational::new(num, BigInt::from(eigenvalue(j, k)));
            mode_coefficient(j, k).scale(&factor)
        })
        .collect();
    ExactValue::from_rational(manifold.constant_term()) + sum_exact(terms)
}

/// Exact squared L² norm of the boxed source term, `61547/45045`.
///
/// Pinned here as the constant of the error estimate; the verification
/// suite recomputes it independently via exact integration.
pub fn box_source_l2_constant() -> Rational {
    rat(61547, 45045)
}

/// Squared truncation envelope `F(N)^2` for the full-lattice tail:
///
/// ```text
/// F(N)^2 = -(1/24)/(3N^2+3N+1)^2 + (1/3)/(3N^2+3N+2)^2 + 1/(3N^2+3N+2)^3
/// ```
pub fn tail_envelope_sq(n: u32) -> Rational {
    assert!(n >= 1);
    let n = n as i64;
    let a1 = rat_int(3 * n * n + 3 * n + 1);
    let a2 = rat_int(3 * n * n + 3 * n + 2);
    let a1sq = &a1 * &a1;
    let a2sq = &a2 * &a2;
    let a2cu = &a2sq * &a2;
    rat(-1, 24) / a1sq + rat(1, 3) / &a2sq + a2cu.recip()
}

// Exact antiderivative pieces for the integral test on the tail of
// sum (2j+1)(2k+1)/lambda^4. With s(m) = 6m(m+1)+4:
//   int_{j>=a} int_{k>=c} = (1/216) (s(a)/2 + s(c)/2 ... ) -- assembled
// from (1/216) (6a(a+1)+6c(c+1)+4)^-2, and the one-variable pieces
// below. Used for the parity-restricted envelope.
fn s_of(m: u32) -> BigInt {
    let m = BigInt::from(m);
    BigInt::from(6) * &m * (&m + BigInt::from(1)) + BigInt::from(4)
}

fn inv_pow(x: BigInt, e: u32) -> Rational {
    Rational::new(BigInt::from(1), x.pow(e))
}

/// `int_m^inf int_m^inf (2j+1)(2k+1)/lambda^4 dj dk`.
fn tail_corner(m: u32) -> Rational {
    let u = BigInt::from(12) * BigInt::from(m) * BigInt::from(m + 1) + BigInt::from(4);
    rat(1, 216) * inv_pow(u, 2)
}

/// `int_0^l int_c^inf (2j+1)(2k+1)/lambda^4 dk dj`.
fn tail_strip(l: u32, c: u32) -> Rational {
    let inner = s_of(c);
    let outer = BigInt::from(6) * BigInt::from(l) * BigInt::from(l + 1) + s_of(c);
    rat(1, 216) * (inv_pow(inner, 2) - inv_pow(outer, 2))
}

/// `int_c^inf (2k+1)/(6k(k+1)+4)^4 dk` (the `j = 0` row).
fn tail_line(c: u32) -> Rational {
    rat(1, 18) * inv_pow(s_of(c), 3)
}

/// Squared truncation envelope for a tail supported on even-even modes
/// only (the ℝP²×ℝP² series). Summing over even `j > N` is bounded by
/// half the continuous integral from `M = N` (`N` even) or `N-1`
/// (`N` odd); the strip keeps one explicit `j = 0` row. All pieces are
/// exact rationals.
pub fn tail_envelope_even_sq(n: u32) -> Rational {
    assert!(n >= 1);
    let m = if n % 2 == 0 { n } else { n - 1 };
    let total = rat(1, 4) * tail_corner(m) + tail_line(m) + rat(1, 2) * tail_strip(n, m);
    rat_int(144) * total
}

/// Certified upper bound on `|mass - S_N|`.
///
/// `corners · sqrt_upper(L2 · F(N)^2)`, with the parity-refined
/// envelope for ℝP²×ℝP² when it is smaller. Every candidate bounds the
/// absolute tail sum, and a bound taken at a smaller truncation order
/// covers a superset of the omitted modes, so the minimum over the
/// candidates at orders `N` and `N-1` is still certified; it also makes
/// the bound monotone in `N`.
pub fn error_bound(manifold: Manifold, n: u32) -> Rational {
    assert!(n >= 1);
    let l2 = box_source_l2_constant();
    let corners = rat_int(manifold.corner_count() as i64);
    let full = sqrt_upper(&(&l2 * tail_envelope_sq(n))).expect("nonnegative") * &corners;
    match manifold {
        Manifold::Rp2xRp2 => {
            let mut best = sqrt_upper(&(&l2 * tail_envelope_even_sq(n))).expect("nonnegative")
                * &corners;
            if n >= 2 {
                let prev = sqrt_upper(&(l2 * tail_envelope_even_sq(n - 1))).expect("nonnegative")
                    * corners;
                best = best.min(prev);
            }
            full.min(best)
        }
        _ => full,
    }
}

/// A certified mass enclosure at truncation order `N`.
#[derive(Debug, Clone)]
pub struct MassEstimate {
    pub manifold: Manifold,
    pub truncation: u32,
    pub digits: u32,
    /// Exact value of `S_N` as `a + b ln 2`.
    pub partial_sum: ExactValue,
    /// Certified bound on `|mass - S_N|`.
    pub error_bound: Rational,
    /// Enclosure of the mass: `S_N` evaluated to `digits` decimals,
    /// widened by the error bound.
    pub mass: RatInterval,
    /// Enclosure of `t0 = -1/(9m)`.
    pub t0: RatInterval,
    /// Enclosure of `2 t0 = -2/(9m)`.
    pub t0_double: RatInterval,
}

/// Assemble the certified enclosure for one manifold.
///
/// The partial-sum enclosure is evaluated with enough ln 2 precision
/// that its width is below `10^-digits` before the error bound is
/// added; `t0` intervals are exact monotone images of the mass
/// interval (requires a strictly positive mass interval, which holds
/// for every `N >= 1` here).
pub fn mass_estimate(manifold: Manifold, n: u32, digits: u32) -> Result<MassEstimate> {
    assert!(n >= 1, "mass estimates need N >= 1");
    assert!(digits >= 1);
    let partial = partial_sum(manifold, n);
    let bound = error_bound(manifold, n);
    let sum_enclosure = partial.enclosure(partial.enclosure_digits_for(digits));
    let mass = sum_enclosure.widen(&bound);
    let t0 = mass.neg_ninth_reciprocal()?;
    let t0_double = t0.scale(&rat_int(2));
    Ok(MassEstimate {
        manifold,
        truncation: n,
        digits,
        partial_sum: partial,
        error_bound: bound,
        mass,
        t0,
        t0_double,
    })
}

/// Outcome of an interval-disjointness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The intervals are disjoint: the two values are provably distinct.
    Proven,
    /// The intervals overlap: undecided at this truncation order.
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proven => write!(f, "distinct: proven"),
            Verdict::Undecided => write!(f, "undecided at this N"),
        }
    }
}

/// Disjointness of two certified intervals proves the enclosed values
/// are distinct; overlap leaves the question open.
pub fn check_distinct(left: &RatInterval, right: &RatInterval) -> Verdict {
    if left.is_disjoint_from(right) {
        Verdict::Proven
    } else {
        Verdict::Undecided
    }
}

/// One row of the distinct-critical-values table.
#[derive(Debug, Clone)]
pub struct DistinctnessRow {
    pub topology: &'static str,
    pub left_label: &'static str,
    pub right_label: &'static str,
    pub left: RatInterval,
    pub right: RatInterval,
    pub verdict: Verdict,
}

/// The six distinctness claims comparable from the three masses: each
/// glued manifold carries two candidate critical values, and disjoint
/// certified intervals prove them different.
pub fn distinctness_table(
    m1: &MassEstimate,
    m2: &MassEstimate,
    m3: &MassEstimate,
) -> Vec<DistinctnessRow> {
    let third = RatInterval::point(rat(-1, 3));
    let row = |topology, left_label, right_label, left: RatInterval, right: RatInterval| {
        let verdict = check_distinct(&left, &right);
        DistinctnessRow { topology, left_label, right_label, left, right, verdict }
    };
    vec![
        row("S2xS2 # CP2bar", "-1/3", "-(9 m1)^-1", third.clone(), m1.t0.clone()),
        row("G(2,4) # CP2bar", "-1/3", "-(9 m2)^-1", third.clone(), m2.t0.clone()),
        row(
            "G(2,4) # S2xS2",
            "-2(9 m1)^-1",
            "-2(9 m2)^-1",
            m1.t0_double.clone(),
            m2.t0_double.clone(),
        ),
        row(
            "G(2,4) # RP2xRP2",
            "-2(9 m3)^-1",
            "-2(9 m2)^-1",
            m3.t0_double.clone(),
            m2.t0_double.clone(),
        ),
        row("RP2xRP2 # CP2bar", "-1/3", "-(9 m3)^-1", third, m3.t0.clone()),
        row(
            "RP2xRP2 # S2xS2",
            "-2(9 m1)^-1",
            "-2(9 m3)^-1",
            m1.t0_double.clone(),
            m3.t0_double.clone(),
        ),
    ]
}

/// Floating-point partial sum, for diagnostics only.
///
/// The alternating structure multiplies binomial coefficients of size
/// ~4^j against near-cancelling moment values, so double precision
/// degrades quickly as `N` grows (visibly wrong well before `N = 30`).
/// Certified output never flows from this path.
pub fn partial_sum_f64(manifold: Manifold, n: u32) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    let alt = |p: u32| -> f64 {
        let mut a = 0.0;
        for i in 1..=p {
            a += if i % 2 == 1 { 1.0 } else { -1.0 } / i as f64;
        }
        a
    };
    let moment_f = |p: u32, q: u32| -> f64 {
        let pf = p as f64;
        let qf = q as f64;
        let half = |r: f64, a: f64| {
            let sign = if (r as u32) % 2 == 0 { 1.0 } else { -1.0 };
            4.0 * sign * (r + 1.0) * (r + 2.0) * (3.0 * r * r + 9.0 * r + 10.0) * (ln2 - a)
        };
        (-109.0 - 68.0 * (pf + qf) - 33.0 * (pf * pf + qf * qf)
            - 6.0 * (pf * pf * pf + qf * qf * qf)
            + half(pf, alt(p))
            + half(qf, alt(q)))
            / (18.0 * (pf + qf + 3.0))
    };
    let mut total = 0.0;
    for j in 0..=n {
        for k in 0..=n {
            let w = manifold.weight(j, k) as f64;
            if w == 0.0 {
                continue;
            }
            let mut mode = 0.0;
            let pj = shifted_legendre(j);
            let pk = shifted_legendre(k);
            for (p, cp) in pj.coeffs.iter().enumerate() {
                for (q, cq) in pk.coeffs.iter().enumerate() {
                    let c = bigint_to_f64(cp) * bigint_to_f64(cq);
                    mode += c * moment_f(p as u32, q as u32);
                }
            }
            total += (2 * j + 1) as f64 * (2 * k + 1) as f64 / eigenvalue(j, k) as f64 * w * mode;
        }
    }
    rational_to_f64(&manifold.constant_term()) - 12.0 * total
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
