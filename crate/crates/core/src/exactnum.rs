//! Exact arithmetic kernel.
//!
//! Three layers:
//!
//! * [`Rational`] — arbitrary-precision rationals (always reduced,
//!   positive denominator), backed by `num-rational`.
//! * [`ExactValue`] — numbers of the form `a + b·ln 2` with rational
//!   `a`, `b`. Since ln 2 is irrational the representation is unique,
//!   and the set is closed under addition, subtraction and rational
//!   scaling, which is all the series ever needs. Keeping ln 2 symbolic
//!   avoids the catastrophic cancellation that kills floating point
//!   here: the series multiplies binomial coefficients of size ~4^j
//!   against tiny `ln 2 - A(p)` differences.
//! * [`RatInterval`] — a closed interval with rational endpoints, the
//!   only bridge from exact values to decimal output. All interval
//!   operations produce enclosures.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::{Error, Result};

/// Arbitrary-precision rational, reduced, with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for a small rational constant.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for a small integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// 10^k as a positive big integer.
pub fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// A number `a + b·ln 2` with rational coefficients.
///
/// Equality is coefficient-wise, which coincides with equality of real
/// values because ln 2 is irrational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactValue {
    /// Rational part.
    pub a: Rational,
    /// Coefficient of ln 2.
    pub b: Rational,
}

impl ExactValue {
    pub fn new(a: Rational, b: Rational) -> Self {
        ExactValue { a, b }
    }

    pub fn zero() -> Self {
        ExactValue::new(Rational::zero(), Rational::zero())
    }

    pub fn from_rational(a: Rational) -> Self {
        ExactValue::new(a, Rational::zero())
    }

    /// `b·ln 2` with no rational part.
    pub fn ln2_times(b: Rational) -> Self {
        ExactValue::new(Rational::zero(), b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// True when the value lies in ℚ (no ln 2 component).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Scale by a rational factor.
    pub fn scale(&self, r: &Rational) -> Self {
        ExactValue::new(&self.a * r, &self.b * r)
    }

    /// Certified enclosure of the real value.
    ///
    /// The result contains `a + b·ln 2` and has width at most
    /// `|b|·10^-digits`; for `b = 0` it is the exact point `[a, a]`.
    pub fn enclosure(&self, digits: u32) -> RatInterval {
        if self.b.is_zero() {
            return RatInterval::point(self.a.clone());
        }
        let ln2 = ln2_enclosure(digits);
        let scaled = ln2.scale(&self.b);
        scaled.add_point(&self.a)
    }

    /// Decimal digits needed from ln 2 so that the enclosure of this
    /// value is narrower than `10^-target_digits`.
    pub fn enclosure_digits_for(&self, target_digits: u32) -> u32 {
        if self.b.is_zero() {
            return 1;
        }
        // |b| < 10^(numer digits - denom digits + 1)
        let extra = self.b.numer().to_string().trim_start_matches('-').len() as i64
            - self.b.denom().to_string().len() as i64
            + 1;
        target_digits + extra.max(0) as u32 + 1
    }
}

impl Add for ExactValue {
    type Output = ExactValue;
    fn add(self, rhs: ExactValue) -> ExactValue {
        ExactValue::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl<'a> Add<&'a ExactValue> for ExactValue {
    type Output = ExactValue;
    fn add(self, rhs: &ExactValue) -> ExactValue {
        ExactValue::new(self.a + &rhs.a, self.b + &rhs.b)
    }
}

impl AddAssign for ExactValue {
    fn add_assign(&mut self, rhs: ExactValue) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl Sub for ExactValue {
    type Output = ExactValue;
    fn sub(self, rhs: ExactValue) -> ExactValue {
        ExactValue::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl SubAssign for ExactValue {
    fn sub_assign(&mut self, rhs: ExactValue) {
        self.a -= rhs.a;
        self.b -= rhs.b;
    }
}

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue::new(-self.a, -self.b)
    }
}

impl Mul<&Rational> for &ExactValue {
    type Output = ExactValue;
    fn mul(self, r: &Rational) -> ExactValue {
        self.scale(r)
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.b.is_negative() {
            write!(f, "{} - ({})*ln2", self.a, -self.b.clone())
        } else {
            write!(f, "{} + ({})*ln2", self.a, self.b)
        }
    }
}

/// Exact sum of a list of values by balanced pairwise reduction.
///
/// The value is independent of association by exactness; the balanced
/// tree keeps intermediate denominators from growing linearly, which
/// matters when thousands of terms with distinct denominators are added.
pub fn sum_exact(mut values: Vec<ExactValue>) -> ExactValue {
    if values.is_empty() {
        return ExactValue::zero();
    }
    while values.len() > 1 {
        let mut next = Vec::with_capacity(values.len() / 2 + 1);
        let mut it = values.into_iter();
        while let Some(first) = it.next() {
            match it.next() {
                Some(second) => next.push(first + second),
                None => next.push(first),
            }
        }
        values = next;
    }
    values.pop().unwrap()
}

/// Closed interval `[lo, hi]` with rational endpoints, `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    /// Construct from endpoints; panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    /// Construct from endpoints in either order.
    pub fn from_endpoints(a: Rational, b: Rational) -> Self {
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn point(x: Rational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &RatInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn is_disjoint_from(&self, other: &RatInterval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// Translate by an exact point.
    pub fn add_point(&self, x: &Rational) -> RatInterval {
        RatInterval {
            lo: &self.lo + x,
            hi: &self.hi + x,
        }
    }

    /// Minkowski sum: encloses `a + b` for `a` here and `b` in `other`.
    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Scale by an exact rational; a negative factor swaps endpoints.
    pub fn scale(&self, r: &Rational) -> RatInterval {
        let a = &self.lo * r;
        let b = &self.hi * r;
        RatInterval::from_endpoints(a, b)
    }

    /// Symmetric widening by a nonnegative radius.
    pub fn widen(&self, radius: &Rational) -> RatInterval {
        debug_assert!(!radius.is_negative());
        RatInterval {
            lo: &self.lo - radius,
            hi: &self.hi + radius,
        }
    }

    /// Image under the strictly increasing map `m -> -1/(9m)`, defined
    /// for intervals strictly right of zero.
    pub fn neg_ninth_reciprocal(&self) -> Result<RatInterval> {
        if !self.lo.is_positive() {
            return Err(Error::NonPositiveMass);
        }
        let nine = rat_int(9);
        let lo = -(&nine * &self.lo).recip();
        let hi = -(&nine * &self.hi).recip();
        Ok(RatInterval::from_endpoints(lo, hi))
    }

    /// Decimal rendering `"lo .. hi"` with directed rounding outward, so
    /// the printed enclosure contains the interval.
    pub fn decimal_string(&self, places: u32) -> String {
        format!(
            "{} .. {}",
            decimal_lower(&self.lo, places),
            decimal_upper(&self.hi, places)
        )
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Decimal string of `r` rounded toward -infinity at `places` places.
pub fn decimal_lower(r: &Rational, places: u32) -> String {
    render_scaled(floor_scaled(r, places), places)
}

/// Decimal string of `r` rounded toward +infinity at `places` places.
pub fn decimal_upper(r: &Rational, places: u32) -> String {
    render_scaled(ceil_scaled(r, places), places)
}

fn floor_scaled(r: &Rational, places: u32) -> BigInt {
    let scaled = r * Rational::from_integer(pow10(places));
    scaled.numer().div_floor(scaled.denom())
}

fn ceil_scaled(r: &Rational, places: u32) -> BigInt {
    let scaled = r * Rational::from_integer(pow10(places));
    scaled.numer().div_ceil(scaled.denom())
}

fn render_scaled(n: BigInt, places: u32) -> String {
    let negative = n.sign() == Sign::Minus;
    let mag = n.magnitude().to_string();
    let p = places as usize;
    let digits = if mag.len() <= p {
        format!("{}{}", "0".repeat(p + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - p);
    let sign = if negative { "-" } else { "" };
    if p == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Rational enclosure of ln 2 of width at most `10^-decimal_digits`.
///
/// Uses `ln 2 = 2·atanh(1/3) = 2·Σ_{k>=0} 3^-(2k+1)/(2k+1)`: partial
/// sums are rational lower bounds, and consecutive terms shrink by more
/// than a factor 9, so the tail after the last included term is at most
/// `(1/9)·term/(1 - 1/9) = term/8`. Enclosures are nested in the digit
/// count because the tail bound shrinks monotonically.
pub fn ln2_enclosure(decimal_digits: u32) -> RatInterval {
    assert!(decimal_digits >= 1, "need at least one decimal digit");
    let tol = Rational::new(BigInt::one(), pow10(decimal_digits));
    let eight = rat_int(8);
    let nine = rat_int(9);

    let mut sum = Rational::zero();
    let mut power = rat(2, 3); // 2 / 3^(2k+1) at k = 0
    let mut k: u64 = 0;
    loop {
        let term = &power / rat_int(2 * k as i64 + 1);
        sum += &term;
        let tail_bound = &term / &eight;
        if tail_bound <= tol {
            return RatInterval::new(sum.clone(), sum + tail_bound);
        }
        power /= &nine;
        k += 1;
    }
}

/// Certified upper bound for the square root of a nonnegative rational.
///
/// Returns `s` with `s^2 >= r` and `s^2 <= r·(1 + 10^-6)^2`. The bound
/// is obtained from the integer square root of a scaled numerator with
/// ceiling, so `s^2 >= r` holds by construction; the scale 10^7 keeps
/// the relative slack at most 10^-7, well inside the contract.
pub fn sqrt_upper(r: &Rational) -> Result<Rational> {
    if r.is_negative() {
        return Err(Error::NegativeSqrt(r.to_string()));
    }
    if r.is_zero() {
        return Ok(Rational::zero());
    }
    let scale = pow10(7);
    let n = r.numer();
    let d = r.denom();
    // sqrt(n/d) = sqrt(n d) / d; floor-isqrt + 1 gives a strict upper
    // bound for sqrt(n d scale^2).
    let t = (n * d * &scale * &scale).sqrt();
    let s = Rational::new(t + BigInt::one(), d * scale);
    debug_assert!(&s * &s >= *r);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn ln2_enclosure_digit_one() {
        let i = ln2_enclosure(1);
        assert!(i.contains(&parse("6931/10000")));
        assert!(i.width() <= rat(1, 10));
    }

    #[test]
    fn ln2_enclosure_nine_digits() {
        // Independent oracle: sum the series to k = 12 by hand and add
        // the geometric tail bound (1/9)·(last term)/(1 - 1/9).
        let mut lo = Rational::zero();
        let mut last = Rational::zero();
        for k in 0..=12u32 {
            let term = rat(2, 1)
                / (rat_int(2 * k as i64 + 1) * Rational::from_integer(BigInt::from(3u32).pow(2 * k + 1)));
            lo += &term;
            last = term;
        }
        let oracle = RatInterval::new(lo.clone(), lo + last / rat_int(8));
        assert!(oracle.is_subset_of(&RatInterval::new(parse("69314718/100000000"), parse("69314719/100000000"))));

        let i = ln2_enclosure(9);
        assert!(i.width() <= Rational::new(BigInt::one(), pow10(9)));
        // Both are enclosures of the same number, so they intersect.
        assert!(!i.is_disjoint_from(&oracle));
        // And the specified window holds for the operation under test.
        assert!(i.is_subset_of(&RatInterval::new(parse("69314718/100000000"), parse("69314719/100000000"))));
    }

    #[test]
    fn ln2_enclosures_nest() {
        let mut prev = ln2_enclosure(1);
        for d in 2..40 {
            let cur = ln2_enclosure(d);
            assert!(cur.is_subset_of(&prev), "digit {d} enclosure not nested");
            prev = cur;
        }
    }

    #[test]
    fn enclosure_point_for_pure_rational() {
        let v = ExactValue::from_rational(rat(1, 2));
        let i = v.enclosure(3);
        assert_eq!(i, RatInterval::point(rat(1, 2)));
    }

    #[test]
    fn enclosure_of_ln2_unit() {
        let v = ExactValue::ln2_times(Rational::one());
        let i = v.enclosure(9);
        assert!(i.is_subset_of(&RatInterval::new(parse("6931471/10000000"), parse("6931472/10000000"))));
    }

    #[test]
    fn enclosure_of_first_partial_sum() {
        // S_1 = 4777/1260 - (208/45) ln 2 = 0.58738954...; the decimal
        // window below was computed from ln 2 = 0.693147180559945...
        let v = ExactValue::new(rat(4777, 1260), rat(-208, 45));
        let i = v.enclosure(12);
        assert!(i.is_subset_of(&RatInterval::new(parse("58738/100000"), parse("58739/100000"))));
        assert_eq!(i.decimal_string(4), "0.5873 .. 0.5874");
    }

    #[test]
    fn sqrt_upper_basics() {
        assert_eq!(sqrt_upper(&Rational::zero()).unwrap(), Rational::zero());
        let s = sqrt_upper(&rat_int(4)).unwrap();
        assert!(s >= rat_int(2));
        assert!(s <= parse("2000002/1000000"));
        assert!(sqrt_upper(&rat_int(-1)).is_err());
    }

    #[test]
    fn sqrt_upper_error_constant() {
        // True value sqrt(61547/45045) = 1.16890755...; the contract
        // window is [sqrt(r), sqrt(r)*(1+1e-6)^2].
        let r = rat(61547, 45045);
        let s = sqrt_upper(&r).unwrap();
        assert!(&s * &s >= r);
        let slack = parse("1000002000001/1000000000000");
        assert!(&s * &s <= r * slack);
        assert!(s > parse("1168907/1000000"));
        assert!(s < parse("1168910/1000000"));
    }

    #[test]
    fn decimal_string_directed() {
        let third = RatInterval::point(rat(1, 3));
        assert_eq!(third.decimal_string(4), "0.3333 .. 0.3334");
        let zero = RatInterval::point(Rational::zero());
        assert_eq!(zero.decimal_string(4), "0.0000 .. 0.0000");
        let neg = RatInterval::point(rat(-1, 3));
        assert_eq!(neg.decimal_string(4), "-0.3334 .. -0.3333");
        let tiny = RatInterval::point(rat(-1, 20000));
        assert_eq!(tiny.decimal_string(4), "-0.0001 .. 0.0000");
    }

    #[test]
    fn neg_ninth_reciprocal_orders_endpoints() {
        let m = RatInterval::new(rat(1, 2), rat(2, 3));
        let t = m.neg_ninth_reciprocal().unwrap();
        assert_eq!(t.lo(), &rat(-2, 9));
        assert_eq!(t.hi(), &rat(-1, 6));
        assert!(RatInterval::new(rat(-1, 2), rat(1, 2))
            .neg_ninth_reciprocal()
            .is_err());
    }
}
