//! Exact calculus of bivariate rational functions of the form
//! `p(x,y) / (x+y)^k`.
//!
//! This family is closed under partial differentiation, multiplication
//! by polynomials, and the conformal Laplacian in the coordinates
//! `x = (1-cos r1)/2`, `y = (1-cos r2)/2`:
//!
//! ```text
//! box(u) = -6 { x(1-x) u_xx + (1-2x) u_x + y(1-y) u_yy + (1-2y) u_y } + 4 u ,
//! ```
//!
//! and it covers every function the mass computation manipulates,
//! so no general rational-function field is needed. Values are
//! canonicalized after every operation: all `(x+y)` factors common to
//! numerator and denominator are cancelled, making structural equality
//! coincide with functional equality.

use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

use crate::exactnum::{rat, rat_int, Rational};
use crate::{Error, Result};

/// Sparse bivariate polynomial with rational coefficients, keyed by
/// `(x-degree, y-degree)`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn one() -> Self {
        BiPoly::constant(rat_int(1))
    }

    /// Single monomial `c x^i y^j`.
    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in other.terms.iter() {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in self.terms.iter() {
            for (&(i2, j2), c2) in other.terms.iter() {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> BiPoly {
        if r.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, c * r)).collect(),
        }
    }

    pub fn d_dx(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in self.terms.iter() {
            if i > 0 {
                out.add_term(i - 1, j, c * rat_int(i as i64));
            }
        }
        out
    }

    pub fn d_dy(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in self.terms.iter() {
            if j > 0 {
                out.add_term(i, j - 1, c * rat_int(j as i64));
            }
        }
        out
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in self.terms.iter() {
            acc += c * pow_rat(x, i) * pow_rat(y, j);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (&(i, j), c) in self.terms.iter() {
            acc += rational_to_f64(c) * x.powi(i as i32) * y.powi(j as i32);
        }
        acc
    }

    /// Divide by `(x + y)` treating the polynomial as univariate in `x`
    /// with coefficients in Q[y] (synthetic division at `x = -y`).
    /// Returns `(quotient, remainder)` with the remainder a polynomial
    /// in `y` alone.
    pub fn div_rem_x_plus_y(&self) -> (BiPoly, BiPoly) {
        if self.is_zero() {
            return (BiPoly::zero(), BiPoly::zero());
        }
        let deg_x = self.terms.keys().map(|&(i, _)| i).max().unwrap();
        // a[i] : coefficient of x^i, as a polynomial in y.
        let mut a: Vec<BTreeMap<u32, Rational>> = vec![BTreeMap::new(); deg_x as usize + 1];
        for (&(i, j), c) in self.terms.iter() {
            a[i as usize].insert(j, c.clone());
        }
        let shift_mul_y = |m: &BTreeMap<u32, Rational>| -> BTreeMap<u32, Rational> {
            m.iter().map(|(&j, c)| (j + 1, c.clone())).collect()
        };
        let sub_maps = |lhs: &BTreeMap<u32, Rational>, rhs: &BTreeMap<u32, Rational>| {
            let mut out = lhs.clone();
            for (&j, c) in rhs {
                let e = out.entry(j).or_insert_with(Rational::zero);
                *e -= c;
                if e.is_zero() {
                    out.remove(&j);
                }
            }
            out
        };
        if deg_x == 0 {
            let rem = BiPoly {
                terms: a[0].iter().map(|(&j, c)| ((0, j), c.clone())).collect(),
            };
            return (BiPoly::zero(), rem);
        }
        let mut b: Vec<BTreeMap<u32, Rational>> = vec![BTreeMap::new(); deg_x as usize];
        b[deg_x as usize - 1] = a[deg_x as usize].clone();
        for i in (1..deg_x as usize).rev() {
            b[i - 1] = sub_maps(&a[i], &shift_mul_y(&b[i]));
        }
        let rem_map = sub_maps(&a[0], &shift_mul_y(&b[0]));

        let mut quot = BiPoly::zero();
        for (i, m) in b.iter().enumerate() {
            for (&j, c) in m {
                quot.add_term(i as u32, j, c.clone());
            }
        }
        let rem = BiPoly {
            terms: rem_map.iter().map(|(&j, c)| ((0, j), c.clone())).collect(),
        };
        (quot, rem)
    }
}

fn pow_rat(x: &Rational, n: u32) -> Rational {
    let mut acc = rat_int(1);
    for _ in 0..n {
        acc *= x;
    }
    acc
}

fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, "*x^{i}")?;
            }
            if j > 0 {
                write!(f, "*y^{j}")?;
            }
        }
        Ok(())
    }
}

/// Rational function `num / (x+y)^k` in canonical form: whenever
/// `k > 0`, the numerator is not divisible by `(x+y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XYRational {
    num: BiPoly,
    k: u32,
}

impl XYRational {
    /// Build `num / (x+y)^k` and canonicalize.
    pub fn new(num: BiPoly, k: u32) -> Self {
        let mut out = XYRational { num, k };
        out.canonicalize();
        out
    }

    pub fn zero() -> Self {
        XYRational { num: BiPoly::zero(), k: 0 }
    }

    pub fn from_poly(p: BiPoly) -> Self {
        XYRational { num: p, k: 0 }
    }

    pub fn constant(c: Rational) -> Self {
        XYRational::from_poly(BiPoly::constant(c))
    }

    pub fn num(&self) -> &BiPoly {
        &self.num
    }

    pub fn den_power(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            let (q, r) = self.num.div_rem_x_plus_y();
            if r.is_zero() {
                self.num = q;
                self.k -= 1;
            } else {
                break;
            }
        }
    }

    pub fn add(&self, other: &XYRational) -> XYRational {
        let k = self.k.max(other.k);
        let lhs = raise_num(&self.num, k - self.k);
        let rhs = raise_num(&other.num, k - other.k);
        XYRational::new(lhs.add(&rhs), k)
    }

    pub fn sub(&self, other: &XYRational) -> XYRational {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> XYRational {
        XYRational { num: self.num.neg(), k: self.k }
    }

    pub fn scale(&self, r: &Rational) -> XYRational {
        if r.is_zero() {
            return XYRational::zero();
        }
        XYRational { num: self.num.scale(r), k: self.k }
    }

    pub fn mul_poly(&self, p: &BiPoly) -> XYRational {
        XYRational::new(self.num.mul(p), self.k)
    }

    pub fn mul(&self, other: &XYRational) -> XYRational {
        XYRational::new(self.num.mul(&other.num), self.k + other.k)
    }

    /// Exact partial derivative in `x` via the quotient rule
    /// `d/dx [p/(x+y)^k] = (p_x (x+y) - k p) / (x+y)^(k+1)`.
    pub fn d_dx(&self) -> XYRational {
        if self.k == 0 {
            return XYRational::from_poly(self.num.d_dx());
        }
        let px = self.num.d_dx();
        let num = px.mul(&x_plus_y()).sub(&self.num.scale(&rat_int(self.k as i64)));
        XYRational::new(num, self.k + 1)
    }

    /// Exact partial derivative in `y`.
    pub fn d_dy(&self) -> XYRational {
        if self.k == 0 {
            return XYRational::from_poly(self.num.d_dy());
        }
        let py = self.num.d_dy();
        let num = py.mul(&x_plus_y()).sub(&self.num.scale(&rat_int(self.k as i64)));
        XYRational::new(num, self.k + 1)
    }

    /// Exact evaluation. Fails when `x + y = 0` with a positive
    /// denominator power (for nonnegative coordinates that is exactly
    /// the origin, the pole of the Green's function model).
    pub fn evaluate(&self, x: &Rational, y: &Rational) -> Result<Rational> {
        let num = self.num.eval(x, y);
        if self.k == 0 {
            return Ok(num);
        }
        let s = x + y;
        if s.is_zero() {
            return Err(Error::PoleEvaluation(self.k));
        }
        Ok(num / pow_rat(&s, self.k))
    }

    /// Floating-point evaluation for diagnostics and the quadrature
    /// oracle; never used in the certified path.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let num = self.num.eval_f64(x, y);
        if self.k == 0 {
            return num;
        }
        num / (x + y).powi(self.k as i32)
    }
}

fn x_plus_y() -> BiPoly {
    let mut p = BiPoly::zero();
    p.add_term(1, 0, rat_int(1));
    p.add_term(0, 1, rat_int(1));
    p
}

fn raise_num(num: &BiPoly, extra: u32) -> BiPoly {
    let mut out = num.clone();
    for _ in 0..extra {
        out = out.mul(&x_plus_y());
    }
    out
}

impl fmt::Display for XYRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / (x+y)^{}", self.num, self.k)
        }
    }
}

/// The conformal Laplacian on the unit square in `(x, y)` coordinates.
pub fn conformal_laplacian(u: &XYRational) -> XYRational {
    let ux = u.d_dx();
    let uxx = ux.d_dx();
    let uy = u.d_dy();
    let uyy = uy.d_dy();

    // x(1-x) = x - x^2, 1-2x, and the y-counterparts.
    let mut x_one_minus_x = BiPoly::zero();
    x_one_minus_x.add_term(1, 0, rat_int(1));
    x_one_minus_x.add_term(2, 0, rat_int(-1));
    let mut one_minus_2x = BiPoly::zero();
    one_minus_2x.add_term(0, 0, rat_int(1));
    one_minus_2x.add_term(1, 0, rat_int(-2));
    let mut y_one_minus_y = BiPoly::zero();
    y_one_minus_y.add_term(0, 1, rat_int(1));
    y_one_minus_y.add_term(0, 2, rat_int(-1));
    let mut one_minus_2y = BiPoly::zero();
    one_minus_2y.add_term(0, 0, rat_int(1));
    one_minus_2y.add_term(0, 1, rat_int(-2));

    let second_order = uxx
        .mul_poly(&x_one_minus_x)
        .add(&ux.mul_poly(&one_minus_2x))
        .add(&uyy.mul_poly(&y_one_minus_y))
        .add(&uy.mul_poly(&one_minus_2y));
    second_order.scale(&rat_int(-6)).add(&u.scale(&rat_int(4)))
}

/// The singular model of the Green's function near its pole:
/// `1/(4(x+y)) + xy/(6(x+y)^2) + x^2 y^2 / (9(x+y)^3)`.
pub fn green_singular_part() -> XYRational {
    let t1 = XYRational::new(BiPoly::constant(rat(1, 4)), 1);
    let t2 = XYRational::new(BiPoly::monomial(1, 1, rat(1, 6)), 2);
    let t3 = XYRational::new(BiPoly::monomial(2, 2, rat(1, 9)), 3);
    t1.add(&t2).add(&t3)
}

/// The source term `8 x^2 y^2 (5x^2 - 8xy + 5y^2) / (9 (x+y)^5)`,
/// which equals the conformal Laplacian of [`green_singular_part`].
pub fn source_term() -> XYRational {
    let mut num = BiPoly::zero();
    num.add_term(4, 2, rat(40, 9));
    num.add_term(3, 3, rat(-64, 9));
    num.add_term(2, 4, rat(40, 9));
    XYRational::new(num, 5)
}

/// `P_j(1-2x) * P_k(1-2y)` as a polynomial element of the family.
pub fn legendre_mode(j: u32, k: u32) -> XYRational {
    let pj = crate::basis::shifted_legendre(j);
    let pk = crate::basis::shifted_legendre(k);
    let mut poly = BiPoly::zero();
    for (p, cp) in pj.coeffs.iter().enumerate() {
        for (q, cq) in pk.coeffs.iter().enumerate() {
            poly.add_term(
                p as u32,
                q as u32,
                Rational::from_integer(cp * cq),
            );
        }
    }
    XYRational::from_poly(poly)
}
