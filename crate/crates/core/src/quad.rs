//! Adaptive two-dimensional quadrature over the unit square.
//!
//! Tensor-product Gauss-Legendre panels with dyadic subdivision; the
//! error indicator for a panel compares the one-panel rule against the
//! sum over its four children (a Richardson-style estimate). This is a
//! floating-point oracle for cross-checking the exact integrals; it is
//! never part of the certified path.

/// Result of an adaptive quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Failure to reach the tolerance within the panel budget.
#[derive(Debug, Clone, Copy)]
pub struct QuadFailure {
    pub best_value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

impl std::fmt::Display for QuadFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "quadrature did not converge: estimate {} with error {} after {} panels",
            self.best_value, self.error_estimate, self.panels
        )
    }
}

impl std::error::Error for QuadFailure {}

const GL_ORDER: usize = 12;
const MAX_PANELS: usize = 400_000;

/// Nodes and weights of the Gauss-Legendre rule on [-1, 1], computed by
/// Newton iteration on the Legendre polynomial.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let p_next = ((2 * k + 1) as f64 * x * p - k as f64 * p_prev) / (k + 1) as f64;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

struct Panel {
    x0: f64,
    y0: f64,
    size: f64,
    coarse: f64,
}

/// Adaptive estimate of `int_0^1 int_0^1 u dx dy` with estimated error
/// at most `tol`.
pub fn adaptive_quad_square<F>(u: F, tol: f64) -> Result<QuadResult, QuadFailure>
where
    F: Fn(f64, f64) -> f64,
{
    assert!(tol >= 1e-12, "tolerance below supported floor");
    let (nodes, weights) = gauss_legendre(GL_ORDER);

    let panel_rule = |x0: f64, y0: f64, size: f64| -> f64 {
        let half = size / 2.0;
        let mut acc = 0.0;
        for (xi, wi) in nodes.iter().zip(weights.iter()) {
            let x = x0 + half * (xi + 1.0);
            for (yj, wj) in nodes.iter().zip(weights.iter()) {
                let y = y0 + half * (yj + 1.0);
                acc += wi * wj * u(x, y);
            }
        }
        acc * half * half
    };

    let mut stack = vec![Panel {
        x0: 0.0,
        y0: 0.0,
        size: 1.0,
        coarse: panel_rule(0.0, 0.0, 1.0),
    }];
    let mut total = 0.0;
    let mut err_total = 0.0;
    let mut panels = 1usize;

    while let Some(p) = stack.pop() {
        let h = p.size / 2.0;
        let children = [
            (p.x0, p.y0),
            (p.x0 + h, p.y0),
            (p.x0, p.y0 + h),
            (p.x0 + h, p.y0 + h),
        ];
        let fine: Vec<f64> = children.iter().map(|&(x, y)| panel_rule(x, y, h)).collect();
        let fine_sum: f64 = fine.iter().sum();
        let err = (p.coarse - fine_sum).abs();
        panels += 4;

        // Area-proportional share of the global tolerance.
        let area = p.size * p.size;
        if err <= tol * area * 0.5 || p.size < 1e-9 {
            total += fine_sum;
            err_total += err;
        } else {
            if panels > MAX_PANELS {
                return Err(QuadFailure {
                    best_value: total + fine_sum,
                    error_estimate: err_total + err,
                    panels,
                });
            }
            for (&(x, y), &c) in children.iter().zip(fine.iter()) {
                stack.push(Panel { x0: x, y0: y, size: h, coarse: c });
            }
        }
    }

    Ok(QuadResult { value: total, error_estimate: err_total, panels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // x*y integrates to 1/4 and the rule is exact for it.
        let r = adaptive_quad_square(|x, y| x * y, 1e-10).unwrap();
        assert!((r.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn smooth_transcendental() {
        // int int e^(x+y) = (e - 1)^2
        let expect = (std::f64::consts::E - 1.0) * (std::f64::consts::E - 1.0);
        let r = adaptive_quad_square(|x, y| (x + y).exp(), 1e-10).unwrap();
        assert!((r.value - expect).abs() < 1e-9);
    }

    #[test]
    fn corner_singular_derivative() {
        // sqrt(x+y) is C^0 with unbounded derivatives at the origin;
        // int_0^1 int_0^1 sqrt(x+y) dx dy = (4/15)(2^(5/2) - 2).
        let expect = 4.0 / 15.0 * (2.0f64.powf(2.5) - 2.0);
        let r = adaptive_quad_square(|x, y| (x + y).sqrt(), 1e-9).unwrap();
        assert!((r.value - expect).abs() < 1e-7, "got {}", r.value);
    }
}
