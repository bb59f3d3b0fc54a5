use crate::error::{Error, Result};

const MAX_REFINE_ITERATIONS: usize = 200;

/// Generalized Laguerre polynomial `L_n^alpha(x)` by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    laguerre_pair(n, alpha, x).0
}

/// Returns `(L_n^alpha(x), L_{n-1}^alpha(x))`, with `L_{-1} = 0`.
fn laguerre_pair(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `L_n^{1/2}(x)`.
pub fn laguerre_half(n: usize, x: f64) -> f64 {
    laguerre(n, 0.5, x)
}

/// Derivative of `L_n^{1/2}` from `x L_n' = n L_n - (n + 1/2) L_{n-1}`.
///
/// Valid for `x != 0`; at the origin the closed form `-L_{n-1}^{3/2}(0)` is used.
pub fn laguerre_half_derivative(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if x == 0.0 {
        return -laguerre(n - 1, 1.5, 0.0);
    }
    let (ln, lnm1) = laguerre_pair(n, 0.5, x);
    (n as f64 * ln - (n as f64 + 0.5) * lnm1) / x
}

/// Roots of `L_n^{1/2}` in ascending order.
///
/// Roots of consecutive degrees interlace, so the roots of degree `n - 1`
/// bracket those of degree `n`. Each bracket is refined by Newton steps that
/// fall back to bisection whenever a step leaves the bracket.
pub fn laguerre_roots(n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > 32 {
        return Err(Error::InvalidArgument(format!(
            "Laguerre root order must lie in 1..=32, got {n}"
        )));
    }
    let mut roots: Vec<f64> = Vec::new();
    for degree in 1..=n {
        // Largest zero of L_n^a is below 2n + a + 1 + sqrt((2n + a + 1)^2 + 1/4 - a^2),
        // which for a = 1/2 is 2(2n + 3/2).
        let upper = 2.0 * (2.0 * degree as f64 + 1.5) + 1.0;
        let mut edges = Vec::with_capacity(degree + 1);
        edges.push(0.0);
        edges.extend_from_slice(&roots);
        edges.push(upper);
        let mut next = Vec::with_capacity(degree);
        for w in edges.windows(2) {
            next.push(refine_root(degree, w[0], w[1])?);
        }
        roots = next;
    }
    Ok(roots)
}

fn refine_root(degree: usize, lo: f64, hi: f64) -> Result<f64> {
    let f = |x: f64| laguerre_half(degree, x);
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::RootFinding {
            degree,
            iterations: 0,
        });
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..MAX_REFINE_ITERATIONS {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let d = laguerre_half_derivative(degree, x);
        let newton = x - fx / d;
        let candidate = if d != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (candidate - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) || b - a <= 4.0 * f64::EPSILON * b {
            return Ok(candidate);
        }
        x = candidate;
    }
    Err(Error::RootFinding {
        degree,
        iterations: MAX_REFINE_ITERATIONS,
    })
}
