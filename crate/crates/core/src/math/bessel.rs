/// Spherical Bessel function of the first kind `j_l(x)` for `x ≥ 0`.
///
/// Uses the power series for small arguments, upward recurrence when `x > l`
/// and Miller's downward recurrence normalized against `j_0` otherwise.
pub fn sph_bessel(l: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    if x * x < 0.1 * (2 * l + 3) as f64 {
        return series(l, x);
    }
    let j0 = x.sin() / x;
    if l == 0 {
        return j0;
    }
    let j1 = x.sin() / (x * x) - x.cos() / x;
    if x > l as f64 {
        let (mut a, mut b) = (j0, j1);
        for k in 1..l {
            let next = (2 * k + 1) as f64 / x * b - a;
            a = b;
            b = next;
        }
        return b;
    }
    downward(l, x, j0, j1)
}

fn series(l: usize, x: f64) -> f64 {
    // x^l / (2l+1)!! Σ_k (-x²/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    let mut lead = 1.0;
    for k in 1..=l {
        lead *= x / (2 * k + 1) as f64;
    }
    let y = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= y / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn downward(l: usize, x: f64, j0: f64, j1: f64) -> f64 {
    let start = l + 20 + (40.0 * (l as f64).max(x)).sqrt() as usize;
    let mut above = 0.0;
    let mut cur = 1e-300;
    let mut at_l = 0.0;
    let mut at_0 = 0.0;
    let mut at_1 = 0.0;
    for k in (1..=start).rev() {
        let below = (2 * k + 1) as f64 / x * cur - above;
        above = cur;
        cur = below;
        // cur now holds the unnormalized j_{k-1}
        if k - 1 == l {
            at_l = cur;
        }
        if k == 2 {
            at_1 = cur;
        }
        if k == 1 {
            at_0 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            at_l *= 1e-250;
            at_1 *= 1e-250;
        }
    }
    if l == 1 {
        at_l = at_1;
    }
    if j0.abs() >= j1.abs() {
        at_l * j0 / at_0
    } else {
        at_l * j1 / at_1
    }
}
