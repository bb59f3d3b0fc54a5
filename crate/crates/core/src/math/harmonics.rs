//! Real orthonormal spherical harmonics.
//!
//! Convention: `Y_l^0 = P̄_l^0(cos θ)`, `Y_l^m = √2 P̄_l^m(cos θ) cos(mφ)` and
//! `Y_l^{-m} = √2 P̄_l^m(cos θ) sin(mφ)` for `m > 0`, where `P̄_l^m` is the
//! unit-sphere normalized associated Legendre function *without* the
//! Condon-Shortley phase. Every module uses this convention.

use std::f64::consts::{PI, SQRT_2};

/// Normalized associated Legendre values `P̄_l^m(cos θ)` for `0 ≤ m ≤ l ≤ lmax`.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    lmax: usize,
    values: Vec<f64>,
}

impl LegendreTable {
    #[inline]
    pub fn get(&self, l: usize, m: usize) -> f64 {
        debug_assert!(m <= l && l <= self.lmax);
        self.values[l * (l + 1) / 2 + m]
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }
}

/// Tabulates `P̄_l^m(cos θ)` with the diagonal recurrence for `P̄_m^m`
/// followed by the normalized forward recurrence in `l` for each column.
pub fn legendre_table(lmax: usize, theta: f64) -> LegendreTable {
    let (s, c) = theta.sin_cos();
    let mut values = vec![0.0; (lmax + 1) * (lmax + 2) / 2];
    let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=lmax {
        if m > 0 {
            let mf = m as f64;
            pmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
        }
        values[idx(m, m)] = pmm;
        if m == lmax {
            break;
        }
        let mut p_lm2 = pmm;
        let mut p_lm1 = (2.0 * m as f64 + 3.0).sqrt() * c * pmm;
        values[idx(m + 1, m)] = p_lm1;
        for l in (m + 2)..=lmax {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            let p = a * (c * p_lm1 - b * p_lm2);
            values[idx(l, m)] = p;
            p_lm2 = p_lm1;
            p_lm1 = p;
        }
    }
    LegendreTable { lmax, values }
}

/// Real spherical harmonic `Y_l^m(θ, φ)`.
pub fn real_sph_harm(l: usize, m: i64, theta: f64, phi: f64) -> f64 {
    let am = m.unsigned_abs() as usize;
    assert!(am <= l, "|m| must not exceed l");
    let p = legendre_table(l, theta).get(l, am);
    match m {
        0 => p,
        m if m > 0 => SQRT_2 * p * (m as f64 * phi).cos(),
        m => SQRT_2 * p * ((-m) as f64 * phi).sin(),
    }
}

/// Index of `(l, m)` among even degrees ordered by `l`, then `m = -l..=l`.
#[inline]
pub fn even_index(l: usize, m: i64) -> usize {
    debug_assert!(l % 2 == 0 && m.unsigned_abs() as usize <= l);
    ((l * (l + 1) / 2) as i64 + m) as usize
}

/// Number of even-degree coefficients with `l < band_limit`.
#[inline]
pub fn even_len(band_limit: usize) -> usize {
    if band_limit == 0 {
        return 0;
    }
    let top = (band_limit - 1) & !1;
    (top + 1) * (top + 2) / 2
}

/// Evaluates all even-degree real harmonics with `l < band_limit` at a direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenHarmonics {
    band_limit: usize,
}

impl EvenHarmonics {
    pub fn new(band_limit: usize) -> Self {
        Self { band_limit }
    }

    pub fn len(&self) -> usize {
        even_len(self.band_limit)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn eval_into(&self, theta: f64, phi: f64, out: &mut [f64]) {
        if self.band_limit == 0 {
            return;
        }
        let lmax = (self.band_limit - 1) & !1;
        let table = legendre_table(lmax, theta);
        let mut cs = Vec::with_capacity(lmax + 1);
        for m in 0..=lmax {
            cs.push((m as f64 * phi).sin_cos());
        }
        for l in (0..=lmax).step_by(2) {
            let base = l * (l + 1) / 2;
            out[base] = table.get(l, 0);
            for m in 1..=l {
                let p = SQRT_2 * table.get(l, m);
                let (s, c) = cs[m];
                out[base + m] = p * c;
                out[base - m] = p * s;
            }
        }
    }

    pub fn eval(&self, theta: f64, phi: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.eval_into(theta, phi, &mut out);
        out
    }
}

/// All `(l, m)` pairs of even degree below `band_limit`, in coefficient order.
pub fn even_degrees(band_limit: usize) -> impl Iterator<Item = (usize, i64)> {
    (0..band_limit)
        .step_by(2)
        .flat_map(|l| (-(l as i64)..=l as i64).map(move |m| (l, m)))
}
