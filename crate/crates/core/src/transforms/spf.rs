use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::sht::RingPeelingSht;
use crate::error::{Error, Result};
use crate::math::{even_degrees, even_index, even_len, radial_functions, to_spherical, EvenHarmonics};
use crate::sampling::MultiShellScheme;

/// Spherical polar Fourier coefficients `(E)_nlm` for `n < N` and even `l < L`.
///
/// Stored densely with index `n · even_len(L) + even_index(l, m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpfCoefficients {
    radial_order: usize,
    band_limit: usize,
    zeta: f64,
    values: Vec<f64>,
}

impl SpfCoefficients {
    pub fn zeros(radial_order: usize, band_limit: usize, zeta: f64) -> Self {
        Self {
            radial_order,
            band_limit,
            zeta,
            values: vec![0.0; radial_order * even_len(band_limit)],
        }
    }

    pub fn from_values(radial_order: usize, band_limit: usize, zeta: f64, values: Vec<f64>) -> Result<Self> {
        let expected = radial_order * even_len(band_limit);
        if values.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(Self {
            radial_order,
            band_limit,
            zeta,
            values,
        })
    }

    pub fn radial_order(&self) -> usize {
        self.radial_order
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn angular_len(&self) -> usize {
        even_len(self.band_limit)
    }

    #[inline]
    pub fn index(&self, n: usize, l: usize, m: i64) -> usize {
        n * even_len(self.band_limit) + even_index(l, m)
    }

    pub fn get(&self, n: usize, l: usize, m: i64) -> f64 {
        self.values[self.index(n, l, m)]
    }

    pub fn set(&mut self, n: usize, l: usize, m: i64, value: f64) {
        let i = self.index(n, l, m);
        self.values[i] = value;
    }

    /// Angular coefficients of radial order `n`.
    pub fn radial_slice(&self, n: usize) -> &[f64] {
        let len = even_len(self.band_limit);
        &self.values[n * len..(n + 1) * len]
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Coefficient dump with columns `n,l,m,value`, values at full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,l,m,value\n");
        for n in 0..self.radial_order {
            for (l, m) in even_degrees(self.band_limit) {
                let _ = writeln!(out, "{n},{l},{m},{:?}", self.get(n, l, m));
            }
        }
        out
    }

    /// Parses a coefficient dump; missing entries are zero.
    pub fn from_csv(text: &str, radial_order: usize, band_limit: usize, zeta: f64) -> Result<Self> {
        let mut c = Self::zeros(radial_order, band_limit, zeta);
        for (i, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let parse_err = || Error::InvalidArgument(format!("malformed coefficient row {}: {line}", i + 1));
            if fields.len() != 4 {
                return Err(parse_err());
            }
            let n: usize = fields[0].trim().parse().map_err(|_| parse_err())?;
            let l: usize = fields[1].trim().parse().map_err(|_| parse_err())?;
            let m: i64 = fields[2].trim().parse().map_err(|_| parse_err())?;
            let v: f64 = fields[3].trim().parse().map_err(|_| parse_err())?;
            if n >= radial_order || l >= band_limit || l % 2 == 1 || m.unsigned_abs() as usize > l {
                return Err(parse_err());
            }
            c.set(n, l, m, v);
        }
        Ok(c)
    }
}

/// Precomputed separable forward transform for one quadrature scheme.
#[derive(Debug, Clone)]
pub struct SpfTransform {
    zeta: f64,
    band_limit: usize,
    shells: Vec<(RingPeelingSht, f64, Vec<f64>)>,
}

impl SpfTransform {
    pub fn new(scheme: &MultiShellScheme) -> Result<Self> {
        let n = scheme.radial_order();
        let mut plans: Vec<(usize, RingPeelingSht)> = Vec::new();
        let mut shells = Vec::with_capacity(n);
        for shell in &scheme.shells {
            let l = shell.grid.band_limit();
            let plan = match plans.iter().find(|(b, _)| *b == l) {
                Some((_, p)) => p.clone(),
                None => {
                    let p = RingPeelingSht::new(&shell.grid)?;
                    plans.push((l, p.clone()));
                    p
                }
            };
            let mut radial = vec![0.0; n];
            radial_functions(shell.q_radius, scheme.zeta, &mut radial);
            shells.push((plan, shell.weight, radial));
        }
        Ok(Self {
            zeta: scheme.zeta,
            band_limit: scheme.max_band_limit(),
            shells,
        })
    }

    /// `(E)_nlm = Σ_i w_i R_n(q_i) a_lm^{(i)}`, where `a^{(i)}` is the SHT of
    /// shell `i` and vanishes above that shell's band-limit.
    pub fn forward(&self, samples: &[Vec<f64>]) -> Result<SpfCoefficients> {
        if samples.len() != self.shells.len() {
            return Err(Error::ShapeMismatch {
                expected: self.shells.len(),
                found: samples.len(),
            });
        }
        let n_order = self.shells.len();
        let mut out = SpfCoefficients::zeros(n_order, self.band_limit, self.zeta);
        let stride = even_len(self.band_limit);
        for ((plan, weight, radial), s) in self.shells.iter().zip(samples) {
            let a = plan.forward(s)?;
            for (n, r) in radial.iter().enumerate() {
                let f = weight * r;
                let dst = &mut out.values[n * stride..n * stride + a.values().len()];
                for (d, v) in dst.iter_mut().zip(a.values()) {
                    *d += f * v;
                }
            }
        }
        Ok(out)
    }
}

/// One-shot forward transform; see [`SpfTransform::forward`].
pub fn spf_forward(scheme: &MultiShellScheme, samples: &[Vec<f64>]) -> Result<SpfCoefficients> {
    SpfTransform::new(scheme)?.forward(samples)
}

/// Evaluates `E(q) = Σ (E)_nlm R_n(|q|) Y_lm(q̂)` at q-space points.
pub fn spf_synthesize(coeffs: &SpfCoefficients, points: &[[f64; 3]]) -> Vec<f64> {
    let mut synth = SpfSynthesizer::new(coeffs);
    points.iter().map(|p| synth.eval(p)).collect()
}

/// Reusable pointwise evaluator of an SPF expansion.
pub struct SpfSynthesizer<'a> {
    coeffs: &'a SpfCoefficients,
    basis: EvenHarmonics,
    radial: Vec<f64>,
    angular: Vec<f64>,
}

impl<'a> SpfSynthesizer<'a> {
    pub fn new(coeffs: &'a SpfCoefficients) -> Self {
        let basis = EvenHarmonics::new(coeffs.band_limit);
        Self {
            coeffs,
            radial: vec![0.0; coeffs.radial_order],
            angular: vec![0.0; basis.len()],
            basis,
        }
    }

    /// Value at the q-space point `q` (radius `|q|`, direction `q/|q|`).
    pub fn eval(&mut self, q: &[f64; 3]) -> f64 {
        let radius = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
        let (theta, phi) = to_spherical(q);
        self.eval_polar(radius, theta, phi)
    }

    pub fn eval_polar(&mut self, radius: f64, theta: f64, phi: f64) -> f64 {
        radial_functions(radius, self.coeffs.zeta, &mut self.radial);
        self.basis.eval_into(theta, phi, &mut self.angular);
        let len = self.angular.len();
        let mut total = 0.0;
        for (n, r) in self.radial.iter().enumerate() {
            let slice = &self.coeffs.values[n * len..(n + 1) * len];
            let dot: f64 = slice.iter().zip(&self.angular).map(|(c, y)| c * y).sum();
            total += r * dot;
        }
        total
    }
}
