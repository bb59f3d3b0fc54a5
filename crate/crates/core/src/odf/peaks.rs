use std::collections::VecDeque;
use std::fmt::Write as _;

use super::icosphere::Icosphere;
use crate::math::dot;

/// A real function on the unit sphere.
pub trait SphericalFunction {
    fn value(&self, direction: &[f64; 3]) -> f64;
}

impl<F: Fn(&[f64; 3]) -> f64> SphericalFunction for F {
    fn value(&self, direction: &[f64; 3]) -> f64 {
        self(direction)
    }
}

/// A detected maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub vertex: usize,
    pub direction: [f64; 3],
    pub value: f64,
}

/// Discrete maxima of a function over the icosphere vertices.
///
/// A vertex (or a connected plateau of equal values, represented by its
/// smallest vertex index) is a peak when every neighbor outside it is strictly
/// lower and its value is at least `rel_threshold` times the global maximum.
/// Antipodal duplicates are dropped and peaks are returned by descending
/// value. A constant function therefore yields a single peak.
pub fn find_peaks(f: &impl SphericalFunction, sphere: &Icosphere, rel_threshold: f64) -> Vec<Peak> {
    let values: Vec<f64> = sphere.vertices().iter().map(|v| f.value(v)).collect();
    find_peaks_in_values(&values, sphere, rel_threshold)
}

/// [`find_peaks`] on precomputed vertex values.
pub fn find_peaks_in_values(values: &[f64], sphere: &Icosphere, rel_threshold: f64) -> Vec<Peak> {
    assert_eq!(values.len(), sphere.len(), "one value per vertex");
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Vec::new();
    }
    let tol = 1e-12 * max.abs();
    let threshold = rel_threshold * max;
    let mut visited = vec![false; values.len()];
    let mut peaks = Vec::new();
    for start in 0..values.len() {
        if visited[start] {
            continue;
        }
        let v = values[start];
        if sphere.neighbors(start).iter().any(|&j| values[j] > v + tol) {
            continue;
        }
        // Flood the plateau of values equal to v.
        let mut plateau = vec![start];
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        let mut is_max = true;
        while let Some(i) = queue.pop_front() {
            for &j in sphere.neighbors(i) {
                if (values[j] - v).abs() <= tol {
                    if !visited[j] {
                        visited[j] = true;
                        plateau.push(j);
                        queue.push_back(j);
                    }
                } else if values[j] > v {
                    is_max = false;
                }
            }
        }
        if is_max && v >= threshold {
            let vertex = *plateau.iter().min().expect("nonempty plateau");
            let peak = Peak {
                vertex,
                direction: sphere.vertices()[vertex],
                value: v,
            };
            peaks.push((peak, plateau));
        }
    }
    peaks.sort_by(|a, b| b.0.value.total_cmp(&a.0.value).then(a.0.vertex.cmp(&b.0.vertex)));
    // Two plateaus are antipodal duplicates when any of their vertices are antipodes;
    // comparing representatives alone misses mirrored multi-vertex plateaus.
    let antipodal = |a: &[usize], b: &[usize]| {
        a.iter().any(|&i| {
            b.iter().any(|&j| dot(&sphere.vertices()[i], &sphere.vertices()[j]) < -1.0 + 1e-9)
        })
    };
    let mut kept: Vec<(Peak, Vec<usize>)> = Vec::new();
    for (peak, plateau) in peaks {
        if !kept.iter().any(|(_, k)| antipodal(k, &plateau)) {
            kept.push((peak, plateau));
        }
    }
    kept.into_iter().map(|(peak, _)| peak).collect()
}

/// Angle in degrees between two axes, ignoring orientation sign.
pub fn axis_angle_deg(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    let nu = dot(u, u).sqrt();
    let nv = dot(v, v).sqrt();
    let c = (dot(u, v) / (nu * nv)).abs().min(1.0);
    c.acos().to_degrees()
}

/// Outcome of matching detected peaks to true fiber axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularError {
    /// Mean antipodal-aware angle over matched pairs (NaN if nothing matched).
    pub mean_deg: f64,
    pub detected_count: usize,
}

/// Optimal one-to-one matching of `min(|detected|, |truth|)` pairs that
/// minimizes the total antipodal-aware angle; reports the mean matched angle
/// and the number of detected directions.
pub fn angular_error(detected: &[[f64; 3]], truth: &[[f64; 3]]) -> AngularError {
    let pairs = detected.len().min(truth.len());
    if pairs == 0 {
        return AngularError {
            mean_deg: f64::NAN,
            detected_count: detected.len(),
        };
    }
    let cost: Vec<Vec<f64>> = detected
        .iter()
        .map(|d| truth.iter().map(|t| axis_angle_deg(d, t)).collect())
        .collect();
    // Assign the smaller side into the larger one by exhaustive search.
    let (rows, cols, transpose) = if detected.len() <= truth.len() {
        (detected.len(), truth.len(), false)
    } else {
        (truth.len(), detected.len(), true)
    };
    let at = |r: usize, c: usize| if transpose { cost[c][r] } else { cost[r][c] };
    let mut best = f64::INFINITY;
    let mut used = vec![false; cols];
    fn search(
        r: usize,
        rows: usize,
        cols: usize,
        acc: f64,
        used: &mut [bool],
        best: &mut f64,
        at: &dyn Fn(usize, usize) -> f64,
    ) {
        if acc >= *best {
            return;
        }
        if r == rows {
            *best = acc;
            return;
        }
        for c in 0..cols {
            if !used[c] {
                used[c] = true;
                search(r + 1, rows, cols, acc + at(r, c), used, best, at);
                used[c] = false;
            }
        }
    }
    search(0, rows, cols, 0.0, &mut used, &mut best, &at);
    AngularError {
        mean_deg: best / pairs as f64,
        detected_count: detected.len(),
    }
}

/// Rows `model,angle,peak_x,peak_y,peak_z,value` for a list of peaks.
pub fn peaks_csv_rows(model: &str, angle_deg: f64, peaks: &[Peak]) -> String {
    let mut out = String::new();
    for p in peaks {
        let _ = writeln!(
            out,
            "{model},{angle_deg},{:?},{:?},{:?},{:?}",
            p.direction[0], p.direction[1], p.direction[2], p.value
        );
    }
    out
}

/// Header of the peak table.
pub const PEAKS_CSV_HEADER: &str = "model,angle,peak_x,peak_y,peak_z,value\n";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::from_spherical;
    use crate::models::{crossing_fibers, single_fiber, FIBER_DIFFUSIVITIES};

    fn rotate_toward(u: [f64; 3], v: [f64; 3], deg: f64) -> [f64; 3] {
        let a = deg.to_radians();
        [
            u[0] * a.cos() + v[0] * a.sin(),
            u[1] * a.cos() + v[1] * a.sin(),
            u[2] * a.cos() + v[2] * a.sin(),
        ]
    }

    #[test]
    fn constant_function_has_one_peak() {
        let s = Icosphere::new(3);
        let peaks = find_peaks(&|_: &[f64; 3]| 0.25, &s, 0.5);
        assert_eq!(peaks.len(), 1);
        assert_eq!(peaks[0].vertex, 0);
    }

    #[test]
    fn mirrored_two_vertex_plateaus_count_once() {
        // An axis through an edge midpoint makes both edge vertices (and their
        // antipodes) tie; the result must still be a single peak.
        let s = Icosphere::new(3);
        let (a, b) = (s.vertices()[0], s.vertices()[s.neighbors(0)[0]]);
        let mid = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
        let n = dot(&mid, &mid).sqrt();
        let axis = mid.map(|x| x / n);
        let values: Vec<f64> = s.vertices().iter().map(|v| (dot(v, &axis).powi(2) * 1e6).round()).collect();
        let peaks = find_peaks_in_values(&values, &s, 0.5);
        assert_eq!(peaks.len(), 1);
        assert!(axis_angle_deg(&peaks[0].direction, &axis) < 5.0);
    }

    #[test]
    fn single_fiber_gives_one_peak_near_axis() {
        let s = Icosphere::new(4);
        let m = single_fiber(FIBER_DIFFUSIVITIES);
        let peaks = find_peaks(&|v: &[f64; 3]| m.ground_truth_odf(v), &s, 0.5);
        assert_eq!(peaks.len(), 1);
        assert!(axis_angle_deg(&peaks[0].direction, &[1.0, 0.0, 0.0]) < 2.5);
    }

    #[test]
    fn orthogonal_crossing_gives_two_peaks() {
        let s = Icosphere::new(4);
        let m = crossing_fibers(FIBER_DIFFUSIVITIES, 90.0);
        let peaks = find_peaks(&|v: &[f64; 3]| m.ground_truth_odf(v), &s, 0.5);
        assert_eq!(peaks.len(), 2);
        let dirs: Vec<[f64; 3]> = peaks.iter().map(|p| p.direction).collect();
        assert!(angular_error(&dirs, &m.fiber_directions()).mean_deg < 2.5);
    }

    #[test]
    fn scaling_does_not_move_peaks() {
        let s = Icosphere::new(3);
        let m = crossing_fibers(FIBER_DIFFUSIVITIES, 70.0);
        let a = find_peaks(&|v: &[f64; 3]| m.ground_truth_odf(v), &s, 0.5);
        let b = find_peaks(&|v: &[f64; 3]| 37.0 * m.ground_truth_odf(v), &s, 0.5);
        assert_eq!(
            a.iter().map(|p| p.vertex).collect::<Vec<_>>(),
            b.iter().map(|p| p.vertex).collect::<Vec<_>>()
        );
    }

    #[test]
    fn angular_error_examples() {
        let x = [1.0, 0.0, 0.0];
        let y = [0.0, 1.0, 0.0];
        let truth = [x, y];
        let e = angular_error(&truth, &truth);
        assert_eq!((e.mean_deg, e.detected_count), (0.0, 2));
        let anti = angular_error(&[[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0]], &truth);
        assert!(anti.mean_deg.abs() < 1e-12 && anti.detected_count == 2);
        let one = angular_error(&[rotate_toward(x, y, 5.0)], &truth);
        assert!((one.mean_deg - 5.0).abs() < 1e-9);
        assert_eq!(one.detected_count, 1);
        assert!(angular_error(&[], &truth).mean_deg.is_nan());
        // Matching is optimal, not greedy.
        let d = [from_spherical(1.0, 0.3), from_spherical(0.2, 2.0), from_spherical(2.5, 1.0)];
        let t = [from_spherical(1.1, 0.2), from_spherical(0.3, 1.7)];
        let mut brute = f64::INFINITY;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    brute = brute.min(axis_angle_deg(&d[i], &t[0]) + axis_angle_deg(&d[j], &t[1]));
                }
            }
        }
        assert!((angular_error(&d, &t).mean_deg - brute / 2.0).abs() < 1e-12);
    }
}
