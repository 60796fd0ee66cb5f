//! Simultaneous root finding with the Aberth–Ehrlich iteration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Poly;
use crate::error::{Error, Result};

/// Angular offset of the starting circle, in radians. Irrational multiple of
/// the natural spacing so that symmetric polynomials do not start on a
/// symmetry axis.
const START_ROTATION: f64 = 0.4;
const RETRY_ROTATIONS: [f64; 3] = [START_ROTATION, 1.234_567, 2.903_14];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootFinder {
    /// Accepted relative backward error `|p(r)| / scale`.
    pub tol_root: f64,
    /// Roots within `tol_cluster * max(1, max |root|)` are merged to their centroid.
    pub tol_cluster: f64,
    pub max_iterations: usize,
}

impl Default for RootFinder {
    fn default() -> Self {
        Self {
            tol_root: 1e-12,
            tol_cluster: 1e-6,
            max_iterations: 500,
        }
    }
}

/// A group of numerically coincident roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// Groups roots that lie within `radius` of each other (single linkage).
pub fn cluster_roots(roots: &[Complex64], radius: f64) -> Vec<RootCluster> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut label, i);
        match clusters.iter_mut().find(|(r, _, _)| *r == root) {
            Some((_, sum, count)) => {
                *sum += roots[i];
                *count += 1;
            }
            None => clusters.push((root, roots[i], 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(_, sum, count)| RootCluster {
            center: sum / count as f64,
            multiplicity: count,
        })
        .collect()
}

impl RootFinder {
    /// Residual scale used for the acceptance test of a root.
    fn residual_scale(p: &Poly, z: Complex64) -> f64 {
        p.eval_scale(z).max(p.max_coeff_norm())
    }

    /// All `deg p` roots with multiplicity.
    pub fn roots(&self, p: &Poly) -> Result<Vec<Complex64>> {
        if p.is_zero() || p.degree() == 0 {
            return Err(Error::DegreeTooLow {
                degree: p.degree(),
                required: 1,
            });
        }
        if p.degree() == 1 {
            let c = p.coeffs();
            return Ok(vec![-c[0] / c[1]]);
        }
        let monic = p.scale(1.0 / p.leading());
        let mut last_err = None;
        for rotation in RETRY_ROTATIONS {
            match self.aberth(&monic, rotation) {
                Ok(roots) => return Ok(self.merge_clusters(roots)),
                Err(e) => {
                    log::debug!("root finder retry after rotation {rotation}: {e}");
                    last_err = Some(e);
                }
            }
        }
        Err(last_err.expect("at least one attempt"))
    }

    fn merge_clusters(&self, roots: Vec<Complex64>) -> Vec<Complex64> {
        let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
        let radius = self.tol_cluster * scale;
        let clusters = cluster_roots(&roots, radius);
        if clusters.len() == roots.len() {
            return roots;
        }
        clusters
            .into_iter()
            .flat_map(|c| std::iter::repeat_n(c.center, c.multiplicity))
            .collect()
    }

    fn aberth(&self, p: &Poly, rotation: f64) -> Result<Vec<Complex64>> {
        let n = p.degree();
        let radius = p.root_bound();
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let angle = std::f64::consts::TAU * k as f64 / n as f64 + rotation;
                Complex64::from_polar(radius, angle)
            })
            .collect();
        let mut done = vec![false; n];
        let mut iterations = 0;
        while iterations < self.max_iterations && done.iter().any(|d| !d) {
            iterations += 1;
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let (value, slope) = p.eval_with_derivative(z[i]);
                if value.norm() <= 4.0 * f64::EPSILON * p.eval_scale(z[i]) {
                    done[i] = true;
                    continue;
                }
                let repulsion: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let diff = z[i] - z[j];
                        if diff.norm() == 0.0 {
                            Complex64::new(0.0, 0.0)
                        } else {
                            1.0 / diff
                        }
                    })
                    .sum();
                let step = if slope.norm() == 0.0 {
                    // Stationary point: nudge off it.
                    Complex64::from_polar(1e-8 * (1.0 + z[i].norm()), rotation)
                } else {
                    let newton = value / slope;
                    newton / (1.0 - newton * repulsion)
                };
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                z[i] -= step;
                if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                    done[i] = true;
                }
            }
        }
        let residuals: Vec<f64> = z
            .iter()
            .map(|&r| p.eval(r).norm() / Self::residual_scale(p, r))
            .collect();
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        if !(max_residual <= self.tol_root) {
            return Err(Error::RootsNotConverged {
                iterations,
                residuals,
                max_residual,
            });
        }
        Ok(z)
    }
}
