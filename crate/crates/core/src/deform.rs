//! The shift family `f + lambda` and the functional
//! `F(lambda) = log(cap E_lambda * sup_{E_lambda} |f'|)` on a parameter disc.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{capacity_of_component, CapacityConfig, CapacityEstimate};
use crate::error::{Error, Result};
use crate::levelset::{default_phases, extract, root_finder, sup_on_component, LevelSetDecomposition};
use crate::poly::Poly;
use crate::tolerances::Tolerances;

/// Points on each test circle of [`subharmonicity_test`].
pub const CIRCLE_POINTS: usize = 32;

/// `f + lambda`: every critical value moves by `lambda`, `f'` is unchanged.
pub fn family_shift(f: &Poly, lambda: Complex64) -> Result<Poly> {
    if f.is_zero() || f.degree() < 2 {
        return Err(Error::DegreeTooLow {
            degree: f.degree(),
            required: 2,
        });
    }
    Ok(f.shift_constant(lambda))
}

/// One evaluation of `F`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub cap: CapacityEstimate,
    pub sup_fprime: f64,
    /// The zero of `f` nearest the marker.
    pub zero: Complex64,
    /// Zeros (with multiplicity) in the component containing `zero`.
    pub zeros_inside: usize,
    /// A critical value lies on the level curve; the component is taken closed.
    pub touching: bool,
}

/// Critical value whose modulus is nearest the level.
fn nearest_critical_value(f: &Poly, level: f64, tol: &Tolerances) -> (Complex64, f64) {
    f.critical_values_with(&root_finder(tol))
        .unwrap_or_default()
        .into_iter()
        .map(|v| (v, v.norm()))
        .min_by(|a, b| (a.1 - level).abs().total_cmp(&(b.1 - level).abs()))
        .unwrap_or((Complex64::new(f64::NAN, f64::NAN), f64::NAN))
}

fn locate(
    f: &Poly,
    marker: Complex64,
    level: f64,
    tol: &Tolerances,
) -> Result<(LevelSetDecomposition, usize, Complex64)> {
    let dec = extract(f, level, default_phases(f.degree()), tol)?;
    if dec.degenerate {
        let (critical_value, modulus) = nearest_critical_value(f, level, tol);
        return Err(Error::DegenerateLevelSet {
            critical_value,
            modulus,
            level,
        });
    }
    let (index, zero) = dec
        .components
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.zeros_inside.iter().map(move |&z| (i, z)))
        .min_by(|a, b| (a.1 - marker).norm().total_cmp(&(b.1 - marker).norm()))
        .ok_or(Error::ComponentNotFound { marker })?;
    Ok((dec, index, zero))
}

fn evaluate(
    f: &Poly,
    marker: Complex64,
    level: f64,
    config: &CapacityConfig,
    tol: &Tolerances,
    expected_zeros: Option<usize>,
) -> Result<Option<FunctionalValue>> {
    let (dec, index, zero) = locate(f, marker, level, tol)?;
    let comp = &dec.components[index];
    if expected_zeros.is_some_and(|n| n != comp.zeros_inside.len()) {
        return Ok(None);
    }
    let cap = capacity_of_component(comp, config, tol)?;
    let sup_fprime = sup_on_component(&f.derivative(), comp, tol.sup);
    Ok(Some(FunctionalValue {
        value: (cap.value * sup_fprime).ln(),
        cap,
        sup_fprime,
        zero,
        zeros_inside: comp.zeros_inside.len(),
        touching: !dec.touching_points.is_empty(),
    }))
}

/// `F` for the component of `{|f| <= level}` holding the zero nearest `marker`.
///
/// A critical value on the level curve is not an error: the touching
/// components are merged and `touching` is set. Only an extraction that
/// stays ambiguous fails, naming the critical value nearest the level.
pub fn f_functional(
    f: &Poly,
    marker: Complex64,
    level: f64,
    config: &CapacityConfig,
    tol: &Tolerances,
) -> Result<FunctionalValue> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::DegreeTooLow {
            degree: f.degree(),
            required: 1,
        });
    }
    Ok(evaluate(f, marker, level, config, tol, None)?.expect("no topology constraint"))
}

/// Square lattice over the parameter disc `|lambda - center| <= radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub center: Complex64,
    pub radius: f64,
    pub resolution: usize,
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.resolution < 5 {
            return Err(Error::InvalidArgument(format!(
                "grid resolution must be at least 5, got {}",
                self.resolution
            )));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidArgument(format!("grid radius must be positive, got {}", self.radius)));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        2.0 * self.radius / (self.resolution - 1) as f64
    }

    /// Lattice point in column `i` (real axis) and row `j` (imaginary axis).
    pub fn lambda(&self, i: usize, j: usize) -> Complex64 {
        let h = self.step();
        self.center + Complex64::new(-self.radius + h * i as f64, -self.radius + h * j as f64)
    }

    pub fn in_disc(&self, i: usize, j: usize) -> bool {
        (self.lambda(i, j) - self.center).norm() <= self.radius * (1.0 + 1e-12)
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    /// `cx,cy,r,res`
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            what: "grid",
            input: s.to_string(),
            reason,
        };
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(err("expected cx,cy,r,res".into()));
        }
        let num = |t: &str| t.parse::<f64>().map_err(|e| err(format!("{t:?}: {e}")));
        let spec = GridSpec {
            center: Complex64::new(num(parts[0])?, num(parts[1])?),
            radius: num(parts[2])?,
            resolution: parts[3].parse().map_err(|e| err(format!("{:?}: {e}", parts[3])))?,
        };
        spec.validate().map_err(|e| err(e.to_string()))?;
        Ok(spec)
    }
}

/// Why a lattice point carries no value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Valid,
    OutsideDisc,
    /// A critical value lies on the level curve.
    Touching,
    /// The tracked component holds a different number of zeros than at the reference point.
    TopologyChange,
    Failed,
}

/// `F` on a lattice; arrays are row-major with `index = j * resolution + i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformationGrid {
    pub spec: GridSpec,
    pub lambdas: Vec<Complex64>,
    /// NaN where the mask is false.
    pub f_values: Vec<f64>,
    pub valid_mask: Vec<bool>,
    pub status: Vec<PointStatus>,
    /// Continued marked zero, where tracking succeeded.
    pub tracked_zeros: Vec<Option<Complex64>>,
    /// Zero count of the marked component at the reference point.
    pub reference_zeros: Option<usize>,
    /// Largest `|F(a) - F(b)| / |a - b|` over adjacent valid lattice points.
    pub lipschitz: f64,
    /// Every valid value used an exact capacity formula.
    pub oracle_only: bool,
}

impl DeformationGrid {
    /// Grid filled from a closure instead of a scan; every disc point is valid.
    pub fn from_function(spec: GridSpec, g: impl Fn(Complex64) -> f64) -> Result<Self> {
        spec.validate()?;
        let res = spec.resolution;
        let mut grid = DeformationGrid {
            spec,
            lambdas: Vec::with_capacity(res * res),
            f_values: Vec::with_capacity(res * res),
            valid_mask: Vec::with_capacity(res * res),
            status: Vec::with_capacity(res * res),
            tracked_zeros: vec![None; res * res],
            reference_zeros: None,
            lipschitz: 0.0,
            oracle_only: true,
        };
        for j in 0..res {
            for i in 0..res {
                let lambda = spec.lambda(i, j);
                let inside = spec.in_disc(i, j);
                grid.lambdas.push(lambda);
                grid.f_values.push(if inside { g(lambda) } else { f64::NAN });
                grid.valid_mask.push(inside);
                grid.status.push(if inside { PointStatus::Valid } else { PointStatus::OutsideDisc });
            }
        }
        grid.lipschitz = grid.lipschitz_estimate();
        Ok(grid)
    }

    fn index(&self, i: usize, j: usize) -> usize {
        j * self.spec.resolution + i
    }

    pub fn valid_count(&self) -> usize {
        self.valid_mask.iter().filter(|&&v| v).count()
    }

    fn lipschitz_estimate(&self) -> f64 {
        let res = self.spec.resolution;
        let h = self.spec.step();
        let mut best: f64 = 0.0;
        for j in 0..res {
            for i in 0..res {
                let a = self.index(i, j);
                if !self.valid_mask[a] {
                    continue;
                }
                for (ni, nj) in [(i + 1, j), (i, j + 1)] {
                    if ni < res && nj < res {
                        let b = self.index(ni, nj);
                        if self.valid_mask[b] {
                            best = best.max((self.f_values[a] - self.f_values[b]).abs() / h);
                        }
                    }
                }
            }
        }
        best
    }

    /// Bilinear interpolation; `None` if a surrounding lattice point is invalid.
    pub fn interpolate(&self, lambda: Complex64) -> Option<f64> {
        let res = self.spec.resolution;
        let h = self.spec.step();
        let x = (lambda.re - (self.spec.center.re - self.spec.radius)) / h;
        let y = (lambda.im - (self.spec.center.im - self.spec.radius)) / h;
        let last = (res - 1) as f64;
        if !(0.0..=last).contains(&x) || !(0.0..=last).contains(&y) {
            return None;
        }
        let i = (x.floor() as usize).min(res - 2);
        let j = (y.floor() as usize).min(res - 2);
        let (tx, ty) = (x - i as f64, y - j as f64);
        let corners = [
            self.index(i, j),
            self.index(i + 1, j),
            self.index(i, j + 1),
            self.index(i + 1, j + 1),
        ];
        if corners.iter().any(|&k| !self.valid_mask[k]) {
            return None;
        }
        let v = |k: usize| self.f_values[corners[k]];
        Some(
            v(0) * (1.0 - tx) * (1.0 - ty)
                + v(1) * tx * (1.0 - ty)
                + v(2) * (1.0 - tx) * ty
                + v(3) * tx * ty,
        )
    }

    /// Rows `lambda_re,lambda_im,F,valid`; F is empty where invalid.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda_re,lambda_im,F,valid\n");
        for k in 0..self.lambdas.len() {
            let value = if self.valid_mask[k] {
                format!("{:.17e}", self.f_values[k])
            } else {
                String::new()
            };
            out.push_str(&format!(
                "{:.17e},{:.17e},{},{}\n",
                self.lambdas[k].re, self.lambdas[k].im, value, self.valid_mask[k]
            ));
        }
        out
    }
}

/// Continues the zero nearest `marker` from the lattice point nearest the
/// center outward (breadth first over the 4-neighbourhood), then evaluates
/// `F` at every tracked point.
pub fn scan(
    f: &Poly,
    marker: Complex64,
    spec: GridSpec,
    level: f64,
    config: &CapacityConfig,
    tol: &Tolerances,
) -> Result<DeformationGrid> {
    family_shift(f, Complex64::new(0.0, 0.0))?;
    spec.validate()?;
    let res = spec.resolution;
    let finder = root_finder(tol);
    let idx = |i: usize, j: usize| j * res + i;

    let start = (0..res * res)
        .min_by(|&a, &b| {
            let da = (spec.lambda(a % res, a / res) - spec.center).norm();
            let db = (spec.lambda(b % res, b / res) - spec.center).norm();
            da.total_cmp(&db)
        })
        .expect("non-empty lattice");
    let mut tracked: Vec<Option<Complex64>> = vec![None; res * res];
    let mut failed = vec![false; res * res];
    let mut queue = VecDeque::new();
    let mut seen = vec![false; res * res];
    seen[start] = true;
    queue.push_back((start, marker));
    while let Some((k, prev)) = queue.pop_front() {
        let (i, j) = (k % res, k / res);
        let g = f.shift_constant(spec.lambda(i, j));
        let zero = match finder.roots(&g) {
            Ok(roots) => roots
                .into_iter()
                .min_by(|a, b| (a - prev).norm().total_cmp(&(b - prev).norm()))
                .expect("degree >= 2"),
            Err(e) => {
                log::debug!("tracking failed at lambda = {}: {e}", spec.lambda(i, j));
                failed[k] = true;
                continue;
            }
        };
        tracked[k] = Some(zero);
        let neighbours = [
            (i.wrapping_sub(1), j),
            (i + 1, j),
            (i, j.wrapping_sub(1)),
            (i, j + 1),
        ];
        for (ni, nj) in neighbours {
            if ni < res && nj < res && spec.in_disc(ni, nj) && !seen[idx(ni, nj)] {
                seen[idx(ni, nj)] = true;
                queue.push_back((idx(ni, nj), zero));
            }
        }
    }

    let zero_count = |k: usize| -> Option<usize> {
        let z = tracked[k]?;
        let g = f.shift_constant(spec.lambda(k % res, k / res));
        let (dec, index, _) = locate(&g, z, level, tol).ok()?;
        Some(dec.components[index].zeros_inside.len())
    };
    let reference_zeros = zero_count(start);

    let evaluations: Vec<(PointStatus, f64, bool)> = (0..res * res)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % res, k / res);
            if !spec.in_disc(i, j) {
                return (PointStatus::OutsideDisc, f64::NAN, true);
            }
            let Some(zero) = tracked[k] else {
                return (PointStatus::Failed, f64::NAN, true);
            };
            let g = f.shift_constant(spec.lambda(i, j));
            match evaluate(&g, zero, level, config, tol, reference_zeros) {
                Ok(Some(v)) if v.touching => (PointStatus::Touching, f64::NAN, true),
                Ok(Some(v)) if v.value.is_finite() => (PointStatus::Valid, v.value, v.cap.method.is_oracle()),
                Ok(Some(_)) => (PointStatus::Failed, f64::NAN, true),
                Ok(None) => (PointStatus::TopologyChange, f64::NAN, true),
                Err(Error::DegenerateLevelSet { .. }) => (PointStatus::Touching, f64::NAN, true),
                Err(e) => {
                    log::debug!("F failed at lambda = {}: {e}", spec.lambda(i, j));
                    (PointStatus::Failed, f64::NAN, true)
                }
            }
        })
        .collect();

    let mut grid = DeformationGrid {
        spec,
        lambdas: (0..res * res).map(|k| spec.lambda(k % res, k / res)).collect(),
        f_values: evaluations.iter().map(|e| e.1).collect(),
        valid_mask: evaluations.iter().map(|e| e.0 == PointStatus::Valid).collect(),
        status: evaluations.iter().map(|e| e.0).collect(),
        tracked_zeros: tracked,
        reference_zeros,
        lipschitz: 0.0,
        oracle_only: evaluations.iter().all(|e| e.2),
    };
    for (k, &bad) in failed.iter().enumerate() {
        if bad && grid.status[k] != PointStatus::OutsideDisc {
            grid.status[k] = PointStatus::Failed;
        }
    }
    grid.lipschitz = grid.lipschitz_estimate();
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub lambda: Complex64,
    pub value: f64,
    pub circle_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubharmonicityReport {
    pub test_radius: f64,
    pub tol_subh: f64,
    /// Points whose whole test circle could be interpolated.
    pub tested: usize,
    pub skipped: usize,
    pub violations: Vec<Violation>,
    /// `max F - min F` over valid points.
    pub spread: f64,
    /// `spread <= tol_const`.
    pub constant: bool,
}

/// Mean-value comparison `F(lambda_0) <= mean over |lambda - lambda_0| = r + tol_subh`
/// at every valid lattice point whose test circle is covered by valid cells.
pub fn subharmonicity_test(
    grid: &DeformationGrid,
    test_radius: f64,
    tol_subh: f64,
    tol_const: f64,
) -> SubharmonicityReport {
    let mut tested = 0;
    let mut skipped = 0;
    let mut violations = Vec::new();
    for k in 0..grid.lambdas.len() {
        if !grid.valid_mask[k] {
            continue;
        }
        let center = grid.lambdas[k];
        let samples: Option<Vec<f64>> = (0..CIRCLE_POINTS)
            .map(|p| grid.interpolate(center + Complex64::from_polar(test_radius, TAU * p as f64 / CIRCLE_POINTS as f64)))
            .collect();
        let Some(samples) = samples else {
            skipped += 1;
            continue;
        };
        tested += 1;
        let mean = samples.iter().sum::<f64>() / CIRCLE_POINTS as f64;
        if grid.f_values[k] > mean + tol_subh {
            violations.push(Violation {
                lambda: center,
                value: grid.f_values[k],
                circle_mean: mean,
            });
        }
    }
    let valid = grid
        .f_values
        .iter()
        .zip(&grid.valid_mask)
        .filter(|(_, &v)| v)
        .map(|(x, _)| *x);
    let (lo, hi) = valid.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let spread = if hi >= lo { hi - lo } else { 0.0 };
    SubharmonicityReport {
        test_radius,
        tol_subh,
        tested,
        skipped,
        violations,
        spread,
        constant: spread <= tol_const,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn quick() -> CapacityConfig {
        CapacityConfig::default().with_max_n(32)
    }

    #[test]
    fn shift_examples() {
        let f = Poly::from_real(&[-4.0, 0.0, 1.0]);
        let g = family_shift(&f, c(3.0, 0.0)).unwrap();
        assert_eq!(g, Poly::from_real(&[-1.0, 0.0, 1.0]));
        assert_eq!(family_shift(&f, c(0.0, 0.0)).unwrap(), f);
        assert!(family_shift(&Poly::identity(), c(1.0, 0.0)).is_err());

        let f = Poly::from_roots(&[c(0.2, 0.1), c(-0.7, 0.4), c(0.5, -0.9), c(1.0, 1.0)]);
        let lambda = c(0.3, -1.1);
        let mut before: Vec<Complex64> = f.critical_values().unwrap().iter().map(|v| v + lambda).collect();
        let mut after = family_shift(&f, lambda).unwrap().critical_values().unwrap();
        let key = |a: &Complex64, b: &Complex64| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
        before.sort_by(key);
        after.sort_by(key);
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn functional_examples() {
        let t = tol();
        let v = f_functional(&Poly::from_real(&[-1.0, 0.0, 1.0]), c(1.0, 0.0), 1.0, &quick(), &t).unwrap();
        assert!((v.value - 1.5 * 2f64.ln()).abs() < 1e-9, "{}", v.value);
        assert!(v.touching);
        assert_eq!(v.zeros_inside, 2);

        let v = f_functional(&Poly::identity(), c(0.0, 0.0), 1.0, &quick(), &t).unwrap();
        assert!(v.value.abs() < 1e-12);
    }

    #[test]
    fn functional_regression_two_components() {
        // Frozen output of the default pipeline.
        let v = f_functional(
            &Poly::from_real(&[-4.0, 0.0, 1.0]),
            c(2.0, 0.0),
            1.0,
            &CapacityConfig::default(),
            &tol(),
        )
        .unwrap();
        assert!((v.zero - c(2.0, 0.0)).norm() < 1e-12);
        assert_eq!(v.zeros_inside, 1);
        assert!((v.sup_fprime - 2.0 * 5f64.sqrt()).abs() < 1e-9);
        assert!((v.value - REGRESSION_F).abs() < 1e-9, "{:.15}", v.value);
    }

    /// `F(z^2 - 4)` on the component around 2; the capacity comes from the
    /// `d_128` search, a few percent above the true value.
    const REGRESSION_F: f64 = 0.153_762_061_061_925;

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "0,0,0.5,21".parse().unwrap();
        assert_eq!(g.resolution, 21);
        assert!((g.step() - 0.05).abs() < 1e-15);
        assert!((g.lambda(10, 10)).norm() < 1e-15);
        for bad in ["0,0,0.5", "0,0,-1,21", "0,0,1,3", "a,0,1,9"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn scan_without_crossing_is_fully_valid() {
        // Critical value -0.25 + lambda stays well inside the unit circle.
        let f = Poly::from_real(&[-0.25, 0.0, 1.0]);
        let spec = GridSpec {
            center: c(0.0, 0.0),
            radius: 0.3,
            resolution: 7,
        };
        let grid = scan(&f, c(0.5, 0.0), spec, 1.0, &quick(), &tol()).unwrap();
        for k in 0..grid.lambdas.len() {
            assert_eq!(grid.valid_mask[k], spec.in_disc(k % 7, k / 7));
            if grid.valid_mask[k] {
                assert!(grid.f_values[k].is_finite());
            }
        }
        assert_eq!(grid.reference_zeros, Some(2));
        assert!(grid.lipschitz.is_finite() && grid.lipschitz > 0.0);
    }

    #[test]
    fn scan_masks_topology_change() {
        let f = Poly::from_real(&[-4.0, 0.0, 1.0]);
        let spec = GridSpec {
            center: c(0.0, 0.0),
            radius: 3.5,
            resolution: 15,
        };
        let grid = scan(&f, c(2.0, 0.0), spec, 1.0, &CapacityConfig::default().with_max_n(16), &tol()).unwrap();
        assert_eq!(grid.reference_zeros, Some(1));
        let h = spec.step();
        for k in 0..grid.lambdas.len() {
            if !spec.in_disc(k % 15, k / 15) {
                continue;
            }
            // Critical value of f + lambda is -4 + lambda.
            let dist = (grid.lambdas[k] - c(4.0, 0.0)).norm() - 1.0;
            if dist.abs() > h {
                assert_eq!(grid.valid_mask[k], dist > 0.0, "lambda = {}", grid.lambdas[k]);
            }
        }
        assert!(grid.status.contains(&PointStatus::TopologyChange));
    }

    #[test]
    fn scan_rejects_degree_one_and_coarse_grids() {
        let spec = GridSpec {
            center: c(0.0, 0.0),
            radius: 1.0,
            resolution: 9,
        };
        assert!(scan(&Poly::identity(), c(0.0, 0.0), spec, 1.0, &quick(), &tol()).is_err());
        let coarse = GridSpec { resolution: 4, ..spec };
        assert!(scan(&Poly::from_real(&[-0.25, 0.0, 1.0]), c(0.5, 0.0), coarse, 1.0, &quick(), &tol()).is_err());
    }

    #[test]
    fn controls() {
        let spec = GridSpec {
            center: c(0.0, 0.0),
            radius: 0.5,
            resolution: 21,
        };
        let sup = DeformationGrid::from_function(spec, |l| -l.norm_sqr()).unwrap();
        let report = subharmonicity_test(&sup, 0.15, 1e-2, 1e-6);
        assert!(report.tested > 0);
        assert_eq!(report.violations.len(), report.tested);

        let harmonic = DeformationGrid::from_function(spec, |l| l.re * 3.0 - l.im).unwrap();
        let report = subharmonicity_test(&harmonic, 0.15, 1e-2, 1e-6);
        assert!(report.violations.is_empty() && !report.constant);

        let flat = DeformationGrid::from_function(spec, |_| 0.7).unwrap();
        let report = subharmonicity_test(&flat, 0.15, 1e-2, 1e-6);
        assert!(report.violations.is_empty() && report.constant);
    }

    #[test]
    fn interpolation_reproduces_bilinear_functions() {
        let spec = GridSpec {
            center: c(1.0, -1.0),
            radius: 2.0,
            resolution: 9,
        };
        let g = |l: Complex64| 1.0 + 2.0 * l.re - l.im + 0.5 * l.re * l.im;
        let grid = DeformationGrid::from_function(spec, g).unwrap();
        let p = c(1.3, -0.8);
        assert!((grid.interpolate(p).unwrap() - g(p)).abs() < 1e-12);
        assert!(grid.interpolate(c(10.0, 0.0)).is_none());
        assert!(grid.to_csv().lines().count() == 82);
    }
}
