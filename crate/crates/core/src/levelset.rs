//! Polynomial lemniscates `E(f) = {z : |f(z)| <= level}` and their components.
//!
//! The boundary `{|f| = level}` is sampled by solving `f(z) = level e^{i theta_k}`
//! at `m` equally spaced phases. Between consecutive phases the `d` solutions
//! are matched by minimal total displacement; an interval whose matching is
//! not clearly unambiguous is bisected until it is. Following the matching
//! once around the circle permutes the phase-0 solutions, and every cycle of
//! that permutation is one closed boundary curve. For a generic level each
//! curve bounds exactly one component; components that touch at a critical
//! point on the level curve are merged (closed-set convention).

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Poly, RootFinder};
use crate::sets::{golden_section_max, local_maxima};
use crate::tolerances::Tolerances;

/// Deepest bisection of a phase interval before the matching is declared ambiguous.
const MAX_BISECTION_DEPTH: usize = 28;

/// Largest degree for which matchings are found by enumerating permutations.
const EXACT_MATCHING_MAX_DEGREE: usize = 6;

/// Default phase count `max(64, 32 d)`.
pub fn default_phases(degree: usize) -> usize {
    (32 * degree).max(64)
}

/// Solutions of `f(z) = level e^{i theta_k}` for `theta_k = 2 pi k / m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub level: f64,
    pub m: usize,
    /// `phases[k]` holds the `d` solutions at phase `k`.
    pub phases: Vec<Vec<Complex64>>,
}

impl BoundarySample {
    pub fn phase_angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.m as f64
    }

    /// `(phase index, point)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.phases
            .iter()
            .enumerate()
            .flat_map(|(k, pts)| pts.iter().map(move |&z| (k, z)))
    }
}

fn target(level: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(level, theta)
}

/// Newton iteration for `f(z) = w` from `z0`; keeps the best iterate.
fn newton_to_value(f: &Poly, w: Complex64, z0: Complex64) -> Complex64 {
    let mut z = z0;
    let mut best = (f.eval(z) - w).norm();
    for _ in 0..40 {
        let (v, d) = f.eval_with_derivative(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - (v - w) / d;
        let res = (f.eval(next) - w).norm();
        if !(res < best) {
            break;
        }
        z = next;
        best = res;
        if best <= 1e-15 * w.norm().max(1.0) {
            break;
        }
    }
    z
}

fn solve_phase(f: &Poly, level: f64, theta: f64, finder: &RootFinder) -> Result<Vec<Complex64>> {
    let w = target(level, theta);
    let shifted = f.shift_constant(-w);
    let roots = finder.roots(&shifted)?;
    Ok(roots.into_iter().map(|z| newton_to_value(f, w, z)).collect())
}

/// All `d m` boundary points, grouped by phase.
pub fn boundary_points(f: &Poly, level: f64, m: usize, finder: &RootFinder) -> Result<BoundarySample> {
    check_degree(f, 1)?;
    if !(level.is_finite() && level > 0.0) {
        return Err(Error::InvalidArgument(format!("level must be positive, got {level}")));
    }
    let min_m = 8 * f.degree();
    if m < min_m {
        return Err(Error::InvalidArgument(format!(
            "need at least {min_m} phases for degree {}, got {m}",
            f.degree()
        )));
    }
    let phases = (0..m)
        .map(|k| {
            solve_phase(f, level, TAU * k as f64 / m as f64, finder).map_err(|e| Error::PhaseSolve {
                phase: k,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundarySample { level, m, phases })
}

fn check_degree(f: &Poly, required: usize) -> Result<()> {
    if f.is_zero() || f.degree() < required {
        return Err(Error::DegreeTooLow {
            degree: f.degree(),
            required,
        });
    }
    Ok(())
}

/// Connectivity of `{|f| <= level}` from its critical values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Connectivity {
    pub connected: bool,
    /// Some critical value lies on the level curve within tolerance.
    pub boundary_touching: bool,
    pub critical_values: Vec<Complex64>,
    /// Critical value of largest modulus, if any.
    pub worst_critical_value: Option<Complex64>,
}

/// `{|f| <= level}` is connected iff every critical value has modulus `<= level`.
/// Critical values within `tol.level` (relative) of the level count as
/// touching and keep the set connected.
pub fn is_connected(f: &Poly, level: f64, tol: &Tolerances) -> Result<Connectivity> {
    check_degree(f, 1)?;
    if f.degree() == 1 {
        return Ok(Connectivity {
            connected: true,
            boundary_touching: false,
            critical_values: Vec::new(),
            worst_critical_value: None,
        });
    }
    let finder = root_finder(tol);
    let values = f.critical_values_with(&finder)?;
    let worst = values
        .iter()
        .copied()
        .fold(None::<Complex64>, |acc, v| match acc {
            Some(a) if a.norm() >= v.norm() => Some(a),
            _ => Some(v),
        });
    let touching = values.iter().any(|v| touches(v.norm(), level, tol.level));
    let connected = values
        .iter()
        .all(|v| v.norm() <= level || touches(v.norm(), level, tol.level));
    Ok(Connectivity {
        connected,
        boundary_touching: touching,
        critical_values: values,
        worst_critical_value: worst,
    })
}

fn touches(modulus: f64, level: f64, tol: f64) -> bool {
    (modulus - level).abs() <= tol * level
}

pub(crate) fn root_finder(tol: &Tolerances) -> RootFinder {
    RootFinder {
        tol_root: tol.root,
        tol_cluster: tol.cluster,
        ..RootFinder::default()
    }
}

/// One connected component of `{|f| <= level}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetComponent {
    pub label: usize,
    pub level: f64,
    pub poly: Poly,
    /// Phase count the boundary was sampled with.
    pub m: usize,
    /// Closed boundary strands; point `j` of a strand lies at phase `2 pi j / m`.
    pub boundary: Vec<Vec<Complex64>>,
    /// Zeros of `f` inside the component, with multiplicity.
    pub zeros_inside: Vec<Complex64>,
    /// The component was merged across a critical point on the level curve.
    pub touching: bool,
}

impl LevelSetComponent {
    pub fn boundary_points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.boundary.iter().flatten().copied()
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.iter().map(Vec::len).sum()
    }

    /// Point on the strand at fractional index `s` (phase `2 pi s / m`),
    /// found by Newton from the chordal interpolation. `None` when Newton
    /// lands away from the strand.
    fn strand_point(&self, strand: &[Complex64], s: f64) -> Option<Complex64> {
        let len = strand.len();
        let base = s.floor();
        let t = s - base;
        let j = (base as i64).rem_euclid(len as i64) as usize;
        let a = strand[j];
        let b = strand[(j + 1) % len];
        let guess = a + (b - a) * t;
        let z = newton_to_value(&self.poly, target(self.level, TAU * s / self.m as f64), guess);
        let reach = 2.0 * (b - a).norm() + 1e-12 * (1.0 + a.norm());
        ((z - guess).norm() <= reach).then_some(z)
    }

    /// Boundary points with at least `target` entries, obtained by inserting
    /// Newton-projected points between consecutive samples.
    pub fn dense_boundary(&self, target: usize) -> Vec<Complex64> {
        let have = self.boundary_len().max(1);
        let factor = target.div_ceil(have).max(1);
        let mut out = Vec::with_capacity(have * factor);
        for strand in &self.boundary {
            for j in 0..strand.len() {
                out.push(strand[j]);
                for k in 1..factor {
                    let s = j as f64 + k as f64 / factor as f64;
                    if let Some(z) = self.strand_point(strand, s) {
                        out.push(z);
                    }
                }
            }
        }
        out
    }

    pub fn contains_zero_near(&self, z: Complex64, radius: f64) -> bool {
        self.zeros_inside.iter().any(|r| (r - z).norm() <= radius)
    }
}

/// Result of splitting a level set into components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetDecomposition {
    pub components: Vec<LevelSetComponent>,
    /// Some matching or containment test stayed ambiguous for reasons other
    /// than a critical value on the level curve; perturb the level.
    pub degenerate: bool,
    /// Critical points whose critical value lies on the level curve.
    pub touching_points: Vec<Complex64>,
}

/// Minimal-total-displacement assignment `a[i] -> b[perm[i]]`.
fn min_displacement_assignment(a: &[Complex64], b: &[Complex64]) -> Vec<usize> {
    let d = a.len();
    let cost = |i: usize, j: usize| (a[i] - b[j]).norm();
    if d <= EXACT_MATCHING_MAX_DEGREE {
        let mut perm: Vec<usize> = (0..d).collect();
        let mut best = perm.clone();
        let mut best_cost = f64::INFINITY;
        permute(&mut perm, 0, &mut |p| {
            let total: f64 = p.iter().enumerate().map(|(i, &j)| cost(i, j)).sum();
            if total < best_cost {
                best_cost = total;
                best.copy_from_slice(p);
            }
        });
        return best;
    }
    // Greedy over sorted pair distances, then pairwise-swap repair.
    let mut pairs: Vec<(f64, usize, usize)> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| (cost(i, j), i, j))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut perm = vec![usize::MAX; d];
    let mut used = vec![false; d];
    for (_, i, j) in pairs {
        if perm[i] == usize::MAX && !used[j] {
            perm[i] = j;
            used[j] = true;
        }
    }
    loop {
        let mut improved = false;
        for i in 0..d {
            for k in i + 1..d {
                let now = cost(i, perm[i]) + cost(k, perm[k]);
                let swapped = cost(i, perm[k]) + cost(k, perm[i]);
                if swapped < now - 1e-15 * now {
                    perm.swap(i, k);
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    perm
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn min_separation(points: &[Complex64], i: usize) -> f64 {
    points
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, z)| (z - points[i]).norm())
        .fold(f64::INFINITY, f64::min)
}

/// A matching is trusted when every root moves less than half its distance
/// to any other root (at both ends) and lands near its tangent prediction.
fn matching_is_safe(
    f: &Poly,
    level: f64,
    theta_a: f64,
    a: &[Complex64],
    theta_b: f64,
    b: &[Complex64],
    perm: &[usize],
    merge_tol: f64,
) -> bool {
    let w = target(level, theta_a);
    let dtheta = theta_b - theta_a;
    perm.iter().enumerate().all(|(i, &j)| {
        let sep = min_separation(a, i).min(min_separation(b, j));
        if !(sep > merge_tol) {
            return false;
        }
        let disp = (a[i] - b[j]).norm();
        let slope = f.eval_with_derivative(a[i]).1;
        if slope.norm() == 0.0 {
            return false;
        }
        // dz/dtheta = i w / f'(z)
        let predicted = a[i] + Complex64::new(0.0, dtheta) * w / slope;
        disp < 0.5 * sep && (predicted - b[j]).norm() < 0.25 * sep
    })
}

struct Matcher<'a> {
    f: &'a Poly,
    level: f64,
    finder: &'a RootFinder,
    merge_tol: f64,
    /// Phase intervals that stayed ambiguous at the bisection limit.
    ambiguous: Vec<(f64, f64)>,
}

impl Matcher<'_> {
    fn match_interval(
        &mut self,
        theta_a: f64,
        a: &[Complex64],
        theta_b: f64,
        b: &[Complex64],
        depth: usize,
    ) -> Result<Vec<usize>> {
        let perm = min_displacement_assignment(a, b);
        if matching_is_safe(self.f, self.level, theta_a, a, theta_b, b, &perm, self.merge_tol) {
            return Ok(perm);
        }
        if depth >= MAX_BISECTION_DEPTH {
            self.ambiguous.push((theta_a, theta_b));
            return Ok(perm);
        }
        let mid = 0.5 * (theta_a + theta_b);
        let roots_mid = solve_phase(self.f, self.level, mid, self.finder)?;
        let first = self.match_interval(theta_a, a, mid, &roots_mid, depth + 1)?;
        let second = self.match_interval(mid, &roots_mid, theta_b, b, depth + 1)?;
        Ok(first.iter().map(|&k| second[k]).collect())
    }
}

/// Winding number of a closed polyline around `p`.
pub fn winding_number(curve: &[Complex64], p: Complex64) -> f64 {
    let n = curve.len();
    let total: f64 = (0..n)
        .map(|k| ((curve[(k + 1) % n] - p) / (curve[k] - p)).arg())
        .sum();
    total / TAU
}

/// Splits the sampled level curve into components.
pub fn components(f: &Poly, sample: &BoundarySample, tol: &Tolerances) -> Result<LevelSetDecomposition> {
    check_degree(f, 1)?;
    let finder = root_finder(tol);
    let level = sample.level;
    let m = sample.m;
    let d = f.degree();
    let scale = sample
        .points()
        .map(|(_, z)| z.norm())
        .fold(1.0, f64::max);
    let mut matcher = Matcher {
        f,
        level,
        finder: &finder,
        merge_tol: tol.merge * scale,
        ambiguous: Vec::new(),
    };
    let mut perms = Vec::with_capacity(m);
    for k in 0..m {
        let next = (k + 1) % m;
        let theta_b = TAU * (k + 1) as f64 / m as f64;
        perms.push(matcher.match_interval(
            sample.phase_angle(k),
            &sample.phases[k],
            theta_b,
            &sample.phases[next],
            0,
        )?);
    }

    // Cycles of the monodromy permutation.
    let mut visited = vec![false; d];
    let mut cycles: Vec<Vec<Complex64>> = Vec::new();
    for start in 0..d {
        if visited[start] {
            continue;
        }
        let mut strand = Vec::new();
        let mut cur = start;
        loop {
            visited[cur] = true;
            for (k, perm) in perms.iter().enumerate() {
                strand.push(sample.phases[k][cur]);
                cur = perm[cur];
            }
            if cur == start || visited[cur] {
                break;
            }
        }
        cycles.push(strand);
    }

    let (touching_points, touching_phases) = touching_critical_points(f, level, tol)?;
    let mut degenerate = matcher.ambiguous.iter().any(|&(lo, hi)| {
        !touching_phases
            .iter()
            .any(|&t| phase_in_interval(t, lo, hi, 1e-9))
    });

    // Union cycles that meet at a touching critical point.
    let mut group: Vec<usize> = (0..cycles.len()).collect();
    for &c in &touching_points {
        let members: Vec<usize> = cycles
            .iter()
            .enumerate()
            .filter(|(_, strand)| curve_passes_through(strand, c))
            .map(|(i, _)| i)
            .collect();
        if let Some(&first) = members.first() {
            let root = group[first];
            for &i in &members[1..] {
                let old = group[i];
                for g in group.iter_mut() {
                    if *g == old {
                        *g = root;
                    }
                }
            }
        }
    }

    let zeros = finder.roots(f)?;
    let mut comps: Vec<LevelSetComponent> = Vec::new();
    let mut group_ids: Vec<usize> = group.clone();
    group_ids.sort_unstable();
    group_ids.dedup();
    let mut assigned = vec![false; zeros.len()];
    for gid in group_ids {
        let strands: Vec<Vec<Complex64>> = cycles
            .iter()
            .zip(&group)
            .filter(|(_, &g)| g == gid)
            .map(|(s, _)| s.clone())
            .collect();
        let mut inside = Vec::new();
        for (zi, &z) in zeros.iter().enumerate() {
            let mut hit = false;
            for strand in &strands {
                let w = winding_number(strand, z);
                let rounded = w.round();
                if (w - rounded).abs() > 0.25 {
                    degenerate = true;
                }
                if rounded >= 1.0 {
                    hit = true;
                }
            }
            if hit && !assigned[zi] {
                assigned[zi] = true;
                inside.push(z);
            }
        }
        let merged = strands.len() > 1;
        comps.push(LevelSetComponent {
            label: 0,
            level,
            poly: f.clone(),
            m,
            boundary: strands,
            zeros_inside: inside,
            touching: merged,
        });
    }
    if assigned.iter().any(|a| !a) || comps.iter().any(|c| c.zeros_inside.is_empty()) {
        degenerate = true;
    }
    comps.sort_by(|a, b| {
        let ca = centroid(&a.zeros_inside);
        let cb = centroid(&b.zeros_inside);
        ca.re.total_cmp(&cb.re).then(ca.im.total_cmp(&cb.im))
    });
    for (i, c) in comps.iter_mut().enumerate() {
        c.label = i;
    }
    Ok(LevelSetDecomposition {
        components: comps,
        degenerate,
        touching_points,
    })
}

fn centroid(points: &[Complex64]) -> Complex64 {
    if points.is_empty() {
        return Complex64::new(f64::INFINITY, f64::INFINITY);
    }
    points.iter().sum::<Complex64>() / points.len() as f64
}

fn phase_in_interval(t: f64, lo: f64, hi: f64, slack: f64) -> bool {
    let t = t.rem_euclid(TAU);
    [t - TAU, t, t + TAU]
        .iter()
        .any(|&x| x >= lo - slack && x <= hi + slack)
}

/// The strand passes through `c` when its nearest sample is no farther from
/// `c` than the local sample spacing.
fn curve_passes_through(strand: &[Complex64], c: Complex64) -> bool {
    let n = strand.len();
    let (j, dist) = strand
        .iter()
        .enumerate()
        .map(|(j, z)| (j, (z - c).norm()))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let spacing = (strand[(j + 1) % n] - strand[j])
        .norm()
        .max((strand[(j + n - 1) % n] - strand[j]).norm());
    dist <= spacing + 1e-12 * (1.0 + c.norm())
}

fn touching_critical_points(f: &Poly, level: f64, tol: &Tolerances) -> Result<(Vec<Complex64>, Vec<f64>)> {
    if f.degree() < 2 {
        return Ok((Vec::new(), Vec::new()));
    }
    let crit = f.critical_points_with(&root_finder(tol))?;
    let mut points = Vec::new();
    let mut phases = Vec::new();
    for c in crit {
        let v = f.eval(c);
        if touches(v.norm(), level, tol.level) {
            points.push(c);
            phases.push(v.arg());
        }
    }
    Ok((points, phases))
}

/// Samples the boundary and splits it into components in one call.
pub fn extract(f: &Poly, level: f64, m: usize, tol: &Tolerances) -> Result<LevelSetDecomposition> {
    let sample = boundary_points(f, level, m, &root_finder(tol))?;
    components(f, &sample, tol)
}

/// `max |q|` over a component, attained on its boundary by the maximum
/// principle: the best boundary samples are refined by golden-section search
/// along the phase parametrization of their strand.
pub fn sup_on_component(q: &Poly, comp: &LevelSetComponent, tol_sup: f64) -> f64 {
    let mut best = comp
        .boundary_points()
        .map(|z| q.eval(z).norm())
        .fold(0.0, f64::max);
    for strand in &comp.boundary {
        if strand.len() < 3 {
            continue;
        }
        let samples: Vec<f64> = strand.iter().map(|&z| q.eval(z).norm()).collect();
        for j in local_maxima(&samples, true, 3) {
            let g = |s: f64| {
                comp.strand_point(strand, s)
                    .map_or(f64::NEG_INFINITY, |z| q.eval(z).norm())
            };
            let center = j as f64;
            let (_, v) = golden_section_max(g, center - 1.0, center + 1.0, tol_sup * comp.m as f64 / TAU);
            best = best.max(v);
        }
    }
    best
}
