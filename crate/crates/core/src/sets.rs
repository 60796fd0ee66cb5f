//! Plane continua and elementary geometry on point samples.

use std::f64::consts::TAU;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::capacity::{capacity_of_set, CapacityConfig, CapacityEstimate};
use crate::error::{Error, Result};
use crate::poly::{parse_complex, Poly};
use crate::tolerances::Tolerances;

/// Above this many points [`diameter`] switches from all pairs to the convex hull.
const ALL_PAIRS_LIMIT: usize = 4096;

/// Samples taken along a parametrized set before golden-section refinement.
pub const SUP_SAMPLES: usize = 4096;

/// A compact connected set.
///
/// Point clouds cannot be checked for connectivity; the flag records what the
/// caller asserted and is carried into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Continuum {
    Segment { a: Complex64, b: Complex64 },
    Disc { center: Complex64, radius: f64 },
    Polyline { vertices: Vec<Complex64> },
    Cloud { points: Vec<Complex64>, connected: bool },
}

impl Continuum {
    pub fn segment(a: Complex64, b: Complex64) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidArgument("segment endpoints coincide".into()));
        }
        Ok(Self::Segment { a, b })
    }

    pub fn disc(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "disc radius must be positive, got {radius}"
            )));
        }
        Ok(Self::Disc { center, radius })
    }

    pub fn polyline(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument(
                "polyline needs at least 2 vertices".into(),
            ));
        }
        if polyline_length(&vertices) == 0.0 {
            return Err(Error::InvalidArgument("polyline has zero length".into()));
        }
        Ok(Self::Polyline { vertices })
    }

    pub fn cloud(points: Vec<Complex64>, connected: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("cloud needs at least 2 points".into()));
        }
        Ok(Self::Cloud { points, connected })
    }

    /// Whether the set is known (or asserted) to be connected.
    pub fn connected(&self) -> bool {
        match self {
            Self::Cloud { connected, .. } => *connected,
            _ => true,
        }
    }

    /// Point at parameter `t` in `[0, 1]` along the outer boundary, or `None`
    /// for clouds. Segments and polylines are parametrized by arc length,
    /// discs by angle.
    pub fn point_at(&self, t: f64) -> Option<Complex64> {
        match self {
            Self::Segment { a, b } => Some(a + (b - a) * t.clamp(0.0, 1.0)),
            Self::Disc { center, radius } => Some(center + Complex64::from_polar(*radius, TAU * t)),
            Self::Polyline { vertices } => {
                let total = polyline_length(vertices);
                let mut remaining = t.clamp(0.0, 1.0) * total;
                for w in vertices.windows(2) {
                    let len = (w[1] - w[0]).norm();
                    if remaining <= len && len > 0.0 {
                        return Some(w[0] + (w[1] - w[0]) * (remaining / len));
                    }
                    remaining -= len;
                }
                vertices.last().copied()
            }
            Self::Cloud { .. } => None,
        }
    }

    fn is_periodic(&self) -> bool {
        matches!(self, Self::Disc { .. })
    }

    /// `n` points on the outer boundary.
    pub fn sample_boundary(&self, n: usize) -> Vec<Complex64> {
        let n = n.max(2);
        match self {
            Self::Disc { .. } => (0..n)
                .filter_map(|k| self.point_at(k as f64 / n as f64))
                .collect(),
            Self::Segment { .. } | Self::Polyline { .. } => (0..n)
                .filter_map(|k| self.point_at(k as f64 / (n - 1) as f64))
                .collect(),
            Self::Cloud { points, .. } => {
                if n >= points.len() {
                    points.clone()
                } else {
                    farthest_point_thinning(points, n)
                }
            }
        }
    }

    /// `sup |q|` over the set. By the maximum principle the boundary sample
    /// suffices for discs; parametrized sets are refined by golden-section
    /// search around the best samples.
    pub fn sup_modulus(&self, q: &Poly, tol: f64) -> f64 {
        if let Self::Cloud { points, .. } = self {
            return points.iter().map(|&z| q.eval(z).norm()).fold(0.0, f64::max);
        }
        let n = SUP_SAMPLES;
        let periodic = self.is_periodic();
        let steps = if periodic { n } else { n - 1 };
        let value = |t: f64| q.eval(self.point_at(t).expect("parametrized")).norm();
        let samples: Vec<f64> = (0..n).map(|k| value(k as f64 / steps as f64)).collect();
        let mut best = samples.iter().copied().fold(0.0, f64::max);
        for k in local_maxima(&samples, periodic, 4) {
            let h = 1.0 / steps as f64;
            let center = k as f64 * h;
            let (lo, hi) = if periodic {
                (center - h, center + h)
            } else {
                ((center - h).max(0.0), (center + h).min(1.0))
            };
            let wrapped = |t: f64| value(t.rem_euclid(1.0));
            let (_, v) = golden_section_max(wrapped, lo, hi, tol);
            best = best.max(v);
        }
        best
    }
}

impl std::str::FromStr for Continuum {
    type Err = Error;

    /// `segment:a,b`, `disc:center,radius`, `polyline:z1;z2;...`, `cloud:@file.csv`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            what: "continuum",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| err("expected <kind>:<data>"))?;
        match kind.trim() {
            "segment" => {
                let parts: Vec<&str> = body.split(',').collect();
                if parts.len() != 2 {
                    return Err(err("segment needs two endpoints a,b"));
                }
                Continuum::segment(parse_complex(parts[0])?, parse_complex(parts[1])?)
            }
            "disc" => {
                let parts: Vec<&str> = body.split(',').collect();
                if parts.len() != 2 {
                    return Err(err("disc needs center,radius"));
                }
                let radius: f64 = parts[1]
                    .trim()
                    .parse()
                    .map_err(|_| err("disc radius must be a real number"))?;
                Continuum::disc(parse_complex(parts[0])?, radius)
            }
            "polyline" => {
                let vertices = body
                    .split(';')
                    .map(parse_complex)
                    .collect::<Result<Vec<_>>>()?;
                Continuum::polyline(vertices)
            }
            "cloud" => {
                let path = body
                    .strip_prefix('@')
                    .ok_or_else(|| err("cloud expects @<path>"))?;
                Continuum::cloud(read_cloud(Path::new(path))?, true)
            }
            _ => Err(err("unknown kind; expected segment, disc, polyline or cloud")),
        }
    }
}

/// Reads one complex literal per line; blank lines and `#` comments are skipped.
pub fn read_cloud(path: &Path) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        what: "cloud file",
        input: path.display().to_string(),
        reason: e.to_string(),
    })?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_complex)
        .collect()
}

fn polyline_length(vertices: &[Complex64]) -> f64 {
    vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}

fn farthest_point_thinning(points: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut chosen = vec![points[0]];
    let mut dist: Vec<f64> = points.iter().map(|p| (p - points[0]).norm()).collect();
    while chosen.len() < n {
        let (idx, _) = dist
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
        let p = points[idx];
        chosen.push(p);
        for (d, q) in dist.iter_mut().zip(points) {
            *d = d.min((q - p).norm());
        }
    }
    chosen
}

/// Indices of the `count` largest local maxima of a sampled function.
pub(crate) fn local_maxima(samples: &[f64], periodic: bool, count: usize) -> Vec<usize> {
    let n = samples.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&k| {
            let left = if k > 0 {
                Some(samples[k - 1])
            } else if periodic {
                Some(samples[n - 1])
            } else {
                None
            };
            let right = if k + 1 < n {
                Some(samples[k + 1])
            } else if periodic {
                Some(samples[0])
            } else {
                None
            };
            left.is_none_or(|l| samples[k] >= l) && right.is_none_or(|r| samples[k] >= r)
        })
        .collect();
    peaks.sort_by(|&a, &b| samples[b].total_cmp(&samples[a]).then(a.cmp(&b)));
    peaks.truncate(count);
    peaks
}

/// Golden-section search for a maximum of `g` on `[lo, hi]`; returns the
/// best argument and value seen, endpoints included.
pub(crate) fn golden_section_max(g: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut best = (lo, g(lo));
    let hi_value = g(hi);
    if hi_value > best.1 {
        best = (hi, hi_value);
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    for (x, v) in [(c, gc), (d, gd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Largest pairwise distance of a point sample.
pub fn diameter(points: &[Complex64]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    if points.len() <= ALL_PAIRS_LIMIT {
        return all_pairs_diameter(points);
    }
    rotating_calipers(&convex_hull(points))
}

fn all_pairs_diameter(points: &[Complex64]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max((p - q).norm_sqr());
        }
    }
    best.sqrt()
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Andrew's monotone chain; counter-clockwise, no repeated endpoint.
fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn rotating_calipers(hull: &[Complex64]) -> f64 {
    let n = hull.len();
    if n < 3 {
        return all_pairs_diameter(hull);
    }
    let area = |i: usize, j: usize, k: usize| cross(hull[i], hull[j], hull[k]).abs();
    let mut best = 0.0f64;
    let mut j = 1;
    for i in 0..n {
        let next = (i + 1) % n;
        while area(i, next, (j + 1) % n) > area(i, next, j) {
            j = (j + 1) % n;
        }
        best = best
            .max((hull[i] - hull[j]).norm())
            .max((hull[next] - hull[j]).norm());
    }
    best
}

/// Outcome of the `diam E <= 4 cap E` check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamCapReport {
    pub diam: f64,
    pub cap: CapacityEstimate,
    pub ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub connected_assumed: bool,
}

/// Number of boundary samples used for the diameter of a continuum.
pub const DIAMETER_SAMPLES: usize = 4096;

pub fn check_diam_cap(s: &Continuum, config: &CapacityConfig, tol: &Tolerances) -> Result<DiamCapReport> {
    let diam = diameter(&s.sample_boundary(DIAMETER_SAMPLES));
    let cap = capacity_of_set(s, config)?;
    let ratio = diam / cap.value;
    Ok(DiamCapReport {
        diam,
        ratio,
        tolerance: tol.diam_cap,
        pass: ratio <= 4.0 * (1.0 + tol.diam_cap),
        connected_assumed: matches!(s, Continuum::Cloud { .. }) && s.connected(),
        cap,
    })
}
