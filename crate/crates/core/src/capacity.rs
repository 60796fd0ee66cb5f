//! Transfinite diameter estimation.
//!
//! `d_n(E) = sup prod_{i<j} |z_i - z_j|^{2/(n(n-1))}` over n-point subsets of
//! `E` decreases to `cap E`. [`fekete_search`] approximates the supremum over
//! a finite candidate set by greedy Leja seeding followed by single-point
//! exchanges, working entirely with sums of logarithms.
//!
//! Exact oracles cover segments (`L/4`), discs (`r`) and connected polynomial
//! lemniscates (`(r/|a_d|)^{1/d}`).

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levelset::{is_connected, LevelSetComponent};
use crate::poly::Poly;
use crate::sets::Continuum;
use crate::tolerances::Tolerances;

/// Default seed for every seeded search in the crate.
pub const DEFAULT_SEED: u64 = 0x5EED_CA9A;

/// Extra Leja starts used by [`dn_estimate`].
pub const ESTIMATE_RESTARTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityMethod {
    DnSearch,
    OracleSegment,
    OracleDisc,
    OracleLemniscate,
}

impl CapacityMethod {
    pub fn is_oracle(self) -> bool {
        !matches!(self, Self::DnSearch)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::DnSearch => "dn_search",
            Self::OracleSegment => "oracle_segment",
            Self::OracleDisc => "oracle_disc",
            Self::OracleLemniscate => "oracle_lemniscate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    /// Point count of the final `d_n` (0 for oracles).
    pub n: usize,
    /// `(k, d_k)` for every rung of the ladder that was run.
    pub history: Vec<(usize, f64)>,
    pub method: CapacityMethod,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CapacityEstimate {
    pub fn oracle(value: f64, method: CapacityMethod) -> Self {
        Self {
            value,
            n: 0,
            history: Vec::new(),
            method,
            warnings: Vec::new(),
        }
    }

    /// Whether the history is non-increasing up to relative slack `tol`.
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.history
            .windows(2)
            .all(|w| w[1].1 <= w[0].1 * (1.0 + tol))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CapacityConfig {
    /// Point counts at which `d_n` is estimated, in increasing order.
    pub ladder: Vec<usize>,
    /// Boundary candidates handed to the search.
    pub candidates: usize,
    pub seed: u64,
    /// Extra Leja starts (besides the farthest-from-centroid one) explored by the search.
    pub restarts: usize,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        Self {
            ladder: vec![16, 32, 64, 128],
            candidates: 2048,
            seed: DEFAULT_SEED,
            restarts: 0,
        }
    }
}

impl CapacityConfig {
    /// Ladder truncated so that its last rung is at most `n_max`.
    pub fn with_max_n(mut self, n_max: usize) -> Self {
        self.ladder.retain(|&n| n <= n_max);
        if self.ladder.last() != Some(&n_max) && n_max >= 2 {
            self.ladder.push(n_max);
        }
        self
    }
}

/// Result of one Fekete-point search.
#[derive(Debug, Clone, PartialEq)]
pub struct FeketeConfiguration {
    pub points: Vec<Complex64>,
    /// `sum_{i<j} log |z_i - z_j|`
    pub log_product: f64,
}

impl FeketeConfiguration {
    /// `exp(2 * log_product / (n (n - 1)))`
    pub fn dn(&self) -> f64 {
        let n = self.points.len() as f64;
        (2.0 * self.log_product / (n * (n - 1.0))).exp()
    }
}

/// `sum_{i<j} log |z_i - z_j|` in a fixed summation order.
pub fn log_pair_product(points: &[Complex64]) -> f64 {
    let mut total = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            total += (p - q).norm().ln();
        }
    }
    total
}

/// `log |a - b|` without the square root.
fn log_dist(a: &Complex64, b: &Complex64) -> f64 {
    0.5 * (a - b).norm_sqr().ln()
}

/// Sorted candidates with exact (to rounding) duplicates removed.
fn distinct_candidates(points: &[Complex64]) -> Vec<Complex64> {
    let scale = points.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut pts: Vec<Complex64> = points
        .iter()
        .copied()
        .filter(|z| z.re.is_finite() && z.im.is_finite())
        .collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<Complex64> = Vec::with_capacity(pts.len());
    for p in pts {
        // Near-duplicates are adjacent in real part only approximately, so look back a few.
        if out.iter().rev().take(8).any(|q| (p - q).norm() <= 1e-14 * scale) {
            continue;
        }
        out.push(p);
    }
    out
}

/// Estimate of `d_n` over the candidate set.
pub fn dn_estimate(points: &[Complex64], n: usize, seed: u64) -> Result<f64> {
    Ok(fekete_search(points, n, seed, ESTIMATE_RESTARTS)?.dn())
}

/// Approximate Fekete configuration of `n` points chosen from `points`.
pub fn fekete_search(
    points: &[Complex64],
    n: usize,
    seed: u64,
    restarts: usize,
) -> Result<FeketeConfiguration> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("d_n needs n >= 2, got {n}")));
    }
    let cands = distinct_candidates(points);
    if cands.len() < n {
        return Err(Error::TooFewCandidates {
            needed: n,
            found: cands.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<Option<usize>> = vec![None];
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.shuffle(&mut rng);
    starts.extend(order.into_iter().take(restarts).map(Some));
    let run_seeds: Vec<u64> = (0..starts.len()).map(|_| rand::Rng::gen(&mut rng)).collect();

    let runs: Vec<(Vec<usize>, f64)> = starts
        .par_iter()
        .zip(run_seeds.par_iter())
        .map(|(&start, &run_seed)| {
            let chosen = leja_seed(&cands, n, start);
            let chosen = exchange_search(&cands, chosen, run_seed);
            let mut sorted = chosen;
            sorted.sort_unstable();
            let pts: Vec<Complex64> = sorted.iter().map(|&i| cands[i]).collect();
            let value = log_pair_product(&pts);
            (sorted, value)
        })
        .collect();
    // First strictly-best run wins, so the result does not depend on scheduling.
    let (best, log_product) = runs
        .into_iter()
        .fold(None::<(Vec<usize>, f64)>, |acc, run| match acc {
            Some(a) if a.1 >= run.1 => Some(a),
            _ => Some(run),
        })
        .expect("at least one run");
    Ok(FeketeConfiguration {
        points: best.iter().map(|&i| cands[i]).collect(),
        log_product,
    })
}

/// Greedy Leja sequence: each new point maximizes its log-distance sum to the
/// points already chosen. Starts from the candidate farthest from the
/// centroid when `start` is `None`.
fn leja_seed(cands: &[Complex64], n: usize, start: Option<usize>) -> Vec<usize> {
    let mut chosen = Vec::with_capacity(n);
    let mut potential = vec![0.0f64; cands.len()];
    let mut taken = vec![false; cands.len()];
    let take = |i: usize, chosen: &mut Vec<usize>, potential: &mut [f64], taken: &mut [bool]| {
        chosen.push(i);
        taken[i] = true;
        for (p, c) in potential.iter_mut().zip(cands) {
            *p += log_dist(c, &cands[i]);
        }
    };
    match start {
        Some(i) => take(i, &mut chosen, &mut potential, &mut taken),
        None => {
            let centroid = cands.iter().sum::<Complex64>() / cands.len() as f64;
            let far = (0..cands.len())
                .fold(0, |a, i| if (cands[i] - centroid).norm_sqr() > (cands[a] - centroid).norm_sqr() { i } else { a });
            take(far, &mut chosen, &mut potential, &mut taken);
        }
    }
    while chosen.len() < n {
        let next = (0..cands.len())
            .filter(|&i| !taken[i])
            .fold(None::<usize>, |acc, i| match acc {
                Some(a) if potential[a] >= potential[i] => Some(a),
                _ => Some(i),
            })
            .expect("enough candidates");
        take(next, &mut chosen, &mut potential, &mut taken);
    }
    chosen.truncate(n);
    chosen
}

/// Single-point exchange until no swap of a chosen point for a free
/// candidate increases the log product.
fn exchange_search(cands: &[Complex64], mut chosen: Vec<usize>, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_cands = cands.len();
    let mut in_set = vec![false; n_cands];
    for &i in &chosen {
        in_set[i] = true;
    }
    // column[slot][x] = log |x - chosen[slot]|, zero at x = chosen[slot].
    let column = |i: usize| -> Vec<f64> {
        cands
            .iter()
            .enumerate()
            .map(|(x, z)| if x == i { 0.0 } else { log_dist(z, &cands[i]) })
            .collect()
    };
    let mut columns: Vec<Vec<f64>> = chosen.iter().map(|&i| column(i)).collect();
    for _pass in 0..10_000 {
        // Potential of every candidate against the chosen set, resummed each
        // pass so incremental updates do not drift.
        let mut potential = vec![0.0f64; n_cands];
        for col in &columns {
            for (p, v) in potential.iter_mut().zip(col) {
                *p += v;
            }
        }
        let mut slots: Vec<usize> = (0..chosen.len()).collect();
        slots.shuffle(&mut rng);
        let mut improved = false;
        for slot in slots {
            let old = chosen[slot];
            let mut best: Option<(usize, f64)> = None;
            for c in 0..n_cands {
                if in_set[c] {
                    continue;
                }
                let gain = potential[c] - columns[slot][c] - potential[old];
                if best.is_none_or(|(_, g)| gain > g) {
                    best = Some((c, gain));
                }
            }
            let Some((c, gain)) = best else { continue };
            if gain <= 1e-12 * (1.0 + potential[old].abs()) {
                continue;
            }
            let fresh = column(c);
            for ((p, add), remove) in potential.iter_mut().zip(&fresh).zip(&columns[slot]) {
                *p += add - remove;
            }
            columns[slot] = fresh;
            in_set[old] = false;
            in_set[c] = true;
            chosen[slot] = c;
            improved = true;
        }
        if !improved {
            break;
        }
    }
    chosen
}

/// Runs the `d_n` ladder over a candidate set.
pub fn dn_ladder(candidates: &[Complex64], config: &CapacityConfig) -> Result<CapacityEstimate> {
    let distinct = distinct_candidates(candidates).len();
    let mut history = Vec::new();
    let mut warnings = Vec::new();
    for &n in &config.ladder {
        if n > distinct {
            warnings.push(format!(
                "ladder stopped before n = {n}: only {distinct} distinct candidates"
            ));
            break;
        }
        let conf = fekete_search(candidates, n, config.seed, config.restarts)?;
        history.push((n, conf.dn()));
    }
    let &(n, value) = history.last().ok_or(Error::TooFewCandidates {
        needed: config.ladder.first().copied().unwrap_or(2),
        found: distinct,
    })?;
    Ok(CapacityEstimate {
        value,
        n,
        history,
        method: CapacityMethod::DnSearch,
        warnings,
    })
}

/// Capacity of a continuum: closed forms for segments and discs, the ladder otherwise.
pub fn capacity_of_set(s: &Continuum, config: &CapacityConfig) -> Result<CapacityEstimate> {
    match s {
        Continuum::Segment { a, b } => Ok(CapacityEstimate::oracle(
            (b - a).norm() / 4.0,
            CapacityMethod::OracleSegment,
        )),
        Continuum::Disc { radius, .. } => Ok(CapacityEstimate::oracle(*radius, CapacityMethod::OracleDisc)),
        _ => {
            let mut est = dn_ladder(&s.sample_boundary(config.candidates), config)?;
            if !s.connected() {
                est.warnings
                    .push("cloud not asserted connected; d_n still estimates cap".into());
            }
            Ok(est)
        }
    }
}

/// Capacity of one level-set component: the lemniscate formula when the
/// whole level set is connected, the ladder over its boundary otherwise.
pub fn capacity_of_component(
    comp: &LevelSetComponent,
    config: &CapacityConfig,
    tol: &Tolerances,
) -> Result<CapacityEstimate> {
    let f = &comp.poly;
    match lemniscate_capacity(f, comp.level, tol) {
        Ok(value) => Ok(CapacityEstimate::oracle(value, CapacityMethod::OracleLemniscate)),
        Err(Error::Disconnected { .. }) => {
            let mut est = dn_ladder(&comp.dense_boundary(config.candidates), config)?;
            est.warnings
                .push("level set disconnected: lemniscate oracle invalid, used d_n search".into());
            Ok(est)
        }
        Err(e) => Err(e),
    }
}

/// What [`capacity`] can measure.
#[derive(Debug, Clone, Copy)]
pub enum CapacityTarget<'a> {
    Set(&'a Continuum),
    Component(&'a LevelSetComponent),
}

pub fn capacity(target: CapacityTarget<'_>, config: &CapacityConfig, tol: &Tolerances) -> Result<CapacityEstimate> {
    match target {
        CapacityTarget::Set(s) => capacity_of_set(s, config),
        CapacityTarget::Component(c) => capacity_of_component(c, config, tol),
    }
}

/// `(level / |a_d|)^{1/d}` for a polynomial whose level set is connected.
pub fn lemniscate_capacity(f: &Poly, level: f64, tol: &Tolerances) -> Result<f64> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::DegreeTooLow {
            degree: f.degree(),
            required: 1,
        });
    }
    let conn = is_connected(f, level, tol)?;
    if !conn.connected {
        return Err(Error::Disconnected {
            level,
            critical_value: conn.worst_critical_value.unwrap_or_default(),
        });
    }
    Ok((level / f.leading().norm()).powf(1.0 / f.degree() as f64))
}
