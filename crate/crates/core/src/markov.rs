//! Checks of `cap E * sup_E |f'| <= 2^(1/d - 1) d^2 sup_E |f|` and its relatives.

use std::f64::consts::{E, PI, TAU};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{capacity_of_component, capacity_of_set, CapacityConfig, CapacityEstimate, CapacityMethod};
use crate::error::{Error, Result};
use crate::levelset::{default_phases, extract, is_connected, root_finder, sup_on_component, LevelSetComponent};
use crate::poly::Poly;
use crate::sets::{diameter, Continuum, DIAMETER_SAMPLES};
use crate::tolerances::Tolerances;

/// `2^(1/d - 1) d^2`.
pub fn bound(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidArgument("bound(d) needs d >= 1".into()));
    }
    let d = d as f64;
    Ok(2f64.powf(1.0 / d - 1.0) * d * d)
}

/// Classical continuum constant `e d^2 / 2`.
pub fn pommerenke_bound(d: usize) -> f64 {
    E * (d * d) as f64 / 2.0
}

/// Diameter form `2^(1/d + 1) d^2`.
pub fn corollary_bound(d: usize) -> Result<f64> {
    Ok(4.0 * bound(d)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "A")]
    A,
    #[serde(rename = "corollary")]
    Corollary,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::One => "1",
            Theorem::Two => "2",
            Theorem::A => "A",
            Theorem::Corollary => "corollary",
        })
    }
}

impl std::str::FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Theorem::One),
            "2" => Ok(Theorem::Two),
            "A" | "a" => Ok(Theorem::A),
            "corollary" => Ok(Theorem::Corollary),
            _ => Err(Error::Parse {
                what: "theorem",
                input: s.to_string(),
                reason: "expected one of 1, 2, A, corollary".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// One inequality check.
///
/// `lhs = measure * sup_fprime` where the measure is `cap.value`, or `diam`
/// for the corollary; `rhs = constant * sup_f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovReport {
    pub theorem: Theorem,
    pub degree: usize,
    pub cap: Option<CapacityEstimate>,
    pub diam: Option<f64>,
    pub sup_f: f64,
    pub sup_fprime: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub quotient: f64,
    pub tol_verify: f64,
    pub verdict: Verdict,
    /// `quotient < 1`.
    pub strict: bool,
    pub pommerenke_rhs: f64,
    /// Component label for level-set checks.
    pub component: Option<usize>,
    pub level: Option<f64>,
    /// The set was only asserted, not known, to be connected.
    pub connected_assumed: bool,
    pub degenerate: bool,
    pub notes: Vec<String>,
    pub tolerances: Tolerances,
}

pub const CSV_HEADER: &str =
    "theorem,degree,component,measure,method,sup_f,sup_fprime,lhs,rhs,quotient,tol_verify,verdict";

impl MarkovReport {
    fn assemble(
        theorem: Theorem,
        degree: usize,
        measure: f64,
        sup_f: f64,
        sup_fprime: f64,
        constant: f64,
        tol_verify: f64,
        tol: &Tolerances,
    ) -> Self {
        let lhs = measure * sup_fprime;
        let rhs = constant * sup_f;
        let quotient = lhs / rhs;
        let verdict = if quotient <= 1.0 + tol_verify {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        MarkovReport {
            theorem,
            degree,
            cap: None,
            diam: None,
            sup_f,
            sup_fprime,
            lhs,
            rhs,
            constant,
            quotient,
            tol_verify,
            verdict,
            strict: quotient < 1.0,
            pommerenke_rhs: pommerenke_bound(degree) * sup_f,
            component: None,
            level: None,
            connected_assumed: false,
            degenerate: false,
            notes: Vec::new(),
            tolerances: *tol,
        }
    }

    fn with_capacity(theorem: Theorem, degree: usize, cap: CapacityEstimate, sup_f: f64, sup_fprime: f64, tol: &Tolerances) -> Result<Self> {
        let tol_verify = tol_for(cap.method, tol);
        let mut report = Self::assemble(theorem, degree, cap.value, sup_f, sup_fprime, bound(degree)?, tol_verify, tol);
        report.notes.extend(cap.warnings.iter().cloned());
        report.cap = Some(cap);
        Ok(report)
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    /// The measure on the left: capacity, or diameter for the corollary.
    pub fn measure(&self) -> f64 {
        self.diam
            .or(self.cap.as_ref().map(|c| c.value))
            .unwrap_or(f64::NAN)
    }

    /// One CSV row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let method = match (&self.cap, self.diam) {
            (_, Some(_)) => "diameter".to_string(),
            (Some(c), None) => c.method.as_str().to_string(),
            (None, None) => String::new(),
        };
        format!(
            "{},{},{},{:.17e},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{}",
            self.theorem,
            self.degree,
            self.component.map(|c| c.to_string()).unwrap_or_default(),
            self.measure(),
            method,
            self.sup_f,
            self.sup_fprime,
            self.lhs,
            self.rhs,
            self.quotient,
            self.tol_verify,
            if self.passed() { "pass" } else { "fail" },
        )
    }
}

fn tol_for(method: CapacityMethod, tol: &Tolerances) -> f64 {
    if method.is_oracle() {
        tol.verify_oracle
    } else {
        tol.verify_search
    }
}

fn require_degree(f: &Poly, required: usize) -> Result<usize> {
    if f.is_zero() || f.degree() < required {
        return Err(Error::DegreeTooLow {
            degree: f.degree(),
            required,
        });
    }
    Ok(f.degree())
}

/// Capacity form on a continuum.
pub fn verify_theorem1(f: &Poly, s: &Continuum, config: &CapacityConfig, tol: &Tolerances) -> Result<MarkovReport> {
    let d = require_degree(f, 1)?;
    let cap = capacity_of_set(s, config)?;
    let sup_f = s.sup_modulus(f, tol.sup);
    let sup_fprime = s.sup_modulus(&f.derivative(), tol.sup);
    let mut report = MarkovReport::with_capacity(Theorem::One, d, cap, sup_f, sup_fprime, tol)?;
    if !s.connected() {
        report.connected_assumed = true;
        report.notes.push("point cloud not asserted connected".into());
    }
    Ok(report)
}

/// Diameter form on a continuum.
pub fn verify_corollary(f: &Poly, s: &Continuum, tol: &Tolerances) -> Result<MarkovReport> {
    let d = require_degree(f, 1)?;
    let diam = diameter(&s.sample_boundary(DIAMETER_SAMPLES));
    let sup_f = s.sup_modulus(f, tol.sup);
    let sup_fprime = s.sup_modulus(&f.derivative(), tol.sup);
    let mut report = MarkovReport::assemble(
        Theorem::Corollary,
        d,
        diam,
        sup_f,
        sup_fprime,
        corollary_bound(d)?,
        tol.verify_oracle,
        tol,
    );
    report.diam = Some(diam);
    report.connected_assumed = !s.connected();
    Ok(report)
}

/// Level-set form: one report per component of `{|f| <= level}`, where
/// `sup |f| = level`.
pub fn verify_theorem2(f: &Poly, level: f64, config: &CapacityConfig, tol: &Tolerances) -> Result<Vec<MarkovReport>> {
    let d = require_degree(f, 1)?;
    verify_theorem2_with_phases(f, level, default_phases(d), config, tol)
}

/// [`verify_theorem2`] with an explicit phase count `m`.
pub fn verify_theorem2_with_phases(
    f: &Poly,
    level: f64,
    m: usize,
    config: &CapacityConfig,
    tol: &Tolerances,
) -> Result<Vec<MarkovReport>> {
    let d = require_degree(f, 1)?;
    let dec = extract(f, level, m, tol)?;
    if dec.degenerate {
        log::warn!("degenerate level-set extraction for {f} at level {level}");
    }
    let fp = f.derivative();
    dec.components
        .iter()
        .map(|comp| {
            let cap = capacity_of_component(comp, config, tol)?;
            let sup_fprime = sup_on_component(&fp, comp, tol.sup);
            let mut report = MarkovReport::with_capacity(Theorem::Two, d, cap, level, sup_fprime, tol)?;
            report.component = Some(comp.label);
            report.level = Some(level);
            report.degenerate = dec.degenerate;
            if dec.degenerate {
                report.notes.push("degenerate component extraction".into());
            }
            if comp.touching {
                report.notes.push("component merged at a critical point on the level curve".into());
            }
            Ok(report)
        })
        .collect()
}

/// Monic polynomial with connected `{|f| <= 1}`: capacity is exactly 1.
pub fn verify_theorem_a(f: &Poly, tol: &Tolerances) -> Result<MarkovReport> {
    let d = require_degree(f, 1)?;
    if !f.is_monic(tol.monic) {
        return Err(Error::NotMonic { leading: f.leading() });
    }
    let conn = is_connected(f, 1.0, tol)?;
    if !conn.connected {
        return Err(Error::Disconnected {
            level: 1.0,
            critical_value: conn.worst_critical_value.unwrap_or_default(),
        });
    }
    let dec = extract(f, 1.0, default_phases(d), tol)?;
    let sup_fprime = dec
        .components
        .iter()
        .map(|c| sup_on_component(&f.derivative(), c, tol.sup))
        .fold(0.0, f64::max);
    let cap = CapacityEstimate::oracle(1.0, CapacityMethod::OracleLemniscate);
    let mut report = MarkovReport::with_capacity(Theorem::A, d, cap, 1.0, sup_fprime, tol)?;
    report.level = Some(1.0);
    report.degenerate = dec.degenerate;
    Ok(report)
}

/// Where a [`quotient`] is measured.
#[derive(Debug, Clone, Copy)]
pub enum QuotientTarget<'a> {
    Set(&'a Continuum),
    Component(&'a LevelSetComponent),
}

/// `cap * sup |f'| / (bound(d) * sup |f|)`.
pub fn quotient(f: &Poly, target: QuotientTarget<'_>, config: &CapacityConfig, tol: &Tolerances) -> Result<f64> {
    let d = require_degree(f, 1)?;
    let (cap, sup_f, sup_fprime) = match target {
        QuotientTarget::Set(s) => (
            capacity_of_set(s, config)?.value,
            s.sup_modulus(f, tol.sup),
            s.sup_modulus(&f.derivative(), tol.sup),
        ),
        QuotientTarget::Component(c) => (
            capacity_of_component(c, config, tol)?.value,
            sup_on_component(f, c, tol.sup),
            sup_on_component(&f.derivative(), c, tol.sup),
        ),
    };
    Ok(cap * sup_fprime / (bound(d)? * sup_f))
}

/// Parameters of `f = a T_d(c z + b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalCertificate {
    pub is_extremal: bool,
    /// Recovered parameters, when the recovery itself succeeded.
    pub params: Option<ChebyshevParams>,
    /// Largest coefficient mismatch relative to `max(1, max |f_k|)`.
    pub mismatch: f64,
}

impl ExtremalCertificate {
    fn rejected() -> Self {
        ExtremalCertificate {
            is_extremal: false,
            params: None,
            mismatch: f64::INFINITY,
        }
    }
}

fn recover_chebyshev_params(f: &Poly, tol: &Tolerances) -> Option<ChebyshevParams> {
    let d = f.degree();
    let coeffs = f.coeffs();
    let one = Complex64::new(1.0, 0.0);
    match d {
        1 => Some(ChebyshevParams {
            a: one,
            b: coeffs[0],
            c: coeffs[1],
        }),
        2 => {
            let crit = f.critical_points_with(&root_finder(tol)).ok()?;
            let z = crit[0];
            let a = -f.eval(z);
            if a.norm() == 0.0 {
                return None;
            }
            let c = (coeffs[2] / (2.0 * a)).sqrt();
            Some(ChebyshevParams { a, b: -c * z, c })
        }
        _ => {
            let crit = f.critical_points_with(&root_finder(tol)).ok()?;
            let mut far = (0, 0, 0.0);
            for i in 0..crit.len() {
                for j in i + 1..crit.len() {
                    let dist = (crit[i] - crit[j]).norm();
                    if dist > far.2 {
                        far = (i, j, dist);
                    }
                }
            }
            if far.2 == 0.0 {
                return None;
            }
            let mut c = 2.0 * (PI / d as f64).cos() / (crit[far.0] - crit[far.1]);
            if c.re < 0.0 || (c.re == 0.0 && c.im < 0.0) {
                c = -c;
            }
            let centroid = crit.iter().sum::<Complex64>() / crit.len() as f64;
            let b = -c * centroid;
            let a = coeffs[d] / (2f64.powi(d as i32 - 1) * c.powu(d as u32));
            Some(ChebyshevParams { a, b, c })
        }
    }
}

/// Decides whether `f = a T_d(c z + b)` with `|a| = 1` by recovering the
/// parameters from the critical points and rebuilding `f`.
pub fn certify_extremal(f: &Poly, tol: &Tolerances) -> ExtremalCertificate {
    if f.is_zero() || f.degree() == 0 {
        return ExtremalCertificate::rejected();
    }
    let Some(params) = recover_chebyshev_params(f, tol) else {
        return ExtremalCertificate::rejected();
    };
    let Ok(rebuilt) = Poly::chebyshev(f.degree()).affine_compose(params.c, params.b) else {
        return ExtremalCertificate::rejected();
    };
    let rebuilt = rebuilt.scale(params.a);
    let scale = f.max_coeff_norm().max(1.0);
    let mismatch = f
        .coeffs()
        .iter()
        .zip(rebuilt.coeffs())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale;
    let unimodular = (params.a.norm() - 1.0).abs() <= tol.cert;
    ExtremalCertificate {
        is_extremal: rebuilt.degree() == f.degree() && mismatch <= tol.cert && unimodular,
        params: Some(params),
        mismatch,
    }
}

/// `g(z) = f(alpha z + beta)` together with the transformed component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedPair {
    pub g: Poly,
    pub component: LevelSetComponent,
    pub alpha: f64,
    pub beta: Complex64,
    /// `|leading coefficient of g| <= 1 + tol_verify`.
    pub leading_bounded: bool,
}

/// Rescales so that the component has capacity 1 and contains the origin.
/// `beta` is the zero inside the component with the largest real part
/// (ties by imaginary part).
pub fn normalize_pair(
    f: &Poly,
    comp: &LevelSetComponent,
    cap: &CapacityEstimate,
    tol: &Tolerances,
) -> Result<NormalizedPair> {
    let alpha = cap.value;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("capacity estimate {alpha} is not positive")));
    }
    let beta = comp
        .zeros_inside
        .iter()
        .copied()
        .max_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .ok_or_else(|| Error::InvalidArgument("component contains no zero".into()))?;
    let g = f.affine_compose(Complex64::new(alpha, 0.0), beta)?;
    let to_new = |z: &Complex64| (z - beta) / alpha;
    let component = LevelSetComponent {
        label: comp.label,
        level: comp.level,
        poly: g.clone(),
        m: comp.m,
        boundary: comp
            .boundary
            .iter()
            .map(|s| s.iter().map(to_new).collect())
            .collect(),
        zeros_inside: comp.zeros_inside.iter().map(to_new).collect(),
        touching: comp.touching,
    };
    let leading_bounded = g.leading().norm() <= 1.0 + tol_for(cap.method, tol);
    Ok(NormalizedPair {
        g,
        component,
        alpha,
        beta,
        leading_bounded,
    })
}

/// Random monic polynomial of degree `d` with lower coefficients uniform in `|c| <= 2`.
pub fn random_monic(d: usize, rng: &mut impl Rng) -> Poly {
    let mut coeffs: Vec<Complex64> = (0..d)
        .map(|_| {
            let r = 2.0 * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, TAU * rng.gen::<f64>())
        })
        .collect();
    coeffs.push(Complex64::new(1.0, 0.0));
    Poly::new(coeffs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub index: usize,
    pub poly: Poly,
    /// Largest component quotient, `None` when the trial failed.
    pub max_quotient: Option<f64>,
    pub components: usize,
    pub all_passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub degree: usize,
    pub seed: u64,
    pub best: MarkovReport,
    pub best_poly: Poly,
    pub trials: Vec<TrialSummary>,
    /// Every report from every trial, in trial order.
    pub reports: Vec<MarkovReport>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.trials.iter().filter(|t| !t.all_passed).count()
    }
}

/// Level-set checks on `trials` seeded random monic polynomials, keeping the
/// largest quotient.
pub fn sweep_random(
    d: usize,
    trials: usize,
    seed: u64,
    config: &CapacityConfig,
    tol: &Tolerances,
) -> Result<SweepOutcome> {
    if d == 0 || trials == 0 {
        return Err(Error::InvalidArgument(format!(
            "sweep needs d >= 1 and trials >= 1, got d = {d}, trials = {trials}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<Poly> = (0..trials).map(|_| random_monic(d, &mut rng)).collect();
    let results: Vec<Result<Vec<MarkovReport>>> = polys
        .par_iter()
        .map(|f| verify_theorem2(f, 1.0, config, tol))
        .collect();

    let mut summaries = Vec::with_capacity(trials);
    let mut reports = Vec::new();
    let mut best: Option<(MarkovReport, Poly)> = None;
    for (index, (f, result)) in polys.iter().zip(results).enumerate() {
        match result {
            Ok(rs) => {
                let max_quotient = rs.iter().map(|r| r.quotient).fold(f64::NEG_INFINITY, f64::max);
                for r in &rs {
                    if best.as_ref().is_none_or(|(b, _)| r.quotient > b.quotient) {
                        best = Some((r.clone(), f.clone()));
                    }
                }
                summaries.push(TrialSummary {
                    index,
                    poly: f.clone(),
                    max_quotient: Some(max_quotient),
                    components: rs.len(),
                    all_passed: rs.iter().all(MarkovReport::passed),
                    error: None,
                });
                reports.extend(rs);
            }
            Err(e) => {
                log::warn!("sweep trial {index} ({f}) failed: {e}");
                summaries.push(TrialSummary {
                    index,
                    poly: f.clone(),
                    max_quotient: None,
                    components: 0,
                    all_passed: false,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    let (best, best_poly) = best.ok_or(Error::SweepFailed { trials })?;
    Ok(SweepOutcome {
        degree: d,
        seed,
        best,
        best_poly,
        trials: summaries,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn cfg() -> CapacityConfig {
        CapacityConfig::default()
    }

    fn unit_segment() -> Continuum {
        Continuum::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()
    }

    fn unit_disc() -> Continuum {
        Continuum::disc(c(0.0, 0.0), 1.0).unwrap()
    }

    fn extremal(d: usize) -> Poly {
        Poly::chebyshev(d)
            .affine_compose(c(2f64.powf(1.0 / d as f64 - 1.0), 0.0), c(0.0, 0.0))
            .unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(bound(1).unwrap(), 1.0);
        assert!((bound(2).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!(bound(0).is_err());
        let big = 1 << 20;
        assert!((bound(big).unwrap() / (big * big) as f64 - 0.5).abs() < 1e-5);
        for d in 1..=64 {
            assert!(bound(d).unwrap() < pommerenke_bound(d));
            if d < 64 {
                assert!(bound(d + 1).unwrap() > bound(d).unwrap());
            }
        }
    }

    #[test]
    fn theorem1_examples() {
        for d in 2..=8 {
            let r = verify_theorem1(&Poly::chebyshev(d), &unit_segment(), &cfg(), &tol()).unwrap();
            let want = 2f64.powf(-1.0 / d as f64);
            assert!((r.quotient - want).abs() < 1e-9, "d={d}: {}", r.quotient);
            assert!(r.passed() && r.pommerenke_rhs > r.rhs);
        }
        let r = verify_theorem1(&Poly::identity(), &unit_disc(), &cfg(), &tol()).unwrap();
        assert!((r.quotient - 1.0).abs() < 1e-12 && r.passed());
        for d in 2..=6 {
            let zd = Poly::monomial(c(1.0, 0.0), d);
            let r = verify_theorem1(&zd, &unit_disc(), &cfg(), &tol()).unwrap();
            let want = 2f64.powf(1.0 - 1.0 / d as f64) / d as f64;
            assert!((r.quotient - want).abs() < 1e-9);
        }
    }

    #[test]
    fn theorem2_examples() {
        let reports = verify_theorem2(&Poly::from_real(&[-1.0, 0.0, 1.0]), 1.0, &cfg(), &tol()).unwrap();
        assert_eq!(reports.len(), 1);
        let r = &reports[0];
        assert_eq!(r.cap.as_ref().unwrap().method, CapacityMethod::OracleLemniscate);
        assert!((r.sup_fprime - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!((r.quotient - 1.0).abs() < 1e-9 && r.passed());

        let reports = verify_theorem2(&Poly::from_real(&[-4.0, 0.0, 1.0]), 1.0, &cfg(), &tol()).unwrap();
        assert_eq!(reports.len(), 2);
        for r in &reports {
            assert_eq!(r.cap.as_ref().unwrap().method, CapacityMethod::DnSearch);
            assert!(r.quotient < 1.0 && r.passed(), "{}", r.quotient);
        }

        for d in 2..=5 {
            let f = Poly::monomial(Complex64::from_polar(1.0, 0.7), d);
            let reports = verify_theorem2(&f, 1.0, &cfg(), &tol()).unwrap();
            assert_eq!(reports.len(), 1);
            let want = 2f64.powf(1.0 - 1.0 / d as f64) / d as f64;
            assert!((reports[0].quotient - want).abs() < 1e-9);
        }
    }

    #[test]
    fn theorem_a_examples() {
        for d in 2..=4 {
            let r = verify_theorem_a(&extremal(d), &tol()).unwrap();
            assert!((r.quotient - 1.0).abs() < 1e-3, "d={d}: {}", r.quotient);
        }
        for d in 2..=5 {
            let r = verify_theorem_a(&Poly::monomial(c(1.0, 0.0), d), &tol()).unwrap();
            assert!((r.quotient - d as f64 / bound(d).unwrap()).abs() < 1e-9);
        }
        let r = verify_theorem_a(&Poly::identity(), &tol()).unwrap();
        assert!((r.quotient - 1.0).abs() < 1e-12);

        assert!(matches!(
            verify_theorem_a(&Poly::from_real(&[-1.0, 0.0, 2.0]), &tol()),
            Err(Error::NotMonic { .. })
        ));
        assert!(matches!(
            verify_theorem_a(&Poly::from_real(&[-4.0, 0.0, 1.0]), &tol()),
            Err(Error::Disconnected { .. })
        ));
    }

    #[test]
    fn corollary_examples() {
        for d in 2..=6 {
            let r = verify_corollary(&Poly::chebyshev(d), &unit_segment(), &tol()).unwrap();
            assert!((r.lhs - 2.0 * (d * d) as f64).abs() < 1e-9);
            assert!((r.quotient - 2f64.powf(-1.0 / d as f64)).abs() < 1e-9);
            assert!(r.strict);
        }
        let r = verify_corollary(&Poly::identity(), &unit_segment(), &tol()).unwrap();
        assert!((r.quotient - 0.5).abs() < 1e-12);

        let f = Poly::from_real(&[-1.0, 0.0, 1.0]);
        let dec = extract(&f, 1.0, 256, &tol()).unwrap();
        let cloud = Continuum::cloud(dec.components[0].dense_boundary(4096), true).unwrap();
        let r = verify_corollary(&f, &cloud, &tol()).unwrap();
        assert!(r.strict && r.quotient < 1.0, "{}", r.quotient);
    }

    #[test]
    fn quotient_is_scale_invariant_in_f() {
        let s = Continuum::polyline(vec![c(-1.0, 0.0), c(0.0, 0.8), c(1.2, 0.1)]).unwrap();
        let f = Poly::from_roots(&[c(0.3, 0.2), c(-0.5, 0.0), c(0.9, -0.4)]);
        let q = quotient(&f, QuotientTarget::Set(&s), &cfg(), &tol()).unwrap();
        for lambda in [c(3.0, 0.0), c(-0.01, 0.2), c(1e4, -1e4)] {
            let ql = quotient(&f.scale(lambda), QuotientTarget::Set(&s), &cfg(), &tol()).unwrap();
            assert!((q - ql).abs() < 1e-10, "{q} vs {ql}");
        }
    }

    #[test]
    fn quotient_is_affine_invariant_on_segment() {
        let f = Poly::from_roots(&[c(0.3, 0.2), c(-0.5, 0.0), c(0.9, -0.4), c(0.1, 0.1)]);
        let s = unit_segment();
        let q = quotient(&f, QuotientTarget::Set(&s), &cfg(), &tol()).unwrap();
        // g(z) = f((z - b) / a) on the image segment a [-1, 1] + b
        let (a, b) = (c(0.7, 1.9), c(-3.0, 2.0));
        let g = f.affine_compose(1.0 / a, -b / a).unwrap();
        let image = Continuum::segment(b - a, b + a).unwrap();
        let qg = quotient(&g, QuotientTarget::Set(&image), &cfg(), &tol()).unwrap();
        assert!((q - qg).abs() < 1e-9, "{q} vs {qg}");
    }

    #[test]
    fn certify_examples() {
        let cert = certify_extremal(&Poly::from_real(&[-1.0, 0.0, 1.0]), &tol());
        assert!(cert.is_extremal);
        let p = cert.params.unwrap();
        assert!((p.a - c(1.0, 0.0)).norm() < 1e-12);
        assert!(p.b.norm() < 1e-12);
        assert!((p.c - c(0.5f64.sqrt(), 0.0)).norm() < 1e-12);

        assert!(!certify_extremal(&Poly::from_real(&[-4.0, 0.0, 1.0]), &tol()).is_extremal);

        let cert = certify_extremal(&Poly::chebyshev(3), &tol());
        assert!(cert.is_extremal);
        let p = cert.params.unwrap();
        assert!((p.a - c(1.0, 0.0)).norm() < 1e-12 && p.b.norm() < 1e-12 && (p.c - c(1.0, 0.0)).norm() < 1e-12);

        assert!(!certify_extremal(&Poly::from_roots(&[c(0.0, 0.0), c(1.0, 0.0), c(0.3, 0.9)]), &tol()).is_extremal);
        assert!(!certify_extremal(&Poly::monomial(c(1.0, 0.0), 4), &tol()).is_extremal);
        assert!(certify_extremal(&Poly::new(vec![c(0.3, 1.0), c(2.0, -1.0)]), &tol()).is_extremal);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn certify_recovers_random_chebyshev_forms(
            d in 1usize..=6,
            arg_a in 0.0..TAU,
            b_re in -1.0..1.0f64, b_im in -1.0..1.0f64,
            c_mod in 0.3..2.0f64, c_arg in 0.0..TAU,
        ) {
            let a = Complex64::from_polar(1.0, arg_a);
            let cc = Complex64::from_polar(c_mod, c_arg);
            let f = Poly::chebyshev(d).affine_compose(cc, c(b_re, b_im)).unwrap().scale(a);
            let cert = certify_extremal(&f, &tol());
            prop_assert!(cert.is_extremal, "d={} mismatch {}", d, cert.mismatch);
            prop_assert!((cert.params.unwrap().a.norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn normalize_examples() {
        let t = tol();
        let f = Poly::from_real(&[-1.0, 0.0, 1.0]);
        let dec = extract(&f, 1.0, 64, &t).unwrap();
        let cap = capacity_of_component(&dec.components[0], &cfg(), &t).unwrap();
        let n = normalize_pair(&f, &dec.components[0], &cap, &t).unwrap();
        assert!((n.beta - c(1.0, 0.0)).norm() < 1e-15);
        assert!((&n.g - &Poly::from_real(&[0.0, 2.0, 1.0])).max_coeff_norm() < 1e-15);
        assert!(n.leading_bounded);
        assert!(n.component.zeros_inside.iter().any(|z| z.norm() < 1e-15));

        let f = Poly::from_real(&[0.0, 0.0, 4.0]);
        let dec = extract(&f, 1.0, 64, &t).unwrap();
        let cap = capacity_of_component(&dec.components[0], &cfg(), &t).unwrap();
        assert!((cap.value - 0.5).abs() < 1e-15);
        let n = normalize_pair(&f, &dec.components[0], &cap, &t).unwrap();
        assert!((&n.g - &Poly::from_real(&[0.0, 0.0, 1.0])).max_coeff_norm() < 1e-12);
        for z in n.component.boundary_points() {
            assert!((z.norm() - 1.0).abs() < 1e-9);
        }

        let f = Poly::from_real(&[0.0, 2.0]);
        let dec = extract(&f, 1.0, 64, &t).unwrap();
        let cap = capacity_of_component(&dec.components[0], &cfg(), &t).unwrap();
        let n = normalize_pair(&f, &dec.components[0], &cap, &t).unwrap();
        assert!((&n.g - &Poly::identity()).max_coeff_norm() < 1e-15);
    }

    #[test]
    fn sweep_degree_one_is_equality() {
        let out = sweep_random(1, 10, 7, &cfg(), &tol()).unwrap();
        assert_eq!(out.trials.len(), 10);
        for r in &out.reports {
            assert!((r.quotient - 1.0).abs() < 1e-9, "{}", r.quotient);
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let small = CapacityConfig::default().with_max_n(32);
        let a = sweep_random(2, 12, 99, &small, &tol()).unwrap();
        let b = sweep_random(2, 12, 99, &small, &tol()).unwrap();
        assert_eq!(a, b);
        assert!(a.best.quotient <= 1.0 + a.best.tol_verify);
        assert!(sweep_random(0, 3, 1, &small, &tol()).is_err());
    }

    #[test]
    fn csv_row_has_header_arity() {
        let r = verify_theorem1(&Poly::chebyshev(3), &unit_segment(), &cfg(), &tol()).unwrap();
        assert_eq!(r.csv_row().split(',').count(), CSV_HEADER.split(',').count());
        assert!(r.csv_row().starts_with("1,3,,"));
    }
}
