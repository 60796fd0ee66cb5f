use capmarkov::capacity::{
    capacity_of_component, capacity_of_set as set_capacity, dn_ladder, fekete_search, CapacityEstimate,
};
use capmarkov::deform::{scan, subharmonicity_test, DeformationGrid, GridSpec, PointStatus, SubharmonicityReport};
use capmarkov::levelset::{default_phases, extract, is_connected, sup_on_component, LevelSetDecomposition};
use capmarkov::markov::{
    sweep_random, verify_corollary, verify_theorem1, verify_theorem2_with_phases, verify_theorem_a, MarkovReport,
    Theorem, CSV_HEADER,
};
use capmarkov::sets::Continuum;
use capmarkov::Poly;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::CliError;
use crate::svg::{heat_color, Plot, PALETTE};
use crate::{Format, Outcome, Settings};

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn no_svg(command: &str) -> CliError {
    CliError::Usage(format!("--format svg is not available for {command}"))
}

fn phases(poly: &Poly, s: &Settings) -> usize {
    s.m.unwrap_or_else(|| default_phases(poly.degree()))
}

fn set_outline(plot: &mut Plot, set: &Continuum) {
    let closed = matches!(set, Continuum::Disc { .. });
    match set {
        Continuum::Cloud { points, .. } => plot.dots(points.clone(), 1.0, "#444444"),
        _ => plot.curve(set.sample_boundary(512), closed, "#444444"),
    }
}

fn component_outlines(plot: &mut Plot, dec: &LevelSetDecomposition) {
    for comp in &dec.components {
        let color = PALETTE[comp.label % PALETTE.len()];
        for strand in &comp.boundary {
            plot.curve(strand.clone(), true, color);
        }
        plot.dots(comp.zeros_inside.clone(), 3.0, color);
    }
}

pub fn verify(
    poly: &Poly,
    set: Option<&Continuum>,
    theorem: Theorem,
    s: &Settings,
    format: Format,
) -> Result<Outcome, CliError> {
    let needs_set = matches!(theorem, Theorem::One | Theorem::Corollary);
    let reports: Vec<MarkovReport> = match (theorem, set) {
        (Theorem::One, Some(set)) => vec![verify_theorem1(poly, set, &s.capacity, &s.tol)?],
        (Theorem::Corollary, Some(set)) => vec![verify_corollary(poly, set, &s.tol)?],
        (Theorem::Two, None) => verify_theorem2_with_phases(poly, s.level, phases(poly, s), &s.capacity, &s.tol)?,
        (Theorem::A, None) => vec![verify_theorem_a(poly, &s.tol)?],
        _ if needs_set => return Err(CliError::Usage(format!("--set is required for --theorem {theorem}"))),
        _ => return Err(CliError::Usage(format!("--set is not used by --theorem {theorem}"))),
    };
    let passed = reports.iter().all(MarkovReport::passed);
    let text = match format {
        Format::Json => json(&reports),
        Format::Csv => {
            let mut out = format!("{CSV_HEADER}\n");
            for r in &reports {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            out
        }
        Format::Svg => {
            let worst = reports.iter().map(|r| r.quotient).fold(f64::NEG_INFINITY, f64::max);
            let mut plot = Plot::new(format!("theorem {theorem}: f = {poly}, quotient {worst:.6}"));
            match set {
                Some(set) => set_outline(&mut plot, set),
                None => {
                    let level = if theorem == Theorem::A { 1.0 } else { s.level };
                    component_outlines(&mut plot, &extract(poly, level, phases(poly, s), &s.tol)?);
                }
            }
            plot.render()
        }
    };
    Ok(Outcome { text, passed })
}

pub fn capacity_of_set(set: &Continuum, search: bool, s: &Settings, format: Format) -> Result<Outcome, CliError> {
    let candidates = set.sample_boundary(s.capacity.candidates);
    let estimate = if search {
        dn_ladder(&candidates, &s.capacity)?
    } else {
        set_capacity(set, &s.capacity)?
    };
    let text = match format {
        Format::Json => json(&estimate),
        Format::Csv => estimate_csv(None, &estimate),
        Format::Svg => {
            let mut plot = Plot::new(format!("cap = {:.9} ({})", estimate.value, estimate.method.as_str()));
            set_outline(&mut plot, set);
            if estimate.n > 0 {
                let conf = fekete_search(&candidates, estimate.n, s.capacity.seed, s.capacity.restarts)?;
                plot.dots(conf.points, 3.0, PALETTE[1]);
            }
            plot.render()
        }
    };
    Ok(Outcome { text, passed: true })
}

fn estimate_csv(component: Option<usize>, e: &CapacityEstimate) -> String {
    let label = component.map(|c| c.to_string()).unwrap_or_default();
    let mut out = String::new();
    if e.history.is_empty() {
        out.push_str(&format!("{label},{},0,{:.17e}\n", e.method.as_str(), e.value));
    }
    for (n, dn) in &e.history {
        out.push_str(&format!("{label},{},{n},{dn:.17e}\n", e.method.as_str()));
    }
    out
}

#[derive(Serialize)]
struct ComponentCapacity {
    component: usize,
    zeros_inside: Vec<Complex64>,
    estimate: CapacityEstimate,
}

pub fn capacity_of_levelset(poly: &Poly, s: &Settings, format: Format) -> Result<Outcome, CliError> {
    let dec = extract(poly, s.level, phases(poly, s), &s.tol)?;
    let estimates = dec
        .components
        .iter()
        .map(|comp| {
            Ok(ComponentCapacity {
                component: comp.label,
                zeros_inside: comp.zeros_inside.clone(),
                estimate: capacity_of_component(comp, &s.capacity, &s.tol)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let text = match format {
        Format::Json => json(&estimates),
        Format::Csv => {
            let mut out = String::from("component,method,n,value\n");
            for e in &estimates {
                out.push_str(&estimate_csv(Some(e.component), &e.estimate));
            }
            out
        }
        Format::Svg => {
            let mut plot = Plot::new(format!("components of |{poly}| <= {}", s.level));
            component_outlines(&mut plot, &dec);
            plot.render()
        }
    };
    Ok(Outcome {
        text,
        passed: !dec.degenerate,
    })
}

#[derive(Serialize)]
struct ComponentSummary {
    label: usize,
    zeros_inside: Vec<Complex64>,
    strands: usize,
    boundary_points: usize,
    touching: bool,
    sup_fprime: f64,
}

#[derive(Serialize)]
struct LevelsetSummary {
    poly: Poly,
    level: f64,
    m: usize,
    connected: bool,
    critical_values: Vec<Complex64>,
    touching_points: Vec<Complex64>,
    degenerate: bool,
    components: Vec<ComponentSummary>,
}

pub fn levelset(poly: &Poly, s: &Settings, format: Format) -> Result<Outcome, CliError> {
    let m = phases(poly, s);
    let dec = extract(poly, s.level, m, &s.tol)?;
    let conn = is_connected(poly, s.level, &s.tol)?;
    let fp = poly.derivative();
    let text = match format {
        Format::Json => json(&LevelsetSummary {
            poly: poly.clone(),
            level: s.level,
            m,
            connected: conn.connected,
            critical_values: conn.critical_values.clone(),
            touching_points: dec.touching_points.clone(),
            degenerate: dec.degenerate,
            components: dec
                .components
                .iter()
                .map(|c| ComponentSummary {
                    label: c.label,
                    zeros_inside: c.zeros_inside.clone(),
                    strands: c.boundary.len(),
                    boundary_points: c.boundary_len(),
                    touching: c.touching,
                    sup_fprime: sup_on_component(&fp, c, s.tol.sup),
                })
                .collect(),
        }),
        Format::Csv => {
            let mut out = String::from("component,strand,index,re,im\n");
            for c in &dec.components {
                for (k, strand) in c.boundary.iter().enumerate() {
                    for (j, z) in strand.iter().enumerate() {
                        out.push_str(&format!("{},{k},{j},{:.17e},{:.17e}\n", c.label, z.re, z.im));
                    }
                }
            }
            out
        }
        Format::Svg => {
            let mut plot = Plot::new(format!("|{poly}| <= {}", s.level));
            component_outlines(&mut plot, &dec);
            plot.render()
        }
    };
    Ok(Outcome {
        text,
        passed: !dec.degenerate,
    })
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    degree: usize,
    seed: u64,
    trials: usize,
    failures: usize,
    max_quotient: f64,
    best_poly: &'a Poly,
    best: &'a MarkovReport,
}

pub fn sweep(degree: usize, s: &Settings, format: Format) -> Result<Outcome, CliError> {
    let out = sweep_random(degree, s.trials, s.capacity.seed, &s.capacity, &s.tol)?;
    let failures = out.failures();
    let text = match format {
        Format::Json => json(&SweepSummary {
            degree,
            seed: out.seed,
            trials: out.trials.len(),
            failures,
            max_quotient: out.best.quotient,
            best_poly: &out.best_poly,
            best: &out.best,
        }),
        Format::Csv => {
            let mut text = format!("trial,{CSV_HEADER}\n");
            let mut reports = out.reports.iter();
            for t in &out.trials {
                for r in reports.by_ref().take(t.components) {
                    text.push_str(&format!("{},{}\n", t.index, r.csv_row()));
                }
            }
            text
        }
        Format::Svg => return Err(no_svg("sweep")),
    };
    Ok(Outcome {
        text,
        passed: failures == 0,
    })
}

#[derive(Serialize)]
struct DeformSummary<'a> {
    poly: &'a Poly,
    marker: Complex64,
    grid: GridSpec,
    level: f64,
    valid_points: usize,
    reference_zeros: Option<usize>,
    lipschitz: f64,
    oracle_only: bool,
    subharmonicity: &'a SubharmonicityReport,
}

fn heat_map(grid: &DeformationGrid, report: &SubharmonicityReport, title: String) -> String {
    let mut plot = Plot::new(title);
    let valid = grid.f_values.iter().zip(&grid.valid_mask).filter(|(_, &v)| v).map(|(x, _)| *x);
    let (lo, hi) = valid.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let half = grid.spec.step() / 2.0;
    for (k, &lambda) in grid.lambdas.iter().enumerate() {
        match grid.status[k] {
            PointStatus::OutsideDisc => {}
            PointStatus::Valid => plot.cell(lambda, half, heat_color((grid.f_values[k] - lo) / span)),
            _ => plot.cell(lambda, half, "#bbbbbb".to_string()),
        }
    }
    plot.dots(report.violations.iter().map(|v| v.lambda).collect(), 3.0, "black");
    plot.render()
}

pub fn deform(
    poly: &Poly,
    marker: Complex64,
    grid: GridSpec,
    test_radius: f64,
    s: &Settings,
    format: Format,
) -> Result<Outcome, CliError> {
    let scanned = scan(poly, marker, grid, s.level, &s.capacity, &s.tol)?;
    let tol_subh = if scanned.oracle_only { s.tol.subh } else { s.tol.subh_search };
    let report = subharmonicity_test(&scanned, test_radius, tol_subh, s.tol.constant);
    let text = match format {
        Format::Json => json(&DeformSummary {
            poly,
            marker,
            grid,
            level: s.level,
            valid_points: scanned.valid_count(),
            reference_zeros: scanned.reference_zeros,
            lipschitz: scanned.lipschitz,
            oracle_only: scanned.oracle_only,
            subharmonicity: &report,
        }),
        Format::Csv => scanned.to_csv(),
        Format::Svg => heat_map(&scanned, &report, format!("F(lambda) for {poly} + lambda")),
    };
    Ok(Outcome {
        text,
        passed: report.violations.is_empty(),
    })
}
