use std::collections::VecDeque;

use capmarkov::levelset::{default_phases, extract, is_connected, winding_number};
use capmarkov::{Poly, Tolerances};
use num_complex::Complex64;
use proptest::prelude::*;

const GRID: usize = 700;

/// Components of `{|f| <= level}` by flood fill on a pixel grid. Returns, for
/// each zero, the label of the pixel region holding it.
fn flood_labels(f: &Poly, level: f64, zeros: &[Complex64]) -> Vec<usize> {
    let reach = zeros.iter().map(|z| z.norm()).fold(0.0, f64::max) + level.powf(1.0 / f.degree() as f64) + 0.1;
    let step = 2.0 * reach / GRID as f64;
    let at = |i: usize, j: usize| Complex64::new(-reach + (i as f64 + 0.5) * step, -reach + (j as f64 + 0.5) * step);
    let cell = |z: Complex64| {
        let i = ((z.re + reach) / step).floor() as usize;
        let j = ((z.im + reach) / step).floor() as usize;
        (i.min(GRID - 1), j.min(GRID - 1))
    };
    let mut inside: Vec<bool> = (0..GRID * GRID)
        .map(|k| f.eval(at(k % GRID, k / GRID)).norm() <= level)
        .collect();
    for &z in zeros {
        let (i, j) = cell(z);
        inside[j * GRID + i] = true;
    }
    let mut label = vec![usize::MAX; GRID * GRID];
    let mut next = 0;
    let mut out = Vec::new();
    for &z in zeros {
        let (i, j) = cell(z);
        let start = j * GRID + i;
        if label[start] == usize::MAX {
            let mut queue = VecDeque::from([start]);
            label[start] = next;
            while let Some(k) = queue.pop_front() {
                let (i, j) = (k % GRID, k / GRID);
                let mut visit = |n: usize| {
                    if inside[n] && label[n] == usize::MAX {
                        label[n] = next;
                        queue.push_back(n);
                    }
                };
                if i > 0 {
                    visit(k - 1);
                }
                if i + 1 < GRID {
                    visit(k + 1);
                }
                if j > 0 {
                    visit(k - GRID);
                }
                if j + 1 < GRID {
                    visit(k + GRID);
                }
            }
            next += 1;
        }
        out.push(label[start]);
    }
    out
}

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

/// Roots in the unit square and a level well away from every critical value.
fn instance() -> impl Strategy<Value = (Vec<Complex64>, f64)> {
    (1usize..=5)
        .prop_flat_map(|d| (prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), d), 0.0..1.0f64))
        .prop_filter_map("level too close to a critical value", |(roots, u)| {
            let roots: Vec<Complex64> = roots.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            let f = Poly::from_roots(&roots);
            let mut crit: Vec<f64> = f.critical_values().ok()?.iter().map(|v| v.norm()).collect();
            crit.retain(|&v| v > 1e-3);
            crit.sort_by(f64::total_cmp);
            // Candidate levels: geometric midpoints between critical moduli
            // and one on either side.
            let mut levels = Vec::new();
            match (crit.first(), crit.last()) {
                (Some(&lo), Some(&hi)) => {
                    levels.push(lo / 2.0);
                    levels.extend(crit.windows(2).filter(|w| w[1] > 1.5 * w[0]).map(|w| (w[0] * w[1]).sqrt()));
                    levels.push(hi * 2.0);
                }
                _ => levels.push(0.5),
            }
            let level = levels[((u * levels.len() as f64) as usize).min(levels.len() - 1)];
            (level > 1e-2).then_some((roots, level))
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn components_agree_with_flood_fill((roots, level) in instance()) {
        let tol = Tolerances::default();
        let f = Poly::from_roots(&roots);
        let dec = extract(&f, level, default_phases(f.degree()), &tol).unwrap();
        prop_assert!(!dec.degenerate);

        // Every zero lies in exactly one component.
        let mut owner = Vec::new();
        for r in &roots {
            let holders: Vec<usize> = dec
                .components
                .iter()
                .filter(|c| c.contains_zero_near(*r, 1e-6))
                .map(|c| c.label)
                .collect();
            prop_assert_eq!(holders.len(), 1, "zero {} held by {:?}", r, holders);
            owner.push(holders[0]);
        }
        let counted: usize = dec.components.iter().map(|c| c.zeros_inside.len()).sum();
        prop_assert_eq!(counted, f.degree());

        let flood = flood_labels(&f, level, &roots);
        let flood_count = flood.iter().max().unwrap() + 1;
        prop_assert_eq!(dec.components.len(), flood_count);
        prop_assert!(same_partition(&owner, &flood), "{:?} vs {:?}", owner, flood);

        let conn = is_connected(&f, level, &tol).unwrap();
        prop_assert_eq!(conn.connected, flood_count == 1);

        for comp in &dec.components {
            for z in comp.boundary_points() {
                let err = (f.eval(z).norm() - level).abs();
                prop_assert!(err <= 1e-9 * level, "||f({})| - level| = {}", z, err);
            }
            // The boundary winds once around each enclosed zero.
            for r in &comp.zeros_inside {
                let w: f64 = comp.boundary.iter().map(|s| winding_number(s, *r)).sum();
                prop_assert!((w - 1.0).abs() < 1e-6, "winding {} around {}", w, r);
            }
        }
    }
}

#[test]
fn flood_fill_oracle_sanity() {
    // |z^2 - 1| <= 1.5 is connected; |z^2 - 4| <= 1 is two ovals.
    let joined = Poly::from_real(&[-1.0, 0.0, 1.0]);
    let zs = [Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)];
    assert_eq!(flood_labels(&joined, 1.5, &zs), vec![0, 0]);
    let split = Poly::from_real(&[-4.0, 0.0, 1.0]);
    let zs = [Complex64::new(-2.0, 0.0), Complex64::new(2.0, 0.0)];
    assert_eq!(flood_labels(&split, 1.0, &zs), vec![0, 1]);
}
