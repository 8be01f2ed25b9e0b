//! Property tests across the pipeline stages.

mod common;

use std::collections::HashMap;

use proptest::prelude::*;

use persistence_surfaces::bandwidth::{cv_score, histogram_density, mc_expected_density, OracleConfig};
use persistence_surfaces::filtration::{
    cayley_menger_circumradius, cech_value, Filtration, FiltrationKind, Simplex,
};
use persistence_surfaces::geometry::{PointCloud, Sampler};
use persistence_surfaces::persistence::{
    compute_persistence, persistence_by_reduction, transform_birth_persistence, Coordinates, PersistenceDiagram,
};
use persistence_surfaces::representation::{
    kernel_value, mean_surface, persistence_surface, pool, Atom, Bandwidth, DiagramMeasure, GridSpec, Weight,
};

fn cloud_strategy(max_points: usize) -> impl Strategy<Value = PointCloud> {
    (2usize..=3).prop_flat_map(move |dim| {
        prop::collection::vec(prop::collection::vec(-1.0f64..1.0, dim), 1..=max_points)
            .prop_map(|pts| PointCloud::new(pts).unwrap())
    })
}

fn kind_strategy() -> impl Strategy<Value = FiltrationKind> {
    prop_oneof![Just(FiltrationKind::Rips), Just(FiltrationKind::Cech)]
}

fn measure_strategy() -> impl Strategy<Value = DiagramMeasure> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0.01f64..2.0), 0..6).prop_map(|atoms| {
        DiagramMeasure::new(
            atoms.into_iter().map(|(x, y, mass)| Atom { x, y, mass }).collect(),
            Coordinates::BirthPersistence,
        )
    })
}

fn values_by_simplex(f: &Filtration) -> HashMap<Simplex, f64> {
    f.cells().iter().map(|c| (c.simplex.clone(), c.value)).collect()
}

fn sorted_diagrams(f: &Filtration, max_hom: usize) -> Vec<Vec<(f64, f64)>> {
    compute_persistence(f, max_hom).unwrap().iter().map(PersistenceDiagram::sorted_pairs).collect()
}

fn close(a: &[(f64, f64)], b: &[(f64, f64)], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| (p.0 - q.0).abs() <= tol && (p.1 - q.1).abs() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn filtrations_are_valid(cloud in cloud_strategy(9), kind in kind_strategy()) {
        let f = Filtration::build(kind, &cloud, 3, f64::INFINITY);
        prop_assert!(f.validate().is_ok());
        for w in f.cells().windows(2) {
            prop_assert!(w[0].value <= w[1].value);
        }
    }

    #[test]
    fn rips_and_cech_interleave(cloud in cloud_strategy(8)) {
        let rips = values_by_simplex(&Filtration::build(FiltrationKind::Rips, &cloud, 3, f64::INFINITY));
        let cech = values_by_simplex(&Filtration::build(FiltrationKind::Cech, &cloud, 3, f64::INFINITY));
        prop_assert_eq!(rips.len(), cech.len());
        for (simplex, &c) in &cech {
            let r = rips[simplex];
            prop_assert!(c <= r + 1e-12 && r <= 2.0 * c + 1e-12, "{simplex:?}: čech {c}, rips {r}");
        }
    }

    #[test]
    fn permuting_points_keeps_diagrams(cloud in cloud_strategy(8), kind in kind_strategy(), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..cloud.len()).collect();
        let mut state = seed;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a = sorted_diagrams(&Filtration::build(kind, &cloud, 3, f64::INFINITY), 2);
        let b = sorted_diagrams(&Filtration::build(kind, &cloud.permuted(&order), 3, f64::INFINITY), 2);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(close(x, y, 1e-12), "{x:?} vs {y:?}");
        }
    }

    #[test]
    fn scaling_scales_values(cloud in cloud_strategy(8), kind in kind_strategy(), c in 0.1f64..10.0) {
        let a = Filtration::build(kind, &cloud, 2, f64::INFINITY);
        let b = values_by_simplex(&Filtration::build(kind, &cloud.map_coords(|_, _, x| c * x), 2, f64::INFINITY));
        for cell in a.cells() {
            let scaled = b[&cell.simplex];
            prop_assert!((scaled - c * cell.value).abs() <= 1e-12 * (1.0 + scaled.abs()));
        }
    }

    #[test]
    fn perturbation_moves_values_boundedly(
        cloud in cloud_strategy(8),
        kind in kind_strategy(),
        eps in 0.0f64..0.05,
        noise in prop::collection::vec(-1.0f64..1.0, 24),
    ) {
        // Each coordinate moves by at most eps/√3, so each point by at most eps.
        let shift = eps / 3f64.sqrt();
        let moved = cloud.map_coords(|i, axis, x| x + shift * noise[(i * 3 + axis) % noise.len()]);
        let lipschitz = if kind == FiltrationKind::Rips { 2.0 } else { 1.0 };
        let a = Filtration::build(kind, &cloud, 2, f64::INFINITY);
        let b = values_by_simplex(&Filtration::build(kind, &moved, 2, f64::INFINITY));
        for cell in a.cells() {
            prop_assert!((b[&cell.simplex] - cell.value).abs() <= lipschitz * eps + 1e-12);
        }
        // Sorted H0 deaths are the sorted spanning-tree edge values, which
        // inherit the same bound.
        let da = sorted_diagrams(&a, 0);
        let db = sorted_diagrams(&Filtration::build(kind, &moved, 1, f64::INFINITY), 0);
        let deaths = |d: &[(f64, f64)]| {
            let mut v: Vec<f64> = d.iter().map(|p| p.1).collect();
            v.resize(cloud.len(), 0.0);
            v.sort_by(f64::total_cmp);
            v
        };
        for (x, y) in deaths(&da[0]).iter().zip(deaths(&db[0]).iter()) {
            prop_assert!((x - y).abs() <= lipschitz * eps + 1e-12);
        }
    }

    #[test]
    fn cech_value_is_the_smallest_enclosing_ball(cloud in cloud_strategy(5)) {
        let refs: Vec<&[f64]> = cloud.points().collect();
        let vertices: Vec<u32> = (0..cloud.len() as u32).collect();
        let value = cech_value(&cloud, &vertices);
        prop_assert!((value - common::brute_force_meb_radius(&refs)).abs() <= 1e-9);
        if cloud.len() <= cloud.dim() + 1 {
            if let Ok((r, bary)) = cayley_menger_circumradius(&refs) {
                if bary.iter().all(|&w| w > 1e-9) {
                    prop_assert!((value - r).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn cohomology_matches_boundary_reduction(cloud in cloud_strategy(9), kind in kind_strategy()) {
        let f = Filtration::build(kind, &cloud, 3, f64::INFINITY);
        let fast = compute_persistence(&f, 2).unwrap();
        let reference = persistence_by_reduction(&f);
        for s in 0..=2 {
            prop_assert_eq!(fast[s].sorted_pairs(), reference[s].sorted_pairs());
            prop_assert_eq!(fast[s].discarded_infinite, reference[s].discarded_infinite);
        }
    }

    #[test]
    fn pairs_account_for_every_simplex(cloud in cloud_strategy(9), kind in kind_strategy(), cutoff in 0.2f64..3.0) {
        let f = Filtration::build(kind, &cloud, 3, cutoff);
        let diagrams = compute_persistence(&f, 2).unwrap();
        let classes = |s: usize| diagrams[s].len() + diagrams[s].dropped_zero + diagrams[s].discarded_infinite;
        for s in 0..=2 {
            let simplices = f.cells().iter().filter(|c| c.simplex.dim() == s).count();
            let killers = if s == 0 { 0 } else { diagrams[s - 1].len() + diagrams[s - 1].dropped_zero };
            prop_assert_eq!(simplices, classes(s) + killers);
        }
    }

    #[test]
    fn betti_numbers_match_ranks(cloud in cloud_strategy(7), kind in kind_strategy(), r in 0.0f64..2.0) {
        let f = Filtration::build(kind, &cloud, 3, f64::INFINITY);
        let diagrams = compute_persistence(&f, 2).unwrap();
        for s in 0..=2 {
            let finite = diagrams[s].intervals().filter(|&(b, d)| b <= r && r < d).count();
            prop_assert_eq!(finite + diagrams[s].discarded_infinite, common::f2_betti(&f, s, r));
        }
    }

    #[test]
    fn surfaces_are_linear(m1 in measure_strategy(), m2 in measure_strategy(), h in 0.05f64..0.5) {
        let bw = Bandwidth::isotropic(h).unwrap();
        let spec = GridSpec::new((-0.5, 1.5), (-0.5, 1.5), 40, 40).unwrap();
        let mut both = m1.clone();
        both.atoms.extend(m2.atoms.iter().copied());
        let sum = persistence_surface(&both, &bw, spec);
        let a = persistence_surface(&m1, &bw, spec);
        let b = persistence_surface(&m2, &bw, spec);
        for k in 0..sum.values.len() {
            let expected = a.values[k] + b.values[k];
            prop_assert!((sum.values[k] - expected).abs() <= 1e-12 * expected.abs().max(1e-300));
        }
    }

    #[test]
    fn surfaces_conserve_mass(m in measure_strategy(), h in 0.05f64..0.3) {
        let bw = Bandwidth::isotropic(h).unwrap();
        let spec = GridSpec::new((-8.0 * h, 1.0 + 8.0 * h), (-8.0 * h, 1.0 + 8.0 * h), 300, 300).unwrap();
        let integral = persistence_surface(&m, &bw, spec).integral();
        let mass = m.total_mass();
        prop_assert!((integral - mass).abs() <= 1e-4 * mass.max(1e-12));
    }

    #[test]
    fn mean_surface_is_the_pooled_surface(ms in prop::collection::vec(measure_strategy(), 1..5), h in 0.05f64..0.5) {
        let bw = Bandwidth::isotropic(h).unwrap();
        let spec = GridSpec::new((0.0, 1.0), (0.0, 1.0), 20, 20).unwrap();
        let mean = mean_surface(&ms, &bw, spec).unwrap();
        let n = ms.len() as f64;
        for k in 0..mean.values.len() {
            let direct: f64 = ms.iter().map(|m| persistence_surface(m, &bw, spec).values[k]).sum::<f64>() / n;
            prop_assert!((mean.values[k] - direct).abs() <= 1e-12 * direct.abs().max(1e-300));
        }
        prop_assert!((pool(&ms).unwrap().total_mass() * n - ms.iter().map(DiagramMeasure::total_mass).sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn kernel_scaling_identity(ux in -3.0f64..3.0, uy in -3.0f64..3.0, h in 0.01f64..10.0) {
        let scaled = kernel_value(&Bandwidth::isotropic(h).unwrap(), ux, uy);
        let unit = kernel_value(&Bandwidth::isotropic(1.0).unwrap(), ux / h, uy / h) / (h * h);
        prop_assert!((scaled - unit).abs() <= 1e-12 * unit.max(1e-300));
    }

    #[test]
    fn cv_score_symmetries(ms in prop::collection::vec(measure_strategy(), 2..5), h in 0.05f64..0.5, c in 0.1f64..10.0) {
        let bw = Bandwidth::isotropic(h).unwrap();
        let score = cv_score(&ms, &bw).unwrap();
        let mut reversed = ms.clone();
        reversed.reverse();
        prop_assert!((cv_score(&reversed, &bw).unwrap() - score).abs() <= 1e-12 * (1.0 + score.abs()));
        let scaled: Vec<DiagramMeasure> = ms.iter().map(|m| m.scaled(c)).collect();
        let expected = c * c * score;
        prop_assert!((cv_score(&scaled, &bw).unwrap() - expected).abs() <= 1e-10 * (1.0 + expected.abs()));
    }
}

#[test]
fn oracle_is_deterministic_and_linear() {
    let spec = GridSpec::new((0.0, 0.3), (0.0, 0.3), 30, 30).unwrap();
    let config = OracleConfig {
        sampler: Sampler::UniformSquare,
        n: 40,
        filtration: FiltrationKind::Rips,
        hom_dim: 1,
        weight: Weight::Pers3,
        grid: spec,
        replications: 6,
        seed: 5,
    };
    let a = mc_expected_density(&config).unwrap();
    let b = mc_expected_density(&config).unwrap();
    assert_eq!(a.grid, b.grid);

    let d1 = transform_birth_persistence(&PersistenceDiagram::new(1, vec![(0.05, 0.2), (0.1, 0.12)])).unwrap();
    let d2 = transform_birth_persistence(&PersistenceDiagram::new(1, vec![(0.02, 0.25)])).unwrap();
    let both = histogram_density(&[d1.clone(), d2.clone()], Weight::Pers3, spec, 1);
    let first = histogram_density(&[d1], Weight::Pers3, spec, 1);
    let second = histogram_density(&[d2], Weight::Pers3, spec, 1);
    for k in 0..both.grid.values.len() {
        let expected = 0.5 * (first.grid.values[k] + second.grid.values[k]);
        assert!((both.grid.values[k] - expected).abs() <= 1e-12 * expected.abs().max(1e-300));
    }
}
