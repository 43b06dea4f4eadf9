mod common;

use bn_core::search::{zykov_trajectory, zykov_trajectory_oriented, ZykovOrientation};
use bn_core::stability::stability_experiment;
use bn_core::{clique_number, Graph};

#[test]
fn c5_trajectories_surface_real_decreases() {
    let c5 = Graph::cycle(5).unwrap();
    let mut flagged = 0;
    for seed in 0..100 {
        let t = zykov_trajectory(&c5, 20, seed);
        assert_eq!(t.steps.len(), 21);
        assert!(t.omega_monotone);
        // replay the recorded pairs and recompute λ1 with an independent solver
        let mut g = c5.clone();
        let mut prev = common::nalgebra_eigenvalues(&g)[0];
        let mut drops = 0;
        for step in &t.steps[1..] {
            let (u, v) = step.pair.unwrap();
            g = g.zykov(u, v).unwrap();
            let l1 = common::nalgebra_eigenvalues(&g)[0];
            assert!((l1 - step.lambda1).abs() < 1e-9);
            assert_eq!(clique_number(&g), step.omega);
            drops += (l1 < prev - 1e-9) as usize;
            prev = l1;
        }
        assert_eq!(drops == 0, t.lambda1_monotone, "seed {seed}");
        assert_eq!(t.findings.len(), drops);
        flagged += (drops > 0) as usize;

        let oriented = zykov_trajectory_oriented(&c5, 20, seed, ZykovOrientation::PerronAscending);
        assert!(oriented.lambda1_monotone, "seed {seed}: {:?}", oriented.findings);
    }
    assert_eq!(flagged, 58);
}

#[test]
fn mean_edit_distance_grows_with_deletions() {
    let grid: Vec<usize> = (0..=10).collect();
    let rows = stability_experiment(12, &grid, 50, 77).unwrap();
    let means: Vec<f64> = grid
        .iter()
        .map(|&k| rows.iter().filter(|r| r.k == k).map(|r| r.edits_normalized).sum::<f64>() / 50.0)
        .collect();
    assert!(means.windows(2).all(|w| w[0] <= w[1]), "{means:?}");
    assert_eq!(means[0], 0.0);
}

#[test]
fn local_search_scales_past_the_exact_limit() {
    let rows = stability_experiment(30, &[0, 5], 3, 1).unwrap();
    for r in &rows {
        assert_eq!(r.method, bn_core::stability::EditMethod::LocalSearch);
        assert!(r.edits <= r.k, "{r:?}");
    }
}
