mod common;

use edenlab::eden::{eden_grow_with, sample_next_site, GrowthOptions};
use edenlab::histories::{exact_eden_distribution, DEFAULT_MAX_HISTORIES};
use edenlab::lattice::{LatticeAnimal, PerimeterMetric, Site};
use edenlab::rng::run_rng;
use edenlab::stats::mean_stderr;
use num_traits::ToPrimitive;

fn l_tromino() -> LatticeAnimal {
    let mut a = LatticeAnimal::at_origin(2).unwrap();
    a.add_site(Site::from([1, 0])).unwrap();
    a.add_site(Site::from([1, 1])).unwrap();
    a
}

#[test]
fn corner_of_l_tromino_chosen_a_quarter_of_the_time() {
    let a = l_tromino();
    let corner = Site::from([0, 1]);
    let mut rng = run_rng(11, 0);
    let trials = 100_000u32;
    let hits = (0..trials)
        .filter(|_| sample_next_site(&a, &mut rng) == corner)
        .count() as f64;
    let n = f64::from(trials);
    let sigma = (n * 0.25 * 0.75).sqrt();
    assert!((hits - 0.25 * n).abs() < 3.0 * sigma, "hits = {hits}");
}

#[test]
fn every_first_step_direction_is_equally_likely() {
    let a = LatticeAnimal::at_origin(2).unwrap();
    let mut rng = run_rng(5, 0);
    let mut counts = std::collections::BTreeMap::new();
    let trials = 40_000;
    for _ in 0..trials {
        *counts.entry(sample_next_site(&a, &mut rng)).or_insert(0usize) += 1;
    }
    assert_eq!(counts.len(), 4);
    let sigma = (trials as f64 * 0.25 * 0.75).sqrt();
    for c in counts.values() {
        assert!((*c as f64 - trials as f64 / 4.0).abs() < 3.5 * sigma);
    }
}

#[test]
fn monte_carlo_expected_perimeter_matches_exact() {
    for m in 1..=5 {
        let exact = exact_eden_distribution(2, m, DEFAULT_MAX_HISTORIES)
            .unwrap()
            .expected_perimeter(PerimeterMetric::Edges)
            .to_f64()
            .unwrap();
        let samples: Vec<f64> = (0..20_000)
            .map(|i| {
                eden_grow_with(2, m as u64, 99, i, GrowthOptions::default())
                    .unwrap()
                    .animal()
                    .perimeter_edge_count() as f64
            })
            .collect();
        let (mean, se) = mean_stderr(&samples);
        if se == 0.0 {
            assert_eq!(mean, exact);
        } else {
            assert!((mean - exact).abs() < 3.0 * se, "m={m}: {mean} ± {se} vs {exact}");
        }
    }
}

#[test]
fn three_site_clusters_have_eight_perimeter_edges() {
    for i in 0..1000 {
        let run = eden_grow_with(2, 2, 7, i, GrowthOptions::default()).unwrap();
        assert_eq!(run.animal().perimeter_edge_count(), 8);
    }
}
