mod common;

use edenlab::eden::{sample_next_site, EdenRun};
use edenlab::lattice::{LatticeAnimal, Site};
use edenlab::rng::run_rng;
use proptest::prelude::*;

use common::{cells_of, recount};

fn check(animal: &LatticeAnimal) {
    let d = animal.dim();
    let n = animal.len();
    let (p, i, s) = recount(&cells_of(animal));
    assert_eq!(animal.perimeter_edge_count(), p);
    assert_eq!(animal.interior_edge_count(), i);
    assert_eq!(animal.perimeter_site_count(), s);
    assert_eq!(p + 2 * i, 2 * d * n);
    if n >= 2 {
        assert!(p < 2 * d * n);
    }
    let mult = animal.perimeter_multiplicities();
    assert_eq!(mult.len(), s);
    let all_single = mult.iter().all(|(_, k)| *k == 1);
    assert_eq!(s == p, all_single);
    for (e, outer) in animal.perimeter_edges() {
        assert!(!animal.contains(outer));
        assert!(animal.contains(e.other(outer).unwrap()));
    }
    let r = animal.radii();
    assert!(r.r_in <= r.r_out);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bookkeeping_matches_recount(dim in 1usize..=4, steps in 0usize..300, seed in any::<u64>()) {
        let mut run = EdenRun::new(dim, seed, 0, false).unwrap();
        check(run.animal());
        for k in 0..steps {
            run.step();
            if k % 7 == 0 {
                check(run.animal());
            }
        }
        check(run.animal());
    }

    #[test]
    fn arbitrary_growth_order(dim in 2usize..=3, picks in proptest::collection::vec(any::<u32>(), 1..120)) {
        // grow by choosing perimeter sites (not edges) uniformly
        let mut a = LatticeAnimal::at_origin(dim).unwrap();
        for p in picks {
            let sites = a.perimeter_sites();
            let v = sites[p as usize % sites.len()].clone();
            a.add_site(v).unwrap();
            let (pe, ie, _) = recount(&cells_of(&a));
            prop_assert_eq!(a.perimeter_edge_count(), pe);
            prop_assert_eq!(a.interior_edge_count(), ie);
        }
    }
}

#[test]
fn long_growth_prefixes_match_recount() {
    let mut rng = run_rng(2024, 0);
    let mut a = LatticeAnimal::at_origin(2).unwrap();
    for step in 1..=10_000 {
        let v = sample_next_site(&a, &mut rng);
        a.add_site(v).unwrap();
        assert_eq!(a.perimeter_edge_count() + 2 * a.interior_edge_count(), 4 * a.len());
        if step % 500 == 0 {
            check(&a);
        }
    }
}

#[test]
fn radii_of_a_grown_cluster_are_consistent() {
    let run = edenlab::eden::eden_grow(2, 5_000, 3).unwrap();
    let a = run.animal();
    let r = a.radii();
    let r_in_sq = (r.r_in * r.r_in).round() as i64;
    // every lattice site inside r_in is present
    let k = r.r_in.ceil() as i64;
    for x in -k..=k {
        for y in -k..=k {
            if x * x + y * y <= r_in_sq {
                assert!(a.contains(&Site::from([x, y])));
            }
        }
    }
    let max = a.sites().map(Site::norm).fold(0.0, f64::max);
    assert_eq!(max, r.r_out);
}
