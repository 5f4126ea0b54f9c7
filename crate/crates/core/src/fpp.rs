//! First-passage percolation with i.i.d. rate-1 exponential edge weights.
//!
//! The weight field is infinite, so weights are drawn lazily: the weight of
//! an edge is a pure function of the field seed and the edge, cached on
//! first use. Passage times come from Dijkstra expansion out of the origin,
//! and [`fpp_grow`] records the sites in the order the expansion settles
//! them, which is the jump sequence of the reached set.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::histories::exact_eden_distribution;
use crate::lattice::{Edge, LatticeAnimal, Site};
use crate::rng::{derive_seed, mix64, open01};
use crate::stats::{chi_square_gof, ChiSquareReport};

pub const DEFAULT_MAX_SITES: usize = crate::eden::DEFAULT_MAX_SITES;

/// Lazily sampled exponential passage times, one per edge.
#[derive(Clone, Debug)]
pub struct EdgeWeightField {
    seed: u64,
    cache: FxHashMap<Edge, f64>,
}

impl EdgeWeightField {
    pub fn new(seed: u64) -> Self {
        EdgeWeightField {
            seed,
            cache: FxHashMap::default(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The passage time of `edge`, sampled on first access.
    pub fn weight(&mut self, edge: &Edge) -> f64 {
        if let Some(&w) = self.cache.get(edge) {
            return w;
        }
        let w = sample_weight(self.seed, edge);
        self.cache.insert(edge.clone(), w);
        w
    }

    /// Pins the weight of one edge, replacing the sampled value.
    pub fn set_weight(&mut self, edge: Edge, w: f64) {
        assert!(w > 0.0 && w.is_finite(), "passage times are positive and finite");
        self.cache.insert(edge, w);
    }

    /// Number of edges whose weight has been read or pinned.
    pub fn sampled_edges(&self) -> usize {
        self.cache.len()
    }
}

/// Exp(1) variate for `edge` under `seed`, by inversion of an open-interval
/// uniform built from a hash of the seed and both endpoints.
pub fn sample_weight(seed: u64, edge: &Edge) -> f64 {
    let (a, b) = edge.endpoints();
    let mut h = mix64(seed);
    for &c in a.coords().iter().chain(b.coords()) {
        h = mix64(h ^ c as u64);
    }
    -open01(h).ln()
}

#[derive(Debug)]
struct Arrival {
    time: f64,
    site: Site,
}

impl PartialEq for Arrival {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Arrival {}

impl PartialOrd for Arrival {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Arrival {
    // reversed so BinaryHeap pops the earliest arrival
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.site.cmp(&self.site))
    }
}

/// T(0, target), expanding at most `budget` sites.
pub fn passage_time(field: &mut EdgeWeightField, target: &Site, budget: usize) -> Result<f64> {
    passage_time_where(field, target, budget, |_| true)
}

/// T(0, target) over paths using only edges accepted by `allowed`.
/// Returns `f64::INFINITY` if the allowed edges never reach `target`.
pub fn passage_time_where(
    field: &mut EdgeWeightField,
    target: &Site,
    budget: usize,
    allowed: impl Fn(&Edge) -> bool,
) -> Result<f64> {
    let origin = Site::origin(target.dim());
    let mut settled: FxHashSet<Site> = FxHashSet::default();
    let mut heap = BinaryHeap::from([Arrival {
        time: 0.0,
        site: origin,
    }]);
    while let Some(Arrival { time, site }) = heap.pop() {
        if settled.contains(&site) {
            continue;
        }
        if &site == target {
            return Ok(time);
        }
        if settled.len() >= budget {
            return Err(Error::Budget {
                what: "site",
                needed: settled.len() as u128 + 1,
                limit: budget as u128,
            });
        }
        for w in site.neighbors() {
            if settled.contains(&w) {
                continue;
            }
            let e = Edge::new(site.clone(), w.clone()).unwrap();
            if allowed(&e) {
                heap.push(Arrival {
                    time: time + field.weight(&e),
                    site: w,
                });
            }
        }
        settled.insert(site);
    }
    Ok(f64::INFINITY)
}

/// Sites reached by the growing ball, in order, with the times they were
/// reached.
#[derive(Clone, Debug)]
pub struct GrowthTimeline {
    pub jump_times: Vec<f64>,
    pub added_sites: Vec<Site>,
    pub final_animal: LatticeAnimal,
}

impl GrowthTimeline {
    /// The reached set after the `k`-th jump (k = 0 is the origin alone).
    pub fn animal_after(&self, k: usize) -> Result<LatticeAnimal> {
        let mut a = LatticeAnimal::at_origin(self.final_animal.dim())?;
        for s in &self.added_sites[..k] {
            a.add_site(s.clone())?;
        }
        Ok(a)
    }
}

/// Grows the set of the `n` earliest-reached sites after the origin, on a
/// field seeded with `seed`.
pub fn fpp_grow(dim: usize, n: usize, seed: u64) -> Result<GrowthTimeline> {
    fpp_grow_in(&mut EdgeWeightField::new(seed), dim, n, DEFAULT_MAX_SITES)
}

/// Frontier expansion on a caller-supplied field. Each perimeter edge is
/// queued with (reach time of its inner endpoint) + (its weight); the
/// earliest queued outer site not yet reached is added next.
pub fn fpp_grow_in(
    field: &mut EdgeWeightField,
    dim: usize,
    n: usize,
    max_sites: usize,
) -> Result<GrowthTimeline> {
    if n as u128 + 1 > max_sites as u128 {
        return Err(Error::Budget {
            what: "site",
            needed: n as u128 + 1,
            limit: max_sites as u128,
        });
    }
    let mut animal = LatticeAnimal::at_origin(dim)?;
    let mut jump_times = Vec::with_capacity(n);
    let mut added_sites = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();
    let push_frontier = |heap: &mut BinaryHeap<Arrival>,
                         field: &mut EdgeWeightField,
                         animal: &LatticeAnimal,
                         from: &Site,
                         time: f64| {
        for w in from.neighbors() {
            if !animal.contains(&w) {
                let e = Edge::new(from.clone(), w.clone()).unwrap();
                heap.push(Arrival {
                    time: time + field.weight(&e),
                    site: w,
                });
            }
        }
    };
    push_frontier(&mut heap, field, &animal, &Site::origin(dim), 0.0);
    while added_sites.len() < n {
        let Arrival { time, site } = heap.pop().expect("frontier of a finite set is never empty");
        if animal.contains(&site) {
            continue;
        }
        animal.add_site(site.clone())?;
        push_frontier(&mut heap, field, &animal, &site, time);
        jump_times.push(time);
        added_sites.push(site);
    }
    Ok(GrowthTimeline {
        jump_times,
        added_sites,
        final_animal: animal,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CouplingReport {
    pub dim: usize,
    pub n: usize,
    pub runs: u64,
    pub seed: u64,
    /// Distinct outcomes of the exact Eden law.
    pub outcomes: usize,
    #[serde(flatten)]
    pub chi_square: ChiSquareReport,
}

/// Compares the animals produced by `runs` independent FPP growths of `n`
/// steps with the exact Eden distribution after `n` steps. Run `i` uses the
/// field seed `derive_seed(seed, i)`.
pub fn coupling_test(dim: usize, n: usize, runs: u64, seed: u64, max_outcomes: u128) -> Result<CouplingReport> {
    if runs == 0 {
        return Err(Error::Degenerate("coupling test needs at least one run".into()));
    }
    let exact = exact_eden_distribution(dim, n, max_outcomes)?;
    let index: FxHashMap<&[Site], usize> = exact
        .outcomes()
        .enumerate()
        .map(|(i, (k, _))| (k, i))
        .collect();
    let probs: Vec<f64> = exact
        .outcomes()
        .map(|(_, p)| num_traits::ToPrimitive::to_f64(p).unwrap())
        .collect();

    let counts = (0..runs)
        .into_par_iter()
        .map(|i| -> Result<usize> {
            let mut field = EdgeWeightField::new(derive_seed(seed, i));
            let timeline = fpp_grow_in(&mut field, dim, n, n + 1)?;
            let key = timeline.final_animal.canonical_sites();
            index
                .get(key.as_slice())
                .copied()
                .ok_or_else(|| Error::UnexpectedOutcome(format!("{key:?}")))
        })
        .try_fold(
            || vec![0u64; probs.len()],
            |mut acc, cell| {
                acc[cell?] += 1;
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(
            || vec![0u64; probs.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;

    Ok(CouplingReport {
        dim,
        n,
        runs,
        seed,
        outcomes: probs.len(),
        chi_square: chi_square_gof(&counts, &probs)?,
    })
}
