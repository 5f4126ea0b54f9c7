//! Oracles shared by the integration tests. None of these go through the
//! incremental bookkeeping or the enumerators they are used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Cell = Vec<i64>;

pub fn neighbours(c: &[i64]) -> Vec<Cell> {
    let mut out = Vec::with_capacity(2 * c.len());
    for axis in 0..c.len() {
        for step in [-1, 1] {
            let mut n = c.to_vec();
            n[axis] += step;
            out.push(n);
        }
    }
    out
}

/// (perimeter edges, interior edges, perimeter sites) recounted over every
/// site/neighbour pair.
pub fn recount(cells: &BTreeSet<Cell>) -> (usize, usize, usize) {
    let mut perimeter = 0;
    let mut interior_slots = 0;
    let mut outside = BTreeSet::new();
    for c in cells {
        for n in neighbours(c) {
            if cells.contains(&n) {
                interior_slots += 1;
            } else {
                perimeter += 1;
                outside.insert(n);
            }
        }
    }
    (perimeter, interior_slots / 2, outside.len())
}

pub fn cells_of(animal: &edenlab::LatticeAnimal) -> BTreeSet<Cell> {
    animal.sites().map(|s| s.coords().to_vec()).collect()
}

/// Expands every Eden trajectory of `m` steps from the origin without
/// merging states: each step picks one of the P perimeter edges with
/// probability 1/P. Returns the law of the final cell set.
pub fn eden_by_trajectories(dim: usize, m: usize) -> BTreeMap<BTreeSet<Cell>, BigRational> {
    fn walk(
        cells: &BTreeSet<Cell>,
        left: usize,
        p: BigRational,
        out: &mut BTreeMap<BTreeSet<Cell>, BigRational>,
    ) {
        if left == 0 {
            *out.entry(cells.clone()).or_insert_with(|| BigRational::from_integer(0.into())) += p;
            return;
        }
        let mut edges = Vec::new();
        for c in cells {
            for n in neighbours(c) {
                if !cells.contains(&n) {
                    edges.push(n);
                }
            }
        }
        let step = BigRational::new(BigInt::from(1), BigInt::from(edges.len()));
        for n in edges {
            let mut next = cells.clone();
            next.insert(n);
            walk(&next, left - 1, &p * &step, out);
        }
    }
    let mut out = BTreeMap::new();
    let start: BTreeSet<Cell> = [vec![0; dim]].into_iter().collect();
    walk(&start, m, BigRational::from_integer(1.into()), &mut out);
    out
}

pub fn expected_perimeter_edges(law: &BTreeMap<BTreeSet<Cell>, BigRational>) -> BigRational {
    law.iter()
        .map(|(cells, p)| p * BigRational::from_integer(BigInt::from(recount(cells).0)))
        .sum()
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Perimeter edges of a hashed cell set, recounted pair by pair.
pub fn recount_perimeter_edges(cells: &std::collections::HashSet<Cell>) -> usize {
    cells
        .iter()
        .flat_map(|c| neighbours(c))
        .filter(|n| !cells.contains(n))
        .count()
}
