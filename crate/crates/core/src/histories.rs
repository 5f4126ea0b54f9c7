//! Exact enumeration of lattice animal histories.
//!
//! A history of length m is a sequence of m edges where the first edge
//! touches the origin and every later edge has exactly one endpoint among
//! the endpoints seen so far. The edges form a tree rooted at the origin and
//! the order is a linear extension of that tree's edge poset, so histories
//! can be counted either directly or tree by tree with the hook-length
//! formula. Both routes are implemented here and must agree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::eden::transition_probabilities;
use crate::error::{Error, Result};
use crate::lattice::{Edge, LatticeAnimal, PerimeterMetric, Site};

pub const DEFAULT_MAX_HISTORIES: u128 = 100_000_000;

/// An edge sequence satisfying the two history conditions, with the animal
/// its endpoints span.
#[derive(Clone, Debug)]
pub struct History {
    edges: Vec<Edge>,
    animal: LatticeAnimal,
}

impl History {
    /// Validates `edges` as a history in dimension `dim`.
    pub fn new(dim: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut animal = LatticeAnimal::at_origin(dim)?;
        for e in &edges {
            let (a, b) = e.endpoints();
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    site: a.clone(),
                    expected: dim,
                    found: a.dim(),
                });
            }
            let new = match (animal.contains(a), animal.contains(b)) {
                (true, false) => b,
                (false, true) => a,
                _ => {
                    return Err(Error::Degenerate(format!(
                        "edge {e} does not have exactly one known endpoint"
                    )))
                }
            };
            animal.add_site(new.clone())?;
        }
        Ok(History { edges, animal })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn animal(&self) -> &LatticeAnimal {
        &self.animal
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Upper bound on the number of histories of length `m`: an animal on k+1
/// sites spanned by a tree has at most 2d(k+1) - 2k perimeter edges.
pub fn history_count_bound(dim: usize, m: usize) -> u128 {
    let d = dim as u128;
    (0..m as u128).fold(1u128, |acc, k| acc.saturating_mul(2 * d + (2 * d).saturating_sub(2) * k))
}

fn check_budget(dim: usize, m: usize, max_histories: u128) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    let needed = history_count_bound(dim, m);
    if needed > max_histories {
        return Err(Error::Budget {
            what: "history",
            needed,
            limit: max_histories,
        });
    }
    Ok(())
}

/// Depth-first stream over all histories of a fixed length.
pub struct Histories {
    m: usize,
    frames: Vec<Frame>,
    edges: Vec<Edge>,
}

struct Frame {
    animal: LatticeAnimal,
    next: usize,
}

impl Iterator for Histories {
    type Item = History;

    fn next(&mut self) -> Option<History> {
        loop {
            let depth = self.frames.len().checked_sub(1)?;
            if depth == self.m {
                let leaf = self.frames.pop().unwrap();
                let h = History {
                    edges: self.edges.clone(),
                    animal: leaf.animal,
                };
                self.edges.pop();
                return Some(h);
            }
            let top = self.frames.last_mut().unwrap();
            if let Some((edge, outer)) = top.animal.perimeter_edge(top.next) {
                top.next += 1;
                let edge = edge.clone();
                let mut child = top.animal.clone();
                child.add_site(outer.clone()).expect("perimeter site");
                self.edges.push(edge);
                self.frames.push(Frame {
                    animal: child,
                    next: 0,
                });
            } else {
                self.frames.pop();
                self.edges.pop();
            }
        }
    }
}

/// Every history of length `m` in dimension `dim`, each exactly once.
pub fn enumerate_histories(dim: usize, m: usize, max_histories: u128) -> Result<Histories> {
    check_budget(dim, m, max_histories)?;
    Ok(Histories {
        m,
        frames: vec![Frame {
            animal: LatticeAnimal::at_origin(dim)?,
            next: 0,
        }],
        edges: Vec::with_capacity(m),
    })
}

/// Count of histories and the exact mean perimeter of their animals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerimeterAverages {
    pub count: BigUint,
    pub edges: BigRational,
    pub sites: BigRational,
}

impl PerimeterAverages {
    pub fn get(&self, metric: PerimeterMetric) -> &BigRational {
        match metric {
            PerimeterMetric::Edges => &self.edges,
            PerimeterMetric::Sites => &self.sites,
        }
    }
}

#[derive(Default)]
struct WeightedSums {
    count: BigUint,
    edges: BigUint,
    sites: BigUint,
}

impl WeightedSums {
    fn add(&mut self, weight: &BigUint, animal: &LatticeAnimal) {
        self.count += weight;
        self.edges += weight * BigUint::from(animal.perimeter_edge_count());
        self.sites += weight * BigUint::from(animal.perimeter_site_count());
    }

    fn finish(self) -> PerimeterAverages {
        let den = BigInt::from(self.count.clone());
        PerimeterAverages {
            edges: BigRational::new(self.edges.into(), den.clone()),
            sites: BigRational::new(self.sites.into(), den),
            count: self.count,
        }
    }
}

/// Mean perimeter (both metrics) of L(e_1, ..., e_m) over all histories.
pub fn average_perimeter_over_histories(
    dim: usize,
    m: usize,
    max_histories: u128,
) -> Result<PerimeterAverages> {
    let one = BigUint::one();
    let mut sums = WeightedSums::default();
    for h in enumerate_histories(dim, m, max_histories)? {
        sums.add(&one, h.animal());
    }
    Ok(sums.finish())
}

/// A tree of lattice edges with a distinguished root, oriented away from it.
#[derive(Clone, Debug)]
pub struct RootedTree {
    root: Site,
    edges: Vec<Edge>,
    /// edge index -> index of the edge above it, `None` at the root
    parent: Vec<Option<usize>>,
    /// edge index -> number of vertices on the far side from the root
    subtree_sizes: Vec<usize>,
}

impl RootedTree {
    pub fn new(root: Site, edges: Vec<Edge>) -> Result<Self> {
        let mut incident: FxHashMap<&Site, Vec<usize>> = FxHashMap::default();
        for (i, e) in edges.iter().enumerate() {
            let (a, b) = e.endpoints();
            incident.entry(a).or_default().push(i);
            incident.entry(b).or_default().push(i);
        }
        if !edges.is_empty() && !incident.contains_key(&root) {
            return Err(Error::Degenerate(format!("root {root} is not on the tree")));
        }
        if incident.len() != edges.len() + usize::from(!edges.is_empty()) {
            return Err(Error::Degenerate("edge set is not a tree".into()));
        }

        // Breadth-first from the root; `order` lists edges parent-first.
        let mut parent = vec![None; edges.len()];
        let mut child_of: Vec<Option<&Site>> = vec![None; edges.len()];
        let mut order = Vec::with_capacity(edges.len());
        let mut queue = std::collections::VecDeque::from([(&root, None::<usize>)]);
        while let Some((v, via)) = queue.pop_front() {
            for &i in incident.get(v).into_iter().flatten() {
                if Some(i) == via {
                    continue;
                }
                if child_of[i].is_some() {
                    return Err(Error::Degenerate("edge set contains a cycle".into()));
                }
                let w = edges[i].other(v).unwrap();
                child_of[i] = Some(w);
                parent[i] = via;
                order.push(i);
                queue.push_back((w, Some(i)));
            }
        }
        if order.len() != edges.len() {
            return Err(Error::Degenerate("edge set is not connected".into()));
        }

        let mut subtree_sizes = vec![1usize; edges.len()];
        for &i in order.iter().rev() {
            if let Some(p) = parent[i] {
                subtree_sizes[p] += subtree_sizes[i];
            }
        }
        Ok(RootedTree {
            root,
            edges,
            parent,
            subtree_sizes,
        })
    }

    pub fn root(&self) -> &Site {
        &self.root
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn parent_of(&self, edge: usize) -> Option<usize> {
        self.parent[edge]
    }

    pub fn subtree_sizes(&self) -> &[usize] {
        &self.subtree_sizes
    }
}

/// Number of edge orderings of `tree` that are histories: m! divided by the
/// product of subtree sizes.
pub fn count_linear_extensions(tree: &RootedTree) -> BigUint {
    let m = tree.edge_count();
    let factorial: BigUint = (1..=m).map(BigUint::from).product();
    let hooks: BigUint = tree.subtree_sizes().iter().map(|&s| BigUint::from(s)).product();
    factorial / hooks
}

pub const BRUTE_FORCE_MAX_EDGES: usize = 10;

/// Counts the same orderings by walking every admissible permutation.
pub fn brute_force_linear_extensions(tree: &RootedTree) -> Result<u64> {
    let m = tree.edge_count();
    if m > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::Budget {
            what: "brute-force edge",
            needed: m as u128,
            limit: BRUTE_FORCE_MAX_EDGES as u128,
        });
    }
    fn walk(tree: &RootedTree, placed: u32, full: u32) -> u64 {
        if placed == full {
            return 1;
        }
        (0..tree.edge_count())
            .filter(|&i| placed & (1 << i) == 0)
            .filter(|&i| tree.parent_of(i).is_none_or(|p| placed & (1 << p) != 0))
            .map(|i| walk(tree, placed | (1 << i), full))
            .sum()
    }
    Ok(walk(tree, 0, (1u32 << m) - 1))
}

/// All lattice trees with `m` edges containing the origin, rooted there,
/// each paired with the animal it spans.
///
/// Trees are grown one edge at a time; a tree is kept only at its first
/// occurrence within each level (keyed by its sorted edge list).
pub fn lattice_trees(
    dim: usize,
    m: usize,
    max_histories: u128,
) -> Result<Vec<(RootedTree, LatticeAnimal)>> {
    check_budget(dim, m, max_histories)?;
    let mut level: Vec<(Vec<Edge>, LatticeAnimal)> = vec![(Vec::new(), LatticeAnimal::at_origin(dim)?)];
    for _ in 0..m {
        let mut seen: FxHashSet<Vec<Edge>> = FxHashSet::default();
        let mut next = Vec::new();
        for (edges, animal) in &level {
            for (e, outer) in animal.perimeter_edges() {
                let mut key = edges.clone();
                let at = key.binary_search(e).unwrap_err();
                key.insert(at, e.clone());
                if seen.contains(&key) {
                    continue;
                }
                let mut grown = animal.clone();
                grown.add_site(outer.clone())?;
                seen.insert(key.clone());
                next.push((key, grown));
            }
        }
        level = next;
    }
    let origin = Site::origin(dim);
    level
        .into_iter()
        .map(|(edges, animal)| Ok((RootedTree::new(origin.clone(), edges)?, animal)))
        .collect()
}

/// Recomputes the history count and mean perimeters by weighting each
/// lattice tree with its number of linear extensions.
pub fn histories_via_trees(dim: usize, m: usize, max_histories: u128) -> Result<PerimeterAverages> {
    let mut sums = WeightedSums::default();
    for (tree, animal) in lattice_trees(dim, m, max_histories)? {
        sums.add(&count_linear_extensions(&tree), &animal);
    }
    Ok(sums.finish())
}

/// Exact law of the Eden animal after a fixed number of steps.
#[derive(Clone, Debug)]
pub struct ExactDistribution {
    dim: usize,
    steps: usize,
    outcomes: BTreeMap<Vec<Site>, (BigRational, usize, usize)>,
}

impl ExactDistribution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Outcomes as sorted site lists with their probabilities, in site order.
    pub fn outcomes(&self) -> impl Iterator<Item = (&[Site], &BigRational)> {
        self.outcomes.iter().map(|(k, (p, _, _))| (k.as_slice(), p))
    }

    pub fn probability(&self, sorted_sites: &[Site]) -> BigRational {
        self.outcomes
            .get(sorted_sites)
            .map(|(p, _, _)| p.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.outcomes.values().map(|(p, _, _)| p.clone()).sum()
    }

    pub fn expected_perimeter(&self, metric: PerimeterMetric) -> BigRational {
        self.outcomes
            .values()
            .map(|(p, edges, sites)| {
                let k = match metric {
                    PerimeterMetric::Edges => *edges,
                    PerimeterMetric::Sites => *sites,
                };
                p * BigRational::from_integer(BigInt::from(k))
            })
            .sum()
    }
}

/// Propagates the Eden chain `m` steps from the origin with exact rational
/// transition probabilities, merging trajectories that reach the same site
/// set. `max_outcomes` caps the number of distinct states at any step.
pub fn exact_eden_distribution(dim: usize, m: usize, max_outcomes: u128) -> Result<ExactDistribution> {
    let start = LatticeAnimal::at_origin(dim)?;
    let mut states: FxHashMap<Vec<Site>, (LatticeAnimal, BigRational)> = FxHashMap::default();
    states.insert(start.canonical_sites(), (start, BigRational::one()));
    for _ in 0..m {
        let mut next: FxHashMap<Vec<Site>, (LatticeAnimal, BigRational)> = FxHashMap::default();
        for (animal, p) in states.values() {
            for (site, q) in transition_probabilities(animal) {
                let mut grown = animal.clone();
                grown.add_site(site)?;
                let mass = p * q;
                next.entry(grown.canonical_sites())
                    .and_modify(|(_, acc)| *acc += &mass)
                    .or_insert((grown, mass));
            }
        }
        if next.len() as u128 > max_outcomes {
            return Err(Error::Budget {
                what: "Eden state",
                needed: next.len() as u128,
                limit: max_outcomes,
            });
        }
        states = next;
    }
    let outcomes = states
        .into_iter()
        .map(|(k, (animal, p))| {
            let e = animal.perimeter_edge_count();
            let s = animal.perimeter_site_count();
            (k, (p, e, s))
        })
        .collect();
    Ok(ExactDistribution {
        dim,
        steps: m,
        outcomes,
    })
}

/// An exact rational rendered as `num/den`, always with a denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact(pub BigRational);

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Exact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Exact {
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// One row of the history-average versus Eden-expectation table.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ContrastRow {
    pub m: usize,
    pub history_count: String,
    pub pbar_edges: Exact,
    pub pbar_sites: Exact,
    pub eden_expected_edges: Exact,
    pub eden_expected_sites: Exact,
}

/// Rows for m = 1..=max_m.
pub fn contrast_table(dim: usize, max_m: usize, max_histories: u128) -> Result<Vec<ContrastRow>> {
    (1..=max_m)
        .map(|m| {
            let avg = average_perimeter_over_histories(dim, m, max_histories)?;
            let eden = exact_eden_distribution(dim, m, max_histories)?;
            Ok(ContrastRow {
                m,
                history_count: avg.count.to_string(),
                pbar_edges: Exact(avg.edges),
                pbar_sites: Exact(avg.sites),
                eden_expected_edges: Exact(eden.expected_perimeter(PerimeterMetric::Edges)),
                eden_expected_sites: Exact(eden.expected_perimeter(PerimeterMetric::Sites)),
            })
        })
        .collect()
}

fn tree_from_pairs(root: [i64; 2], pairs: &[([i64; 2], [i64; 2])]) -> RootedTree {
    let edges = pairs
        .iter()
        .map(|&(a, b)| Edge::new(Site::from(a), Site::from(b)).unwrap())
        .collect();
    RootedTree::new(Site::from(root), edges).unwrap()
}

/// Edges of the nine-site spanning tree of the 3x3 block: the middle row,
/// the middle column's lower arm bending right, and vertical spurs from the
/// left and right ends of the middle row.
/// Coordinates put the block's centre at (0,0), y pointing up.
pub const BRANCHING_TREE_EDGES: [([i64; 2], [i64; 2]); 8] = [
    ([0, 1], [0, 0]),
    ([-1, 1], [-1, 0]),
    ([1, 1], [1, 0]),
    ([-1, 0], [0, 0]),
    ([0, 0], [1, 0]),
    ([-1, 0], [-1, -1]),
    ([0, 0], [0, -1]),
    ([0, -1], [1, -1]),
];

/// The branching nine-site tree rooted at the left end of its middle row,
/// which has 1680 history orderings.
pub fn branching_tree() -> RootedTree {
    tree_from_pairs([-1, 0], &BRANCHING_TREE_EDGES)
}

/// The same tree rooted at the centre of the block (3360 orderings).
pub fn branching_tree_centre_rooted() -> RootedTree {
    tree_from_pairs([0, 0], &BRANCHING_TREE_EDGES)
}

/// A straight path of `2 * arm` edges rooted at its midpoint; it has
/// C(2*arm, arm) orderings (70 for arm = 4).
pub fn centred_path_tree(arm: i64) -> RootedTree {
    let pairs: Vec<([i64; 2], [i64; 2])> = (-arm..arm).map(|x| ([x, 0], [x + 1, 0])).collect();
    tree_from_pairs([0, 0], &pairs)
}
