//! Sites, nearest-neighbour edges and lattice animals on the hypercubic
//! lattice Z^d, with incremental perimeter bookkeeping.
//!
//! A [`LatticeAnimal`] keeps its perimeter edges in an insertion-indexed map
//! so that a uniformly random perimeter edge can be drawn in O(1) and an edge
//! can be retired in O(1) by swap-removal. Adding a site touches only its 2d
//! neighbours.

use std::fmt;

use indexmap::{IndexMap, IndexSet};
use rustc_hash::FxBuildHasher;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A point of Z^d.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site(SmallVec<[i64; 4]>);

impl Site {
    pub fn new(coords: impl IntoIterator<Item = i64>) -> Self {
        Site(coords.into_iter().collect())
    }

    pub fn origin(dim: usize) -> Self {
        Site(SmallVec::from_elem(0, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// The site displaced by `step` (±1) along `axis`.
    pub fn shifted(&self, axis: usize, step: i64) -> Site {
        let mut c = self.0.clone();
        c[axis] += step;
        Site(c)
    }

    /// The 2d nearest neighbours, ordered axis by axis, negative direction first.
    pub fn neighbors(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.dim()).flat_map(move |axis| [-1, 1].map(|s| self.shifted(axis, s)))
    }

    pub fn is_adjacent(&self, other: &Site) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let mut diff = 0;
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            diff += (a - b).abs();
            if diff > 1 {
                return false;
            }
        }
        diff == 1
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<const N: usize> From<[i64; N]> for Site {
    fn from(c: [i64; N]) -> Self {
        Site::new(c)
    }
}

/// An undirected nearest-neighbour edge, stored with the lexicographically
/// smaller endpoint first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Edge {
    a: Site,
    b: Site,
}

impl Edge {
    pub fn new(x: Site, y: Site) -> Result<Self> {
        if !x.is_adjacent(&y) {
            return Err(Error::NotAnEdge { a: x, b: y });
        }
        Ok(Self::canonical(x, y))
    }

    fn canonical(x: Site, y: Site) -> Self {
        if x <= y {
            Edge { a: x, b: y }
        } else {
            Edge { a: y, b: x }
        }
    }

    pub fn endpoints(&self) -> (&Site, &Site) {
        (&self.a, &self.b)
    }

    pub fn contains(&self, s: &Site) -> bool {
        &self.a == s || &self.b == s
    }

    /// The endpoint that is not `s`, if `s` is an endpoint.
    pub fn other(&self, s: &Site) -> Option<&Site> {
        if &self.a == s {
            Some(&self.b)
        } else if &self.b == s {
            Some(&self.a)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

/// A finite connected set of sites together with its perimeter edges.
#[derive(Clone, Debug)]
pub struct LatticeAnimal {
    dim: usize,
    sites: IndexSet<Site, FxBuildHasher>,
    /// perimeter edge -> its endpoint outside the animal
    perimeter: IndexMap<Edge, Site, FxBuildHasher>,
    interior_edges: usize,
    max_norm_sq: i64,
}

impl LatticeAnimal {
    /// A one-site animal at `seed`; its 2d incident edges form the perimeter.
    pub fn new(seed: Site) -> Result<Self> {
        let dim = seed.dim();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut animal = LatticeAnimal {
            dim,
            sites: IndexSet::default(),
            perimeter: IndexMap::default(),
            interior_edges: 0,
            max_norm_sq: seed.norm_sq(),
        };
        for w in seed.neighbors() {
            animal
                .perimeter
                .insert(Edge::canonical(seed.clone(), w.clone()), w);
        }
        animal.sites.insert(seed);
        Ok(animal)
    }

    pub fn at_origin(dim: usize) -> Result<Self> {
        Self::new(Site::origin(dim))
    }

    /// Adds a perimeter site, moving the edges it shares with the animal
    /// from the perimeter to the interior.
    pub fn add_site(&mut self, v: Site) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
                site: v,
            });
        }
        if self.sites.contains(&v) {
            return Err(Error::AlreadyPresent(v));
        }
        let neighbors: SmallVec<[Site; 8]> = v.neighbors().collect();
        if !neighbors.iter().any(|w| self.sites.contains(w)) {
            return Err(Error::NotAdjacent(v));
        }
        for w in neighbors {
            if self.sites.contains(&w) {
                let removed = self.perimeter.swap_remove(&Edge::canonical(v.clone(), w));
                debug_assert!(removed.is_some(), "edge into the animal was not on the perimeter");
                self.interior_edges += 1;
            } else {
                self.perimeter.insert(Edge::canonical(v.clone(), w.clone()), w);
            }
        }
        self.max_norm_sq = self.max_norm_sq.max(v.norm_sq());
        self.sites.insert(v);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, s: &Site) -> bool {
        self.sites.contains(s)
    }

    /// Sites in insertion order.
    pub fn sites(&self) -> impl ExactSizeIterator<Item = &Site> {
        self.sites.iter()
    }

    pub fn perimeter_edge_count(&self) -> usize {
        self.perimeter.len()
    }

    pub fn interior_edge_count(&self) -> usize {
        self.interior_edges
    }

    /// Perimeter edges with their outer endpoint. The order is an
    /// implementation detail but is a deterministic function of the growth
    /// sequence.
    pub fn perimeter_edges(&self) -> impl ExactSizeIterator<Item = (&Edge, &Site)> {
        self.perimeter.iter()
    }

    /// The `i`-th perimeter edge and its outer endpoint.
    pub fn perimeter_edge(&self, i: usize) -> Option<(&Edge, &Site)> {
        self.perimeter.get_index(i)
    }

    /// Outer endpoints of the perimeter edges, each listed once, sorted.
    pub fn perimeter_sites(&self) -> Vec<Site> {
        let set: IndexSet<&Site, FxBuildHasher> = self.perimeter.values().collect();
        let mut out: Vec<Site> = set.into_iter().cloned().collect();
        out.sort_unstable();
        out
    }

    pub fn perimeter_site_count(&self) -> usize {
        self.perimeter
            .values()
            .collect::<IndexSet<&Site, FxBuildHasher>>()
            .len()
    }

    /// Number of perimeter edges touching each perimeter site, sorted by site.
    pub fn perimeter_multiplicities(&self) -> Vec<(Site, usize)> {
        let mut counts: IndexMap<&Site, usize, FxBuildHasher> = IndexMap::default();
        for outer in self.perimeter.values() {
            *counts.entry(outer).or_default() += 1;
        }
        let mut out: Vec<(Site, usize)> = counts.into_iter().map(|(s, k)| (s.clone(), k)).collect();
        out.sort_unstable();
        out
    }

    pub fn perimeter(&self, metric: PerimeterMetric) -> usize {
        match metric {
            PerimeterMetric::Edges => self.perimeter_edge_count(),
            PerimeterMetric::Sites => self.perimeter_site_count(),
        }
    }

    /// Sorted site list; equal for equal site sets regardless of growth order.
    pub fn canonical_sites(&self) -> Vec<Site> {
        let mut v: Vec<Site> = self.sites.iter().cloned().collect();
        v.sort_unstable();
        v
    }

    /// Inner and outer radius about the origin.
    ///
    /// `r_out` is the largest site norm. `r_in` is the largest r such that
    /// every lattice site of norm at most r belongs to the animal. A missing
    /// site of minimal norm always has a neighbour of smaller norm, so the
    /// closest missing site is a perimeter site.
    pub fn radii(&self) -> Radii {
        let r_out = (self.max_norm_sq as f64).sqrt();
        let hole_sq = self
            .perimeter
            .values()
            .map(Site::norm_sq)
            .min()
            .unwrap_or(i64::MAX);
        let r_in_sq = self
            .sites
            .iter()
            .map(Site::norm_sq)
            .filter(|&q| q < hole_sq)
            .max()
            .unwrap_or(0);
        Radii {
            r_in: (r_in_sq as f64).sqrt(),
            r_out,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Radii {
    pub r_in: f64,
    pub r_out: f64,
}

/// Which notion of "perimeter" a statistic reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PerimeterMetric {
    /// Number of perimeter edges.
    #[default]
    Edges,
    /// Number of distinct perimeter sites.
    Sites,
}
