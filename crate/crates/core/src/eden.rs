//! Eden growth: at each step a perimeter site is added with probability
//! proportional to the number of perimeter edges it shares with the animal.
//!
//! Drawing one perimeter edge uniformly and adding its outer endpoint is
//! exactly that rule, since a site with k perimeter edges occupies k slots
//! of the perimeter-edge list.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{LatticeAnimal, Site};
use crate::rng::{run_rng, RunRng};

pub const DEFAULT_MAX_SITES: usize = 100_000_000;

#[derive(Clone, Copy, Debug)]
pub struct GrowthOptions {
    pub max_sites: usize,
    pub log_trajectory: bool,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            max_sites: DEFAULT_MAX_SITES,
            log_trajectory: false,
        }
    }
}

/// One realisation of the Eden chain. After `step` steps the animal has
/// `step + 1` sites.
#[derive(Clone, Debug)]
pub struct EdenRun {
    animal: LatticeAnimal,
    step: u64,
    seed: u64,
    rng: RunRng,
    trajectory: Option<Vec<Site>>,
}

impl EdenRun {
    /// Fresh run at the origin drawing from stream `run_index` of `seed`.
    pub fn new(dim: usize, seed: u64, run_index: u64, log_trajectory: bool) -> Result<Self> {
        Ok(EdenRun {
            animal: LatticeAnimal::at_origin(dim)?,
            step: 0,
            seed,
            rng: run_rng(seed, run_index),
            trajectory: log_trajectory.then(Vec::new),
        })
    }

    pub fn step(&mut self) -> &Site {
        let v = sample_next_site(&self.animal, &mut self.rng);
        self.animal
            .add_site(v.clone())
            .expect("a perimeter site is always addable");
        self.step += 1;
        match &mut self.trajectory {
            Some(log) => {
                log.push(v);
                log.last().unwrap()
            }
            None => self.animal.sites().last().unwrap(),
        }
    }

    pub fn animal(&self) -> &LatticeAnimal {
        &self.animal
    }

    pub fn into_animal(self) -> LatticeAnimal {
        self.animal
    }

    pub fn steps(&self) -> u64 {
        self.step
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sites added so far, in order; `None` unless logging was enabled.
    pub fn trajectory(&self) -> Option<&[Site]> {
        self.trajectory.as_deref()
    }
}

/// Draws the next site from `animal` under the Eden rule.
pub fn sample_next_site<R: Rng + ?Sized>(animal: &LatticeAnimal, rng: &mut R) -> Site {
    let i = rng.random_range(0..animal.perimeter_edge_count());
    animal.perimeter_edge(i).unwrap().1.clone()
}

/// Exact one-step transition law from `animal`: each perimeter site with
/// its probability (edges into the animal) / (total perimeter edges),
/// sorted by site.
pub fn transition_probabilities(animal: &LatticeAnimal) -> Vec<(Site, BigRational)> {
    let total = BigInt::from(animal.perimeter_edge_count());
    animal
        .perimeter_multiplicities()
        .into_iter()
        .map(|(s, k)| (s, BigRational::new(BigInt::from(k), total.clone())))
        .collect()
}

/// Runs `n` Eden steps from the origin in dimension `dim`, on stream 0 of `seed`.
pub fn eden_grow(dim: usize, n: u64, seed: u64) -> Result<EdenRun> {
    eden_grow_with(dim, n, seed, 0, GrowthOptions::default())
}

pub fn eden_grow_with(
    dim: usize,
    n: u64,
    seed: u64,
    run_index: u64,
    opts: GrowthOptions,
) -> Result<EdenRun> {
    let needed = u128::from(n) + 1;
    if needed > opts.max_sites as u128 {
        return Err(Error::Budget {
            what: "site",
            needed,
            limit: opts.max_sites as u128,
        });
    }
    let mut run = EdenRun::new(dim, seed, run_index, opts.log_trajectory)?;
    for _ in 0..n {
        run.step();
    }
    Ok(run)
}

/// Rebuilds the animal a trajectory log describes.
pub fn replay(dim: usize, trajectory: &[Site]) -> Result<LatticeAnimal> {
    let mut animal = LatticeAnimal::at_origin(dim)?;
    for s in trajectory {
        animal.add_site(s.clone())?;
    }
    Ok(animal)
}
