use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use super::probseq::ProbSeq;
use super::transition::transition_dist;
use crate::error::Result;

/// The toolkit's deterministic generator.
pub type ChainRng = SplitMix64;

pub fn seeded_rng(seed: u64) -> ChainRng {
    SplitMix64::seed_from_u64(seed)
}

/// One step of the chain, by inverse-CDF sampling of the transition row.
pub fn sample_step<R: Rng + ?Sized>(state: u64, p: &ProbSeq, rng: &mut R) -> Result<u64> {
    let dist = transition_dist(state, p)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for t in dist.entries() {
        acc += t.prob;
        if u < acc {
            return Ok(t.target);
        }
    }
    Ok(dist.entries().last().expect("rows are nonempty").target)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationSummary {
    pub start: u64,
    pub steps: u64,
    pub final_state: u64,
    /// Visits to 0 among the states after each step.
    pub visits_to_zero: u64,
    /// Arrivals at 0 from a different state.
    pub returns_to_zero: u64,
    pub max_state: u64,
}

fn run(
    start: u64,
    steps: u64,
    p: &ProbSeq,
    rng: &mut ChainRng,
    mut visit: impl FnMut(u64),
) -> Result<SimulationSummary> {
    let mut summary = SimulationSummary {
        start,
        steps,
        final_state: start,
        visits_to_zero: 0,
        returns_to_zero: 0,
        max_state: start,
    };
    let mut state = start;
    visit(state);
    for _ in 0..steps {
        let next = sample_step(state, p, rng)?;
        if next == 0 {
            summary.visits_to_zero += 1;
            if state != 0 {
                summary.returns_to_zero += 1;
            }
        }
        summary.max_state = summary.max_state.max(next);
        state = next;
        visit(state);
    }
    summary.final_state = state;
    Ok(summary)
}

pub fn simulate(start: u64, steps: u64, p: &ProbSeq, seed: u64) -> Result<SimulationSummary> {
    run(start, steps, p, &mut seeded_rng(seed), |_| {})
}

/// Summary together with the full trajectory `x_0 = start, x_1, ..., x_steps`.
pub fn simulate_path(
    start: u64,
    steps: u64,
    p: &ProbSeq,
    seed: u64,
) -> Result<(SimulationSummary, Vec<u64>)> {
    let mut path = Vec::with_capacity(steps as usize + 1);
    let summary = run(start, steps, p, &mut seeded_rng(seed), |s| path.push(s))?;
    Ok((summary, path))
}

/// Independent runs, one per seed; the result order follows `seeds`.
pub fn simulate_batch(
    start: u64,
    steps: u64,
    p: &ProbSeq,
    seeds: &[u64],
) -> Result<Vec<SimulationSummary>> {
    seeds
        .par_iter()
        .map(|&seed| simulate(start, steps, p, seed))
        .collect()
}
