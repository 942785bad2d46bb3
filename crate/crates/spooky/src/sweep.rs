//! Parallel equivalence sweep. Each scenario draws from its own stream, and
//! verdicts are collected in index order, so the report does not depend on
//! the number of worker threads.

use rayon::prelude::*;
use spooky_core::steering::{
    evaluate_scenario, summarize_sweep, SweepFamily, SweepReport, SWEEP_EXTRA_B_TESTS,
};
use spooky_core::{Error, Result};

pub const MAX_SAMPLES: u64 = 1_000_000;

pub fn parallel_sweep(samples: u64, seed: u64, family: SweepFamily) -> Result<SweepReport> {
    if samples == 0 {
        return Err(Error::Validation("sample count must be positive".into()));
    }
    if samples > MAX_SAMPLES {
        return Err(Error::Size {
            what: "samples",
            got: samples as usize,
            limit: MAX_SAMPLES as usize,
        });
    }
    let verdicts = (0..samples)
        .into_par_iter()
        .map(|i| evaluate_scenario(seed, i, family, SWEEP_EXTRA_B_TESTS))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize_sweep(
        seed,
        family,
        SWEEP_EXTRA_B_TESTS + 1,
        verdicts,
    ))
}
