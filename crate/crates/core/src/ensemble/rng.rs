//! Seeded random streams and uniform field sampling.
//!
//! Trial `i` of a run with master seed `s` draws from the ChaCha8 stream
//! `ChaCha8Rng::seed_from_u64(s)` with stream id `i`. Every trial therefore
//! sees the same bits no matter which worker runs it.

use std::sync::Arc;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fqlin::{Elem, FieldSpec, FqVector, GeneratorSet};

/// The random stream of one trial.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Uniform elements of `{0..q-1}` by rejection from the next power of two:
/// draw a 32-bit word, keep its low `ceil(log2 q)` bits, retry when `>= q`.
#[derive(Clone, Copy, Debug)]
pub struct ElementSampler {
    q: u32,
    mask: u32,
}

impl ElementSampler {
    pub fn new(q: u32) -> Self {
        ElementSampler {
            q,
            mask: q.next_power_of_two() - 1,
        }
    }

    #[inline]
    pub fn sample<R: RngCore>(&self, rng: &mut R) -> Elem {
        loop {
            let x = rng.next_u32() & self.mask;
            if x < self.q {
                return x as Elem;
            }
        }
    }

    pub fn vector<R: RngCore>(&self, n: usize, rng: &mut R) -> Vec<Elem> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

/// `k` independent uniform rows of `F_q^n`, optionally redrawn until they are
/// linearly independent. Returns the generator set and the number of redraws.
pub fn draw_generators<R: RngCore>(
    field: &Arc<FieldSpec>,
    n: usize,
    k: usize,
    full_rank: bool,
    rng: &mut R,
) -> Result<(GeneratorSet, u64)> {
    let sampler = ElementSampler::new(field.order());
    let mut redraws = 0;
    loop {
        let rows = (0..k).map(|_| FqVector::new(sampler.vector(n, rng))).collect();
        let g = GeneratorSet::new(field.clone(), n, rows)?;
        if !full_rank || g.is_full_rank() {
            return Ok((g, redraws));
        }
        redraws += 1;
    }
}
