//! Seeded samplers for series, units, derivations and coordinate changes.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Elem;
use crate::linalg::dense_rank;
use crate::series::{Monomial, Ring, Series};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n)
    }

    pub fn range(&mut self, lo: u32, hi: u32) -> u32 {
        self.rng.gen_range(lo..=hi)
    }

    fn elem(&mut self, ring: &Ring) -> Elem {
        self.below(ring.field().order())
    }

    fn nonzero(&mut self, ring: &Ring) -> Elem {
        1 + self.below(ring.field().order() - 1)
    }

    fn monomial(&mut self, nvars: usize, min_deg: u32, max_deg: u32) -> Monomial {
        let d = self.range(min_deg, max_deg);
        let mut exps = vec![0u32; nvars];
        for _ in 0..d {
            exps[self.below(nvars as u64) as usize] += 1;
        }
        Monomial::new(&exps)
    }

    /// Up to `terms` random terms with degrees in `min_deg..=max_deg`.
    pub fn poly(&mut self, ring: &Arc<Ring>, min_deg: u32, max_deg: u32, terms: usize, order: i32) -> Series {
        let n = ring.nvars();
        let raw: Vec<(Monomial, Elem)> =
            (0..terms).map(|_| (self.monomial(n, min_deg, max_deg), self.elem(ring))).collect();
        Series::from_terms(ring, raw, order)
    }

    /// Nonzero constant plus random terms of positive degree.
    pub fn unit(&mut self, ring: &Arc<Ring>, max_deg: u32, order: i32) -> Series {
        let c = self.nonzero(ring);
        Series::constant(ring, c, order).add(&self.poly(ring, 1, max_deg, 4, order))
    }

    /// Invertible linear part plus a few terms of degree `2..=max_deg`.
    pub fn coordinate_change(&mut self, ring: &Arc<Ring>, max_deg: u32, order: i32) -> Vec<Series> {
        let n = ring.nvars();
        let matrix = loop {
            let m: Vec<Vec<Elem>> = (0..n).map(|_| (0..n).map(|_| self.elem(ring)).collect()).collect();
            if dense_rank(ring.field(), &m, n) == n {
                break m;
            }
        };
        (0..n)
            .map(|i| {
                let linear = Series::from_terms(ring, (0..n).map(|j| (Monomial::var(j), matrix[i][j])), order);
                linear.add(&self.poly(ring, 2, max_deg, 2, order))
            })
            .collect()
    }
}
