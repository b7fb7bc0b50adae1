//! Seeded random differential polynomials for property checks.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::diffpoly::{DiffPoly, GeneratorSpace, Monomial, Parity};
use crate::scalar::{q, Scalar};

#[derive(Clone, Copy, Debug)]
pub struct SampleShape {
    pub max_degree: usize,
    pub max_order: u32,
    pub max_terms: usize,
}

impl Default for SampleShape {
    fn default() -> Self {
        SampleShape {
            max_degree: 3,
            max_order: 2,
            max_terms: 3,
        }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    shape: SampleShape,
}

impl Sampler {
    pub fn new(seed: u64, shape: SampleShape) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            shape,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn parity(&mut self) -> Parity {
        Parity::from_bit(self.rng.gen_range(0..2))
    }

    fn coefficient(&mut self) -> Scalar {
        let mut n = self.rng.gen_range(-4i64..=4);
        if n == 0 {
            n = 1;
        }
        let d = self.rng.gen_range(1i64..=3);
        Scalar::from_q(q(n, d))
    }

    fn monomial(&mut self, space: &GeneratorSpace) -> Option<Monomial> {
        let deg = self.rng.gen_range(1..=self.shape.max_degree);
        let syms = (0..deg)
            .map(|_| {
                let g = self.rng.gen_range(0..space.len());
                let o = self.rng.gen_range(0..=self.shape.max_order);
                space.symbol(g, o)
            })
            .collect();
        Monomial::from_unsorted(syms).map(|(_, m)| m)
    }

    /// A nonzero homogeneous polynomial of the requested parity.
    /// Panics when `parity` is odd and the space has no odd generator.
    pub fn homogeneous(&mut self, space: &Arc<GeneratorSpace>, parity: Parity) -> DiffPoly {
        assert!(
            !parity.is_odd() || (0..space.len()).any(|i| space.parity(i).is_odd()),
            "no odd generators to build an odd polynomial"
        );
        loop {
            let terms = self.rng.gen_range(1..=self.shape.max_terms);
            let mut p = DiffPoly::zero(space);
            let mut tries = 0;
            while p.len() < terms && tries < 50 {
                tries += 1;
                if let Some(m) = self.monomial(space) {
                    if m.parity() == parity {
                        let c = self.coefficient();
                        p.add_term(m, c);
                    }
                }
            }
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A nonzero homogeneous polynomial of random parity.
    pub fn any(&mut self, space: &Arc<GeneratorSpace>) -> DiffPoly {
        let par = if (0..space.len()).all(|i| !space.parity(i).is_odd()) {
            Parity::Even
        } else {
            self.parity()
        };
        self.homogeneous(space, par)
    }

    pub fn pairs(&mut self, space: &Arc<GeneratorSpace>, n: usize) -> Vec<(DiffPoly, DiffPoly)> {
        (0..n).map(|_| (self.any(space), self.any(space))).collect()
    }

    pub fn triples(
        &mut self,
        space: &Arc<GeneratorSpace>,
        n: usize,
    ) -> Vec<(DiffPoly, DiffPoly, DiffPoly)> {
        (0..n)
            .map(|_| (self.any(space), self.any(space), self.any(space)))
            .collect()
    }
}
