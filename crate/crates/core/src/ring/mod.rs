//! Finite commutative rings: the spec language, its parser, and exact
//! arithmetic on mixed-radix encoded elements.

mod finite;
mod parse;
mod spec;

use std::sync::Arc;

use thiserror::Error;

pub use finite::{FiniteRing, RingElem, EXHAUSTIVE_AXIOM_LIMIT};
pub use parse::parse_ring_spec;
pub use spec::{PolySpec, RingSpec, TableSpec};

/// Default bound on the number of ring elements.
pub const DEFAULT_ELEMENT_CAP: usize = 65536;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("characteristic {p} at {line}:{column} is not prime")]
    NotPrime { p: u64, line: usize, column: usize },
    #[error("modulus at {line}:{column} is not monic")]
    NotMonic { line: usize, column: usize },
    #[error("modulus at {line}:{column} has degree 0")]
    ConstantModulus { line: usize, column: usize },
    #[error("modulus {m} at {line}:{column} is below 2")]
    ModulusTooSmall { m: u64, line: usize, column: usize },
    #[error("malformed table at {line}:{column}: {message}")]
    TableShape {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("table ring axiom violated: {0}")]
    TableAxiom(String),
    #[error("ring has {size} elements, above the cap of {cap}")]
    TooLarge { size: String, cap: usize },
    #[error("operands belong to different rings")]
    MixedRings,
    #[error("element index {index} out of range for a ring of size {size}")]
    ElementOutOfRange { index: usize, size: usize },
}

/// Parses and builds a ring in one step.
pub fn build_ring(text: &str) -> Result<Arc<FiniteRing>, RingError> {
    Ok(Arc::new(FiniteRing::build(&parse_ring_spec(text)?)?))
}

/// The free module `R^n`, viewed additively.
///
/// A vector `(v_0, ..., v_{n-1})` is encoded as `sum v_i * |R|^i`. Since ring
/// indices are themselves mixed-radix, this is the mixed-radix encoding of the
/// concatenated additive coordinates.
#[derive(Clone, Debug)]
pub struct FreeModule {
    ring: Arc<FiniteRing>,
    rank: usize,
    size: usize,
}

impl FreeModule {
    pub fn new(ring: Arc<FiniteRing>, rank: usize) -> Result<Self, RingError> {
        let size = (ring.size() as u128).checked_pow(rank as u32).unwrap_or(u128::MAX);
        if size > usize::MAX as u128 / 2 {
            return Err(RingError::TooLarge { size: size.to_string(), cap: usize::MAX / 2 });
        }
        Ok(FreeModule { ring, rank, size: size as usize })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let q = self.ring.size();
        (0..self.rank)
            .map(|_| {
                let v = index % q;
                index /= q;
                v
            })
            .collect()
    }

    pub fn encode(&self, v: &[usize]) -> usize {
        let q = self.ring.size();
        v.iter().rev().fold(0, |acc, &x| acc * q + x)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (a, b) = (self.decode(a), self.decode(b));
        let sum: Vec<usize> = a.iter().zip(&b).map(|(&x, &y)| self.ring.add_idx(x, y)).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let v: Vec<usize> = self.decode(a).iter().map(|&x| self.ring.neg_idx(x)).collect();
        self.encode(&v)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Orders of the additive coordinates of `R^n`.
    pub fn radices(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.rank * self.ring.radices().len());
        for _ in 0..self.rank {
            out.extend_from_slice(self.ring.radices());
        }
        out
    }

    /// Additive generators: `g * e_i` for each additive basis element `g` of R.
    pub fn additive_generators(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            for (g, _) in self.ring.additive_basis() {
                let mut v = vec![0; self.rank];
                v[i] = g;
                out.push(self.encode(&v));
            }
        }
        out
    }

    /// Coordinates of `index` with respect to [`Self::additive_generators`].
    pub fn coords(&self, index: usize) -> Vec<u64> {
        self.decode(index).iter().flat_map(|&x| self.ring.coords(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn free_module_encoding_matches_concatenated_coordinates() {
        let ring = build_ring("F2[t]/(t^2) x Z/3").unwrap();
        let module = FreeModule::new(ring.clone(), 2).unwrap();
        assert_eq!(module.size(), 144);
        let radices = module.radices();
        for idx in 0..module.size() {
            let coords = module.coords(idx);
            let mut acc = 0usize;
            let mut place = 1usize;
            for (c, r) in coords.iter().zip(&radices) {
                acc += *c as usize * place;
                place *= *r as usize;
            }
            assert_eq!(acc, idx);
            assert_eq!(module.encode(&module.decode(idx)), idx);
        }
        assert_eq!(module.additive_generators().len(), 6);
    }

    fn arb_atom() -> impl Strategy<Value = RingSpec> {
        prop_oneof![
            (2u64..40).prop_map(RingSpec::IntMod),
            (prop::sample::select(vec![2u64, 3, 5, 7]), prop::collection::vec(0u64..7, 1..4))
                .prop_map(|(p, low)| {
                    let mut modulus: Vec<u64> = low.into_iter().map(|c| c % p).collect();
                    modulus.push(1);
                    RingSpec::PolyQuotient(PolySpec { p, var: "t".into(), modulus })
                }),
            (prop::sample::select(vec![2u64, 3]), 1usize..3, prop::collection::vec(0u64..3, 8))
                .prop_map(|(p, rank, pool)| {
                    let mut it = pool.into_iter().cycle();
                    let mul = (0..rank)
                        .map(|_| (0..rank).map(|_| (0..rank).map(|_| it.next().unwrap() % p).collect()).collect())
                        .collect();
                    RingSpec::Table(TableSpec { p, rank, mul })
                }),
        ]
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(parts in prop::collection::vec(arb_atom(), 1..4)) {
            let spec = RingSpec::product(parts);
            let reparsed = parse_ring_spec(&spec.to_string()).unwrap();
            prop_assert_eq!(reparsed, spec);
        }

        #[test]
        fn negation_is_additive_inverse(a in 0usize..144) {
            let ring = build_ring("F2[t]/(t^2) x Z/3 x Z/12").unwrap();
            let a = a % ring.size();
            prop_assert_eq!(ring.add_idx(ring.neg_idx(a), a), 0);
        }
    }
}
