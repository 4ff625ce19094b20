//! Additive characters of a finite ring, generating-character search,
//! bilinear pairings on `R^n`, and character-orbit analysis.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{CycloError, CycloField, CycloNum};
use crate::ring::{FiniteRing, FreeModule, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("exponent tuple has {got} entries, the ring has {expected} additive generators")]
    TupleLength { expected: usize, got: usize },
    #[error("pairing matrix must be {n}x{n}")]
    PairingShape { n: usize },
    #[error("pairing entry {0} is not an element of the ring")]
    PairingEntry(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// An additive character `eps: (R,+) -> mu_m`, with `m` the additive exponent.
///
/// On the additive basis `g_i` of order `r_i` the character is
/// `eps(g_i) = zeta_m^(a_i * m / r_i)`, so that
/// `eps(x) = zeta_m^(sum_i c_i(x) * a_i * m / r_i)`.
#[derive(Clone, Debug)]
pub struct AdditiveCharacter {
    ring: Arc<FiniteRing>,
    field: Arc<CycloField>,
    exponents: Vec<u64>,
}

impl PartialEq for AdditiveCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.ring.id() == other.ring.id() && self.exponents == other.exponents
    }
}

impl Eq for AdditiveCharacter {}

impl AdditiveCharacter {
    pub fn new(ring: &Arc<FiniteRing>, exponents: Vec<u64>) -> Result<Self, CharacterError> {
        let radices = ring.radices();
        if exponents.len() != radices.len() {
            return Err(CharacterError::TupleLength { expected: radices.len(), got: exponents.len() });
        }
        let exponents = exponents.iter().zip(radices).map(|(a, r)| a % r).collect();
        let field = CycloField::new(ring.exponent())?;
        Ok(AdditiveCharacter { ring: ring.clone(), field, exponents })
    }

    pub fn trivial(ring: &Arc<FiniteRing>) -> Self {
        Self::new(ring, vec![0; ring.radices().len()]).expect("trivial character")
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// Conductor `m` of the value field.
    pub fn conductor(&self) -> u64 {
        self.field.conductor()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// The `t` in `eps(x) = zeta_m^t`, reduced mod `m`.
    pub fn log(&self, x: usize) -> u64 {
        let m = self.conductor();
        let mut t: u128 = 0;
        for ((c, a), r) in self.ring.coords(x).iter().zip(&self.exponents).zip(self.ring.radices()) {
            t += (*c as u128) * (*a as u128) * ((m / r) as u128);
        }
        (t % m as u128) as u64
    }

    pub fn eval(&self, x: usize) -> CycloNum {
        CycloNum::root_of_unity(&self.field, self.log(x) as i64)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    /// Order `e` of the image `eps(R)`, a divisor of `m`.
    pub fn image_order(&self) -> u64 {
        let m = self.conductor();
        let g = self
            .exponents
            .iter()
            .zip(self.ring.radices())
            .fold(m, |g, (a, r)| g.gcd(&(a * (m / r))));
        m / g
    }

    /// Pointwise product of two characters of the same ring.
    pub fn product(&self, other: &Self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .zip(self.ring.radices())
            .map(|((a, b), r)| (a + b) % r)
            .collect();
        AdditiveCharacter { ring: self.ring.clone(), field: self.field.clone(), exponents }
    }

    pub fn inverse(&self) -> Self {
        let exponents = self.exponents.iter().zip(self.ring.radices()).map(|(a, r)| (r - a) % r).collect();
        AdditiveCharacter { ring: self.ring.clone(), field: self.field.clone(), exponents }
    }

    /// Human-readable form: the values on the additive basis as powers of zeta_m.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .ring
            .additive_basis()
            .iter()
            .map(|&(g, _)| format!("eps({})=z^{}", self.ring.format_elem(g), self.log(g)))
            .collect();
        format!("({}) with z = zeta_{}", parts.join(", "), self.conductor())
    }
}

/// All `|R|` characters, ordered lexicographically by exponent tuple with the
/// first coordinate most significant.
pub fn all_characters(ring: &Arc<FiniteRing>) -> Vec<AdditiveCharacter> {
    let radices = ring.radices().to_vec();
    let mut out = Vec::with_capacity(ring.size());
    let mut tuple = vec![0u64; radices.len()];
    loop {
        out.push(AdditiveCharacter::new(ring, tuple.clone()).expect("valid tuple"));
        let mut i = radices.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < radices[i] {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// Returns a nonzero `r` with `eps(rR) = {1}` if one exists.
///
/// `s -> eps(rs)` is itself a character, so it is trivial exactly when it is
/// trivial on the additive basis.
pub fn generating_witness(ch: &AdditiveCharacter) -> Option<usize> {
    let ring = ch.ring();
    let basis = ring.additive_basis();
    (1..ring.size()).find(|&r| basis.iter().all(|&(g, _)| ch.log(ring.mul_idx(r, g)) == 0))
}

pub fn is_generating(ch: &AdditiveCharacter) -> bool {
    generating_witness(ch).is_none()
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterWitness {
    pub exponents: Vec<u64>,
    /// Nonzero `r` whose principal ideal lies in the kernel.
    pub r: usize,
    pub r_display: String,
}

#[derive(Clone, Debug)]
pub struct FrobeniusCertificate {
    pub frobenius: bool,
    pub generating: Option<AdditiveCharacter>,
    /// One witness per character, filled only when no character is generating.
    pub witnesses: Vec<CharacterWitness>,
}

/// Searches all characters in order and returns the first generating one.
pub fn certify_frobenius(ring: &Arc<FiniteRing>) -> FrobeniusCertificate {
    let mut witnesses = Vec::new();
    for ch in all_characters(ring) {
        match generating_witness(&ch) {
            None => return FrobeniusCertificate { frobenius: true, generating: Some(ch), witnesses: Vec::new() },
            Some(r) => witnesses.push(CharacterWitness {
                exponents: ch.exponents().to_vec(),
                r,
                r_display: ring.format_elem(r),
            }),
        }
    }
    FrobeniusCertificate { frobenius: false, generating: None, witnesses }
}

/// A bilinear pairing `beta(y, x) = sum_{i,j} y_i B_ij x_j` on `R^n`.
#[derive(Clone, Debug)]
pub struct Pairing {
    module: FreeModule,
    matrix: Vec<Vec<usize>>,
}

impl Pairing {
    pub fn new(ring: &Arc<FiniteRing>, n: usize, matrix: Vec<Vec<usize>>) -> Result<Self, CharacterError> {
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(CharacterError::PairingShape { n });
        }
        if let Some(&bad) = matrix.iter().flatten().find(|&&b| b >= ring.size()) {
            return Err(CharacterError::PairingEntry(bad));
        }
        Ok(Pairing { module: FreeModule::new(ring.clone(), n)?, matrix })
    }

    /// The standard pairing `B = I`.
    pub fn identity(ring: &Arc<FiniteRing>, n: usize) -> Result<Self, CharacterError> {
        let one = ring.one();
        let matrix = (0..n).map(|i| (0..n).map(|j| if i == j { one } else { 0 }).collect()).collect();
        Self::new(ring, n, matrix)
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        self.module.ring()
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn matrix(&self) -> &[Vec<usize>] {
        &self.matrix
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    /// `beta(y, x)` on decoded vectors.
    pub fn eval_vec(&self, y: &[usize], x: &[usize]) -> usize {
        let ring = self.ring();
        let mut acc = ring.zero();
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0 {
                continue;
            }
            for (j, &xj) in x.iter().enumerate() {
                if xj == 0 || self.matrix[i][j] == 0 {
                    continue;
                }
                acc = ring.add_idx(acc, ring.mul_idx(ring.mul_idx(yi, self.matrix[i][j]), xj));
            }
        }
        acc
    }

    /// `beta(y, x)` on encoded elements of `R^n`.
    pub fn eval(&self, y: usize, x: usize) -> usize {
        self.eval_vec(&self.module.decode(y), &self.module.decode(x))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NondegeneracyReport {
    pub nondegenerate: bool,
    /// Nonzero `x` with `eps(beta(y, x)) = 1` for every `y`.
    pub left_kernel_witness: Option<usize>,
    /// Nonzero `y` with `eps(beta(y, x)) = 1` for every `x`.
    pub right_kernel_witness: Option<usize>,
}

/// Checks both one-sided nondegeneracy conditions of `eps o beta`.
///
/// For fixed `x` the map `y -> eps(beta(y, x))` is a character of `R^n`, so it
/// suffices to test `y` on the additive generators (and symmetrically).
pub fn nondegeneracy(pairing: &Pairing, ch: &AdditiveCharacter) -> NondegeneracyReport {
    let module = pairing.module();
    let gens = module.additive_generators();
    let left = (1..module.size()).find(|&x| gens.iter().all(|&y| ch.log(pairing.eval(y, x)) == 0));
    let right = (1..module.size()).find(|&y| gens.iter().all(|&x| ch.log(pairing.eval(y, x)) == 0));
    NondegeneracyReport {
        nondegenerate: left.is_none() && right.is_none(),
        left_kernel_witness: left,
        right_kernel_witness: right,
    }
}

pub fn is_nondegenerate(pairing: &Pairing, ch: &AdditiveCharacter) -> bool {
    nondegeneracy(pairing, ch).nondegenerate
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub orbit_size: usize,
    pub dual_size: usize,
    pub full: bool,
    /// Each orbit character `x -> eps(beta(y, x))` as its values `zeta_m^t` on
    /// the additive generators of `R^n` (the list of `t`).
    pub characters: Vec<Vec<u64>>,
}

/// The set `{x -> eps(beta(y, x)) : y in R^n}` of characters of `R^n`.
pub fn character_orbit(pairing: &Pairing, ch: &AdditiveCharacter) -> OrbitReport {
    let module = pairing.module();
    let gens = module.additive_generators();
    let set: BTreeSet<Vec<u64>> = (0..module.size())
        .map(|y| gens.iter().map(|&x| ch.log(pairing.eval(y, x))).collect())
        .collect();
    OrbitReport {
        orbit_size: set.len(),
        dual_size: module.size(),
        full: set.len() == module.size(),
        characters: set.into_iter().collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SharpnessReport {
    pub max_orbit_size: usize,
    pub dual_size: usize,
    /// Exponent tuple and pairing value `b` (so `B = [b]`) attaining the maximum.
    pub best_character: Vec<u64>,
    pub best_pairing: usize,
    pub pairs_checked: usize,
}

/// Maximum orbit size over all characters and all `1x1` pairings `B = [b]`.
pub fn max_orbit_rank_one(ring: &Arc<FiniteRing>) -> SharpnessReport {
    let mut best = (0usize, Vec::new(), 0usize);
    let mut pairs = 0;
    for ch in all_characters(ring) {
        for b in 0..ring.size() {
            pairs += 1;
            let pairing = Pairing::new(ring, 1, vec![vec![b]]).expect("1x1 pairing");
            let size = character_orbit(&pairing, &ch).orbit_size;
            if size > best.0 {
                best = (size, ch.exponents().to_vec(), b);
            }
        }
    }
    SharpnessReport {
        max_orbit_size: best.0,
        dual_size: ring.size(),
        best_character: best.1,
        best_pairing: best.2,
        pairs_checked: pairs,
    }
}
