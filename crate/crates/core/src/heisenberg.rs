//! The Heisenberg group `H = R^n x R^n x mu` attached to a pairing `beta`
//! and a generating character `eps`.
//!
//! Elements are triples `(x, y, k)` with `x, y` encoded in `R^n` and the
//! central part `zeta_e^k` stored as its exponent `k mod e`, where `e` is the
//! order of the image of `eps`. The group law is
//! `(x, y, k)(x', y', k') = (x + x', y + y', k + k' + c)` with
//! `zeta_e^c = eps(beta(y', x))`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::character::{is_generating, AdditiveCharacter, Pairing};
use crate::ring::{FiniteRing, FreeModule};

/// Largest group whose associativity is checked on all triples.
const ASSOC_TRIPLE_LIMIT: usize = 256;
/// Largest `|R^n|^2` for which the cocycle identity is checked on all triples.
const COCYCLE_TRIPLE_LIMIT: usize = 256;
const RANDOM_TRIPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeisenbergError {
    #[error("the character is not generating: eps({r} * R) = 1")]
    NotGenerating { r: usize },
    #[error("character and pairing live over different rings")]
    RingMismatch,
    #[error("element ({x}, {y}, {k}) out of range")]
    OutOfRange { x: usize, y: usize, k: u64 },
    #[error("elements belong to different groups")]
    MixedGroups,
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    TooLarge { order: usize, cap: usize },
}

/// Which 2-cocycle defines the multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cocycle {
    /// `eps(beta(y', x))`: the law under which `lambda M_y T_x` is a homomorphism.
    Adopted,
    /// `eps(beta(y, x'))`: the alternative ordering, kept for comparison.
    Display,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: u64,
    pub x: usize,
    pub y: usize,
    pub k: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ElementJson {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub k: u64,
}

pub struct HeisenbergGroup {
    pairing: Pairing,
    character: AdditiveCharacter,
    cocycle: Cocycle,
    e: u64,
    step: u64,
    id: u64,
}

impl fmt::Debug for HeisenbergGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeisenbergGroup")
            .field("ring", &self.ring().spec().to_string())
            .field("n", &self.rank())
            .field("pairing", &self.pairing.matrix())
            .field("character", &self.character.exponents())
            .field("cocycle", &self.cocycle)
            .finish()
    }
}

fn fnv(parts: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for p in parts {
        for b in p.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

impl HeisenbergGroup {
    pub fn new(pairing: Pairing, character: AdditiveCharacter) -> Result<Arc<Self>, HeisenbergError> {
        Self::with_cocycle(pairing, character, Cocycle::Adopted)
    }

    pub fn with_cocycle(
        pairing: Pairing,
        character: AdditiveCharacter,
        cocycle: Cocycle,
    ) -> Result<Arc<Self>, HeisenbergError> {
        if pairing.ring().id() != character.ring().id() {
            return Err(HeisenbergError::RingMismatch);
        }
        if let Some(r) = crate::character::generating_witness(&character) {
            return Err(HeisenbergError::NotGenerating { r });
        }
        debug_assert!(is_generating(&character));
        let e = character.image_order();
        let step = character.conductor() / e;
        let mut parts = vec![pairing.ring().id(), pairing.rank() as u64, cocycle as u64];
        parts.extend(pairing.matrix().iter().flatten().map(|&b| b as u64));
        parts.extend(character.exponents());
        let id = fnv(&parts);
        Ok(Arc::new(HeisenbergGroup { pairing, character, cocycle, e, step, id }))
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        self.pairing.ring()
    }

    pub fn module(&self) -> &FreeModule {
        self.pairing.module()
    }

    pub fn rank(&self) -> usize {
        self.pairing.rank()
    }

    pub fn pairing(&self) -> &Pairing {
        &self.pairing
    }

    pub fn character(&self) -> &AdditiveCharacter {
        &self.character
    }

    pub fn cocycle_kind(&self) -> Cocycle {
        self.cocycle
    }

    /// Order `e` of the central subgroup `mu = eps(R)`.
    pub fn central_order(&self) -> u64 {
        self.e
    }

    /// `m / e`, so that `zeta_e = zeta_m^step`.
    pub fn central_step(&self) -> u64 {
        self.step
    }

    pub fn conductor(&self) -> u64 {
        self.character.conductor()
    }

    pub fn order(&self) -> usize {
        let q = self.module().size();
        q * q * self.e as usize
    }

    pub fn element(&self, x: usize, y: usize, k: u64) -> Result<GroupElement, HeisenbergError> {
        if x >= self.module().size() || y >= self.module().size() {
            return Err(HeisenbergError::OutOfRange { x, y, k });
        }
        Ok(GroupElement { group: self.id, x, y, k: k % self.e })
    }

    fn elem(&self, x: usize, y: usize, k: u64) -> GroupElement {
        GroupElement { group: self.id, x, y, k: k % self.e }
    }

    pub fn identity(&self) -> GroupElement {
        self.elem(0, 0, 0)
    }

    pub fn from_x(&self, x: usize) -> GroupElement {
        self.elem(x, 0, 0)
    }

    pub fn from_y(&self, y: usize) -> GroupElement {
        self.elem(0, y, 0)
    }

    pub fn central(&self, k: u64) -> GroupElement {
        self.elem(0, 0, k)
    }

    /// `eps(beta(y, x))` as an exponent of `zeta_e`.
    pub fn chi(&self, y: usize, x: usize) -> u64 {
        let t = self.character.log(self.pairing.eval(y, x));
        debug_assert_eq!(t % self.step, 0);
        t / self.step
    }

    /// Exponent of the cocycle `c(g, h)`.
    pub fn cocycle(&self, g: &GroupElement, h: &GroupElement) -> u64 {
        match self.cocycle {
            Cocycle::Adopted => self.chi(h.y, g.x),
            Cocycle::Display => self.chi(g.y, h.x),
        }
    }

    fn check(&self, g: &GroupElement) -> Result<(), HeisenbergError> {
        if g.group != self.id {
            return Err(HeisenbergError::MixedGroups);
        }
        Ok(())
    }

    pub fn try_multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, HeisenbergError> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.multiply(g, h))
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let m = self.module();
        self.elem(m.add(g.x, h.x), m.add(g.y, h.y), g.k + h.k + self.cocycle(g, h))
    }

    /// `(x, y, lambda)^-1 = (-x, -y, lambda^-1 eps(beta(y, x)))`.
    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let m = self.module();
        let k = (self.e - g.k % self.e) + self.chi(g.y, g.x);
        self.elem(m.neg(g.x), m.neg(g.y), k)
    }

    /// `a g a^-1`.
    pub fn conjugate(&self, a: &GroupElement, g: &GroupElement) -> GroupElement {
        self.multiply(&self.multiply(a, g), &self.inverse(a))
    }

    pub fn commutes(&self, g: &GroupElement, h: &GroupElement) -> bool {
        self.multiply(g, h) == self.multiply(h, g)
    }

    pub fn power(&self, g: &GroupElement, n: u64) -> GroupElement {
        (0..n).fold(self.identity(), |acc, _| self.multiply(&acc, g))
    }

    /// The sign `sigma` in `(0,y,1)(x,0,1)(0,y,1)^-1 = (x, 0, eps(beta(y,x))^sigma)`,
    /// determined by evaluating the conjugation on every pair with
    /// `eps(beta(y, x)) != eps(beta(y, x))^-1`. Returns `None` if no pair
    /// distinguishes the two signs (all values are `+-1`).
    pub fn conjugation_sign(&self) -> Option<i8> {
        let q = self.module().size();
        for y in 0..q {
            for x in 0..q {
                let c = self.chi(y, x);
                if (2 * c).is_multiple_of(self.e) {
                    continue;
                }
                let r = self.conjugate(&self.from_y(y), &self.from_x(x));
                return Some(if r.k == c { 1 } else { -1 });
            }
        }
        None
    }

    /// Index of an element in `0..order()`, with `x` least significant.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        let q = self.module().size();
        g.x + q * (g.y + q * g.k as usize)
    }

    pub fn from_index(&self, idx: usize) -> GroupElement {
        let q = self.module().size();
        self.elem(idx % q, (idx / q) % q, (idx / (q * q)) as u64)
    }

    pub fn enumerate(&self, cap: usize) -> Result<Vec<GroupElement>, HeisenbergError> {
        let order = self.order();
        if order > cap {
            return Err(HeisenbergError::TooLarge { order, cap });
        }
        Ok((0..order).map(|i| self.from_index(i)).collect())
    }

    /// `(g, 0, 1)` and `(0, g, 1)` for each additive generator `g` of `R^n`,
    /// followed by `(0, 0, zeta_e)`.
    pub fn generators(&self) -> Vec<GroupElement> {
        let gens = self.module().additive_generators();
        let mut out: Vec<GroupElement> = gens.iter().map(|&g| self.from_x(g)).collect();
        out.extend(gens.iter().map(|&g| self.from_y(g)));
        out.push(self.central(1));
        out
    }

    /// Size of the subgroup generated by [`Self::generators`], by closure.
    pub fn generated_order(&self, cap: usize) -> Result<usize, HeisenbergError> {
        if self.order() > cap {
            return Err(HeisenbergError::TooLarge { order: self.order(), cap });
        }
        let gens = self.generators();
        let mut seen = HashSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(g) = queue.pop_front() {
            for s in &gens {
                let h = self.multiply(&g, s);
                if seen.insert(h) {
                    queue.push_back(h);
                }
            }
        }
        Ok(seen.len())
    }

    /// Brute-force centre: elements commuting with every generator.
    pub fn centre(&self, cap: usize) -> Result<Vec<GroupElement>, HeisenbergError> {
        let gens = self.generators();
        Ok(self.enumerate(cap)?.into_iter().filter(|g| gens.iter().all(|s| self.commutes(g, s))).collect())
    }

    /// Whether the centre is exactly `{(0, 0, lambda)}`.
    pub fn centre_is_mu(&self, cap: usize) -> Result<bool, HeisenbergError> {
        let centre = self.centre(cap)?;
        Ok(centre.len() == self.e as usize && centre.iter().all(|g| g.x == 0 && g.y == 0))
    }

    pub fn to_json(&self, g: &GroupElement) -> ElementJson {
        ElementJson { x: self.module().decode(g.x), y: self.module().decode(g.y), k: g.k }
    }

    /// `(x-tuple | y-tuple | zeta^k)`.
    pub fn format(&self, g: &GroupElement) -> String {
        let ring = self.ring();
        let tuple = |v: usize| {
            self.module().decode(v).iter().map(|&c| ring.format_elem(c)).collect::<Vec<_>>().join(", ")
        };
        format!("({} | {} | zeta_{}^{})", tuple(g.x), tuple(g.y), self.e, g.k)
    }

    /// Identity, inverse and associativity checks.
    pub fn verify_axioms(&self, cap: usize, seed: u64) -> AxiomCertificate {
        let order = self.order();
        let q = self.module().size();
        let mut violations = Vec::new();
        let sample: Vec<GroupElement> = if order <= cap {
            (0..order).map(|i| self.from_index(i)).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..1000).map(|_| self.from_index(rng.gen_range(0..order))).collect()
        };
        let id = self.identity();
        let identity_ok = sample.iter().all(|g| self.multiply(g, &id) == *g && self.multiply(&id, g) == *g);
        let inverse_ok = sample.iter().all(|g| {
            let inv = self.inverse(g);
            self.multiply(g, &inv) == id && self.multiply(&inv, g) == id && self.inverse(&inv) == *g
        });

        let mut triples = 0usize;
        let mode;
        if order <= ASSOC_TRIPLE_LIMIT {
            mode = AssociativityMode::AllTriples;
            for a in 0..order {
                let ga = self.from_index(a);
                for b in 0..order {
                    let gb = self.from_index(b);
                    let ab = self.multiply(&ga, &gb);
                    for c in 0..order {
                        let gc = self.from_index(c);
                        triples += 1;
                        if self.multiply(&ab, &gc) != self.multiply(&ga, &self.multiply(&gb, &gc)) {
                            violations.push([ga, gb, gc].map(|g| self.to_json(&g)));
                        }
                    }
                }
            }
        } else if q * q <= COCYCLE_TRIPLE_LIMIT {
            // The central coordinate adds linearly, so associativity is
            // equivalent to the cocycle identity on the quotient R^n x R^n.
            mode = AssociativityMode::QuotientCocycle;
            let base: Vec<GroupElement> = (0..q * q).map(|i| self.from_index(i)).collect();
            for a in &base {
                for b in &base {
                    let ab = self.multiply(a, b);
                    for c in &base {
                        triples += 1;
                        if self.multiply(&ab, c) != self.multiply(a, &self.multiply(b, c)) {
                            violations.push([*a, *b, *c].map(|g| self.to_json(&g)));
                        }
                    }
                }
            }
        } else {
            mode = AssociativityMode::GeneratorsAndRandom;
            let gens = self.generators();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut check = |a: GroupElement, b: GroupElement, c: GroupElement| {
                triples += 1;
                if self.multiply(&self.multiply(&a, &b), &c) != self.multiply(&a, &self.multiply(&b, &c)) {
                    violations.push([a, b, c].map(|g| self.to_json(&g)));
                }
            };
            for a in &gens {
                for b in &gens {
                    for c in &gens {
                        check(*a, *b, *c);
                    }
                }
            }
            for _ in 0..RANDOM_TRIPLES {
                let t = [0; 3].map(|_| self.from_index(rng.gen_range(0..order)));
                check(t[0], t[1], t[2]);
            }
        }
        violations.truncate(8);
        AxiomCertificate {
            identity_ok,
            inverse_ok,
            associativity_mode: mode,
            triples_checked: triples,
            associativity_violations: violations,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssociativityMode {
    AllTriples,
    QuotientCocycle,
    GeneratorsAndRandom,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCertificate {
    pub identity_ok: bool,
    pub inverse_ok: bool,
    pub associativity_mode: AssociativityMode,
    pub triples_checked: usize,
    pub associativity_violations: Vec<[ElementJson; 3]>,
}

impl AxiomCertificate {
    pub fn passed(&self) -> bool {
        self.identity_ok && self.inverse_ok && self.associativity_violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::build_ring;

    fn group(spec: &str, n: usize, b: Vec<Vec<usize>>, ch: Vec<u64>) -> Arc<HeisenbergGroup> {
        let ring = build_ring(spec).unwrap();
        let pairing = Pairing::new(&ring, n, b).unwrap();
        HeisenbergGroup::new(pairing, AdditiveCharacter::new(&ring, ch).unwrap()).unwrap()
    }

    fn z4() -> Arc<HeisenbergGroup> {
        group("Z/4", 1, vec![vec![1]], vec![1])
    }

    #[test]
    fn orders() {
        assert_eq!(group("Z/2", 1, vec![vec![1]], vec![1]).order(), 8);
        assert_eq!(z4().order(), 64);
        let g = group("Z/2", 1, vec![vec![1]], vec![1]);
        assert_eq!(g.generators().len(), 3);
        assert_eq!(g.generated_order(1 << 16).unwrap(), 8);
    }

    #[test]
    fn multiplication_examples() {
        let g = z4();
        let a = g.element(1, 0, 0).unwrap();
        let b = g.element(0, 1, 0).unwrap();
        // (1,0,1)(0,1,1) = (1,1,eps(beta(1,1))) = (1,1,i)
        assert_eq!(g.multiply(&a, &b), g.element(1, 1, 1).unwrap());
        // (0,y,1)(x,0,1) = (x,y,1)
        assert_eq!(g.multiply(&b, &a), g.element(1, 1, 0).unwrap());
        assert_eq!(g.multiply(&a, &g.identity()), a);
    }

    #[test]
    fn inverses() {
        let g = z4();
        assert_eq!(g.inverse(&g.identity()), g.identity());
        assert_eq!(g.inverse(&g.from_x(1)), g.element(3, 0, 0).unwrap());
        assert_eq!(g.inverse(&g.element(1, 1, 0).unwrap()), g.element(3, 3, 1).unwrap());
    }

    #[test]
    fn conjugation_by_y_twists_with_inverse_character() {
        let g = z4();
        let r = g.conjugate(&g.from_y(1), &g.from_x(1));
        assert_eq!(r, g.element(1, 0, 3).unwrap());
        assert_eq!(g.conjugation_sign(), Some(-1));
        let z = g.central(2);
        for a in g.enumerate(1 << 16).unwrap() {
            assert_eq!(g.conjugate(&a, &z), z);
        }
    }

    #[test]
    fn centres() {
        let g = z4();
        let c = g.centre(1 << 16).unwrap();
        assert_eq!(c.len(), 4);
        assert!(g.centre_is_mu(1 << 16).unwrap());
        let zero = group("Z/4", 1, vec![vec![0]], vec![1]);
        assert_eq!(zero.centre(1 << 16).unwrap().len(), zero.order());
        let two = group("Z/4", 1, vec![vec![2]], vec![1]);
        let c = two.centre(1 << 16).unwrap();
        assert!(c.contains(&two.element(2, 0, 0).unwrap()));
        assert!(!two.centre_is_mu(1 << 16).unwrap());
    }

    #[test]
    fn axioms_hold_in_all_modes() {
        for (spec, n, b) in [
            ("Z/3", 1, vec![vec![1]]),
            ("Z/4", 1, vec![vec![1]]),
            ("Z/2", 2, vec![vec![1, 1], vec![0, 1]]),
        ] {
            let g = group(spec, n, b, vec![1]);
            let cert = g.verify_axioms(1 << 16, 7);
            assert!(cert.passed(), "{spec}: {cert:?}");
        }
        let big = group("Z/7", 1, vec![vec![1]], vec![1]);
        assert_eq!(big.verify_axioms(1 << 16, 7).associativity_mode, AssociativityMode::QuotientCocycle);
    }

    #[test]
    fn cocycle_identity_on_z3() {
        let g = group("Z/3", 1, vec![vec![1]], vec![1]);
        let all = g.enumerate(1 << 16).unwrap();
        for a in &all {
            for b in &all {
                for c in &all {
                    let lhs = (g.cocycle(a, b) + g.cocycle(&g.multiply(a, b), c)) % 3;
                    let rhs = (g.cocycle(b, c) + g.cocycle(a, &g.multiply(b, c))) % 3;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn projection_is_a_homomorphism_with_central_kernel() {
        let g = z4();
        let all = g.enumerate(1 << 16).unwrap();
        let m = g.module();
        for a in &all {
            for b in &all {
                let p = g.multiply(a, b);
                assert_eq!((p.x, p.y), (m.add(a.x, b.x), m.add(a.y, b.y)));
            }
        }
        let kernel = all.iter().filter(|h| h.x == 0 && h.y == 0).count();
        assert_eq!(kernel, g.central_order() as usize);
    }

    #[test]
    fn rejects_bad_input() {
        let ring = build_ring("Z/4").unwrap();
        let p = Pairing::identity(&ring, 1).unwrap();
        let sign = AdditiveCharacter::new(&ring, vec![2]).unwrap();
        assert_eq!(HeisenbergGroup::new(p, sign).unwrap_err(), HeisenbergError::NotGenerating { r: 2 });
        let g = z4();
        let other = group("Z/2", 1, vec![vec![1]], vec![1]);
        assert_eq!(g.try_multiply(&g.identity(), &other.identity()), Err(HeisenbergError::MixedGroups));
        assert!(g.element(4, 0, 0).is_err());
        assert_eq!(g.format(&g.element(1, 2, 3).unwrap()), "(1 | 2 | zeta_4^3)");
    }
}
