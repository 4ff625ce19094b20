//! Additive difference calculus for phase functions `phi: A -> R`.
//!
//! Domains are free modules `R'^n` viewed additively. Any finite abelian group
//! is covered by taking `R'` to be a product of `Z/m` factors with `n = 1`.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::character::{AdditiveCharacter, Pairing};
use crate::cyclo::CycloMatrix;
use crate::ring::{FiniteRing, FreeModule};

/// Default bound on the additive degree searched for.
pub const DEFAULT_DEGREE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefectError {
    #[error("element {index} is outside a domain of size {size}")]
    DomainMismatch { index: usize, size: usize },
    #[error("phase table has {got} entries, the domain has {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("value {0} is not an element of the codomain ring")]
    ValueOutOfRange(usize),
    #[error("phases live on different domains or codomains")]
    Incompatible,
    #[error("map is not additive: f({a} + {b}) != f({a}) + f({b})")]
    NotAdditive { a: usize, b: usize },
    #[error("additive degree exceeds the search cap of {cap}")]
    DegreeCap { cap: usize },
    #[error("character belongs to a different ring than the phase codomain")]
    CharacterRing,
}

fn same_domain(a: &FreeModule, b: &FreeModule) -> bool {
    a.rank() == b.rank() && a.ring().id() == b.ring().id()
}

/// A function `phi: A -> R` stored as a value table over the encoded domain.
#[derive(Clone, Debug)]
pub struct PhaseFunction {
    domain: FreeModule,
    codomain: Arc<FiniteRing>,
    values: Vec<usize>,
}

impl PartialEq for PhaseFunction {
    fn eq(&self, other: &Self) -> bool {
        same_domain(&self.domain, &other.domain)
            && self.codomain.id() == other.codomain.id()
            && self.values == other.values
    }
}

impl Eq for PhaseFunction {}

impl PhaseFunction {
    pub fn new(domain: FreeModule, codomain: Arc<FiniteRing>, values: Vec<usize>) -> Result<Self, DefectError> {
        if values.len() != domain.size() {
            return Err(DefectError::TableLength { expected: domain.size(), got: values.len() });
        }
        if let Some(&v) = values.iter().find(|&&v| v >= codomain.size()) {
            return Err(DefectError::ValueOutOfRange(v));
        }
        Ok(PhaseFunction { domain, codomain, values })
    }

    pub fn from_fn(domain: FreeModule, codomain: Arc<FiniteRing>, f: impl Fn(usize) -> usize) -> Self {
        let values = (0..domain.size()).map(f).collect();
        PhaseFunction { domain, codomain, values }
    }

    pub fn constant(domain: FreeModule, codomain: Arc<FiniteRing>, c: usize) -> Self {
        Self::from_fn(domain, codomain, |_| c)
    }

    /// The linear phase `phi_b(u) = beta(b, u)`.
    pub fn linear(pairing: &Pairing, b: usize) -> Self {
        Self::from_fn(pairing.module().clone(), pairing.ring().clone(), |u| pairing.eval(b, u))
    }

    pub fn domain(&self) -> &FreeModule {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteRing> {
        &self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Exhaustive test of `phi(x + y) = phi(x) + phi(y)`.
    pub fn is_additive(&self) -> bool {
        let n = self.domain.size();
        (0..n).all(|x| {
            (x..n).all(|y| self.values[self.domain.add(x, y)] == self.codomain.add_idx(self.values[x], self.values[y]))
        })
    }

    fn check_domain(&self, h: usize) -> Result<(), DefectError> {
        if h >= self.domain.size() {
            return Err(DefectError::DomainMismatch { index: h, size: self.domain.size() });
        }
        Ok(())
    }

    /// `(Delta_h phi)(x) = phi(x + h) - phi(x)`.
    pub fn difference(&self, h: usize) -> Result<Self, DefectError> {
        self.check_domain(h)?;
        Ok(self.diff_unchecked(h))
    }

    fn diff_unchecked(&self, h: usize) -> Self {
        let values = (0..self.domain.size())
            .map(|x| self.codomain.sub_idx(self.values[self.domain.add(x, h)], self.values[x]))
            .collect();
        PhaseFunction { domain: self.domain.clone(), codomain: self.codomain.clone(), values }
    }

    /// `Delta_{h_1, ..., h_k} = Delta_{h_k} ... Delta_{h_1}`; the empty list gives `phi`.
    pub fn iterated_difference(&self, hs: &[usize]) -> Result<Self, DefectError> {
        for &h in hs {
            self.check_domain(h)?;
        }
        Ok(hs.iter().fold(self.clone(), |f, &h| f.diff_unchecked(h)))
    }

    pub fn add(&self, other: &Self) -> Result<Self, DefectError> {
        if !same_domain(&self.domain, &other.domain) || self.codomain.id() != other.codomain.id() {
            return Err(DefectError::Incompatible);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| self.codomain.add_idx(a, b)).collect();
        Ok(PhaseFunction { domain: self.domain.clone(), codomain: self.codomain.clone(), values })
    }

    /// Pullback `f^*(phi) = phi o f` along an additive map into this domain.
    pub fn pullback(&self, f: &AdditiveMap) -> Result<Self, DefectError> {
        if !same_domain(&f.target, &self.domain) {
            return Err(DefectError::Incompatible);
        }
        let values = f.table.iter().map(|&y| self.values[y]).collect();
        Ok(PhaseFunction { domain: f.source.clone(), codomain: self.codomain.clone(), values })
    }

    /// The distinct `k`-fold differences `{Delta_{h_1..h_k} phi : h_i in A}`.
    fn difference_layer(layer: &[PhaseFunction]) -> Vec<PhaseFunction> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for f in layer {
            for h in 1..f.domain.size() {
                let g = f.diff_unchecked(h);
                if seen.insert(g.values.clone()) {
                    out.push(g);
                }
            }
        }
        if out.is_empty() && !layer.is_empty() {
            // Delta_0 is the zero function.
            out.push(PhaseFunction::constant(layer[0].domain.clone(), layer[0].codomain.clone(), 0));
        }
        out
    }

    /// Least `d` such that every `(d+1)`-fold difference vanishes, found by
    /// exhaustive search over difference tuples (deduplicated layer by layer).
    pub fn additive_degree(&self, cap: usize) -> Result<usize, DefectError> {
        let mut layer = vec![self.clone()];
        for d in 0..=cap {
            layer = Self::difference_layer(&layer);
            if layer.iter().all(PhaseFunction::is_zero) {
                return Ok(d);
            }
        }
        Err(DefectError::DegreeCap { cap })
    }

    /// `{Delta_{h_1..h_k} phi(0) : h_i in A}`.
    pub fn defect_tensor(&self, k: usize) -> BTreeSet<usize> {
        if k == 0 {
            return BTreeSet::from([0]);
        }
        let mut layer = vec![self.clone()];
        for _ in 0..k {
            layer = Self::difference_layer(&layer);
        }
        let mut out: BTreeSet<usize> = layer.iter().map(|f| f.values[0]).collect();
        // Delta_0 contributes the zero function at every level.
        out.insert(0);
        out
    }

    /// A nonvanishing `(k)`-fold difference along additive generators, if any.
    ///
    /// Since the group ring of `A` is commutative and `[a+b]-1` lies in the
    /// ideal generated by `[a]-1` and `[b]-1`, all `k`-fold differences vanish
    /// exactly when those along generator directions do.
    pub fn generator_witness(&self, k: usize) -> Option<Vec<usize>> {
        let gens = self.domain.additive_generators();
        let mut stack: Vec<(Vec<usize>, usize, PhaseFunction)> = vec![(Vec::new(), 0, self.clone())];
        while let Some((hs, start, f)) = stack.pop() {
            if hs.len() == k {
                if !f.is_zero() {
                    return Some(hs);
                }
                continue;
            }
            for (i, &g) in gens.iter().enumerate().skip(start) {
                let mut next = hs.clone();
                next.push(g);
                stack.push((next, i, f.diff_unchecked(g)));
            }
        }
        None
    }

    /// The diagonal phase operator `(M_phi f)(x) = chi(phi(x)) f(x)`.
    pub fn phase_operator(&self, ch: &AdditiveCharacter) -> Result<CycloMatrix, DefectError> {
        if ch.ring().id() != self.codomain.id() {
            return Err(DefectError::CharacterRing);
        }
        let entries: Vec<_> = self.values.iter().map(|&v| ch.eval(v)).collect();
        Ok(CycloMatrix::diag(ch.field(), &entries))
    }
}

/// An additive map `A -> A'` between free modules, stored as a table.
#[derive(Clone, Debug)]
pub struct AdditiveMap {
    source: FreeModule,
    target: FreeModule,
    table: Vec<usize>,
}

impl AdditiveMap {
    /// Builds the map after an exhaustive additivity check.
    pub fn new(source: FreeModule, target: FreeModule, table: Vec<usize>) -> Result<Self, DefectError> {
        if table.len() != source.size() {
            return Err(DefectError::TableLength { expected: source.size(), got: table.len() });
        }
        if let Some(&v) = table.iter().find(|&&v| v >= target.size()) {
            return Err(DefectError::DomainMismatch { index: v, size: target.size() });
        }
        let n = source.size();
        for a in 0..n {
            for b in a..n {
                if table[source.add(a, b)] != target.add(table[a], table[b]) {
                    return Err(DefectError::NotAdditive { a, b });
                }
            }
        }
        Ok(AdditiveMap { source, target, table })
    }

    pub fn identity(module: &FreeModule) -> Self {
        AdditiveMap { source: module.clone(), target: module.clone(), table: (0..module.size()).collect() }
    }

    pub fn zero(source: &FreeModule, target: &FreeModule) -> Self {
        AdditiveMap { source: source.clone(), target: target.clone(), table: vec![0; source.size()] }
    }

    /// Multiplication by a ring scalar on `R^n`.
    pub fn scalar(module: &FreeModule, r: usize) -> Self {
        let ring = module.ring().clone();
        let table = (0..module.size())
            .map(|x| {
                let v: Vec<usize> = module.decode(x).iter().map(|&c| ring.mul_idx(r, c)).collect();
                module.encode(&v)
            })
            .collect();
        AdditiveMap { source: module.clone(), target: module.clone(), table }
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `other o self`.
    pub fn then(&self, other: &AdditiveMap) -> Result<Self, DefectError> {
        if !same_domain(&self.target, &other.source) {
            return Err(DefectError::Incompatible);
        }
        let table = self.table.iter().map(|&y| other.table[y]).collect();
        Ok(AdditiveMap { source: self.source.clone(), target: other.target.clone(), table })
    }
}

/// Which index the defect tensor is evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorIndex {
    AdditiveDegree,
    LiteralMin,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    /// Least `d` with all `(d+1)`-fold differences zero.
    pub additive_degree: usize,
    /// The min-formula value: least `k >= 1` with a nonvanishing `k`-fold
    /// difference; `None` when no such `k` exists (constant phases).
    pub literal_min_raw: Option<usize>,
    /// The min-formula value after the "0 if additive" normalisation.
    pub literal_min: Option<usize>,
    pub is_additive: bool,
    /// Set when the phase is additive but nonzero: the normalisation
    /// `Def(phi) = 0` then disagrees with its nonzero first differences.
    pub additive_convention_conflict: bool,
    pub tensor_index_kind: TensorIndex,
    pub tensor_index: usize,
    pub tensor: Vec<usize>,
    /// A generator-direction tuple whose difference is nonzero at the
    /// additive degree (absent for degree 0).
    pub degree_witness: Option<Vec<usize>>,
}

pub fn defect_invariants(phi: &PhaseFunction, index: TensorIndex, cap: usize) -> Result<DefectReport, DefectError> {
    let additive_degree = phi.additive_degree(cap)?;
    let is_additive = phi.is_additive();
    let literal_min_raw = if phi.is_constant() { None } else { Some(1) };
    let literal_min = if is_additive { Some(0) } else { literal_min_raw };
    let tensor_index = match index {
        TensorIndex::AdditiveDegree => additive_degree,
        TensorIndex::LiteralMin => literal_min.unwrap_or(0),
    };
    Ok(DefectReport {
        additive_degree,
        literal_min_raw,
        literal_min,
        is_additive,
        additive_convention_conflict: is_additive && !phi.is_zero(),
        tensor_index_kind: index,
        tensor_index,
        tensor: phi.defect_tensor(tensor_index).into_iter().collect(),
        degree_witness: if additive_degree == 0 { None } else { phi.generator_witness(additive_degree) },
    })
}

/// How products of phase operators combine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interaction {
    /// Operator composition: `M_phi M_psi = M_{phi + psi}`.
    Composition,
}

#[derive(Clone, Debug)]
pub struct PhaseFamily {
    pub phases: Vec<PhaseFunction>,
    pub interaction: Interaction,
}

impl PhaseFamily {
    /// The linear phases `{phi_b : b in R^n}` of a pairing.
    pub fn linear(pairing: &Pairing) -> Self {
        let phases = (0..pairing.module().size()).map(|b| PhaseFunction::linear(pairing, b)).collect();
        PhaseFamily { phases, interaction: Interaction::Composition }
    }

    fn position(&self, phi: &PhaseFunction) -> Option<usize> {
        self.phases.iter().position(|p| p == phi)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub passed: bool,
    pub detail: String,
    pub witness: Option<Vec<usize>>,
}

impl AxiomCheck {
    fn pass(detail: impl Into<String>) -> Self {
        AxiomCheck { passed: true, detail: detail.into(), witness: None }
    }

    fn fail(detail: impl Into<String>, witness: Vec<usize>) -> Self {
        AxiomCheck { passed: false, detail: detail.into(), witness: Some(witness) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    /// Closure under pullback along the supplied morphisms.
    pub e1_functoriality: AxiomCheck,
    /// Uniform degree bound, with the witnessed `d`.
    pub e2_uniform_degree: AxiomCheck,
    pub witnessed_degree: Option<usize>,
    /// Every phase yields an invertible diagonal operator.
    pub e3_operator_realisation: AxiomCheck,
    /// Closure under the declared interaction.
    pub e4_interaction: AxiomCheck,
    pub all_passed: bool,
}

/// Checks the admissibility conditions of a phase family. Failures are
/// report entries; witnesses are indices into the family (and for E2, the
/// phase index followed by its difference directions).
pub fn validate_admissible_datum(
    family: &PhaseFamily,
    morphisms: &[AdditiveMap],
    ch: &AdditiveCharacter,
    declared_bound: Option<usize>,
    cap: usize,
) -> AdmissibilityReport {
    let e1 = 'e1: {
        for (mi, f) in morphisms.iter().enumerate() {
            for (pi, phi) in family.phases.iter().enumerate() {
                match phi.pullback(f) {
                    Ok(pulled) if family.position(&pulled).is_some() => {}
                    _ => break 'e1 AxiomCheck::fail(format!("pullback of phase {pi} along morphism {mi} leaves the family"), vec![mi, pi]),
                }
            }
        }
        AxiomCheck::pass(format!("closed under {} morphisms", morphisms.len()))
    };

    let mut witnessed = Some(0usize);
    let mut e2 = AxiomCheck::pass("");
    for (pi, phi) in family.phases.iter().enumerate() {
        match phi.additive_degree(cap) {
            Ok(d) => {
                witnessed = witnessed.map(|w| w.max(d));
                if let Some(bound) = declared_bound {
                    if d > bound && e2.passed {
                        let mut w = vec![pi];
                        w.extend(phi.generator_witness(bound + 1).unwrap_or_default());
                        e2 = AxiomCheck::fail(format!("phase {pi} has additive degree {d} > {bound}"), w);
                    }
                }
            }
            Err(_) => {
                witnessed = None;
                if e2.passed {
                    e2 = AxiomCheck::fail(format!("phase {pi} exceeds the degree cap {cap}"), vec![pi]);
                }
            }
        }
    }
    if e2.passed {
        e2.detail = format!("uniform bound d = {}", witnessed.unwrap_or(0));
    }

    let e3 = 'e3: {
        for (pi, phi) in family.phases.iter().enumerate() {
            match phi.phase_operator(ch) {
                Ok(m) if m.is_invertible() => {}
                _ => break 'e3 AxiomCheck::fail(format!("phase {pi} has no invertible operator"), vec![pi]),
            }
        }
        AxiomCheck::pass(format!("{} diagonal operators with root-of-unity entries", family.phases.len()))
    };

    let e4 = 'e4: {
        for (i, a) in family.phases.iter().enumerate() {
            for (j, b) in family.phases.iter().enumerate() {
                match a.add(b) {
                    Ok(sum) if family.position(&sum).is_some() => {}
                    _ => break 'e4 AxiomCheck::fail(format!("M_{i} M_{j} = M_(phi_{i}+phi_{j}) is not in the family"), vec![i, j]),
                }
            }
        }
        AxiomCheck::pass("closed under composition")
    };

    let all_passed = e1.passed && e2.passed && e3.passed && e4.passed;
    AdmissibilityReport {
        e1_functoriality: e1,
        e2_uniform_degree: e2,
        witnessed_degree: witnessed,
        e3_operator_realisation: e3,
        e4_interaction: e4,
        all_passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::build_ring;

    fn cyclic(m: u64) -> (Arc<FiniteRing>, FreeModule) {
        let ring = build_ring(&format!("Z/{m}")).unwrap();
        let module = FreeModule::new(ring.clone(), 1).unwrap();
        (ring, module)
    }

    fn square(m: u64) -> PhaseFunction {
        let (ring, module) = cyclic(m);
        let r = ring.clone();
        PhaseFunction::from_fn(module, ring, move |u| r.mul_idx(u, u))
    }

    #[test]
    fn differences_of_the_square() {
        let phi = square(3);
        assert_eq!(phi.difference(1).unwrap().values(), &[1, 0, 2]);
        assert_eq!(phi.iterated_difference(&[1, 1]).unwrap().values(), &[2, 2, 2]);
        assert!(phi.difference(0).unwrap().is_zero());
        assert_eq!(phi.iterated_difference(&[]).unwrap(), phi);
        assert!(phi.difference(3).is_err());
    }

    #[test]
    fn degrees() {
        let (ring, module) = cyclic(4);
        assert_eq!(PhaseFunction::constant(module.clone(), ring.clone(), 3).additive_degree(8), Ok(0));
        assert_eq!(PhaseFunction::from_fn(module, ring, |u| u).additive_degree(8), Ok(1));
        assert_eq!(square(3).additive_degree(8), Ok(2));
        assert_eq!(square(4).additive_degree(8), Ok(2));
        assert_eq!(square(4).additive_degree(1), Err(DefectError::DegreeCap { cap: 1 }));
    }

    #[test]
    fn degree_can_reach_the_domain_size() {
        // phi: Z/2 -> Z/4 with phi(0) = 0, phi(1) = 1 has second differences 2.
        let domain = FreeModule::new(build_ring("Z/2").unwrap(), 1).unwrap();
        let phi = PhaseFunction::new(domain, build_ring("Z/4").unwrap(), vec![0, 1]).unwrap();
        assert_eq!(phi.additive_degree(8), Ok(2));
    }

    #[test]
    fn invariants_of_examples() {
        let (ring, module) = cyclic(4);
        let id = PhaseFunction::from_fn(module.clone(), ring.clone(), |u| u);
        let r = defect_invariants(&id, TensorIndex::AdditiveDegree, 8).unwrap();
        assert_eq!((r.additive_degree, r.literal_min_raw, r.literal_min), (1, Some(1), Some(0)));
        assert!(r.is_additive && r.additive_convention_conflict);
        assert_eq!(r.tensor, vec![0, 1, 2, 3]);

        let c = PhaseFunction::constant(module, ring, 2);
        let r = defect_invariants(&c, TensorIndex::AdditiveDegree, 8).unwrap();
        assert_eq!((r.additive_degree, r.literal_min_raw), (0, None));
        assert_eq!(r.tensor, vec![0]);

        let r = defect_invariants(&square(3), TensorIndex::AdditiveDegree, 8).unwrap();
        assert_eq!(r.tensor, vec![0, 1, 2]);
        assert_eq!(r.literal_min, Some(1));
        let lit = defect_invariants(&square(3), TensorIndex::LiteralMin, 8).unwrap();
        assert_eq!(lit.tensor_index, 1);
    }

    #[test]
    fn pullback_along_doubling() {
        let (z2, a) = (build_ring("Z/2").unwrap(), FreeModule::new(build_ring("Z/2").unwrap(), 1).unwrap());
        let (z4, a4) = cyclic(4);
        assert!(matches!(
            AdditiveMap::new(a.clone(), a4.clone(), vec![0, 1]),
            Err(DefectError::NotAdditive { .. })
        ));
        let f = AdditiveMap::new(a.clone(), a4.clone(), vec![0, 2]).unwrap();
        let sq = square(4);
        assert_eq!(sq.pullback(&f).unwrap().values(), &[0, 0]);
        assert_eq!(sq.pullback(&AdditiveMap::identity(&a4)).unwrap(), sq);
        let zero = AdditiveMap::zero(&a, &a4);
        assert!(sq.pullback(&zero).unwrap().is_zero());
        let _ = (z2, z4);
    }

    #[test]
    fn phase_operator_of_identity_phase() {
        let (ring, module) = cyclic(4);
        let ch = AdditiveCharacter::new(&ring, vec![1]).unwrap();
        let m = PhaseFunction::from_fn(module.clone(), ring.clone(), |u| u).phase_operator(&ch).unwrap();
        for u in 0..4 {
            assert_eq!(m.get(u, u).root_exponent(), Some(u as u64));
        }
        let zero = PhaseFunction::constant(module, ring, 0).phase_operator(&ch).unwrap();
        assert!(zero.is_identity());
    }

    #[test]
    fn admissible_linear_family() {
        let ring = build_ring("Z/4").unwrap();
        let pairing = Pairing::identity(&ring, 1).unwrap();
        let ch = AdditiveCharacter::new(&ring, vec![1]).unwrap();
        let family = PhaseFamily::linear(&pairing);
        let morphisms: Vec<_> = (0..4).map(|r| AdditiveMap::scalar(pairing.module(), r)).collect();
        let report = validate_admissible_datum(&family, &morphisms, &ch, Some(1), 8);
        assert!(report.all_passed, "{report:?}");
        assert_eq!(report.witnessed_degree, Some(1));

        let mut missing = family.clone();
        missing.phases.remove(0);
        let report = validate_admissible_datum(&missing, &[], &ch, Some(1), 8);
        assert!(!report.e4_interaction.passed);
    }

    #[test]
    fn declared_bound_violation_has_witness() {
        let ring = build_ring("Z/3").unwrap();
        let ch = AdditiveCharacter::new(&ring, vec![1]).unwrap();
        let family = PhaseFamily { phases: vec![square(3)], interaction: Interaction::Composition };
        let report = validate_admissible_datum(&family, &[], &ch, Some(1), 8);
        assert!(!report.e2_uniform_degree.passed);
        let w = report.e2_uniform_degree.witness.unwrap();
        let phi = &family.phases[w[0]];
        assert!(!phi.iterated_difference(&w[1..]).unwrap().is_zero());
    }
}
