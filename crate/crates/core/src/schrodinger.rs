//! Representations of the Heisenberg group as exact cyclotomic matrices:
//! the Schrödinger model on functions `R^n -> C`, the induced model, the
//! Fourier and randomly conjugated models, and generic models given by
//! generator matrices.
//!
//! Basis convention: `(T_x f)(u) = f(u + x)`, hence `T_x delta_a = delta_{a-x}`
//! and the only nonzero entry of row `u` of `T_x` sits in column `u + x`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::caps::Caps;
use crate::cyclo::{CycloError, CycloField, CycloMatrix, CycloNum, Subspace};
use crate::heisenberg::{ElementJson, GroupElement, HeisenbergGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("expected {expected} generator matrices, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("generator matrix {index} is not an invertible {dim}x{dim} matrix")]
    BadGenerator { index: usize, dim: usize },
    #[error("Fourier kernel is singular")]
    SingularFourier,
    #[error("subspace is not invariant under generator {0}")]
    NotInvariant(usize),
    #[error("representations belong to different groups")]
    GroupMismatch,
    #[error("dimension {dim} exceeds the cap {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// How a representation evaluates arbitrary group elements.
#[derive(Clone)]
enum Evaluator {
    /// `lambda M_y T_x`.
    Schrodinger,
    /// The induced-module formula on cosets `(x, 0, 1) YZ`.
    Induced,
    /// Every element acts as the identity.
    Trivial,
    /// Block diagonal over the summands.
    Sum(Vec<Arc<Representation>>),
    /// Factorisation through the generator matrices.
    Words,
}

#[derive(Default)]
struct WordCache {
    x: HashMap<usize, CycloMatrix>,
    y: HashMap<usize, CycloMatrix>,
    z: HashMap<u64, CycloMatrix>,
}

pub struct Representation {
    group: Arc<HeisenbergGroup>,
    field: Arc<CycloField>,
    dim: usize,
    label: String,
    evaluator: Evaluator,
    generators: Vec<CycloMatrix>,
    cache: Mutex<WordCache>,
}

impl std::fmt::Debug for Representation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Representation({}, dim {})", self.label, self.dim)
    }
}

fn field_of(group: &HeisenbergGroup) -> Arc<CycloField> {
    group.character().field().clone()
}

/// `zeta_e^k` as an element of `Q(zeta_m)`.
fn central_scalar(group: &HeisenbergGroup, k: u64) -> CycloNum {
    CycloNum::root_of_unity(&field_of(group), (k * group.central_step()) as i64)
}

/// The permutation matrix `T_x`.
pub fn translation_matrix(group: &HeisenbergGroup, x: usize) -> CycloMatrix {
    let module = group.module();
    let field = field_of(group);
    let d = module.size();
    let mut t = CycloMatrix::zeros(&field, d, d);
    for u in 0..d {
        t.set(u, module.add(u, x), CycloNum::one(&field));
    }
    t
}

/// The diagonal matrix `M_y = diag(eps(beta(y, u)))`.
pub fn modulation_matrix(group: &HeisenbergGroup, y: usize) -> CycloMatrix {
    let field = field_of(group);
    let entries: Vec<CycloNum> = (0..group.module().size())
        .map(|u| group.character().eval(group.pairing().eval(y, u)))
        .collect();
    CycloMatrix::diag(&field, &entries)
}

/// `pi(x, y, lambda) = lambda M_y T_x`, assembled entrywise.
pub fn pi(group: &HeisenbergGroup, g: &GroupElement) -> CycloMatrix {
    let module = group.module();
    let field = field_of(group);
    let d = module.size();
    let base = (g.k * group.central_step()) as i64;
    let mut out = CycloMatrix::zeros(&field, d, d);
    for u in 0..d {
        let t = group.character().log(group.pairing().eval(g.y, u)) as i64;
        out.set(u, module.add(u, g.x), CycloNum::root_of_unity(&field, base + t));
    }
    out
}

/// The kernel `F[v, u] = eps(beta(v, u))`.
pub fn fourier_kernel(group: &HeisenbergGroup) -> CycloMatrix {
    let field = field_of(group);
    let d = group.module().size();
    CycloMatrix::from_fn(&field, d, d, |v, u| group.character().eval(group.pairing().eval(v, u)))
}

/// Matrix of `g` in the induced model: column `x` has a single entry
/// `psi(h)` in row `x''`, where `g (x, 0, 1) = (x'', 0, 1) h` with `h` in `YZ`
/// and `psi(0, y, lambda) = lambda`.
fn induced_matrix(group: &HeisenbergGroup, g: &GroupElement) -> CycloMatrix {
    let field = field_of(group);
    let d = group.module().size();
    let mut out = CycloMatrix::zeros(&field, d, d);
    for x in 0..d {
        let moved = group.multiply(g, &group.from_x(x));
        let coset = group.from_x(moved.x);
        let h = group.multiply(&group.inverse(&coset), &moved);
        debug_assert_eq!(h.x, 0);
        out.set(moved.x, x, central_scalar(group, h.k));
    }
    out
}

/// The equivariant isomorphism from the induced model to the Schrödinger
/// model: the coset basis vector `e_x = (x, 0, 1) e_0` goes to
/// `T_x delta_0 = delta_{-x}`.
pub fn induced_iso(group: &HeisenbergGroup) -> CycloMatrix {
    let module = group.module();
    let field = field_of(group);
    let d = module.size();
    let mut p = CycloMatrix::zeros(&field, d, d);
    for x in 0..d {
        p.set(module.neg(x), x, CycloNum::one(&field));
    }
    p
}

impl Representation {
    fn build(group: &Arc<HeisenbergGroup>, dim: usize, label: String, evaluator: Evaluator) -> Self {
        let mut rep = Representation {
            group: group.clone(),
            field: field_of(group),
            dim,
            label,
            evaluator,
            generators: Vec::new(),
            cache: Mutex::new(WordCache::default()),
        };
        rep.generators = group.generators().iter().map(|g| rep.eval(g)).collect();
        rep
    }

    /// The Schrödinger representation on `Fun(R^n, C)`.
    pub fn schrodinger(group: &Arc<HeisenbergGroup>) -> Self {
        Self::build(group, group.module().size(), "schrodinger".into(), Evaluator::Schrodinger)
    }

    /// The representation induced from `psi(0, y, lambda) = lambda` on `YZ`.
    pub fn induced(group: &Arc<HeisenbergGroup>) -> Self {
        Self::build(group, group.module().size(), "induced".into(), Evaluator::Induced)
    }

    pub fn trivial(group: &Arc<HeisenbergGroup>, dim: usize) -> Self {
        Self::build(group, dim, "trivial".into(), Evaluator::Trivial)
    }

    pub fn direct_sum(parts: &[Arc<Representation>]) -> Result<Self, RepError> {
        let group = parts.first().ok_or(RepError::GeneratorCount { expected: 1, got: 0 })?.group.clone();
        if parts.iter().any(|p| !Arc::ptr_eq(&p.group, &group)) {
            return Err(RepError::GroupMismatch);
        }
        let dim = parts.iter().map(|p| p.dim).sum();
        let label = parts.iter().map(|p| p.label.as_str()).collect::<Vec<_>>().join(" + ");
        Ok(Self::build(&group, dim, label, Evaluator::Sum(parts.to_vec())))
    }

    /// A model given only by the images of [`HeisenbergGroup::generators`].
    pub fn from_generators(
        group: &Arc<HeisenbergGroup>,
        label: impl Into<String>,
        generators: Vec<CycloMatrix>,
    ) -> Result<Self, RepError> {
        let expected = group.generators().len();
        if generators.len() != expected {
            return Err(RepError::GeneratorCount { expected, got: generators.len() });
        }
        let dim = generators[0].rows();
        for (index, m) in generators.iter().enumerate() {
            if m.rows() != dim || !m.is_invertible() {
                return Err(RepError::BadGenerator { index, dim });
            }
        }
        Ok(Representation {
            group: group.clone(),
            field: field_of(group),
            dim,
            label: label.into(),
            evaluator: Evaluator::Words,
            generators,
            cache: Mutex::new(WordCache::default()),
        })
    }

    /// `P rho P^-1` as a generator-only model.
    pub fn conjugated_by(&self, p: &CycloMatrix, label: impl Into<String>) -> Result<Self, RepError> {
        let p_inv = p.inverse()?;
        let gens = self
            .generators
            .iter()
            .map(|a| p.mul(a).and_then(|pa| pa.mul(&p_inv)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_generators(&self.group, label, gens)
    }

    /// The subrepresentation on an invariant subspace, in its echelon basis.
    pub fn restrict(&self, subspace: &Subspace, label: impl Into<String>) -> Result<Self, RepError> {
        let basis = subspace.basis();
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, a) in self.generators.iter().enumerate() {
            let mut cols = Vec::with_capacity(basis.len());
            for b in basis {
                let image = a.mul_vec(b)?;
                cols.push(subspace.coordinates(&image).ok_or(RepError::NotInvariant(i))?);
            }
            gens.push(CycloMatrix::from_columns(&self.field, basis.len(), &cols));
        }
        if gens.first().is_some_and(|g| g.rows() == 0) {
            return Err(RepError::BadGenerator { index: 0, dim: 0 });
        }
        Self::from_generators(&self.group, label, gens)
    }

    pub fn group(&self) -> &Arc<HeisenbergGroup> {
        &self.group
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_closed_form(&self) -> bool {
        !matches!(self.evaluator, Evaluator::Words)
    }

    /// Images of the group generators, in [`HeisenbergGroup::generators`] order.
    pub fn generator_matrices(&self) -> &[CycloMatrix] {
        &self.generators
    }

    /// The matrix of an arbitrary group element.
    pub fn eval(&self, g: &GroupElement) -> CycloMatrix {
        match &self.evaluator {
            Evaluator::Schrodinger => pi(&self.group, g),
            Evaluator::Induced => induced_matrix(&self.group, g),
            Evaluator::Trivial => CycloMatrix::identity(&self.field, self.dim),
            Evaluator::Sum(parts) => {
                let mut blocks = parts.iter().map(|p| p.eval(g));
                let first = blocks.next().expect("nonempty sum");
                blocks.fold(first, |acc, b| acc.direct_sum(&b))
            }
            Evaluator::Words => self.eval_words(g),
        }
    }

    /// Evaluation through the factorisation `(x, y, k) = Y(y) X(x) Z^j`.
    pub fn eval_words(&self, g: &GroupElement) -> CycloMatrix {
        let group = &self.group;
        let k0 = group.multiply(&group.from_y(g.y), &group.from_x(g.x)).k;
        let e = group.central_order();
        let j = (g.k + e - k0) % e;
        let y = self.subgroup_matrix(g.y, false);
        let x = self.subgroup_matrix(g.x, true);
        let z = self.central_power(j);
        y.mul(&x).and_then(|yx| yx.mul(&z)).expect("square matrices of equal size")
    }

    fn subgroup_matrix(&self, v: usize, is_x: bool) -> CycloMatrix {
        {
            let cache = self.cache.lock().unwrap();
            let map = if is_x { &cache.x } else { &cache.y };
            if let Some(m) = map.get(&v) {
                return m.clone();
            }
        }
        let module = self.group.module();
        let ngens = module.additive_generators().len();
        let offset = if is_x { 0 } else { ngens };
        let mut acc = CycloMatrix::identity(&self.field, self.dim);
        // X and Y are abelian subgroups on which the cocycle vanishes, so
        // X(sum c_j g_j) = prod X(g_j)^c_j.
        for (j, c) in module.coords(v).into_iter().enumerate() {
            if c > 0 {
                let p = self.generators[offset + j].pow(c).expect("square");
                acc = acc.mul(&p).expect("square");
            }
        }
        let mut cache = self.cache.lock().unwrap();
        let map = if is_x { &mut cache.x } else { &mut cache.y };
        map.insert(v, acc.clone());
        acc
    }

    fn central_power(&self, j: u64) -> CycloMatrix {
        if let Some(m) = self.cache.lock().unwrap().z.get(&j) {
            return m.clone();
        }
        let z = self.generators.last().expect("central generator").pow(j).expect("square");
        self.cache.lock().unwrap().z.insert(j, z.clone());
        z
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    Exhaustive,
    GeneratorsAndRandom,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylCertificate {
    pub mode: CheckMode,
    pub pairs_checked: usize,
    /// Violating `(x, y)` pairs as encoded elements of `R^n`.
    pub violations: Vec<(usize, usize)>,
}

impl WeylCertificate {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `T_x M_y = eps(beta(y, x)) M_y T_x`.
pub fn verify_weyl(group: &HeisenbergGroup, caps: &Caps) -> WeylCertificate {
    let module = group.module();
    let d = module.size();
    let (mode, xs, ys): (CheckMode, Vec<usize>, Vec<usize>) = if d * d <= caps.exhaustive_group {
        (CheckMode::Exhaustive, (0..d).collect(), (0..d).collect())
    } else {
        let gens = module.additive_generators();
        (CheckMode::GeneratorsAndRandom, gens.clone(), gens)
    };
    let ts: Vec<CycloMatrix> = xs.iter().map(|&x| translation_matrix(group, x)).collect();
    let ms: Vec<CycloMatrix> = ys.iter().map(|&y| modulation_matrix(group, y)).collect();
    let mut violations = Vec::new();
    let mut pairs = 0;
    for (x, t) in xs.iter().zip(&ts) {
        for (y, m) in ys.iter().zip(&ms) {
            pairs += 1;
            let lhs = t.mul(m).expect("square");
            let scalar = group.character().eval(group.pairing().eval(*y, *x));
            let rhs = m.mul(t).expect("square").scale(&scalar);
            if lhs != rhs {
                violations.push((*x, *y));
            }
        }
    }
    WeylCertificate { mode, pairs_checked: pairs, violations }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomomorphismCertificate {
    pub mode: CheckMode,
    pub pairs_checked: usize,
    pub violations: usize,
    /// Up to eight violating pairs.
    pub witnesses: Vec<(ElementJson, ElementJson)>,
    pub inverse_violations: usize,
}

impl HomomorphismCertificate {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.inverse_violations == 0
    }
}

/// Checks `rho(gh) = rho(g) rho(h)` and `rho(g) rho(g^-1) = 1`: on all pairs
/// when the group order is within `caps.exhaustive_group`, otherwise on all
/// generator pairs plus seeded random pairs.
pub fn verify_homomorphism(rep: &Representation, caps: &Caps, seed: u64) -> HomomorphismCertificate {
    let group = rep.group();
    let order = group.order();
    let id = CycloMatrix::identity(rep.field(), rep.dim());
    let mut violations = 0;
    let mut witnesses = Vec::new();
    let mut inverse_violations = 0;
    let mut pairs = 0;
    let mut record = |g: &GroupElement, h: &GroupElement, ok: bool| {
        pairs += 1;
        if !ok {
            violations += 1;
            if witnesses.len() < 8 {
                witnesses.push((group.to_json(g), group.to_json(h)));
            }
        }
    };
    let mode = if order <= caps.exhaustive_group {
        let mats: Vec<CycloMatrix> = (0..order).map(|i| rep.eval(&group.from_index(i))).collect();
        for a in 0..order {
            let g = group.from_index(a);
            let inv = group.index_of(&group.inverse(&g));
            if mats[a].mul(&mats[inv]).expect("square") != id {
                inverse_violations += 1;
            }
            for b in 0..order {
                let h = group.from_index(b);
                let gh = group.index_of(&group.multiply(&g, &h));
                let ok = mats[a].mul(&mats[b]).expect("square") == mats[gh];
                record(&g, &h, ok);
            }
        }
        CheckMode::Exhaustive
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sample = group.generators();
        sample.extend((0..16).map(|_| group.from_index(rng.gen_range(0..order))));
        for g in &sample {
            let inv = group.inverse(g);
            if rep.eval(g).mul(&rep.eval(&inv)).expect("square") != id {
                inverse_violations += 1;
            }
            for h in &sample {
                let ok = rep.eval(g).mul(&rep.eval(h)).expect("square") == rep.eval(&group.multiply(g, h));
                record(g, h, ok);
            }
        }
        CheckMode::GeneratorsAndRandom
    };
    HomomorphismCertificate { mode, pairs_checked: pairs, violations, witnesses, inverse_violations }
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralCharacterReport {
    /// Whether `rho(0, 0, zeta_e)` is a scalar matrix.
    pub scalar_action: bool,
    /// `t` with `rho(0, 0, zeta_e) = zeta_m^t I`, when scalar.
    pub zeta_m_exponent: Option<u64>,
    /// Whether the character is `lambda -> lambda`.
    pub identity_character: bool,
    pub centrally_faithful: bool,
}

pub fn central_character(rep: &Representation) -> CentralCharacterReport {
    let group = rep.group();
    let z = rep.generator_matrices().last().expect("central generator");
    let exponent = z.as_scalar().and_then(|c| c.root_exponent());
    CentralCharacterReport {
        scalar_action: exponent.is_some(),
        zeta_m_exponent: exponent,
        identity_character: exponent == Some(group.central_step() % group.conductor()),
        centrally_faithful: exponent.is_some_and(|t| t != 0),
    }
}

/// `F pi F^-1` with `F[v, u] = eps(beta(v, u))`; only the conjugated
/// generator matrices are kept.
pub fn fourier_model(group: &Arc<HeisenbergGroup>) -> Result<Representation, RepError> {
    let f = fourier_kernel(group);
    if !f.is_invertible() {
        return Err(RepError::SingularFourier);
    }
    Representation::schrodinger(group).conjugated_by(&f, "fourier")
}

/// A seeded pseudorandom invertible matrix with small integer coefficients
/// in the power basis.
pub fn random_invertible(field: &Arc<CycloField>, dim: usize, seed: u64) -> CycloMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let p = CycloMatrix::from_fn(field, dim, dim, |_, _| {
            let coeffs = (0..field.degree())
                .map(|_| num_rational::BigRational::from_integer(rng.gen_range(-2i64..=2).into()))
                .collect();
            CycloNum::from_coeffs(field, coeffs)
        });
        if p.is_invertible() {
            return p;
        }
    }
}

/// `P pi P^-1` for a seeded random `P`; returns the model and the hidden `P`.
pub fn conjugated_model(group: &Arc<HeisenbergGroup>, seed: u64) -> Result<(Representation, CycloMatrix), RepError> {
    let p = random_invertible(&field_of(group), group.module().size(), seed);
    let rep = Representation::schrodinger(group).conjugated_by(&p, format!("conjugated:{seed}"))?;
    Ok((rep, p))
}
