//! Intertwiner spaces, commutant-based decomposition, and the Stone–von
//! Neumann verifier.
//!
//! All eigenspaces are kernels of `A - zeta I` for roots of unity `zeta`:
//! every operator in play has finite order dividing the conductor, so no
//! characteristic polynomials are needed.

use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::caps::Caps;
use crate::character::{
    all_characters, certify_frobenius, character_orbit, generating_witness, max_orbit_rank_one, nondegeneracy,
    AdditiveCharacter, Pairing,
};
use crate::cyclo::{CycloField, CycloMatrix, CycloNum, Subspace};
use crate::heisenberg::{HeisenbergError, HeisenbergGroup};
use crate::ring::FiniteRing;
use crate::schrodinger::{
    central_character, conjugated_model, fourier_model, CentralCharacterReport, RepError, Representation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("representations belong to different groups")]
    GroupMismatch,
    #[error("solver needs {unknowns} unknowns, above the cap of {cap}")]
    TooLarge { unknowns: usize, cap: usize },
    #[error("the central component for zeta_e^{0} is zero")]
    EmptyComponent(u64),
    #[error("character sum is not rational")]
    NotRational,
    #[error(transparent)]
    Group(#[from] HeisenbergError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Row-by-row reduced echelon form, used to accumulate sparse constraints.
struct Echelon {
    field: Arc<CycloField>,
    width: usize,
    rows: Vec<(usize, Vec<CycloNum>)>,
}

impl Echelon {
    fn new(field: &Arc<CycloField>, width: usize) -> Self {
        Echelon { field: field.clone(), width, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn push(&mut self, mut row: Vec<CycloNum>) {
        for (p, r) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let c = row[*p].clone();
            for (x, y) in row.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let inv = row[p].inv().expect("nonzero pivot");
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, r) in self.rows.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (x, y) in r.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        self.rows.push((p, row));
    }

    fn kernel(&self) -> Vec<Vec<CycloNum>> {
        let mut is_pivot = vec![false; self.width];
        for (p, _) in &self.rows {
            is_pivot[*p] = true;
        }
        (0..self.width)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![CycloNum::zero(&self.field); self.width];
                v[free] = CycloNum::one(&self.field);
                for (p, r) in &self.rows {
                    v[*p] = -&r[free];
                }
                v
            })
            .collect()
    }
}

/// A basis of `Hom(rho1, rho2) = {T : T rho1(g) = rho2(g) T}`; each `T` is
/// `dim2 x dim1`.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub source_dim: usize,
    pub target_dim: usize,
    pub basis: Vec<CycloMatrix>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Solves the stacked generator constraints `T A_g - B_g T = 0`.
pub fn hom_space(rho1: &Representation, rho2: &Representation, caps: &Caps) -> Result<HomBasis, HomError> {
    if !Arc::ptr_eq(rho1.group(), rho2.group()) {
        return Err(HomError::GroupMismatch);
    }
    let (d1, d2) = (rho1.dim(), rho2.dim());
    let unknowns = d1 * d2;
    let cap = caps.dimension * caps.dimension;
    if unknowns > cap {
        return Err(HomError::TooLarge { unknowns, cap });
    }
    let field = rho1.field();
    let mut ech = Echelon::new(field, unknowns);
    // unknown (i, j) of T sits at i * d1 + j
    'outer: for (a, b) in rho1.generator_matrices().iter().zip(rho2.generator_matrices()) {
        for i in 0..d2 {
            for j in 0..d1 {
                let mut row = vec![CycloNum::zero(field); unknowns];
                for k in 0..d1 {
                    let x = a.get(k, j);
                    if !x.is_zero() {
                        row[i * d1 + k] = &row[i * d1 + k] + x;
                    }
                }
                for k in 0..d2 {
                    let x = b.get(i, k);
                    if !x.is_zero() {
                        row[k * d1 + j] = &row[k * d1 + j] - x;
                    }
                }
                ech.push(row);
                if ech.rank() == unknowns {
                    break 'outer;
                }
            }
        }
    }
    let basis = ech
        .kernel()
        .into_iter()
        .map(|v| CycloMatrix::from_fn(field, d2, d1, |i, j| v[i * d1 + j].clone()))
        .collect();
    Ok(HomBasis { source_dim: d1, target_dim: d2, basis })
}

/// Re-checks `T rho1(g) = rho2(g) T` on seeded random group elements.
pub fn check_intertwiner(t: &CycloMatrix, rho1: &Representation, rho2: &Representation, samples: usize, seed: u64) -> bool {
    let group = rho1.group();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let g = group.from_index(rng.gen_range(0..group.order()));
        t.mul(&rho1.eval(&g)).ok() == rho2.eval(&g).mul(t).ok()
    })
}

/// Dimension of the commutant `End(rho)`.
pub fn end_dim(rep: &Representation, caps: &Caps) -> Result<usize, HomError> {
    Ok(hom_space(rep, rep, caps)?.dim())
}

/// Whether the commutant consists of scalars only.
pub fn schur_check(rep: &Representation, caps: &Caps) -> Result<bool, HomError> {
    Ok(end_dim(rep, caps)? == 1)
}

fn kernel_subspace(m: &CycloMatrix) -> Subspace {
    Subspace::span(m.field(), m.cols(), &m.kernel())
}

fn eigenspace(a: &CycloMatrix, lambda: &CycloNum) -> Subspace {
    let shifted = a.sub(&CycloMatrix::scalar(a.field(), a.rows(), lambda)).expect("square");
    kernel_subspace(&shifted)
}

/// `ker(rho(0,0,zeta_e) - zeta_e^s I)`.
pub fn central_component(rep: &Representation, s: u64) -> Subspace {
    let group = rep.group();
    let z = rep.generator_matrices().last().expect("central generator");
    let lambda = CycloNum::root_of_unity(rep.field(), (s * group.central_step()) as i64);
    eigenspace(z, &lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Indecomposability {
    Indecomposable,
    Decomposable,
    NotCentrallyFaithful,
    CentreNotScalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralBlock {
    /// The block where the centre acts by `zeta_e^s`.
    pub s: u64,
    pub dim: usize,
    pub centrally_faithful: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndecomposabilityReport {
    pub verdict: Indecomposability,
    pub indecomposable: bool,
    pub end_dim: Option<usize>,
    pub central: CentralCharacterReport,
    /// Per-block data when the centre does not act by a scalar.
    pub central_blocks: Vec<CentralBlock>,
}

/// No proper nonzero centrally faithful subrepresentation.
///
/// With a nontrivial scalar central character every invariant subspace is
/// centrally faithful, and complete reducibility turns the question into
/// `dim End = 1`. When the centre is not scalar the central blocks are
/// themselves proper invariant subspaces and are reported individually.
pub fn frobenius_indecomposable(rep: &Representation, caps: &Caps) -> Result<IndecomposabilityReport, HomError> {
    let central = central_character(rep);
    if !central.scalar_action {
        let e = rep.group().central_order();
        let blocks: Vec<CentralBlock> = (0..e)
            .map(|s| (s, central_component(rep, s).dim()))
            .filter(|&(_, d)| d > 0)
            .map(|(s, dim)| CentralBlock { s, dim, centrally_faithful: s != 0 })
            .collect();
        return Ok(IndecomposabilityReport {
            verdict: Indecomposability::CentreNotScalar,
            indecomposable: false,
            end_dim: None,
            central,
            central_blocks: blocks,
        });
    }
    if !central.centrally_faithful {
        return Ok(IndecomposabilityReport {
            verdict: Indecomposability::NotCentrallyFaithful,
            indecomposable: false,
            end_dim: None,
            central,
            central_blocks: Vec::new(),
        });
    }
    let d = end_dim(rep, caps)?;
    Ok(IndecomposabilityReport {
        verdict: if d == 1 { Indecomposability::Indecomposable } else { Indecomposability::Decomposable },
        indecomposable: d == 1,
        end_dim: Some(d),
        central,
        central_blocks: Vec::new(),
    })
}

/// The invariant subspace generated by `v`.
pub fn spin(rep: &Representation, v: &[CycloNum]) -> Subspace {
    let field = rep.field();
    let mut space = Subspace::span(field, rep.dim(), &[v.to_vec()]);
    let mut frontier = vec![v.to_vec()];
    while let Some(w) = frontier.pop() {
        for a in rep.generator_matrices() {
            let image = a.mul_vec(&w).expect("dimension");
            if !space.contains(&image) {
                space = space.sum(&Subspace::span(field, rep.dim(), std::slice::from_ref(&image)));
                frontier.push(image);
            }
        }
    }
    space
}

fn y_generators(rep: &Representation) -> &[CycloMatrix] {
    let g = rep.group().module().additive_generators().len();
    &rep.generator_matrices()[g..2 * g]
}

fn x_generators(rep: &Representation) -> &[CycloMatrix] {
    let g = rep.group().module().additive_generators().len();
    &rep.generator_matrices()[..g]
}

/// A nonzero subspace of `within` on which every `rho(0, g, 1)` acts by a scalar.
fn y_eigen_subspace(rep: &Representation, within: &Subspace) -> Subspace {
    let m = rep.group().conductor() as i64;
    let mut w = within.clone();
    for a in y_generators(rep) {
        for t in 0..m {
            let k = w.intersect(&eigenspace(a, &CycloNum::root_of_unity(rep.field(), t)));
            if !k.is_zero() {
                w = k;
                break;
            }
        }
    }
    w
}

fn combine(field: &Arc<CycloField>, ambient: usize, basis: &[Vec<CycloNum>], coords: &[CycloNum]) -> Vec<CycloNum> {
    let mut v = vec![CycloNum::zero(field); ambient];
    for (c, b) in coords.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in v.iter_mut().zip(b) {
            if !y.is_zero() {
                *x = &*x + &(c * y);
            }
        }
    }
    v
}

/// How a proper invariant subspace was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitMethod {
    /// The module generated by a simultaneous `YZ`-eigenvector.
    CyclicSubmodule,
    /// The image of a nonzero commutant element annihilating such a vector.
    Annihilator,
    /// A proper eigenspace of a commutant basis element.
    CommutantEigenspace,
}

/// A proper nonzero invariant subspace of `v` (an invariant subspace of
/// `rep`), given the commutant of the restriction to `v`.
fn split(rep: &Representation, v: &Subspace, end: &HomBasis) -> Option<(Subspace, SplitMethod)> {
    let field = rep.field();
    let eigen = y_eigen_subspace(rep, v);
    for w in eigen.basis() {
        let s = spin(rep, w);
        if s.dim() < v.dim() {
            return Some((s, SplitMethod::CyclicSubmodule));
        }
    }
    let lift = |sub: &Subspace| {
        let vectors: Vec<Vec<CycloNum>> =
            sub.basis().iter().map(|c| combine(field, rep.dim(), v.basis(), c)).collect();
        Subspace::span(field, rep.dim(), &vectors)
    };
    if let Some(w) = eigen.basis().first() {
        let coords = v.coordinates(w).expect("eigenvector lies in the block");
        let images: Vec<Vec<CycloNum>> = end.basis.iter().map(|e| e.mul_vec(&coords).expect("dimension")).collect();
        let system = CycloMatrix::from_columns(field, v.dim(), &images);
        for c in system.kernel() {
            let mut acc = CycloMatrix::zeros(field, v.dim(), v.dim());
            for (ci, e) in c.iter().zip(&end.basis) {
                if !ci.is_zero() {
                    acc = acc.add(&e.scale(ci)).expect("shape");
                }
            }
            let image = Subspace::image(&acc);
            if !image.is_zero() && image.dim() < v.dim() {
                return Some((lift(&image), SplitMethod::Annihilator));
            }
        }
    }
    let m = rep.group().conductor() as i64;
    let mut candidates = vec![CycloNum::zero(field)];
    candidates.extend((0..m).map(|t| CycloNum::root_of_unity(field, t)));
    for e in &end.basis {
        if e.as_scalar().is_some() {
            continue;
        }
        for c in &candidates {
            let k = eigenspace(e, c);
            if !k.is_zero() && k.dim() < v.dim() {
                return Some((lift(&k), SplitMethod::CommutantEigenspace));
            }
        }
    }
    None
}

pub struct IndecomposableBlock {
    pub subspace: Subspace,
    pub rep: Representation,
    pub end_dim: usize,
    pub splits: Vec<SplitMethod>,
}

/// A minimal centrally faithful block on which the centre acts by `zeta_e^s`.
pub fn find_indecomposable_subrep(rep: &Representation, s: u64, caps: &Caps) -> Result<IndecomposableBlock, HomError> {
    let mut v = central_component(rep, s);
    if v.is_zero() {
        return Err(HomError::EmptyComponent(s));
    }
    let mut splits = Vec::new();
    loop {
        let restricted = rep.restrict(&v, format!("{} | block", rep.label()))?;
        let end = hom_space(&restricted, &restricted, caps)?;
        if end.dim() == 1 {
            return Ok(IndecomposableBlock { subspace: v, rep: restricted, end_dim: 1, splits });
        }
        match split(rep, &v, &end) {
            Some((w, method)) => {
                splits.push(method);
                v = w;
            }
            None => {
                let end_dim = end.dim();
                return Ok(IndecomposableBlock { subspace: v, rep: restricted, end_dim, splits });
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct YComponent {
    /// `t_j` with `rho(0, g_j, 1) = zeta_m^{t_j}` on the component.
    pub character: Vec<u64>,
    pub dim: usize,
    #[serde(skip)]
    pub subspace: Subspace,
}

#[derive(Clone, Debug, Serialize)]
pub struct YDecomposition {
    pub components: Vec<YComponent>,
    pub total_dim: usize,
    /// Whether every `rho(g, 0, 1)` maps each component onto a component.
    pub x_permutes_components: bool,
}

/// Simultaneous eigenspace decomposition of `rho` restricted to `Y`.
pub fn restrict_to_y(rep: &Representation) -> YDecomposition {
    let field = rep.field();
    let m = rep.group().conductor();
    let mut comps: Vec<(Vec<u64>, Subspace)> = vec![(Vec::new(), Subspace::full(field, rep.dim()))];
    for a in y_generators(rep) {
        let spaces: Vec<Subspace> = (0..m).map(|t| eigenspace(a, &CycloNum::root_of_unity(field, t as i64))).collect();
        let mut next = Vec::new();
        for (ch, sub) in &comps {
            for (t, e) in spaces.iter().enumerate() {
                let k = sub.intersect(e);
                if !k.is_zero() {
                    let mut c = ch.clone();
                    c.push(t as u64);
                    next.push((c, k));
                }
            }
        }
        comps = next;
    }
    let x_permutes = x_generators(rep).iter().all(|a| {
        comps.iter().all(|(_, s)| {
            let image = s.map(a);
            comps.iter().any(|(_, t)| image.is_subspace_of(t) && t.is_subspace_of(&image))
        })
    });
    let components: Vec<YComponent> = comps
        .into_iter()
        .map(|(character, subspace)| YComponent { character, dim: subspace.dim(), subspace })
        .collect();
    YDecomposition { total_dim: components.iter().map(|c| c.dim).sum(), components, x_permutes_components: x_permutes }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReciprocityReport {
    /// `dim Hom(Ind psi, rho)` from the solver.
    pub hom_dim: usize,
    /// Dimension of the `psi`-eigenspace of `rho` restricted to `YZ`.
    pub eigenspace_dim: usize,
    pub agree: bool,
}

pub fn reciprocity_check(rep: &Representation, caps: &Caps) -> Result<ReciprocityReport, HomError> {
    let induced = Representation::induced(rep.group());
    let hom_dim = hom_space(&induced, rep, caps)?.dim();
    let field = rep.field();
    let one = CycloNum::one(field);
    let mut space = central_component(rep, 1);
    for a in y_generators(rep) {
        space = space.intersect(&eigenspace(a, &one));
    }
    let eigenspace_dim = space.dim();
    Ok(ReciprocityReport { hom_dim, eigenspace_dim, agree: hom_dim == eigenspace_dim })
}

/// `(1/|G|) sum_g tr rho1(g) tr rho2(g^-1)`, summed over the whole group.
pub fn character_inner_product(rho1: &Representation, rho2: &Representation, caps: &Caps) -> Result<BigRational, HomError> {
    if !Arc::ptr_eq(rho1.group(), rho2.group()) {
        return Err(HomError::GroupMismatch);
    }
    let group = rho1.group();
    let elements = group.enumerate(caps.elements)?;
    let mut acc = CycloNum::zero(rho1.field());
    for g in &elements {
        let a = rho1.eval(g).trace();
        if a.is_zero() {
            continue;
        }
        let b = rho2.eval(&group.inverse(g)).trace();
        acc = &acc + &(&a * &b);
    }
    let total = acc.as_rational().ok_or(HomError::NotRational)?;
    Ok(total / BigRational::from_integer((elements.len() as i64).into()))
}

/// Whether `t = c * p` for a single nonzero scalar `c`.
pub fn proportional(t: &CycloMatrix, p: &CycloMatrix) -> bool {
    if t.rows() != p.rows() || t.cols() != p.cols() {
        return false;
    }
    let mut ratio: Option<CycloNum> = None;
    for r in 0..t.rows() {
        for c in 0..t.cols() {
            let (a, b) = (t.get(r, c), p.get(r, c));
            match (a.is_zero(), b.is_zero()) {
                (true, true) => {}
                (false, false) => {
                    let q = a * &b.inv().expect("nonzero");
                    match &ratio {
                        None => ratio = Some(q),
                        Some(x) if *x == q => {}
                        Some(_) => return false,
                    }
                }
                _ => return false,
            }
        }
    }
    ratio.is_some()
}

/// The models compared by the uniqueness verifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelSpec {
    Schrodinger,
    Induced,
    Fourier,
    Conjugated(u64),
}

impl ModelSpec {
    pub fn label(&self) -> String {
        match self {
            ModelSpec::Schrodinger => "schrodinger".into(),
            ModelSpec::Induced => "induced".into(),
            ModelSpec::Fourier => "fourier".into(),
            ModelSpec::Conjugated(seed) => format!("conjugated:{seed}"),
        }
    }

    pub fn parse(text: &str) -> Option<ModelSpec> {
        match text.trim() {
            "schrodinger" => Some(ModelSpec::Schrodinger),
            "induced" => Some(ModelSpec::Induced),
            "fourier" => Some(ModelSpec::Fourier),
            other => other.strip_prefix("conjugated:").and_then(|s| s.parse().ok()).map(ModelSpec::Conjugated),
        }
    }

    pub fn default_set(seed: u64) -> Vec<ModelSpec> {
        vec![ModelSpec::Schrodinger, ModelSpec::Induced, ModelSpec::Fourier, ModelSpec::Conjugated(seed)]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub label: String,
    pub dim: usize,
    pub central_character: CentralCharacterReport,
    pub identity_central_character: bool,
    pub indecomposability: Option<IndecomposabilityReport>,
    /// For conjugated models: whether the solved intertwiner from the
    /// Schrödinger model is a scalar multiple of the hidden conjugator.
    pub conjugator_recovered: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub source: String,
    pub target: String,
    pub hom_dim: usize,
    pub witness_invertible: bool,
    pub witness_checked_on_random_elements: bool,
    pub witness: Option<CycloMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SvnStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct SvnReport {
    pub status: SvnStatus,
    pub frobenius: bool,
    pub character: Option<Vec<u64>>,
    pub character_generating: bool,
    pub nondegenerate: bool,
    pub centre_size: Option<usize>,
    pub central_order: Option<u64>,
    pub orbit_size: Option<usize>,
    pub dual_size: usize,
    pub max_orbit_over_all_characters: Option<usize>,
    pub models: Vec<ModelReport>,
    pub pairs: Vec<PairReport>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SvnConfig {
    /// Exponent tuple of the character; `None` selects the first generating one.
    pub character: Option<Vec<u64>>,
    pub models: Vec<ModelSpec>,
    pub caps: Caps,
    pub seed: u64,
}

fn build_model(group: &Arc<HeisenbergGroup>, spec: &ModelSpec) -> Result<(Representation, Option<CycloMatrix>), RepError> {
    Ok(match spec {
        ModelSpec::Schrodinger => (Representation::schrodinger(group), None),
        ModelSpec::Induced => (Representation::induced(group), None),
        ModelSpec::Fourier => (fourier_model(group)?, None),
        ModelSpec::Conjugated(seed) => {
            let (rep, p) = conjugated_model(group, *seed)?;
            (rep, Some(p))
        }
    })
}

/// Runs the uniqueness pipeline for `(R^n, beta, eps)`: Frobenius and
/// nondegeneracy preconditions, then central characters, indecomposability
/// and pairwise intertwiners for every model. Failures become diagnostics.
pub fn stone_von_neumann_verify(ring: &Arc<FiniteRing>, pairing: &Pairing, config: &SvnConfig) -> SvnReport {
    let n = pairing.rank();
    let dual_size = pairing.module().size();
    let mut report = SvnReport {
        status: SvnStatus::Fail,
        frobenius: false,
        character: None,
        character_generating: false,
        nondegenerate: false,
        centre_size: None,
        central_order: None,
        orbit_size: None,
        dual_size,
        max_orbit_over_all_characters: None,
        models: Vec::new(),
        pairs: Vec::new(),
        diagnostics: Vec::new(),
    };
    let cert = certify_frobenius(ring);
    report.frobenius = cert.frobenius;
    let max_orbit = || -> usize {
        if n == 1 {
            max_orbit_rank_one(ring).max_orbit_size
        } else {
            all_characters(ring).iter().map(|c| character_orbit(pairing, c).orbit_size).max().unwrap_or(0)
        }
    };
    let ch = match (&config.character, cert.generating) {
        (Some(t), _) => match AdditiveCharacter::new(ring, t.clone()) {
            Ok(c) => c,
            Err(e) => {
                report.diagnostics.push(format!("invalid character: {e}"));
                return report;
            }
        },
        (None, Some(c)) => c,
        (None, None) => {
            let best = max_orbit();
            report.max_orbit_over_all_characters = Some(best);
            let scope = if n == 1 { "all (B, eps)" } else { "all eps" };
            report.diagnostics.push(format!(
                "no generating character; maximal orbit size {best} < |R|^n = {dual_size} over {scope}"
            ));
            return report;
        }
    };
    report.character = Some(ch.exponents().to_vec());
    if let Some(r) = generating_witness(&ch) {
        report.diagnostics.push(format!(
            "character {:?} is not generating: eps({} * R) = 1",
            ch.exponents(),
            ring.format_elem(r)
        ));
        if !cert.frobenius {
            report.max_orbit_over_all_characters = Some(max_orbit());
        }
        return report;
    }
    report.character_generating = true;
    let orbit = character_orbit(pairing, &ch);
    report.orbit_size = Some(orbit.orbit_size);
    let nd = nondegeneracy(pairing, &ch);
    report.nondegenerate = nd.nondegenerate;
    let group = match HeisenbergGroup::new(pairing.clone(), ch.clone()) {
        Ok(g) => g,
        Err(e) => {
            report.diagnostics.push(e.to_string());
            return report;
        }
    };
    report.central_order = Some(group.central_order());
    report.centre_size = group.centre(config.caps.elements).ok().map(|c| c.len());
    if !nd.nondegenerate {
        let centre = report.centre_size.map_or("unknown".to_string(), |c| c.to_string());
        report.diagnostics.push(format!(
            "centre exceeds mu_R (centre size {centre}, |mu_R| = {}); orbit size {}",
            group.central_order(),
            orbit.orbit_size
        ));
        return report;
    }

    let mut built: Vec<(String, Representation)> = Vec::new();
    let mut ok = true;
    for spec in &config.models {
        let label = spec.label();
        match build_model(&group, spec) {
            Ok((rep, hidden)) => {
                let cc = central_character(&rep);
                let ind = frobenius_indecomposable(&rep, &config.caps);
                let recovered = hidden.map(|p| {
                    let pi = Representation::schrodinger(&group);
                    hom_space(&pi, &rep, &config.caps)
                        .map(|h| h.dim() == 1 && proportional(&h.basis[0], &p))
                        .unwrap_or(false)
                });
                let mr = ModelReport {
                    label: label.clone(),
                    dim: rep.dim(),
                    identity_central_character: cc.identity_character,
                    central_character: cc,
                    indecomposability: ind.as_ref().ok().cloned(),
                    conjugator_recovered: recovered,
                    error: ind.as_ref().err().map(|e| e.to_string()),
                };
                ok &= mr.identity_central_character
                    && mr.indecomposability.as_ref().is_some_and(|i| i.indecomposable)
                    && mr.conjugator_recovered != Some(false);
                report.models.push(mr);
                built.push((label, rep));
            }
            Err(e) => {
                ok = false;
                report.diagnostics.push(format!("model {label} could not be built: {e}"));
            }
        }
    }
    for i in 0..built.len() {
        for j in i + 1..built.len() {
            let (la, a) = &built[i];
            let (lb, b) = &built[j];
            match hom_space(a, b, &config.caps) {
                Ok(h) => {
                    let witness = h.basis.first().cloned();
                    let invertible = witness.as_ref().is_some_and(|t| t.is_invertible());
                    let checked = witness.as_ref().is_some_and(|t| check_intertwiner(t, a, b, 16, config.seed));
                    ok &= h.dim() == 1 && invertible && checked;
                    report.pairs.push(PairReport {
                        source: la.clone(),
                        target: lb.clone(),
                        hom_dim: h.dim(),
                        witness_invertible: invertible,
                        witness_checked_on_random_elements: checked,
                        witness,
                    });
                }
                Err(e) => {
                    ok = false;
                    report.diagnostics.push(format!("hom({la}, {lb}): {e}"));
                }
            }
        }
    }
    if ok {
        report.status = SvnStatus::Pass;
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::build_ring;

    fn group(spec: &str, b: usize, ch: Vec<u64>) -> Arc<HeisenbergGroup> {
        let ring = build_ring(spec).unwrap();
        HeisenbergGroup::new(Pairing::new(&ring, 1, vec![vec![b]]).unwrap(), AdditiveCharacter::new(&ring, ch).unwrap())
            .unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn hom_dimensions() {
        let g = group("Z/4", 1, vec![1]);
        let pi = Arc::new(Representation::schrodinger(&g));
        assert_eq!(hom_space(&pi, &pi, &caps()).unwrap().dim(), 1);
        let triv = Representation::trivial(&g, 1);
        assert_eq!(hom_space(&pi, &triv, &caps()).unwrap().dim(), 0);
        let double = Representation::direct_sum(&[pi.clone(), pi.clone()]).unwrap();
        let h = hom_space(&pi, &double, &caps()).unwrap();
        assert_eq!(h.dim(), 2);
        for t in &h.basis {
            assert!(check_intertwiner(t, &pi, &double, 20, 5));
        }
        assert_eq!(end_dim(&double, &caps()).unwrap(), 4);
        assert!(schur_check(&triv, &caps()).unwrap());
    }

    #[test]
    fn indecomposability_verdicts() {
        let g = group("Z/4", 1, vec![1]);
        let pi = Arc::new(Representation::schrodinger(&g));
        assert_eq!(frobenius_indecomposable(&pi, &caps()).unwrap().verdict, Indecomposability::Indecomposable);
        let double = Representation::direct_sum(&[pi.clone(), pi.clone()]).unwrap();
        assert_eq!(frobenius_indecomposable(&double, &caps()).unwrap().verdict, Indecomposability::Decomposable);
        let triv = Arc::new(Representation::trivial(&g, 1));
        assert_eq!(
            frobenius_indecomposable(&triv, &caps()).unwrap().verdict,
            Indecomposability::NotCentrallyFaithful
        );
        let mixed = Representation::direct_sum(&[pi.clone(), triv]).unwrap();
        let r = frobenius_indecomposable(&mixed, &caps()).unwrap();
        assert_eq!(r.verdict, Indecomposability::CentreNotScalar);
        assert_eq!(r.central_blocks.len(), 2);
    }

    #[test]
    fn indecomposable_blocks() {
        let g = group("Z/4", 1, vec![1]);
        let pi = Arc::new(Representation::schrodinger(&g));
        let block = find_indecomposable_subrep(&pi, 1, &caps()).unwrap();
        assert_eq!(block.subspace.dim(), 4);
        let double = Arc::new(Representation::direct_sum(&[pi.clone(), pi.clone()]).unwrap());
        let block = find_indecomposable_subrep(&double, 1, &caps()).unwrap();
        assert_eq!((block.subspace.dim(), block.end_dim), (4, 1));
        let triv = Arc::new(Representation::trivial(&g, 1));
        let mixed = Representation::direct_sum(&[pi.clone(), triv]).unwrap();
        let block = find_indecomposable_subrep(&mixed, 1, &caps()).unwrap();
        assert_eq!(block.subspace.dim(), 4);
        assert!(matches!(find_indecomposable_subrep(&pi, 0, &caps()), Err(HomError::EmptyComponent(0))));
    }

    #[test]
    fn y_isotypic_decomposition() {
        let g = group("Z/2", 1, vec![1]);
        let pi = Representation::schrodinger(&g);
        let d = restrict_to_y(&pi);
        assert_eq!(d.components.len(), 2);
        assert!(d.components.iter().all(|c| c.dim == 1));
        assert!(d.x_permutes_components);
        // the trivial component is the line through delta_0
        let trivial = d.components.iter().find(|c| c.character == vec![0]).unwrap();
        let delta0: Vec<CycloNum> = vec![CycloNum::one(pi.field()), CycloNum::zero(pi.field())];
        assert!(trivial.subspace.contains(&delta0));

        let zero = group("Z/2", 0, vec![1]);
        let d = restrict_to_y(&Representation::schrodinger(&zero));
        assert_eq!((d.components.len(), d.total_dim), (1, 2));
    }

    #[test]
    fn reciprocity() {
        let g = group("Z/4", 1, vec![1]);
        let pi = Arc::new(Representation::schrodinger(&g));
        let r = reciprocity_check(&pi, &caps()).unwrap();
        assert_eq!((r.hom_dim, r.eigenspace_dim), (1, 1));
        let double = Representation::direct_sum(&[pi.clone(), pi.clone()]).unwrap();
        let r = reciprocity_check(&double, &caps()).unwrap();
        assert_eq!((r.hom_dim, r.eigenspace_dim), (2, 2));
        let r = reciprocity_check(&Representation::trivial(&g, 1), &caps()).unwrap();
        assert_eq!((r.hom_dim, r.eigenspace_dim), (0, 0));
    }

    #[test]
    fn inner_products() {
        let g = group("Z/4", 1, vec![1]);
        let pi = Arc::new(Representation::schrodinger(&g));
        let one = BigRational::from_integer(1.into());
        assert_eq!(character_inner_product(&pi, &pi, &caps()).unwrap(), one);
        let triv = Representation::trivial(&g, 1);
        assert_eq!(character_inner_product(&pi, &triv, &caps()).unwrap(), BigRational::from_integer(0.into()));
        let double = Representation::direct_sum(&[pi.clone(), pi.clone()]).unwrap();
        assert_eq!(character_inner_product(&double, &pi, &caps()).unwrap(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn proportionality() {
        let k = CycloField::new(4).unwrap();
        let p = CycloMatrix::identity(&k, 2);
        let i = CycloNum::root_of_unity(&k, 1);
        assert!(proportional(&p.scale(&i), &p));
        let mut q = p.clone();
        q.set(1, 1, i.clone());
        assert!(!proportional(&q, &p));
        assert!(!proportional(&CycloMatrix::zeros(&k, 2, 2), &p));
    }

    fn svn(spec: &str, n: usize, b: Vec<Vec<usize>>) -> SvnReport {
        let ring = build_ring(spec).unwrap();
        let pairing = Pairing::new(&ring, n, b).unwrap();
        let config = SvnConfig { character: None, models: ModelSpec::default_set(11), caps: caps(), seed: 3 };
        stone_von_neumann_verify(&ring, &pairing, &config)
    }

    #[test]
    fn uniqueness_pipeline() {
        let r = svn("Z/4", 1, vec![vec![1]]);
        assert_eq!(r.status, SvnStatus::Pass, "{:?}", r.diagnostics);
        assert_eq!(r.pairs.len(), 6);
        assert!(r.pairs.iter().all(|p| p.hom_dim == 1 && p.witness_invertible));
        assert!(r.models.iter().any(|m| m.conjugator_recovered == Some(true)));

        let r = svn("Z/4", 1, vec![vec![2]]);
        assert_eq!(r.status, SvnStatus::Fail);
        assert!(!r.nondegenerate);
        assert!(r.diagnostics[0].contains("centre exceeds mu_R"));
        assert!(r.diagnostics[0].contains("orbit size 2"));
    }

    #[test]
    fn model_names() {
        assert_eq!(ModelSpec::parse("conjugated:7"), Some(ModelSpec::Conjugated(7)));
        assert_eq!(ModelSpec::parse("fourier"), Some(ModelSpec::Fourier));
        assert_eq!(ModelSpec::parse("bogus"), None);
        assert_eq!(ModelSpec::Conjugated(3).label(), "conjugated:3");
    }
}
