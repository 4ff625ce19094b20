//! Filtrations induced by graded operator sets, their graded pieces, and the
//! boundary decomposition search.
//!
//! A graded generator set lists operators with degrees; `P_k` is every
//! operator of degree at most `k`, so nesting holds by construction. The
//! operator algebra they generate is never materialised.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::caps::Caps;
use crate::cyclo::{CycloField, CycloMatrix, CycloNum, Subspace};
use crate::heisenberg::HeisenbergGroup;
use crate::homspace::{hom_space, HomError};
use crate::schrodinger::{modulation_matrix, pi, translation_matrix, Representation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("operator of shape {rows}x{cols} in a space of dimension {dim}")]
    Shape { rows: usize, cols: usize, dim: usize },
    #[error("cyclic vector has length {got}, expected {expected}")]
    VectorLength { got: usize, expected: usize },
    #[error("the generator set is empty")]
    Empty,
    #[error("filtrations have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("map does not respect the filtration at level {level}")]
    NotCompatible { level: usize, witness: Vec<String> },
    #[error("the transport matrix is singular")]
    Singular,
    #[error("unknown symbolic operator {0:?}")]
    UnknownOperator(String),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// Operators `T` with degrees; `P_k = {T : deg T <= k}`.
#[derive(Clone, Debug)]
pub struct GradedGeneratorSet {
    field: Arc<CycloField>,
    dim: usize,
    operators: Vec<(usize, CycloMatrix)>,
}

impl GradedGeneratorSet {
    pub fn new(field: &Arc<CycloField>, dim: usize, operators: Vec<(usize, CycloMatrix)>) -> Result<Self, FiltrationError> {
        for (_, t) in &operators {
            if t.rows() != dim || t.cols() != dim {
                return Err(FiltrationError::Shape { rows: t.rows(), cols: t.cols(), dim });
            }
        }
        Ok(GradedGeneratorSet { field: field.clone(), dim, operators })
    }

    /// Scalars at degree 0 and every `M_y T_x` at degree 1.
    pub fn fh(group: &HeisenbergGroup) -> Self {
        let field = group.character().field().clone();
        let d = group.module().size();
        let mut operators = vec![(0, CycloMatrix::identity(&field, d))];
        for x in 0..d {
            for y in 0..d {
                operators.push((1, pi(group, &group.element(x, y, 0).expect("in range"))));
            }
        }
        GradedGeneratorSet { field, dim: d, operators }
    }

    /// Builds a set from names `scalar`, `M:<y>` and `T:<x>`, where `<y>` and
    /// `<x>` are comma-separated element indices, one per coordinate of `R^n`.
    pub fn symbolic(group: &HeisenbergGroup, entries: &[(usize, String)]) -> Result<Self, FiltrationError> {
        let field = group.character().field().clone();
        let module = group.module();
        let d = module.size();
        let vector = |text: &str| -> Option<usize> {
            let parts: Result<Vec<usize>, _> = text.split(',').map(|p| p.trim().parse::<usize>()).collect();
            let parts = parts.ok()?;
            let ring = group.ring().size();
            (parts.len() == module.rank() && parts.iter().all(|&p| p < ring)).then(|| module.encode(&parts))
        };
        let mut operators = Vec::new();
        for (deg, name) in entries {
            let unknown = || FiltrationError::UnknownOperator(name.clone());
            let t = if name == "scalar" {
                CycloMatrix::identity(&field, d)
            } else if let Some(rest) = name.strip_prefix("M:") {
                modulation_matrix(group, vector(rest).ok_or_else(unknown)?)
            } else if let Some(rest) = name.strip_prefix("T:") {
                translation_matrix(group, vector(rest).ok_or_else(unknown)?)
            } else {
                return Err(unknown());
            };
            operators.push((*deg, t));
        }
        Ok(GradedGeneratorSet { field, dim: d, operators })
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[(usize, CycloMatrix)] {
        &self.operators
    }

    pub fn top_degree(&self) -> usize {
        self.operators.iter().map(|(d, _)| *d).max().unwrap_or(0)
    }

    /// The operators of `P_k`.
    pub fn level(&self, k: usize) -> impl Iterator<Item = &CycloMatrix> {
        self.operators.iter().filter(move |(d, _)| *d <= k).map(|(_, t)| t)
    }

    /// Adds operators, keeping the existing ones.
    pub fn extended(&self, more: Vec<(usize, CycloMatrix)>) -> Result<Self, FiltrationError> {
        let mut operators = self.operators.clone();
        operators.extend(more);
        GradedGeneratorSet::new(&self.field, self.dim, operators)
    }

    /// The set `{S^-1 T S}` on the source of an isomorphism `S`, with the
    /// filtration mode moved along: a cyclic vector `v` becomes `S^-1 v`.
    /// `S` then carries the new filtration onto the old one.
    pub fn pulled_back(&self, s: &CycloMatrix, mode: &FiltrationMode) -> Result<(Self, FiltrationMode), FiltrationError> {
        let inv = s.inverse().map_err(|_| FiltrationError::Singular)?;
        let operators = self
            .operators
            .iter()
            .map(|(d, t)| (*d, inv.mul(t).and_then(|x| x.mul(s)).expect("square")))
            .collect();
        let mode = match mode {
            FiltrationMode::FullModule => FiltrationMode::FullModule,
            FiltrationMode::Cyclic(v) => FiltrationMode::Cyclic(inv.mul_vec(v).expect("dimension")),
        };
        Ok((GradedGeneratorSet::new(&self.field, self.dim, operators)?, mode))
    }

    /// Checks that the product of a degree-`k` and a degree-`l` operator lies
    /// in the span of `P_{min(k + l, N)}`.
    pub fn product_closure(&self) -> ProductClosureReport {
        let top = self.top_degree();
        let n2 = self.dim * self.dim;
        let flatten = |t: &CycloMatrix| -> Vec<CycloNum> { (0..self.dim).flat_map(|r| t.row(r).to_vec()).collect() };
        let spans: Vec<Subspace> = (0..=top)
            .map(|k| Subspace::span(&self.field, n2, &self.level(k).map(flatten).collect::<Vec<_>>()))
            .collect();
        let mut violations = Vec::new();
        let mut checked = 0;
        for (i, (da, a)) in self.operators.iter().enumerate() {
            for (j, (db, b)) in self.operators.iter().enumerate() {
                checked += 1;
                let product = a.mul(b).expect("square");
                if !spans[(da + db).min(top)].contains(&flatten(&product)) {
                    violations.push((i, j));
                }
            }
        }
        ProductClosureReport { pairs_checked: checked, violations }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductClosureReport {
    pub pairs_checked: usize,
    /// Operator index pairs whose product escapes the expected span.
    pub violations: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiltrationMode {
    /// `F_k = sum of the images of P_k`.
    FullModule,
    /// `F_k = span {T v : T in P_k}`.
    Cyclic(Vec<CycloNum>),
}

impl FiltrationMode {
    pub fn name(&self) -> &'static str {
        match self {
            FiltrationMode::FullModule => "full-module",
            FiltrationMode::Cyclic(_) => "cyclic",
        }
    }

    /// Cyclic mode on the basis vector `delta_0`.
    pub fn cyclic_delta0(field: &Arc<CycloField>, dim: usize) -> Self {
        let mut v = vec![CycloNum::zero(field); dim];
        if dim > 0 {
            v[0] = CycloNum::one(field);
        }
        FiltrationMode::Cyclic(v)
    }
}

/// Nested subspaces `F_0 ⊆ ... ⊆ F_N`.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub mode: FiltrationMode,
    pub levels: Vec<Subspace>,
}

impl Filtration {
    /// A filtration given directly by its subspaces.
    pub fn from_subspaces(levels: Vec<Subspace>) -> Self {
        Filtration { mode: FiltrationMode::FullModule, levels }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subspace::dim).collect()
    }

    pub fn ambient_dim(&self) -> usize {
        self.levels.first().map_or(0, Subspace::ambient_dim)
    }

    pub fn top(&self) -> &Subspace {
        self.levels.last().expect("nonempty filtration")
    }
}

pub fn induced_filtration(gens: &GradedGeneratorSet, mode: FiltrationMode) -> Result<Filtration, FiltrationError> {
    if gens.operators.is_empty() {
        return Err(FiltrationError::Empty);
    }
    if let FiltrationMode::Cyclic(v) = &mode {
        if v.len() != gens.dim {
            return Err(FiltrationError::VectorLength { got: v.len(), expected: gens.dim });
        }
    }
    let levels = (0..=gens.top_degree())
        .map(|k| {
            let vectors: Vec<Vec<CycloNum>> = match &mode {
                FiltrationMode::FullModule => gens.level(k).flat_map(|t| t.columns()).collect(),
                FiltrationMode::Cyclic(v) => gens.level(k).map(|t| t.mul_vec(v).expect("dimension")).collect(),
            };
            Subspace::span(&gens.field, gens.dim, &vectors)
        })
        .collect();
    Ok(Filtration { mode, levels })
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionViolation {
    pub operator_degree: usize,
    pub operator: usize,
    pub level: usize,
    pub basis_vector: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MorphismViolation {
    pub level: usize,
    /// A vector of `F_k` whose image leaves `F'_k`.
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationCertificate {
    /// Levels `k` with `F_{k-1}` not inside `F_k`.
    pub nesting_violations: Vec<usize>,
    pub action_checks: usize,
    pub action_violations: Vec<ActionViolation>,
    pub morphism_violations: Option<Vec<MorphismViolation>>,
}

impl FiltrationCertificate {
    pub fn nesting_ok(&self) -> bool {
        self.nesting_violations.is_empty()
    }

    pub fn action_ok(&self) -> bool {
        self.action_violations.is_empty()
    }

    pub fn morphism_ok(&self) -> Option<bool> {
        self.morphism_violations.as_ref().map(Vec::is_empty)
    }

    pub fn passed(&self) -> bool {
        self.nesting_ok() && self.action_ok() && self.morphism_ok() != Some(false)
    }
}

/// Levels where `f(F_k)` is not contained in `F'_k`, each with a witness.
pub fn morphism_violations(f: &CycloMatrix, source: &Filtration, target: &Filtration) -> Result<Vec<MorphismViolation>, FiltrationError> {
    if source.len() != target.len() {
        return Err(FiltrationError::LengthMismatch(source.len(), target.len()));
    }
    let mut out = Vec::new();
    for (k, (a, b)) in source.levels.iter().zip(&target.levels).enumerate() {
        if let Some(v) = a.basis().iter().find(|v| !b.contains(&f.mul_vec(v).expect("dimension"))) {
            out.push(MorphismViolation { level: k, witness: v.iter().map(ToString::to_string).collect() });
        }
    }
    Ok(out)
}

/// Nesting, `rho(P_k) F_l ⊆ F_{min(k + l, N)}`, and optionally `f(F_k) ⊆ F'_k`.
pub fn verify_filtration_theorem(
    filt: &Filtration,
    gens: &GradedGeneratorSet,
    morphism: Option<(&CycloMatrix, &Filtration)>,
) -> Result<FiltrationCertificate, FiltrationError> {
    let nesting_violations = (1..filt.len()).filter(|&k| !filt.levels[k - 1].is_subspace_of(&filt.levels[k])).collect();
    let top = filt.len() - 1;
    let mut checks = 0;
    let mut action_violations = Vec::new();
    for (op, (deg, t)) in gens.operators.iter().enumerate() {
        for (l, level) in filt.levels.iter().enumerate() {
            let target = &filt.levels[(deg + l).min(top)];
            for (b, v) in level.basis().iter().enumerate() {
                checks += 1;
                if !target.contains(&t.mul_vec(v).expect("dimension")) {
                    action_violations.push(ActionViolation { operator_degree: *deg, operator: op, level: l, basis_vector: b });
                }
            }
        }
    }
    let morphism_violations = match morphism {
        Some((f, target)) => Some(morphism_violations(f, filt, target)?),
        None => None,
    };
    Ok(FiltrationCertificate { nesting_violations, action_checks: checks, action_violations, morphism_violations })
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedPiece {
    pub k: usize,
    pub dim: usize,
    /// Coset representatives of `F_k / F_{k-1}`.
    #[serde(skip)]
    pub representatives: Vec<Vec<CycloNum>>,
}

/// Representatives are the echelon basis vectors of `F_k` that are not
/// already spanned, taken in order.
pub fn graded_pieces(filt: &Filtration) -> Vec<GradedPiece> {
    let mut pieces = Vec::new();
    for (k, level) in filt.levels.iter().enumerate() {
        let mut span = if k == 0 { Subspace::zero(level.field(), level.ambient_dim()) } else { filt.levels[k - 1].clone() };
        let mut reps = Vec::new();
        for v in level.basis() {
            if !span.contains(v) {
                span = span.sum(&Subspace::span(level.field(), level.ambient_dim(), std::slice::from_ref(v)));
                reps.push(v.clone());
            }
        }
        pieces.push(GradedPiece { k, dim: reps.len(), representatives: reps });
    }
    pieces
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedMap {
    pub k: usize,
    /// `dim gr'_k x dim gr_k` matrix in the representative bases.
    pub matrix: CycloMatrix,
    pub invertible: bool,
}

/// The maps `gr_k(f) : F_k / F_{k-1} -> F'_k / F'_{k-1}`.
pub fn gr_of_morphism(f: &CycloMatrix, source: &Filtration, target: &Filtration) -> Result<Vec<GradedMap>, FiltrationError> {
    if let Some(v) = morphism_violations(f, source, target)?.into_iter().next() {
        return Err(FiltrationError::NotCompatible { level: v.level, witness: v.witness });
    }
    let field = f.field();
    let (gr1, gr2) = (graded_pieces(source), graded_pieces(target));
    let mut maps = Vec::new();
    for k in 0..source.len() {
        let lower: Vec<Vec<CycloNum>> = if k == 0 { Vec::new() } else { target.levels[k - 1].basis().to_vec() };
        let offset = lower.len();
        let mut columns = lower;
        columns.extend(gr2[k].representatives.iter().cloned());
        let system = CycloMatrix::from_columns(field, target.ambient_dim(), &columns);
        let mut out = CycloMatrix::zeros(field, gr2[k].dim, gr1[k].dim);
        for (j, r) in gr1[k].representatives.iter().enumerate() {
            let image = f.mul_vec(r).expect("dimension");
            let coords = system.solve(&image).expect("shape").expect("image lies in F'_k");
            for i in 0..gr2[k].dim {
                out.set(i, j, coords[offset + i].clone());
            }
        }
        let invertible = out.rows() == out.cols() && out.is_invertible();
        maps.push(GradedMap { k, matrix: out, invertible });
    }
    Ok(maps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryVerdict {
    /// `F_k` is zero or everything, so no proper split exists.
    Vacuous,
    /// `F_k` is not invariant, so it cannot be a summand.
    NotInvariant,
    /// An invariant complement exists; the witness is the projection onto `F_k`.
    Decomposes,
    /// No commutant element projects onto `F_k`; since the projection along
    /// any invariant complement would be one, none exists.
    NoneFound,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryDecomposition {
    pub k: usize,
    pub verdict: BoundaryVerdict,
    pub commutant_dim: Option<usize>,
    pub witness: Option<CycloMatrix>,
}

/// Looks for `M = M' ⊕ M''` with `M' ⊆ F_k` and `M'' ∩ F_k = 0`, both
/// invariant and nonzero. Then `M' = F_k`, and the projection onto it along
/// `M''` is a commutant element `e` with `e|F_k = id` and `im e ⊆ F_k`; those
/// conditions are linear in the commutant coordinates and solved exactly.
pub fn boundary_decomposition_check(
    rep: &Representation,
    filt: &Filtration,
    k: usize,
    caps: &Caps,
) -> Result<BoundaryDecomposition, FiltrationError> {
    let fk = &filt.levels[k];
    let verdict = |v| BoundaryDecomposition { k, verdict: v, commutant_dim: None, witness: None };
    if fk.is_zero() || fk.is_full() {
        return Ok(verdict(BoundaryVerdict::Vacuous));
    }
    let invariant = rep
        .generator_matrices()
        .iter()
        .all(|a| fk.basis().iter().all(|v| fk.contains(&a.mul_vec(v).expect("dimension"))));
    if !invariant {
        return Ok(verdict(BoundaryVerdict::NotInvariant));
    }
    let field = rep.field();
    let d = rep.dim();
    let end = hom_space(rep, rep, caps)?;
    let basis_matrix = CycloMatrix::from_columns(field, d, fk.basis());
    // rows w with w . v = 0 for all v in F_k cut out F_k
    let annihilator: Vec<Vec<CycloNum>> = basis_matrix.transpose().kernel();
    let mut columns = Vec::with_capacity(end.dim());
    for e in &end.basis {
        let mut column = Vec::new();
        let eb = e.mul(&basis_matrix).expect("shape");
        for r in 0..d {
            column.extend(eb.row(r).iter().cloned());
        }
        for w in &annihilator {
            for c in 0..d {
                let mut acc = CycloNum::zero(field);
                for (r, wr) in w.iter().enumerate() {
                    if !wr.is_zero() {
                        acc = &acc + &(wr * e.get(r, c));
                    }
                }
                column.push(acc);
            }
        }
        columns.push(column);
    }
    let mut rhs = Vec::new();
    for r in 0..d {
        rhs.extend(basis_matrix.row(r).iter().cloned());
    }
    rhs.extend(std::iter::repeat_n(CycloNum::zero(field), annihilator.len() * d));
    let system = CycloMatrix::from_columns(field, rhs.len(), &columns);
    let solution = system.solve(&rhs).expect("shape");
    Ok(match solution {
        Some(c) => {
            let mut e = CycloMatrix::zeros(field, d, d);
            for (ci, ei) in c.iter().zip(&end.basis) {
                if !ci.is_zero() {
                    e = e.add(&ei.scale(ci)).expect("shape");
                }
            }
            BoundaryDecomposition { k, verdict: BoundaryVerdict::Decomposes, commutant_dim: Some(end.dim()), witness: Some(e) }
        }
        None => BoundaryDecomposition { k, verdict: BoundaryVerdict::NoneFound, commutant_dim: Some(end.dim()), witness: None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::Pairing;
    use crate::ring::build_ring;
    use crate::schrodinger::induced_iso;

    fn group(spec: &str) -> Arc<HeisenbergGroup> {
        let ring = build_ring(spec).unwrap();
        let ch = crate::character::certify_frobenius(&ring).generating.unwrap();
        HeisenbergGroup::new(Pairing::identity(&ring, 1).unwrap(), ch).unwrap()
    }

    fn fh_filtration(g: &HeisenbergGroup) -> (GradedGeneratorSet, Filtration) {
        let gens = GradedGeneratorSet::fh(g);
        let mode = FiltrationMode::cyclic_delta0(gens.field(), gens.dim());
        let filt = induced_filtration(&gens, mode).unwrap();
        (gens, filt)
    }

    #[test]
    fn fh_cyclic_strata() {
        let g = group("Z/2");
        let (gens, filt) = fh_filtration(&g);
        assert_eq!(filt.dims(), vec![1, 2]);
        let delta0 = vec![CycloNum::one(gens.field()), CycloNum::zero(gens.field())];
        assert!(filt.levels[0].contains(&delta0));
        assert_eq!(graded_pieces(&filt).iter().map(|p| p.dim).collect::<Vec<_>>(), vec![1, 1]);
        assert!(verify_filtration_theorem(&filt, &gens, None).unwrap().passed());
        assert!(gens.product_closure().violations.is_empty());
    }

    #[test]
    fn full_module_degeneracy() {
        let g = group("Z/4");
        let gens = GradedGeneratorSet::fh(&g);
        let filt = induced_filtration(&gens, FiltrationMode::FullModule).unwrap();
        assert_eq!(filt.dims(), vec![4, 4]);
        let zero = GradedGeneratorSet::new(gens.field(), 4, vec![(0, CycloMatrix::zeros(gens.field(), 4, 4))]).unwrap();
        let filt = induced_filtration(&zero, FiltrationMode::FullModule).unwrap();
        assert_eq!(filt.dims(), vec![0]);
        let empty = GradedGeneratorSet::new(gens.field(), 4, Vec::new()).unwrap();
        assert_eq!(induced_filtration(&empty, FiltrationMode::FullModule).unwrap_err(), FiltrationError::Empty);
    }

    #[test]
    fn monotone_under_enlargement() {
        let g = group("Z/4");
        let gens = GradedGeneratorSet::symbolic(&g, &[(0, "scalar".into()), (1, "T:1".into())]).unwrap();
        let mode = FiltrationMode::cyclic_delta0(gens.field(), 4);
        let small = induced_filtration(&gens, mode.clone()).unwrap();
        assert_eq!(small.dims(), vec![1, 2]);
        let big = gens.extended(vec![(1, modulation_matrix(&g, 1)), (1, translation_matrix(&g, 2))]).unwrap();
        let big = induced_filtration(&big, mode).unwrap();
        for (a, b) in small.levels.iter().zip(&big.levels) {
            assert!(a.is_subspace_of(b));
        }
        assert!(GradedGeneratorSet::symbolic(&g, &[(0, "Q:1".into())]).is_err());
    }

    #[test]
    fn morphisms_on_graded_pieces() {
        let g = group("Z/4");
        let (gens, filt) = fh_filtration(&g);
        let id = CycloMatrix::identity(gens.field(), 4);
        let cert = verify_filtration_theorem(&filt, &gens, Some((&id, &filt))).unwrap();
        assert_eq!(cert.morphism_ok(), Some(true));
        let maps = gr_of_morphism(&id, &filt, &filt).unwrap();
        assert!(maps.iter().all(|m| m.matrix.is_identity()));

        // induced_iso sends delta_0 to delta_0 and so respects the cyclic filtration
        let f = induced_iso(&g);
        let maps = gr_of_morphism(&f, &filt, &filt).unwrap();
        assert!(maps.iter().all(|m| m.invertible));

        // the same map between the transported filtration and the original one
        let (pulled, mode) = gens.pulled_back(&f, &filt.mode).unwrap();
        let source = induced_filtration(&pulled, mode).unwrap();
        let cert = verify_filtration_theorem(&source, &pulled, Some((&f, &filt))).unwrap();
        assert!(cert.passed());
        assert!(gr_of_morphism(&f, &source, &filt).unwrap().iter().all(|m| m.invertible));

        // a translation moves delta_0 off F_0
        let t = translation_matrix(&g, 1);
        let cert = verify_filtration_theorem(&filt, &gens, Some((&t, &filt))).unwrap();
        assert_eq!(cert.morphism_ok(), Some(false));
        assert!(matches!(gr_of_morphism(&t, &filt, &filt), Err(FiltrationError::NotCompatible { level: 0, .. })));

        // projection onto delta_0 is compatible but kills gr_1
        let mut p = CycloMatrix::zeros(gens.field(), 4, 4);
        p.set(0, 0, CycloNum::one(gens.field()));
        let maps = gr_of_morphism(&p, &filt, &filt).unwrap();
        assert!(maps[0].invertible && !maps[1].invertible);
    }

    #[test]
    fn boundary_decompositions() {
        let g = group("Z/4");
        let (_, filt) = fh_filtration(&g);
        let pi_rep = Arc::new(Representation::schrodinger(&g));
        let caps = Caps::default();
        // F_0 is a line, not invariant under pi
        let r = boundary_decomposition_check(&pi_rep, &filt, 0, &caps).unwrap();
        assert_eq!(r.verdict, BoundaryVerdict::NotInvariant);
        assert_eq!(boundary_decomposition_check(&pi_rep, &filt, 1, &caps).unwrap().verdict, BoundaryVerdict::Vacuous);

        let double = Representation::direct_sum(&[pi_rep.clone(), pi_rep.clone()]).unwrap();
        let field = double.field().clone();
        let first: Vec<Vec<CycloNum>> = (0..4)
            .map(|i| (0..8).map(|j| if i == j { CycloNum::one(&field) } else { CycloNum::zero(&field) }).collect())
            .collect();
        let split = Filtration::from_subspaces(vec![Subspace::span(&field, 8, &first), Subspace::full(&field, 8)]);
        let r = boundary_decomposition_check(&double, &split, 0, &caps).unwrap();
        assert_eq!(r.verdict, BoundaryVerdict::Decomposes);
        let e = r.witness.unwrap();
        assert_eq!(e.mul(&e).unwrap(), e);

        let zero = Filtration::from_subspaces(vec![Subspace::zero(&field, 8)]);
        assert_eq!(boundary_decomposition_check(&double, &zero, 0, &caps).unwrap().verdict, BoundaryVerdict::Vacuous);
    }
}
