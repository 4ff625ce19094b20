//! Subspaces of `K^d` kept in reduced row echelon form.

use std::sync::Arc;

use super::{CycloField, CycloMatrix, CycloNum};

/// A subspace spanned by the rows of an RREF matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Arc<CycloField>,
    ambient: usize,
    basis: Vec<Vec<CycloNum>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &Arc<CycloField>, ambient: usize) -> Subspace {
        Subspace { field: field.clone(), ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &Arc<CycloField>, ambient: usize) -> Subspace {
        let id = CycloMatrix::identity(field, ambient);
        Subspace::span(field, ambient, &id.columns())
    }

    pub fn span(field: &Arc<CycloField>, ambient: usize, vectors: &[Vec<CycloNum>]) -> Subspace {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        let m = CycloMatrix::from_fn(field, vectors.len(), ambient, |r, c| vectors[r][c].clone());
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { field: field.clone(), ambient, basis, pivots }
    }

    /// Column space of a matrix.
    pub fn image(m: &CycloMatrix) -> Subspace {
        Self::span(m.field(), m.rows(), &m.columns())
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Echelon basis vectors.
    pub fn basis(&self) -> &[Vec<CycloNum>] {
        &self.basis
    }

    /// Pivot coordinate of each basis vector.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as matrix columns (`ambient x dim`).
    pub fn basis_matrix(&self) -> CycloMatrix {
        CycloMatrix::from_columns(&self.field, self.ambient, &self.basis)
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[CycloNum]) -> Option<Vec<CycloNum>> {
        let coords: Vec<CycloNum> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(b) {
                if !x.is_zero() {
                    *r = &*r - &(c * x);
                }
            }
        }
        residual.iter().all(CycloNum::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[CycloNum]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Self::span(&self.field, self.ambient, &vectors)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field, self.ambient);
        }
        // solve sum a_i u_i = sum b_j w_j
        let cols = self.dim() + other.dim();
        let m = CycloMatrix::from_fn(&self.field, self.ambient, cols, |r, c| {
            if c < self.dim() {
                self.basis[c][r].clone()
            } else {
                -&other.basis[c - self.dim()][r]
            }
        });
        let vectors: Vec<Vec<CycloNum>> = m
            .kernel()
            .into_iter()
            .map(|k| {
                let mut v = vec![CycloNum::zero(&self.field); self.ambient];
                for (a, b) in k[..self.dim()].iter().zip(&self.basis) {
                    if a.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = &*x + &(a * y);
                    }
                }
                v
            })
            .collect();
        Self::span(&self.field, self.ambient, &vectors)
    }

    /// Image of the subspace under a linear map.
    pub fn map(&self, m: &CycloMatrix) -> Subspace {
        let images: Vec<Vec<CycloNum>> = self.basis.iter().map(|b| m.mul_vec(b).expect("dimension")).collect();
        Self::span(&self.field, m.rows(), &images)
    }

    /// Standard basis vectors `e_j` for the non-pivot coordinates; together
    /// with this subspace they span the ambient space.
    pub fn complement_basis(&self) -> Vec<Vec<CycloNum>> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut v = vec![CycloNum::zero(&self.field); self.ambient];
                v[j] = CycloNum::one(&self.field);
                v
            })
            .collect()
    }
}
