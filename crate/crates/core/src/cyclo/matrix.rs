//! Dense row-major matrices over a cyclotomic field.

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::{CycloError, CycloField, CycloNum};

#[derive(Clone, PartialEq, Eq)]
pub struct CycloMatrix {
    field: Arc<CycloField>,
    rows: usize,
    cols: usize,
    data: Vec<CycloNum>,
}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.pretty()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl CycloMatrix {
    pub fn zeros(field: &Arc<CycloField>, rows: usize, cols: usize) -> CycloMatrix {
        CycloMatrix { field: field.clone(), rows, cols, data: vec![CycloNum::zero(field); rows * cols] }
    }

    pub fn identity(field: &Arc<CycloField>, n: usize) -> CycloMatrix {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = CycloNum::one(field);
        }
        m
    }

    pub fn scalar(field: &Arc<CycloField>, n: usize, c: &CycloNum) -> CycloMatrix {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn diag(field: &Arc<CycloField>, entries: &[CycloNum]) -> CycloMatrix {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn from_fn(
        field: &Arc<CycloField>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycloNum,
    ) -> CycloMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CycloMatrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &Arc<CycloField>, rows: Vec<Vec<CycloNum>>) -> Result<CycloMatrix, CycloError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(CycloError::ShapeMismatch("ragged rows".into()));
        }
        let data: Vec<CycloNum> = rows.into_iter().flatten().collect();
        if let Some(x) = data.iter().find(|x| x.field().conductor() != field.conductor()) {
            return Err(CycloError::FieldMismatch(field.conductor(), x.field().conductor()));
        }
        Ok(CycloMatrix { field: field.clone(), rows: nrows, cols: ncols, data })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &Arc<CycloField>, rows: usize, columns: &[Vec<CycloNum>]) -> CycloMatrix {
        Self::from_fn(field, rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &CycloNum {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycloNum) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[CycloNum] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<CycloNum> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<CycloNum>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycloNum::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// Returns `c` when the matrix is `c * I`.
    pub fn as_scalar(&self) -> Option<CycloNum> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(CycloNum::one(&self.field));
        }
        let c = self.get(0, 0).clone();
        for r in 0..self.rows {
            for col in 0..self.cols {
                let x = self.get(r, col);
                let ok = if r == col { *x == c } else { x.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    fn check_same_shape(&self, other: &CycloMatrix) -> Result<(), CycloError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CycloError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field.conductor() != other.field.conductor() {
            return Err(CycloError::FieldMismatch(self.field.conductor(), other.field.conductor()));
        }
        Ok(())
    }

    pub fn add(&self, other: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(CycloMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(CycloMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &CycloNum) -> CycloMatrix {
        let data = if c.is_one() {
            self.data.clone()
        } else {
            self.data.iter().map(|x| if x.is_zero() { x.clone() } else { x * c }).collect()
        };
        CycloMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> CycloMatrix {
        let data = self.data.iter().map(|x| -x).collect();
        CycloMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product, skipping zero entries of the left factor.
    pub fn mul(&self, other: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
        if self.cols != other.rows {
            return Err(CycloError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field.conductor() != other.field.conductor() {
            return Err(CycloError::FieldMismatch(self.field.conductor(), other.field.conductor()));
        }
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                let a_one = a.is_one();
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * other.cols + c;
                    let term = if a_one { b.clone() } else { a * b };
                    out.data[idx] = &out.data[idx] + &term;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[CycloNum]) -> Result<Vec<CycloNum>, CycloError> {
        if v.len() != self.cols {
            return Err(CycloError::ShapeMismatch(format!(
                "vector of length {} for a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = CycloNum::zero(&self.field);
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn transpose(&self) -> CycloMatrix {
        Self::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Block-diagonal matrix `self ⊕ other`.
    pub fn direct_sum(&self, other: &CycloMatrix) -> CycloMatrix {
        let mut out = Self::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
        if self.cols != other.cols {
            return Err(CycloError::ShapeMismatch("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(CycloMatrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> CycloMatrix {
        Self::from_fn(&self.field, rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    pub fn trace(&self) -> CycloNum {
        (0..self.rows.min(self.cols)).fold(CycloNum::zero(&self.field), |acc, i| &acc + self.get(i, i))
    }

    pub fn pow(&self, mut e: u64) -> Result<CycloMatrix, CycloError> {
        if !self.is_square() {
            return Err(CycloError::ShapeMismatch("power of a non-square matrix".into()));
        }
        let mut base = self.clone();
        let mut acc = Self::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (CycloMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(sel) = (prow..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(prow, sel);
            let inv = self.get(prow, col).inv().expect("pivot is nonzero");
            if !inv.is_one() {
                for c in col..self.cols {
                    let idx = prow * self.cols + c;
                    if !self.data[idx].is_zero() {
                        self.data[idx] = &self.data[idx] * &inv;
                    }
                }
            }
            let pivot_row: Vec<(usize, CycloNum)> = (col..self.cols)
                .filter(|&c| !self.get(prow, c).is_zero())
                .map(|c| (c, self.get(prow, c).clone()))
                .collect();
            for r in 0..self.rows {
                if r == prow {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (c, p) in &pivot_row {
                    let idx = r * self.cols + c;
                    self.data[idx] = &self.data[idx] - &(&factor * p);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<CycloNum>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![CycloNum::zero(&self.field); self.cols];
            v[free] = CycloNum::one(&self.field);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution `x` of `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[CycloNum]) -> Result<Option<Vec<CycloNum>>, CycloError> {
        if b.len() != self.rows {
            return Err(CycloError::ShapeMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::from_fn(&self.field, self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![CycloNum::zero(&self.field); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<CycloMatrix, CycloError> {
        if !self.is_square() {
            return Err(CycloError::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(&self.field, n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                CycloNum::one(&self.field)
            } else {
                CycloNum::zero(&self.field)
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(CycloError::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(aug.submatrix(&rows, &cols))
    }

    /// Nested arrays of serialized entries.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|x| x.to_string()).collect()).collect()
    }
}

impl Serialize for CycloMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            seq.serialize_element(self.row(r))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(m: u64) -> Arc<CycloField> {
        CycloField::new(m).unwrap()
    }

    fn int_matrix(field: &Arc<CycloField>, rows: &[&[i64]]) -> CycloMatrix {
        CycloMatrix::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&x| CycloNum::from_integer(field, x)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        let k = f(4);
        let id = CycloMatrix::identity(&k, 3);
        assert_eq!(id.rank(), 3);
        assert!(id.kernel().is_empty());
        let b: Vec<CycloNum> = (0..3).map(|i| CycloNum::root_of_unity(&k, i)).collect();
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);
    }

    #[test]
    fn rank_one_matrix_over_gaussian_field() {
        let k = f(4);
        let i = CycloNum::root_of_unity(&k, 1);
        let one = CycloNum::one(&k);
        let m = CycloMatrix::from_rows(&k, vec![vec![one.clone(), i.clone()], vec![i.clone(), -&one]]).unwrap();
        assert_eq!(m.rank(), 1);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).unwrap().iter().all(CycloNum::is_zero));
        assert!(!m.is_invertible());
        assert_eq!(m.inverse(), Err(CycloError::Singular));
    }

    #[test]
    fn inverse_round_trip() {
        let k = f(3);
        let z = CycloNum::root_of_unity(&k, 1);
        let m = CycloMatrix::from_rows(
            &k,
            vec![vec![CycloNum::one(&k), z.clone()], vec![z.clone(), CycloNum::from_integer(&k, 2)]],
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&m).unwrap().is_identity());
    }

    #[test]
    fn inconsistent_system_has_no_solution() {
        let k = f(1);
        let m = int_matrix(&k, &[&[1, 1], &[2, 2]]);
        let b = vec![CycloNum::from_integer(&k, 1), CycloNum::from_integer(&k, 3)];
        assert_eq!(m.solve(&b).unwrap(), None);
        assert!(m.solve(&b[..1]).is_err());
    }

    #[test]
    fn shape_errors() {
        let k = f(1);
        let a = int_matrix(&k, &[&[1, 2, 3]]);
        assert!(a.mul(&a).is_err());
        assert!(a.inverse().is_err());
        assert!(a.add(&a.transpose()).is_err());
    }

    #[test]
    fn direct_sum_and_trace() {
        let k = f(1);
        let a = int_matrix(&k, &[&[1, 2], &[3, 4]]);
        let b = int_matrix(&k, &[&[5]]);
        let s = a.direct_sum(&b);
        assert_eq!(s.rows(), 3);
        assert_eq!(s.trace(), CycloNum::from_integer(&k, 10));
        assert!(s.get(0, 2).is_zero());
    }

    #[test]
    fn json_form_is_nested_coefficient_strings() {
        let k = f(4);
        let m = CycloMatrix::diag(&k, &[CycloNum::one(&k), CycloNum::root_of_unity(&k, 1)]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"[["1/1,0/1","0/1,0/1"],["0/1,0/1","0/1,1/1"]]"#);
    }

    fn arb_matrix() -> impl Strategy<Value = CycloMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec((-2i64..3, 0i64..4), r * c).prop_map(move |entries| {
                let k = f(4);
                let mut it = entries.into_iter();
                CycloMatrix::from_fn(&k, r, c, |_, _| {
                    let (a, e) = it.next().unwrap();
                    &CycloNum::root_of_unity(&k, e) * &CycloNum::from_integer(&k, a)
                })
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let (r, p) = m.rref();
            let (rr, pp) = r.rref();
            prop_assert_eq!(&rr, &r);
            prop_assert_eq!(p, pp);
            prop_assert_eq!(m.rank(), r.rank());
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let ker = m.kernel();
            prop_assert_eq!(m.rank() + ker.len(), m.cols());
            for v in &ker {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(CycloNum::is_zero));
            }
        }
    }
}
