//! Exact arithmetic in the cyclotomic field `Q(zeta_m)` and dense linear
//! algebra over it.
//!
//! Elements are residues modulo the `m`-th cyclotomic polynomial with rational
//! coefficients in the power basis `1, zeta, ..., zeta^(phi(m)-1)`.

mod matrix;
mod poly;
mod subspace;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use matrix::CycloMatrix;
pub use poly::cyclotomic_poly;
pub use subspace::Subspace;

/// Largest supported conductor.
pub const MAX_CONDUCTOR: u64 = 4096;

/// Conductors up to this bound keep a table of all `m` roots of unity.
const ROOT_TABLE_LIMIT: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operands live in different cyclotomic fields (conductors {0} and {1})")]
    FieldMismatch(u64, u64),
    #[error("conductor {0} outside the supported range 1..=4096")]
    BadConductor(u64),
    #[error("cannot parse cyclotomic number `{0}`")]
    Parse(String),
}

/// The cyclotomic field `Q(zeta_m)`.
pub struct CycloField {
    m: u64,
    phi: Vec<i64>,
    phi_q: Vec<BigRational>,
    degree: usize,
    /// `zeta^k mod Phi_m` for `k` in `degree..2*degree-1`, used for reduction.
    high_powers: Vec<Vec<BigRational>>,
    roots: OnceLock<Vec<Vec<BigRational>>>,
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.m)
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl Eq for CycloField {}

fn field_cache() -> &'static Mutex<HashMap<u64, Arc<CycloField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CycloField {
    /// The field of conductor `m`; instances are shared per conductor.
    pub fn new(m: u64) -> Result<Arc<CycloField>, CycloError> {
        if m == 0 || m > MAX_CONDUCTOR {
            return Err(CycloError::BadConductor(m));
        }
        let mut cache = field_cache().lock().unwrap();
        if let Some(field) = cache.get(&m) {
            return Ok(field.clone());
        }
        let phi = cyclotomic_poly(m);
        let degree = phi.len() - 1;
        let phi_q = poly::to_rational(&phi);
        // X^degree = -(phi_0 + ... + phi_{d-1} X^{d-1})
        let mut high_powers = Vec::new();
        let mut cur: Vec<BigRational> = phi_q[..degree].iter().map(|c| -c).collect();
        for _ in degree..(2 * degree).saturating_sub(1) {
            high_powers.push(cur.clone());
            cur = shift_reduce(&cur, &phi_q);
        }
        let field = Arc::new(CycloField {
            m,
            phi,
            phi_q,
            degree,
            high_powers,
            roots: OnceLock::new(),
        });
        cache.insert(m, field.clone());
        Ok(field)
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    /// Euler phi of the conductor.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Phi_m`, lowest degree first.
    pub fn modulus(&self) -> &[i64] {
        &self.phi
    }

    fn root_coeffs(&self, k: u64) -> Vec<BigRational> {
        let k = k % self.m;
        if self.m <= ROOT_TABLE_LIMIT {
            let table = self.roots.get_or_init(|| {
                let mut out = Vec::with_capacity(self.m as usize);
                let mut cur = vec![BigRational::one()];
                for _ in 0..self.m {
                    let mut c = cur.clone();
                    poly::trim(&mut c);
                    out.push(c);
                    cur = shift_reduce(&cur, &self.phi_q);
                }
                out
            });
            return table[k as usize].clone();
        }
        let mut cur = vec![BigRational::one()];
        for _ in 0..k {
            cur = shift_reduce(&cur, &self.phi_q);
        }
        poly::trim(&mut cur);
        cur
    }
}

/// Multiplies a reduced residue by `X` and reduces again.
fn shift_reduce(v: &[BigRational], phi: &[BigRational]) -> Vec<BigRational> {
    let d = phi.len() - 1;
    let mut out = vec![BigRational::zero(); d];
    let mut padded = v.to_vec();
    padded.resize(d, BigRational::zero());
    let top = padded[d - 1].clone();
    for i in (1..d).rev() {
        out[i] = padded[i - 1].clone();
    }
    if !top.is_zero() {
        for i in 0..d {
            out[i] -= &top * &phi[i];
        }
    }
    out
}

/// An element of `Q(zeta_m)`.
///
/// The coefficient vector is stored with trailing zeros removed, so the zero
/// element holds no coefficients. Equality is coefficient-wise.
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CycloField>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.m == other.field.m && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNum {}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl CycloNum {
    fn from_raw(field: &Arc<CycloField>, mut coeffs: Vec<BigRational>) -> CycloNum {
        poly::trim(&mut coeffs);
        CycloNum { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Arc<CycloField>) -> CycloNum {
        CycloNum { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Arc<CycloField>) -> CycloNum {
        Self::from_integer(field, 1)
    }

    pub fn from_integer(field: &Arc<CycloField>, n: i64) -> CycloNum {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(field: &Arc<CycloField>, q: BigRational) -> CycloNum {
        Self::from_raw(field, vec![q])
    }

    /// Builds `sum coeffs[i] * zeta^i`, reducing modulo `Phi_m`.
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: Vec<BigRational>) -> CycloNum {
        let d = field.degree;
        if coeffs.len() <= d {
            return Self::from_raw(field, coeffs);
        }
        let (_, rem) = poly::divrem(&coeffs, &field.phi_q);
        Self::from_raw(field, rem)
    }

    /// `zeta_m^k`, with `k` taken mod `m`.
    pub fn root_of_unity(field: &Arc<CycloField>, k: i64) -> CycloNum {
        let m = field.m as i64;
        let k = k.rem_euclid(m) as u64;
        CycloNum { field: field.clone(), coeffs: field.root_coeffs(k) }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// Full coefficient vector of length `phi(m)`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        let mut out = self.coeffs.clone();
        out.resize(self.field.degree, BigRational::zero());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Returns the value as a rational when it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn same_field(&self, other: &CycloNum) {
        assert!(
            self.field.m == other.field.m,
            "cyclotomic conductors differ: {} vs {}",
            self.field.m,
            other.field.m
        );
    }

    /// Checked addition.
    pub fn try_add(&self, other: &CycloNum) -> Result<CycloNum, CycloError> {
        if self.field.m != other.field.m {
            return Err(CycloError::FieldMismatch(self.field.m, other.field.m));
        }
        Ok(self + other)
    }

    /// Checked multiplication.
    pub fn try_mul(&self, other: &CycloNum) -> Result<CycloNum, CycloError> {
        if self.field.m != other.field.m {
            return Err(CycloError::FieldMismatch(self.field.m, other.field.m));
        }
        Ok(self * other)
    }

    pub fn scale(&self, q: &BigRational) -> CycloNum {
        if q.is_zero() {
            return CycloNum::zero(&self.field);
        }
        CycloNum { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Phi_m`.
    pub fn inv(&self) -> Result<CycloNum, CycloError> {
        if self.is_zero() {
            return Err(CycloError::ZeroInverse);
        }
        if self.coeffs.len() == 1 {
            return Ok(Self::from_rational(&self.field, self.coeffs[0].recip()));
        }
        let inv = poly::inverse_mod(&self.coeffs, &self.field.phi_q).ok_or(CycloError::ZeroInverse)?;
        Ok(Self::from_raw(&self.field, inv))
    }

    /// Complex conjugation `zeta -> zeta^(m-1)`.
    pub fn conj(&self) -> CycloNum {
        let m = self.field.m as i64;
        let mut acc = CycloNum::zero(&self.field);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &CycloNum::root_of_unity(&self.field, m - k as i64).scale(c);
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> CycloNum {
        let mut base = self.clone();
        let mut acc = CycloNum::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// If this number is `zeta_m^k` for some `k`, returns that `k`.
    pub fn root_exponent(&self) -> Option<u64> {
        let m = self.field.m;
        (0..m).find(|&k| self.coeffs == self.field.root_coeffs(k))
    }

    /// Parses the `"c0/d0,c1/d1,..."` serialization.
    pub fn parse(field: &Arc<CycloField>, text: &str) -> Result<CycloNum, CycloError> {
        let err = || CycloError::Parse(text.to_string());
        let mut coeffs = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let (num, den) = match part.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (part, "1"),
            };
            let num: BigInt = num.parse().map_err(|_| err())?;
            let den: BigInt = den.parse().map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            coeffs.push(BigRational::new(num, den));
        }
        if coeffs.len() > field.degree {
            return Err(err());
        }
        Ok(Self::from_raw(field, coeffs))
    }

    /// Human-readable form such as `1 - 2*z^3` (with `z = zeta_m`).
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

/// The canonical serialization `"c0/d0,c1/d1,..."` over all `phi(m)` coefficients.
impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}/{}", c.numer(), c.denom())?;
        }
        Ok(())
    }
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        self.same_field(rhs);
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        CycloNum::from_raw(&self.field, coeffs)
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self + &(-rhs)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        self.same_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return CycloNum::zero(&self.field);
        }
        if self.coeffs.len() == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.coeffs.len() == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let d = self.field.degree;
        let mut prod = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                prod[i + j] += a * b;
            }
        }
        if prod.len() > d {
            let high = prod.split_off(d);
            for (k, c) in high.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (slot, r) in prod.iter_mut().zip(&self.field.high_powers[k]) {
                    if !r.is_zero() {
                        *slot += c * r;
                    }
                }
            }
        }
        CycloNum::from_raw(&self.field, prod)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);
