use std::fmt;

use super::spec::{RingSpec, TableSpec};
use super::{RingError, DEFAULT_ELEMENT_CAP};

/// Largest ring for which [`FiniteRing::verify_axioms`] runs the full triple loop.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 256;

/// A ring element tagged with the identity of its ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    pub ring_id: u64,
    pub index: usize,
}

#[derive(Clone, Debug)]
enum Component {
    IntMod { m: u64 },
    Poly { p: u64, modulus: Vec<u64> },
    Table { p: u64, rank: usize, mul: Vec<Vec<u64>> },
}

impl Component {
    fn width(&self) -> usize {
        match self {
            Component::IntMod { .. } => 1,
            Component::Poly { modulus, .. } => modulus.len() - 1,
            Component::Table { rank, .. } => *rank,
        }
    }

    fn radix(&self) -> u64 {
        match self {
            Component::IntMod { m } => *m,
            Component::Poly { p, .. } | Component::Table { p, .. } => *p,
        }
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        match self {
            Component::IntMod { m } => vec![mul_mod(a[0], b[0], *m)],
            Component::Poly { p, modulus } => {
                let d = modulus.len() - 1;
                let mut prod = vec![0u64; 2 * d - 1];
                for (i, &ai) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
                    for (j, &bj) in b.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + mul_mod(ai, bj, *p)) % p;
                    }
                }
                for k in (d..prod.len()).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for j in 0..d {
                        let sub = mul_mod(c, modulus[j], *p);
                        prod[k - d + j] = (prod[k - d + j] + p - sub) % p;
                    }
                }
                prod.truncate(d);
                prod
            }
            Component::Table { p, rank, mul } => {
                let mut out = vec![0u64; *rank];
                for (i, &ai) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
                    for (j, &bj) in b.iter().enumerate().filter(|(_, &x)| x != 0) {
                        let w = mul_mod(ai, bj, *p);
                        for (o, &c) in out.iter_mut().zip(&mul[i * rank + j]) {
                            *o = (*o + mul_mod(w, c, *p)) % p;
                        }
                    }
                }
                out
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A finite commutative ring with mixed-radix element encoding.
///
/// Elements are indices in `0..size()`. The additive group is the direct sum of
/// cyclic groups `Z/radix[i]`, one per additive coordinate; an element's index is
/// `sum coord[i] * place[i]` with the first coordinate least significant.
#[derive(Clone)]
pub struct FiniteRing {
    spec: RingSpec,
    components: Vec<Component>,
    radices: Vec<u64>,
    place: Vec<usize>,
    size: usize,
    exponent: u64,
    one: usize,
    id: u64,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("spec", &self.spec.to_string())
            .field("size", &self.size)
            .finish()
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.spec == other.spec
    }
}

impl Eq for FiniteRing {}

impl FiniteRing {
    /// Builds the ring with the default element cap.
    pub fn build(spec: &RingSpec) -> Result<Self, RingError> {
        Self::build_with_cap(spec, DEFAULT_ELEMENT_CAP)
    }

    pub fn build_with_cap(spec: &RingSpec, cap: usize) -> Result<Self, RingError> {
        let mut components = Vec::new();
        for atom in spec.atoms() {
            components.push(match atom {
                RingSpec::IntMod(m) => Component::IntMod { m: *m },
                RingSpec::PolyQuotient(poly) => Component::Poly {
                    p: poly.p,
                    modulus: poly.modulus.clone(),
                },
                RingSpec::Table(table) => table_component(table),
                RingSpec::Product(_) => unreachable!("products are flattened"),
            });
        }
        let mut radices = Vec::new();
        for c in &components {
            radices.extend(std::iter::repeat_n(c.radix(), c.width()));
        }
        let mut size: u128 = 1;
        for &r in &radices {
            size *= r as u128;
            if size > cap as u128 {
                return Err(RingError::TooLarge {
                    size: radices.iter().map(|&r| r as f64).product::<f64>().to_string(),
                    cap,
                });
            }
        }
        let mut place = Vec::with_capacity(radices.len());
        let mut acc = 1usize;
        for &r in &radices {
            place.push(acc);
            acc *= r as usize;
        }
        let exponent = radices.iter().fold(1u64, |l, &r| l / gcd(l, r) * r);
        let canonical = spec.to_string();
        let id = canonical
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        let mut ring = FiniteRing {
            spec: spec.clone(),
            components,
            radices,
            place,
            size: size as usize,
            exponent,
            one: 0,
            id,
        };
        ring.one = ring.find_one()?;
        ring.check_tables()?;
        Ok(ring)
    }

    /// Multiplicative identity: the unit of each component, found by search for
    /// table components.
    fn find_one(&self) -> Result<usize, RingError> {
        let mut coords = Vec::with_capacity(self.radices.len());
        for comp in &self.components {
            match comp {
                Component::IntMod { .. } => coords.push(1),
                Component::Poly { modulus, .. } => {
                    coords.push(1);
                    coords.extend(std::iter::repeat_n(0, modulus.len() - 2));
                }
                Component::Table { p, rank, .. } => {
                    let count = (*p as usize).pow(*rank as u32);
                    let basis: Vec<Vec<u64>> = (0..*rank)
                        .map(|i| (0..*rank).map(|j| (i == j) as u64).collect())
                        .collect();
                    let found = (0..count).map(|idx| digits(idx, *p, *rank)).find(|e| {
                        basis.iter().all(|b| comp.mul(e, b) == *b)
                    });
                    match found {
                        Some(e) => coords.extend(e),
                        None => {
                            return Err(RingError::TableAxiom(
                                "multiplication table has no identity element".into(),
                            ))
                        }
                    }
                }
            }
        }
        Ok(self.encode(&coords))
    }

    /// Commutativity and associativity of table components on basis pairs and
    /// triples; multiplication is bilinear, so this covers all elements.
    fn check_tables(&self) -> Result<(), RingError> {
        for comp in &self.components {
            let Component::Table { rank, .. } = comp else { continue };
            let e = |i: usize| -> Vec<u64> { (0..*rank).map(|j| (i == j) as u64).collect() };
            for i in 0..*rank {
                for j in 0..*rank {
                    if comp.mul(&e(i), &e(j)) != comp.mul(&e(j), &e(i)) {
                        return Err(RingError::TableAxiom(format!(
                            "b{i}*b{j} != b{j}*b{i}: table ring must be commutative"
                        )));
                    }
                    for k in 0..*rank {
                        let left = comp.mul(&comp.mul(&e(i), &e(j)), &e(k));
                        let right = comp.mul(&e(i), &comp.mul(&e(j), &e(k)));
                        if left != right {
                            return Err(RingError::TableAxiom(format!(
                                "(b{i}*b{j})*b{k} != b{i}*(b{j}*b{k}): table is not associative"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Orders of the additive coordinates.
    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    /// Additive exponent: the lcm of the additive basis orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Additive basis as `(generator index, order)` pairs.
    pub fn additive_basis(&self) -> Vec<(usize, u64)> {
        self.place.iter().copied().zip(self.radices.iter().copied()).collect()
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn coords(&self, index: usize) -> Vec<u64> {
        self.radices
            .iter()
            .zip(&self.place)
            .map(|(&r, &pl)| ((index / pl) as u64) % r)
            .collect()
    }

    pub fn encode(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.radices)
            .zip(&self.place)
            .map(|((&c, &r), &pl)| (c % r) as usize * pl)
            .sum()
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&r, &pl) in self.radices.iter().zip(&self.place) {
            let ca = (a / pl) as u64 % r;
            let cb = (b / pl) as u64 % r;
            out += ((ca + cb) % r) as usize * pl;
        }
        out
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        let mut out = 0;
        for (&r, &pl) in self.radices.iter().zip(&self.place) {
            let ca = (a / pl) as u64 % r;
            out += ((r - ca) % r) as usize * pl;
        }
        out
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        let ca = self.coords(a);
        let cb = self.coords(b);
        let mut out = Vec::with_capacity(ca.len());
        let mut offset = 0;
        for comp in &self.components {
            let w = comp.width();
            out.extend(comp.mul(&ca[offset..offset + w], &cb[offset..offset + w]));
            offset += w;
        }
        self.encode(&out)
    }

    /// `k * a` for an integer `k`, i.e. repeated addition.
    pub fn scalar_idx(&self, k: u64, a: usize) -> usize {
        let coords: Vec<u64> = self
            .coords(a)
            .iter()
            .zip(&self.radices)
            .map(|(&c, &r)| mul_mod(c, k % r, r))
            .collect();
        self.encode(&coords)
    }

    /// Additive order of an element.
    pub fn additive_order(&self, a: usize) -> u64 {
        self.coords(a)
            .iter()
            .zip(&self.radices)
            .map(|(&c, &r)| r / gcd(c, r))
            .fold(1, |l, o| l / gcd(l, o) * o)
    }

    pub fn elem(&self, index: usize) -> Result<RingElem, RingError> {
        if index >= self.size {
            return Err(RingError::ElementOutOfRange { index, size: self.size });
        }
        Ok(RingElem { ring_id: self.id, index })
    }

    fn check(&self, a: RingElem) -> Result<usize, RingError> {
        if a.ring_id != self.id {
            return Err(RingError::MixedRings);
        }
        if a.index >= self.size {
            return Err(RingError::ElementOutOfRange { index: a.index, size: self.size });
        }
        Ok(a.index)
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> Result<RingElem, RingError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        self.elem(self.add_idx(a, b))
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> Result<RingElem, RingError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        self.elem(self.mul_idx(a, b))
    }

    pub fn neg(&self, a: RingElem) -> Result<RingElem, RingError> {
        let a = self.check(a)?;
        self.elem(self.neg_idx(a))
    }

    pub fn zero_elem(&self) -> RingElem {
        RingElem { ring_id: self.id, index: 0 }
    }

    pub fn one_elem(&self) -> RingElem {
        RingElem { ring_id: self.id, index: self.one }
    }

    pub fn enumerate_elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        (0..self.size).map(move |index| RingElem { ring_id: self.id, index })
    }

    /// `{ r*s : s in R }` as sorted indices.
    pub fn principal_ideal_idx(&self, r: usize) -> Vec<usize> {
        let mut seen = vec![false; self.size];
        for s in 0..self.size {
            seen[self.mul_idx(r, s)] = true;
        }
        (0..self.size).filter(|&i| seen[i]).collect()
    }

    pub fn principal_ideal(&self, r: RingElem) -> Result<Vec<RingElem>, RingError> {
        let r = self.check(r)?;
        Ok(self
            .principal_ideal_idx(r)
            .into_iter()
            .map(|index| RingElem { ring_id: self.id, index })
            .collect())
    }

    /// Exhaustive check of the commutative ring axioms over all element pairs and
    /// triples. Refuses rings larger than [`EXHAUSTIVE_AXIOM_LIMIT`].
    pub fn verify_axioms(&self) -> Result<(), RingError> {
        if self.size > EXHAUSTIVE_AXIOM_LIMIT {
            return Err(RingError::TooLarge {
                size: self.size.to_string(),
                cap: EXHAUSTIVE_AXIOM_LIMIT,
            });
        }
        let n = self.size;
        let fail = |what: &str, items: &[usize]| {
            Err(RingError::TableAxiom(format!("{what} fails at {items:?}")))
        };
        for a in 0..n {
            if self.add_idx(self.neg_idx(a), a) != 0 {
                return fail("additive inverse", &[a]);
            }
            if self.mul_idx(self.one, a) != a || self.add_idx(0, a) != a {
                return fail("identity", &[a]);
            }
            for b in 0..n {
                if self.mul_idx(a, b) != self.mul_idx(b, a) {
                    return fail("commutativity", &[a, b]);
                }
                if self.add_idx(a, b) != self.add_idx(b, a) {
                    return fail("additive commutativity", &[a, b]);
                }
                for c in 0..n {
                    let ab = self.mul_idx(a, b);
                    if self.mul_idx(ab, c) != self.mul_idx(a, self.mul_idx(b, c)) {
                        return fail("associativity", &[a, b, c]);
                    }
                    let left = self.mul_idx(a, self.add_idx(b, c));
                    let right = self.add_idx(ab, self.mul_idx(a, c));
                    if left != right {
                        return fail("distributivity", &[a, b, c]);
                    }
                }
            }
        }
        Ok(())
    }

    /// Human-readable rendering of an element.
    pub fn format_elem(&self, index: usize) -> String {
        let coords = self.coords(index);
        let mut parts = Vec::new();
        let mut offset = 0;
        for (atom, comp) in self.spec.atoms().into_iter().zip(&self.components) {
            let w = comp.width();
            let c = &coords[offset..offset + w];
            offset += w;
            parts.push(match (atom, comp) {
                (RingSpec::PolyQuotient(poly), _) => format_poly(&poly.var, c),
                (_, Component::Table { .. }) => {
                    let terms: Vec<String> = c
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(|(i, &x)| if x == 1 { format!("b{i}") } else { format!("{x}*b{i}") })
                        .collect();
                    if terms.is_empty() {
                        "0".into()
                    } else {
                        terms.join("+")
                    }
                }
                _ => c[0].to_string(),
            });
        }
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            format!("({})", parts.join(", "))
        }
    }
}

fn format_poly(var: &str, coeffs: &[u64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(d, &c)| match (d, c) {
            (0, c) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}{var}"),
            (d, 1) => format!("{var}^{d}"),
            (d, c) => format!("{c}{var}^{d}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn digits(mut idx: usize, p: u64, width: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(width);
    for _ in 0..width {
        out.push((idx as u64) % p);
        idx /= p as usize;
    }
    out
}

fn table_component(table: &TableSpec) -> Component {
    let mut mul = Vec::with_capacity(table.rank * table.rank);
    for row in &table.mul {
        for coords in row {
            mul.push(coords.iter().map(|c| c % table.p).collect());
        }
    }
    Component::Table {
        p: table.p,
        rank: table.rank,
        mul,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_ring_spec;

    fn ring(text: &str) -> FiniteRing {
        FiniteRing::build(&parse_ring_spec(text).unwrap()).unwrap()
    }

    #[test]
    fn cyclic_ring_basis() {
        let r = ring("Z/6");
        assert_eq!(r.size(), 6);
        assert_eq!(r.additive_basis(), vec![(1, 6)]);
        assert_eq!(r.exponent(), 6);
    }

    #[test]
    fn dual_numbers_basis() {
        let r = ring("F2[t]/(t^2)");
        assert_eq!(r.size(), 4);
        // generators 1 and t
        assert_eq!(r.additive_basis(), vec![(1, 2), (2, 2)]);
        assert_eq!(r.format_elem(2), "t");
        assert_eq!(r.exponent(), 2);
    }

    #[test]
    fn table_ring_from_relations() {
        let r = ring("table{p=2;rank=3;mul=1,0,0|0,1,0|0,0,1;0,1,0|0,0,0|0,0,0;0,0,1|0,0,0|0,0,0}");
        assert_eq!(r.size(), 8);
        assert_eq!(r.exponent(), 2);
        assert_eq!(r.one(), 1);
        let (x, y) = (2, 4);
        assert_eq!(r.mul_idx(x, x), 0);
        assert_eq!(r.mul_idx(x, y), 0);
        assert_eq!(r.mul_idx(r.one(), y), y);
        r.verify_axioms().unwrap();
    }

    #[test]
    fn table_identity_need_not_be_first_basis_vector() {
        // basis (x, 1) of F2[x]/(x^2)
        let r = ring("table{p=2;rank=2;mul=0,0|1,0;1,0|0,1}");
        assert_eq!(r.coords(r.one()), vec![0, 1]);
        r.verify_axioms().unwrap();
    }

    #[test]
    fn broken_tables_are_rejected() {
        let noncomm = parse_ring_spec("table{p=2;rank=2;mul=1,0|0,1;0,0|0,1}").unwrap();
        assert!(matches!(FiniteRing::build(&noncomm), Err(RingError::TableAxiom(_))));
        let no_one = parse_ring_spec("table{p=2;rank=1;mul=0}").unwrap();
        assert!(matches!(FiniteRing::build(&no_one), Err(RingError::TableAxiom(_))));
    }

    #[test]
    fn modular_and_polynomial_arithmetic() {
        let z4 = ring("Z/4");
        let three = z4.elem(3).unwrap();
        assert_eq!(z4.add(three, three).unwrap().index, 2);

        let dual = ring("F2[t]/(t^2)");
        let t = dual.elem(2).unwrap();
        assert_eq!(dual.mul(t, t).unwrap().index, 0);

        let f4 = ring("F2[t]/(t^2+t+1)");
        let t = f4.elem(2).unwrap();
        // t*t = t + 1, coordinates (1, 1)
        assert_eq!(f4.mul(t, t).unwrap().index, 3);
    }

    #[test]
    fn mixed_ring_operands_are_errors() {
        let a = ring("Z/4");
        let b = ring("Z/5");
        assert!(matches!(a.add(a.one_elem(), b.one_elem()), Err(RingError::MixedRings)));
        // same spec, same identity
        let a2 = ring("Z/4");
        assert!(a.add(a.one_elem(), a2.one_elem()).is_ok());
    }

    #[test]
    fn principal_ideals() {
        let z4 = ring("Z/4");
        let ideal: Vec<usize> = z4.principal_ideal(z4.elem(2).unwrap()).unwrap().iter().map(|e| e.index).collect();
        assert_eq!(ideal, vec![0, 2]);
        let dual = ring("F2[t]/(t^2)");
        assert_eq!(dual.principal_ideal_idx(2), vec![0, 2]);
        let z6 = ring("Z/6");
        assert_eq!(z6.principal_ideal_idx(1).len(), 6);
        assert_eq!(z6.principal_ideal_idx(0), vec![0]);
    }

    #[test]
    fn size_cap_is_enforced() {
        let spec = parse_ring_spec("Z/300 x Z/300").unwrap();
        assert!(matches!(FiniteRing::build(&spec), Err(RingError::TooLarge { .. })));
        assert!(FiniteRing::build_with_cap(&spec, 90_000).is_ok());
        assert!(matches!(ring("Z/300").verify_axioms(), Err(RingError::TooLarge { .. })));
    }

    #[test]
    fn axioms_hold_on_small_rings() {
        for text in [
            "Z/2", "Z/4", "Z/6", "Z/8", "F2[t]/(t^2)", "F2[t]/(t^2+t+1)", "F3[t]/(t^2)",
            "F2[t]/(t^3+t+1)", "Z/2 x Z/3", "Z/2 x F2[t]/(t^2)", "F2[u]/(u^3)", "Z/4 x Z/4",
        ] {
            let r = ring(text);
            r.verify_axioms().unwrap_or_else(|e| panic!("{text}: {e}"));
            let mut seen = vec![false; r.size()];
            for e in r.enumerate_elements() {
                assert!(!seen[e.index]);
                seen[e.index] = true;
                assert_eq!(r.encode(&r.coords(e.index)), e.index);
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
