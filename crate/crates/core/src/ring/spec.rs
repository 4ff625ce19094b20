use std::fmt;

/// Abstract syntax of a ring specification.
///
/// Products are kept flat: `Product` never contains another `Product`, and a
/// single atom is never wrapped in a one-element product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    /// `Z/m` with `m >= 2`.
    IntMod(u64),
    /// `Fp[t]/(f)` with `f` monic over the prime field.
    PolyQuotient(PolySpec),
    /// `table{p=..;rank=..;mul=..}`: an explicit commutative algebra over `F_p`.
    Table(TableSpec),
    Product(Vec<RingSpec>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpec {
    pub p: u64,
    pub var: String,
    /// Coefficients of the modulus, lowest degree first. The last entry is 1.
    pub modulus: Vec<u64>,
}

impl PolySpec {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// Multiplication table of an `F_p`-algebra on a fixed additive basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableSpec {
    pub p: u64,
    pub rank: usize,
    /// `mul[i][j]` holds the coordinates of `b_i * b_j`, each reduced mod `p`.
    pub mul: Vec<Vec<Vec<u64>>>,
}

impl RingSpec {
    /// The atoms of this spec in product order.
    pub fn atoms(&self) -> Vec<&RingSpec> {
        match self {
            RingSpec::Product(parts) => parts.iter().collect(),
            other => vec![other],
        }
    }

    /// Builds a product, flattening nested products.
    pub fn product(parts: Vec<RingSpec>) -> RingSpec {
        let mut flat = Vec::new();
        for part in parts {
            match part {
                RingSpec::Product(inner) => flat.extend(inner),
                atom => flat.push(atom),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            RingSpec::Product(flat)
        }
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, var: &str, coeffs: &[u64]) -> fmt::Result {
    let mut first = true;
    for (deg, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !first {
            f.write_str("+")?;
        }
        first = false;
        match (deg, c) {
            (0, c) => write!(f, "{c}")?,
            (1, 1) => write!(f, "{var}")?,
            (1, c) => write!(f, "{c}*{var}")?,
            (d, 1) => write!(f, "{var}^{d}")?,
            (d, c) => write!(f, "{c}*{var}^{d}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::IntMod(m) => write!(f, "Z/{m}"),
            RingSpec::PolyQuotient(poly) => {
                write!(f, "F{}[{}]/(", poly.p, poly.var)?;
                write_poly(f, &poly.var, &poly.modulus)?;
                f.write_str(")")
            }
            RingSpec::Table(table) => {
                write!(f, "table{{p={};rank={};mul=", table.p, table.rank)?;
                for (i, row) in table.mul.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    for (j, coords) in row.iter().enumerate() {
                        if j > 0 {
                            f.write_str("|")?;
                        }
                        for (k, c) in coords.iter().enumerate() {
                            if k > 0 {
                                f.write_str(",")?;
                            }
                            write!(f, "{c}")?;
                        }
                    }
                }
                f.write_str("}")
            }
            RingSpec::Product(parts) => {
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    write!(f, "{part}")?;
                }
                Ok(())
            }
        }
    }
}
