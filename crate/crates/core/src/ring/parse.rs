//! Recursive-descent parser for the ring-spec language.
//!
//! ```text
//! ring     := atom ( "x" atom )*
//! atom     := "Z/" int
//!           | "F" prime "[" ident "]/(" poly ")"
//!           | "table{" "p=" prime ";" "rank=" int ";" "mul=" rows "}"
//! poly     := term ( "+" term )*
//! term     := int | [int ["*"]] ident ["^" int]
//! rows     := row ( ";" row )*          -- one row per basis element b_i
//! row      := coords ( "|" coords )*    -- coordinates of b_i * b_j
//! coords   := int ( "," int )*
//! ```
//!
//! Whitespace is ignored between tokens.

use std::collections::BTreeMap;

use super::spec::{PolySpec, RingSpec, TableSpec};
use super::RingError;

/// Parses ring-spec text into its syntax tree.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec, RingError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let spec = parser.ring()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(spec)
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn line_col(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in self.chars.iter().take(pos) {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn syntax(&self, message: &str) -> RingError {
        self.syntax_at(self.pos, message)
    }

    fn syntax_at(&self, pos: usize, message: &str) -> RingError {
        let (line, column) = self.line_col(pos);
        RingError::Syntax {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), RingError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{c}`")))
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<(), RingError> {
        for c in word.chars() {
            self.expect(c)?;
        }
        Ok(())
    }

    fn int(&mut self) -> Result<(u64, usize), RingError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.chars.get(self.pos).and_then(|c| c.to_digit(10)) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as u64))
                .ok_or_else(|| self.syntax_at(start, "integer literal too large"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected an integer"));
        }
        Ok((value, start))
    }

    fn ident(&mut self) -> Result<String, RingError> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_alphabetic() => self.pos += 1,
            _ => return Err(self.syntax("expected an identifier")),
        }
        while matches!(self.chars.get(self.pos), Some(c) if c.is_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn ring(&mut self) -> Result<RingSpec, RingError> {
        let mut parts = vec![self.atom()?];
        while self.eat('x') {
            parts.push(self.atom()?);
        }
        Ok(RingSpec::product(parts))
    }

    fn atom(&mut self) -> Result<RingSpec, RingError> {
        match self.peek() {
            Some('Z') => {
                self.pos += 1;
                self.expect('/')?;
                let (m, at) = self.int()?;
                if m < 2 {
                    let (line, column) = self.line_col(at);
                    return Err(RingError::ModulusTooSmall { m, line, column });
                }
                Ok(RingSpec::IntMod(m))
            }
            Some('F') => {
                self.pos += 1;
                let p = self.prime()?;
                self.expect('[')?;
                let var = self.ident()?;
                self.expect(']')?;
                self.expect('/')?;
                self.expect('(')?;
                let poly_start = self.pos;
                let modulus = self.poly(p, &var)?;
                self.expect(')')?;
                let (line, column) = self.line_col(poly_start);
                match modulus.last() {
                    None => return Err(RingError::ConstantModulus { line, column }),
                    Some(&lead) if lead != 1 => {
                        return Err(RingError::NotMonic { line, column });
                    }
                    _ => {}
                }
                if modulus.len() < 2 {
                    return Err(RingError::ConstantModulus { line, column });
                }
                Ok(RingSpec::PolyQuotient(PolySpec { p, var, modulus }))
            }
            Some('t') => self.table(),
            _ => Err(self.syntax("expected `Z/`, `F<p>[..]/(..)` or `table{`")),
        }
    }

    fn prime(&mut self) -> Result<u64, RingError> {
        let (p, at) = self.int()?;
        if !is_prime(p) {
            let (line, column) = self.line_col(at);
            return Err(RingError::NotPrime { p, line, column });
        }
        Ok(p)
    }

    /// Parses a polynomial and returns its coefficients reduced mod `p`, lowest
    /// degree first, with trailing zeros stripped.
    fn poly(&mut self, p: u64, var: &str) -> Result<Vec<u64>, RingError> {
        let mut terms: BTreeMap<u64, u64> = BTreeMap::new();
        loop {
            let (coeff, degree) = self.term(var)?;
            let slot = terms.entry(degree).or_insert(0);
            *slot = (*slot + coeff % p) % p;
            if !self.eat('+') {
                break;
            }
        }
        let top = terms
            .iter()
            .rev()
            .find(|(_, &c)| c != 0)
            .map(|(&d, _)| d as usize);
        let Some(top) = top else {
            return Ok(Vec::new());
        };
        let mut coeffs = vec![0u64; top + 1];
        for (d, c) in terms {
            if (d as usize) <= top {
                coeffs[d as usize] = c;
            }
        }
        Ok(coeffs)
    }

    fn term(&mut self, var: &str) -> Result<(u64, u64), RingError> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => Some(self.int()?.0),
            _ => None,
        };
        if let Some(c0) = coeff.filter(|_| !self.eat('*')) {
            // a bare constant unless an identifier follows directly
            match self.peek() {
                Some(c) if c.is_alphabetic() => {}
                _ => return Ok((c0, 0)),
            }
        }
        let at = self.pos;
        let name = self.ident()?;
        if name != var {
            return Err(self.syntax_at(at, &format!("unknown variable `{name}`, expected `{var}`")));
        }
        let degree = if self.eat('^') { self.int()?.0 } else { 1 };
        Ok((coeff.unwrap_or(1), degree))
    }

    fn table(&mut self) -> Result<RingSpec, RingError> {
        let start = self.pos;
        self.expect_word("table")?;
        self.expect('{')?;
        self.expect('p')?;
        self.expect('=')?;
        let p = self.prime()?;
        self.expect(';')?;
        self.expect_word("rank")?;
        self.expect('=')?;
        let (rank, rank_at) = self.int()?;
        if rank == 0 {
            return Err(self.syntax_at(rank_at, "table rank must be at least 1"));
        }
        let rank = rank as usize;
        self.expect(';')?;
        self.expect_word("mul")?;
        self.expect('=')?;
        let mut rows = Vec::new();
        loop {
            let mut row = Vec::new();
            loop {
                let mut coords = vec![self.int()?.0 % p];
                while self.eat(',') {
                    coords.push(self.int()?.0 % p);
                }
                row.push(coords);
                if !self.eat('|') {
                    break;
                }
            }
            rows.push(row);
            if !self.eat(';') {
                break;
            }
        }
        self.expect('}')?;
        let shape_ok = rows.len() == rank
            && rows
                .iter()
                .all(|row| row.len() == rank && row.iter().all(|c| c.len() == rank));
        if !shape_ok {
            let (line, column) = self.line_col(start);
            return Err(RingError::TableShape {
                line,
                column,
                message: format!("multiplication table must be {rank} rows of {rank} products with {rank} coordinates each"),
            });
        }
        Ok(RingSpec::Table(TableSpec { p, rank, mul: rows }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_modular_atom() {
        assert_eq!(parse_ring_spec("Z/4").unwrap(), RingSpec::IntMod(4));
        assert_eq!(parse_ring_spec("  Z / 12 ").unwrap(), RingSpec::IntMod(12));
    }

    #[test]
    fn polynomial_quotient_atom() {
        let spec = parse_ring_spec("F2[t]/(t^2+t+1)").unwrap();
        assert_eq!(
            spec,
            RingSpec::PolyQuotient(PolySpec {
                p: 2,
                var: "t".into(),
                modulus: vec![1, 1, 1]
            })
        );
        // coefficients reduce mod p and like terms merge
        let spec = parse_ring_spec("F3[u]/(u^2 + 4 + 2*u + u)").unwrap();
        let RingSpec::PolyQuotient(poly) = spec else { panic!() };
        assert_eq!(poly.modulus, vec![1, 0, 1]);
    }

    #[test]
    fn products_flatten() {
        let spec = parse_ring_spec("Z/2 x Z/3 x F2[x]/(x^2)").unwrap();
        assert_eq!(spec.atoms().len(), 3);
        let spec = parse_ring_spec("Z/2xZ/3").unwrap();
        assert_eq!(spec, RingSpec::Product(vec![RingSpec::IntMod(2), RingSpec::IntMod(3)]));
    }

    #[test]
    fn table_atom() {
        let text = "table{p=2;rank=3;mul=1,0,0|0,1,0|0,0,1;0,1,0|0,0,0|0,0,0;0,0,1|0,0,0|0,0,0}";
        let RingSpec::Table(table) = parse_ring_spec(text).unwrap() else { panic!() };
        assert_eq!(table.rank, 3);
        assert_eq!(table.mul[1][0], vec![0, 1, 0]);
        assert_eq!(table.mul[2][2], vec![0, 0, 0]);
    }

    #[test]
    fn modulus_below_two_is_rejected() {
        assert!(matches!(
            parse_ring_spec("Z/0"),
            Err(RingError::ModulusTooSmall { m: 0, line: 1, column: 3 })
        ));
        assert!(matches!(parse_ring_spec("Z/1"), Err(RingError::ModulusTooSmall { .. })));
    }

    #[test]
    fn non_prime_characteristic_is_rejected() {
        assert!(matches!(
            parse_ring_spec("F4[t]/(t^2)"),
            Err(RingError::NotPrime { p: 4, line: 1, column: 2 })
        ));
    }

    #[test]
    fn non_monic_modulus_is_rejected() {
        assert!(matches!(parse_ring_spec("F3[t]/(2*t^2+1)"), Err(RingError::NotMonic { .. })));
        assert!(matches!(parse_ring_spec("F3[t]/(3*t^2)"), Err(RingError::ConstantModulus { .. })));
        assert!(matches!(parse_ring_spec("F3[t]/(1)"), Err(RingError::ConstantModulus { .. })));
    }

    #[test]
    fn syntax_errors_report_line_and_column() {
        match parse_ring_spec("Z/4 x\n  Q/3") {
            Err(RingError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_ring_spec("F2[t]/(s^2)") {
            Err(RingError::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 8)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_ring_spec("Z/4 Z/2"), Err(RingError::Syntax { .. })));
        assert!(matches!(
            parse_ring_spec("table{p=2;rank=2;mul=1,0|0,1}"),
            Err(RingError::TableShape { .. })
        ));
    }

    #[test]
    fn printing_round_trips_up_to_whitespace() {
        for text in [
            "Z/4",
            "F2[t]/(t^2+t+1)",
            "F5[y]/(y^3+2*y+4)",
            "Z/2 x Z/3",
            "table{p=2;rank=3;mul=1,0,0|0,1,0|0,0,1;0,1,0|0,0,0|0,0,0;0,0,1|0,0,0|0,0,0}",
        ] {
            let printed = parse_ring_spec(text).unwrap().to_string();
            let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
            assert_eq!(strip(&printed), strip(text));
        }
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
