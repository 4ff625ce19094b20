//! Parsing of flag values against a built ring.

use std::sync::Arc;

use heisenrig::character::{certify_frobenius, AdditiveCharacter, Pairing};
use heisenrig::cyclo::{CycloMatrix, CycloNum};
use heisenrig::defect::PhaseFunction;
use heisenrig::filtration::GradedGeneratorSet;
use heisenrig::heisenberg::HeisenbergGroup;
use heisenrig::homspace::ModelSpec;
use heisenrig::ring::{FiniteRing, FreeModule};

use crate::CliError;

/// Splits on `sep` outside parentheses, so product elements like `(1, 2)`
/// survive comma separation.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn squash(text: &str) -> String {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

/// An element written as displayed (`t+1`, `(1, 2)`), as an integer `k`
/// meaning `k * 1`, or as a raw index `#i`.
pub fn parse_element(ring: &FiniteRing, text: &str) -> Result<usize, CliError> {
    let want = squash(text);
    let bad = || CliError::Input(format!("{text:?} is not an element of the ring"));
    if let Some(index) = want.strip_prefix('#') {
        return index.parse::<usize>().ok().filter(|&i| i < ring.size()).ok_or_else(bad);
    }
    if let Some(i) = (0..ring.size()).find(|&i| squash(&ring.format_elem(i)) == want) {
        return Ok(i);
    }
    let k: i64 = want.parse().map_err(|_| bad())?;
    let multiple = ring.scalar_idx(k.unsigned_abs(), ring.one());
    Ok(if k < 0 { ring.neg_idx(multiple) } else { multiple })
}

pub fn parse_pairing(ring: &Arc<FiniteRing>, n: usize, text: &str) -> Result<Pairing, CliError> {
    let rows: Vec<Vec<usize>> = split_top(text, ';')
        .into_iter()
        .map(|row| split_top(row, ',').into_iter().map(|e| parse_element(ring, e)).collect())
        .collect::<Result<_, _>>()?;
    let matrix = if rows.len() == 1 && rows[0].len() == 1 {
        let c = rows[0][0];
        (0..n).map(|i| (0..n).map(|j| if i == j { c } else { ring.zero() }).collect()).collect()
    } else {
        rows
    };
    if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(CliError::Input(format!("pairing must be {n}x{n} or a single entry")));
    }
    Pairing::new(ring, n, matrix).map_err(|e| CliError::Input(e.to_string()))
}

/// `None` for `auto`.
pub fn parse_character_tuple(text: &str) -> Result<Option<Vec<u64>>, CliError> {
    let t = text.trim();
    if t == "auto" {
        return Ok(None);
    }
    let inner = t.trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|_| CliError::Input(format!("bad character tuple {text:?}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// The requested character, or the first generating one for `auto`.
pub fn resolve_character(ring: &Arc<FiniteRing>, text: &str) -> Result<AdditiveCharacter, CliError> {
    match parse_character_tuple(text)? {
        Some(t) => AdditiveCharacter::new(ring, t).map_err(|e| CliError::Input(e.to_string())),
        None => certify_frobenius(ring)
            .generating
            .ok_or_else(|| CliError::Input("the ring has no generating character".into())),
    }
}

pub fn parse_models(text: &str, seed: u64) -> Result<Vec<ModelSpec>, CliError> {
    text.split(',')
        .map(|m| {
            let m = m.trim();
            if m == "conjugated" {
                return Ok(ModelSpec::Conjugated(seed));
            }
            ModelSpec::parse(m).ok_or_else(|| CliError::Input(format!("unknown model {m:?}")))
        })
        .collect()
}

fn ring_power_sum(module: &FreeModule, u: usize, k: u32) -> usize {
    let ring = module.ring();
    module.decode(u).into_iter().fold(ring.zero(), |acc, c| {
        let p = (0..k).fold(ring.one(), |p, _| ring.mul_idx(p, c));
        ring.add_idx(acc, p)
    })
}

pub fn parse_phase(pairing: &Pairing, text: &str) -> Result<PhaseFunction, CliError> {
    let module = pairing.module().clone();
    let ring = pairing.ring().clone();
    let vector = |s: &str| -> Result<usize, CliError> {
        let parts: Vec<usize> = split_top(s, ',').into_iter().map(|e| parse_element(&ring, e)).collect::<Result<_, _>>()?;
        if parts.len() != module.rank() {
            return Err(CliError::Input(format!("expected {} coordinates in {s:?}", module.rank())));
        }
        Ok(module.encode(&parts))
    };
    let t = text.trim();
    if t == "square" {
        return Ok(PhaseFunction::from_fn(module, ring.clone(), |u| pairing.eval(u, u)));
    }
    if let Some(k) = t.strip_prefix("power:") {
        let k: u32 = k.trim().parse().map_err(|_| CliError::Input(format!("bad exponent in {t:?}")))?;
        let m = module.clone();
        return Ok(PhaseFunction::from_fn(module, ring, move |u| ring_power_sum(&m, u, k)));
    }
    if let Some(b) = t.strip_prefix("linear:") {
        return Ok(PhaseFunction::linear(pairing, vector(b)?));
    }
    if let Some(c) = t.strip_prefix("const:") {
        let c = parse_element(&ring, c)?;
        return Ok(PhaseFunction::constant(module, ring, c));
    }
    if let Some(table) = t.strip_prefix("table:") {
        let values = split_top(table, ';').into_iter().map(|v| parse_element(&ring, v)).collect::<Result<Vec<_>, _>>()?;
        return PhaseFunction::new(module, ring, values).map_err(|e| CliError::Input(e.to_string()));
    }
    Err(CliError::Input(format!("unknown phase {t:?}")))
}

/// The FH set, or a JSON file of `[degree, operator]` pairs.
pub fn parse_gens(group: &HeisenbergGroup, text: &str) -> Result<GradedGeneratorSet, CliError> {
    if text == "fh" {
        return Ok(GradedGeneratorSet::fh(group));
    }
    let raw = std::fs::read_to_string(text).map_err(|e| CliError::Input(format!("{text}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&raw).map_err(|e| CliError::Input(format!("{text}: {e}")))?;
    let field = group.character().field().clone();
    let d = group.module().size();
    let bad = |what: &str| CliError::Input(format!("{text}: {what}"));
    let entries = value.as_array().ok_or_else(|| bad("expected a list"))?;
    let mut ops = Vec::new();
    for entry in entries {
        let pair = entry.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("expected [degree, operator]"))?;
        let deg = pair[0].as_u64().ok_or_else(|| bad("degree must be a non-negative integer"))? as usize;
        let op = match &pair[1] {
            serde_json::Value::String(name) => {
                let set = GradedGeneratorSet::symbolic(group, &[(deg, name.clone())]).map_err(|e| bad(&e.to_string()))?;
                set.operators()[0].1.clone()
            }
            serde_json::Value::Array(rows) => {
                let rows = rows
                    .iter()
                    .map(|r| {
                        r.as_array()
                            .ok_or_else(|| bad("matrix rows must be lists"))?
                            .iter()
                            .map(|x| {
                                let s = match x {
                                    serde_json::Value::String(s) => s.clone(),
                                    other => other.to_string(),
                                };
                                CycloNum::parse(&field, &s).map_err(|e| bad(&e.to_string()))
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                CycloMatrix::from_rows(&field, rows).map_err(|e| bad(&e.to_string()))?
            }
            _ => return Err(bad("operator must be a name or a matrix")),
        };
        ops.push((deg, op));
    }
    GradedGeneratorSet::new(&field, d, ops).map_err(|e| bad(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use heisenrig::ring::build_ring;

    #[test]
    fn elements_by_display_or_index() {
        let r = build_ring("F2[t]/(t^2)").unwrap();
        let t = parse_element(&r, "t").unwrap();
        assert_eq!(r.format_elem(t), "t");
        assert_eq!(parse_element(&r, "t + 1").unwrap(), r.add_idx(t, r.one()));
        assert_eq!(parse_element(&r, "#2").unwrap(), 2);
        assert_eq!(parse_element(&r, "3").unwrap(), r.one());
        assert!(parse_element(&r, "#9").is_err());
        assert!(parse_element(&r, "u").is_err());
        let prod = build_ring("Z/2 x Z/3").unwrap();
        assert_eq!(parse_element(&prod, "1").unwrap(), prod.one());
        assert_eq!(parse_element(&prod, "-1").unwrap(), parse_element(&prod, "(1, 2)").unwrap());
    }

    #[test]
    fn pairings() {
        let r = build_ring("Z/2").unwrap();
        let p = parse_pairing(&r, 2, "1").unwrap();
        assert_eq!(p.matrix(), &[vec![1, 0], vec![0, 1]]);
        let p = parse_pairing(&r, 2, "1,1;0,1").unwrap();
        assert_eq!(p.matrix(), &[vec![1, 1], vec![0, 1]]);
        assert!(parse_pairing(&r, 2, "1,1").is_err());
        let prod = build_ring("Z/2 x Z/3").unwrap();
        assert!(parse_pairing(&prod, 1, "(1, 2)").is_ok());
    }

    #[test]
    fn characters_and_models() {
        assert_eq!(parse_character_tuple("auto").unwrap(), None);
        assert_eq!(parse_character_tuple("(0,1)").unwrap(), Some(vec![0, 1]));
        assert!(parse_character_tuple("x").is_err());
        let models = parse_models("schrodinger,conjugated", 9).unwrap();
        assert_eq!(models, vec![ModelSpec::Schrodinger, ModelSpec::Conjugated(9)]);
        assert!(parse_models("nope", 0).is_err());
    }
}
