//! Vertex assignments such as `a:3, b:-2, c:7/2`; unlisted vertices get 0.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::HashMap;
use thiserror::Error;

/// Longest accepted numerator or denominator, in digits.
pub const MAX_DIGITS: usize = 400;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` is assigned twice")]
    Duplicate(String),
    #[error("zero denominator for `{0}`")]
    ZeroDenominator(String),
}

fn integer(text: &str, pos: usize, signed: bool) -> Result<BigInt, AssignError> {
    let body = if signed { text.strip_prefix(['-', '+']).unwrap_or(text) } else { text };
    if body.is_empty() || body.len() > MAX_DIGITS || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(AssignError::Syntax { pos, msg: format!("`{text}` is not an integer") });
    }
    Ok(text.parse().expect("validated digits"))
}

/// Parses `id:value` pairs separated by commas; values are integers or
/// fractions `p/q`. The result is indexed like `ids`.
pub fn parse_assignment(text: &str, ids: &[String]) -> Result<Vec<BigRational>, AssignError> {
    let mut out = vec![BigRational::zero(); ids.len()];
    let mut seen = vec![false; ids.len()];
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut offset = 0;
    for item in text.split(',') {
        let pos = offset + (item.len() - item.trim_start().len());
        offset += item.len() + 1;
        let item = item.trim();
        if item.is_empty() {
            if text.trim().is_empty() {
                break;
            }
            return Err(AssignError::Syntax { pos, msg: "empty entry".into() });
        }
        let Some((id, value)) = item.rsplit_once(':') else {
            return Err(AssignError::Syntax { pos, msg: "expected `id:value`".into() });
        };
        let (id, value) = (id.trim(), value.trim());
        let vpos = pos + item.len() - value.len();
        let v = *index.get(id).ok_or_else(|| AssignError::UnknownVertex(id.to_string()))?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(AssignError::Duplicate(id.to_string()));
        }
        let (p, q) = match value.split_once('/') {
            Some((p, q)) => (integer(p.trim(), vpos, true)?, integer(q.trim(), vpos, false)?),
            None => (integer(value, vpos, true)?, BigInt::from(1)),
        };
        if q.is_zero() {
            return Err(AssignError::ZeroDenominator(id.to_string()));
        }
        out[v] = BigRational::new(p, q);
    }
    Ok(out)
}

/// Inverse of [`parse_assignment`] for nonzero entries.
pub fn format_assignment(values: &[BigRational], ids: &[String]) -> String {
    ids.iter()
        .zip(values)
        .filter(|(_, x)| !x.is_zero())
        .map(|(id, x)| format!("{id}:{x}"))
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids() -> Vec<String> {
        ["b", "a", "c"].iter().map(|s| s.to_string()).collect()
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn parses_the_table_example() {
        assert_eq!(parse_assignment("a:3, b:-2,c:7/2", &ids()).unwrap(), vec![r(-2, 1), r(3, 1), r(7, 2)]);
        assert_eq!(parse_assignment("b:+4", &ids()).unwrap(), vec![r(4, 1), r(0, 1), r(0, 1)]);
        assert_eq!(parse_assignment("", &ids()).unwrap(), vec![r(0, 1); 3]);
        let v = parse_assignment("a:6/4,c:-1", &ids()).unwrap();
        assert_eq!(parse_assignment(&format_assignment(&v, &ids()), &ids()).unwrap(), v);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_assignment("d:1", &ids()), Err(AssignError::UnknownVertex(_))));
        assert!(matches!(parse_assignment("a:1,a:2", &ids()), Err(AssignError::Duplicate(_))));
        assert!(matches!(parse_assignment("a:1/0", &ids()), Err(AssignError::ZeroDenominator(_))));
        assert!(matches!(parse_assignment("a:1/-2", &ids()), Err(AssignError::Syntax { .. })));
        for bad in ["a", "a:", "a:x", "a:1,", ",a:1", "a:1.5", "a:--1"] {
            assert!(matches!(parse_assignment(bad, &ids()), Err(AssignError::Syntax { .. })), "{bad}");
        }
    }
}
