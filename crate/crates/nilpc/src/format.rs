//! JSON presentation files and homomorphism map files.
//!
//! ```json
//! {
//!   "name": "HEIS",
//!   "rank": 3,
//!   "periods": [0, 0, 0],
//!   "powers": {},
//!   "commutators": { "2,1": [[3, -1]] }
//! }
//! ```
//!
//! Indices are 1-based, `0` encodes an infinite period, tails are sparse
//! `[index, exponent]` lists sorted by index, and a commutator key `"j,i"`
//! (with `i < j`) gives the tail of `[u_j, u_i]`. Exponents outside the 64-bit
//! range are written as decimal strings.

use std::fmt;

use nilpc_core::pc::Tail;
use nilpc_core::{BigInt, GroupElement, Period, Presentation, PresentationBuilder};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    /// Malformed JSON or wrong shape; carries line and column when known.
    Syntax(String),
    /// Well-formed but mathematically invalid.
    Invalid(String),
    /// Fails the consistency check; names the first failing overlap.
    Inconsistent(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Syntax(s) => write!(f, "parse error: {}", s),
            FormatError::Invalid(s) => write!(f, "invalid presentation: {}", s),
            FormatError::Inconsistent(s) => write!(f, "inconsistent presentation: {}", s),
        }
    }
}

impl std::error::Error for FormatError {}

fn syntax(e: serde_json::Error) -> FormatError {
    FormatError::Syntax(format!("{} (line {}, column {})", strip_position(&e.to_string()), e.line(), e.column()))
}

fn strip_position(s: &str) -> &str {
    match s.find(" at line ") {
        Some(k) => &s[..k],
        None => s,
    }
}

/// Integer as a JSON number when it fits, else as a decimal string.
pub fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

fn read_int(v: &Value, what: &str) -> Result<BigInt, FormatError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(FormatError::Syntax(format!("{}: {} is not an integer", what, n)))
            }
        }
        Value::String(s) => s.parse().map_err(|_| FormatError::Syntax(format!("{}: {:?} is not an integer", what, s))),
        _ => Err(FormatError::Syntax(format!("{}: expected an integer", what))),
    }
}

fn read_index(v: &Value, rank: usize, what: &str) -> Result<usize, FormatError> {
    let k = read_int(v, what)?;
    match k.to_usize() {
        Some(k) if (1..=rank).contains(&k) => Ok(k - 1),
        _ => Err(FormatError::Invalid(format!("{}: index {} outside 1..{}", what, k, rank))),
    }
}

/// Sparse word `[[index, exponent], …]`, returned 0-based.
fn read_word(v: &Value, rank: usize, what: &str) -> Result<Tail, FormatError> {
    let arr = v.as_array().ok_or_else(|| FormatError::Syntax(format!("{}: expected an array of pairs", what)))?;
    let mut out = Vec::with_capacity(arr.len());
    for pair in arr {
        let p = pair.as_array().filter(|p| p.len() == 2);
        let p = p.ok_or_else(|| FormatError::Syntax(format!("{}: entries must be [index, exponent]", what)))?;
        out.push((read_index(&p[0], rank, what)?, read_int(&p[1], what)?));
    }
    Ok(out)
}

fn word_value(t: &[(usize, BigInt)]) -> Value {
    Value::Array(t.iter().map(|(k, a)| Value::Array(vec![Value::from(k + 1), int_value(a)])).collect())
}

/// Sparse 1-based word of a canonical element.
pub fn element_value(x: &GroupElement) -> Value {
    word_value(&x.support())
}

fn sorted_tail(t: Tail, what: &str) -> Result<Tail, FormatError> {
    if t.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(FormatError::Invalid(format!("{}: tail indices must be strictly increasing", what)));
    }
    Ok(t.into_iter().filter(|(_, a)| !a.is_zero()).collect())
}

fn object<'a>(root: &'a Map<String, Value>, key: &str) -> Result<Option<&'a Map<String, Value>>, FormatError> {
    match root.get(key) {
        None => Ok(None),
        Some(Value::Object(m)) => Ok(Some(m)),
        Some(_) => Err(FormatError::Syntax(format!("\"{}\" must be an object", key))),
    }
}

/// Parses without running the consistency check.
pub fn parse_unchecked(text: &str) -> Result<(String, Presentation), FormatError> {
    let root: Value = serde_json::from_str(text).map_err(syntax)?;
    let root = root.as_object().ok_or_else(|| FormatError::Syntax("top level must be an object".into()))?;
    for key in root.keys() {
        if !["name", "rank", "periods", "powers", "commutators"].contains(&key.as_str()) {
            return Err(FormatError::Syntax(format!("unknown field \"{}\"", key)));
        }
    }
    let name = match root.get("name") {
        Some(Value::String(s)) => s.clone(),
        None => String::new(),
        Some(_) => return Err(FormatError::Syntax("\"name\" must be a string".into())),
    };
    let periods_v = root
        .get("periods")
        .and_then(Value::as_array)
        .ok_or_else(|| FormatError::Syntax("missing \"periods\" array".into()))?;
    let rank = match root.get("rank") {
        Some(v) => read_int(v, "rank")?.to_usize().ok_or_else(|| FormatError::Invalid("negative rank".into()))?,
        None => periods_v.len(),
    };
    if rank != periods_v.len() {
        return Err(FormatError::Invalid(format!("rank {} but {} periods", rank, periods_v.len())));
    }
    let mut periods = Vec::with_capacity(rank);
    for (i, v) in periods_v.iter().enumerate() {
        let e = read_int(v, "periods")?;
        if e.is_negative() {
            return Err(FormatError::Invalid(format!("period of u{} is negative", i + 1)));
        }
        periods.push(Period::from_code(&e));
    }
    let mut b = PresentationBuilder::new(periods);
    if let Some(powers) = object(root, "powers")? {
        for (key, tail) in powers {
            let what = format!("power of u{}", key);
            let i = read_index(&Value::String(key.clone()), rank, &what)?;
            b = b.power(i, sorted_tail(read_word(tail, rank, &what)?, &what)?);
        }
    }
    if let Some(comms) = object(root, "commutators")? {
        for (key, tail) in comms {
            let what = format!("commutator [{}]", key);
            let parts: Vec<&str> = key.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(FormatError::Syntax(format!("commutator key {:?} must look like \"j,i\"", key)));
            }
            let j = read_index(&Value::String(parts[0].into()), rank, &what)?;
            let i = read_index(&Value::String(parts[1].into()), rank, &what)?;
            b = b.comm(j, i, sorted_tail(read_word(tail, rank, &what)?, &what)?);
        }
    }
    let p = b.build().map_err(|e| FormatError::Invalid(e.to_string()))?;
    Ok((name, p))
}

/// Parses and checks consistency.
pub fn parse_presentation(text: &str) -> Result<(String, Presentation), FormatError> {
    let (name, p) = parse_unchecked(text)?;
    let report = p.consistency_check();
    if let Some(f) = report.failures.first() {
        return Err(FormatError::Inconsistent(format!(
            "overlap {} gives {} on one side and {} on the other",
            f.overlap, f.left, f.right
        )));
    }
    Ok((name, p))
}

pub fn presentation_value(name: &str, p: &Presentation) -> Value {
    let mut root = Map::new();
    root.insert("name".into(), Value::from(name));
    root.insert("rank".into(), Value::from(p.rank()));
    root.insert("periods".into(), Value::Array(p.periods().iter().map(|q| int_value(&q.code())).collect()));
    let mut powers = Map::new();
    for i in 0..p.rank() {
        if p.period(i).is_finite() && !p.power_tail(i).is_empty() {
            powers.insert(format!("{}", i + 1), word_value(p.power_tail(i)));
        }
    }
    root.insert("powers".into(), Value::Object(powers));
    let mut comms = Map::new();
    for j in 0..p.rank() {
        for i in 0..j {
            let t = p.comm_tail(j, i);
            if !t.is_empty() {
                comms.insert(format!("{},{}", j + 1, i + 1), word_value(t));
            }
        }
    }
    root.insert("commutators".into(), Value::Object(comms));
    Value::Object(root)
}

/// Pretty JSON text with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn emit_presentation(name: &str, p: &Presentation) -> String {
    to_text(&presentation_value(name, p))
}

/// Reads `[word_1, …, word_m]`, each word evaluated in `target`.
pub fn parse_map(text: &str, source_rank: usize, target: &Presentation) -> Result<Vec<GroupElement>, FormatError> {
    let root: Value = serde_json::from_str(text).map_err(syntax)?;
    let words = root.as_array().ok_or_else(|| FormatError::Syntax("map file must be an array of words".into()))?;
    if words.len() != source_rank {
        return Err(FormatError::Invalid(format!("map lists {} images for {} generators", words.len(), source_rank)));
    }
    words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let word = read_word(w, target.rank(), &format!("image of u{}", i + 1))?;
            target.normal_form(&word).map_err(|e| FormatError::Invalid(e.to_string()))
        })
        .collect()
}

pub fn map_value(images: &[GroupElement]) -> Value {
    Value::Array(images.iter().map(element_value).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilpc_core::fixtures;

    #[test]
    fn round_trip() {
        for (name, p) in fixtures::all() {
            let text = emit_presentation(name, &p);
            let (n, q) = parse_presentation(&text).unwrap();
            assert_eq!(n, name);
            assert_eq!(q, p);
            assert_eq!(emit_presentation(&n, &q), text);
        }
    }

    #[test]
    fn heis_text() {
        let text = emit_presentation("HEIS", &fixtures::heis());
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["commutators"]["2,1"], serde_json::json!([[3, -1]]));
        assert_eq!(v["periods"], serde_json::json!([0, 0, 0]));
    }

    #[test]
    fn rejections() {
        let bad = r#"{"name":"x","rank":1,"periods":[1]}"#;
        assert!(matches!(parse_presentation(bad), Err(FormatError::Invalid(_))));
        let bad = r#"{"name":"x","rank":2,"periods":[0,0],"commutators":{"1,2":[[2,1]]}}"#;
        assert!(matches!(parse_presentation(bad), Err(FormatError::Invalid(_))));
        let bad = r#"{"name":"x","rank":2,"periods":[0,0],"commutators":{"2,1":[[1,1]]}}"#;
        assert!(matches!(parse_presentation(bad), Err(FormatError::Invalid(_))));
        let bad = "{\"name\":\"x\",\n \"rank\":2,,}";
        match parse_presentation(bad) {
            Err(FormatError::Syntax(s)) => assert!(s.contains("line 2"), "{}", s),
            other => panic!("{:?}", other),
        }
        let bad = r#"{"name":"x","rank":3,"periods":[2,0,0],"commutators":{"2,1":[[3,1]]}}"#;
        assert!(matches!(parse_presentation(bad), Err(FormatError::Inconsistent(_))));
        assert!(parse_unchecked(bad).is_ok());
    }

    #[test]
    fn big_exponents_survive() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = PresentationBuilder::new(vec![Period::Infinite; 2]).comm(1, 0, vec![]).build().unwrap();
        let x = GroupElement::from_coords(vec![big.clone(), BigInt::from(1)]);
        let text = to_text(&map_value(&[x.clone(), p.generator(1)]));
        assert_eq!(parse_map(&text, 2, &p).unwrap()[0], x);
    }
}
