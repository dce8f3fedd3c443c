//! JSON documents describing a P-decomposition.
//!
//! ```json
//! {"n": 2, "field": {"d": 1}, "moduli": ["1", "1"],
//!  "x": [[1, 2]], "y": [[1], [2]],
//!  "theta": [["1", "0"], ["0", "1"]], "k": "1",
//!  "marks": {"a": [1]}, "punctures": "all"}
//! ```
//!
//! Everything after `y` is optional. `k_sq` may replace `k` when the modulus
//! is not in the field. Cycles may list one of each companion pair.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::{parse_scalar, Scalar, Vec2};
use crate::iso::MarkSet;
use crate::origami::{ExtendedOrigami, SignedIndex};
use crate::pdec::{PDecomposition, PunctureMode};

fn bad(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("{field}: {msg}"))
}

fn scalar(v: &Value, field: &str, d: u32) -> Result<Scalar> {
    match v {
        Value::String(s) => parse_scalar(s, d).map_err(|e| bad(field, e)),
        Value::Number(n) if n.is_i64() => Ok(Scalar::from_int(n.as_i64().expect("checked"))),
        _ => Err(bad(field, "expected a scalar string or an integer")),
    }
}

fn cycles(v: &Value, field: &str) -> Result<Vec<Vec<i64>>> {
    let arr = v.as_array().ok_or_else(|| bad(field, "expected an array of cycles"))?;
    arr.iter()
        .enumerate()
        .map(|(i, c)| {
            let f = format!("{field}[{i}]");
            c.as_array()
                .ok_or_else(|| bad(&f, "expected an array of integers"))?
                .iter()
                .map(|e| e.as_i64().filter(|&e| e != 0).ok_or_else(|| bad(&f, "entries are nonzero integers")))
                .collect()
        })
        .collect()
}

fn json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::parse("document", e.column(), format!("line {}: {e}", e.line())))
}

/// Parses a document into a validated decomposition.
pub fn parse_document(text: &str) -> Result<PDecomposition> {
    from_value(&json(text)?, true)
}

/// Parses without checking the origami axioms, so that they can be
/// reported one by one.
pub fn parse_document_unchecked(text: &str) -> Result<PDecomposition> {
    from_value(&json(text)?, false)
}

pub fn from_value(v: &Value, check: bool) -> Result<PDecomposition> {
    let obj = v.as_object().ok_or_else(|| bad("document", "expected an object"))?;
    let d = match obj.get("field") {
        None => 1,
        Some(f) => f
            .get("d")
            .and_then(Value::as_u64)
            .and_then(|d| u32::try_from(d).ok())
            .filter(|&d| d >= 1)
            .ok_or_else(|| bad("field.d", "expected a positive integer"))?,
    };
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .filter(|&n| n >= 1)
        .ok_or_else(|| bad("n", "expected a positive integer"))? as usize;
    let moduli = match obj.get("moduli") {
        None => vec![Scalar::one(); n],
        Some(m) => {
            let arr = m.as_array().ok_or_else(|| bad("moduli", "expected an array"))?;
            if arr.len() != n {
                return Err(bad("moduli", format!("{} entries for n = {n}", arr.len())));
            }
            arr.iter()
                .enumerate()
                .map(|(i, m)| scalar(m, &format!("moduli[{i}]"), d))
                .collect::<Result<_>>()?
        }
    };
    let x = cycles(obj.get("x").ok_or_else(|| bad("x", "missing"))?, "x")?;
    let y = cycles(obj.get("y").ok_or_else(|| bad("y", "missing"))?, "y")?;
    let origami = ExtendedOrigami::from_cycles(n, &x, &y)?.with_moduli(moduli)?;
    if check {
        origami.validate().into_result()?;
    }

    let frame = match obj.get("theta") {
        None => [Vec2::ints(1, 0), Vec2::ints(0, 1)],
        Some(t) => {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("theta", "expected two vectors"))?;
            let mut out = Vec::with_capacity(2);
            for (i, u) in pair.iter().enumerate() {
                let f = format!("theta[{i}]");
                let c = u.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad(&f, "expected two scalars"))?;
                out.push(Vec2::new(scalar(&c[0], &f, d)?, scalar(&c[1], &f, d)?));
            }
            let v = out.pop().expect("two");
            [out.pop().expect("two"), v]
        }
    };
    let k_sq = match (obj.get("k"), obj.get("k_sq")) {
        (Some(_), Some(_)) => return Err(bad("k", "give either k or k_sq")),
        (Some(k), None) => {
            let k = scalar(k, "k", d)?;
            if !k.is_positive() {
                return Err(bad("k", "must be positive"));
            }
            k.square()
        }
        (None, Some(k)) => scalar(k, "k_sq", d)?,
        (None, None) => Scalar::one(),
    };
    let marks = match obj.get("marks") {
        None => MarkSet::new(),
        Some(m) => {
            let m = m.as_object().ok_or_else(|| bad("marks", "expected an object of label -> cycle"))?;
            let mut list = Vec::with_capacity(m.len());
            for (label, c) in m {
                let f = format!("marks.{label}");
                let wrapped = Value::Array(vec![c.clone()]);
                let mut cs = cycles(&wrapped, &f)?;
                list.push((label.clone(), cs.pop().expect("one cycle")));
            }
            if check {
                MarkSet::from_cycles(&origami, &list)?
            } else {
                MarkSet::new()
            }
        }
    };
    let punctures = match obj.get("punctures").map(|p| p.as_str()) {
        None | Some(Some("all")) => PunctureMode::AllVertices,
        Some(Some("cone")) => PunctureMode::ConePoints,
        _ => return Err(bad("punctures", "expected \"all\" or \"cone\"")),
    };
    let p = PDecomposition { frame, k_sq, origami, marks, punctures };
    if check {
        p.validate()?;
    }
    Ok(p)
}

/// Serializes with cycles in canonical order and `k_sq` in place of `k`.
pub fn to_value(p: &PDecomposition) -> Value {
    let o = &p.origami;
    let mut obj = Map::new();
    obj.insert("n".into(), json!(o.n()));
    obj.insert("field".into(), json!({ "d": p.field() }));
    obj.insert("moduli".into(), json!(o.moduli().iter().map(|m| m.to_string()).collect::<Vec<_>>()));
    obj.insert("x".into(), json!(o.x_cycles()));
    obj.insert("y".into(), json!(o.y_cycles()));
    let vec = |v: &Vec2| json!([v.x.to_string(), v.y.to_string()]);
    obj.insert("theta".into(), json!([vec(&p.frame[0]), vec(&p.frame[1])]));
    obj.insert("k_sq".into(), json!(p.k_sq.to_string()));
    if !p.marks.is_empty() {
        let marks: Map<String, Value> =
            p.marks.iter().map(|(l, &r)| (l.clone(), json!([SignedIndex::from_idx(r).to_int()]))).collect();
        obj.insert("marks".into(), Value::Object(marks));
    }
    let mode = match p.punctures {
        PunctureMode::AllVertices => "all",
        PunctureMode::ConePoints => "cone",
    };
    obj.insert("punctures".into(), json!(mode));
    Value::Object(obj)
}

pub fn to_json_string(p: &PDecomposition) -> String {
    serde_json::to_string_pretty(&to_value(p)).expect("values serialize")
}
