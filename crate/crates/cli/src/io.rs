//! JSON file formats. Rationals are written as strings (`"3/4"`, `"7"`) and
//! read from either strings or JSON numbers; decimals are converted exactly.
//! Scenario indices are 0-based and refer to the canonical (h-sorted) order.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use mixknap_core::cut::{MixingCut, Provenance};
use mixknap_core::fdi::FdiSpec;
use mixknap_core::hull::HullPoint;
use mixknap_core::instance::CanonicalizeOptions;
use mixknap_core::separation::{SeparationQuery, SeparationResult};
use mixknap_core::{MixKnapInstance, Rational, ScenarioSource};
use serde_json::{json, Map, Value};

pub fn parse_rational(text: &str) -> Result<Rational> {
    text.parse::<Rational>().map_err(|e| anyhow!("{}", e))
}

/// Comma-separated rationals, as accepted by list flags.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(parse_rational).collect()
}

pub fn rational_from_value(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => bail!("{}: expected a number or rational string, found {}", what, other),
    }
    .with_context(|| format!("{}: bad rational", what))
}

pub fn rationals_from_value(v: &Value, what: &str) -> Result<Vec<Rational>> {
    let arr = v.as_array().ok_or_else(|| anyhow!("{}: expected an array", what))?;
    arr.iter().enumerate().map(|(i, x)| rational_from_value(x, &format!("{}[{}]", what, i))).collect()
}

fn indices_from_value(v: &Value, what: &str) -> Result<Vec<usize>> {
    let arr = v.as_array().ok_or_else(|| anyhow!("{}: expected an array of indices", what))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| anyhow!("{}[{}]: expected a nonnegative integer, found {}", what, i, x))
        })
        .collect()
}

pub fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// `path: line L, column C: message` for a JSON error at `line` of the file.
fn json_error(path: &Path, line: usize, e: &serde_json::Error) -> anyhow::Error {
    let full = e.to_string();
    let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m);
    anyhow!("{}: line {}, column {}: {}", path.display(), line, e.column(), message)
}

/// Parses one JSON document; syntax errors carry line and column.
pub fn parse_json(text: &str, path: &Path) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| json_error(path, e.line(), &e))
}

/// Parses a file holding either one JSON document or JSON lines.
pub fn parse_json_documents(text: &str, path: &Path) -> Result<Vec<Value>> {
    if let Ok(v) = serde_json::from_str::<Value>(text) {
        return Ok(match v {
            Value::Array(items) => items,
            other => vec![other],
        });
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| json_error(path, i + 1, &e))
        })
        .collect()
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &Path) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| anyhow!("{}: missing field \"{}\"", path.display(), key))
}

/// An instance file: raw `{"h", "a", "p"}` (optionally `"drop_zero_weights"`)
/// or a chance-constraint source `{"xi", "pi", "epsilon"}`.
pub fn instance_from_value(v: &Value, path: &Path) -> Result<MixKnapInstance> {
    let obj = v.as_object().ok_or_else(|| anyhow!("{}: expected a JSON object", path.display()))?;
    let inst = if obj.contains_key("xi") {
        let src = ScenarioSource {
            xi: rationals_from_value(field(obj, "xi", path)?, "xi")?,
            pi: rationals_from_value(field(obj, "pi", path)?, "pi")?,
            epsilon: rational_from_value(field(obj, "epsilon", path)?, "epsilon")?,
        };
        MixKnapInstance::from_chance_constraint(&src)?
    } else {
        let h = rationals_from_value(field(obj, "h", path)?, "h")?;
        let a = rationals_from_value(field(obj, "a", path)?, "a")?;
        let p = rational_from_value(field(obj, "p", path)?, "p")?;
        let drop_zero_weights = match obj.get("drop_zero_weights") {
            None => false,
            Some(b) => b.as_bool().ok_or_else(|| anyhow!("drop_zero_weights: expected a boolean"))?,
        };
        MixKnapInstance::canonicalize_with(&h, &a, &p, CanonicalizeOptions { drop_zero_weights })?
    };
    if inst.perm().iter().enumerate().any(|(i, &j)| i != j) {
        log::info!("{}: scenarios reordered to h-nonincreasing order {:?}", path.display(), inst.perm());
    }
    Ok(inst)
}

pub fn read_instance(path: &Path) -> Result<MixKnapInstance> {
    let text = read_text(path)?;
    instance_from_value(&parse_json(&text, path)?, path)
}

pub fn instance_json(inst: &MixKnapInstance) -> Value {
    json!({ "h": rats(inst.h()), "a": rats(inst.a()), "p": rat(inst.p()) })
}

pub fn query_from_value(v: &Value, path: &Path) -> Result<SeparationQuery> {
    let obj = v.as_object().ok_or_else(|| anyhow!("{}: expected a JSON object", path.display()))?;
    let y = rational_from_value(field(obj, "y", path)?, "y")?;
    let z = rationals_from_value(field(obj, "z", path)?, "z")?;
    Ok(SeparationQuery::new(y, z))
}

pub fn read_query(path: &Path) -> Result<SeparationQuery> {
    let text = read_text(path)?;
    query_from_value(&parse_json(&text, path)?, path)
}

pub fn query_json(q: &SeparationQuery) -> Value {
    json!({ "y": rat(&q.y_star), "z": rats(&q.z_star) })
}

pub fn cut_json(cut: &MixingCut) -> Value {
    let mut v = json!({
        "alpha": rats(&cut.alpha),
        "beta": rat(&cut.beta),
        "provenance": cut.provenance.as_str(),
    });
    if let Some(claim) = cut.facet_claim {
        v["facet_claim"] = Value::Bool(claim);
    }
    v
}

/// Reads a cut object; a `{"cut": …}` wrapper (as written by `fdi`) is unwrapped.
pub fn cut_from_value(v: &Value, what: &str) -> Result<MixingCut> {
    let v = v.get("cut").unwrap_or(v);
    let alpha = rationals_from_value(v.get("alpha").ok_or_else(|| anyhow!("{}: missing alpha", what))?, "alpha")?;
    let beta = rational_from_value(v.get("beta").ok_or_else(|| anyhow!("{}: missing beta", what))?, "beta")?;
    let provenance = match v.get("provenance").and_then(Value::as_str) {
        None => Provenance::Manual,
        Some(s) => Provenance::parse(s).ok_or_else(|| anyhow!("{}: unknown provenance {}", what, s))?,
    };
    let mut cut = MixingCut::new(alpha, beta, provenance);
    cut.facet_claim = v.get("facet_claim").and_then(Value::as_bool);
    Ok(cut)
}

pub fn read_cuts(path: &Path) -> Result<Vec<MixingCut>> {
    let text = read_text(path)?;
    parse_json_documents(&text, path)?
        .iter()
        .enumerate()
        .map(|(i, v)| cut_from_value(v, &format!("{} cut {}", path.display(), i)))
        .collect()
}

pub fn spec_json(spec: &FdiSpec) -> Value {
    json!({ "m": spec.m, "t": spec.t, "q": spec.q, "scale": rat(&spec.scale) })
}

/// A pattern file: a JSON array of `{"s": [...]}` objects or of index arrays.
pub fn read_pattern_sets(path: &Path) -> Result<Vec<Vec<usize>>> {
    let text = read_text(path)?;
    let v = parse_json(&text, path)?;
    let arr = v.as_array().ok_or_else(|| anyhow!("{}: expected an array of patterns", path.display()))?;
    arr.iter()
        .enumerate()
        .map(|(i, p)| {
            let what = format!("{} pattern {}", path.display(), i);
            match p.get("s") {
                Some(s) => indices_from_value(s, &what),
                None => indices_from_value(p, &what),
            }
        })
        .collect()
}

pub fn point_json(pt: &HullPoint) -> Value {
    json!({ "y": rat(&pt.y), "z": pt.z.iter().map(|&b| b as u8).collect::<Vec<u8>>() })
}

pub fn result_json(method: &str, res: &SeparationResult) -> Value {
    let records: Vec<Value> = res
        .records
        .iter()
        .map(|r| {
            json!({
                "label": r.label,
                "violation": r.violation.as_ref().map(rat),
                "note": r.note,
            })
        })
        .collect();
    json!({
        "method": method,
        "verdict": res.verdict.as_str(),
        "lp_value": res.lp_value.as_ref().map(rat),
        "violation": rat(&res.violation),
        "cut": res.cut.as_ref().map(cut_json),
        "generated_rows": res.generated_rows,
        "lp_solves": res.lp_solves,
        "box_active": res.box_active,
        "box_m": res.box_m.as_ref().map(rat),
        "membership_certified": res.membership_certified,
        "records": records,
    })
}

/// Writes `text` to `out`, or to stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn json_lines(values: &[Value]) -> String {
    let mut s = String::new();
    for v in values {
        s.push_str(&serde_json::to_string(v).expect("serializable"));
        s.push('\n');
    }
    s
}
