//! JSON encodings of library values.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use rigidcoh::local_field::ValuedNumber;
use rigidcoh::qmodz::TorsionCharacter;
use rigidcoh::{FinAbGroup, GroupHom, IntMatrix, QModZ, SubLattice};

/// A JSON number when it fits in `i64`, a decimal string otherwise.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn rows(v: &[Vec<BigInt>]) -> Value {
    Value::Array(v.iter().map(|r| ints(r)).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    rows(&m.to_rows())
}

pub fn basis(l: &SubLattice) -> Value {
    json!({ "basis": rows(&l.basis_vectors()) })
}

pub fn group(g: &FinAbGroup) -> Value {
    json!({
        "invariant_factors": ints(g.invariant_factors()),
        "generators": rows(g.generator_lifts()),
    })
}

pub fn hom(h: &GroupHom) -> Value {
    json!({
        "source": group(&h.source),
        "target": group(&h.target),
        "images": rows(h.images()),
    })
}

pub fn qmodz(q: &QModZ) -> Value {
    Value::String(q.to_string())
}

pub fn character(c: &TorsionCharacter) -> Value {
    Value::Array(c.values().iter().map(qmodz).collect())
}

pub fn valued(v: &ValuedNumber) -> Value {
    json!({ "base": v.base, "exponent": v.exponent.to_string() })
}

/// `{"pass", "checks": [{"name", "pass"}]}` plus any extra fields.
pub fn report(checks: &[(&str, bool)], extra: Map<String, Value>) -> Value {
    let mut out = extra;
    out.insert("pass".into(), Value::Bool(checks.iter().all(|c| c.1)));
    out.insert(
        "checks".into(),
        Value::Array(checks.iter().map(|(n, p)| json!({ "name": n, "pass": p })).collect()),
    );
    Value::Object(out)
}

/// Renders a payload for `--format text`: groups as `ℤ/d₁ ⊕ … ⊕ ℤ/d_k`,
/// objects as `key = value` pairs.
pub fn render(v: &Value) -> String {
    render_at(v, true)
}

fn render_at(v: &Value, top: bool) -> String {
    match v {
        Value::Object(m) => {
            if let Some(Value::Array(f)) = m.get("invariant_factors") {
                if f.is_empty() {
                    return "0".into();
                }
                return f.iter().map(|d| format!("ℤ/{}", scalar(d))).collect::<Vec<_>>().join(" ⊕ ");
            }
            let fields: Vec<String> = m.iter().map(|(k, x)| format!("{k} = {}", render_at(x, false))).collect();
            if top {
                fields.join("; ")
            } else {
                format!("{{{}}}", fields.join(", "))
            }
        }
        Value::Array(a) => format!("[{}]", a.iter().map(|x| render_at(x, false)).collect::<Vec<_>>().join(", ")),
        other => scalar(other),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
