//! Rendering polynomials as plain text, LaTeX, and JSON, plus the JSON
//! parser that round-trips every printed polynomial to an identical term
//! map.
//!
//! Two naming styles cover the crate's contexts: `Indexed` prints id `j` as
//! `x{j+1}` (cumulant and variation polynomials), `SpaceTime` prints the
//! named ids of [`crate::vars`]. Both styles share one id space, so the
//! parser accepts every name either style can produce.
//!
//! The atom id [`vars::E`] stands for `e^{1/2}` and its powers are folded on
//! display (`e^(1/2)`, `e`, `e^(3/2)`, `e^2`, ...); the JSON form keeps the
//! raw atom exponent to stay bijective.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Map, Value};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::{Monomial, SparsePoly, VarId};
use crate::rat;
use crate::vars;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStyle {
    /// `x1, x2, ...` with id `j` printed as `x{j+1}`.
    Indexed,
    /// `x, t, s, e, y, z` per the [`crate::vars`] constants.
    SpaceTime,
}

pub fn var_name(style: VarStyle, v: VarId) -> String {
    match style {
        VarStyle::Indexed => format!("x{}", v + 1),
        VarStyle::SpaceTime => match v {
            vars::X => "x".to_string(),
            vars::T => "t".to_string(),
            vars::S => "s".to_string(),
            vars::E => "e".to_string(),
            vars::Y => "y".to_string(),
            vars::Z => "z".to_string(),
            other => format!("v{other}"),
        },
    }
}

/// Inverse of [`var_name`] over both styles at once (they agree on ids).
pub fn parse_var_name(name: &str) -> Result<VarId> {
    let bad = || Error::PolyJson(format!("unknown variable name {name:?}"));
    match name {
        "x" => return Ok(vars::X),
        "t" => return Ok(vars::T),
        "s" => return Ok(vars::S),
        "e" => return Ok(vars::E),
        "y" => return Ok(vars::Y),
        "z" => return Ok(vars::Z),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix('x') {
        let k: u32 = rest.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        return Ok(k - 1);
    }
    if let Some(rest) = name.strip_prefix('v') {
        return rest.parse().map_err(|_| bad());
    }
    name.parse().map_err(|_| bad())
}

/// `e^{1/2}` raised to `k`, reduced for display: `exp` halved when even.
fn atom_power_plain(k: u32) -> String {
    if k % 2 == 0 {
        match k / 2 {
            1 => "e".to_string(),
            h => format!("e^{h}"),
        }
    } else {
        format!("e^({k}/2)")
    }
}

fn atom_power_latex(k: u32) -> String {
    if k % 2 == 0 {
        match k / 2 {
            1 => "e".to_string(),
            h => format!("e^{{{h}}}"),
        }
    } else {
        format!("e^{{{k}/2}}")
    }
}

fn monomial_plain(mono: &Monomial, style: VarStyle) -> String {
    // The atom is a constant, so its power leads the factor list.
    let mut parts = Vec::new();
    let mut vars_parts = Vec::new();
    for (v, k) in mono.exponents() {
        if style == VarStyle::SpaceTime && v == vars::E {
            parts.push(atom_power_plain(k));
            continue;
        }
        let name = var_name(style, v);
        if k == 1 {
            vars_parts.push(name);
        } else {
            vars_parts.push(format!("{name}^{k}"));
        }
    }
    parts.extend(vars_parts);
    parts.join("*")
}

fn monomial_latex(mono: &Monomial, style: VarStyle) -> String {
    let mut parts = Vec::new();
    let mut vars_parts = Vec::new();
    for (v, k) in mono.exponents() {
        if style == VarStyle::SpaceTime && v == vars::E {
            parts.push(atom_power_latex(k));
            continue;
        }
        let name = match style {
            VarStyle::Indexed => format!("x_{{{}}}", v + 1),
            VarStyle::SpaceTime => var_name(style, v),
        };
        if k == 1 {
            vars_parts.push(name);
        } else {
            vars_parts.push(format!("{name}^{{{k}}}"));
        }
    }
    parts.extend(vars_parts);
    parts.join(" ")
}

fn latex_coeff(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        let sign = if c.is_negative() { "-" } else { "" };
        format!(
            "{sign}\\frac{{{}}}{{{}}}",
            c.numer().abs(),
            c.denom()
        )
    }
}

/// Terms from largest to smallest monomial, so leading terms print first.
fn terms_desc(p: &SparsePoly) -> Vec<(&Monomial, &BigRational)> {
    let mut v: Vec<_> = p.terms().collect();
    v.reverse();
    v
}

pub fn plain(p: &SparsePoly, style: VarStyle) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (mono, coeff)) in terms_desc(p).into_iter().enumerate() {
        let neg = coeff.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = coeff.abs();
        if mono.is_unit() {
            out.push_str(&rat::format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&monomial_plain(mono, style));
        } else {
            out.push_str(&rat::format_rational(&mag));
            out.push('*');
            out.push_str(&monomial_plain(mono, style));
        }
    }
    out
}

pub fn latex(p: &SparsePoly, style: VarStyle) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (mono, coeff)) in terms_desc(p).into_iter().enumerate() {
        let neg = coeff.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = coeff.abs();
        if mono.is_unit() {
            out.push_str(&latex_coeff(&mag));
        } else {
            if !mag.is_one() {
                out.push_str(&latex_coeff(&mag));
                out.push(' ');
            }
            out.push_str(&monomial_latex(mono, style));
        }
    }
    out
}

/// JSON term list: `[{"exponents": {name: exp}, "num": "...", "den": "..."}]`
/// with integers as decimal strings. Terms are emitted largest monomial
/// first; parsing is order-insensitive.
pub fn json_terms(p: &SparsePoly, style: VarStyle) -> Value {
    let mut terms = Vec::new();
    for (mono, coeff) in terms_desc(p) {
        let mut exps = Map::new();
        for (v, k) in mono.exponents() {
            exps.insert(var_name(style, v), json!(k));
        }
        terms.push(json!({
            "exponents": Value::Object(exps),
            "num": coeff.numer().to_string(),
            "den": coeff.denom().to_string(),
        }));
    }
    Value::Array(terms)
}

/// Parse the [`json_terms`] form back into a polynomial; duplicates merge
/// additively, so the round trip lands on the identical term map.
pub fn parse_json_terms(v: &Value) -> Result<SparsePoly> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::PolyJson("expected a JSON array of terms".into()))?;
    let mut terms = Vec::new();
    for item in arr {
        let obj = item
            .as_object()
            .ok_or_else(|| Error::PolyJson("term is not a JSON object".into()))?;
        let exps = obj
            .get("exponents")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::PolyJson("term missing exponents object".into()))?;
        let mut pairs = Vec::new();
        for (name, exp) in exps {
            let v = parse_var_name(name)?;
            let k = exp
                .as_u64()
                .filter(|k| *k > 0 && *k <= u64::from(u32::MAX))
                .ok_or_else(|| {
                    Error::PolyJson(format!("bad exponent for {name:?}: {exp}"))
                })?;
            pairs.push((v, k as u32));
        }
        let num = parse_big(obj, "num")?;
        let den = parse_big(obj, "den")?;
        if den == BigInt::from(0) {
            return Err(Error::PolyJson("zero denominator".into()));
        }
        let coeff = BigRational::new(num, den);
        terms.push((Monomial::from_pairs(&pairs), coeff));
    }
    Ok(SparsePoly::from_terms(terms))
}

fn parse_big(obj: &Map<String, Value>, key: &str) -> Result<BigInt> {
    let s = obj
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::PolyJson(format!("term missing string field {key:?}")))?;
    BigInt::from_str(s).map_err(|_| Error::PolyJson(format!("bad integer in {key:?}: {s}")))
}
