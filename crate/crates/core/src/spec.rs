//! Parsing of character and family specs.
//!
//! Character grammar (components separated by `;`, all optional):
//!
//! ```text
//! alpha=<poly in w>/<p>^<n>   e.g. alpha=1/9, alpha=(1+2*w)/3^2, alpha=2/p^3
//! tame=<t>                    χ(g) = ζ_{q−1}^t for the Teichmüller generator g
//! onp=<m>:<k>                 χ(p) = ζ_m^k
//! sign=1                      the 2-adic sign component (p = 2 only)
//! ```
//!
//! `trivial` (or the empty string) is the trivial character. A family spec
//! writes `a` in place of the numerator, `alpha=a/p^n`, and may restrict the
//! sweep with `a=<list>`; otherwise a runs over the units modulo p^n.

use std::sync::Arc;

use crate::character::MultiplicativeCharacter;
use crate::cyclotomic::RootOfUnity;
use crate::error::{Error, Result};
use crate::padic::{PadicElement, UnramifiedField};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| parse_err(format!("expected an integer, got {s:?}")))
}

/// Integer polynomial in w, e.g. `1+2*w-w^2`, `3w`, `(1+w)`.
pub fn parse_poly(s: &str) -> Result<Vec<i64>> {
    let mut s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.starts_with('(') && s.ends_with(')') {
        s = s[1..s.len() - 1].to_string();
    }
    if s.is_empty() {
        return Err(parse_err("empty polynomial"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut coeffs: Vec<i64> = Vec::new();
    for term in terms {
        let (neg, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        let (coef, power) = match body.find('w') {
            None => (parse_int(body)?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() { 1 } else { parse_int(c)? };
                let rest = &body[pos + 1..];
                let e = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    usize::try_from(parse_int(e)?)
                        .map_err(|_| parse_err(format!("bad exponent in {term:?}")))?
                } else {
                    return Err(parse_err(format!("cannot parse term {term:?}")));
                };
                (c, e)
            }
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] += if neg { -coef } else { coef };
    }
    Ok(coeffs)
}

/// Exponent n from `p^n`, `<p>^n` or a plain power of p such as `9`.
pub fn parse_denominator(s: &str, p: u64) -> Result<u32> {
    let s = s.trim();
    if let Some((base, e)) = s.split_once('^') {
        let base = base.trim();
        if base != "p" && base.parse::<u64>().ok() != Some(p) {
            return Err(parse_err(format!(
                "denominator base {base:?} is not p = {p}"
            )));
        }
        return u32::try_from(parse_int(e)?).map_err(|_| parse_err("negative exponent"));
    }
    let mut d = u64::try_from(parse_int(s)?).map_err(|_| parse_err("negative denominator"))?;
    let mut n = 0;
    while d > 1 && d % p == 0 {
        d /= p;
        n += 1;
    }
    if d != 1 {
        return Err(parse_err(format!("denominator {s} is not a power of {p}")));
    }
    Ok(n)
}

#[derive(Debug, Default, Clone)]
struct RawSpec {
    numerator: Option<String>,
    depth: Option<u32>,
    tame: i64,
    onp: Option<(u64, i64)>,
    sign: bool,
    a_list: Option<Vec<String>>,
}

fn split_top_level(s: &str) -> Vec<&str> {
    s.split(';')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .collect()
}

fn parse_raw(s: &str, p: u64) -> Result<RawSpec> {
    let mut raw = RawSpec::default();
    let s = s.trim();
    if s.is_empty() || s == "trivial" {
        return Ok(raw);
    }
    for part in split_top_level(s) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected key=value, got {part:?}")))?;
        match key.trim() {
            "alpha" => {
                let (num, den) = match value.rsplit_once('/') {
                    Some((n, d)) => (n.trim().to_string(), parse_denominator(d, p)?),
                    None => (value.trim().to_string(), 0),
                };
                raw.numerator = Some(num);
                raw.depth = Some(den);
            }
            "tame" => raw.tame = parse_int(value)?,
            "onp" | "on_p" => {
                let (m, k) = value
                    .split_once(':')
                    .ok_or_else(|| parse_err("onp expects <m>:<k>"))?;
                let m = u64::try_from(parse_int(m)?)
                    .ok()
                    .filter(|&m| m >= 1)
                    .ok_or_else(|| parse_err("onp order must be positive"))?;
                raw.onp = Some((m, parse_int(k)?));
            }
            "sign" => {
                raw.sign = match value.trim() {
                    "0" => false,
                    "1" => true,
                    v => return Err(parse_err(format!("sign expects 0 or 1, got {v:?}"))),
                }
            }
            "a" => {
                raw.a_list = Some(
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|x| !x.is_empty())
                        .map(String::from)
                        .collect(),
                )
            }
            other => return Err(parse_err(format!("unknown component {other:?}"))),
        }
    }
    Ok(raw)
}

/// Deepest p-power denominator mentioned in a spec (0 when there is none).
pub fn spec_depth(s: &str, p: u64) -> Result<u32> {
    Ok(parse_raw(s, p)?.depth.unwrap_or(0))
}

/// Working precision used when none is given: n + 4 guard digits.
pub fn auto_precision(depth: u32) -> u32 {
    depth.max(2) + 4
}

fn alpha_from(field: &Arc<UnramifiedField>, num: &[i64], depth: u32) -> Result<PadicElement> {
    let den = field.from_int(
        i64::try_from(
            crate::arith::checked_pow(field.p(), depth)
                .ok_or_else(|| parse_err("denominator too large"))?,
        )
        .map_err(|_| parse_err("denominator too large"))?,
    );
    field.from_poly(num).div(&den)
}

fn build(
    field: &Arc<UnramifiedField>,
    raw: &RawSpec,
    num: Option<&[i64]>,
) -> Result<MultiplicativeCharacter> {
    if raw.depth.unwrap_or(0) >= field.precision() {
        return Err(Error::Precision(format!(
            "alpha needs more than N = {} digits",
            field.precision()
        )));
    }
    let alpha = match num {
        Some(n) => Some(alpha_from(field, n, raw.depth.unwrap_or(0))?),
        None => None,
    };
    let onp = raw
        .onp
        .map(|(m, k)| RootOfUnity::new(m, k))
        .unwrap_or_else(RootOfUnity::one);
    MultiplicativeCharacter::new(field, onp, raw.tame, alpha, raw.sign)
}

/// Parses one character over the given field.
pub fn parse_character(field: &Arc<UnramifiedField>, s: &str) -> Result<MultiplicativeCharacter> {
    let raw = parse_raw(s, field.p())?;
    if raw.a_list.is_some() {
        return Err(parse_err("a=<list> is only allowed in family specs"));
    }
    let num = match &raw.numerator {
        Some(n) => Some(parse_poly(n)?),
        None => None,
    };
    build(field, &raw, num.as_deref())
}

/// One row of a family: the label of the numerator and its character.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub label: String,
    pub character: MultiplicativeCharacter,
}

/// Expands a family spec such as `alpha=a/3^2` or `alpha=a/27;a=1,2,4;tame=1`.
pub fn parse_family(field: &Arc<UnramifiedField>, s: &str) -> Result<Vec<FamilyMember>> {
    let raw = parse_raw(s, field.p())?;
    let depth = raw
        .depth
        .ok_or_else(|| parse_err("family needs alpha=a/p^n"))?;
    if raw.numerator.as_deref() != Some("a") {
        return Err(parse_err("family numerator must be the letter a"));
    }
    let numerators: Vec<(String, Vec<i64>)> = match &raw.a_list {
        Some(list) => list
            .iter()
            .map(|x| Ok((x.clone(), parse_poly(x)?)))
            .collect::<Result<_>>()?,
        None => {
            if depth == 0 {
                return Err(parse_err("family needs n >= 1"));
            }
            if depth > field.precision() {
                return Err(Error::Precision(format!(
                    "family depth {depth} exceeds N = {}",
                    field.precision()
                )));
            }
            field
                .unit_residues(depth)?
                .map(|a| {
                    let coeffs: Vec<i64> = a.unit_coeffs().iter().map(|&c| c as i64).collect();
                    let label = if field.f() == 1 {
                        coeffs[0].to_string()
                    } else {
                        crate::padic::format_poly(a.unit_coeffs())
                    };
                    (label, coeffs)
                })
                .collect()
        }
    };
    numerators
        .into_iter()
        .map(|(label, num)| {
            Ok(FamilyMember {
                label,
                character: build(field, &raw, Some(&num))?,
            })
        })
        .collect()
}
