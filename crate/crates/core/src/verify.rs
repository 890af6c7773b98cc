//! Exact checks of the Galois-action and Adams-operation identities.
//!
//! Each check evaluates both sides as cyclotomic numbers and reports whether
//! they agree. σ_k denotes ζ ↦ ζ^k; its p-cyclotomic character κ_p(σ_k) is
//! taken to be the integer k viewed in Z_p^*.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, is_prime, lcm, mult_order, pow_mod, val_p};
use crate::character::{psi, MultiplicativeCharacter};
use crate::cyclotomic::{sqrt_pstar, CyclotomicNumber, RootOfUnity};
use crate::epsilon::{
    closed_parts, g_quadratic, iota, rho_u, ultra_formula, w, w_closed, w_oracle, w_p_part, w_star,
    w_star_virtual, w_virtual, Backend, EpsilonValue,
};
use crate::error::{Error, Result};
use crate::hilbert::{hilbert_qp, hilbert_tame_unram};
use crate::padic::{PadicElement, UnramifiedField};
use crate::virtual_char::VirtualCharacter;

/// One side of an identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub value: CyclotomicNumber,
    pub root: Option<RootOfUnity>,
}

impl Side {
    pub fn from_value(value: CyclotomicNumber) -> Self {
        let root = value.as_root_of_unity();
        Side { value, root }
    }

    pub fn from_root(root: RootOfUnity) -> Self {
        Side {
            value: root.to_cyclotomic(),
            root: Some(root),
        }
    }
}

impl From<EpsilonValue> for Side {
    fn from(e: EpsilonValue) -> Self {
        Side {
            value: e.value,
            root: e.root,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.root {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", self.value),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub identity: String,
    pub params: BTreeMap<String, String>,
    pub lhs: Option<Side>,
    pub rhs: Option<Side>,
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
    /// Wall-clock seconds; filled in only on request so that output is reproducible.
    pub timing: Option<f64>,
}

impl Report {
    fn compare(identity: &str, params: Params, lhs: Side, rhs: Side) -> Self {
        let equal = lhs.value == rhs.value;
        Report {
            identity: identity.to_string(),
            params: params.0,
            lhs: Some(lhs),
            rhs: Some(rhs),
            equal,
            details: None,
            timing: None,
        }
    }
}

#[derive(Default)]
struct Params(BTreeMap<String, String>);

impl Params {
    fn field(fld: &UnramifiedField) -> Self {
        Params::default().with("p", fld.p()).with("f", fld.f())
    }

    fn character(chi: &MultiplicativeCharacter) -> Self {
        Self::field(chi.field()).with("char", chi.spec_string())
    }

    fn virtual_char(v: &VirtualCharacter) -> Self {
        Self::field(v.field()).with("virtual", v)
    }

    fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }
}

fn cyc_int(n: i64) -> CyclotomicNumber {
    CyclotomicNumber::from_int(n)
}

fn root_of(e: &EpsilonValue) -> Result<RootOfUnity> {
    e.root.ok_or(Error::NotRootOfUnity)
}

/// Σ n_i c(χ_i), the exponent of N𝔣 = q^a for a virtual character.
pub fn conductor_exponent(v: &VirtualCharacter) -> i64 {
    v.terms()
        .map(|(c, n)| n * c.conductor_exponent() as i64)
        .sum()
}

/// (q^a, k)_p over Q_p, with k_p given as an integer prime to p.
fn norm_symbol(fld: &UnramifiedField, a: i64, k: i64) -> Result<i8> {
    if (fld.f() as i64 * a).rem_euclid(2) == 0 {
        return Ok(1);
    }
    let p = fld.p() as i64;
    hilbert_qp(
        Rational64::from_integer(p),
        Rational64::from_integer(k),
        fld.p(),
    )
}

/// E = Q(values of the character of V), described as the fixed field of
/// H ⊂ (Z/m)^* inside Q(ζ_m), m = lcm(2, orders).
#[derive(Clone, Debug)]
pub struct ValueField {
    pub m: u64,
    pub h: Vec<u64>,
}

impl ValueField {
    pub fn of(v: &VirtualCharacter) -> Self {
        let m = lcm(2, v.order());
        let h = (1..m)
            .filter(|&k| gcd(k, m) == 1 && v.adams(k as i64) == *v)
            .collect();
        ValueField { m, h }
    }

    pub fn of_character(chi: &MultiplicativeCharacter) -> Self {
        Self::of(&VirtualCharacter::from_character(chi))
    }

    /// Whether σ_k fixes E.
    pub fn fixed_by(&self, k: i64) -> bool {
        let r = k.rem_euclid(self.m as i64) as u64;
        self.h.binary_search(&r).is_ok()
    }

    /// #μ(E).
    pub fn roots_of_unity(&self) -> u64 {
        divisors(self.m)
            .into_iter()
            .filter(|&d| self.h.iter().all(|&h| h % d == 1 % d))
            .fold(1, lcm)
    }
}

fn units_mod(m: u64) -> impl Iterator<Item = i64> {
    (1..=m).filter(move |&k| gcd(k, m) == 1).map(|k| k as i64)
}

/// p1: W*(χ)^σ = W*(χ^σ) det_χ(κ_p(σ))^σ (N𝔣, κ_p(σ)), σ = σ_k.
pub fn p1(chi: &MultiplicativeCharacter, k: i64, backend: Backend) -> Result<Report> {
    let fld = chi.field();
    let ws = w_star(chi, backend)?;
    let m = lcm(ws.value.conductor(), chi.order());
    if gcd(k.unsigned_abs(), m) != 1 {
        return Err(Error::InvalidInput(format!("k = {k} is not prime to {m}")));
    }
    let lhs = ws.value.galois(k)?;
    let twisted = w_star(&chi.pow(k), backend)?;
    let det = chi.eval(&fld.from_int(k))?.galois(k)?;
    let sym = norm_symbol(fld, chi.conductor_exponent() as i64, k)?;
    let rhs = &(&twisted.value * &det.to_cyclotomic()) * &cyc_int(sym as i64);
    Ok(Report::compare(
        "p1",
        Params::character(chi).with("k", k).with("backend", backend),
        Side::from_value(lhs),
        Side::from_value(rhs),
    ))
}

/// σ_k(√p*) = (p, k)_p √p*.
pub fn sqrt_lemma(p: u64, k: i64) -> Result<Report> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let s = sqrt_pstar(p);
    let lhs = s.galois(k)?;
    let sym = hilbert_qp(
        Rational64::from_integer(p as i64),
        Rational64::from_integer(k),
        p,
    )?;
    let rhs = &s * &cyc_int(sym as i64);
    Ok(Report::compare(
        "sqrt-lemma",
        Params::default().with("p", p).with("k", k),
        Side::from_value(lhs),
        Side::from_value(rhs),
    ))
}

/// The power of p beyond which κ_p(σ) kills det and the Hilbert symbol:
/// p^{n+1} for p odd, 2^{n+2} for p = 2.
fn c1_level(p: u64, n: u32) -> u64 {
    if p == 2 {
        2u64.pow(n + 2)
    } else {
        p.pow(n + 1)
    }
}

/// c1: W*(V) ∈ μ_{p^{n+1}} E^* (2^{n+2} for p = 2), checked as W*^σ = W* for
/// every σ on the ambient field fixing E(μ_{p^{n+1}}).
pub fn c1(v: &VirtualCharacter, backend: Backend) -> Result<Vec<Report>> {
    let fld = v.field();
    let p = fld.p();
    let ws = w_star_virtual(v, backend)?;
    let e = ValueField::of(v);
    let n = val_p(e.roots_of_unity(), p);
    let level = c1_level(p, n);
    let m = lcm(lcm(ws.value.conductor(), e.m), level);
    units_mod(m)
        .filter(|&k| e.fixed_by(k) && k as u64 % level == 1 % level)
        .map(|k| {
            Ok(Report::compare(
                "c1",
                Params::virtual_char(v).with("k", k).with("n", n),
                Side::from_value(ws.value.galois(k)?),
                Side::from_value(ws.value.clone()),
            ))
        })
        .collect()
}

/// c2: for det V trivial, W*(V) ∈ E^*, except √p* E^* (p odd, n = 0, N𝔣 not a
/// square) and μ_8 E^* (p = 2, n = 2, N𝔣 not a square). Checked on every σ_k
/// fixing E.
pub fn c2(v: &VirtualCharacter, backend: Backend) -> Result<Vec<Report>> {
    let fld = v.field();
    let p = fld.p();
    if !v.det().is_trivial() {
        return Err(Error::InvalidInput(format!("det of {v} is not trivial")));
    }
    let e = ValueField::of(v);
    let n = val_p(e.roots_of_unity(), p);
    let square = (fld.f() as i64 * conductor_exponent(v)) % 2 == 0;
    let ws = w_star_virtual(v, backend)?;
    enum Case {
        Plain,
        SqrtPstar,
        Mu8,
    }
    let case = match (p == 2, n, square) {
        (false, 0, false) => Case::SqrtPstar,
        (true, 1, _) => {
            return Err(Error::Unsupported(
                "c2 makes no claim for p = 2, n = 1".into(),
            ))
        }
        (true, 2, false) => Case::Mu8,
        _ => Case::Plain,
    };
    let x = match case {
        Case::SqrtPstar => {
            let s = sqrt_pstar(p);
            // 1/√p* = √p*/p*
            let pstar = if p % 4 == 1 { p as i64 } else { -(p as i64) };
            &ws.value * &s.mul_rational(&num_rational::BigRational::new(1.into(), pstar.into()))
        }
        _ => ws.value.clone(),
    };
    let m = lcm(lcm(x.conductor(), e.m), 8);
    units_mod(m)
        .filter(|&k| e.fixed_by(k))
        .map(|k| {
            let moved = x.galois(k)?;
            let (lhs, rhs) = match case {
                // σ(x)/x ∈ μ_8 ⇔ σ(x)^8 = x^8
                Case::Mu8 => (moved.pow(8), x.pow(8)),
                _ => (moved, x.clone()),
            };
            Ok(Report::compare(
                "c2",
                Params::virtual_char(v).with("k", k).with("n", n),
                Side::from_value(lhs),
                Side::from_value(rhs),
            ))
        })
        .collect()
}

/// c3: W*^m against det(1 + m), m = #μ(E).
pub fn c3(v: &VirtualCharacter, backend: Backend) -> Result<Report> {
    let fld = v.field();
    let p = fld.p();
    let ws = w_star_virtual(v, backend)?;
    let root = root_of(&ws)
        .map_err(|_| Error::Unsupported(format!("c3 needs W*({v}) to be a root of unity")))?;
    let m = ValueField::of(v).roots_of_unity();
    let lhs = root.pow(m as i64);
    let rhs = if !m.is_multiple_of(p) {
        RootOfUnity::one()
    } else {
        let det = v.det().eval(&fld.from_int(1 + m as i64))?;
        if p == 2 && !m.is_multiple_of(8) {
            let a = fld.f() as i64 * conductor_exponent(v);
            det * RootOfUnity::from_sign(if a % 2 == 0 { 1 } else { -1 })
        } else {
            det
        }
    };
    Ok(Report::compare(
        "c3",
        Params::virtual_char(v).with("m", m),
        Side::from_root(lhs),
        Side::from_root(rhs),
    ))
}

/// k must be prime to pd; `odd` additionally excludes even k, for which
/// W*^σ ≠ W*^k when W* has a sign component.
fn check_adams_k(v: &VirtualCharacter, k: i64, odd: bool) -> Result<()> {
    let pd = v.field().p() * v.order() * if odd { 2 } else { 1 };
    if gcd(k.unsigned_abs(), pd) != 1 {
        return Err(Error::InvalidInput(format!("k = {k} is not prime to {pd}")));
    }
    Ok(())
}

/// c4: W*(Ψ^k V) = W*(V)^k det(k_p)^{-k} (N𝔣, k_p), with k_p = k, for k
/// odd and prime to pd.
pub fn c4(v: &VirtualCharacter, k: i64, backend: Backend) -> Result<Report> {
    check_adams_k(v, k, true)?;
    let fld = v.field();
    let ws = root_of(&w_star_virtual(v, backend)?)?;
    let lhs = w_star_virtual(&v.adams(k), backend)?;
    let det = v.det().eval(&fld.from_int(k))?;
    let sym = norm_symbol(fld, conductor_exponent(v), k)?;
    let rhs = ws.pow(k) * det.pow(-k) * RootOfUnity::from_sign(sym);
    Ok(Report::compare(
        "c4",
        Params::virtual_char(v)
            .with("k", k)
            .with("backend", backend),
        lhs.into(),
        Side::from_root(rhs),
    ))
}

/// c4 for k ∈ κ(Γ_E): W*(V)^{k−1} = det(k_p) (N𝔣, k_p).
pub fn c4_fixed(v: &VirtualCharacter, k: i64, backend: Backend) -> Result<Report> {
    check_adams_k(v, k, true)?;
    let e = ValueField::of(v);
    if !e.fixed_by(k) {
        return Err(Error::InvalidInput(format!("σ_{k} does not fix E")));
    }
    let fld = v.field();
    let ws = root_of(&w_star_virtual(v, backend)?)?;
    let det = v.det().eval(&fld.from_int(k))?;
    let sym = norm_symbol(fld, conductor_exponent(v), k)?;
    Ok(Report::compare(
        "c4-fixed",
        Params::virtual_char(v)
            .with("k", k)
            .with("backend", backend),
        Side::from_root(ws.pow(k - 1)),
        Side::from_root(det * RootOfUnity::from_sign(sym)),
    ))
}

/// c5: W*(Ψ^k V) = W*(V)^{k^p} (N𝔣, k_p) when μ_p ⊂ E but μ_{p²} ⊄ E.
/// For p | k the formula is read with k_p = 1.
pub fn c5(v: &VirtualCharacter, k: i64, backend: Backend) -> Result<Report> {
    let fld = v.field();
    let p = fld.p();
    if val_p(ValueField::of(v).roots_of_unity(), p) != 1 {
        return Err(Error::InvalidInput(
            "c5 needs μ_p ⊂ E and μ_{p²} ⊄ E".into(),
        ));
    }
    if k <= 0 {
        return Err(Error::InvalidInput("c5 takes k ≥ 1".into()));
    }
    let k_p = if (k as u64).is_multiple_of(p) {
        1
    } else {
        check_adams_k(v, k, false)?;
        k
    };
    let ws = root_of(&w_star_virtual(v, backend)?)?;
    let ord = ws.order();
    let e = pow_mod(k as u64 % ord, p, ord);
    let sym = norm_symbol(fld, conductor_exponent(v), k_p)?;
    let lhs = w_star_virtual(&v.adams(k), backend)?;
    Ok(Report::compare(
        "c5",
        Params::virtual_char(v)
            .with("k", k)
            .with("backend", backend),
        lhs.into(),
        Side::from_root(ws.pow(e as i64) * RootOfUnity::from_sign(sym)),
    ))
}

/// c6: W_p(χ^p) = W_p(χ)^p for p odd, χ^p wild, W_p the p-primary part of W.
pub fn c6(chi: &MultiplicativeCharacter, backend: Backend) -> Result<Report> {
    let p = chi.field().p();
    if p == 2 {
        return Err(Error::InvalidInput("c6 needs p odd".into()));
    }
    let chi_p = chi.pow(p as i64);
    if !chi_p.is_wild() {
        return Err(Error::InvalidInput(format!(
            "{}^p is not wild",
            chi.spec_string()
        )));
    }
    let lhs = w_p_part(&w(&chi_p, backend)?, p)?;
    let rhs = w_p_part(&w(chi, backend)?, p)?.pow(p as i64);
    Ok(Report::compare(
        "c6",
        Params::character(chi).with("backend", backend),
        Side::from_root(lhs),
        Side::from_root(rhs),
    ))
}

fn chi_over_p2(a: &PadicElement) -> Result<MultiplicativeCharacter> {
    let fld = a.field();
    let p2 = (fld.p() * fld.p()) as i64;
    MultiplicativeCharacter::chi_alpha(&a.div(&fld.from_int(p2))?)
}

fn one_minus(chi: &MultiplicativeCharacter) -> Result<VirtualCharacter> {
    VirtualCharacter::one(chi.field()).sub(&VirtualCharacter::from_character(chi))
}

fn require_odd(fld: &UnramifiedField, what: &str) -> Result<()> {
    if fld.p() == 2 {
        return Err(Error::InvalidInput(format!("{what} needs p odd")));
    }
    Ok(())
}

/// c7 a: W_p(χ_{a/p²}) = ψ_K(a^p/p²).
pub fn c7a(a: &PadicElement, backend: Backend) -> Result<Report> {
    let fld = a.field();
    require_odd(fld, "c7")?;
    let p = fld.p();
    let chi = chi_over_p2(a)?;
    let lhs = w_p_part(&w(&chi, backend)?, p)?;
    let rhs = psi(&a.pow(p as i64)?.div(&fld.from_int((p * p) as i64))?)?;
    Ok(Report::compare(
        "c7a",
        Params::field(fld).with("a", a).with("backend", backend),
        Side::from_root(lhs),
        Side::from_root(rhs),
    ))
}

fn product_of_one_minus(
    a: &[PadicElement],
    fld: &Arc<UnramifiedField>,
) -> Result<VirtualCharacter> {
    a.iter().try_fold(VirtualCharacter::one(fld), |acc, x| {
        acc.mul(&one_minus(&chi_over_p2(x)?)?)
    })
}

fn join(a: &[PadicElement]) -> String {
    a.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// c7 b (p factors): W_p(Π(1 − χ_{a_i/p²})) = ψ_K(a_1⋯a_p/p);
/// c7 c (p + 1 factors): the same W_p is 1.
pub fn c7_product(a: &[PadicElement], backend: Backend) -> Result<Report> {
    let fld = a
        .first()
        .ok_or_else(|| Error::InvalidInput("empty product".into()))?
        .field()
        .clone();
    require_odd(&fld, "c7")?;
    let p = fld.p();
    let (name, rhs) = if a.len() as u64 == p {
        let prod = a.iter().fold(fld.one(), |acc, x| acc.mul(x));
        ("c7b", psi(&prod.div(&fld.from_int(p as i64))?)?)
    } else if a.len() as u64 == p + 1 {
        ("c7c", RootOfUnity::one())
    } else {
        return Err(Error::InvalidInput(format!(
            "c7 b/c take p or p + 1 factors, got {}",
            a.len()
        )));
    };
    let v = product_of_one_minus(a, &fld)?;
    let lhs = w_p_part(&w_virtual(&v, backend)?, p)?;
    Ok(Report::compare(
        name,
        Params::field(&fld)
            .with("a", join(a))
            .with("backend", backend),
        Side::from_root(lhs),
        Side::from_root(rhs),
    ))
}

/// c7 d over Q_p: W_p((1 − χ_{1/p^n})^{p^{n−1}}) = ζ_p.
pub fn c7d(p: u64, n: u32, backend: Backend) -> Result<Report> {
    if p == 2 || !is_prime(p) || n < 2 {
        return Err(Error::InvalidInput(
            "c7 d needs an odd prime p and n ≥ 2".into(),
        ));
    }
    let fld = UnramifiedField::new(p, 1, n + 4)?;
    let pn = i64::try_from(p.pow(n)).map_err(|_| Error::InvalidInput("p^n too large".into()))?;
    let chi = MultiplicativeCharacter::chi_alpha(&fld.from_rational(1, pn)?)?;
    let v = one_minus(&chi)?.pow(p.pow(n - 1) as u32)?;
    let lhs = w_p_part(&w_virtual(&v, backend)?, p)?;
    Ok(Report::compare(
        "c7d",
        Params::field(&fld).with("n", n).with("backend", backend),
        Side::from_root(lhs),
        Side::from_root(RootOfUnity::new(p, 1)),
    ))
}

/// W_p((1 − χ_{a_1/p²})(1 − χ_{a_2/p²})) = ψ_K(((a_1 + a_2)^p − a_1^p − a_2^p)/p²),
/// the second Witt component of a_1 + a_2.
pub fn witt(a1: &PadicElement, a2: &PadicElement, backend: Backend) -> Result<Report> {
    let fld = a1.field().clone();
    require_odd(&fld, "witt")?;
    let p = fld.p() as i64;
    let v = product_of_one_minus(&[a1.clone(), a2.clone()], &fld)?;
    let lhs = w_p_part(&w_virtual(&v, backend)?, fld.p())?;
    let poly = a1.add(a2).pow(p)?.sub(&a1.pow(p)?).sub(&a2.pow(p)?);
    let rhs = psi(&poly.div(&fld.from_int(p * p))?)?;
    Ok(Report::compare(
        "witt",
        Params::field(&fld)
            .with("a", join(&[a1.clone(), a2.clone()]))
            .with("backend", backend),
        Side::from_root(lhs),
        Side::from_root(rhs),
    ))
}

/// l1 a: G(α)² = (−1, α^{-1}) for odd conductor, α^{-1} generating 𝔣(χ).
pub fn l1a(chi: &MultiplicativeCharacter) -> Result<Report> {
    let fld = chi.field();
    require_odd(fld, "l1a")?;
    let alpha = chi
        .alpha()
        .ok_or_else(|| Error::InvalidInput("l1a needs a wild character".into()))?;
    if chi.conductor_exponent().is_multiple_of(2) {
        return Err(Error::InvalidInput(
            "l1a needs odd conductor exponent".into(),
        ));
    }
    let g = g_quadratic(chi)?;
    let sym = hilbert_tame_unram(&fld.from_int(-1), &alpha.inv()?)?;
    Ok(Report::compare(
        "l1a",
        Params::character(chi),
        Side::from_root(g.pow(2)),
        Side::from_root(RootOfUnity::from_sign(sym)),
    ))
}

/// The conditions of the l1 b example for (l, p_1, p_2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct L1bConditions {
    /// p_1 ≡ p_2 ≡ 1 mod l.
    pub congruent_mod_l: bool,
    /// l | (p_i − 1)/d_i, d_i the order of 2 mod p_i, for i = 1, 2.
    pub divides: [bool; 2],
    /// p_1 ≡ 1, p_2 ≡ −1 mod 4.
    pub mod_4: bool,
    /// (−1, p_i)_{p_i} for i = 1, 2.
    pub symbols: [i8; 2],
}

impl L1bConditions {
    pub fn all(&self) -> bool {
        self.congruent_mod_l && self.divides.iter().all(|&b| b) && self.mod_4
    }
}

pub fn l1b_conditions(l: u64, p1: u64, p2: u64) -> Result<L1bConditions> {
    for x in [l, p1, p2] {
        if !is_prime(x) || x == 2 {
            return Err(Error::InvalidInput(format!("{x} is not an odd prime")));
        }
    }
    let divides = |p: u64| {
        let d = mult_order(2, p).expect("2 is a unit mod an odd prime");
        ((p - 1) / d).is_multiple_of(l)
    };
    let symbol = |p: u64| {
        hilbert_qp(
            Rational64::from_integer(-1),
            Rational64::from_integer(p as i64),
            p,
        )
    };
    Ok(L1bConditions {
        congruent_mod_l: p1 % l == 1 && p2 % l == 1,
        divides: [divides(p1), divides(p2)],
        mod_4: p1 % 4 == 1 && p2 % 4 == 3,
        symbols: [symbol(p1)?, symbol(p2)?],
    })
}

/// Report for the l1 b example: `equal` holds when every condition is met and
/// the symbol pattern is (+1, −1).
pub fn l1b(l: u64, p1: u64, p2: u64) -> Result<Report> {
    let cond = l1b_conditions(l, p1, p2)?;
    let equal = cond.all() && cond.symbols == [1, -1];
    Ok(Report {
        identity: "l1b".into(),
        params: Params::default()
            .with("l", l)
            .with("p1", p1)
            .with("p2", p2)
            .0,
        lhs: None,
        rhs: None,
        equal,
        details: Some(serde_json::to_value(&cond).expect("plain struct")),
        timing: None,
    })
}

/// Smallest (p_1, p_2) below `bound` satisfying the l1 b conditions for l,
/// minimizing p_1 + p_2.
pub fn l1b_minimal(l: u64, bound: u64) -> Option<(u64, u64)> {
    let primes: Vec<u64> = (3..bound).filter(|&x| is_prime(x)).collect();
    let mut best: Option<(u64, u64)> = None;
    for &a in &primes {
        for &b in &primes {
            let ok = l1b_conditions(l, a, b).map(|c| c.all()).unwrap_or(false);
            if ok && best.is_none_or(|(x, y)| a + b < x + y) {
                best = Some((a, b));
            }
        }
    }
    best
}

/// W(ρ_u) = i^{Tr(((u − 1)/2)²)} over unramified K/Q_2.
pub fn ultra(u: &PadicElement) -> Result<Report> {
    let rho = rho_u(u)?;
    let lhs = w_oracle(&rho)?;
    let rhs = ultra_formula(u)?;
    Ok(Report::compare(
        "ultra-2adic",
        Params::field(u.field())
            .with("u", u)
            .with("rho", rho.spec_string()),
        lhs.into(),
        Side::from_root(rhs),
    ))
}

/// Oracle against closed form.
pub fn agreement(chi: &MultiplicativeCharacter) -> Result<Report> {
    let lhs = w_oracle(chi)?;
    let rhs = w_closed(chi)?;
    Ok(Report::compare(
        "p3-agreement",
        Params::character(chi),
        lhs.into(),
        rhs.into(),
    ))
}

/// Everything `w` reports for a single character.
#[derive(Clone, Debug, Serialize)]
pub struct WRecord {
    pub p: u64,
    pub f: usize,
    pub prec: u32,
    pub character: String,
    pub conductor: u32,
    pub order: u64,
    #[serde(rename = "W")]
    pub w: Side,
    #[serde(rename = "W*")]
    pub w_star: Side,
    pub iota: RootOfUnity,
    /// The closed form, when one applies.
    pub closed: Option<Side>,
    pub agree: Option<bool>,
    pub tame: Option<RootOfUnity>,
    #[serde(rename = "G")]
    pub g: Option<RootOfUnity>,
    #[serde(rename = "W_p")]
    pub w_p: Option<RootOfUnity>,
}

/// Oracle value, closed form (if any), ι, W* and the three factors.
pub fn describe(chi: &MultiplicativeCharacter) -> Result<WRecord> {
    let fld = chi.field();
    let oracle = w_oracle(chi)?;
    let closed = match w_closed(chi) {
        Ok(e) => Some(Side::from(e)),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let parts = if closed.is_some() {
        Some(closed_parts(chi)?)
    } else {
        None
    };
    let agree = closed.as_ref().map(|c| c.value == oracle.value);
    Ok(WRecord {
        p: fld.p(),
        f: fld.f(),
        prec: fld.precision(),
        character: chi.to_string(),
        conductor: chi.conductor_exponent(),
        order: chi.order(),
        w_p: w_p_part(&oracle, fld.p()).ok(),
        w_star: w_star(chi, Backend::Oracle)?.into(),
        iota: iota(chi),
        w: oracle.into(),
        closed,
        agree,
        tame: parts.as_ref().map(|x| x.tame),
        g: parts.as_ref().map(|x| x.g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64, f: usize, n: u32) -> Arc<UnramifiedField> {
        UnramifiedField::new(p, f, n).unwrap()
    }

    fn chi(k: &Arc<UnramifiedField>, num: i64, den: i64) -> MultiplicativeCharacter {
        MultiplicativeCharacter::chi_alpha(&k.from_rational(num, den).unwrap()).unwrap()
    }

    #[test]
    fn c7d_example() {
        let r = c7d(3, 2, Backend::Oracle).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs.unwrap().root, Some(RootOfUnity::new(3, 1)));
    }

    #[test]
    fn c6_example() {
        let k = field(3, 1, 7);
        assert!(c6(&chi(&k, 1, 27), Backend::Oracle).unwrap().equal);
        assert!(c6(&chi(&k, 1, 9), Backend::Oracle).is_err());
    }

    #[test]
    fn p1_example() {
        let k = field(3, 1, 6);
        let c = chi(&k, 1, 9)
            .mul(&MultiplicativeCharacter::tame_char(
                &k,
                1,
                RootOfUnity::one(),
            ))
            .unwrap();
        let r = p1(&c, 5, Backend::Oracle).unwrap();
        assert!(r.equal, "{r:?}");
        assert!(p1(&c, 3, Backend::Oracle).is_err());
    }

    #[test]
    fn sqrt_lemma_examples() {
        for k in [2, 5, 7, 11] {
            assert!(sqrt_lemma(3, k).unwrap().equal);
        }
        assert!(sqrt_lemma(2, 3).unwrap().equal);
        assert!(sqrt_lemma(4, 3).is_err());
    }

    #[test]
    fn value_fields() {
        let k = field(3, 1, 6);
        let e = ValueField::of_character(&chi(&k, 1, 9));
        assert_eq!(e.m, 6);
        assert_eq!(e.h, vec![1]);
        assert_eq!(e.roots_of_unity(), 6);
        // 2 − χ − χ^{-1} has real values
        let c = chi(&k, 1, 27);
        let v = one_minus(&c)
            .unwrap()
            .mul(&one_minus(&c.inverse()).unwrap())
            .unwrap();
        let e = ValueField::of(&v);
        assert_eq!(e.h, vec![1, 17]);
        assert_eq!(e.roots_of_unity(), 2);
    }

    #[test]
    fn l1b_examples() {
        let c = l1b_conditions(3, 109, 31).unwrap();
        assert!(c.all());
        assert_eq!(c.symbols, [1, -1]);
        assert!(l1b(3, 109, 31).unwrap().equal);
        let c = l1b_conditions(3, 7, 31).unwrap();
        assert!(!c.divides[0]);
        let c = l1b_conditions(3, 109, 109).unwrap();
        assert!(!c.mod_4);
        assert_eq!(l1b_minimal(3, 200), Some((109, 31)));
    }

    #[test]
    fn ultra_examples() {
        let k = field(2, 1, 10);
        for u in [5, -1, 3] {
            let r = ultra(&k.from_int(u)).unwrap();
            assert!(r.equal, "{r:?}");
        }
    }

    #[test]
    fn describe_anchor() {
        let k = UnramifiedField::new(3, 1, 6).unwrap();
        let chi = MultiplicativeCharacter::chi_alpha(&k.from_rational(1, 9).unwrap()).unwrap();
        let r = describe(&chi).unwrap();
        assert_eq!(r.w.root, Some(RootOfUnity::new(9, 1)));
        assert_eq!(r.g, Some(RootOfUnity::one()));
        assert_eq!(r.w_p, Some(RootOfUnity::new(9, 1)));
        assert_eq!(r.agree, Some(true));
    }
}
