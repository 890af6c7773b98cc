//! Local root numbers W(χ) of characters of K^*.
//!
//! Two independent backends: [`w_oracle`] sums the normalized Gauss sum over
//! (O_K/p^c)^*, and [`w_closed`] evaluates the closed formulas in terms of
//! α(1 − log α) and a quadratic Gauss sum. Values are exact cyclotomic
//! numbers written in the ambient field Q(ζ_M) with
//! M = lcm(8 or 4p, p^{c+1}, q − 1, order χ).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::lcm;
use crate::character::{psi, MultiplicativeCharacter};
use crate::cyclotomic::{sqrt_p, CyclotomicNumber, RootOfUnity};
use crate::error::{Error, Result};
use crate::padic::{hilbert_2adic_bruteforce, PadicElement};
use crate::virtual_char::VirtualCharacter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Oracle,
    Closed,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Backend::Oracle),
            "closed" => Ok(Backend::Closed),
            _ => Err(Error::Parse(format!("unknown backend {s:?}"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Oracle => "oracle",
            Backend::Closed => "closed",
        })
    }
}

/// An exact root number together with its root-of-unity form when it has one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonValue {
    pub value: CyclotomicNumber,
    pub root: Option<RootOfUnity>,
    pub conductor: u32,
    pub p: u64,
    pub f: usize,
    pub prec: u32,
}

impl EpsilonValue {
    fn from_value(chi: &MultiplicativeCharacter, value: CyclotomicNumber, ambient: u64) -> Self {
        let fld = chi.field();
        let value = value
            .embed(lcm(ambient, value.conductor()))
            .expect("multiple");
        let root = value.as_root_of_unity();
        EpsilonValue {
            value,
            root,
            conductor: chi.conductor_exponent(),
            p: fld.p(),
            f: fld.f(),
            prec: fld.precision(),
        }
    }

    fn from_root(chi: &MultiplicativeCharacter, root: RootOfUnity, ambient: u64) -> Self {
        Self::from_value(chi, root.to_cyclotomic(), ambient)
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.root.is_some()
    }
}

/// lcm(8 or 4p, p^{c+1}, q − 1, order χ).
pub fn ambient_modulus(chi: &MultiplicativeCharacter) -> u64 {
    let fld = chi.field();
    let p = fld.p();
    let base = if p == 2 { 8 } else { 4 * p };
    let c = chi.conductor_exponent();
    lcm(lcm(base, p.pow(c + 1)), lcm(fld.q() - 1, chi.order()))
}

/// q^{-c/2} as an exact cyclotomic number.
fn inv_sqrt_q_power(p: u64, cf: u32) -> CyclotomicNumber {
    if cf.is_multiple_of(2) {
        let den = BigInt::from(p).pow(cf / 2);
        CyclotomicNumber::from_rational(1, &BigRational::new(BigInt::one(), den))
    } else {
        let den = BigInt::from(p).pow(cf.div_ceil(2));
        sqrt_p(p).mul_rational(&BigRational::new(BigInt::one(), den))
    }
}

/// Normalized Gauss sum q^{-c/2} Σ_{x ∈ (O/p^c)^*} χ̄(d^{-1}x) ψ_K(d^{-1}x).
///
/// d^{-1} = α for a purely logarithmic character and p^{-c} otherwise.
pub fn w_oracle(chi: &MultiplicativeCharacter) -> Result<EpsilonValue> {
    let fld = chi.field();
    let c = chi.conductor_exponent();
    let ambient = ambient_modulus(chi);
    if c == 0 {
        return Ok(EpsilonValue::from_root(chi, RootOfUnity::one(), ambient));
    }
    if c > fld.precision() {
        return Err(Error::Precision(format!(
            "conductor exponent {c} exceeds N = {}",
            fld.precision()
        )));
    }
    let purely_wild = chi.on_p().is_one() && chi.tame_exp() == 0 && !chi.sign();
    let d_inv = match (purely_wild, chi.alpha()) {
        (true, Some(a)) => a.clone(),
        _ => fld.from_parts(-(c as i64), vec![1], fld.precision()),
    };
    w_oracle_with(chi, &d_inv)
}

/// The oracle sum for an explicit d^{-1} of valuation −c.
pub fn w_oracle_with(chi: &MultiplicativeCharacter, d_inv: &PadicElement) -> Result<EpsilonValue> {
    let fld = chi.field();
    let p = fld.p();
    let c = chi.conductor_exponent();
    let ambient = ambient_modulus(chi);
    if c == 0 {
        return Ok(EpsilonValue::from_root(chi, RootOfUnity::one(), ambient));
    }
    if d_inv.valuation() != Some(-(c as i64)) {
        return Err(Error::InvalidInput(format!(
            "d^-1 = {d_inv} must have valuation -{c}"
        )));
    }
    let m = lcm(chi.order(), p.pow(c));
    let mut hist = vec![0i64; m as usize];
    for x in fld.unit_residues(c)? {
        let y = d_inv.mul(&x);
        let term = chi.eval(&y)?.inv() * psi(&y)?;
        hist[term.exponent_in(m)? as usize] += 1;
    }
    let sum = CyclotomicNumber::from_histogram(m, &hist);
    let value = &sum * &inv_sqrt_q_power(p, c * fld.f() as u32);
    Ok(EpsilonValue::from_value(chi, value, ambient))
}

/// G(α): 1 for even conductor; for c = 2i + 1 the normalized quadratic sum
/// q^{-1/2} Σ_{z ∈ O/p} ψ_K(α y²/2) with y = p^i z, plus the quartic term
/// α y⁴/4 when p = 2.
pub fn g_quadratic(chi: &MultiplicativeCharacter) -> Result<RootOfUnity> {
    let alpha = chi
        .alpha()
        .ok_or_else(|| Error::Unsupported("G(α) needs a logarithmic component".into()))?;
    let c = chi.conductor_exponent();
    if c.is_multiple_of(2) {
        return Ok(RootOfUnity::one());
    }
    let fld = chi.field();
    let p = fld.p();
    let i = (c - 1) / 2;
    let half = fld.from_rational(1, 2)?;
    let quarter = fld.from_rational(1, 4)?;
    let scale = fld.from_int(p.pow(i) as i64);
    let mut terms = Vec::new();
    for z in fld.all_residues(1)? {
        let y = scale.mul(&z);
        let y2 = y.mul(&y);
        let mut phase = alpha.mul(&y2).mul(&half);
        if p == 2 {
            phase = phase.add(&alpha.mul(&y2).mul(&y2).mul(&quarter));
        }
        terms.push(psi(&phase)?);
    }
    let m = terms.iter().fold(1, |acc, r| lcm(acc, r.order()));
    let mut hist = vec![0i64; m as usize];
    for r in &terms {
        hist[r.exponent_in(m)? as usize] += 1;
    }
    let sum = CyclotomicNumber::from_histogram(m, &hist);
    let g = &sum * &inv_sqrt_q_power(p, fld.f() as u32);
    g.as_root_of_unity().ok_or(Error::NotRootOfUnity)
}

/// α^{2F^{-1} − 1} = F^{-1}(α)² / α.
fn frobenius_square_ratio(alpha: &PadicElement) -> Result<PadicElement> {
    let fa = alpha.frobenius_pow(-1);
    fa.mul(&fa).div(alpha)
}

/// The factors of a closed-form evaluation W = tame · G · W_core.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedParts {
    /// χ_0(d), the tame and unramified part evaluated at d = α^{-1}.
    pub tame: RootOfUnity,
    /// The normalized quadratic Gauss sum (1 for even conductor).
    pub g: RootOfUnity,
    /// ψ_K(α(1 − log α)) together with its correction terms.
    pub core: RootOfUnity,
}

impl ClosedParts {
    pub fn product(&self) -> RootOfUnity {
        self.tame * self.g * self.core
    }
}

/// Closed-form evaluation of W for a character with a logarithmic part.
pub fn closed_parts(chi: &MultiplicativeCharacter) -> Result<ClosedParts> {
    if chi.sign() {
        return Err(Error::Unsupported(
            "closed forms do not cover the 2-adic sign component; use the oracle".into(),
        ));
    }
    let alpha = chi.alpha().ok_or_else(|| {
        Error::Unsupported("closed forms need a wild character; use the oracle".into())
    })?;
    let fld = chi.field();
    let p = fld.p();
    let n = chi.conductor_exponent();
    let one = fld.one();
    let tame = chi.tame_part().eval(&alpha.inv()?)?;
    let base = alpha.mul(&one.sub(&alpha.log()?));
    if p == 2 && n == 2 {
        return Err(Error::Unsupported(
            "no closed form for 2-adic conductor 2; use the oracle".into(),
        ));
    }
    let (g, core) = if p != 2 {
        let mut core = psi(&base)?;
        if p == 3 && n == 3 {
            core = core * psi(&frobenius_square_ratio(alpha)?.mul_int(9))?;
        }
        (g_quadratic(chi)?, core)
    } else if n % 2 == 1 {
        (g_quadratic(chi)?, psi(&base)?)
    } else if n >= 6 {
        let corr = frobenius_square_ratio(alpha)?.mul_int(1 << (n - 3));
        (RootOfUnity::one(), psi(&base.add(&corr))?)
    } else {
        // v(α) = −4: d^{-1} = δ = α − 2α^{F^{-1}}
        let delta = alpha.sub(&alpha.frobenius_pow(-1).mul_int(2));
        let phase = delta.sub(&alpha.mul(&delta.log()?));
        (RootOfUnity::one(), psi(&phase)?)
    };
    Ok(ClosedParts { tame, g, core })
}

pub fn w_closed(chi: &MultiplicativeCharacter) -> Result<EpsilonValue> {
    let parts = closed_parts(chi)?;
    Ok(EpsilonValue::from_root(
        chi,
        parts.product(),
        ambient_modulus(chi),
    ))
}

pub fn w(chi: &MultiplicativeCharacter, backend: Backend) -> Result<EpsilonValue> {
    match backend {
        Backend::Oracle => w_oracle(chi),
        Backend::Closed => w_closed(chi),
    }
}

/// ι(χ) = i^{((q^c − 1)/2)²} for p odd, 1 for p = 2.
pub fn iota(chi: &MultiplicativeCharacter) -> RootOfUnity {
    let fld = chi.field();
    if fld.p() == 2 {
        return RootOfUnity::one();
    }
    let c = chi.conductor_exponent() as u64;
    // q^c mod 4 decides the parity of (q^c − 1)/2
    let qc = crate::arith::pow_mod(fld.q(), c, 4);
    if qc == 3 {
        RootOfUnity::new(4, 1)
    } else {
        RootOfUnity::one()
    }
}

/// ι extended multiplicatively: Π ι(χ_i)^{n_i}. ι is only
/// pinned up to sign, and the multiplicative choice keeps W* additive.
pub fn iota_virtual(v: &VirtualCharacter) -> RootOfUnity {
    v.terms()
        .fold(RootOfUnity::one(), |acc, (c, n)| acc * iota(c).pow(n))
}

pub fn w_star(chi: &MultiplicativeCharacter, backend: Backend) -> Result<EpsilonValue> {
    let e = w(chi, backend)?;
    let value = &e.value * &iota(chi).to_cyclotomic();
    Ok(EpsilonValue::from_value(chi, value, ambient_modulus(chi)))
}

/// Π W(χ_i)^{n_i}, using W^{-1} = W̄ (|W| = 1).
pub fn w_virtual(v: &VirtualCharacter, backend: Backend) -> Result<EpsilonValue> {
    virtual_product(v, |c| w(c, backend))
}

pub fn w_star_virtual(v: &VirtualCharacter, backend: Backend) -> Result<EpsilonValue> {
    virtual_product(v, |c| w_star(c, backend))
}

fn virtual_product<F>(v: &VirtualCharacter, mut eval: F) -> Result<EpsilonValue>
where
    F: FnMut(&MultiplicativeCharacter) -> Result<EpsilonValue>,
{
    let fld = v.field();
    let mut acc = CyclotomicNumber::one();
    let mut ambient = 1;
    let mut conductor: i64 = 0;
    for (c, n) in v.terms() {
        let e = eval(c)?;
        ambient = lcm(ambient, e.value.conductor());
        conductor += n * e.conductor as i64;
        let base = if n < 0 {
            e.value.conj()
        } else {
            e.value.clone()
        };
        acc = &acc * &base.pow(n.unsigned_abs());
    }
    let value = acc.embed(lcm(ambient, acc.conductor())).expect("multiple");
    let root = value.as_root_of_unity();
    Ok(EpsilonValue {
        value,
        root,
        conductor: conductor.max(0) as u32,
        p: fld.p(),
        f: fld.f(),
        prec: fld.precision(),
    })
}

/// The p-primary factor of a root-of-unity valued W.
pub fn w_p_part(e: &EpsilonValue, p: u64) -> Result<RootOfUnity> {
    e.root
        .map(|r| r.primary_part(p))
        .ok_or(Error::NotRootOfUnity)
}

/// The quadratic character ρ_u(x) = (u, x) over unramified K/Q_2, u ∈ 1 + 2O_K.
///
/// χ(2) and the sign component come from (u, 2) and (u, −1); the
/// logarithmic part α ∈ ⅛O_K (or none) is found by matching (u, x) on
/// representatives of (O_K/8)^*.
pub fn rho_u(u: &PadicElement) -> Result<MultiplicativeCharacter> {
    let fld = u.field().clone();
    if fld.p() != 2 {
        return Err(Error::InvalidInput("ρ_u is defined for p = 2".into()));
    }
    let on_p = RootOfUnity::from_sign(hilbert_2adic_bruteforce(u, &fld.from_int(2))?);
    let sign = hilbert_2adic_bruteforce(u, &fld.from_int(-1))? == -1;
    let units: Vec<PadicElement> = fld.unit_residues(3)?.collect();
    let targets: Vec<i8> = units
        .iter()
        .map(|x| hilbert_2adic_bruteforce(u, x))
        .collect::<Result<_>>()?;
    let eighth = fld.from_rational(1, 8)?;
    for a in fld.all_residues(2)? {
        let alpha = (!a.is_zero()).then(|| a.mul(&eighth));
        let chi = MultiplicativeCharacter::new(&fld, on_p, 0, alpha, sign)?;
        let ok = units.iter().zip(&targets).all(|(x, &t)| {
            chi.eval(x)
                .map(|r| r == RootOfUnity::from_sign(t))
                .unwrap_or(false)
        });
        if ok {
            return Ok(chi);
        }
    }
    Err(Error::InvalidInput(format!(
        "no character matches (u, ·) for u = {u}"
    )))
}

/// i^{Tr(((u − 1)/2)²)}.
pub fn ultra_formula(u: &PadicElement) -> Result<RootOfUnity> {
    let fld = u.field().clone();
    if fld.p() != 2 || u.valuation() != Some(0) || u.residue_code() != 1 {
        return Err(Error::InvalidInput(format!("{u} is not a 2-adic 1-unit")));
    }
    let y = u.sub(&fld.one()).mul(&fld.from_rational(1, 2)?);
    let t = y.mul(&y).trace().coeffs_mod(2)?;
    Ok(RootOfUnity::new(4, t[0] as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::UnramifiedField;

    fn chi(p: u64, f: usize, num: i64, den: i64) -> MultiplicativeCharacter {
        let k = UnramifiedField::new(p, f, 8).unwrap();
        MultiplicativeCharacter::chi_alpha(&k.from_rational(num, den).unwrap()).unwrap()
    }

    #[test]
    fn anchor_value() {
        let c = chi(3, 1, 1, 9);
        let w = w_oracle(&c).unwrap();
        assert_eq!(w.root, Some(RootOfUnity::new(9, 1)));
        assert_eq!(w, w_closed(&c).unwrap());
        assert_eq!(w_p_part(&w, 3).unwrap(), RootOfUnity::new(9, 1));
    }

    #[test]
    fn unramified_is_one() {
        let k = UnramifiedField::new(5, 1, 6).unwrap();
        let c = MultiplicativeCharacter::tame_char(&k, 0, RootOfUnity::new(7, 3));
        assert_eq!(w_oracle(&c).unwrap().root, Some(RootOfUnity::one()));
        assert!(w_closed(&c).is_err());
    }

    #[test]
    fn tame_quadratic_q5() {
        // the quadratic Gauss sum over F_5 is √5, so W = 1
        let k = UnramifiedField::new(5, 1, 6).unwrap();
        let c = MultiplicativeCharacter::tame_char(&k, 2, RootOfUnity::one());
        let w = w_oracle(&c).unwrap();
        assert_eq!(w.root, Some(RootOfUnity::one()));
        // over F_3 it is i√3, so W = i
        let k3 = UnramifiedField::new(3, 1, 6).unwrap();
        let c3 = MultiplicativeCharacter::tame_char(&k3, 1, RootOfUnity::one());
        assert_eq!(w_oracle(&c3).unwrap().root, Some(RootOfUnity::new(4, 1)));
    }

    #[test]
    fn modulus_one_for_tame_cubic() {
        let k = UnramifiedField::new(7, 1, 4).unwrap();
        let c = MultiplicativeCharacter::tame_char(&k, 2, RootOfUnity::one());
        let w = w_oracle(&c).unwrap();
        assert_eq!(&w.value * &w.value.conj(), CyclotomicNumber::one());
    }

    #[test]
    fn gauss_sum_square() {
        let c = chi(3, 1, 1, 27);
        let g = g_quadratic(&c).unwrap();
        assert_eq!(g.order(), 4);
        let c5 = chi(5, 1, 1, 125);
        assert!(4 % g_quadratic(&c5).unwrap().order() == 0);
        assert!(g_quadratic(&chi(3, 1, 1, 9)).unwrap().is_one());
    }

    #[test]
    fn iota_values() {
        assert!(iota(&chi(3, 1, 1, 9)).is_one());
        let k = UnramifiedField::new(3, 1, 4).unwrap();
        let t = MultiplicativeCharacter::tame_char(&k, 1, RootOfUnity::one());
        assert_eq!(iota(&t), RootOfUnity::new(4, 1));
        assert!(iota(&chi(2, 1, 1, 8)).is_one());
    }

    #[test]
    fn virtual_additivity() {
        let a = chi(3, 1, 1, 9);
        let b = chi(3, 1, 2, 27);
        let v = VirtualCharacter::from_character(&a)
            .add(&VirtualCharacter::from_character(&b))
            .unwrap();
        let wa = w_oracle(&a).unwrap();
        let wb = w_oracle(&b).unwrap();
        assert_eq!(
            w_virtual(&v, Backend::Oracle).unwrap().value,
            &wa.value * &wb.value
        );
        let zero = VirtualCharacter::zero(a.field());
        assert_eq!(
            w_virtual(&zero, Backend::Oracle).unwrap().value,
            CyclotomicNumber::one()
        );
    }

    #[test]
    fn w_p_examples() {
        let e = EpsilonValue {
            value: CyclotomicNumber::one(),
            root: Some(RootOfUnity::new(36, 13)),
            conductor: 2,
            p: 3,
            f: 1,
            prec: 4,
        };
        // ζ_9·i = ζ_36^{4+9}
        assert_eq!(w_p_part(&e, 3).unwrap(), RootOfUnity::new(9, 1));
        let six = EpsilonValue {
            root: Some(RootOfUnity::new(6, 1)),
            ..e.clone()
        };
        assert_eq!(w_p_part(&six, 3).unwrap(), RootOfUnity::new(3, 2));
        let none = EpsilonValue { root: None, ..e };
        assert!(w_p_part(&none, 3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let w = w_oracle(&chi(3, 1, 1, 27)).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        let back: EpsilonValue = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }
}
