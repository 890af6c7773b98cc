//! The additive character ψ_K and finite-order characters of K^*.
//!
//! Writing x = p^v · ω(x̄) · u₁ with u₁ a 1-unit, a character is
//!
//! χ(x) = w^v · ζ_{q−1}^{t·j} · s(u₁)^e · ψ_K(α·log x)
//!
//! where ω(x̄) = g^j for the fixed Teichmüller generator g, w = χ(p), and for
//! p = 2 the sign factor s(1 + 2y) = (−1)^{y₀} (y₀ the first coordinate of ȳ)
//! supplies the characters that are nontrivial on −1, which the logarithm
//! cannot see.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{self, gcd, lcm};
use crate::cyclotomic::{GaloisElement, RootOfUnity};
use crate::error::{Error, Result};
use crate::padic::{format_poly, PadicElement, UnramifiedField};

/// ψ_K(x) = exp(2πi {Tr_{K/Q_p} x}).
pub fn psi(x: &PadicElement) -> Result<RootOfUnity> {
    let v = match x.valuation() {
        None => return Ok(RootOfUnity::one()),
        Some(v) if v >= 0 => return Ok(RootOfUnity::one()),
        Some(v) => v,
    };
    let (_, t, rel) = x.trace_parts();
    let depth = (-v) as u32;
    if depth > rel {
        return Err(Error::Precision(format!(
            "ψ needs {depth} digits of {x}, only {rel} known"
        )));
    }
    let p = x.field().p();
    let m = p.pow(depth);
    Ok(RootOfUnity::new(m, (t % m) as i64))
}

#[derive(Clone)]
pub struct MultiplicativeCharacter {
    field: Arc<UnramifiedField>,
    on_p: RootOfUnity,
    tame: u64,
    alpha: Option<PadicElement>,
    sign: bool,
}

/// Canonical representative of α modulo the annihilator of log U_1:
/// p^{-1}O_K for p odd, ¼Z_2 + ½O_K for p = 2 (log U_1 = 2·AS(F_q) + 4O_K,
/// AS the trace-zero residues).
fn canonical_alpha(a: &PadicElement) -> Result<Option<PadicElement>> {
    let fld = a.field();
    let v = match a.valuation() {
        Some(v) if v < -1 => v,
        _ => return Ok(None),
    };
    if v + (a.relative_precision() as i64) < -1 {
        return Err(Error::Precision(format!(
            "alpha = {a} is not known modulo p^-1"
        )));
    }
    let mut b = a.truncate(-1);
    if fld.p() == 2 {
        let quarter = fld.from_rational(1, 4)?;
        let digit = b.sub(&b.truncate(-2)).mul(&fld.from_int(4));
        if digit.coeffs_mod(1)?[0] == 1 {
            b = b.sub(&quarter).truncate(-1);
        }
    }
    Ok(if b.is_zero() { None } else { Some(b) })
}

impl MultiplicativeCharacter {
    /// Assembles a character from its components, canonicalizing α modulo
    /// the annihilator of log(1-units).
    pub fn new(
        field: &Arc<UnramifiedField>,
        on_p: RootOfUnity,
        tame: i64,
        alpha: Option<PadicElement>,
        sign: bool,
    ) -> Result<Self> {
        if sign && field.p() != 2 {
            return Err(Error::InvalidInput(
                "the sign component exists only for p = 2".into(),
            ));
        }
        let alpha = match alpha {
            Some(a) => {
                if *a.field() != *field {
                    return Err(Error::FieldMismatch(
                        format!("{:?}", (field.p(), field.f(), field.precision())),
                        "alpha".into(),
                    ));
                }
                canonical_alpha(&a)?
            }
            None => None,
        };
        Ok(MultiplicativeCharacter {
            field: field.clone(),
            on_p,
            tame: arith::reduce(tame as i128, field.q() - 1),
            alpha,
            sign,
        })
    }

    pub fn trivial(field: &Arc<UnramifiedField>) -> Self {
        Self::new(field, RootOfUnity::one(), 0, None, false).expect("trivial character")
    }

    /// χ(ω) = ζ_{q−1}^t, χ(p) = w, trivial on 1-units.
    pub fn tame_char(field: &Arc<UnramifiedField>, t: i64, w: RootOfUnity) -> Self {
        Self::new(field, w, t, None, false).expect("tame character")
    }

    /// χ_α(x) = ψ_K(α · log x).
    pub fn chi_alpha(alpha: &PadicElement) -> Result<Self> {
        Self::new(
            alpha.field(),
            RootOfUnity::one(),
            0,
            Some(alpha.clone()),
            false,
        )
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.field
    }

    pub fn on_p(&self) -> RootOfUnity {
        self.on_p
    }

    pub fn tame_exp(&self) -> u64 {
        self.tame
    }

    pub fn alpha(&self) -> Option<&PadicElement> {
        self.alpha.as_ref()
    }

    pub fn sign(&self) -> bool {
        self.sign
    }

    pub fn is_trivial(&self) -> bool {
        self.on_p.is_one() && self.tame == 0 && self.alpha.is_none() && !self.sign
    }

    /// Wild means nontrivial on the 1-units.
    pub fn is_wild(&self) -> bool {
        self.alpha.is_some() || self.sign
    }

    pub fn wild_part(&self) -> Self {
        Self {
            on_p: RootOfUnity::one(),
            tame: 0,
            ..self.clone()
        }
    }

    pub fn tame_part(&self) -> Self {
        Self {
            alpha: None,
            sign: false,
            ..self.clone()
        }
    }

    /// Order of χ_α alone, n = −v(α): p^{n−1} for p odd; for p = 2 it is
    /// 2^{n−2} when the leading residue of α lies in F_2, else 2^{n−1}.
    pub fn wild_order(&self) -> u64 {
        match &self.alpha {
            None => 1,
            Some(a) => {
                let n = (-a.valuation().unwrap()) as u32;
                let p = self.field.p();
                if p == 2 && a.residue_code() == 1 {
                    2u64.pow(n - 2)
                } else {
                    p.pow(n - 1)
                }
            }
        }
    }

    pub fn order(&self) -> u64 {
        let q1 = self.field.q() - 1;
        let tame_order = q1 / gcd(self.tame, q1);
        let sign_order = if self.sign { 2 } else { 1 };
        lcm(
            lcm(self.on_p.order(), tame_order),
            lcm(sign_order, self.wild_order()),
        )
    }

    pub fn conductor_exponent(&self) -> u32 {
        if let Some(a) = &self.alpha {
            (-a.valuation().unwrap()) as u32
        } else if self.sign {
            2
        } else if self.tame != 0 {
            1
        } else {
            0
        }
    }

    /// χ(x) for x ≠ 0.
    pub fn eval(&self, x: &PadicElement) -> Result<RootOfUnity> {
        if **x.field() != *self.field {
            return Err(Error::FieldMismatch("character".into(), "argument".into()));
        }
        let v = x.valuation().ok_or(Error::DivisionByZero)?;
        let mut value = self.on_p.pow(v);
        let q1 = self.field.q() - 1;
        if self.tame != 0 {
            let j = self.field.dlog(x.residue_code())?;
            value = value * RootOfUnity::new(q1, arith::mul_mod(self.tame, j, q1) as i64);
        }
        if self.sign {
            let unit = self
                .field
                .from_parts(0, x.unit_coeffs().to_vec(), x.relative_precision());
            let u1 = unit.div(&unit.teichmuller_part()?)?;
            let y = u1.sub(&self.field.one());
            // y = 2·y' with y' integral; the sign reads the constant coordinate of ȳ'
            let coords = y.mul(&self.field.from_rational(1, 2)?).coeffs_mod(1)?;
            if coords[0] % 2 == 1 {
                value = value * RootOfUnity::minus_one();
            }
        }
        if let Some(a) = &self.alpha {
            value = value * psi(&a.mul(&x.log()?))?;
        }
        Ok(value)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch(self.describe(), other.describe()));
        }
        let alpha = match (&self.alpha, &other.alpha) {
            (Some(a), Some(b)) => Some(a.add(b)),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        Self::new(
            &self.field,
            self.on_p * other.on_p,
            (self.tame + other.tame) as i64,
            alpha,
            self.sign ^ other.sign,
        )
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// χ^k; this is also the Adams operation Ψ^k on degree-one characters.
    pub fn pow(&self, k: i64) -> Self {
        let q1 = self.field.q() - 1;
        let alpha = self.alpha.as_ref().map(|a| a.mul_int(k));
        Self::new(
            &self.field,
            self.on_p.pow(k),
            arith::reduce(self.tame as i128 * k as i128, q1) as i64,
            alpha,
            self.sign && k.rem_euclid(2) == 1,
        )
        .expect("powers of a character are characters")
    }

    pub fn adams(&self, k: i64) -> Self {
        self.pow(k)
    }

    /// x ↦ σ(χ(x)); σ must act on the values, i.e. order(χ) | modulus(σ).
    pub fn galois_twist(&self, sigma: &GaloisElement) -> Result<Self> {
        if !sigma.modulus().is_multiple_of(self.order()) {
            return Err(Error::NotDivisible {
                m: self.order(),
                target: sigma.modulus(),
            });
        }
        Ok(self.pow(sigma.k() as i64))
    }

    /// (m_E, n): the values generate E = Q(ζ_{m_E}) and p^n = #μ_{p^∞}(E).
    pub fn values_field(&self) -> (u64, u32) {
        let m = self.order();
        (m, arith::val_p(lcm(2, m), self.field.p()))
    }

    /// Comparison key independent of the field handle.
    pub fn key(&self) -> CharKey {
        CharKey {
            on_p: self.on_p,
            tame: self.tame,
            alpha: self.alpha.as_ref().map(|a| a.key()),
            sign: self.sign,
        }
    }

    fn describe(&self) -> String {
        format!("{self}")
    }

    /// Character spec string in the CLI grammar.
    pub fn spec_string(&self) -> String {
        let mut parts = Vec::new();
        if let Some(a) = &self.alpha {
            let poly = format_poly(a.unit_coeffs());
            let compound = a.unit_coeffs().iter().filter(|&&c| c != 0).count() > 1;
            let poly = if compound { format!("({poly})") } else { poly };
            parts.push(format!(
                "alpha={poly}/{}^{}",
                self.field.p(),
                -a.valuation().unwrap()
            ));
        }
        if self.tame != 0 {
            parts.push(format!("tame={}", self.tame));
        }
        if !self.on_p.is_one() {
            parts.push(format!(
                "onp={}:{}",
                self.on_p.order(),
                self.on_p.exponent()
            ));
        }
        if self.sign {
            parts.push("sign=1".into());
        }
        if parts.is_empty() {
            "trivial".into()
        } else {
            parts.join(";")
        }
    }

    pub fn summary(&self) -> CharacterSummary {
        CharacterSummary {
            spec: self.spec_string(),
            p: self.field.p(),
            f: self.field.f(),
            alpha: self.alpha.as_ref().map(|a| a.to_string()),
            tame: self.tame,
            on_p: self.on_p,
            sign: self.sign,
            conductor: self.conductor_exponent(),
            order: self.order(),
        }
    }
}

/// JSON echo of a parsed character.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterSummary {
    pub spec: String,
    pub p: u64,
    pub f: usize,
    pub alpha: Option<String>,
    pub tame: u64,
    pub on_p: RootOfUnity,
    pub sign: bool,
    pub conductor: u32,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharKey {
    on_p: RootOfUnity,
    tame: u64,
    alpha: Option<(i64, Vec<u64>)>,
    sign: bool,
}

impl PartialEq for MultiplicativeCharacter {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.key() == other.key()
    }
}

impl Eq for MultiplicativeCharacter {}

impl PartialOrd for MultiplicativeCharacter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiplicativeCharacter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for MultiplicativeCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec_string())
    }
}

impl fmt::Debug for MultiplicativeCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "χ[{}; p={}, f={}]",
            self.spec_string(),
            self.field.p(),
            self.field.f()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3(n: u32) -> Arc<UnramifiedField> {
        UnramifiedField::new(3, 1, n).unwrap()
    }

    #[test]
    fn psi_examples() {
        let k = q3(6);
        assert!(psi(&k.one()).unwrap().is_one());
        assert_eq!(
            psi(&k.from_rational(1, 9).unwrap()).unwrap(),
            RootOfUnity::new(9, 1)
        );
        assert_eq!(
            psi(&k.from_rational(21, 9).unwrap()).unwrap(),
            RootOfUnity::new(3, 1)
        );
    }

    #[test]
    fn chi_alpha_basics() {
        let k = q3(6);
        let triv = MultiplicativeCharacter::chi_alpha(&k.from_rational(1, 3).unwrap()).unwrap();
        assert!(triv.is_trivial());
        let c = MultiplicativeCharacter::chi_alpha(&k.from_rational(1, 27).unwrap()).unwrap();
        assert_eq!(c.conductor_exponent(), 3);
        assert_eq!(c.order(), 9);
        let c9 = MultiplicativeCharacter::chi_alpha(&k.from_rational(1, 9).unwrap()).unwrap();
        assert_eq!(c9.eval(&k.from_int(4)).unwrap(), RootOfUnity::new(3, 1));
        assert!(c9.eval(&k.from_int(3)).unwrap().is_one());
        assert!(c9.eval(&k.from_int(-1)).unwrap().is_one());

        let k2 = UnramifiedField::new(2, 1, 8).unwrap();
        let t = MultiplicativeCharacter::chi_alpha(&k2.from_rational(1, 4).unwrap()).unwrap();
        assert!(t.is_trivial());
        let e = MultiplicativeCharacter::chi_alpha(&k2.from_rational(1, 8).unwrap()).unwrap();
        assert_eq!((e.conductor_exponent(), e.order()), (3, 2));
    }

    #[test]
    fn canonical_alpha() {
        let k = q3(6);
        let a = MultiplicativeCharacter::chi_alpha(&k.from_rational(1, 9).unwrap()).unwrap();
        let b = MultiplicativeCharacter::chi_alpha(&k.from_rational(4, 9).unwrap()).unwrap();
        let c = MultiplicativeCharacter::chi_alpha(&k.from_rational(2, 9).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.spec_string(), "alpha=1/3^2");
    }

    #[test]
    fn tame_characters() {
        let k = UnramifiedField::new(5, 1, 4).unwrap();
        let triv = MultiplicativeCharacter::tame_char(&k, 0, RootOfUnity::one());
        assert!(triv.is_trivial());
        assert_eq!(triv.conductor_exponent(), 0);
        let quad = MultiplicativeCharacter::tame_char(&k, 2, RootOfUnity::one());
        assert_eq!(quad.order(), 2);
        let mixed = MultiplicativeCharacter::tame_char(&k, 1, RootOfUnity::new(6, 1));
        assert_eq!(mixed.order(), 12);
        assert!(quad.eval(&k.from_int(6)).unwrap().is_one());
        assert_eq!(quad.eval(&k.from_int(2)).unwrap(), RootOfUnity::minus_one());
    }

    #[test]
    fn adams_and_twist() {
        let k = q3(6);
        let c = MultiplicativeCharacter::chi_alpha(&k.from_rational(1, 27).unwrap()).unwrap();
        assert_eq!(c.adams(1), c);
        assert_eq!(c.adams(3).order(), 3);
        let s = GaloisElement::new(9, 2).unwrap();
        let tw = c.galois_twist(&s).unwrap();
        assert_eq!(
            tw,
            MultiplicativeCharacter::chi_alpha(&k.from_rational(2, 27).unwrap()).unwrap()
        );
        assert!(c.galois_twist(&GaloisElement::new(3, 2).unwrap()).is_err());
        assert_eq!(c.values_field(), (9, 2));
        assert_eq!(MultiplicativeCharacter::trivial(&k).values_field(), (1, 0));
        let k2 = UnramifiedField::new(2, 1, 8).unwrap();
        let e = MultiplicativeCharacter::chi_alpha(&k2.from_rational(1, 8).unwrap()).unwrap();
        assert_eq!(e.values_field(), (2, 1));
    }

    #[test]
    fn sign_component() {
        let k2 = UnramifiedField::new(2, 1, 8).unwrap();
        let s = MultiplicativeCharacter::new(&k2, RootOfUnity::one(), 0, None, true).unwrap();
        assert_eq!(s.eval(&k2.from_int(-1)).unwrap(), RootOfUnity::minus_one());
        assert_eq!(s.eval(&k2.from_int(3)).unwrap(), RootOfUnity::minus_one());
        assert!(s.eval(&k2.from_int(5)).unwrap().is_one());
        assert_eq!(s.conductor_exponent(), 2);
        assert!(MultiplicativeCharacter::new(&q3(4), RootOfUnity::one(), 0, None, true).is_err());
    }
}
