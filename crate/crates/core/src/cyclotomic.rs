//! Exact arithmetic in cyclotomic fields Q(ζ_m).
//!
//! Elements are stored densely in the power basis 1, ζ_m, …, ζ_m^{φ(m)-1} with
//! integer numerators over one positive common denominator. Operands with
//! different conductors are compared and combined in Q(ζ_lcm); the conductor is
//! never minimized implicitly.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, euler_phi, factor, gcd, lcm};
use crate::error::{Error, Result};

/// Coefficients of Φ_m, constant term first.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(poly) = cache.lock().unwrap().get(&m) {
        return poly.clone();
    }
    let poly = Arc::new(compute_cyclotomic(m));
    cache.lock().unwrap().insert(m, poly.clone());
    poly
}

fn compute_cyclotomic(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    let mut poly: Vec<i64> = vec![-1, 1];
    let mut rad = 1u64;
    for (p, _) in factor(m) {
        // Φ_{np}(x) = Φ_n(x^p) / Φ_n(x) for p ∤ n
        let lifted = substitute_power(&poly, p as usize);
        poly = exact_div_monic(&lifted, &poly);
        rad *= p;
    }
    substitute_power(&poly, (m / rad) as usize)
}

fn substitute_power(poly: &[i64], e: usize) -> Vec<i64> {
    let mut out = vec![0; (poly.len() - 1) * e + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i * e] = c;
    }
    out
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Reduces coefficients of a polynomial already folded modulo x^m − 1
/// (length m) modulo Φ_m, returning the φ(m) power-basis coordinates.
fn reduce_mod_cyclotomic(m: u64, mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
    let phi = cyclotomic_polynomial(m);
    let d = phi.len() - 1;
    let terms: Vec<(usize, i64)> = phi[..d]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, c))
        .collect();
    for i in (d..coeffs.len()).rev() {
        if coeffs[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut coeffs[i]);
        for &(j, pj) in &terms {
            coeffs[i - d + j] -= &c * pj;
        }
    }
    coeffs.truncate(d);
    coeffs
}

/// An exact element of Q(ζ_m).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawCyclotomic", into = "RawCyclotomic")]
pub struct CyclotomicNumber {
    m: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CyclotomicNumber {
    fn from_parts(m: u64, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut x = CyclotomicNumber { m, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    /// Builds Σ a_j ζ_m^{e_j} from exponent/coefficient pairs.
    pub fn from_terms<I>(m: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        assert!(m >= 1, "conductor must be positive");
        let mut folded = vec![BigInt::zero(); m as usize];
        for (e, c) in terms {
            folded[arith::reduce(e as i128, m) as usize] += c;
        }
        Self::from_parts(m, reduce_mod_cyclotomic(m, folded), BigInt::one())
    }

    /// Σ counts[e] ζ_m^e for a histogram indexed by exponent.
    pub fn from_histogram(m: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len() as u64, m);
        let folded = counts.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_parts(m, reduce_mod_cyclotomic(m, folded), BigInt::one())
    }

    pub fn zero(m: u64) -> Self {
        Self::from_rational(m, &BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(1, &BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(m: u64, r: &BigRational) -> Self {
        let d = euler_phi(m) as usize;
        let mut num = vec![BigInt::zero(); d];
        num[0] = r.numer().clone();
        Self::from_parts(m, num, r.denom().clone())
    }

    /// ζ_m^k.
    pub fn root_of_unity(m: u64, k: i64) -> Self {
        Self::from_terms(m, [(k, BigInt::one())])
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// The same number written in Q(ζ_target); requires m | target.
    pub fn embed(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.m) {
            return Err(Error::NotDivisible { m: self.m, target });
        }
        if target == self.m {
            return Ok(self.clone());
        }
        let step = (target / self.m) as i64;
        let mut x = Self::from_terms(
            target,
            self.num
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as i64 * step, c.clone())),
        );
        x.den = self.den.clone();
        x.normalize();
        Ok(x)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = lcm(a.m, b.m);
        (a.embed(m).unwrap(), b.embed(m).unwrap())
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        Self::from_parts(
            self.m,
            self.num.iter().map(|c| c * r.numer()).collect(),
            &self.den * r.denom(),
        )
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_rational(self.m, &BigRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Applies ζ_m ↦ ζ_m^k; requires gcd(k, m) = 1.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let kk = arith::reduce(k as i128, self.m);
        if gcd(kk, self.m) != 1 {
            return Err(Error::InvalidInput(format!(
                "galois exponent {k} is not coprime to {}",
                self.m
            )));
        }
        let mut x = Self::from_terms(
            self.m,
            self.num
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| ((j as u64 * kk % self.m) as i64, c.clone())),
        );
        x.den = self.den.clone();
        x.normalize();
        Ok(x)
    }

    /// Complex conjugate, i.e. the Galois element k = −1.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit mod every m")
    }

    /// Image under ζ_m ↦ exp(2πi/m), in double precision.
    pub fn to_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = 2.0 * PI * j as f64 / self.m as f64;
            acc += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN) / den, theta);
        }
        acc
    }

    /// Complex approximation rounded to `digits` decimals. Double precision
    /// caps the meaningful digits at 15.
    pub fn complex_embedding(&self, digits: u32) -> Complex64 {
        let digits = digits.clamp(1, 15) as i32;
        let z = self.to_complex();
        let scale = 10f64.powi(digits);
        Complex64::new(
            (z.re * scale).round() / scale,
            (z.im * scale).round() / scale,
        )
    }

    /// Returns the root of unity equal to this element, if it is one.
    ///
    /// Roots of unity in Q(ζ_m) have order dividing lcm(2, m). The candidate
    /// exponent is read off the complex argument and then confirmed exactly,
    /// so the answer never depends on floating point.
    pub fn as_root_of_unity(&self) -> Option<RootOfUnity> {
        let big = lcm(2, self.m);
        let z = self.to_complex();
        if !z.norm().is_finite() || (z.norm() - 1.0).abs() > 1e-6 {
            return None;
        }
        let turns = z.arg() / (2.0 * PI) * big as f64;
        let e = arith::reduce(turns.round() as i128, big);
        let candidate = Self::root_of_unity(big, e as i64);
        if &candidate == self {
            return Some(RootOfUnity::new(big, e as i64));
        }
        (0..big)
            .find(|&j| &Self::root_of_unity(big, j as i64) == self)
            .map(|j| RootOfUnity::new(big, j as i64))
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = Self::common(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CyclotomicNumber {}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn add(self, rhs: &'a CyclotomicNumber) -> CyclotomicNumber {
        if self.m != rhs.m {
            let (a, b) = CyclotomicNumber::common(self, rhs);
            return &a + &b;
        }
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(x, y)| x * &rhs.den + y * &self.den)
            .collect();
        CyclotomicNumber::from_parts(self.m, num, &self.den * &rhs.den)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            m: self.m,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn sub(self, rhs: &'a CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn mul(self, rhs: &'a CyclotomicNumber) -> CyclotomicNumber {
        if self.m != rhs.m {
            let (a, b) = CyclotomicNumber::common(self, rhs);
            return &a * &b;
        }
        let m = self.m as usize;
        let mut folded = vec![BigInt::zero(); m];
        let rhs_terms: Vec<(usize, &BigInt)> = rhs
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &rhs_terms {
                folded[(i + j) % m] += a * b;
            }
        }
        CyclotomicNumber::from_parts(
            self.m,
            reduce_mod_cyclotomic(self.m, folded),
            &self.den * &rhs.den,
        )
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = BigRational::new(c.clone(), self.den.clone());
            let sign = if coeff.is_negative() { "-" } else { "+" };
            let abs = coeff.abs();
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let power = match j {
                0 => String::new(),
                1 => format!("z{}", self.m),
                _ => format!("z{}^{}", self.m, j),
            };
            if j == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{power}")?;
            } else {
                write!(f, "{abs}*{power}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RawCyclotomic {
    m: u64,
    num: Vec<JsonInt>,
    den: JsonInt,
}

impl From<CyclotomicNumber> for RawCyclotomic {
    fn from(x: CyclotomicNumber) -> Self {
        RawCyclotomic {
            m: x.m,
            num: x.num.into_iter().map(JsonInt).collect(),
            den: JsonInt(x.den),
        }
    }
}

impl TryFrom<RawCyclotomic> for CyclotomicNumber {
    type Error = Error;

    fn try_from(raw: RawCyclotomic) -> Result<Self> {
        if raw.m == 0 || raw.num.len() as u64 != euler_phi(raw.m) {
            return Err(Error::Parse(format!(
                "expected {} numerators for m = {}",
                euler_phi(raw.m.max(1)),
                raw.m
            )));
        }
        if !raw.den.0.is_positive() {
            return Err(Error::Parse("denominator must be positive".into()));
        }
        Ok(Self::from_parts(
            raw.m,
            raw.num.into_iter().map(|c| c.0).collect(),
            raw.den.0,
        ))
    }
}

/// Integers are written as JSON numbers when they fit in an i64 and as
/// decimal strings otherwise.
#[derive(Clone, Debug)]
struct JsonInt(BigInt);

impl Serialize for JsonInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Num(i64),
            Str(String),
        }
        match Either::deserialize(d)? {
            Either::Num(v) => Ok(JsonInt(BigInt::from(v))),
            Either::Str(s) => s
                .parse::<BigInt>()
                .map(JsonInt)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// ζ_m^k in lowest terms: m is the exact order and gcd(k, m) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawRoot")]
pub struct RootOfUnity {
    m: u64,
    k: u64,
}

#[derive(Deserialize)]
struct RawRoot {
    m: u64,
    k: i64,
}

impl TryFrom<RawRoot> for RootOfUnity {
    type Error = Error;

    fn try_from(raw: RawRoot) -> Result<Self> {
        if raw.m == 0 {
            return Err(Error::Parse("root of unity with m = 0".into()));
        }
        Ok(RootOfUnity::new(raw.m, raw.k))
    }
}

impl RootOfUnity {
    pub fn new(m: u64, k: i64) -> Self {
        assert!(m >= 1, "root of unity needs m >= 1");
        let k = arith::reduce(k as i128, m);
        let g = gcd(k, m);
        let (m, k) = if k == 0 { (1, 0) } else { (m / g, k / g) };
        RootOfUnity { m, k }
    }

    pub fn one() -> Self {
        RootOfUnity { m: 1, k: 0 }
    }

    pub fn minus_one() -> Self {
        RootOfUnity { m: 2, k: 1 }
    }

    /// ±1 as a root of unity.
    pub fn from_sign(s: i8) -> Self {
        if s < 0 {
            Self::minus_one()
        } else {
            Self::one()
        }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    pub fn is_one(&self) -> bool {
        self.m == 1
    }

    pub fn pow(&self, e: i64) -> Self {
        let k = (self.k as i128 * e as i128).rem_euclid(self.m as i128);
        RootOfUnity::new(self.m, k as i64)
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// Exponent e with self = ζ_big^e; requires order | big.
    pub fn exponent_in(&self, big: u64) -> Result<u64> {
        if !big.is_multiple_of(self.m) {
            return Err(Error::NotDivisible {
                m: self.m,
                target: big,
            });
        }
        Ok(self.k * (big / self.m))
    }

    pub fn to_cyclotomic(&self) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(self.m, self.k as i64)
    }

    /// Image under ζ ↦ ζ^s.
    pub fn galois(&self, s: i64) -> Result<Self> {
        let ss = arith::reduce(s as i128, self.m);
        if self.m > 1 && gcd(ss, self.m) != 1 {
            return Err(Error::InvalidInput(format!(
                "galois exponent {s} is not coprime to {}",
                self.m
            )));
        }
        Ok(self.pow(s))
    }

    /// CRT splitting ζ_m^k = Π_ℓ ζ_{ℓ^a}^{k_ℓ} over the primes dividing m.
    pub fn decompose(&self) -> BTreeMap<u64, RootOfUnity> {
        let mut parts = BTreeMap::new();
        for (l, a) in factor(self.m) {
            let la = l.pow(a);
            let cof = self.m / la;
            let inv = arith::inv_mod(cof % la, la).expect("coprime cofactor");
            let kl = arith::mul_mod(self.k % la, inv, la);
            parts.insert(l, RootOfUnity::new(la, kl as i64));
        }
        parts
    }

    /// The ℓ-primary factor (1 when ℓ does not divide the order).
    pub fn primary_part(&self, l: u64) -> RootOfUnity {
        self.decompose()
            .get(&l)
            .copied()
            .unwrap_or_else(RootOfUnity::one)
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let m = lcm(self.m, rhs.m);
        let k = self.k * (m / self.m) + rhs.k * (m / rhs.m);
        RootOfUnity::new(m, (k % m) as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.m, self.k) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (m, 1) => write!(f, "z{m}"),
            (m, k) => write!(f, "z{m}^{k}"),
        }
    }
}

/// σ_k ∈ Gal(Q(ζ_m)/Q), acting by ζ_m ↦ ζ_m^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaloisElement {
    m: u64,
    k: u64,
}

impl GaloisElement {
    pub fn new(m: u64, k: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        let kk = arith::reduce(k as i128, m);
        if gcd(kk, m) != 1 {
            return Err(Error::InvalidInput(format!("{k} is not a unit mod {m}")));
        }
        Ok(GaloisElement { m, k: kk })
    }

    pub fn identity(m: u64) -> Self {
        GaloisElement { m, k: 1 % m.max(2) }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn compose(&self, other: &GaloisElement) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::InvalidInput(format!(
                "composing Galois elements mod {} and {}",
                self.m, other.m
            )));
        }
        Ok(GaloisElement {
            m: self.m,
            k: arith::mul_mod(self.k, other.k, self.m),
        })
    }

    /// Applies σ to x; the conductor of x must divide σ's modulus.
    pub fn apply(&self, x: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        if !self.m.is_multiple_of(x.conductor()) {
            return Err(Error::NotDivisible {
                m: x.conductor(),
                target: self.m,
            });
        }
        x.galois(self.k as i64)
    }

    pub fn apply_root(&self, r: &RootOfUnity) -> Result<RootOfUnity> {
        if !self.m.is_multiple_of(r.order()) {
            return Err(Error::NotDivisible {
                m: r.order(),
                target: self.m,
            });
        }
        r.galois(self.k as i64)
    }
}

/// √(p*) with p* = (−1)^{(p−1)/2} p, as the quadratic Gauss sum Σ_t ζ_p^{t²}
/// for odd p; √2 = ζ_8 + ζ_8^{-1} for p = 2.
pub fn sqrt_pstar(p: u64) -> CyclotomicNumber {
    assert!(arith::is_prime(p), "{p} is not prime");
    if p == 2 {
        return CyclotomicNumber::from_terms(8, [(1, BigInt::one()), (7, BigInt::one())]);
    }
    CyclotomicNumber::from_terms(p, (0..p).map(|t| ((t * t % p) as i64, BigInt::one())))
}

/// The positive real square root of p, in Q(ζ_{4p}) (Q(ζ_8) for p = 2).
pub fn sqrt_p(p: u64) -> CyclotomicNumber {
    if p == 2 {
        return sqrt_pstar(2);
    }
    let h = (p - 1) / 2;
    let twist = CyclotomicNumber::root_of_unity(4, -((h * h % 4) as i64));
    &sqrt_pstar(p) * &twist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u64, k: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(m, k)
    }

    fn int(n: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_int(n)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(2500).len(), 1001);
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn root_of_unity_examples() {
        assert_eq!(&z(4, 1) * &z(4, 1), int(-1));
        assert_eq!(z(1, 0), int(1));
        assert_eq!(z(9, 1).pow(9), int(1));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&z(3, 1) + &z(3, 2), int(-1));
        assert_eq!(&z(5, 1) * &z(5, 4), int(1));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!((&int(2) * &z(8, 1)).mul_rational(&half), z(8, 1));
        assert_ne!(z(8, 1), z(8, 3));
        assert_eq!(&z(12, 3) - &z(4, 1), CyclotomicNumber::zero(12));
    }

    #[test]
    fn embed_examples() {
        let minus_one = CyclotomicNumber::from_rational(2, &BigRational::from_integer((-1).into()));
        assert_eq!(minus_one.embed(4).unwrap(), z(4, 2));
        let e = z(3, 1).embed(12).unwrap();
        assert_eq!(e.conductor(), 12);
        assert_eq!(e, z(12, 4));
        assert!(matches!(
            z(3, 1).embed(5),
            Err(Error::NotDivisible { m: 3, target: 5 })
        ));
    }

    #[test]
    fn galois_examples() {
        let s2 = GaloisElement::new(3, 2).unwrap();
        assert_eq!(s2.apply(&z(3, 1)).unwrap(), z(3, 2));
        let seven_thirds =
            CyclotomicNumber::from_rational(5, &BigRational::new(7.into(), 3.into()));
        let s = GaloisElement::new(5, 3).unwrap();
        assert_eq!(s.apply(&seven_thirds).unwrap(), seven_thirds);
        let eta = &z(5, 1) + &z(5, 4);
        let g = GaloisElement::new(5, 2).unwrap();
        assert_eq!(g.apply(&eta).unwrap(), &z(5, 2) + &z(5, 3));
        assert!(GaloisElement::new(6, 3).is_err());
        assert!(z(6, 1).galois(2).is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_pstar(5).pow(2), int(5));
        assert_eq!(sqrt_pstar(3).pow(2), int(-3));
        assert_eq!(sqrt_pstar(2).pow(2), int(2));
        assert_eq!(sqrt_p(5).pow(2), int(5));
        assert_eq!(sqrt_p(3).pow(2), int(3));
        let r7 = sqrt_p(7).to_complex();
        assert!((r7.re - 7f64.sqrt()).abs() < 1e-12 && r7.im.abs() < 1e-12);
        let s3 = sqrt_pstar(3).complex_embedding(6);
        assert!((s3.im - 1.732051).abs() < 1e-9 && s3.re == 0.0);
    }

    #[test]
    fn root_detection() {
        assert_eq!(int(-1).as_root_of_unity(), Some(RootOfUnity::new(2, 1)));
        assert_eq!(z(9, 4).as_root_of_unity(), Some(RootOfUnity::new(9, 4)));
        assert_eq!(
            (&int(1) + &z(3, 1)).as_root_of_unity(),
            Some(RootOfUnity::new(6, 1))
        );
        assert_eq!(int(2).as_root_of_unity(), None);
        assert_eq!(sqrt_p(5).as_root_of_unity(), None);
        // (1 + i)/√2 = ζ_8 written through √2
        let x = &(&int(1) + &z(4, 1)) * &sqrt_p(2);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            x.mul_rational(&half).as_root_of_unity(),
            Some(RootOfUnity::new(8, 1))
        );
    }

    #[test]
    fn decompose_examples() {
        let parts = RootOfUnity::new(6, 1).decompose();
        assert_eq!(parts[&2], RootOfUnity::minus_one());
        assert_eq!(parts[&3], RootOfUnity::new(3, 2));
        let parts = RootOfUnity::new(9, 2).decompose();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[&3], RootOfUnity::new(9, 2));
        assert!(RootOfUnity::one().decompose().is_empty());
    }

    #[test]
    fn root_canonical_form() {
        assert_eq!(RootOfUnity::new(12, 4), RootOfUnity::new(3, 1));
        assert_eq!(RootOfUnity::new(5, 10), RootOfUnity::one());
        assert_eq!(
            RootOfUnity::new(4, 1) * RootOfUnity::new(4, 1),
            RootOfUnity::minus_one()
        );
        assert_eq!(RootOfUnity::new(9, 2).exponent_in(27).unwrap(), 6);
    }

    #[test]
    fn display_and_json() {
        let x = &z(3, 1).mul_rational(&BigRational::new(3.into(), 2.into())) + &int(1);
        assert_eq!(x.to_string(), "1 + 3/2*z3");
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"m":3,"num":[2,3],"den":2}"#);
        let back: CyclotomicNumber = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        let huge: CyclotomicNumber =
            serde_json::from_str(r#"{"m":1,"num":["123456789012345678901234567890"],"den":1}"#)
                .unwrap();
        assert!(serde_json::to_string(&huge)
            .unwrap()
            .contains("\"123456789012345678901234567890\""));
        assert!(serde_json::from_str::<CyclotomicNumber>(r#"{"m":3,"num":[1],"den":1}"#).is_err());
        let r: RootOfUnity = serde_json::from_str(r#"{"m":12,"k":4}"#).unwrap();
        assert_eq!(r, RootOfUnity::new(3, 1));
    }
}
