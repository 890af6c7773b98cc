//! Finite-precision arithmetic in the unramified extension K of Q_p of degree f.
//!
//! O_K is modelled as (Z/p^N)[ω]/(g) where g is the minimal polynomial of a
//! Teichmüller representative ω of order dividing q − 1, so Frobenius acts by
//! ω ↦ ω^p. An element of K is p^v · u with u a unit of O_K/p^N (or exact
//! zero), together with the number of p-adic digits of u that are known.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::{self, factor, is_prime, mul_mod};
use crate::error::{Error, Result};

pub use crate::hilbert::{hilbert_2adic_bruteforce, hilbert_qp, hilbert_tame_unram};

/// Polynomials modulo a monic polynomial, with coefficients in Z/m.
#[derive(Clone, Debug)]
struct PolyRing {
    modulus: Vec<u64>,
    m: u64,
}

impl PolyRing {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut a: Vec<u64>) -> Vec<u64> {
        let d = self.degree();
        for i in (d..a.len()).rev() {
            let c = a[i];
            if c == 0 {
                continue;
            }
            a[i] = 0;
            for j in 0..d {
                let t = mul_mod(c, self.modulus[j], self.m);
                a[i - d + j] = sub_mod(a[i - d + j], t, self.m);
            }
        }
        a.resize(d, 0);
        a
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u128; a.len() + b.len() - 1];
        let m = self.m as u128;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u128 * y as u128) % m;
            }
        }
        self.reduce(out.into_iter().map(|c| c as u64).collect())
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = 1 % self.m;
        v
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

/// Polynomial remainder over F_p; `b` need not be monic but must be nonzero.
fn poly_rem_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = arith::inv_mod(b[db], p).expect("nonzero leading coefficient");
    while a.len() > db && !(a.len() == 1 && a[0] == 0) {
        let da = a.len() - 1;
        let c = mul_mod(a[da], lead_inv, p);
        for j in 0..=db {
            let t = mul_mod(c, b[j], p);
            a[da - db + j] = sub_mod(a[da - db + j], t, p);
        }
        a = trim(a);
        if a.len() - 1 < db || (a.len() == 1 && a[0] == 0) {
            break;
        }
    }
    a
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
    a
}

fn poly_gcd_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem_fp(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility over F_p: no common factor with x^{p^d} − x for d ≤ deg/2.
fn is_irreducible_fp(g: &[u64], p: u64) -> bool {
    let f = g.len() - 1;
    let ring = PolyRing {
        modulus: g.to_vec(),
        m: p,
    };
    if f == 1 {
        return true;
    }
    let mut xp = vec![0; f];
    xp[1] = 1;
    for _ in 1..=f / 2 {
        xp = ring.pow(&xp, p);
        let mut diff = xp.clone();
        diff[1] = sub_mod(diff[1], 1, p);
        if diff.iter().all(|&c| c == 0) {
            return false;
        }
        let g_ = poly_gcd_fp(g, &diff, p);
        if g_.len() > 1 {
            return false;
        }
    }
    true
}

/// The unramified extension of Q_p of residue degree f, at absolute
/// precision N.
#[derive(Debug)]
pub struct UnramifiedField {
    p: u64,
    f: usize,
    prec: u32,
    q: u64,
    ring: PolyRing,
    residue: PolyRing,
    frob: Vec<Vec<u64>>,
    traces: Vec<u64>,
    generator_residue: u64,
    teich: Vec<Vec<u64>>,
    dlog: HashMap<u64, u64>,
}

impl PartialEq for UnramifiedField {
    fn eq(&self, other: &Self) -> bool {
        (self.p, self.f, self.prec) == (other.p, other.f, other.prec)
    }
}

impl Eq for UnramifiedField {}

type FieldCache = Mutex<HashMap<(u64, usize, u32), Arc<UnramifiedField>>>;

impl UnramifiedField {
    /// Builds (or fetches from a process-wide cache) the field with
    /// parameters (p, f, N).
    pub fn new(p: u64, f: usize, prec: u32) -> Result<Arc<Self>> {
        static CACHE: OnceLock<FieldCache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(k) = cache.lock().unwrap().get(&(p, f, prec)) {
            return Ok(k.clone());
        }
        let field = Arc::new(Self::build(p, f, prec)?);
        cache
            .lock()
            .unwrap()
            .entry((p, f, prec))
            .or_insert(field.clone());
        Ok(field)
    }

    fn build(p: u64, f: usize, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if f == 0 || prec == 0 {
            return Err(Error::InvalidInput("f and N must be positive".into()));
        }
        let pn = arith::checked_pow(p, prec)
            .filter(|&v| v < 1 << 62)
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{prec} exceeds 62 bits")))?;
        let q = arith::checked_pow(p, f as u32)
            .filter(|&v| v <= 1 << 20)
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{f} is too large")))?;

        let (g0, modulus) = if f == 1 {
            (vec![p - 1, 1], vec![pn - 1, 1])
        } else {
            let g0 = smallest_irreducible(p, f);
            (g0.clone(), teichmuller_modulus(&g0, p, f, prec, pn, q))
        };
        let ring = PolyRing { modulus, m: pn };
        let residue = PolyRing { modulus: g0, m: p };
        debug_assert!(ring
            .modulus
            .iter()
            .zip(&residue.modulus)
            .all(|(a, b)| a % p == *b));

        let mut omega = vec![0; f];
        if f == 1 {
            omega[0] = 1;
        } else {
            omega[1] = 1;
        }
        let omega_p = ring.pow(&omega, p);
        let mut frob = vec![ring.one()];
        for i in 1..f {
            let next = ring.mul(&frob[i - 1], &omega_p);
            frob.push(next);
        }
        let mut traces = Vec::with_capacity(f);
        for i in 0..f {
            let mut acc = vec![0; f];
            let mut conj = ring.pow(&omega, i as u64);
            for _ in 0..f {
                for (a, c) in acc.iter_mut().zip(&conj) {
                    *a = add_mod(*a, *c, pn);
                }
                conj = ring.pow(&conj, p);
            }
            if acc[1..].iter().any(|&c| c != 0) {
                return Err(Error::InvalidInput("trace not rational".into()));
            }
            traces.push(acc[0]);
        }

        let mut field = UnramifiedField {
            p,
            f,
            prec,
            q,
            ring,
            residue,
            frob,
            traces,
            generator_residue: 1,
            teich: Vec::new(),
            dlog: HashMap::new(),
        };
        field.build_tame_tables();
        Ok(field)
    }

    fn build_tame_tables(&mut self) {
        let q = self.q;
        let primes: Vec<u64> = factor(q - 1).into_iter().map(|(l, _)| l).collect();
        let one = self.residue.one();
        let generator = (1..q)
            .find(|&code| {
                let r = self.decode_residue(code);
                primes
                    .iter()
                    .all(|&l| self.residue.pow(&r, (q - 1) / l) != one)
            })
            .expect("F_q^* is cyclic");
        self.generator_residue = generator;
        let lift = self.teichmuller_poly(&self.decode_residue(generator));
        let mut cur = self.ring.one();
        for j in 0..q - 1 {
            self.dlog.insert(self.residue_code_of(&cur), j);
            self.teich.push(cur.clone());
            cur = self.ring.mul(&cur, &lift);
        }
    }

    fn teichmuller_poly(&self, r: &[u64]) -> Vec<u64> {
        let mut x = r.to_vec();
        loop {
            let y = self.ring.pow(&x, self.q);
            if y == x {
                return x;
            }
            x = y;
        }
    }

    fn decode_residue(&self, mut code: u64) -> Vec<u64> {
        let mut v = vec![0; self.f];
        for c in v.iter_mut() {
            *c = code % self.p;
            code /= self.p;
        }
        v
    }

    fn residue_code_of(&self, coeffs: &[u64]) -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p + c % self.p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    /// Absolute working precision N.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// p^N.
    pub fn modulus_value(&self) -> u64 {
        self.ring.m
    }

    /// The monic defining polynomial of ω over Z/p^N, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.ring.modulus
    }

    /// Residue code (Σ c_i p^i) of the fixed generator of F_q^*.
    pub fn generator_residue(&self) -> u64 {
        self.generator_residue
    }

    /// Discrete logarithm of a nonzero residue code against the generator.
    pub fn dlog(&self, code: u64) -> Result<u64> {
        self.dlog
            .get(&code)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("residue {code} is not a unit")))
    }

    /// Exact zero of K.
    pub fn zero(self: &Arc<Self>) -> PadicElement {
        PadicElement {
            field: self.clone(),
            v: 0,
            unit: vec![0; self.f],
            rel: self.prec,
        }
    }

    pub fn one(self: &Arc<Self>) -> PadicElement {
        self.from_int(1)
    }

    /// The Teichmüller generator ω of the power basis.
    pub fn omega(self: &Arc<Self>) -> PadicElement {
        let mut coeffs = vec![0i64; self.f.max(2)];
        coeffs[if self.f == 1 { 0 } else { 1 }] = 1;
        self.from_poly(&coeffs)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> PadicElement {
        self.from_poly(&[n])
    }

    /// The rational number num/den as an element of K.
    pub fn from_rational(self: &Arc<Self>, num: i64, den: i64) -> Result<PadicElement> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let d = self.from_int(den);
        self.from_int(num).div(&d)
    }

    /// Σ c_i ω^i for integer coefficients (any length).
    pub fn from_poly(self: &Arc<Self>, coeffs: &[i64]) -> PadicElement {
        let p = self.p as i128;
        let nonzero: Vec<i64> = coeffs.iter().copied().filter(|&c| c != 0).collect();
        if nonzero.is_empty() {
            return self.zero();
        }
        // strip the common p-power exactly before reducing mod p^N
        let v = nonzero
            .iter()
            .map(|&c| arith::val_p(c.unsigned_abs(), self.p))
            .min()
            .unwrap();
        let scale = (p as u128).pow(v) as i128;
        let mut raw: Vec<u64> = coeffs
            .iter()
            .map(|&c| arith::reduce(c as i128 / scale, self.ring.m))
            .collect();
        if raw.len() < self.f + 1 {
            raw.resize(self.f + 1, 0);
        }
        let unit = self.ring.reduce(raw);
        PadicElement::normalized(self.clone(), v as i64, unit, self.prec)
    }

    /// p^v · Σ c_i ω^i with the unit part given mod p^N.
    pub fn from_parts(self: &Arc<Self>, v: i64, unit: Vec<u64>, rel: u32) -> PadicElement {
        let mut unit: Vec<u64> = unit.into_iter().map(|c| c % self.ring.m).collect();
        unit.resize(self.f, 0);
        PadicElement::normalized(self.clone(), v, unit, rel.min(self.prec))
    }

    /// Teichmüller lift of a nonzero residue given by its code.
    pub fn teichmuller(self: &Arc<Self>, code: u64) -> Result<PadicElement> {
        let j = self.dlog(code)?;
        Ok(self.from_parts(0, self.teich[j as usize].clone(), self.prec))
    }

    /// ω_g^j for the Teichmüller lift ω_g of the fixed generator.
    pub fn teichmuller_power(self: &Arc<Self>, j: i64) -> PadicElement {
        let idx = arith::reduce(j as i128, self.q - 1) as usize;
        self.from_parts(0, self.teich[idx].clone(), self.prec)
    }

    /// Representatives of (O_K/p^c)^*, each class once, in a fixed order.
    pub fn unit_residues(
        self: &Arc<Self>,
        c: u32,
    ) -> Result<impl Iterator<Item = PadicElement> + '_> {
        if c == 0 || c > self.prec {
            return Err(Error::Precision(format!(
                "unit residues mod p^{c} need 1 <= c <= N = {}",
                self.prec
            )));
        }
        let base = self.p.pow(c);
        let total = base.pow(self.f as u32);
        Ok((0..total).filter_map(move |mut idx| {
            let mut coeffs = vec![0u64; self.f];
            for co in coeffs.iter_mut() {
                *co = idx % base;
                idx /= base;
            }
            if coeffs.iter().all(|&x| x % self.p == 0) {
                return None;
            }
            Some(self.from_parts(0, coeffs, self.prec))
        }))
    }

    /// Representatives of all of O_K/p^c (zero included), in a fixed order.
    pub fn all_residues(
        self: &Arc<Self>,
        c: u32,
    ) -> Result<impl Iterator<Item = PadicElement> + '_> {
        if c > self.prec {
            return Err(Error::Precision(format!(
                "residues mod p^{c} exceed N = {}",
                self.prec
            )));
        }
        let base = self.p.pow(c);
        let total = base.pow(self.f as u32);
        Ok((0..total).map(move |mut idx| {
            let mut coeffs = vec![0u64; self.f];
            for co in coeffs.iter_mut() {
                *co = idx % base;
                idx /= base;
            }
            self.from_parts(0, coeffs, self.prec)
        }))
    }

    fn mul_units(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.ring.mul(a, b)
    }
}

fn smallest_irreducible(p: u64, f: usize) -> Vec<u64> {
    let count = p.pow(f as u32);
    (0..count)
        .map(|mut code| {
            let mut g = vec![0; f + 1];
            for c in g.iter_mut().take(f) {
                *c = code % p;
                code /= p;
            }
            g[f] = 1;
            g
        })
        .find(|g| g[0] != 0 && is_irreducible_fp(g, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Minimal polynomial over Z/p^N of the Teichmüller lift of a root of g0.
fn teichmuller_modulus(g0: &[u64], p: u64, f: usize, prec: u32, pn: u64, q: u64) -> Vec<u64> {
    let ring = PolyRing {
        modulus: g0.to_vec(),
        m: pn,
    };
    let mut t = vec![0; f];
    t[1] = 1;
    for _ in 0..prec {
        t = ring.pow(&t, q);
    }
    // Π_j (X − t^{p^j}) with coefficients in the ring
    let mut poly: Vec<Vec<u64>> = vec![ring.one()];
    let mut root = t;
    for _ in 0..f {
        let mut next = vec![vec![0; f]; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            for (n, x) in next[i + 1].iter_mut().zip(c) {
                *n = add_mod(*n, *x, pn);
            }
            let prod = ring.mul(c, &root);
            for (n, x) in next[i].iter_mut().zip(&prod) {
                *n = sub_mod(*n, *x, pn);
            }
        }
        poly = next;
        root = ring.pow(&root, p);
    }
    poly.iter()
        .map(|c| {
            debug_assert!(c[1..].iter().all(|&x| x == 0));
            c[0]
        })
        .collect()
}

/// p^v · u in K, with u known to `rel` p-adic digits; or exact zero.
#[derive(Clone)]
pub struct PadicElement {
    field: Arc<UnramifiedField>,
    v: i64,
    unit: Vec<u64>,
    rel: u32,
}

impl PadicElement {
    fn normalized(field: Arc<UnramifiedField>, v: i64, mut unit: Vec<u64>, rel: u32) -> Self {
        let p = field.p;
        if unit.iter().all(|&c| c == 0) || rel == 0 {
            return field.zero();
        }
        let k = unit
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| arith::val_p(c, p))
            .min()
            .unwrap();
        if k >= rel {
            return field.zero();
        }
        if k > 0 {
            let s = p.pow(k);
            for c in unit.iter_mut() {
                *c /= s;
            }
        }
        PadicElement {
            field,
            v: v + k as i64,
            unit,
            rel: rel - k,
        }
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.unit.iter().all(|&c| c == 0)
    }

    /// Valuation with v(p) = 1; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.v)
    }

    /// Number of known p-adic digits of the unit part.
    pub fn relative_precision(&self) -> u32 {
        self.rel
    }

    /// Coefficients of the unit part in the basis 1, ω, …, ω^{f−1}.
    pub fn unit_coeffs(&self) -> &[u64] {
        &self.unit
    }

    /// Residue code of the unit part.
    pub fn residue_code(&self) -> u64 {
        self.field.residue_code_of(&self.unit)
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch(
                self.field.describe(),
                other.field.describe(),
            ));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        let m = self.field.ring.m;
        PadicElement {
            field: self.field.clone(),
            v: self.v,
            unit: self.unit.iter().map(|&c| sub_mod(0, c, m)).collect(),
            rel: self.rel,
        }
    }

    /// Sum; the result is known to the smaller absolute precision of the two
    /// operands, so cancellation lowers relative precision.
    pub fn add(&self, other: &Self) -> Self {
        self.check_field(other).expect("same field");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let v = self.v.min(other.v);
        let abs = (self.v + self.rel as i64).min(other.v + other.rel as i64);
        let m = self.field.ring.m;
        let p = self.field.p;
        let shifted = |x: &PadicElement| -> Vec<u64> {
            let d = (x.v - v) as u32;
            if d >= self.field.prec {
                return vec![0; x.unit.len()];
            }
            let s = p.pow(d);
            x.unit.iter().map(|&c| mul_mod(c, s, m)).collect()
        };
        let a = shifted(self);
        let b = shifted(other);
        let unit: Vec<u64> = a.iter().zip(&b).map(|(&x, &y)| add_mod(x, y, m)).collect();
        let rel = (abs - v).clamp(0, self.field.prec as i64) as u32;
        PadicElement::normalized(self.field.clone(), v, unit, rel)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_field(other).expect("same field");
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        let unit = self.field.mul_units(&self.unit, &other.unit);
        PadicElement {
            field: self.field.clone(),
            v: self.v + other.v,
            unit,
            rel: self.rel.min(other.rel),
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&self.field.from_int(k))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let fld = &self.field;
        let m = fld.ring.m;
        // u^{q−2} inverts u mod p; Newton steps y ↦ y(2 − uy) double the digits
        let mut y = fld.ring.pow(&self.unit, fld.q - 2);
        loop {
            let uy = fld.mul_units(&self.unit, &y);
            let mut two_minus = uy.iter().map(|&c| sub_mod(0, c, m)).collect::<Vec<_>>();
            two_minus[0] = add_mod(two_minus[0], 2, m);
            if uy[0] == 1 % m && uy[1..].iter().all(|&c| c == 0) {
                break;
            }
            y = fld.mul_units(&y, &two_minus);
        }
        Ok(PadicElement {
            field: fld.clone(),
            v: -self.v,
            unit: y,
            rel: self.rel,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if self.is_zero() {
            return Ok(if e == 0 {
                self.field.one()
            } else {
                self.clone()
            });
        }
        Ok(PadicElement {
            field: self.field.clone(),
            v: self.v * e,
            unit: self.field.ring.pow(&self.unit, e as u64),
            rel: self.rel,
        })
    }

    /// Arithmetic Frobenius, ω ↦ ω^p.
    pub fn frobenius(&self) -> Self {
        let fld = &self.field;
        let m = fld.ring.m;
        let mut out = vec![0u64; fld.f];
        for (c, img) in self.unit.iter().zip(&fld.frob) {
            if *c == 0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(img) {
                *o = add_mod(*o, mul_mod(*c, *x, m), m);
            }
        }
        PadicElement {
            field: fld.clone(),
            v: self.v,
            unit: out,
            rel: self.rel,
        }
    }

    /// Frobenius applied j times; negative j uses F^{-1} = F^{f−1}.
    pub fn frobenius_pow(&self, j: i64) -> Self {
        let f = self.field.f as i64;
        let mut x = self.clone();
        for _ in 0..j.rem_euclid(f) {
            x = x.frobenius();
        }
        x
    }

    /// Tr_{K/Q_p}, as an element of K lying in Q_p.
    pub fn trace(&self) -> Self {
        let (v, t, rel) = self.trace_parts();
        let fld = &self.field;
        fld.from_parts(v, vec![t], rel)
    }

    /// (v, t, rel) with Tr(self) = p^v · t, t ∈ Z/p^N not necessarily a unit.
    pub fn trace_parts(&self) -> (i64, u64, u32) {
        let fld = &self.field;
        let m = fld.ring.m;
        let t = self
            .unit
            .iter()
            .zip(&fld.traces)
            .fold(0, |acc, (&c, &tr)| add_mod(acc, mul_mod(c, tr, m), m));
        (self.v, t, self.rel)
    }

    /// Teichmüller representative of the residue of the unit part.
    pub fn teichmuller_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.field.teichmuller(self.residue_code())
    }

    /// Iwasawa logarithm: x = p^v · ω(x̄) · u₁ ↦ log u₁. The result is known to
    /// the relative precision of x as an absolute precision.
    pub fn log(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let fld = &self.field;
        let p = fld.p;
        let m = fld.ring.m;
        let n = fld.prec;
        let j = fld.dlog(self.residue_code())?;
        let w_inv = &fld.teich[((fld.q - 1 - j) % (fld.q - 1)) as usize];
        let mut t = fld.mul_units(&self.unit, w_inv);
        t[0] = sub_mod(t[0], 1, m);
        let rel = self.rel;
        if t.iter().all(|&c| c == 0) {
            return Ok(fld.zero());
        }
        let s = t
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| arith::val_p(c, p))
            .min()
            .unwrap();
        if s >= rel {
            return Ok(fld.zero());
        }
        let ps = p.pow(s);
        let tp: Vec<u64> = t.iter().map(|&c| c / ps).collect();
        let mut acc = vec![0u64; fld.f];
        let mut tpow = fld.ring.one();
        let mut k: u64 = 1;
        loop {
            let e = arith::val_p(k, p);
            let lead = k as i64 * s as i64 - e as i64;
            let floor_log = ilog(k, p) as i64;
            if k as i64 * s as i64 - floor_log >= n as i64 {
                break;
            }
            tpow = fld.mul_units(&tpow, &tp);
            if lead < n as i64 {
                let kk = k / p.pow(e);
                let coef = mul_mod(
                    p.pow(lead as u32),
                    arith::inv_mod(kk % m, m).expect("unit"),
                    m,
                );
                let coef = if k.is_multiple_of(2) {
                    sub_mod(0, coef, m)
                } else {
                    coef
                };
                for (a, c) in acc.iter_mut().zip(&tpow) {
                    *a = add_mod(*a, mul_mod(coef, *c, m), m);
                }
            }
            k += 1;
        }
        Ok(fld.from_parts(0, acc, rel))
    }

    /// The element reduced modulo p^abs O_K.
    pub fn truncate(&self, abs: i64) -> Self {
        if self.is_zero() || abs <= self.v {
            return self.field.zero();
        }
        let keep = ((abs - self.v) as u32).min(self.rel);
        let mm = self.field.p.pow(keep);
        let unit = self.unit.iter().map(|&c| c % mm).collect();
        PadicElement::normalized(self.field.clone(), self.v, unit, self.rel)
    }

    /// Coordinates of an integral element modulo p^abs (abs ≤ N).
    pub fn coeffs_mod(&self, abs: u32) -> Result<Vec<u64>> {
        if abs > self.field.prec {
            return Err(Error::Precision(format!(
                "residues mod p^{abs} exceed N = {}",
                self.field.prec
            )));
        }
        let mm = self.field.p.pow(abs);
        if self.is_zero() || self.v >= abs as i64 {
            return Ok(vec![0; self.field.f]);
        }
        if self.v < 0 {
            return Err(Error::InvalidInput(format!("{self} is not integral")));
        }
        if self.v + (self.rel as i64) < abs as i64 {
            return Err(Error::Precision(format!(
                "{self} is not known modulo p^{abs}"
            )));
        }
        let s = self.field.p.pow(self.v as u32);
        Ok(self.unit.iter().map(|&c| mul_mod(c % mm, s, mm)).collect())
    }

    /// Exact key (valuation, unit coefficients) for ordering and hashing.
    pub fn key(&self) -> (i64, Vec<u64>) {
        (self.v, self.unit.clone())
    }
}

fn ilog(k: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut x = k;
    while x >= p {
        x /= p;
        e += 1;
    }
    e
}

impl UnramifiedField {
    fn describe(&self) -> String {
        format!("K(p={}, f={}, N={})", self.p, self.f, self.prec)
    }
}

impl PartialEq for PadicElement {
    /// Equality up to the precision both operands guarantee.
    fn eq(&self, other: &Self) -> bool {
        if *self.field != *other.field {
            return false;
        }
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return true,
            (true, false) | (false, true) => return false,
            _ => {}
        }
        if self.v != other.v {
            return false;
        }
        let mm = self.field.p.pow(self.rel.min(other.rel));
        self.unit
            .iter()
            .zip(&other.unit)
            .all(|(a, b)| a % mm == b % mm)
    }
}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [rel {}]", self, self.rel)
    }
}

/// Writes integer coefficient polynomials in w, e.g. `1+2*w+w^2`.
pub fn format_poly(coeffs: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        parts.push(match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "w".to_string(),
            (1, c) => format!("{c}*w"),
            (i, 1) => format!("w^{i}"),
            (i, c) => format!("{c}*w^{i}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let poly = format_poly(&self.unit);
        let compound = self.unit.iter().filter(|&&c| c != 0).count() > 1;
        let p = self.field.p;
        match self.v {
            0 => write!(f, "{poly}"),
            v if v < 0 && compound => write!(f, "({poly})/{p}^{}", -v),
            v if v < 0 => write!(f, "{poly}/{p}^{}", -v),
            v if compound => write!(f, "{p}^{v}*({poly})"),
            v => write!(f, "{p}^{v}*{poly}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_construction() {
        let k = UnramifiedField::new(3, 1, 8).unwrap();
        assert_eq!(k.modulus(), &[3u64.pow(8) - 1, 1]);
        let k = UnramifiedField::new(3, 2, 6).unwrap();
        let w = k.omega();
        assert_eq!(w.pow(8).unwrap(), k.one());
        // ω lifts a root of x^2 + 1, so it has order 4
        assert_eq!(w.pow(2).unwrap(), k.from_int(-1));
        let m: Vec<u64> = k.modulus().iter().map(|c| c % 3).collect();
        // x^2 + 1 is the smallest irreducible quadratic over F_3
        assert_eq!(m, vec![1, 0, 1]);
        let k2 = UnramifiedField::new(2, 1, 10).unwrap();
        assert_eq!(k2.modulus_value(), 1024);
        assert!(UnramifiedField::new(4, 1, 3).is_err());
    }

    #[test]
    fn valuations() {
        let k = UnramifiedField::new(3, 1, 6).unwrap();
        assert_eq!(k.from_int(18).valuation(), Some(2));
        assert_eq!(k.from_rational(1, 9).unwrap().valuation(), Some(-2));
        let x = k.from_int(5);
        assert_eq!(x.mul(&x.inv().unwrap()), k.one());
        assert!(k.zero().inv().is_err());
    }

    #[test]
    fn teichmuller_examples() {
        let k = UnramifiedField::new(5, 1, 3).unwrap();
        assert_eq!(k.teichmuller(2).unwrap(), k.from_int(57));
        assert_eq!(k.teichmuller(1).unwrap(), k.one());
        assert_eq!(k.teichmuller(4).unwrap(), k.from_int(-1));
        assert!(k.teichmuller(0).is_err());
    }

    #[test]
    fn frobenius_and_trace() {
        let k = UnramifiedField::new(3, 2, 5).unwrap();
        let w = k.omega();
        assert_eq!(w.frobenius(), w.pow(3).unwrap());
        assert_eq!(w.frobenius().frobenius(), w);
        assert_eq!(k.from_int(7).frobenius(), k.from_int(7));
        assert_eq!(k.one().trace(), k.from_int(2));
        let t = w.trace();
        assert_eq!(t, w.add(&w.pow(3).unwrap()));
        assert_eq!(t.unit_coeffs()[1], 0);
    }

    #[test]
    fn log_examples() {
        let k = UnramifiedField::new(3, 1, 3).unwrap();
        assert_eq!(k.from_int(4).log().unwrap(), k.from_int(21));
        assert!(k.one().log().unwrap().is_zero());
        assert!(k.from_int(3).log().unwrap().is_zero());
        let k2 = UnramifiedField::new(2, 1, 8).unwrap();
        assert!(k2.from_int(-1).log().unwrap().is_zero());
    }

    #[test]
    fn unit_residue_counts() {
        let k = UnramifiedField::new(3, 1, 4).unwrap();
        let one: Vec<_> = k.unit_residues(1).unwrap().collect();
        assert_eq!(one, vec![k.from_int(1), k.from_int(2)]);
        assert_eq!(k.unit_residues(2).unwrap().count(), 6);
        let k2 = UnramifiedField::new(3, 2, 4).unwrap();
        assert_eq!(k2.unit_residues(2).unwrap().count(), 72);
        assert!(k.unit_residues(5).is_err());
    }

    #[test]
    fn display() {
        let k = UnramifiedField::new(3, 2, 4).unwrap();
        let a = k.from_poly(&[1, 2]).div(&k.from_int(9)).unwrap();
        assert_eq!(a.to_string(), "(1+2*w)/3^2");
        assert_eq!(k.from_int(6).to_string(), "3^1*2");
    }

    #[test]
    fn precision_loss_on_cancellation() {
        let k = UnramifiedField::new(5, 1, 4).unwrap();
        let a = k.from_int(1);
        let b = k.from_int(26);
        let d = b.sub(&a);
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.relative_precision(), 2);
    }
}
