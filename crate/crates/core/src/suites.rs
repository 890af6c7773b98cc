//! Named verification grids and family tables.
//!
//! Cases run in parallel on the current rayon pool; results are returned in
//! case order, so output does not depend on scheduling.

use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, lcm};
use crate::character::MultiplicativeCharacter;
use crate::cyclotomic::RootOfUnity;
use crate::epsilon::{ambient_modulus, w, w_p_part, w_star, Backend};
use crate::error::{Error, Result};
use crate::padic::{PadicElement, UnramifiedField};
use crate::spec::{auto_precision, FamilyMember};
use crate::verify::{self, Report, Side, ValueField};
use crate::virtual_char::VirtualCharacter;

/// Suite names in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "p3-agreement",
    "p1",
    "sqrt-lemma",
    "c1",
    "c2",
    "c3",
    "c4",
    "c5",
    "c6",
    "c7",
    "witt",
    "l1a",
    "l1b",
    "ultra-2adic",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Primes to run over; each suite has its own default.
    pub primes: Option<Vec<u64>>,
    pub f: usize,
    /// Working precision N; by default n + 4 for the deepest conductor n.
    pub prec: Option<u32>,
    /// Largest conductor exponent in grids that sweep n.
    pub max_n: Option<u32>,
    pub seed: u64,
    /// Grids with more members than this are sampled (f ≥ 2 only).
    pub sample: usize,
    pub backend: Backend,
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            primes: None,
            f: 1,
            prec: None,
            max_n: None,
            seed: 0,
            sample: 20,
            backend: Backend::Oracle,
            timing: false,
        }
    }
}

pub type Case = Box<dyn Fn() -> Result<Vec<Report>> + Send + Sync>;

fn one<F>(f: F) -> Case
where
    F: Fn() -> Result<Report> + Send + Sync + 'static,
{
    Box::new(move || f().map(|r| vec![r]))
}

fn many<F>(f: F) -> Case
where
    F: Fn() -> Result<Vec<Report>> + Send + Sync + 'static,
{
    Box::new(f)
}

type Chi = MultiplicativeCharacter;

impl SuiteConfig {
    fn primes_or(&self, default: &[u64]) -> Vec<u64> {
        self.primes.clone().unwrap_or_else(|| default.to_vec())
    }

    fn odd_primes_or(&self, default: &[u64]) -> Vec<u64> {
        self.primes_or(default)
            .into_iter()
            .filter(|&p| p != 2)
            .collect()
    }

    fn max_n(&self, default: u32) -> u32 {
        self.max_n.unwrap_or(default)
    }

    fn field(&self, p: u64, depth: u32) -> Result<Arc<UnramifiedField>> {
        let n = self.prec.unwrap_or_else(|| auto_precision(depth));
        if n <= depth {
            return Err(Error::Precision(format!(
                "conductor exponent {depth} needs N > {depth}, got N = {n}"
            )));
        }
        UnramifiedField::new(p, self.f, n)
    }

    /// Keeps all items for f = 1, otherwise a seeded sample of `sample` of them.
    fn thin<T>(&self, items: Vec<T>, salt: u64) -> Vec<T> {
        if self.f == 1 || items.len() <= self.sample {
            return items;
        }
        let mut rng =
            ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut idx = rand::seq::index::sample(&mut rng, items.len(), self.sample).into_vec();
        idx.sort_unstable();
        let mut slots: Vec<Option<T>> = items.into_iter().map(Some).collect();
        idx.into_iter()
            .map(|i| slots[i].take().expect("distinct indices"))
            .collect()
    }
}

/// χ_{a/p^n}.
pub fn chi_over(a: &PadicElement, n: u32) -> Result<Chi> {
    let fld = a.field();
    let pn =
        i64::try_from(fld.p().pow(n)).map_err(|_| Error::InvalidInput("p^n too large".into()))?;
    Chi::chi_alpha(&a.div(&fld.from_int(pn))?)
}

fn with_parts(chi: &Chi, on_p: RootOfUnity, tame: i64) -> Result<Chi> {
    let fld = chi.field();
    chi.mul(&Chi::new(fld, on_p, tame, None, false)?)
}

fn one_minus(chi: &Chi) -> Result<VirtualCharacter> {
    VirtualCharacter::one(chi.field()).sub(&VirtualCharacter::from_character(chi))
}

fn units(fld: &Arc<UnramifiedField>, c: u32) -> Result<Vec<PadicElement>> {
    Ok(fld.unit_residues(c)?.collect())
}

fn first_units(fld: &Arc<UnramifiedField>, count: usize) -> Result<Vec<PadicElement>> {
    Ok(fld.unit_residues(1)?.take(count).collect())
}

fn tuples(items: &[PadicElement], len: usize) -> Vec<Vec<PadicElement>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                items.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn agreement_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for p in cfg.primes_or(&[3, 5]) {
        let (lo, hi) = if p == 2 {
            (3, cfg.max_n(8))
        } else {
            (2, cfg.max_n(3))
        };
        for n in lo..=hi {
            let fld = cfg.field(p, n)?;
            let members = cfg.thin(units(&fld, n)?, p * 1000 + n as u64);
            for a in members {
                let chi = chi_over(&a, n)?;
                cases.push(one(move || verify::agreement(&chi)));
            }
        }
    }
    Ok(cases)
}

/// Single characters used by p1, c1 and c3: χ_{a/p^n}·(tame, χ(p)).
fn twisted_grid(cfg: &SuiteConfig, p: u64) -> Result<Vec<Chi>> {
    let mut out = Vec::new();
    for n in 2..=cfg.max_n(3) {
        let fld = cfg.field(p, n)?;
        for a in first_units(&fld, 2)? {
            for tame in [0, 1] {
                for on_p in [RootOfUnity::one(), RootOfUnity::minus_one()] {
                    out.push(with_parts(&chi_over(&a, n)?, on_p, tame)?);
                }
            }
        }
    }
    Ok(out)
}

/// det-trivial virtual characters for c2 and c3.
fn virtual_grid(cfg: &SuiteConfig, p: u64) -> Result<Vec<VirtualCharacter>> {
    let fld = cfg.field(p, 3)?;
    let us = first_units(&fld, 2)?;
    let mut out = Vec::new();
    for a in &us {
        for b in &us {
            out.push(one_minus(&chi_over(a, 2)?)?.mul(&one_minus(&chi_over(b, 3)?)?)?);
        }
        let chi = chi_over(a, 3)?;
        out.push(one_minus(&chi)?.mul(&one_minus(&chi.inverse())?)?);
    }
    Ok(out)
}

fn p1_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let backend = cfg.backend;
    let mut cases = Vec::new();
    for p in cfg.primes_or(&[3, 5]) {
        for chi in twisted_grid(cfg, p)? {
            let m = lcm(ambient_modulus(&chi), chi.order());
            for k in (2..).filter(|&k| gcd(k, m) == 1).take(3) {
                let chi = chi.clone();
                cases.push(one(move || verify::p1(&chi, k as i64, backend)));
            }
        }
    }
    Ok(cases)
}

fn sqrt_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let mut cases = Vec::new();
    for p in cfg.primes_or(&[3, 5, 7]) {
        for k in [2i64, 3, 5, 7, 11] {
            if !(k as u64).is_multiple_of(p) {
                cases.push(one(move || verify::sqrt_lemma(p, k)));
            }
        }
    }
    cases
}

fn c1_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let backend = cfg.backend;
    let mut cases = Vec::new();
    for p in cfg.primes_or(&[3, 5]) {
        for chi in twisted_grid(cfg, p)? {
            let v = VirtualCharacter::from_character(&chi);
            cases.push(many(move || verify::c1(&v, backend)));
        }
    }
    Ok(cases)
}

fn c2_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let backend = cfg.backend;
    let mut cases = Vec::new();
    for p in cfg.odd_primes_or(&[3, 5]) {
        for v in virtual_grid(cfg, p)? {
            cases.push(many(move || verify::c2(&v, backend)));
        }
    }
    Ok(cases)
}

fn c3_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let backend = cfg.backend;
    let mut cases = Vec::new();
    for p in cfg.odd_primes_or(&[3, 5]) {
        let singles = twisted_grid(cfg, p)?
            .into_iter()
            .map(|c| VirtualCharacter::from_character(&c));
        for v in singles.chain(virtual_grid(cfg, p)?) {
            cases.push(one(move || verify::c3(&v, backend)));
        }
    }
    Ok(cases)
}

/// Odd k < 30 prime to p·order: the admissible range for c4.
pub fn c4_ks(chi: &Chi) -> Vec<i64> {
    let pd = 2 * chi.field().p() * chi.order();
    (1..30)
        .filter(|&k| gcd(k, pd) == 1)
        .map(|k| k as i64)
        .collect()
}

/// Characters χ_{a/p^3} of order p², a over the units mod p².
pub fn order_p2_characters(fld: &Arc<UnramifiedField>) -> Result<Vec<Chi>> {
    units(fld, 2)?.iter().map(|a| chi_over(a, 3)).collect()
}

/// Characters χ_{a/p^2} of order p, a over the nonzero residues.
pub fn order_p_characters(fld: &Arc<UnramifiedField>) -> Result<Vec<Chi>> {
    units(fld, 1)?.iter().map(|a| chi_over(a, 2)).collect()
}

fn c4_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let backend = cfg.backend;
    let mut cases = Vec::new();
    for p in cfg.primes_or(&[3, 5]) {
        let fld = cfg.field(p, 3)?;
        for chi in cfg.thin(order_p2_characters(&fld)?, p) {
            let v = VirtualCharacter::from_character(&chi);
            let e = ValueField::of(&v);
            for k in c4_ks(&chi) {
                let v1 = v.clone();
                cases.push(one(move || verify::c4(&v1, k, backend)));
                if e.fixed_by(k) {
                    let v2 = v.clone();
                    cases.push(one(move || verify::c4_fixed(&v2, k, backend)));
                }
            }
        }
    }
    Ok(cases)
}

fn c5_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let backend = cfg.backend;
    let mut cases = Vec::new();
    for p in cfg.odd_primes_or(&[3, 5]) {
        let fld = cfg.field(p, 2)?;
        for chi in cfg.thin(order_p_characters(&fld)?, p) {
            let v = VirtualCharacter::from_character(&chi);
            for k in 1..30 {
                let v = v.clone();
                cases.push(one(move || verify::c5(&v, k, backend)));
            }
        }
    }
    Ok(cases)
}

/// Conductor-3 characters for c6: χ_{a/p^3} twisted by tame exponent 0 or 1
/// and χ(p) of order 1, 2, p, 4 or 2p.
pub fn c6_characters(fld: &Arc<UnramifiedField>) -> Result<Vec<Chi>> {
    let p = fld.p();
    let mut out = Vec::new();
    for chi in order_p2_characters(fld)? {
        for tame in [0, 1] {
            for m in [1, 2, p, 4, 2 * p] {
                out.push(with_parts(&chi, RootOfUnity::new(m, 1), tame)?);
            }
        }
    }
    Ok(out)
}

fn c6_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let backend = cfg.backend;
    let mut cases = Vec::new();
    for p in cfg.odd_primes_or(&[3]) {
        let fld = cfg.field(p, 3)?;
        for chi in cfg.thin(c6_characters(&fld)?, p) {
            cases.push(one(move || verify::c6(&chi, backend)));
        }
    }
    Ok(cases)
}

fn c7_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let backend = cfg.backend;
    let mut cases = Vec::new();
    for p in cfg.odd_primes_or(&[3]) {
        let fld = cfg.field(p, 2)?;
        for a in cfg.thin(fld.all_residues(2)?.collect(), p) {
            cases.push(one(move || verify::c7a(&a, backend)));
        }
        let nonzero = units(&fld, 1)?;
        for len in [p as usize, p as usize + 1] {
            for t in cfg.thin(tuples(&nonzero, len), p + len as u64) {
                cases.push(one(move || verify::c7_product(&t, backend)));
            }
        }
        if cfg.f == 1 {
            for n in 2..=cfg.max_n(3) {
                cases.push(one(move || verify::c7d(p, n, backend)));
            }
        }
    }
    Ok(cases)
}

fn witt_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let backend = cfg.backend;
    let mut cases = Vec::new();
    for p in cfg.odd_primes_or(&[3]) {
        let fld = cfg.field(p, 2)?;
        let residues: Vec<_> = fld.all_residues(1)?.collect();
        for pair in cfg.thin(tuples(&residues, 2), p) {
            cases.push(one(move || verify::witt(&pair[0], &pair[1], backend)));
        }
    }
    Ok(cases)
}

/// Odd-conductor characters χ_{a/p^c}, c ∈ {3, 5}, a over the units mod p².
pub fn l1a_characters(fld: &Arc<UnramifiedField>) -> Result<Vec<Chi>> {
    let mut out = Vec::new();
    for c in [3, 5] {
        for a in units(fld, 2)? {
            out.push(chi_over(&a, c)?);
        }
    }
    Ok(out)
}

fn l1a_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for p in cfg.odd_primes_or(&[3, 5]) {
        let fld = cfg.field(p, 5)?;
        for chi in cfg.thin(l1a_characters(&fld)?, p) {
            cases.push(one(move || verify::l1a(&chi)));
        }
    }
    Ok(cases)
}

/// The 1-units u used for the 2-adic quadratic formula.
pub fn ultra_units(fld: &Arc<UnramifiedField>) -> Vec<PadicElement> {
    let mut out: Vec<_> = [3, 5, 7, -1, 9]
        .into_iter()
        .map(|u| fld.from_int(u))
        .collect();
    if fld.f() >= 2 {
        out.push(fld.from_poly(&[1, 2]));
        out.push(fld.from_poly(&[3, 2]));
    }
    out
}

fn ultra_cases(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    if !cfg.primes_or(&[2]).contains(&2) {
        return Ok(Vec::new());
    }
    let fld = cfg.field(2, 6)?;
    Ok(ultra_units(&fld)
        .into_iter()
        .map(|u| one(move || verify::ultra(&u)))
        .collect())
}

pub fn cases(name: &str, cfg: &SuiteConfig) -> Result<Vec<Case>> {
    match name {
        "p3-agreement" => agreement_cases(cfg),
        "p1" => p1_cases(cfg),
        "sqrt-lemma" => Ok(sqrt_cases(cfg)),
        "c1" => c1_cases(cfg),
        "c2" => c2_cases(cfg),
        "c3" => c3_cases(cfg),
        "c4" => c4_cases(cfg),
        "c5" => c5_cases(cfg),
        "c6" => c6_cases(cfg),
        "c7" => c7_cases(cfg),
        "witt" => witt_cases(cfg),
        "l1a" => l1a_cases(cfg),
        "l1b" => Ok(vec![one(|| verify::l1b(3, 109, 31))]),
        "ultra-2adic" => ultra_cases(cfg),
        "all" => {
            let mut all = Vec::new();
            for s in SUITES {
                all.extend(cases(s, cfg)?);
            }
            Ok(all)
        }
        other => Err(Error::InvalidInput(format!(
            "unknown suite {other:?}; expected one of {} or all",
            SUITES.join(", ")
        ))),
    }
}

/// Runs a suite; the first error (in case order) aborts the run.
pub fn run(name: &str, cfg: &SuiteConfig) -> Result<Vec<Report>> {
    let cases = cases(name, cfg)?;
    if cases.is_empty() {
        return Err(Error::InvalidInput(format!(
            "suite {name} has no cases for the given primes"
        )));
    }
    let results: Vec<Result<Vec<Report>>> = cases
        .par_iter()
        .map(|case| {
            let start = Instant::now();
            let mut reports = case()?;
            if cfg.timing {
                let secs = start.elapsed().as_secs_f64();
                for r in &mut reports {
                    r.timing = Some(secs);
                }
            }
            Ok(reports)
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// One row of a family table.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub a: String,
    pub conductor: u32,
    pub order: u64,
    #[serde(rename = "W")]
    pub w: Side,
    #[serde(rename = "W*")]
    pub w_star: Side,
    #[serde(rename = "W_p")]
    pub w_p: Option<RootOfUnity>,
}

pub fn table(members: &[FamilyMember], backend: Backend) -> Result<Vec<TableRow>> {
    members
        .par_iter()
        .map(|m| {
            let chi = &m.character;
            let e = w(chi, backend)?;
            let w_p = w_p_part(&e, chi.field().p()).ok();
            Ok(TableRow {
                a: m.label.clone(),
                conductor: chi.conductor_exponent(),
                order: chi.order(),
                w: e.into(),
                w_star: w_star(chi, backend)?.into(),
                w_p,
            })
        })
        .collect()
}
