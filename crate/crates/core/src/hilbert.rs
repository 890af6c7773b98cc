//! Quadratic Hilbert symbols over Q_p and over unramified K.

use std::collections::HashSet;

use num_rational::Rational64;

use crate::arith::{legendre, val_p};
use crate::error::{Error, Result};
use crate::padic::PadicElement;

/// Splits a nonzero rational as p^v times an integer prime to p in the same
/// square class (n/d ~ n·d).
fn split(r: Rational64, p: u64) -> (i64, i128) {
    let n = *r.numer() as i128;
    let d = *r.denom() as i128;
    let vn = val_p(n.unsigned_abs() as u64, p) as i64;
    let vd = val_p(d.unsigned_abs() as u64, p) as i64;
    let pp = p as i128;
    let un = n / pp.pow(vn as u32);
    let ud = d / pp.pow(vd as u32);
    (vn - vd, un * ud)
}

/// (a, b)_p over Q_p.
pub fn hilbert_qp(a: Rational64, b: Rational64, p: u64) -> Result<i8> {
    if a == Rational64::from_integer(0) || b == Rational64::from_integer(0) {
        return Err(Error::InvalidInput("Hilbert symbol of zero".into()));
    }
    let (va, ua) = split(a, p);
    let (vb, ub) = split(b, p);
    if p == 2 {
        let eps = |u: i128| ((u.rem_euclid(8) - 1) / 2) % 2;
        let omega = |u: i128| {
            let r = u.rem_euclid(8);
            ((r * r - 1) / 8) % 2
        };
        let e = eps(ua) * eps(ub)
            + va.rem_euclid(2) as i128 * omega(ub)
            + vb.rem_euclid(2) as i128 * omega(ua);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let mut s: i8 = 1;
    if (va * vb).rem_euclid(2) == 1 && (p - 1) / 2 % 2 == 1 {
        s = -s;
    }
    if vb.rem_euclid(2) == 1 {
        s *= legendre(ua, p);
    }
    if va.rem_euclid(2) == 1 {
        s *= legendre(ub, p);
    }
    Ok(s)
}

/// Tame Hilbert symbol over unramified K with p odd: the quadratic residue
/// symbol of (−1)^{v(a)v(b)} a^{v(b)} b^{−v(a)} in F_q.
pub fn hilbert_tame_unram(a: &PadicElement, b: &PadicElement) -> Result<i8> {
    let field = a.field().clone();
    if field.p() == 2 {
        return Err(Error::Unsupported(
            "tame symbol needs p odd; use hilbert_2adic_bruteforce".into(),
        ));
    }
    let (va, vb) = match (a.valuation(), b.valuation()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::InvalidInput("Hilbert symbol of zero".into())),
    };
    let mut c = a.pow(vb)?.mul(&b.pow(-va)?);
    if (va * vb).rem_euclid(2) == 1 {
        c = c.neg();
    }
    let j = field.dlog(c.residue_code())?;
    Ok(if j % 2 == 0 { 1 } else { -1 })
}

/// (u, x) over unramified K/Q_2 for a 1-unit u, decided by enumerating norms.
///
/// Multiplying x by 4^k does not change the symbol, so x is scaled to
/// valuation 0 or 1. Any integral norm from K(√u) is N(β) with β integral, and
/// the integers of K(√u) lie in ½(O_K + O_K√u); hence x is a norm iff
/// Z² − uW² = 4x has a solution over O_K. Since 1 + 8O_K consists of squares,
/// solving modulo 2^{v(x)+5} decides this.
pub fn hilbert_2adic_bruteforce(u: &PadicElement, x: &PadicElement) -> Result<i8> {
    let field = u.field().clone();
    if field.p() != 2 {
        return Err(Error::InvalidInput("brute-force symbol needs p = 2".into()));
    }
    if u.valuation() != Some(0) || u.residue_code() != 1 {
        return Err(Error::InvalidInput(format!("{u} is not a 1-unit")));
    }
    let vx = x
        .valuation()
        .ok_or_else(|| Error::InvalidInput("Hilbert symbol of zero".into()))?;
    let shift = vx.div_euclid(2);
    let four_x = x.mul(&field.from_int(4).pow(1 - shift)?);
    let m = (vx - 2 * shift) as u32 + 5;
    let squares: HashSet<Vec<u64>> = field
        .all_residues(m)?
        .map(|z| z.mul(&z).coeffs_mod(m))
        .collect::<Result<_>>()?;
    for w in field.all_residues(m)? {
        let target = four_x.add(&u.mul(&w).mul(&w)).coeffs_mod(m)?;
        if squares.contains(&target) {
            return Ok(1);
        }
    }
    Ok(-1)
}
