//! Integer combinations of characters (the abelian part of R(G)).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::character::{CharKey, MultiplicativeCharacter};
use crate::error::{Error, Result};
use crate::padic::UnramifiedField;

#[derive(Clone, PartialEq, Eq)]
pub struct VirtualCharacter {
    field: Arc<UnramifiedField>,
    terms: BTreeMap<CharKey, (MultiplicativeCharacter, i64)>,
}

impl VirtualCharacter {
    pub fn zero(field: &Arc<UnramifiedField>) -> Self {
        VirtualCharacter {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_character(chi: &MultiplicativeCharacter) -> Self {
        Self::from_terms(chi.field(), [(chi.clone(), 1)]).expect("one field")
    }

    /// The trivial character with multiplicity one.
    pub fn one(field: &Arc<UnramifiedField>) -> Self {
        Self::from_character(&MultiplicativeCharacter::trivial(field))
    }

    pub fn from_terms<I>(field: &Arc<UnramifiedField>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiplicativeCharacter, i64)>,
    {
        let mut v = Self::zero(field);
        for (chi, n) in terms {
            v.add_term(chi, n)?;
        }
        Ok(v)
    }

    fn add_term(&mut self, chi: MultiplicativeCharacter, n: i64) -> Result<()> {
        if **chi.field() != *self.field {
            return Err(Error::FieldMismatch(
                format!("{chi:?}"),
                "virtual character field".into(),
            ));
        }
        let key = chi.key();
        let entry = self.terms.entry(key.clone()).or_insert((chi, 0));
        entry.1 += n;
        if entry.1 == 0 {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.field
    }

    /// (character, multiplicity) pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiplicativeCharacter, i64)> {
        self.terms.values().map(|(c, n)| (c, *n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().map(|(_, n)| n).sum()
    }

    /// det V = Π χ_i^{n_i}.
    pub fn det(&self) -> MultiplicativeCharacter {
        self.terms().fold(
            MultiplicativeCharacter::trivial(&self.field),
            |acc, (c, n)| acc.mul(&c.pow(n)).expect("one field"),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (c, n) in other.terms() {
            out.add_term(c.clone(), n)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.field);
        if k != 0 {
            for (c, n) in self.terms() {
                out.add_term(c.clone(), n * k).expect("one field");
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch(
                "left factor".into(),
                "right factor".into(),
            ));
        }
        let mut out = Self::zero(&self.field);
        for (a, m) in self.terms() {
            for (b, n) in other.terms() {
                out.add_term(a.mul(b)?, m * n)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Ψ^k applied termwise.
    pub fn adams(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.field);
        for (c, n) in self.terms() {
            out.add_term(c.adams(k), n).expect("one field");
        }
        out
    }

    /// Termwise Galois twist by ζ ↦ ζ^k (k prime to every order involved).
    pub fn galois_twist(&self, k: i64) -> Self {
        self.adams(k)
    }

    /// lcm of the orders of the characters involved.
    pub fn order(&self) -> u64 {
        self.terms()
            .fold(1, |acc, (c, _)| crate::arith::lcm(acc, c.order()))
    }
}

impl fmt::Display for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(c, n)| format!("{n}*[{}]", c.spec_string()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
