//! Sparse exact linear combinations of disequences.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::dimonomial::{Alphabet, Disequence};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKind};

/// Which of the two dialgebra products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Product {
    /// `⊢`: the middle of the result is the middle of the right factor.
    Lprod,
    /// `⊣`: the middle of the result is the middle of the left factor.
    Rprod,
}

impl Product {
    pub fn apply(self, u: &Disequence, v: &Disequence) -> Result<Disequence> {
        match self {
            Product::Lprod => u.lprod(v),
            Product::Rprod => u.rprod(v),
        }
    }
}

/// An element of a free dialgebra: a finitely supported map from
/// disequences to nonzero scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiElement {
    alphabet: Alphabet,
    kind: ScalarKind,
    terms: BTreeMap<Disequence, Scalar>,
}

impl DiElement {
    pub fn zero(alphabet: &Alphabet, kind: ScalarKind) -> Self {
        DiElement {
            alphabet: alphabet.clone(),
            kind,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(alphabet: &Alphabet, kind: ScalarKind, d: Disequence) -> Self {
        let mut e = Self::zero(alphabet, kind);
        e.add_term(d, Scalar::one(kind));
        e
    }

    pub fn from_terms<I>(alphabet: &Alphabet, kind: ScalarKind, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Disequence, Scalar)>,
    {
        let mut e = Self::zero(alphabet, kind);
        for (d, c) in terms {
            if d.alphabet_tag() != alphabet.tag() {
                return Err(Error::Domain("term over a different alphabet".into()));
            }
            if c.kind() != kind {
                return Err(Error::Domain("coefficient of a different scalar kind".into()));
            }
            e.add_term(d, c);
        }
        Ok(e)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending length-middle-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Disequence, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &Disequence) -> Option<&Scalar> {
        self.terms.get(d)
    }

    /// Adds `c * d` in place, dropping the term if it cancels.
    pub(crate) fn add_term(&mut self, d: Disequence, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::Domain("elements over different alphabets".into()));
        }
        if self.kind != other.kind {
            return Err(Error::Domain(format!(
                "scalar kinds differ: {} vs {}",
                self.kind, other.kind
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DiElement {
            alphabet: self.alphabet.clone(),
            kind: self.kind,
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Result<Self> {
        if s.kind() != self.kind {
            return Err(Error::Domain("scalar kind mismatch".into()));
        }
        if s.is_zero() {
            return Ok(Self::zero(&self.alphabet, self.kind));
        }
        Ok(DiElement {
            alphabet: self.alphabet.clone(),
            kind: self.kind,
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c * s)).collect(),
        })
    }

    /// Bilinear extension of the monomial product `op`.
    pub fn mul(&self, other: &Self, op: Product) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.alphabet, self.kind);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let w = match op {
                    Product::Lprod => u.lprod_unchecked(v),
                    Product::Rprod => u.rprod_unchecked(v),
                };
                out.add_term(w, a * b);
            }
        }
        Ok(out)
    }

    pub fn lprod(&self, other: &Self) -> Result<Self> {
        self.mul(other, Product::Lprod)
    }

    pub fn rprod(&self, other: &Self) -> Result<Self> {
        self.mul(other, Product::Rprod)
    }

    /// The largest monomial in the support and its coefficient, or `None`
    /// for the zero element.
    pub fn leading(&self) -> Option<(&Disequence, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().next_back().map_or(0, Disequence::len)
    }

    pub fn min_len(&self) -> usize {
        self.terms.keys().next().map_or(0, Disequence::len)
    }

    /// All terms share one length.
    pub fn is_homogeneous(&self) -> bool {
        self.min_len() == self.max_len()
    }

    /// Image under `[w]@m -> [w]@1`, the map to the associated associative
    /// algebra.
    pub fn forget_middles(&self) -> Self {
        let mut out = Self::zero(&self.alphabet, self.kind);
        for (d, c) in &self.terms {
            out.add_term(d.with_middle(1).expect("middle 1 always valid"), c.clone());
        }
        out
    }

    /// Scaled so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()).expect("same kind"),
        }
    }
}

/// The five differences that vanish in every dialgebra, with `⊢ = lprod`
/// and `⊣ = rprod`:
///
/// 1. `(x⊣y)⊣z − x⊣(y⊣z)`
/// 2. `(x⊢y)⊢z − x⊢(y⊢z)`
/// 3. `x⊣(y⊢z) − x⊣(y⊣z)`
/// 4. `(x⊣y)⊢z − (x⊢y)⊢z`
/// 5. `x⊢(y⊣z) − (x⊢y)⊣z`
pub fn axiom_residuals(x: &DiElement, y: &DiElement, z: &DiElement) -> Result<[DiElement; 5]> {
    let xl = x.lprod(y)?;
    let xr = x.rprod(y)?;
    let yl = y.lprod(z)?;
    let yr = y.rprod(z)?;
    Ok([
        xr.rprod(z)?.sub(&x.rprod(&yr)?)?,
        xl.lprod(z)?.sub(&x.lprod(&yl)?)?,
        x.rprod(&yl)?.sub(&x.rprod(&yr)?)?,
        xr.lprod(z)?.sub(&xl.lprod(z)?)?,
        x.lprod(&yr)?.sub(&xl.rprod(z)?)?,
    ])
}

impl fmt::Display for DiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", d.display(&self.alphabet))?;
        }
        Ok(())
    }
}
