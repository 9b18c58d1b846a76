//! Finitely presented dialgebras and their associated associative algebras.

mod echelon;
mod engine;
mod saturate;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dimonomial::Alphabet;
use crate::element::DiElement;
use crate::error::{Error, Result};
use crate::scalar::ScalarKind;

pub use engine::{EngineOptions, SchemeInstances};
pub use saturate::{echelonize, ideal_span_upto};
pub use table::{basis_upto, basis_upto_with, prefix_suffix_check, BasisTable, PrefixSuffixReport, Side, Violation};

/// Identities imposed on all pairs of elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// `x ⊢ y = y ⊢ x`
    Lcomm,
    /// `x ⊣ y = y ⊣ x`
    Rcomm,
    /// `x ⊢ y = y ⊣ x`
    Cross,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Lcomm, Scheme::Rcomm, Scheme::Cross];

    pub fn tag(self) -> &'static str {
        match self {
            Scheme::Lcomm => "lcomm",
            Scheme::Rcomm => "rcomm",
            Scheme::Cross => "cross",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Scheme::ALL.into_iter().find(|s| s.tag() == tag)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dialgebra,
    Associative,
}

impl Mode {
    pub fn tag(self) -> &'static str {
        match self {
            Mode::Dialgebra => "dialgebra",
            Mode::Associative => "associative",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Generators, relators and identity schemes defining a quotient of the
/// free dialgebra (or, in associative mode, of the free associative
/// algebra without unit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    kind: ScalarKind,
    relators: Vec<DiElement>,
    schemes: Vec<Scheme>,
    slack: Option<usize>,
    mode: Mode,
}

impl Presentation {
    /// The free dialgebra on `alphabet`.
    pub fn free(alphabet: Alphabet, kind: ScalarKind) -> Self {
        Presentation {
            alphabet,
            kind,
            relators: Vec::new(),
            schemes: Vec::new(),
            slack: None,
            mode: Mode::Dialgebra,
        }
    }

    pub fn with_relator(mut self, r: DiElement) -> Result<Self> {
        self.add_relator(r)?;
        Ok(self)
    }

    pub fn add_relator(&mut self, r: DiElement) -> Result<()> {
        if r.is_zero() {
            return Err(Error::Domain("zero relator".into()));
        }
        if r.alphabet() != &self.alphabet || r.kind() != self.kind {
            return Err(Error::Domain(
                "relator over a different alphabet or field".into(),
            ));
        }
        if self.mode == Mode::Associative && r.terms().any(|(d, _)| d.middle() != 1) {
            return Err(Error::Domain(
                "associative presentations only hold middle-1 monomials".into(),
            ));
        }
        self.relators.push(r);
        Ok(())
    }

    pub fn with_scheme(mut self, s: Scheme) -> Self {
        self.add_scheme(s);
        self
    }

    pub fn add_scheme(&mut self, s: Scheme) {
        if !self.schemes.contains(&s) {
            self.schemes.push(s);
        }
    }

    pub fn with_slack(mut self, slack: usize) -> Self {
        self.slack = Some(slack);
        self
    }

    pub fn set_slack(&mut self, slack: Option<usize>) {
        self.slack = slack;
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn relators(&self) -> &[DiElement] {
        &self.relators
    }

    pub fn schemes(&self) -> &[Scheme] {
        &self.schemes
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The slack given explicitly, if any.
    pub fn explicit_slack(&self) -> Option<usize> {
        self.slack
    }

    /// Every relator is length-homogeneous. Schemes always are.
    pub fn is_homogeneous(&self) -> bool {
        self.relators.iter().all(DiElement::is_homogeneous)
    }

    /// Extra saturation degrees: zero for homogeneous presentations,
    /// otherwise the explicit value or the largest length spread inside a
    /// relator.
    pub fn effective_slack(&self) -> usize {
        if self.is_homogeneous() {
            return 0;
        }
        self.slack.unwrap_or_else(|| {
            self.relators
                .iter()
                .map(|r| r.max_len() - r.min_len())
                .max()
                .unwrap_or(0)
        })
    }

    /// No relators and no schemes.
    pub fn is_free(&self) -> bool {
        self.relators.is_empty() && self.schemes.is_empty()
    }

    /// The presentation of the associated associative algebra: every
    /// middle is forgotten, relators that vanish are dropped, and every
    /// scheme becomes plain commutativity (all three tags coincide there).
    pub fn associated_associative(&self) -> Presentation {
        let mut relators: Vec<DiElement> = Vec::new();
        for r in &self.relators {
            let img = r.forget_middles();
            if !img.is_zero() && !relators.contains(&img) {
                relators.push(img);
            }
        }
        Presentation {
            alphabet: self.alphabet.clone(),
            kind: self.kind,
            relators,
            schemes: self.schemes.clone(),
            slack: self.slack,
            mode: Mode::Associative,
        }
    }

    /// Stable short identifier of the presentation text.
    pub fn fingerprint(&self) -> String {
        let text = self.to_string();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// The `.dpres` text form. Associative presentations are written as their
/// relators; the mode itself is not part of the file format.
impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ScalarKind::Rational => writeln!(f, "field Q")?,
            ScalarKind::Prime(p) => writeln!(f, "field gf {p}")?,
        }
        writeln!(f, "generators {}", self.alphabet.names().join(" "))?;
        for r in &self.relators {
            writeln!(f, "rel {r}")?;
        }
        for s in &self.schemes {
            writeln!(f, "idrel {s}")?;
        }
        if let Some(k) = self.slack {
            writeln!(f, "slack {k}")?;
        }
        Ok(())
    }
}
