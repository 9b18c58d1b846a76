//! Truncated quotient bases and normal forms.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::dimonomial::{Alphabet, Disequence};
use crate::element::DiElement;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKind};

use super::echelon::axpy;
use super::engine::{Engine, EngineOptions};
use super::{Mode, Presentation};

/// The shortest-middle-lexicographic basis of a presented dialgebra (or
/// its associated associative algebra) up to a length bound, with the
/// data needed to compute normal forms.
#[derive(Clone)]
pub struct BasisTable {
    mode: Mode,
    degree_bound: usize,
    homogeneous: bool,
    slack: usize,
    alphabet: Alphabet,
    kind: ScalarKind,
    engine: Arc<Engine>,
}

impl std::fmt::Debug for BasisTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BasisTable")
            .field("mode", &self.mode)
            .field("degree_bound", &self.degree_bound)
            .field("homogeneous", &self.homogeneous)
            .field("slack", &self.slack)
            .field("size", &self.len())
            .finish()
    }
}

/// `basis_upto_with` using the default engine options.
pub fn basis_upto(pres: &Presentation, n: usize, mode: Mode) -> Result<BasisTable> {
    basis_upto_with(pres, n, mode, &EngineOptions::default())
}

pub fn basis_upto_with(
    pres: &Presentation,
    n: usize,
    mode: Mode,
    options: &EngineOptions,
) -> Result<BasisTable> {
    if n == 0 {
        return Err(Error::Domain("degree bound must be at least 1".into()));
    }
    let pres = match (pres.mode(), mode) {
        (Mode::Dialgebra, Mode::Associative) => pres.associated_associative(),
        (Mode::Associative, Mode::Dialgebra) => {
            return Err(Error::Domain(
                "an associative presentation has no dialgebra table".into(),
            ))
        }
        _ => pres.clone(),
    };
    let slack = pres.effective_slack();
    let mut engine = Engine::new(&pres, options.clone());
    engine.build_to(n + slack)?;
    Ok(BasisTable {
        mode,
        degree_bound: n,
        homogeneous: pres.is_homogeneous(),
        slack,
        alphabet: pres.alphabet().clone(),
        kind: pres.kind(),
        engine: Arc::new(engine),
    })
}

#[derive(Serialize)]
struct TableJson<'a> {
    mode: &'a str,
    degree_bound: usize,
    homogeneous: bool,
    slack: usize,
    approximate: bool,
    basis: Vec<String>,
    pivots: Vec<String>,
}

impl BasisTable {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn slack(&self) -> usize {
        self.slack
    }

    /// Set for inhomogeneous presentations: the ideal is a lower bound
    /// and the basis an upper bound of the true ones.
    pub fn approximate(&self) -> bool {
        !self.homogeneous
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    /// Relations between shorter monomials that only appeared at greater
    /// length while saturating.
    pub fn discovered_relations(&self) -> usize {
        self.engine.discovered_relations()
    }

    /// Basis monomials of length exactly `t`, ascending.
    pub fn basis_at(&self, t: usize) -> &[Disequence] {
        if t > self.degree_bound {
            return &[];
        }
        self.engine.basis_of_len(t)
    }

    /// All basis monomials of length at most the bound, ascending.
    pub fn basis(&self) -> &[Disequence] {
        let end: usize = (1..=self.degree_bound).map(|t| self.basis_at(t).len()).sum();
        &self.engine.basis()[..end]
    }

    pub fn count_at(&self, t: usize) -> usize {
        self.basis_at(t).len()
    }

    /// `|B^{<=n}|`.
    pub fn len(&self) -> usize {
        self.basis().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, d: &Disequence) -> bool {
        d.len() <= self.degree_bound && self.engine.basis_id(d).is_some()
    }

    /// Pivot monomials that are one-letter products of basis monomials,
    /// ascending, with their reduced rows `pivot - normal_form(pivot)`.
    /// Every other non-basis monomial reduces through these.
    pub fn rows(&self) -> BTreeMap<Disequence, DiElement> {
        self.engine
            .pivot_coordinates(self.degree_bound)
            .into_iter()
            .map(|(d, nf)| {
                let mut e = self.engine.vec_to_element(&nf).neg();
                e = e
                    .add(&DiElement::monomial(&self.alphabet, self.kind, d.clone()))
                    .expect("same alphabet");
                (d, e)
            })
            .collect()
    }

    pub fn pivots(&self) -> Vec<Disequence> {
        self.engine
            .pivot_coordinates(self.degree_bound)
            .into_keys()
            .collect()
    }

    fn check(&self, x: &DiElement) -> Result<()> {
        if x.alphabet() != &self.alphabet || x.kind() != self.kind {
            return Err(Error::Domain("element from another alphabet or field".into()));
        }
        if x.max_len() > self.degree_bound {
            return Err(Error::OutOfRange {
                length: x.max_len(),
                bound: self.degree_bound,
            });
        }
        Ok(())
    }

    /// The unique combination of basis monomials congruent to `x`. In
    /// associative mode middles are forgotten first.
    pub fn normal_form(&self, x: &DiElement) -> Result<DiElement> {
        self.check(x)?;
        let x = match self.mode {
            Mode::Associative => x.forget_middles(),
            Mode::Dialgebra => x.clone(),
        };
        let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (d, c) in x.terms() {
            let v = self.engine.nf_monomial(d)?;
            axpy(&mut acc, c, &v);
        }
        let v: Vec<(u32, Scalar)> = acc.into_iter().collect();
        Ok(self.engine.vec_to_element(&v))
    }

    pub fn normal_form_monomial(&self, d: &Disequence) -> Result<DiElement> {
        self.normal_form(&DiElement::monomial(&self.alphabet, self.kind, d.clone()))
    }

    pub fn to_json(&self) -> String {
        let show = |d: &Disequence| d.display(&self.alphabet).to_string();
        let j = TableJson {
            mode: self.mode.tag(),
            degree_bound: self.degree_bound,
            homogeneous: self.homogeneous,
            slack: self.slack,
            approximate: self.approximate(),
            basis: self.basis().iter().map(show).collect(),
            pivots: self.pivots().iter().map(show).collect(),
        };
        serde_json::to_string_pretty(&j).expect("plain data")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Prefix,
    Suffix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub monomial: Disequence,
    pub side: Side,
    /// The word that should be an associative basis monomial.
    pub missing: Disequence,
}

#[derive(Clone, Debug, Default)]
pub struct PrefixSuffixReport {
    pub violations: Vec<Violation>,
    /// Either table is approximate, so violations are warnings.
    pub truncated: bool,
}

impl PrefixSuffixReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For each dialgebra basis monomial `[a1 ... at]@p`, the part left of the
/// middle and the part right of it must be associative basis words.
pub fn prefix_suffix_check(d: &BasisTable, a: &BasisTable) -> Result<PrefixSuffixReport> {
    if d.mode != Mode::Dialgebra || a.mode != Mode::Associative {
        return Err(Error::Domain(
            "expected a dialgebra table and an associative table".into(),
        ));
    }
    if d.alphabet != a.alphabet {
        return Err(Error::Domain("tables over different alphabets".into()));
    }
    let mut report = PrefixSuffixReport {
        violations: Vec::new(),
        truncated: d.approximate() || a.approximate(),
    };
    for m in d.basis() {
        let (p, t) = (m.middle(), m.len());
        if p > 1 {
            let pre = m.slice(1, p - 1, 1);
            if !a.contains(&pre) {
                report.violations.push(Violation {
                    monomial: m.clone(),
                    side: Side::Prefix,
                    missing: pre,
                });
            }
        }
        if p < t {
            let suf = m.slice(p + 1, t, 1);
            if !a.contains(&suf) {
                report.violations.push(Violation {
                    monomial: m.clone(),
                    side: Side::Suffix,
                    missing: suf,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;
    use crate::presentation::Scheme;

    fn q() -> ScalarKind {
        ScalarKind::Rational
    }

    fn shown(t: &BasisTable) -> Vec<String> {
        t.basis()
            .iter()
            .map(|d| d.display(t.alphabet()).to_string())
            .collect()
    }

    #[test]
    fn free_one_letter() {
        let x = Alphabet::new(["a"]).unwrap();
        let p = Presentation::free(x, q());
        let d = basis_upto(&p, 3, Mode::Dialgebra).unwrap();
        assert_eq!(
            shown(&d),
            ["[a]@1", "[a a]@1", "[a a]@2", "[a a a]@1", "[a a a]@2", "[a a a]@3"]
        );
        let a = basis_upto(&p, 3, Mode::Associative).unwrap();
        assert_eq!(shown(&a), ["[a]@1", "[a a]@1", "[a a a]@1"]);
        assert!(prefix_suffix_check(&d, &a).unwrap().passed());
        assert!(d.rows().is_empty());
    }

    #[test]
    fn free_two_letters() {
        let x = Alphabet::new(["a", "b"]).unwrap();
        let p = Presentation::free(x.clone(), q());
        let d = basis_upto(&p, 2, Mode::Dialgebra).unwrap();
        assert_eq!(d.len(), 10);
        let e = parse_element(&x, q(), "[a b]@2 - 3*[b]@1").unwrap();
        assert_eq!(d.normal_form(&e).unwrap(), e);
        let long = parse_element(&x, q(), "[a b a]@2").unwrap();
        assert!(matches!(d.normal_form(&long), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn remark_normal_form() {
        let x = Alphabet::new(["a", "b"]).unwrap();
        let r = parse_element(&x, q(), "[b]@1 - [a a]@2 + [a a]@1").unwrap();
        let p = Presentation::free(x.clone(), q()).with_relator(r).unwrap();
        let d = basis_upto(&p, 2, Mode::Dialgebra).unwrap();
        assert!(d.approximate());
        let aa2 = parse_element(&x, q(), "[a a]@2").unwrap();
        let nf = d.normal_form(&aa2).unwrap();
        assert_eq!(nf, parse_element(&x, q(), "[b]@1 + [a a]@1").unwrap());
        assert_eq!(d.normal_form(&nf).unwrap(), nf);
    }

    #[test]
    fn commutative_one_letter() {
        let x = Alphabet::new(["a"]).unwrap();
        let p = Presentation::free(x, q())
            .with_scheme(Scheme::Lcomm)
            .with_scheme(Scheme::Rcomm);
        let d = basis_upto(&p, 5, Mode::Dialgebra).unwrap();
        for t in 1..=5 {
            for m in d.basis_at(t) {
                assert!(m.middle() == 1 || m.middle() == t);
            }
        }
    }
}
