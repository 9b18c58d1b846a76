//! Direct ideal saturation over explicit monomials. Only practical for
//! short lengths; [`super::basis_upto`] does not go through it.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::dimonomial::{Alphabet, Disequence};
use crate::element::{DiElement, Product};
use crate::scalar::{Scalar, ScalarKind};

use super::echelon::{Echelon, SparseVec};
use super::{Mode, Presentation, Scheme};

/// Column ids for monomials, increasing with the monomial order.
struct Columns {
    ids: HashMap<Disequence, u32>,
    monomials: Vec<Disequence>,
}

impl Columns {
    fn new(alphabet: &Alphabet, max_len: usize, mode: Mode) -> Self {
        let mut monomials = Vec::new();
        for t in 1..=max_len {
            let mut ds = alphabet.disequences_of_length(t);
            if mode == Mode::Associative {
                ds.retain(|d| d.middle() == 1);
            }
            ds.sort();
            monomials.extend(ds);
        }
        let ids = monomials
            .iter()
            .enumerate()
            .map(|(i, d)| (d.clone(), i as u32))
            .collect();
        Columns { ids, monomials }
    }

    fn encode(&self, e: &DiElement) -> SparseVec {
        let mut v: SparseVec = e
            .terms()
            .map(|(d, c)| (self.ids[d], c.clone()))
            .collect();
        v.sort_unstable_by_key(|x| x.0);
        v
    }

    fn decode(&self, alphabet: &Alphabet, kind: ScalarKind, v: &[(u32, Scalar)]) -> DiElement {
        DiElement::from_terms(
            alphabet,
            kind,
            v.iter()
                .map(|(i, c)| (self.monomials[*i as usize].clone(), c.clone())),
        )
        .expect("columns share the alphabet")
    }
}

fn scheme_instances(
    alphabet: &Alphabet,
    kind: ScalarKind,
    schemes: &[Scheme],
    mode: Mode,
    max_len: usize,
) -> Vec<DiElement> {
    let mut out = Vec::new();
    if schemes.is_empty() {
        return out;
    }
    let monomials: Vec<Vec<Disequence>> = (0..max_len)
        .map(|t| {
            let mut ds = alphabet.disequences_of_length(t);
            if mode == Mode::Associative {
                ds.retain(|d| d.middle() == 1);
            }
            ds
        })
        .collect();
    let mono = |d: Disequence| DiElement::monomial(alphabet, kind, d);
    for i in 1..max_len {
        for j in 1..=max_len - i {
            for x in &monomials[i] {
                for y in &monomials[j] {
                    let pairs: Vec<(Disequence, Disequence)> = match mode {
                        Mode::Associative => vec![(x.rprod_unchecked(y), y.rprod_unchecked(x))],
                        Mode::Dialgebra => schemes
                            .iter()
                            .map(|s| match s {
                                Scheme::Lcomm => (x.lprod_unchecked(y), y.lprod_unchecked(x)),
                                Scheme::Rcomm => (x.rprod_unchecked(y), y.rprod_unchecked(x)),
                                Scheme::Cross => (x.lprod_unchecked(y), y.rprod_unchecked(x)),
                            })
                            .collect(),
                    };
                    for (u, v) in pairs {
                        if u != v {
                            out.push(mono(u).sub(&mono(v)).expect("same alphabet"));
                        }
                    }
                }
            }
        }
    }
    out
}

/// A spanning set (in fact an echelon basis) of the part of the ideal that
/// is reachable within length `n + slack`: relators and scheme instances,
/// closed under one-letter products on both sides with both products.
pub fn ideal_span_upto(pres: &Presentation, n: usize) -> Vec<DiElement> {
    let max_len = n + pres.effective_slack();
    let alphabet = pres.alphabet();
    let kind = pres.kind();
    let mode = pres.mode();
    let cols = Columns::new(alphabet, max_len, mode);
    let products: &[Product] = match mode {
        Mode::Dialgebra => &[Product::Lprod, Product::Rprod],
        // Middles stay at 1 under the right product on both sides.
        Mode::Associative => &[Product::Rprod],
    };

    let mut queue: VecDeque<DiElement> = pres
        .relators()
        .iter()
        .filter(|r| r.max_len() <= max_len)
        .cloned()
        .collect();
    queue.extend(scheme_instances(alphabet, kind, pres.schemes(), mode, max_len));

    let gens: Vec<DiElement> = alphabet
        .generators()
        .map(|g| DiElement::monomial(alphabet, kind, g))
        .collect();
    let mut ech = Echelon::new();
    while let Some(e) = queue.pop_front() {
        if ech.insert(cols.encode(&e)).is_none() {
            continue;
        }
        if e.max_len() >= max_len {
            continue;
        }
        for g in &gens {
            for &p in products {
                queue.push_back(g.mul(&e, p).expect("same alphabet"));
                queue.push_back(e.mul(g, p).expect("same alphabet"));
            }
        }
    }
    ech.finish();
    let mut rows: Vec<SparseVec> = ech.rows().cloned().collect();
    rows.sort_by_key(|r| r.last().map(|x| x.0));
    rows.iter().map(|r| cols.decode(alphabet, kind, r)).collect()
}

/// Reduced row echelon form: pivot (largest monomial) to its row, monic,
/// with no pivot appearing in another row.
pub fn echelonize(rows: &[DiElement]) -> BTreeMap<Disequence, DiElement> {
    let Some(first) = rows.first() else {
        return BTreeMap::new();
    };
    let alphabet = first.alphabet().clone();
    let kind = first.kind();
    let mut monomials: Vec<Disequence> = rows
        .iter()
        .flat_map(|r| r.terms().map(|(d, _)| d.clone()))
        .collect();
    monomials.sort();
    monomials.dedup();
    let ids: HashMap<&Disequence, u32> = monomials
        .iter()
        .enumerate()
        .map(|(i, d)| (d, i as u32))
        .collect();
    let mut ech = Echelon::new();
    for r in rows {
        let mut v: SparseVec = r.terms().map(|(d, c)| (ids[d], c.clone())).collect();
        v.sort_unstable_by_key(|x| x.0);
        ech.insert(v);
    }
    ech.finish();
    ech.rows()
        .map(|r| {
            let e = DiElement::from_terms(
                &alphabet,
                kind,
                r.iter()
                    .map(|(i, c)| (monomials[*i as usize].clone(), c.clone())),
            )
            .expect("rows share the alphabet");
            (monomials[r.last().expect("nonzero").0 as usize].clone(), e)
        })
        .collect()
}
