//! Level-by-level construction of the shortest-middle-lexicographic basis.
//!
//! Level `t` holds the quotient of the span of monomials of length `<= t`.
//! Every monomial of length `t` is a one-letter product of a monomial of
//! length `t - 1`, and a basis monomial of length `t` is always such a
//! product of a basis monomial of length `t - 1`:
//!
//! * `[a1 ... at]@m = a1 ⊢ [a2 ... at]@(m-1)` when `m >= 2`,
//! * `[a1 ... at]@1 = [a1 ... a(t-1)]@1 ⊣ at`.
//!
//! So level `t` works in the space spanned by the lower basis together with
//! one coordinate per (operation, generator, basis monomial of length
//! `t - 1`). The relations among those coordinates are
//!
//! * coincidences of the free products (two coordinates naming the same
//!   disequence), written as the dialgebra axioms applied to basis
//!   monomials of length `t - 2`,
//! * relators whose longest term has length `t`,
//! * identity-scheme instances of total length `t`.
//!
//! Eliminating with the largest coordinate (in length-middle-lexicographic
//! order of the monomial it names) as pivot leaves exactly the basis
//! monomials of length `t` as free coordinates, and the reduced rows give
//! the normal form of every coordinate.
//!
//! A row whose pivot falls in the lower basis is a relation between shorter
//! monomials that only became visible at level `t` (inhomogeneous
//! relators). It is added as a relator and the levels from its length
//! upward are rebuilt.

use std::collections::{BTreeMap, HashMap};

use crate::dimonomial::{Alphabet, Disequence, Letter};
use crate::element::DiElement;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKind};

use super::echelon::{axpy, Echelon, SparseVec};
use super::{Mode, Presentation, Scheme};

/// Which identity-scheme instances are imposed at each level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeInstances {
    /// `f(x, y)` for every pair of basis monomials `x`, `y`.
    AllPairs,
    /// `f(g, y)` and `f(y, g)` for generators `g` and basis monomials `y`.
    Generators,
}

#[derive(Clone, Debug)]
pub struct EngineOptions {
    pub scheme_instances: SchemeInstances,
    /// Largest number of new coordinates allowed at one level.
    pub max_coordinates: usize,
    /// Largest number of rebuilds triggered by lower-level relations.
    pub max_restarts: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            scheme_instances: SchemeInstances::Generators,
            max_coordinates: 6_000_000,
            max_restarts: 10_000,
        }
    }
}

/// One-letter products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    /// `g ⊢ u`
    LeftL,
    /// `g ⊣ u`
    LeftR,
    /// `u ⊣ g`
    RightR,
    /// `u ⊢ g`
    RightL,
}

const DIALGEBRA_OPS: [Op; 4] = [Op::LeftL, Op::LeftR, Op::RightR, Op::RightL];
// In associative mode every monomial has middle 1 and the two products
// agree: left and right multiplication.
const ASSOCIATIVE_OPS: [Op; 2] = [Op::LeftR, Op::RightR];

impl Op {
    pub(crate) fn monomial(self, g: Letter, u: &Disequence) -> Disequence {
        let t = u.len() + 1;
        let mut word = Vec::with_capacity(t);
        let middle = match self {
            Op::LeftL | Op::LeftR => {
                word.push(g);
                word.extend_from_slice(u.word());
                if self == Op::LeftL {
                    u.middle() + 1
                } else {
                    1
                }
            }
            Op::RightR | Op::RightL => {
                word.extend_from_slice(u.word());
                word.push(g);
                if self == Op::RightR {
                    u.middle()
                } else {
                    t
                }
            }
        };
        Disequence::from_parts(u.alphabet_tag(), word, middle)
    }
}

struct Level {
    /// Size of the basis one level down (the `b` range of coordinates).
    nb_prev: usize,
    /// Normal form of every coordinate, over global basis ids.
    coord_nf: Vec<SparseVec>,
}

/// Signals that a relation between shorter monomials was found.
struct Restart(usize);

pub(crate) struct Engine {
    alphabet: Alphabet,
    kind: ScalarKind,
    mode: Mode,
    schemes: Vec<Scheme>,
    options: EngineOptions,
    relators: Vec<DiElement>,
    discovered: usize,
    restarts: usize,
    /// Global basis, ascending; ids are positions.
    basis: Vec<Disequence>,
    basis_index: HashMap<Disequence, u32>,
    /// `start[t]` is the first id of length `t`; `start[0] = start[1] = 0`.
    start: Vec<usize>,
    id_len: Vec<u32>,
    levels: Vec<Level>,
}

/// Working state of the level under construction.
struct Current<'a> {
    t: usize,
    /// Number of lower basis elements; top coordinates start here.
    lower: u32,
    nb_prev: usize,
    rank: &'a [u32],
}

impl Engine {
    pub(crate) fn new(pres: &Presentation, options: EngineOptions) -> Self {
        Engine {
            alphabet: pres.alphabet().clone(),
            kind: pres.kind(),
            mode: pres.mode(),
            schemes: pres.schemes().to_vec(),
            options,
            relators: pres.relators().to_vec(),
            discovered: 0,
            restarts: 0,
            basis: Vec::new(),
            basis_index: HashMap::new(),
            start: vec![0, 0],
            id_len: Vec::new(),
            levels: Vec::new(),
        }
    }

    fn ops(&self) -> &'static [Op] {
        match self.mode {
            Mode::Dialgebra => &DIALGEBRA_OPS,
            Mode::Associative => &ASSOCIATIVE_OPS,
        }
    }

    fn op_pos(&self, op: Op) -> usize {
        self.ops().iter().position(|&o| o == op).expect("op valid in mode")
    }

    pub(crate) fn completed(&self) -> usize {
        self.levels.len()
    }

    pub(crate) fn discovered_relations(&self) -> usize {
        self.discovered
    }

    pub(crate) fn basis(&self) -> &[Disequence] {
        &self.basis
    }

    pub(crate) fn basis_of_len(&self, t: usize) -> &[Disequence] {
        if t == 0 || t > self.completed() {
            return &[];
        }
        &self.basis[self.start[t]..self.start[t + 1]]
    }

    pub(crate) fn basis_id(&self, d: &Disequence) -> Option<u32> {
        self.basis_index.get(d).copied()
    }

    fn coord(&self, op: Op, g: Letter, nb_prev: usize, b_local: usize) -> usize {
        (self.op_pos(op) * self.alphabet.len() + g as usize) * nb_prev + b_local
    }

    /// `c * op(g, b)` for a lower basis id `b`, added into `acc`, using the
    /// stored normal forms.
    fn apply_completed_id(
        &self,
        op: Op,
        g: Letter,
        id: u32,
        c: &Scalar,
        acc: &mut BTreeMap<u32, Scalar>,
    ) {
        let len = self.id_len[id as usize] as usize;
        let level = &self.levels[len];
        let local = id as usize - self.start[len];
        let nf = &level.coord_nf[self.coord(op, g, level.nb_prev, local)];
        axpy(acc, c, nf);
    }

    fn apply_completed(&self, op: Op, g: Letter, v: &SparseVec) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (id, c) in v {
            self.apply_completed_id(op, g, *id, c, &mut acc);
        }
        acc.into_iter().collect()
    }

    fn apply_current(
        &self,
        cur: &Current<'_>,
        op: Op,
        g: Letter,
        v: &[(u32, Scalar)],
        c: &Scalar,
        acc: &mut BTreeMap<u32, Scalar>,
    ) {
        for (id, x) in v {
            let coef = c * x;
            let len = self.id_len[*id as usize] as usize;
            if len + 1 == cur.t {
                let local = *id as usize - self.start[len];
                let col = cur.lower + cur.rank[self.coord(op, g, cur.nb_prev, local)];
                axpy(acc, &coef, &[(col, Scalar::one(self.kind))]);
            } else {
                self.apply_completed_id(op, g, *id, &coef, acc);
            }
        }
    }

    /// Normal form of a monomial whose length is at most the number of
    /// completed levels.
    pub(crate) fn nf_monomial(&self, w: &Disequence) -> Result<SparseVec> {
        let t = w.len();
        if t > self.completed() {
            return Err(Error::OutOfRange {
                length: t,
                bound: self.completed(),
            });
        }
        let word = w.word();
        match self.mode {
            Mode::Dialgebra => {
                let m = w.middle();
                let mut v = self.levels[0].coord_nf[word[m - 1] as usize].clone();
                for &g in &word[m..] {
                    v = self.apply_completed(Op::RightR, g, &v);
                }
                for &g in word[..m - 1].iter().rev() {
                    v = self.apply_completed(Op::LeftL, g, &v);
                }
                Ok(v)
            }
            Mode::Associative => {
                let mut v = self.levels[0].coord_nf[word[0] as usize].clone();
                for &g in &word[1..] {
                    v = self.apply_completed(Op::RightR, g, &v);
                }
                Ok(v)
            }
        }
    }

    /// Adds `c * w` for a monomial `w` of length `cur.t` or less, expressed
    /// in the working coordinates of the current level.
    fn add_monomial_current(
        &self,
        cur: &Current<'_>,
        w: &Disequence,
        c: &Scalar,
        acc: &mut BTreeMap<u32, Scalar>,
    ) -> Result<()> {
        let t = w.len();
        if t < cur.t {
            let v = self.nf_monomial(w)?;
            axpy(acc, c, &v);
            return Ok(());
        }
        if t == 1 {
            let col = cur.lower + cur.rank[w.word()[0] as usize];
            axpy(acc, c, &[(col, Scalar::one(self.kind))]);
            return Ok(());
        }
        let word = w.word();
        let (op, g, u) = match self.mode {
            Mode::Dialgebra if w.middle() >= 2 => (Op::LeftL, word[0], w.slice(2, t, w.middle() - 1)),
            _ => (Op::RightR, word[t - 1], w.slice(1, t - 1, 1)),
        };
        let v = self.nf_monomial(&u)?;
        self.apply_current(cur, op, g, &v, c, acc);
        Ok(())
    }

    /// Builds levels until `target` are complete.
    pub(crate) fn build_to(&mut self, target: usize) -> Result<()> {
        while self.completed() < target {
            let t = self.completed() + 1;
            match self.build_level(t)? {
                None => {}
                Some(Restart(len)) => {
                    self.restarts += 1;
                    if self.restarts > self.options.max_restarts {
                        return Err(Error::ResourceCap(format!(
                            "more than {} rebuilds while saturating",
                            self.options.max_restarts
                        )));
                    }
                    self.truncate(len - 1);
                }
            }
        }
        Ok(())
    }

    fn truncate(&mut self, levels: usize) {
        if levels >= self.completed() {
            return;
        }
        let keep = self.start[levels + 1];
        for d in self.basis.drain(keep..) {
            self.basis_index.remove(&d);
        }
        self.id_len.truncate(keep);
        self.start.truncate(levels + 2);
        self.levels.truncate(levels);
    }

    fn build_level(&mut self, t: usize) -> Result<Option<Restart>> {
        let k = self.alphabet.len();
        let lower = self.basis.len() as u32;
        let (nb_prev, monomials): (usize, Vec<Disequence>) = if t == 1 {
            (0, self.alphabet.generators().collect())
        } else {
            let prev = self.basis_of_len(t - 1);
            let n = self.ops().len() * k * prev.len();
            if n > self.options.max_coordinates {
                return Err(Error::ResourceCap(format!(
                    "{n} coordinates at length {t} (cap {})",
                    self.options.max_coordinates
                )));
            }
            let mut ms = Vec::with_capacity(n);
            for &op in self.ops() {
                for g in 0..k as Letter {
                    for b in prev {
                        ms.push(op.monomial(g, b));
                    }
                }
            }
            (prev.len(), ms)
        };
        let n = monomials.len();
        if lower as usize + n >= u32::MAX as usize {
            return Err(Error::ResourceCap("coordinate ids exhausted".into()));
        }
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by(|&a, &b| monomials[a as usize].cmp(&monomials[b as usize]).then(a.cmp(&b)));
        let mut rank = vec![0u32; n];
        for (r, &c) in order.iter().enumerate() {
            rank[c as usize] = r as u32;
        }
        let cur = Current {
            t,
            lower,
            nb_prev,
            rank: &rank,
        };

        let mut ech = Echelon::new();
        for row in self.structural_rows(&cur) {
            ech.insert_map(&mut row.clone());
        }
        for r in &self.relators {
            if r.max_len() != t {
                continue;
            }
            let mut acc = BTreeMap::new();
            for (w, c) in r.terms() {
                self.add_monomial_current(&cur, w, c, &mut acc)?;
            }
            ech.insert_map(&mut acc);
        }
        for mut row in self.scheme_rows(&cur) {
            ech.insert_map(&mut row);
        }

        // Relations among shorter monomials.
        let mut collapses: Vec<DiElement> = Vec::new();
        for row in ech.rows() {
            let lead = row.last().expect("rows are nonzero").0;
            if lead < lower {
                let terms = row
                    .iter()
                    .map(|(id, c)| (self.basis[*id as usize].clone(), c.clone()));
                let e = DiElement::from_terms(&self.alphabet, self.kind, terms)?;
                collapses.push(e);
            }
        }
        if !collapses.is_empty() {
            let shortest = collapses.iter().map(DiElement::max_len).min().unwrap();
            for e in collapses {
                let e = e.monic();
                if !self.relators.contains(&e) {
                    self.relators.push(e);
                    self.discovered += 1;
                }
            }
            return Ok(Some(Restart(shortest)));
        }

        ech.finish();
        // Free top coordinates become the new basis, ascending.
        let mut new_id = vec![u32::MAX; n];
        let first = self.basis.len();
        for (r, &c) in order.iter().enumerate() {
            let col = lower + r as u32;
            if !ech.is_pivot(col) {
                let id = self.basis.len() as u32;
                new_id[r] = id;
                let d = monomials[c as usize].clone();
                debug_assert!(!self.basis_index.contains_key(&d));
                self.basis_index.insert(d.clone(), id);
                self.basis.push(d);
                self.id_len.push(t as u32);
            }
        }
        debug_assert!(self.basis[first..].windows(2).all(|w| w[0] < w[1]));
        self.start.push(self.basis.len());

        let relabel = |col: u32| -> u32 {
            if col < lower {
                col
            } else {
                new_id[(col - lower) as usize]
            }
        };
        let mut coord_nf = Vec::with_capacity(n);
        for c in 0..n {
            let col = lower + rank[c];
            let nf: SparseVec = match ech.pivot_row(col) {
                None => vec![(relabel(col), Scalar::one(self.kind))],
                Some(row) => {
                    let mut v: SparseVec = row
                        .iter()
                        .filter(|(x, _)| *x != col)
                        .map(|(x, s)| (relabel(*x), -s))
                        .collect();
                    v.sort_unstable_by_key(|e| e.0);
                    v
                }
            };
            coord_nf.push(nf);
        }
        self.levels.push(Level { nb_prev, coord_nf });
        Ok(None)
    }

    fn unit(&self, col: u32) -> (u32, Scalar) {
        (col, Scalar::one(self.kind))
    }

    fn top(&self, cur: &Current<'_>, op: Op, g: Letter, local: usize) -> u32 {
        cur.lower + cur.rank[self.coord(op, g, cur.nb_prev, local)]
    }

    /// Coincidences of one-letter products.
    fn structural_rows(&self, cur: &Current<'_>) -> Vec<BTreeMap<u32, Scalar>> {
        let t = cur.t;
        let k = self.alphabet.len() as Letter;
        let one = Scalar::one(self.kind);
        let minus = -&one;
        let mut rows = Vec::new();
        if t < 2 {
            return rows;
        }
        if t == 2 {
            // v is empty: g·h seen from the left and from the right.
            let nf1 = |g: Letter| self.levels[0].coord_nf[g as usize].clone();
            let pairs: &[(Op, Op)] = match self.mode {
                Mode::Dialgebra => &[(Op::LeftR, Op::RightR), (Op::LeftL, Op::RightL)],
                Mode::Associative => &[(Op::LeftR, Op::RightR)],
            };
            for g in 0..k {
                for h in 0..k {
                    for &(left, right) in pairs {
                        let mut acc = BTreeMap::new();
                        self.apply_current(cur, left, g, &nf1(h), &one, &mut acc);
                        self.apply_current(cur, right, h, &nf1(g), &minus, &mut acc);
                        if !acc.is_empty() {
                            rows.push(acc);
                        }
                    }
                }
            }
            return rows;
        }
        // Each entry: outer op on (inner op applied to v) minus the same
        // disequence reached the other way.
        // (outer_a, gen_a, inner_a, gen_a_inner) - (outer_b, ...)
        // with gen slots 0 = g, 1 = h.
        type Side = (Op, usize, Op, usize);
        let identities: &[(Side, Side)] = match self.mode {
            Mode::Dialgebra => &[
                // g ⊢ (v ⊣ h) = (g ⊢ v) ⊣ h
                ((Op::LeftL, 0, Op::RightR, 1), (Op::RightR, 1, Op::LeftL, 0)),
                // g ⊣ (h ⊢ v) = g ⊣ (h ⊣ v)
                ((Op::LeftR, 0, Op::LeftL, 1), (Op::LeftR, 0, Op::LeftR, 1)),
                // g ⊣ (v ⊣ h) = (g ⊣ v) ⊣ h
                ((Op::LeftR, 0, Op::RightR, 1), (Op::RightR, 1, Op::LeftR, 0)),
                // (g ⊢ v) ⊢ h = (g ⊣ v) ⊢ h
                ((Op::RightL, 1, Op::LeftL, 0), (Op::RightL, 1, Op::LeftR, 0)),
                // g ⊢ (v ⊢ h) = (g ⊢ v) ⊢ h
                ((Op::LeftL, 0, Op::RightL, 1), (Op::RightL, 1, Op::LeftL, 0)),
            ],
            Mode::Associative => &[
                // g (v h) = (g v) h
                ((Op::LeftR, 0, Op::RightR, 1), (Op::RightR, 1, Op::LeftR, 0)),
            ],
        };
        let prev2 = self.start[t - 2]..self.start[t - 1];
        for v in prev2 {
            let ev: SparseVec = vec![self.unit(v as u32)];
            for g in 0..k {
                for h in 0..k {
                    let gens = [g, h];
                    for &((oa, ga, ia, gia), (ob, gb, ib, gib)) in identities {
                        let mut acc = BTreeMap::new();
                        let inner_a = self.apply_completed(ia, gens[gia], &ev);
                        self.apply_current(cur, oa, gens[ga], &inner_a, &one, &mut acc);
                        let inner_b = self.apply_completed(ib, gens[gib], &ev);
                        self.apply_current(cur, ob, gens[gb], &inner_b, &minus, &mut acc);
                        if !acc.is_empty() {
                            rows.push(acc);
                        }
                    }
                }
            }
        }
        rows
    }

    fn scheme_rows(&self, cur: &Current<'_>) -> Vec<BTreeMap<u32, Scalar>> {
        let mut rows = Vec::new();
        if self.schemes.is_empty() || cur.t < 2 {
            return rows;
        }
        let one = Scalar::one(self.kind);
        let minus = -&one;
        let k = self.alphabet.len() as Letter;
        let prev = cur.nb_prev;
        let use_generators =
            self.mode == Mode::Associative || self.options.scheme_instances == SchemeInstances::Generators;
        if use_generators {
            let pairs: Vec<(Op, Op)> = match self.mode {
                Mode::Associative => vec![(Op::LeftR, Op::RightR)],
                Mode::Dialgebra => self
                    .schemes
                    .iter()
                    .flat_map(|s| match s {
                        Scheme::Lcomm => vec![(Op::LeftL, Op::RightL)],
                        Scheme::Rcomm => vec![(Op::LeftR, Op::RightR)],
                        Scheme::Cross => vec![(Op::LeftL, Op::RightR), (Op::RightL, Op::LeftR)],
                    })
                    .collect(),
            };
            for g in 0..k {
                for b in 0..prev {
                    for &(a, c) in &pairs {
                        let x = self.top(cur, a, g, b);
                        let y = self.top(cur, c, g, b);
                        if x != y {
                            rows.push([(x, one.clone()), (y, minus.clone())].into_iter().collect());
                        }
                    }
                }
            }
            return rows;
        }
        for i in 1..cur.t {
            let j = cur.t - i;
            for x in self.start[i]..self.start[i + 1] {
                for y in self.start[j]..self.start[j + 1] {
                    let (x, y) = (x as u32, y as u32);
                    for s in &self.schemes {
                        let mut acc = BTreeMap::new();
                        match s {
                            Scheme::Lcomm => {
                                self.product_current(cur, x, y, Op::LeftL, &one, &mut acc);
                                self.product_current(cur, y, x, Op::LeftL, &minus, &mut acc);
                            }
                            Scheme::Rcomm => {
                                self.product_current(cur, x, y, Op::LeftR, &one, &mut acc);
                                self.product_current(cur, y, x, Op::LeftR, &minus, &mut acc);
                            }
                            Scheme::Cross => {
                                self.product_current(cur, x, y, Op::LeftL, &one, &mut acc);
                                self.product_current(cur, y, x, Op::LeftR, &minus, &mut acc);
                            }
                        }
                        if !acc.is_empty() {
                            rows.push(acc);
                        }
                    }
                }
            }
        }
        rows
    }

    /// `c * (x ⊢ y)` (`product = LeftL`) or `c * (x ⊣ y)` (`LeftR`) for
    /// basis ids whose lengths add up to the current level, built as a chain
    /// of one-letter left products applied to `y`.
    fn product_current(
        &self,
        cur: &Current<'_>,
        x: u32,
        y: u32,
        product: Op,
        c: &Scalar,
        acc: &mut BTreeMap<u32, Scalar>,
    ) {
        let xm = &self.basis[x as usize];
        let word = xm.word();
        let i = word.len();
        // Letters applied from the last to the first.
        let mut steps: Vec<(Op, Letter)> = Vec::with_capacity(i);
        for pos in (1..=i).rev() {
            let op = match product {
                Op::LeftL => Op::LeftL,
                _ if pos >= xm.middle() => Op::LeftR,
                _ => Op::LeftL,
            };
            steps.push((op, word[pos - 1]));
        }
        let mut v: SparseVec = vec![self.unit(y)];
        let (last, init) = steps.split_last().expect("x is nonempty");
        for &(op, g) in init {
            v = self.apply_completed(op, g, &v);
        }
        self.apply_current(cur, last.0, last.1, &v, c, acc);
    }

    /// Every coordinate of levels `2..=max_len` that is not itself a basis
    /// monomial, with its normal form.
    pub(crate) fn pivot_coordinates(&self, max_len: usize) -> BTreeMap<Disequence, SparseVec> {
        let mut out = BTreeMap::new();
        let k = self.alphabet.len() as Letter;
        for t in 1..=max_len.min(self.completed()) {
            let level = &self.levels[t - 1];
            if t == 1 {
                for g in 0..k {
                    let d = self.alphabet.generator(g);
                    if self.basis_id(&d).is_none() {
                        out.insert(d, level.coord_nf[g as usize].clone());
                    }
                }
                continue;
            }
            let prev = self.basis_of_len(t - 1);
            for &op in self.ops() {
                for g in 0..k {
                    for (b_local, b) in prev.iter().enumerate() {
                        let d = op.monomial(g, b);
                        if self.basis_id(&d).is_some() || out.contains_key(&d) {
                            continue;
                        }
                        let nf = level.coord_nf[self.coord(op, g, level.nb_prev, b_local)].clone();
                        out.insert(d, nf);
                    }
                }
            }
        }
        out
    }

    pub(crate) fn vec_to_element(&self, v: &[(u32, Scalar)]) -> DiElement {
        DiElement::from_terms(
            &self.alphabet,
            self.kind,
            v.iter().map(|(id, c)| (self.basis[*id as usize].clone(), c.clone())),
        )
        .expect("basis monomials share the alphabet")
    }
}
