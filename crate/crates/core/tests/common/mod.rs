//! Brute-force reference computations shared by the integration tests.
//!
//! Nothing here goes through the library's basis machinery: monomials are
//! enumerated explicitly as `(word, middle)` pairs, the ideal is closed
//! under multiplication by every monomial on both sides, and ranks are
//! taken by elimination over a prime field.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, VecDeque};

use digrow::presentation::{Mode, Presentation, Scheme};
use digrow::{DiElement, ScalarKind};

pub const P: u64 = 1_000_000_007;

pub type Word = Vec<u16>;
/// `(word, middle)`, middle 1-based.
pub type Mono = (Word, usize);

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

/// All words of length `t` over `k` letters.
pub fn words(k: usize, t: usize) -> Vec<Word> {
    let total = k.pow(t as u32);
    (0..total)
        .map(|mut code| {
            let mut w = vec![0u16; t];
            for slot in w.iter_mut().rev() {
                *slot = (code % k) as u16;
                code /= k;
            }
            w
        })
        .collect()
}

/// Every disequence of length `t` (every word with every middle), or only
/// middle 1 in associative mode.
pub fn monomials_of_length(k: usize, t: usize, assoc: bool) -> Vec<Mono> {
    let mut out = Vec::new();
    let top = if assoc { 1 } else { t };
    for w in words(k, t) {
        for m in 1..=top {
            out.push((w.clone(), m));
        }
    }
    out
}

fn concat(u: &Mono, v: &Mono, middle: usize) -> Mono {
    let mut w = u.0.clone();
    w.extend_from_slice(&v.0);
    (w, middle)
}

/// `u ⊢ v`
pub fn left(u: &Mono, v: &Mono) -> Mono {
    concat(u, v, u.0.len() + v.1)
}

/// `u ⊣ v`
pub fn right(u: &Mono, v: &Mono) -> Mono {
    concat(u, v, u.1)
}

type Vector = BTreeMap<usize, u64>;

struct Space {
    assoc: bool,
    max_len: usize,
    ids: HashMap<Mono, usize>,
    monos: Vec<Mono>,
    /// Indices of the monomials of each length.
    by_len: Vec<Vec<usize>>,
}

impl Space {
    fn new(k: usize, max_len: usize, assoc: bool) -> Self {
        let mut monos = Vec::new();
        let mut by_len = vec![Vec::new()];
        for t in 1..=max_len {
            let start = monos.len();
            monos.extend(monomials_of_length(k, t, assoc));
            by_len.push((start..monos.len()).collect());
        }
        let ids = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Space {
            assoc,
            max_len,
            ids,
            monos,
            by_len,
        }
    }

    fn len_of(&self, v: &Vector) -> usize {
        v.keys().map(|&i| self.monos[i].0.len()).max().unwrap_or(0)
    }

    fn products(&self, u: &Mono, v: &Mono) -> Vec<Mono> {
        if self.assoc {
            vec![concat(u, v, 1)]
        } else {
            vec![left(u, v), right(u, v)]
        }
    }
}

fn add_scaled(acc: &mut Vector, c: u64, v: &Vector) {
    for (&i, &x) in v {
        let e = acc.entry(i).or_insert(0);
        *e = (*e + c * x) % P;
        if *e == 0 {
            acc.remove(&i);
        }
    }
}

/// Echelon form with pivot = largest index; index order refines length.
#[derive(Default)]
struct Ech {
    rows: HashMap<usize, Vector>,
}

impl Ech {
    fn insert(&mut self, mut v: Vector) -> Option<Vector> {
        loop {
            let (&lead, &c) = v.iter().next_back()?;
            match self.rows.get(&lead) {
                Some(r) => {
                    let r = r.clone();
                    add_scaled(&mut v, P - c, &r);
                }
                None => {
                    let inv = inv_mod(c);
                    for x in v.values_mut() {
                        *x = *x * inv % P;
                    }
                    self.rows.insert(lead, v.clone());
                    return Some(v);
                }
            }
        }
    }
}

fn coefficient_mod_p(c: &digrow::Scalar) -> u64 {
    match c.kind() {
        ScalarKind::Prime(_) => c.to_string().parse::<u64>().unwrap() % P,
        ScalarKind::Rational => {
            let r = c.as_rational().unwrap();
            let reduce = |x: &num_bigint::BigInt| -> u64 {
                let m = x % num_bigint::BigInt::from(P);
                let m: i64 = m.try_into().unwrap();
                m.rem_euclid(P as i64) as u64
            };
            reduce(r.numer()) * inv_mod(reduce(r.denom())) % P
        }
    }
}

fn to_mono(d: &digrow::Disequence) -> Mono {
    (d.word().to_vec(), d.middle())
}

/// `|B^{<=n}|` for the quotient of the free dialgebra (or free associative
/// algebra when `assoc`) by the ideal generated inside lengths
/// `<= n + slack`.
pub fn quotient_dim(pres: &Presentation, n: usize, assoc: bool) -> usize {
    let pres = if assoc && pres.mode() == Mode::Dialgebra {
        pres.associated_associative()
    } else {
        pres.clone()
    };
    let max_len = n + pres.effective_slack();
    let k = pres.alphabet().len();
    let space = Space::new(k, max_len, assoc);

    let encode = |terms: Vec<(Mono, u64)>| -> Vector {
        let mut v = Vector::new();
        for (m, c) in terms {
            let m = if assoc { (m.0, 1) } else { m };
            let i = space.ids[&m];
            add_scaled(&mut v, c, &[(i, 1u64)].into_iter().collect());
        }
        v
    };

    let mut seeds: Vec<Vector> = Vec::new();
    for r in pres.relators() {
        if r.max_len() <= max_len {
            seeds.push(encode(
                r.terms().map(|(d, c)| (to_mono(d), coefficient_mod_p(c))).collect(),
            ));
        }
    }
    for s in pres.schemes() {
        for i in 1..max_len {
            for j in 1..=max_len - i {
                for &x in &space.by_len[i] {
                    for &y in &space.by_len[j] {
                        let (x, y) = (&space.monos[x], &space.monos[y]);
                        let (a, b) = if assoc {
                            (concat(x, y, 1), concat(y, x, 1))
                        } else {
                            match s {
                                Scheme::Lcomm => (left(x, y), left(y, x)),
                                Scheme::Rcomm => (right(x, y), right(y, x)),
                                Scheme::Cross => (left(x, y), right(y, x)),
                            }
                        };
                        seeds.push(encode(vec![(a, 1), (b, P - 1)]));
                    }
                }
            }
        }
    }

    let mut ech = Ech::default();
    let mut queue: VecDeque<Vector> = seeds.into();
    while let Some(v) = queue.pop_front() {
        let Some(row) = ech.insert(v) else { continue };
        let len = space.len_of(&row);
        for t in 1..=max_len - len {
            for &u in &space.by_len[t] {
                let u = &space.monos[u];
                let mut outs: Vec<Vector> = vec![Vector::new(); if assoc { 2 } else { 4 }];
                for (&i, &c) in &row {
                    let m = &space.monos[i];
                    let mut prods = space.products(u, m);
                    prods.extend(space.products(m, u));
                    for (slot, p) in prods.into_iter().enumerate() {
                        add_scaled(&mut outs[slot], c, &[(space.ids[&p], 1u64)].into_iter().collect());
                    }
                }
                queue.extend(outs.into_iter().filter(|o| !o.is_empty()));
            }
        }
    }
    let total: usize = (1..=n).map(|t| space.by_len[t].len()).sum();
    let pivots = ech
        .rows
        .keys()
        .filter(|&&i| space.monos[i].0.len() <= n)
        .count();
    let _ = space.max_len;
    total - pivots
}

/// Number of disequences of length `t` over `k` letters, counted by
/// listing them.
pub fn count_disequences(k: usize, t: usize) -> usize {
    let mut seen = std::collections::HashSet::new();
    for m in monomials_of_length(k, t, false) {
        seen.insert(m);
    }
    seen.len()
}

pub fn element(pres: &Presentation, text: &str) -> DiElement {
    digrow::parse_element(pres.alphabet(), pres.kind(), text).unwrap()
}
