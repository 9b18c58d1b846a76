//! Disequences `[a1 ... an]@m`: the monomials of the free dialgebra.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Rank of a generator inside its [`Alphabet`].
pub type Letter = u16;

/// Ordered generator names. Position is the well-order rank, ascending.
///
/// Cheap to clone; two alphabets are equal when their names agree.
#[derive(Clone, Debug)]
pub struct Alphabet {
    inner: Arc<AlphabetInner>,
}

#[derive(Debug)]
struct AlphabetInner {
    names: Vec<String>,
    index: HashMap<String, Letter>,
    tag: u64,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.inner.tag == other.inner.tag && self.inner.names == other.inner.names
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > Letter::MAX as usize {
            return Err(Error::Domain("too many generators".into()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Domain("empty generator name".into()));
            }
            if !is_identifier(n) {
                return Err(Error::Domain(format!("invalid generator name {n:?}")));
            }
            if index.insert(n.clone(), i as Letter).is_some() {
                return Err(Error::Domain(format!("duplicate generator {n:?}")));
            }
        }
        let tag = fingerprint(&names);
        Ok(Alphabet {
            inner: Arc::new(AlphabetInner { names, index, tag }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.inner.names[letter as usize]
    }

    pub fn rank(&self, name: &str) -> Option<Letter> {
        self.inner.index.get(name).copied()
    }

    /// Identity used to detect operands from different alphabets.
    pub fn tag(&self) -> u64 {
        self.inner.tag
    }

    /// The generator `[g]@1`.
    pub fn generator(&self, letter: Letter) -> Disequence {
        assert!((letter as usize) < self.len());
        Disequence {
            tag: self.inner.tag,
            word: vec![letter],
            middle: 1,
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = Disequence> + '_ {
        (0..self.len() as Letter).map(|g| self.generator(g))
    }

    /// Builds a disequence from generator names.
    pub fn disequence(&self, names: &[&str], middle: usize) -> Result<Disequence> {
        let word = names
            .iter()
            .map(|n| {
                self.rank(n)
                    .ok_or_else(|| Error::Domain(format!("unknown generator {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Disequence::new(self, word, middle)
    }

    /// Parses the literal syntax `[a b c]@2`.
    pub fn parse_disequence(&self, text: &str) -> Result<Disequence> {
        let mut lexer = crate::parse::Lexer::new(text, 1);
        let d = lexer.disequence(self)?;
        lexer.expect_end()?;
        Ok(d)
    }

    /// Every disequence of length exactly `len`, ascending.
    pub fn disequences_of_length(&self, len: usize) -> Vec<Disequence> {
        let mut out = Vec::new();
        if len == 0 || self.is_empty() {
            return out;
        }
        let words = words_of_length(self.len(), len);
        for middle in 1..=len {
            for w in &words {
                out.push(Disequence {
                    tag: self.inner.tag,
                    word: w.clone(),
                    middle: middle as u32,
                });
            }
        }
        out
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// All words of the given length, lexicographically ascending.
pub(crate) fn words_of_length(k: usize, len: usize) -> Vec<Vec<Letter>> {
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(words.len() * k);
        for w in &words {
            for g in 0..k as Letter {
                let mut v = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        words = next;
    }
    words
}

fn fingerprint(names: &[String]) -> u64 {
    // FNV-1a over the names with a separator byte.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for n in names {
        for b in n.bytes().chain(std::iter::once(0xff)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// A nonempty word with a distinguished middle position (1-based).
///
/// `Ord` is the length-middle-lexicographic order: compare length, then
/// middle index, then the letters left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Disequence {
    tag: u64,
    word: Vec<Letter>,
    middle: u32,
}

impl Disequence {
    pub fn new(alphabet: &Alphabet, word: Vec<Letter>, middle: usize) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::Domain("empty disequence".into()));
        }
        if middle < 1 || middle > word.len() {
            return Err(Error::Domain(format!(
                "middle {middle} outside 1..={}",
                word.len()
            )));
        }
        if let Some(&bad) = word.iter().find(|&&l| l as usize >= alphabet.len()) {
            return Err(Error::Domain(format!("letter rank {bad} not in alphabet")));
        }
        Ok(Disequence {
            tag: alphabet.tag(),
            word,
            middle: middle as u32,
        })
    }

    pub(crate) fn from_parts(tag: u64, word: Vec<Letter>, middle: usize) -> Self {
        debug_assert!(middle >= 1 && middle <= word.len());
        Disequence {
            tag,
            word,
            middle: middle as u32,
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn middle(&self) -> usize {
        self.middle as usize
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn alphabet_tag(&self) -> u64 {
        self.tag
    }

    /// The letter at the middle position.
    pub fn middle_entry(&self) -> Letter {
        self.word[self.middle() - 1]
    }

    /// Same word, different middle.
    pub fn with_middle(&self, middle: usize) -> Result<Self> {
        if middle < 1 || middle > self.len() {
            return Err(Error::Domain(format!(
                "middle {middle} outside 1..={}",
                self.len()
            )));
        }
        Ok(Disequence {
            tag: self.tag,
            word: self.word.clone(),
            middle: middle as u32,
        })
    }

    /// Contiguous letters `p..=q` (1-based) as a disequence with the given
    /// middle.
    pub(crate) fn slice(&self, p: usize, q: usize, middle: usize) -> Self {
        Disequence::from_parts(self.tag, self.word[p - 1..q].to_vec(), middle)
    }

    fn same_alphabet(&self, other: &Self) -> Result<()> {
        if self.tag == other.tag {
            Ok(())
        } else {
            Err(Error::Domain("disequences over different alphabets".into()))
        }
    }

    pub(crate) fn concat(&self, other: &Self, middle: usize) -> Self {
        let mut word = Vec::with_capacity(self.len() + other.len());
        word.extend_from_slice(&self.word);
        word.extend_from_slice(&other.word);
        Disequence::from_parts(self.tag, word, middle)
    }

    /// `self ⊢ other`: the middle moves to the middle of `other`.
    pub fn lprod(&self, other: &Self) -> Result<Self> {
        self.same_alphabet(other)?;
        Ok(self.lprod_unchecked(other))
    }

    /// `self ⊣ other`: the middle stays where it was in `self`.
    pub fn rprod(&self, other: &Self) -> Result<Self> {
        self.same_alphabet(other)?;
        Ok(self.rprod_unchecked(other))
    }

    pub(crate) fn lprod_unchecked(&self, other: &Self) -> Self {
        self.concat(other, self.len() + other.middle())
    }

    pub(crate) fn rprod_unchecked(&self, other: &Self) -> Self {
        self.concat(other, self.middle())
    }

    pub fn compare_lml(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    /// Every `[a_p ... a_q]@(m-p+1)` with `p <= m <= q`.
    pub fn middle_submonomials(&self) -> BTreeSet<Disequence> {
        let m = self.middle();
        let t = self.len();
        let mut out = BTreeSet::new();
        for p in 1..=m {
            for q in m..=t {
                out.insert(self.slice(p, q, m - p + 1));
            }
        }
        out
    }

    /// Renders the literal form using generator names.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> DisplayDisequence<'a> {
        DisplayDisequence {
            d: self,
            alphabet,
        }
    }
}

impl PartialOrd for Disequence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Disequence {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then(self.middle.cmp(&other.middle))
            .then_with(|| self.word.cmp(&other.word))
            .then(self.tag.cmp(&other.tag))
    }
}

pub struct DisplayDisequence<'a> {
    d: &'a Disequence,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayDisequence<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &l) in self.d.word.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.alphabet.name(l))?;
        }
        write!(f, "]@{}", self.d.middle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> Alphabet {
        Alphabet::new(["a", "b", "c", "d"]).unwrap()
    }

    fn d(x: &Alphabet, s: &str) -> Disequence {
        x.parse_disequence(s).unwrap()
    }

    #[test]
    fn products_follow_middle_laws() {
        let x = abcd();
        assert_eq!(
            d(&x, "[a b]@1").lprod(&d(&x, "[c d]@2")).unwrap(),
            d(&x, "[a b c d]@4")
        );
        assert_eq!(
            d(&x, "[a]@1").lprod(&d(&x, "[b]@1")).unwrap(),
            d(&x, "[a b]@2")
        );
        assert_eq!(
            d(&x, "[a a]@2").lprod(&d(&x, "[a]@1")).unwrap(),
            d(&x, "[a a a]@3")
        );
        assert_eq!(
            d(&x, "[a b]@1").rprod(&d(&x, "[c d]@2")).unwrap(),
            d(&x, "[a b c d]@1")
        );
        assert_eq!(
            d(&x, "[a]@1").rprod(&d(&x, "[b]@1")).unwrap(),
            d(&x, "[a b]@1")
        );
        assert_eq!(
            d(&x, "[a a]@2").rprod(&d(&x, "[a]@1")).unwrap(),
            d(&x, "[a a a]@2")
        );
    }

    #[test]
    fn mixed_alphabets_rejected() {
        let x = abcd();
        let y = Alphabet::new(["a", "b"]).unwrap();
        let u = d(&x, "[a]@1");
        let v = d(&y, "[a]@1");
        assert!(matches!(u.lprod(&v), Err(Error::Domain(_))));
        assert!(matches!(u.rprod(&v), Err(Error::Domain(_))));
    }

    #[test]
    fn lml_examples() {
        let x = Alphabet::new(["a1", "a2", "a3", "a4"]).unwrap();
        assert_eq!(
            d(&x, "[a4 a3 a2]@1").compare_lml(&d(&x, "[a1 a3 a2]@2")),
            Ordering::Less
        );
        assert_eq!(
            d(&x, "[a1 a2 a3 a4]@1").compare_lml(&d(&x, "[a1 a2 a4]@2")),
            Ordering::Greater
        );
        assert_eq!(d(&x, "[a1]@1").compare_lml(&d(&x, "[a1]@1")), Ordering::Equal);
        // Not compatible with products in general.
        let big = d(&x, "[a1 a2]@2");
        let small = d(&x, "[a2 a1]@1");
        let a3 = d(&x, "[a3]@1");
        assert!(big > small);
        assert!(big.lprod(&a3).unwrap() < small.lprod(&a3).unwrap());
    }

    #[test]
    fn middle_submonomial_examples() {
        let x = abcd();
        let got: Vec<_> = d(&x, "[a b c]@2")
            .middle_submonomials()
            .into_iter()
            .collect();
        let want: BTreeSet<_> = ["[b]@1", "[a b]@2", "[b c]@1", "[a b c]@2"]
            .iter()
            .map(|s| d(&x, s))
            .collect();
        assert_eq!(got, want.into_iter().collect::<Vec<_>>());
        assert_eq!(d(&x, "[a]@1").middle_submonomials().len(), 1);
        let m1: BTreeSet<_> = ["[a]@1", "[a b]@1", "[a b c]@1"]
            .iter()
            .map(|s| d(&x, s))
            .collect();
        assert_eq!(d(&x, "[a b c]@1").middle_submonomials(), m1);
    }

    #[test]
    fn literal_round_trip_and_validation() {
        let x = abcd();
        for s in ["[a]@1", "[a b c]@2", "[d d d d]@4"] {
            assert_eq!(d(&x, s).display(&x).to_string(), s);
        }
        assert!(x.parse_disequence("[a b]@3").is_err());
        assert!(x.parse_disequence("[a z]@1").is_err());
        assert!(x.parse_disequence("[]@1").is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new([""]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let x = Alphabet::new(["a", "b"]).unwrap();
        let all = x.disequences_of_length(3);
        assert_eq!(all.len(), 3 * 8);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
