//! Sparse Gaussian elimination over integer column ids.
//!
//! The pivot of a row is its largest column. Rows are kept monic; after
//! [`Echelon::finish`] every row is fully reduced (no pivot column of
//! another row appears in its tail).

use std::collections::{BTreeMap, HashMap};

use crate::scalar::Scalar;

/// Sparse vector, ascending by column.
pub(crate) type SparseVec = Vec<(u32, Scalar)>;

#[derive(Debug, Default)]
pub(crate) struct Echelon {
    rows: Vec<SparseVec>,
    pivot_of: HashMap<u32, usize>,
}

pub(crate) fn to_map(v: &[(u32, Scalar)]) -> BTreeMap<u32, Scalar> {
    v.iter().cloned().collect()
}

/// `acc += c * v`, dropping cancelled entries.
pub(crate) fn axpy(acc: &mut BTreeMap<u32, Scalar>, c: &Scalar, v: &[(u32, Scalar)]) {
    for (col, x) in v {
        let add = c * x;
        match acc.get_mut(col) {
            Some(y) => {
                let s = &*y + &add;
                if s.is_zero() {
                    acc.remove(col);
                } else {
                    *y = s;
                }
            }
            None => {
                if !add.is_zero() {
                    acc.insert(*col, add);
                }
            }
        }
    }
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn pivot_row(&self, col: u32) -> Option<&SparseVec> {
        self.pivot_of.get(&col).map(|&i| &self.rows[i])
    }

    pub(crate) fn is_pivot(&self, col: u32) -> bool {
        self.pivot_of.contains_key(&col)
    }

    pub(crate) fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter()
    }

    /// Reduces the leading part of `row` and stores it. Returns the new
    /// pivot, or `None` when the row lies in the current span.
    pub(crate) fn insert(&mut self, row: SparseVec) -> Option<u32> {
        let mut work = to_map(&row);
        self.insert_map(&mut work)
    }

    pub(crate) fn insert_map(&mut self, work: &mut BTreeMap<u32, Scalar>) -> Option<u32> {
        loop {
            let (&lead, c) = work.iter().next_back()?;
            match self.pivot_of.get(&lead) {
                Some(&i) => {
                    let c = -c;
                    axpy(work, &c, &self.rows[i]);
                }
                None => {
                    let inv = c.inv();
                    let row: SparseVec = work.iter().map(|(k, v)| (*k, v * &inv)).collect();
                    self.pivot_of.insert(lead, self.rows.len());
                    self.rows.push(row);
                    return Some(lead);
                }
            }
        }
    }

    /// Eliminates every pivot column strictly below `bound` (and `bound`
    /// itself when it is `u32::MAX`).
    fn reduce_map(&self, work: &mut BTreeMap<u32, Scalar>, bound: u32) {
        let mut cursor = if bound == u32::MAX { None } else { Some(bound) };
        loop {
            let next = match cursor {
                None => work.iter().next_back(),
                Some(b) => work.range(..b).next_back(),
            };
            let Some((&col, c)) = next else { return };
            if let Some(&i) = self.pivot_of.get(&col) {
                let c = -c;
                axpy(work, &c, &self.rows[i]);
            }
            cursor = Some(col);
        }
    }

    /// Brings every row to fully reduced form.
    pub(crate) fn finish(&mut self) {
        let mut order: Vec<(u32, usize)> = self.pivot_of.iter().map(|(&p, &i)| (p, i)).collect();
        order.sort_unstable();
        for (p, i) in order {
            if self.rows[i].len() == 1 {
                continue;
            }
            let mut work = to_map(&self.rows[i]);
            self.reduce_map(&mut work, p);
            self.rows[i] = work.into_iter().collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarKind;

    fn s(v: i64) -> Scalar {
        Scalar::from_i64(v, ScalarKind::Rational)
    }

    #[test]
    fn eliminates_and_back_substitutes() {
        let mut e = Echelon::new();
        assert_eq!(e.insert(vec![(0, s(1)), (2, s(2))]), Some(2));
        assert_eq!(e.insert(vec![(0, s(1)), (1, s(1))]), Some(1));
        assert_eq!(e.insert(vec![(1, s(1)), (2, s(1))]), Some(0));
        assert_eq!(e.insert(vec![(0, s(3))]), None);
        e.finish();
        for r in e.rows() {
            assert_eq!(r.len(), 1);
            assert!(r[0].1.is_one());
        }
    }
}
