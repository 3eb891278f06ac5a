//! Dense boolean matrices with word-packed rows.
//!
//! The product is the OR-AND semiring product: `(A·B)[i][j] = ∨_k A[i][k] ∧ B[k][j]`.
//! Row `i` of the product is the union of the rows of `B` selected by the set
//! bits of `A[i]`, so the cost tracks the number of ones rather than `p³`.

use crate::bitset::{words_for, NodeSet, Ones, WORD};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    p: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(p: usize) -> Self {
        let stride = words_for(p);
        Self {
            p,
            stride,
            bits: vec![0; stride * p],
        }
    }

    pub fn identity(p: usize) -> Self {
        let mut m = Self::zeros(p);
        for i in 0..p {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from nested rows of booleans. All rows must have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let p = rows.len();
        let mut m = Self::zeros(p);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(
                row.len(),
                p,
                "row {i} has length {} but expected {p}",
                row.len()
            );
            for (j, &b) in row.iter().enumerate() {
                if b {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.p && j < self.p);
        (self.bits[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.p && j < self.p);
        let w = &mut self.bits[i * self.stride + j / WORD];
        let bit = 1u64 << (j % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.stride..(i + 1) * self.stride]
    }

    /// Row `i` as a node set.
    pub fn row(&self, i: usize) -> NodeSet {
        NodeSet::from_words(self.p, self.row_words(i).to_vec())
    }

    /// Column `j` as a node set.
    pub fn column(&self, j: usize) -> NodeSet {
        let mut s = NodeSet::empty(self.p);
        for i in 0..self.p {
            if self.get(i, j) {
                s.insert(i);
            }
        }
        s
    }

    pub fn row_ones(&self, i: usize) -> Ones<'_> {
        Ones::new(self.row_words(i))
    }

    pub fn clear_row(&mut self, i: usize) {
        self.row_words_mut(i).fill(0);
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.p);
        for i in 0..self.p {
            for j in self.row_ones(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Elementwise OR.
    pub fn or(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.p, other.p);
        let mut m = self.clone();
        for (a, b) in m.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        m
    }

    /// OR-AND product `self · other`.
    pub fn product(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.p, other.p, "dimension mismatch in boolean product");
        let mut out = BitMatrix::zeros(self.p);
        let stride = self.stride;
        for i in 0..self.p {
            let dst = &mut out.bits[i * stride..(i + 1) * stride];
            for k in Ones::new(&self.bits[i * stride..(i + 1) * stride]) {
                let src = &other.bits[k * stride..(k + 1) * stride];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d |= s;
                }
            }
        }
        out
    }

    pub fn square(&self) -> BitMatrix {
        self.product(self)
    }

    /// Reflexive-transitive closure `(Id + self)^(2^⌈log2 p⌉)` by repeated squaring.
    ///
    /// Stops early once a squaring leaves the matrix unchanged.
    pub fn reflexive_closure(&self) -> BitMatrix {
        let mut m = self.or(&BitMatrix::identity(self.p));
        let rounds = ceil_log2(self.p);
        for _ in 0..rounds {
            let next = m.square();
            if next == m {
                break;
            }
            m = next;
        }
        m
    }
}

/// `⌈log2 p⌉`, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub(crate) fn ceil_log2(p: usize) -> u32 {
    if p <= 1 {
        0
    } else {
        usize::BITS - (p - 1).leading_zeros()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.p, self.p)?;
        for i in 0..self.p {
            for j in 0..self.p {
                write!(f, "{}", if self.get(i, j) { '1' } else { '.' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_product(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        let p = a.dim();
        let mut m = BitMatrix::zeros(p);
        for i in 0..p {
            for j in 0..p {
                m.set(i, j, (0..p).any(|k| a.get(i, k) && b.get(k, j)));
            }
        }
        m
    }

    fn arb_matrix(max_p: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_p).prop_flat_map(|p| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), p), p)
                .prop_map(|rows| BitMatrix::from_rows(&rows))
        })
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(64), 6);
        assert_eq!(ceil_log2(65), 7);
    }

    #[test]
    fn closure_of_chain() {
        let mut g = BitMatrix::zeros(3);
        g.set(0, 1, true);
        g.set(1, 2, true);
        let c = g.reflexive_closure();
        assert!(c.get(0, 2));
        assert!(!c.get(2, 0));
        assert!((0..3).all(|i| c.get(i, i)));
    }

    #[test]
    fn closure_of_empty_is_identity() {
        assert_eq!(
            BitMatrix::zeros(5).reflexive_closure(),
            BitMatrix::identity(5)
        );
    }

    #[test]
    fn wide_rows_cross_word_boundary() {
        let p = 70;
        let mut g = BitMatrix::zeros(p);
        for i in 0..p - 1 {
            g.set(i, i + 1, true);
        }
        let c = g.reflexive_closure();
        assert!(c.get(0, 69));
        assert!(c.get(63, 64));
        assert!(!c.get(69, 0));
        assert_eq!(c.count_ones(), p * (p + 1) / 2);
    }

    proptest! {
        #[test]
        fn product_matches_naive(a in arb_matrix(9), seed in any::<u64>()) {
            let p = a.dim();
            let mut b = BitMatrix::zeros(p);
            let mut x = seed | 1;
            for i in 0..p {
                for j in 0..p {
                    x ^= x << 13; x ^= x >> 7; x ^= x << 17;
                    b.set(i, j, x & 3 == 0);
                }
            }
            prop_assert_eq!(a.product(&b), naive_product(&a, &b));
        }

        #[test]
        fn product_is_associative(a in arb_matrix(7)) {
            let b = a.transpose();
            let c = a.or(&b);
            prop_assert_eq!(a.product(&b).product(&c), a.product(&b.product(&c)));
        }

        #[test]
        fn squaring_reflexive_is_monotone(a in arb_matrix(9)) {
            let r = a.or(&BitMatrix::identity(a.dim()));
            let sq = r.square();
            for i in 0..r.dim() {
                for j in 0..r.dim() {
                    prop_assert!(!r.get(i, j) || sq.get(i, j));
                }
            }
        }

        #[test]
        fn closure_is_fixed_point(a in arb_matrix(10)) {
            let c = a.reflexive_closure();
            prop_assert_eq!(c.square(), c);
        }
    }
}
