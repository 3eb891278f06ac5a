//! Word-packed node sets.

use std::fmt;

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(p: usize) -> usize {
    p.div_ceil(WORD)
}

/// A set of node ids drawn from `0..p`, stored as packed 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    p: usize,
    words: Vec<u64>,
}

impl NodeSet {
    pub fn empty(p: usize) -> Self {
        Self {
            p,
            words: vec![0; words_for(p)],
        }
    }

    pub fn full(p: usize) -> Self {
        let mut s = Self::empty(p);
        for v in 0..p {
            s.insert(v);
        }
        s
    }

    pub fn singleton(p: usize, v: usize) -> Self {
        let mut s = Self::empty(p);
        s.insert(v);
        s
    }

    /// Builds a set from node ids. Panics if an id is out of range.
    pub fn from_nodes<I: IntoIterator<Item = usize>>(p: usize, nodes: I) -> Self {
        let mut s = Self::empty(p);
        for v in nodes {
            s.insert(v);
        }
        s
    }

    pub(crate) fn from_words(p: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(p));
        Self { p, words }
    }

    /// Size of the ground set `0..p`.
    #[inline]
    pub fn universe(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.p && (self.words[v / WORD] >> (v % WORD)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.p, "node {v} out of range 0..{}", self.p);
        let w = &mut self.words[v / WORD];
        let bit = 1u64 << (v % WORD);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.p {
            return false;
        }
        let w = &mut self.words[v / WORD];
        let bit = 1u64 << (v % WORD);
        let had = *w & bit != 0;
        *w &= !bit;
        had
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.p, other.p);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.p, other.p);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.p, other.p);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    /// Complement within `0..p`.
    pub fn complement(&self) -> NodeSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    pub fn intersects(&self, other: &NodeSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones::new(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn trim(&mut self) {
        let rem = self.p % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the set bits of a word slice.
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        Self {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}
