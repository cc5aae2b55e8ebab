//! Fixed-length bit vectors backed by `u64` words.
//!
//! These back adjacency rows, GF(2) matrix rows, and Pauli masks, so the
//! word-parallel operations here are the hot path of almost everything else.

/// A bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Builds a vector with the listed bit positions set.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1 << (i & 63);
    }

    pub fn xor_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn and_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    pub fn or_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    /// Popcount of self AND other, without allocating.
    pub fn clone_and_count(&self, other: &BitVec) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of |self AND other|, the GF(2) inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b))
            .count_ones()
            & 1
            == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> OnesIter<'_> {
        OnesIter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn ones(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// True iff every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Appends one cleared bit at the end.
    pub fn push_bit(&mut self) {
        self.len += 1;
        if words_for(self.len) > self.words.len() {
            self.words.push(0);
        }
    }

    /// Removes bit `i`, shifting higher bits down by one.
    pub fn remove_bit(&mut self, i: usize) {
        debug_assert!(i < self.len);
        let mut out = BitVec::zeros(self.len - 1);
        for j in 0..self.len {
            if j == i {
                continue;
            }
            let dst = if j < i { j } else { j - 1 };
            if self.get(j) {
                out.set(dst, true);
            }
        }
        *self = out;
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Low 64 bits, valid when len <= 64.
    pub fn as_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

pub struct OnesIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for OnesIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * 64 + bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_toggle() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert!(v.get(0) && v.get(64) && v.get(129));
        assert!(!v.get(1));
        v.toggle(64);
        assert!(!v.get(64));
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.ones(), vec![0, 129]);
    }

    #[test]
    fn dot_and_subset() {
        let a = BitVec::from_indices(8, &[0, 2, 5]);
        let b = BitVec::from_indices(8, &[2, 5, 7]);
        assert!(!a.dot(&b)); // overlap {2,5}, even
        let c = BitVec::from_indices(8, &[2]);
        assert!(a.dot(&c));
        assert!(c.is_subset_of(&a));
        assert!(!a.is_subset_of(&c));
    }

    #[test]
    fn remove_bit_shifts() {
        let mut v = BitVec::from_indices(6, &[0, 2, 5]);
        v.remove_bit(2);
        assert_eq!(v.len(), 5);
        assert_eq!(v.ones(), vec![0, 4]);
        v.remove_bit(0);
        assert_eq!(v.ones(), vec![3]);
    }
}
