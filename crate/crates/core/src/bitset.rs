//! Packed bit rows used for dense adjacency and the elimination game.

const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Iterator over the set bit positions of a word slice, ascending.
#[derive(Clone)]
pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl<'a> Ones<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        let current = words.first().copied().unwrap_or(0);
        Ones {
            words,
            index: 0,
            current,
        }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

#[inline]
pub(crate) fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(words: &mut [u64], i: usize) {
    words[i / WORD] |= 1 << (i % WORD);
}

#[inline]
pub(crate) fn clear_bit(words: &mut [u64], i: usize) {
    words[i / WORD] &= !(1 << (i % WORD));
}

pub(crate) fn count_ones(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// `|a & b|`
pub(crate) fn count_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// `|a & b & !c|`
pub(crate) fn count_and_not(a: &[u64], b: &[u64], c: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((x, y), z)| (x & y & !z).count_ones() as usize)
        .sum()
}

/// Sets bits `lo..hi`.
pub(crate) fn set_range(words: &mut [u64], lo: usize, hi: usize) {
    for i in lo..hi.min(lo.next_multiple_of(64)) {
        set_bit(words, i);
    }
    let mut i = lo.next_multiple_of(64);
    while i + 64 <= hi {
        words[i / 64] = u64::MAX;
        i += 64;
    }
    for j in i.max(lo)..hi {
        set_bit(words, j);
    }
}

/// Square bit matrix, one packed row per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let stride = words_for(n);
        BitMatrix {
            n,
            stride,
            data: vec![0; stride * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        get_bit(self.row(i), j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        set_bit(self.row_mut(i), j)
    }

    #[inline]
    pub fn clear(&mut self, i: usize, j: usize) {
        clear_bit(self.row_mut(i), j)
    }

    /// Sets both `(i, j)` and `(j, i)`; returns whether the entry was new.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize) -> bool {
        let fresh = !self.get(i, j);
        self.set(i, j);
        self.set(j, i);
        fresh
    }

    pub fn ones(&self, i: usize) -> Ones<'_> {
        Ones::new(self.row(i))
    }

    pub fn row_count(&self, i: usize) -> usize {
        count_ones(self.row(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        for (lo, hi) in [(0, 0), (3, 9), (0, 64), (5, 200), (64, 128), (63, 65), (70, 70)] {
            let mut w = vec![0u64; 4];
            set_range(&mut w, lo, hi);
            assert_eq!(
                Ones::new(&w).collect::<Vec<_>>(),
                (lo..hi).collect::<Vec<_>>(),
                "{lo}..{hi}"
            );
            assert_eq!(count_ones(&w), hi - lo);
        }
    }

    #[test]
    fn ones_iterates_ascending_across_words() {
        let mut m = BitMatrix::new(130);
        for j in [0, 5, 63, 64, 127, 129] {
            m.set(3, j);
        }
        assert_eq!(m.ones(3).collect::<Vec<_>>(), vec![0, 5, 63, 64, 127, 129]);
        assert_eq!(m.row_count(3), 6);
        m.clear(3, 64);
        assert!(!m.get(3, 64));
        assert_eq!(m.ones(0).count(), 0);
    }

    #[test]
    fn empty_matrix_has_no_rows() {
        let m = BitMatrix::new(0);
        assert_eq!(m.dim(), 0);
        assert_eq!(Ones::new(&[]).count(), 0);
    }
}
