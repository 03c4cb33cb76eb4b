//! Row-major bit planes shared by the packed sign and binary matrices.
//!
//! Row `i` occupies `stride` consecutive `u64` words; bit `j` of the row lives
//! in word `j / 64` at position `j % 64`. Padding bits past `cols` are always
//! zero, so whole-word popcounts never see garbage.

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitPlane {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitPlane {
    pub(crate) fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BitPlane { rows, cols, stride, words: vec![0; rows * stride] }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.words[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.words[i * self.stride + j / 64];
        let mask = 1u64 << (j % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub(crate) fn transpose(&self) -> BitPlane {
        let mut out = BitPlane::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (wi, &word) in self.row(i).iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let j = wi * 64 + w.trailing_zeros() as usize;
                    out.set(j, i, true);
                    w &= w - 1;
                }
            }
        }
        out
    }

    pub(crate) fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

#[inline]
pub(crate) fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}
