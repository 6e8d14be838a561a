//! Dense matrices over GF(2) with bit-packed rows.

const WORD: usize = 64;

/// Square matrix over GF(2); each row is a run of `u64` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        let stride = n.div_ceil(WORD).max(1);
        BitMatrix {
            n,
            stride,
            data: vec![0; stride * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        ((self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, bit: u8) {
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if bit & 1 == 1 {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * s);
        head[lo * s..lo * s + s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]`, starting at word `from_word`.
    fn xor_row(&mut self, dst: usize, src: usize, from_word: usize) {
        let s = self.stride;
        let (d, r) = if dst > src {
            let (head, tail) = self.data.split_at_mut(dst * s);
            (&mut tail[..s], &head[src * s..src * s + s])
        } else {
            let (head, tail) = self.data.split_at_mut(src * s);
            (&mut head[dst * s..dst * s + s], &tail[..s])
        };
        for (x, y) in d[from_word..].iter_mut().zip(&r[from_word..]) {
            *x ^= *y;
        }
    }

    /// Determinant over GF(2) by Gaussian elimination.
    ///
    /// Pivots are taken column by column, scanning rows top-down. The
    /// matrix is consumed since elimination happens in place.
    pub fn determinant(mut self) -> u8 {
        let n = self.n;
        for col in 0..n {
            let word = col / WORD;
            let mask = 1u64 << (col % WORD);
            let Some(pivot) = (col..n).find(|&r| self.data[r * self.stride + word] & mask != 0)
            else {
                return 0;
            };
            self.swap_rows(col, pivot);
            for r in col + 1..n {
                if self.data[r * self.stride + word] & mask != 0 {
                    self.xor_row(r, col, word);
                }
            }
        }
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[u8]]) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows.len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    #[test]
    fn small_determinants() {
        assert_eq!(from_rows(&[&[1, 0], &[0, 1]]).determinant(), 1);
        assert_eq!(from_rows(&[&[1, 1], &[1, 1]]).determinant(), 0);
        assert_eq!(from_rows(&[&[0, 1], &[1, 0]]).determinant(), 1);
        assert_eq!(
            from_rows(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).determinant(),
            1
        );
        assert_eq!(BitMatrix::zeros(0).determinant(), 1);
    }

    #[test]
    fn identity_spanning_words() {
        let n = 150;
        let mut m = BitMatrix::zeros(n);
        for i in 0..n {
            m.set(i, n - 1 - i, 1);
        }
        assert_eq!(m.clone().determinant(), 1);
        m.set(7, n - 1 - 7, 0);
        assert_eq!(m.determinant(), 0);
    }
}
