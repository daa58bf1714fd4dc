//! Fixed-width bit vectors over machine words.
//!
//! Qubit `q` lives at word `q / 64`, bit `q % 64` (little-endian word order).
//! This layout is frozen: the instance file format and all mask-based state
//! indexing rely on it.

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut b = Bits::zeros(len);
        for &i in idx {
            b.set(i, true);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / 64];
        if v {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of `|self AND other|`; the workhorse of the symplectic form.
    pub fn and_parity(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn and_count(&self, other: &Bits) -> usize {
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
        self.words.iter().all(|w| *w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Low word as a plain mask; valid only when `len <= 64`.
    pub fn as_u64(&self) -> u64 {
        debug_assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_xor() {
        let mut a = Bits::zeros(130);
        a.set(0, true);
        a.set(129, true);
        let b = Bits::from_indices(130, &[129, 7]);
        a.xor_assign(&b);
        assert!(a.get(0) && a.get(7) && !a.get(129));
        assert_eq!(a.count_ones(), 2);
        assert_eq!(a.first_one(), Some(0));
    }

    #[test]
    fn parity() {
        let a = Bits::from_indices(70, &[1, 3, 69]);
        let b = Bits::from_indices(70, &[3, 69]);
        assert!(!a.and_parity(&b));
        let c = Bits::from_indices(70, &[3]);
        assert!(a.and_parity(&c));
    }
}
