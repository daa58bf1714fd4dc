//! n-qubit Pauli operators as X/Z bit masks with an exact power-of-i phase.
//!
//! Internal convention: `P = i^phase · Π_q X^{x_q} Z^{z_q}` with the X factor
//! left of the Z factor on every qubit. The text form uses the Hermitian
//! letter `Y = iXZ`, so a stored `XZ` with phase 0 prints as `-iY`.

use crate::bits::Bits;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    n: usize,
    xs: Bits,
    zs: Bits,
    /// Exponent of i in the X-before-Z convention, mod 4.
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            xs: Bits::zeros(n),
            zs: Bits::zeros(n),
            phase: 0,
        }
    }

    pub fn from_parts(n: usize, xs: Bits, zs: Bits, phase: u8) -> Self {
        debug_assert_eq!(xs.len(), n);
        debug_assert_eq!(zs.len(), n);
        PauliString {
            n,
            xs,
            zs,
            phase: phase % 4,
        }
    }

    /// X on each listed qubit, phase +1.
    pub fn x_string(n: usize, qubits: &[usize]) -> Self {
        PauliString {
            n,
            xs: Bits::from_indices(n, qubits),
            zs: Bits::zeros(n),
            phase: 0,
        }
    }

    /// Z on each listed qubit, phase +1.
    pub fn z_string(n: usize, qubits: &[usize]) -> Self {
        PauliString {
            n,
            xs: Bits::zeros(n),
            zs: Bits::from_indices(n, qubits),
            phase: 0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> &Bits {
        &self.xs
    }

    pub fn z_mask(&self) -> &Bits {
        &self.zs
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        (0..self.n)
            .filter(|&q| self.xs.get(q) || self.zs.get(q))
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.xs.is_zero() && self.zs.is_zero() && self.phase == 0
    }

    pub fn has_identity_content(&self) -> bool {
        self.xs.is_zero() && self.zs.is_zero()
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.phase = (p.phase + 2) % 4;
        p
    }

    /// `P² = ±I`; Hermitian iff the square is +I.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize + self.xs.and_count(&self.zs)) % 2 == 0
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let mut xs = self.xs.clone();
        xs.xor_assign(&other.xs);
        let mut zs = self.zs.clone();
        zs.xor_assign(&other.zs);
        // Z^{z1} moved across X^{x2} contributes (-1)^{|z1 & x2|}.
        let swap = self.zs.and_parity(&other.xs) as u8;
        Ok(PauliString {
            n: self.n,
            xs,
            zs,
            phase: (self.phase + other.phase + 2 * swap) % 4,
        })
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        Ok(self.xs.and_parity(&other.zs) == self.zs.and_parity(&other.xs))
    }

    /// Letter at qubit `q` in {I, X, Y, Z}.
    pub fn letter(&self, q: usize) -> char {
        match (self.xs.get(q), self.zs.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    /// Phase exponent in the letter convention (`Y` Hermitian):
    /// `P = i^display · Π letters`.
    pub fn display_phase_exp(&self) -> u8 {
        let y = self.xs.and_count(&self.zs) as u8;
        (self.phase + 4 - (y % 4)) % 4
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.display_phase_exp() {
            0 => write!(f, "+")?,
            1 => write!(f, "+i")?,
            2 => write!(f, "-")?,
            3 => write!(f, "-i")?,
            _ => unreachable!(),
        }
        for q in 0..self.n {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `[+|-][i]?` followed by letters from {I,X,Y,Z}; qubit 0 is the
    /// leftmost letter. A missing sign means `+`.
    fn from_str(s: &str) -> Result<PauliString> {
        let mut chars = s.chars().peekable();
        let mut display = 0u8;
        match chars.peek() {
            Some('+') => {
                chars.next();
            }
            Some('-') => {
                display = 2;
                chars.next();
            }
            _ => {}
        }
        if chars.peek() == Some(&'i') {
            display = (display + 1) % 4;
            chars.next();
        }
        let letters: Vec<char> = chars.collect();
        if letters.is_empty() {
            return Err(Error::Parse("empty Pauli literal".into()));
        }
        let n = letters.len();
        let mut xs = Bits::zeros(n);
        let mut zs = Bits::zeros(n);
        let mut y = 0u8;
        for (q, c) in letters.iter().enumerate() {
            match c {
                'I' => {}
                'X' => xs.set(q, true),
                'Z' => zs.set(q, true),
                'Y' => {
                    xs.set(q, true);
                    zs.set(q, true);
                    y = (y + 1) % 4;
                }
                other => {
                    return Err(Error::Parse(format!("bad Pauli letter {other:?}")));
                }
            }
        }
        Ok(PauliString {
            n,
            xs,
            zs,
            phase: (display + y) % 4,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_self_inverse() {
        let x = PauliString::x_string(3, &[1]);
        let p = x.multiply(&x).unwrap();
        assert!(p.is_identity());
    }

    #[test]
    fn xz_is_minus_i_y() {
        let x: PauliString = "XI".parse().unwrap();
        let z: PauliString = "ZI".parse().unwrap();
        let p = x.multiply(&z).unwrap();
        assert_eq!(p.to_string(), "-iYI");
        assert_eq!(p.display_phase_exp(), 3);
        assert_eq!(p.phase_exp(), 0); // stored X-before-Z convention
        let q = z.multiply(&x).unwrap();
        assert_eq!(q.to_string(), "+iYI");
    }

    #[test]
    fn plaquette_products_are_plain_z_strings() {
        let b1 = PauliString::z_string(6, &[0, 1, 2, 3]);
        let b2 = PauliString::z_string(6, &[2, 3, 4, 5]);
        let p = b1.multiply(&b2).unwrap();
        assert_eq!(p, PauliString::z_string(6, &[0, 1, 4, 5]));
        assert_eq!(p.phase_exp(), 0);
        assert!(p.is_hermitian());
    }

    #[test]
    fn commutation_examples() {
        let x: PauliString = "X".parse().unwrap();
        let z: PauliString = "Z".parse().unwrap();
        assert!(!x.commutes(&z).unwrap());
        // Same hexagon: six shared qubits, even overlap.
        let hx = PauliString::x_string(6, &[0, 1, 2, 3, 4, 5]);
        let hz = PauliString::z_string(6, &[0, 1, 2, 3, 4, 5]);
        assert!(hx.commutes(&hz).unwrap());
        // One shared qubit between an X-hexagon and a Z-plaquette.
        let b = PauliString::z_string(8, &[5, 6, 7]);
        let h = PauliString::x_string(8, &[0, 1, 5]);
        assert!(!h.commutes(&b).unwrap());
    }

    #[test]
    fn round_trip() {
        for s in ["+XYZI", "-ZZIZ", "+iYIX", "-iIII", "+I"] {
            let p: PauliString = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        // Default sign round-trips to explicit '+'.
        let p: PauliString = "XY".parse().unwrap();
        assert_eq!(p.to_string(), "+XY");
    }

    #[test]
    fn size_mismatch() {
        let a = PauliString::identity(2);
        let b = PauliString::identity(3);
        assert!(matches!(a.multiply(&b), Err(Error::SizeMismatch(2, 3))));
        assert!(a.commutes(&b).is_err());
    }
}
