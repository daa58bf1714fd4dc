//! Dense parity-sector spectra of transverse-field Ising rings.
//!
//! `H = -g_c sum_i w_i X_i X_{i+1} - g_t sum_i Z_i` on a ring of N sites
//! with bond signs `w_i = +1` except the boundary bond, which flips when the
//! ring is twisted. A ring of two sites carries both of its parallel bonds.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub const CHAIN_DENSE_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(b: usize) -> Parity {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub sites: usize,
    /// Coupling on XX bonds.
    pub g_c: f64,
    /// Transverse field on Z.
    pub g_t: f64,
    /// Boundary bond sign flipped.
    pub twisted: bool,
    /// Provenance: (row index, dark shade) when derived from a lattice.
    pub tag: Option<(usize, bool)>,
}

impl ChainSpec {
    pub fn new(sites: usize, g_c: f64, g_t: f64) -> Self {
        ChainSpec {
            sites,
            g_c,
            g_t,
            twisted: false,
            tag: None,
        }
    }

    pub fn twisted(mut self, t: bool) -> Self {
        self.twisted = t;
        self
    }
}

/// Full spectrum (ascending) of one parity sector, or of both merged.
pub fn chain_dense_spectrum(c: &ChainSpec, parity: Option<Parity>) -> Result<Vec<f64>> {
    match parity {
        Some(p) => sector_spectrum(c, p),
        None => {
            let mut all = sector_spectrum(c, Parity::Even)?;
            all.extend(sector_spectrum(c, Parity::Odd)?);
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(all)
        }
    }
}

fn sector_spectrum(c: &ChainSpec, parity: Parity) -> Result<Vec<f64>> {
    let n = c.sites;
    if n < 2 {
        return Err(Error::Invalid("chain needs at least 2 sites".into()));
    }
    if n > CHAIN_DENSE_CAP {
        return Err(Error::ChainCap(n, CHAIN_DENSE_CAP));
    }
    let want = parity.bit() as u32;
    let states: Vec<usize> = (0..1usize << n)
        .filter(|b| (b.count_ones() % 2) == want)
        .collect();
    let index: std::collections::HashMap<usize, usize> =
        states.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let dim = states.len();
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for (i, &b) in states.iter().enumerate() {
        // Transverse field: diagonal in the occupation basis.
        let down = b.count_ones() as f64;
        m[(i, i)] += -c.g_t * (n as f64 - 2.0 * down);
        // Bonds flip adjacent pairs; parity is preserved.
        for site in 0..n {
            let other = (site + 1) % n;
            let flipped = b ^ (1 << site) ^ (1 << other);
            let j = index[&flipped];
            let sign = if site == n - 1 && c.twisted { 1.0 } else { -1.0 };
            m[(j, i)] += sign * c.g_c;
        }
    }
    let eig = m.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_spins() {
        // N=2, g_c=0, g_t=1: {-2, 0, 0, 2}; even sector {-2, 2}.
        let c = ChainSpec::new(2, 0.0, 1.0);
        let all = chain_dense_spectrum(&c, None).unwrap();
        for (got, want) in all.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let even = chain_dense_spectrum(&c, Some(Parity::Even)).unwrap();
        assert!((even[0] + 2.0).abs() < 1e-12 && (even[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ferromagnetic_ring() {
        // N=3, g_c=1, g_t=0: ground -3, total multiplicity 2 (one per sector).
        let c = ChainSpec::new(3, 1.0, 0.0);
        let all = chain_dense_spectrum(&c, None).unwrap();
        assert!((all[0] + 3.0).abs() < 1e-12);
        assert!((all[1] + 3.0).abs() < 1e-12);
        assert!(all[2] > -3.0 + 1e-9);
        // Sector dimensions sum to 2^N.
        let e = chain_dense_spectrum(&c, Some(Parity::Even)).unwrap();
        let o = chain_dense_spectrum(&c, Some(Parity::Odd)).unwrap();
        assert_eq!(e.len() + o.len(), 8);
    }

    #[test]
    fn twisted_ring_is_frustrated() {
        // One flipped bond at g_t=0: best energy -(N-2), three ways per sector.
        let c = ChainSpec::new(3, 1.0, 0.0).twisted(true);
        let even = chain_dense_spectrum(&c, Some(Parity::Even)).unwrap();
        assert!((even[0] + 1.0).abs() < 1e-12, "{even:?}");
        assert!((even[2] + 1.0).abs() < 1e-12);
        assert!((even[3] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cap_enforced() {
        let c = ChainSpec::new(15, 1.0, 1.0);
        assert!(matches!(
            chain_dense_spectrum(&c, None),
            Err(Error::ChainCap(15, CHAIN_DENSE_CAP))
        ));
    }
}
