//! Compiled real matrix-free application of a Pauli-sum Hamiltonian.
//!
//! Diagonal (Z-type) content is folded into a cached diagonal; every other
//! term applies as an index flip with a parity sign, no matrix materialized.
//! Output chunks are disjoint, so the parallel path is race-free and
//! bit-identical to the sequential one.

use crate::error::{Error, Result};
use crate::models::HamiltonianSpec;
use crate::par;

/// Hard cap for solver vectors (memory: 2^cap * 8 bytes each).
pub const SOLVER_CAP: usize = 24;

struct XTerm {
    x: u64,
    z: u64,
    coeff: f64,
}

pub struct CompiledHamiltonian {
    pub n: usize,
    dim: usize,
    diag: Vec<f64>,
    xterms: Vec<XTerm>,
}

impl CompiledHamiltonian {
    pub fn compile(h: &HamiltonianSpec) -> Result<Self> {
        if h.n > SOLVER_CAP {
            return Err(Error::CapExceeded {
                n: h.n,
                cap: SOLVER_CAP,
            });
        }
        let dim = 1usize << h.n;
        let mut zterms: Vec<(u64, f64)> = Vec::new();
        let mut xterms = Vec::new();
        for (i, (c, p)) in h.terms.iter().enumerate() {
            let signed = match p.phase_exp() {
                0 => *c,
                2 => -*c,
                _ => return Err(Error::NotReal(i)),
            };
            let x = p.x_mask().as_u64();
            let z = p.z_mask().as_u64();
            if x == 0 {
                zterms.push((z, signed));
            } else {
                xterms.push(XTerm { x, z, coeff: signed });
            }
        }
        let mut diag = vec![0.0; dim];
        for (z, c) in &zterms {
            par::for_each_chunk(&mut diag, |off, chunk| {
                for (i, d) in chunk.iter_mut().enumerate() {
                    let b = (off + i) as u64;
                    if (b & z).count_ones() % 2 == 1 {
                        *d -= c;
                    } else {
                        *d += c;
                    }
                }
            });
        }
        Ok(CompiledHamiltonian {
            n: h.n,
            dim,
            diag,
            xterms,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// 1-norm of the coefficients: a cheap spectral-radius bound.
    pub fn norm_bound(&self) -> f64 {
        self.diag.iter().fold(0.0_f64, |m, d| m.max(d.abs()))
            + self.xterms.iter().map(|t| t.coeff.abs()).sum::<f64>()
    }

    /// `out = H v` over the parallel chunk grid.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        let diag = &self.diag;
        let xterms = &self.xterms;
        par::for_each_chunk(out, |off, chunk| {
            Self::apply_chunk(diag, xterms, v, off, chunk);
        });
    }

    /// Sequential variant with identical arithmetic, kept for benchmarks.
    pub fn apply_seq(&self, v: &[f64], out: &mut [f64]) {
        let diag = &self.diag;
        let xterms = &self.xterms;
        par::for_each_chunk_seq(out, |off, chunk| {
            Self::apply_chunk(diag, xterms, v, off, chunk);
        });
    }

    #[inline]
    fn apply_chunk(diag: &[f64], xterms: &[XTerm], v: &[f64], off: usize, chunk: &mut [f64]) {
        for (i, o) in chunk.iter_mut().enumerate() {
            let j = off + i;
            *o = diag[j] * v[j];
        }
        for t in xterms {
            for (i, o) in chunk.iter_mut().enumerate() {
                let j = (off + i) as u64;
                let src = (j ^ t.x) as usize;
                let sign = if (src as u64 & t.z).count_ones() % 2 == 1 {
                    -t.coeff
                } else {
                    t.coeff
                };
                *o += sign * v[src];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::TermKind;
    use crate::pauli::PauliString;

    fn spec(n: usize, terms: Vec<(f64, PauliString)>) -> HamiltonianSpec {
        let kinds = vec![TermKind::HexX; terms.len()];
        HamiltonianSpec {
            n,
            terms,
            kinds,
            g_t: 0.0,
            g_c: 0.0,
        }
    }

    #[test]
    fn single_z_on_zero_state() {
        let h = spec(2, vec![(0.7, PauliString::z_string(2, &[0]))]);
        let c = CompiledHamiltonian::compile(&h).unwrap();
        let v = vec![1.0, 0.0, 0.0, 0.0];
        let mut out = vec![0.0; 4];
        c.apply(&v, &mut out);
        assert_eq!(out, vec![0.7, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn x_term_flips() {
        let h = spec(1, vec![(2.0, PauliString::x_string(1, &[0]))]);
        let c = CompiledHamiltonian::compile(&h).unwrap();
        let mut out = vec![0.0; 2];
        c.apply(&[1.0, 0.0], &mut out);
        assert_eq!(out, vec![0.0, 2.0]);
    }

    #[test]
    fn parallel_equals_sequential() {
        let h = spec(
            6,
            vec![
                (1.0, PauliString::x_string(6, &[0, 3])),
                (-0.5, PauliString::z_string(6, &[1, 2])),
                (0.25, "YIYIII".parse().unwrap()),
            ],
        );
        let c = CompiledHamiltonian::compile(&h).unwrap();
        let v: Vec<f64> = (0..64).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut a = vec![0.0; 64];
        let mut b = vec![0.0; 64];
        c.apply(&v, &mut a);
        c.apply_seq(&v, &mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn imaginary_term_rejected() {
        let h = spec(1, vec![(1.0, "Y".parse().unwrap())]);
        // Single Y has phase exponent 1 in the XZ convention.
        assert!(matches!(
            CompiledHamiltonian::compile(&h),
            Err(Error::NotReal(0))
        ));
    }
}
