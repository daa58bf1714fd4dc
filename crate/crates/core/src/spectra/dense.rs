//! Dense diagonalization for small systems. Built straight from the term
//! list, independent of the compiled matrix-free path, so the two can check
//! each other.

use crate::error::{Error, Result};
use crate::models::HamiltonianSpec;
use nalgebra::DMatrix;

/// Practical cap: 2^13 squared doubles is already half a gigabyte.
pub const DENSE_CAP: usize = 13;

pub fn dense_matrix(h: &HamiltonianSpec) -> Result<DMatrix<f64>> {
    if h.n > DENSE_CAP {
        return Err(Error::CapExceeded {
            n: h.n,
            cap: DENSE_CAP,
        });
    }
    let dim = 1usize << h.n;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for (i, (c, p)) in h.terms.iter().enumerate() {
        let signed = match p.phase_exp() {
            0 => *c,
            2 => -*c,
            _ => return Err(Error::NotReal(i)),
        };
        let x = p.x_mask().as_u64();
        let z = p.z_mask().as_u64();
        for b in 0..dim as u64 {
            let sign = if (b & z).count_ones() % 2 == 1 {
                -signed
            } else {
                signed
            };
            m[((b ^ x) as usize, b as usize)] += sign;
        }
    }
    Ok(m)
}

/// All eigenvalues, ascending.
pub fn dense_eigenvalues(h: &HamiltonianSpec) -> Result<Vec<f64>> {
    let m = dense_matrix(h)?;
    let eig = m.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::TermKind;
    use crate::pauli::PauliString;

    #[test]
    fn two_qubit_toy() {
        // H = -X0X1 - Z0: eigenvalues +-sqrt(2) twice.
        let terms = vec![
            (-1.0, PauliString::x_string(2, &[0, 1])),
            (-1.0, PauliString::z_string(2, &[0])),
        ];
        let h = HamiltonianSpec {
            n: 2,
            terms,
            kinds: vec![TermKind::HexX; 2],
            g_t: 0.0,
            g_c: 0.0,
        };
        let e = dense_eigenvalues(&h).unwrap();
        let r2 = std::f64::consts::SQRT_2;
        for (got, want) in e.iter().zip([-r2, -r2, r2, r2]) {
            assert!((got - want).abs() < 1e-12, "{e:?}");
        }
    }
}
