//! Dense complex state vectors and stabilizer-state construction.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::models::HamiltonianSpec;
use crate::pauli::PauliString;
use crate::stabilizer::StabilizerGroup;
use num_complex::Complex64;

/// Hard cap on state-vector width.
pub const DEFAULT_STATE_CAP: usize = 24;

/// Norm below which a projected state counts as null.
pub const NULL_EPS: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct StateVector {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(n: usize) -> Result<Self> {
        if n > DEFAULT_STATE_CAP {
            return Err(Error::CapExceeded {
                n,
                cap: DEFAULT_STATE_CAP,
            });
        }
        Ok(StateVector {
            n,
            amps: vec![Complex64::new(0.0, 0.0); 1 << n],
        })
    }

    pub fn computational(n: usize, bits: &Bits) -> Result<Self> {
        let mut v = StateVector::zeros(n)?;
        let mut idx = 0usize;
        for q in 0..n {
            if bits.get(q) {
                idx |= 1 << q;
            }
        }
        v.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        let mut v = StateVector::zeros(n)?;
        for (a, &x) in v.amps.iter_mut().zip(data) {
            *a = Complex64::new(x, 0.0);
        }
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> f64 {
        let norm = self.norm();
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
        norm
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `P|v>` for `P = i^phase X^x Z^z`.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<StateVector> {
        if p.n_qubits() != self.n {
            return Err(Error::SizeMismatch(p.n_qubits(), self.n));
        }
        let xm = mask_u64(p.x_mask());
        let zm = mask_u64(p.z_mask());
        let phase = match p.phase_exp() {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let mut out = StateVector::zeros(self.n)?;
        for (b, &amp) in self.amps.iter().enumerate() {
            let sign = if ((b as u64) & zm).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out.amps[b ^ xm as usize] = phase * sign * amp;
        }
        Ok(out)
    }

    /// `<v|P|v>`, real for Hermitian `P`.
    pub fn expectation_pauli(&self, p: &PauliString) -> Result<f64> {
        let pv = self.apply_pauli(p)?;
        let val = self.inner(&pv);
        Ok(val.re)
    }

    pub fn expectation_hamiltonian(&self, h: &HamiltonianSpec) -> Result<f64> {
        let mut acc = 0.0;
        for (c, p) in &h.terms {
            acc += c * self.expectation_pauli(p)?;
        }
        Ok(acc)
    }

    /// Applies `(1 + (-1)^sign P)/2` and renormalizes; `None` when the
    /// projection is null (a meaningful outcome, not an error).
    pub fn project(&self, negative: bool, p: &PauliString) -> Result<Option<StateVector>> {
        let mut pv = self.apply_pauli(p)?;
        let factor = if negative { -0.5 } else { 0.5 };
        for (out, &inp) in pv.amps.iter_mut().zip(&self.amps) {
            *out = 0.5 * inp + factor * *out;
        }
        if pv.normalize() < NULL_EPS {
            Ok(None)
        } else {
            Ok(Some(pv))
        }
    }
}

fn mask_u64(bits: &Bits) -> u64 {
    debug_assert!(bits.len() <= 64);
    bits.as_u64()
}

/// `H|v>` term by term; complex path used for expectations and checks.
pub fn matvec_state(h: &HamiltonianSpec, v: &StateVector) -> Result<StateVector> {
    if h.n != v.n {
        return Err(Error::SizeMismatch(h.n, v.n));
    }
    let mut out = StateVector::zeros(v.n)?;
    for (c, p) in &h.terms {
        let pv = v.apply_pauli(p)?;
        for (o, a) in out.amps.iter_mut().zip(&pv.amps) {
            *o += c * a;
        }
    }
    Ok(out)
}

/// Sequentially applies sign projectors for a pairwise-commuting list;
/// `None` marks a null sector.
pub fn build_projected_state(
    base: &StateVector,
    projectors: &[(bool, PauliString)],
) -> Result<Option<StateVector>> {
    for (i, (_, a)) in projectors.iter().enumerate() {
        for (_, b) in projectors.iter().skip(i + 1) {
            if !a.commutes(b)? {
                return Err(Error::Invalid(
                    "projector operators must pairwise commute".into(),
                ));
            }
        }
    }
    let mut v = base.clone();
    for (negative, p) in projectors {
        match v.project(*negative, p)? {
            Some(next) => v = next,
            None => return Ok(None),
        }
    }
    Ok(Some(v))
}

/// The unique state stabilized by a full-rank group, built by projecting a
/// compatible computational basis state; every generator is verified.
pub fn state_from_group(g: &StabilizerGroup) -> Result<StateVector> {
    let n = g.n_qubits();
    if g.rank() != n {
        return Err(Error::NotFullRank { rank: g.rank(), n });
    }
    let seed = g.z_consistent_basis_state();
    let mut v = StateVector::computational(n, &seed)?;
    for row in g.echelon_paulis() {
        match v.project(false, &row)? {
            Some(next) => v = next,
            None => return Err(Error::InconsistentGroup),
        }
    }
    for gen in g.generators() {
        let gv = v.apply_pauli(gen)?;
        let overlap = v.inner(&gv);
        if (overlap.re - 1.0).abs() > 1e-9 || overlap.im.abs() > 1e-9 {
            return Err(Error::InconsistentGroup);
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_z_group_gives_basis_state() {
        let g = StabilizerGroup::new(
            3,
            vec![
                PauliString::z_string(3, &[0]),
                PauliString::z_string(3, &[1]).negated(),
                PauliString::z_string(3, &[2]),
            ],
        )
        .unwrap();
        let v = state_from_group(&g).unwrap();
        // |010>
        assert!((v.amps[0b010].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_x_group_gives_uniform_state() {
        let g = StabilizerGroup::new(
            2,
            vec![
                PauliString::x_string(2, &[0]),
                PauliString::x_string(2, &[1]),
            ],
        )
        .unwrap();
        let v = state_from_group(&g).unwrap();
        for a in &v.amps {
            assert!((a.re - 0.5).abs() < 1e-12 && a.im.abs() < 1e-14);
        }
    }

    #[test]
    fn projector_null_flag() {
        // |0> projected onto the Z = -1 sector is null.
        let v = StateVector::computational(1, &Bits::zeros(1)).unwrap();
        let z = PauliString::z_string(1, &[0]);
        assert!(v.project(true, &z).unwrap().is_none());
        assert!(v.project(false, &z).unwrap().is_some());
    }

    #[test]
    fn pauli_application_phases() {
        // Y|0> = i|1>
        let v = StateVector::computational(1, &Bits::zeros(1)).unwrap();
        let y: PauliString = "Y".parse().unwrap();
        let yv = v.apply_pauli(&y).unwrap();
        assert!((yv.amps[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        // <+|X|+> = 1
        let plus = StateVector::from_real(
            1,
            &[std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
        )
        .unwrap();
        let x: PauliString = "X".parse().unwrap();
        assert!((plus.expectation_pauli(&x).unwrap() - 1.0).abs() < 1e-14);
    }
}
