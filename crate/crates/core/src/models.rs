//! Model Hamiltonians on the shared torus: the hexagon X/Z pair model, the
//! trapezoid plaquette model, and their interpolation, plus syndromes,
//! homology checks, and row operators.
//!
//! Term coefficients are stored pre-negated (a term carries `-g`), so the
//! frustration-free ground energy is always `-sum |coefficients|`.

use crate::error::{Error, Result};
use crate::lattice::HexTorus;
use crate::pauli::PauliString;
use crate::stabilizer::{Membership, StabilizerGroup};
use serde::{Deserialize, Serialize};

/// Which family a term belongs to, for syndrome classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermKind {
    LightZ,
    DarkX,
    HexX,
    HexZ,
}

#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    pub n: usize,
    pub terms: Vec<(f64, PauliString)>,
    pub kinds: Vec<TermKind>,
    pub g_t: f64,
    pub g_c: f64,
}

impl HamiltonianSpec {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `-sum |c|`: the ground energy when every term is satisfied at once.
    pub fn frustration_free_energy(&self) -> f64 {
        -self.terms.iter().map(|(c, _)| c.abs()).sum::<f64>()
    }

    /// One term per line: `coefficient<TAB>pauli-literal`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (c, p) in &self.terms {
            s.push_str(&format!("{c}\t{p}\n"));
        }
        s
    }

    /// Parses the dump format. Term kinds are not part of the format; they
    /// come back unclassified.
    pub fn parse_dump(n: usize, text: &str) -> Result<HamiltonianSpec> {
        let mut terms = Vec::new();
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let (c, p) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("missing tab in {line:?}")))?;
            let coeff: f64 = c
                .parse()
                .map_err(|e| Error::Parse(format!("bad coefficient {c:?}: {e}")))?;
            let pauli: PauliString = p.parse()?;
            if pauli.n_qubits() != n {
                return Err(Error::SizeMismatch(pauli.n_qubits(), n));
            }
            terms.push((coeff, pauli));
        }
        let kinds = vec![TermKind::HexX; terms.len()];
        Ok(HamiltonianSpec {
            n,
            terms,
            kinds,
            g_t: 0.0,
            g_c: 0.0,
        })
    }
}

fn require_admissible(t: &HexTorus) -> Result<()> {
    let report = t.validate();
    if !report.admissible {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Error::Inadmissible(format!("failed checks: {failed:?}")));
    }
    Ok(())
}

/// Hexagon-pair model: `-sum h_x - sum h_z`, 2P terms.
pub fn cc_hamiltonian(t: &HexTorus) -> Result<HamiltonianSpec> {
    require_admissible(t)?;
    let p = t.hexagon_count();
    let mut terms = Vec::with_capacity(2 * p);
    let mut kinds = Vec::with_capacity(2 * p);
    for h in 0..p {
        terms.push((-1.0, t.hex_x(h)));
        kinds.push(TermKind::HexX);
    }
    for h in 0..p {
        terms.push((-1.0, t.hex_z(h)));
        kinds.push(TermKind::HexZ);
    }
    Ok(HamiltonianSpec {
        n: t.n,
        terms,
        kinds,
        g_t: 0.0,
        g_c: 1.0,
    })
}

/// Trapezoid model: one Z-plaquette per light and one X-plaquette per dark.
pub fn tc_hamiltonian(t: &HexTorus) -> Result<HamiltonianSpec> {
    require_admissible(t)?;
    let p = t.hexagon_count();
    let mut terms = Vec::with_capacity(2 * p);
    let mut kinds = Vec::with_capacity(2 * p);
    for i in 0..p {
        terms.push((-1.0, t.light_z(i)));
        kinds.push(TermKind::LightZ);
    }
    for i in 0..p {
        terms.push((-1.0, t.dark_x(i)));
        kinds.push(TermKind::DarkX);
    }
    Ok(HamiltonianSpec {
        n: t.n,
        terms,
        kinds,
        g_t: 1.0,
        g_c: 0.0,
    })
}

/// `H = -g_t (trapezoid terms) - g_c (hexagon terms)`, 4P terms.
pub fn interpolate(t: &HexTorus, g_t: f64, g_c: f64) -> Result<HamiltonianSpec> {
    if g_t < 0.0 || g_c < 0.0 {
        return Err(Error::Invalid("couplings must be non-negative".into()));
    }
    if g_t == 0.0 && g_c == 0.0 {
        return Err(Error::ZeroCouplings);
    }
    require_admissible(t)?;
    let p = t.hexagon_count();
    let mut terms = Vec::with_capacity(4 * p);
    let mut kinds = Vec::with_capacity(4 * p);
    for i in 0..p {
        terms.push((-g_t, t.light_z(i)));
        kinds.push(TermKind::LightZ);
    }
    for i in 0..p {
        terms.push((-g_t, t.dark_x(i)));
        kinds.push(TermKind::DarkX);
    }
    for h in 0..p {
        terms.push((-g_c, t.hex_x(h)));
        kinds.push(TermKind::HexX);
    }
    for h in 0..p {
        terms.push((-g_c, t.hex_z(h)));
        kinds.push(TermKind::HexZ);
    }
    Ok(HamiltonianSpec {
        n: t.n,
        terms,
        kinds,
        g_t,
        g_c,
    })
}

/// Term indices anticommuting with a Pauli.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Syndrome {
    pub violated: Vec<usize>,
}

pub fn syndrome(h: &HamiltonianSpec, p: &PauliString) -> Result<Syndrome> {
    if p.n_qubits() != h.n {
        return Err(Error::SizeMismatch(p.n_qubits(), h.n));
    }
    if !p.is_hermitian() {
        return Err(Error::NonHermitianProduct(p.phase_exp()));
    }
    let mut violated = Vec::new();
    for (i, (_, term)) in h.terms.iter().enumerate() {
        if !term.commutes(p)? {
            violated.push(i);
        }
    }
    Ok(Syndrome { violated })
}

// ---------------------------------------------------------------------------
// stabilizer groups of interest
// ---------------------------------------------------------------------------

/// Group of the trapezoid model: lights (Z) then darks (X).
pub fn tc_group(t: &HexTorus) -> Result<StabilizerGroup> {
    let p = t.hexagon_count();
    let gens: Vec<PauliString> = (0..p)
        .map(|i| t.light_z(i))
        .chain((0..p).map(|i| t.dark_x(i)))
        .collect();
    StabilizerGroup::new(t.n, gens)
}

/// Group of the hexagon model: X-plaquettes then Z-plaquettes.
pub fn cc_group(t: &HexTorus) -> Result<StabilizerGroup> {
    let p = t.hexagon_count();
    let gens: Vec<PauliString> = (0..p)
        .map(|h| t.hex_x(h))
        .chain((0..p).map(|h| t.hex_z(h)))
        .collect();
    StabilizerGroup::new(t.n, gens)
}

/// Full-rank group fixing the hexagon-model reference ground state: all
/// hexagon operators plus the four colored X loops (colors r and b, both
/// directions).
pub fn phi_c_group(t: &HexTorus) -> Result<StabilizerGroup> {
    let p = t.hexagon_count();
    let mut gens: Vec<PauliString> = (0..p)
        .map(|h| t.hex_x(h))
        .chain((0..p).map(|h| t.hex_z(h)))
        .collect();
    for color in [0usize, 2] {
        for dir in 0..2 {
            gens.push(t.cc_x_loops[color][dir].pauli(t.n));
        }
    }
    let g = StabilizerGroup::new(t.n, gens)?;
    if g.rank() != t.n {
        return Err(Error::Inadmissible(format!(
            "hexagon reference-state group has rank {} != {}",
            g.rank(),
            t.n
        )));
    }
    Ok(g)
}

/// Full-rank group fixing the trapezoid-model reference ground state: all
/// trapezoid plaquettes plus both X-type loops.
pub fn phi_t_group(t: &HexTorus) -> Result<StabilizerGroup> {
    let p = t.hexagon_count();
    let mut gens: Vec<PauliString> = (0..p)
        .map(|i| t.light_z(i))
        .chain((0..p).map(|i| t.dark_x(i)))
        .collect();
    gens.push(t.tc_x_loops[0].pauli(t.n));
    gens.push(t.tc_x_loops[1].pauli(t.n));
    let g = StabilizerGroup::new(t.n, gens)?;
    if g.rank() != t.n {
        return Err(Error::Inadmissible(format!(
            "trapezoid reference-state group has rank {} != {}",
            g.rank(),
            t.n
        )));
    }
    Ok(g)
}

/// The measured commuting set of the mapped basis: lights, darks, then the
/// two direction-0 loops. Generator order is part of the sector-label
/// contract: light i at index i, dark i at P+i, Z-loop at 2P, X-loop at 2P+1.
pub fn measured_set(t: &HexTorus) -> Vec<PauliString> {
    let p = t.hexagon_count();
    let mut m: Vec<PauliString> = (0..p)
        .map(|i| t.light_z(i))
        .chain((0..p).map(|i| t.dark_x(i)))
        .collect();
    m.push(t.tc_z_loops[0].pauli(t.n));
    m.push(t.tc_x_loops[0].pauli(t.n));
    m
}

// ---------------------------------------------------------------------------
// homology checks and row operators
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipView {
    pub member: bool,
    pub sign: Option<i8>,
}

impl From<Membership> for MembershipView {
    fn from(m: Membership) -> Self {
        match m {
            Membership::NotMember => MembershipView {
                member: false,
                sign: None,
            },
            Membership::Member { sign, .. } => MembershipView {
                member: true,
                sign: Some(sign),
            },
        }
    }
}

/// Loop-class relations between the two models.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomologyReport {
    /// r,b Z-loop pair (direction 0) against the trapezoid group.
    pub z_pair_in_tc: MembershipView,
    /// The same pair against the hexagon group.
    pub z_pair_in_cc: MembershipView,
    /// r,b X-loop pair against the trapezoid group.
    pub x_pair_in_tc: MembershipView,
    /// Three-color Z product per direction against the hexagon group.
    pub rgb_in_cc: Vec<MembershipView>,
}

pub fn homology_check(t: &HexTorus) -> Result<HomologyReport> {
    let n = t.n;
    let tc = tc_group(t)?;
    let cc = cc_group(t)?;
    let zr = t.cc_z_loops[0][0].pauli(n);
    let zb = t.cc_z_loops[2][0].pauli(n);
    let xr = t.cc_x_loops[0][0].pauli(n);
    let xb = t.cc_x_loops[2][0].pauli(n);
    let z_pair = zr.multiply(&zb)?;
    let x_pair = xr.multiply(&xb)?;
    let mut rgb_in_cc = Vec::new();
    for dir in 0..2 {
        let mut prod = PauliString::identity(n);
        for color in 0..3 {
            prod = prod.multiply(&t.cc_z_loops[color][dir].pauli(n))?;
        }
        rgb_in_cc.push(cc.member_with_sign(&prod)?.into());
    }
    Ok(HomologyReport {
        z_pair_in_tc: tc.member_with_sign(&z_pair)?.into(),
        z_pair_in_cc: cc.member_with_sign(&z_pair)?.into(),
        x_pair_in_tc: tc.member_with_sign(&x_pair)?.into(),
        rgb_in_cc,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shade {
    Light,
    Dark,
}

/// Product of all light Z-plaquettes (or dark X-plaquettes) in a row.
pub fn row_operator(t: &HexTorus, row: usize, shade: Shade) -> Result<PauliString> {
    if row >= t.row_count {
        return Err(Error::BadRow(row));
    }
    let mut prod = PauliString::identity(t.n);
    match shade {
        Shade::Light => {
            for &l in &t.light_chains[row] {
                prod = prod.multiply(&t.light_z(l))?;
            }
        }
        Shade::Dark => {
            for &d in &t.dark_chains[row] {
                prod = prod.multiply(&t.dark_x(d))?;
            }
        }
    }
    Ok(prod)
}

/// Is the row product expressible over the hexagon group extended by the two
/// same-type colored loops?
pub fn row_operator_class(t: &HexTorus, row: usize, shade: Shade) -> Result<MembershipView> {
    let n = t.n;
    let p = t.hexagon_count();
    let op = row_operator(t, row, shade)?;
    let mut gens: Vec<PauliString> = (0..p)
        .map(|h| t.hex_x(h))
        .chain((0..p).map(|h| t.hex_z(h)))
        .collect();
    match shade {
        Shade::Light => {
            gens.push(t.cc_z_loops[0][0].pauli(n));
            gens.push(t.cc_z_loops[2][0].pauli(n));
        }
        Shade::Dark => {
            gens.push(t.cc_x_loops[0][0].pauli(n));
            gens.push(t.cc_x_loops[2][0].pauli(n));
        }
    }
    let extended = StabilizerGroup::new(n, gens)?;
    Ok(extended.member_with_sign(&op)?.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> HexTorus {
        HexTorus::build(3, 3).unwrap()
    }

    #[test]
    fn term_counts() {
        let t = torus();
        assert_eq!(cc_hamiltonian(&t).unwrap().term_count(), 18);
        assert_eq!(tc_hamiltonian(&t).unwrap().term_count(), 18);
        assert_eq!(interpolate(&t, 1.0, 1.0).unwrap().term_count(), 36);
        assert!(matches!(
            interpolate(&t, 0.0, 0.0),
            Err(Error::ZeroCouplings)
        ));
    }

    #[test]
    fn ranks_give_degeneracies() {
        let t = torus();
        let tc = tc_group(&t).unwrap();
        assert_eq!(tc.rank(), 16);
        assert_eq!(tc.degeneracy_exponent(), 2); // 4 ground states
        let cc = cc_group(&t).unwrap();
        assert_eq!(cc.rank(), 14);
        assert_eq!(cc.degeneracy_exponent(), 4); // 16 ground states
    }

    #[test]
    fn reference_groups_full_rank() {
        let t = torus();
        assert_eq!(phi_c_group(&t).unwrap().rank(), 18);
        assert_eq!(phi_t_group(&t).unwrap().rank(), 18);
    }

    #[test]
    fn single_error_syndromes() {
        let t = torus();
        let h = tc_hamiltonian(&t).unwrap();
        // A single Z flips exactly the two dark plaquettes holding the qubit.
        let s = syndrome(&h, &PauliString::z_string(t.n, &[0])).unwrap();
        assert_eq!(s.violated.len(), 2);
        assert!(s.violated.iter().all(|&i| h.kinds[i] == TermKind::DarkX));
        // A single X flips exactly two lights.
        let s = syndrome(&h, &PauliString::x_string(t.n, &[0])).unwrap();
        assert_eq!(s.violated.len(), 2);
        assert!(s.violated.iter().all(|&i| h.kinds[i] == TermKind::LightZ));
        // Identity: empty syndrome.
        let s = syndrome(&h, &PauliString::identity(t.n)).unwrap();
        assert!(s.violated.is_empty());
    }

    #[test]
    fn interpolation_cross_pattern() {
        let t = torus();
        let h = interpolate(&t, 1.0, 1.0).unwrap();
        let p = t.hexagon_count();
        for hx in 0..p {
            let op = t.hex_x(hx);
            let s = syndrome(&h, &op).unwrap();
            let tc_hits: Vec<usize> = s
                .violated
                .iter()
                .copied()
                .filter(|&i| matches!(h.kinds[i], TermKind::LightZ | TermKind::DarkX))
                .collect();
            // Exactly two trapezoid terms anticommute, both light, same row.
            assert_eq!(tc_hits.len(), 2);
            for i in &tc_hits {
                assert_eq!(h.kinds[*i], TermKind::LightZ);
                assert_eq!(t.lights[*i].row, t.hexes[hx].row);
            }
        }
    }

    #[test]
    fn homology_relations() {
        let t = torus();
        let rep = homology_check(&t).unwrap();
        assert!(
            rep.z_pair_in_tc.member,
            "z pair should fuse in the trapezoid model"
        );
        assert_eq!(rep.z_pair_in_tc.sign, Some(1));
        assert!(!rep.z_pair_in_cc.member, "colored z loops stay distinct");
        assert!(rep.x_pair_in_tc.member);
        for d in &rep.rgb_in_cc {
            assert!(d.member, "three-color product is a plaquette product");
        }
    }

    #[test]
    fn row_operators() {
        let t = torus();
        for row in 0..t.row_count {
            let op = row_operator(&t, row, Shade::Light).unwrap();
            assert!(op.multiply(&op).unwrap().is_identity());
            assert!(row_operator_class(&t, row, Shade::Light).unwrap().member);
            assert!(row_operator_class(&t, row, Shade::Dark).unwrap().member);
            // Commutes with every hexagon operator: the two flips per
            // in-row hexagon pair-cancel around the chain.
            for h in 0..t.hexagon_count() {
                assert!(op.commutes(&t.hex_x(h)).unwrap());
                assert!(op.commutes(&t.hex_z(h)).unwrap());
            }
        }
        assert!(row_operator(&t, t.row_count, Shade::Light).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let t = torus();
        let h = interpolate(&t, 1.0, 0.5).unwrap();
        let text = h.dump();
        let parsed = HamiltonianSpec::parse_dump(t.n, &text).unwrap();
        assert_eq!(parsed.term_count(), h.term_count());
        for ((c1, p1), (c2, p2)) in h.terms.iter().zip(&parsed.terms) {
            assert_eq!(c1, c2);
            assert_eq!(p1, p2);
        }
    }
}

// ---------------------------------------------------------------------------
// sector report
// ---------------------------------------------------------------------------

/// One sign-sector rule with human-readable member labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabeledRule {
    pub members: Vec<String>,
    /// Whole rows covered by the members, when they tile rows exactly.
    pub row_summary: Vec<String>,
    pub rhs: bool,
}

/// Which sign sectors of the measured basis hold the hexagon-model
/// reference state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectorReport {
    pub n_qubits: usize,
    pub measured_count: usize,
    pub rules: Vec<LabeledRule>,
    pub free_bits: usize,
    /// log2 of the reconstructed Hilbert dimension (the audit value).
    pub reconstructed_log2: usize,
    pub audit_ok: bool,
}

/// Derives the occupied-sector parity rules for the reference ground state
/// of the hexagon model measured against the trapezoid basis.
pub fn sector_report(t: &HexTorus) -> Result<SectorReport> {
    let p = t.hexagon_count();
    let phi_c = phi_c_group(t)?;
    let m = measured_set(t);
    let sc = crate::stabilizer::derive_sector_constraints(&phi_c, &m)?;
    let label = |idx: usize| -> String {
        if idx < p {
            format!("light[{idx}] (row {})", t.lights[idx].row)
        } else if idx < 2 * p {
            format!("dark[{}] (row {})", idx - p, t.darks[idx - p].row)
        } else if idx == 2 * p {
            "loop-z".to_string()
        } else {
            "loop-x".to_string()
        }
    };
    let mut rules = Vec::new();
    for rule in &sc.rules {
        let members: Vec<String> = rule.members.iter().map(|&i| label(i)).collect();
        // Summarize members that tile whole rows.
        let mut row_summary = Vec::new();
        let lights: Vec<usize> = rule.members.iter().copied().filter(|&i| i < p).collect();
        let darks: Vec<usize> = rule
            .members
            .iter()
            .copied()
            .filter(|&i| (p..2 * p).contains(&i))
            .map(|i| i - p)
            .collect();
        for (row, chain) in t.light_chains.iter().enumerate() {
            if chain.iter().all(|l| lights.contains(l)) && !chain.is_empty() {
                row_summary.push(format!("all lights of row {row}"));
            }
        }
        for (row, chain) in t.dark_chains.iter().enumerate() {
            if chain.iter().all(|d| darks.contains(d)) && !chain.is_empty() {
                row_summary.push(format!("all darks of row {row}"));
            }
        }
        if rule.members.contains(&(2 * p)) {
            row_summary.push("loop-z".into());
        }
        if rule.members.contains(&(2 * p + 1)) {
            row_summary.push("loop-x".into());
        }
        rules.push(LabeledRule {
            members,
            row_summary,
            rhs: rule.rhs,
        });
    }
    Ok(SectorReport {
        n_qubits: t.n,
        measured_count: m.len(),
        rules,
        free_bits: sc.free_bits,
        reconstructed_log2: sc.reconstructed_log2,
        audit_ok: sc.reconstructed_log2 == t.n,
    })
}
