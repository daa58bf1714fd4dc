//! Chain-theory checks: frozen dense values, free-fermion equivalence,
//! assembly against brute force, and the ensemble-versus-ED verification.

use hexphase::chains::{
    assemble_k_lowest, chain_dense_spectrum, chain_ff_spectrum, ChainEnsemble, ChainSpec, Parity,
};
use hexphase::lattice::HexTorus;
use hexphase::spectra::SolveOptions;

/// Dense oracle written independently of the chains module: explicit
/// 2^N x 2^N matrix in the Z basis, filtered by parity after the fact.
fn oracle_full_spectrum(n: usize, g_c: f64, g_t: f64) -> Vec<f64> {
    use nalgebra::DMatrix;
    let dim = 1usize << n;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for b in 0..dim {
        let down = b.count_ones() as f64;
        m[(b, b)] += -g_t * (n as f64 - 2.0 * down);
        for site in 0..n {
            let other = (site + 1) % n;
            let f = b ^ (1 << site) ^ (1 << other);
            m[(f, b)] += -g_c;
        }
    }
    let mut vals: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

#[test]
fn frozen_three_site_critical_spectrum() {
    // N=3, g_c=1, g_t=1: eight eigenvalues, computed with the oracle above
    // and frozen. (Both parity sectors merged.)
    let frozen = [
        -4.000000000000001,
        -2.0,
        -2.0,
        0.0,
        0.0,
        2.0,
        2.0,
        4.0,
    ];
    let got = chain_dense_spectrum(&ChainSpec::new(3, 1.0, 1.0), None).unwrap();
    let oracle = oracle_full_spectrum(3, 1.0, 1.0);
    for ((g, o), f) in got.iter().zip(&oracle).zip(&frozen) {
        assert!((g - o).abs() < 1e-10, "impl vs oracle: {got:?} vs {oracle:?}");
        assert!((g - f).abs() < 1e-9, "impl vs frozen: {got:?}");
    }
}

#[test]
fn dense_matches_independent_oracle() {
    for &n in &[2usize, 3, 4, 6] {
        for &(gt, gc) in &[(1.0, 0.5), (0.25, 1.0)] {
            let both = chain_dense_spectrum(&ChainSpec::new(n, gc, gt), None).unwrap();
            let oracle = oracle_full_spectrum(n, gc, gt);
            for (a, b) in both.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn free_fermion_equals_dense_across_sectors() {
    // Both parities, both twists, a grid of couplings, lengths up to 12.
    let couplings = [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.25), (0.3, 0.9)];
    for n in 2..=12usize {
        for &(gt, gc) in &couplings {
            for &tw in &[false, true] {
                for parity in [Parity::Even, Parity::Odd] {
                    let c = ChainSpec::new(n, gc, gt).twisted(tw);
                    let dense = chain_dense_spectrum(&c, Some(parity)).unwrap();
                    let ff = chain_ff_spectrum(&c, parity, dense.len());
                    for (a, b) in ff.iter().zip(&dense) {
                        assert!(
                            (a - b).abs() < 1e-10,
                            "n={n} gt={gt} gc={gc} twisted={tw} {parity:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn assembly_matches_cartesian_brute_force() {
    // <= 2^12 combinations.
    let lists: Vec<Vec<f64>> = vec![
        vec![-2.0, -1.0, 0.5, 3.0],
        vec![0.0, 0.25, 0.3, 4.0],
        vec![-1.5, 2.0],
        vec![0.1, 0.2, 0.3, 0.4, 5.0],
        vec![-0.7, 0.7],
        vec![0.0, 1.0, 2.0, 3.0],
    ];
    let mut brute = vec![0.0f64];
    for l in &lists {
        let mut next = Vec::with_capacity(brute.len() * l.len());
        for b in &brute {
            for x in l {
                next.push(b + x);
            }
        }
        brute = next;
    }
    brute.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!(brute.len() <= 1 << 12);
    let got = assemble_k_lowest(&lists, brute.len()).unwrap();
    for (a, b) in got.iter().zip(&brute) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn ensemble_reproduces_pure_limits() {
    let t = HexTorus::build(3, 3).unwrap();
    // Pure trapezoid model: E0 = -18 with multiplicity 4.
    let ens = ChainEnsemble::from_lattice(&t, 1.0, 0.0).unwrap();
    let levels = ens.predict(8).unwrap();
    assert!((levels[0] + 18.0).abs() < 1e-12, "{levels:?}");
    let ground = levels.iter().filter(|e| (*e + 18.0).abs() < 1e-9).count();
    assert_eq!(ground, 4, "{levels:?}");

    // Pure hexagon model: E0 = -18 with multiplicity 16.
    let ens = ChainEnsemble::from_lattice(&t, 0.0, 1.0).unwrap();
    let levels = ens.predict(20).unwrap();
    assert!((levels[0] + 18.0).abs() < 1e-12);
    let ground = levels.iter().filter(|e| (*e + 18.0).abs() < 1e-9).count();
    assert_eq!(ground, 16, "{levels:?}");

    // The untwisted variant overcounts the hexagon-model ground space.
    let naive = ens.predict_naive(80).unwrap();
    let ground = naive.iter().filter(|e| (*e + 18.0).abs() < 1e-9).count();
    assert_eq!(ground, 64, "untwisted prediction should overcount");
}

#[test]
fn ensemble_matches_ed_midpoint() {
    let t = HexTorus::build(3, 3).unwrap();
    let k = 20;
    let opts = SolveOptions::new(k);
    let report = hexphase::chains::map_verify(&t, 1.0, 0.25, k, &opts).unwrap();
    assert!(
        report.max_abs_diff <= 1e-8,
        "derived ensemble vs ED: {} (ed {:?} pred {:?})",
        report.max_abs_diff,
        report.ed,
        report.predicted
    );
    assert!(report.multiplicity_ok);
    eprintln!(
        "map-verify (1, 0.25): max|dE| = {:.3e}, untwisted max|dE| = {:.3e}, ed clusters {:?}",
        report.max_abs_diff, report.naive_max_abs_diff, report.ed_cluster_sizes
    );
}
