//! Free-fermion solution of the transverse-field Ising ring.
//!
//! Mode energies are `2 sqrt(g_t^2 + g_c^2 - 2 g_t g_c cos k)` on the
//! momentum grid selected by spin parity and boundary twist: even parity on
//! an untwisted ring pairs with antiperiodic momenta, odd with periodic, and
//! a twisted boundary swaps the two. The unpaired momenta carry signed
//! energies (`2(g_t - g_c)` at k = 0, `2(g_t + g_c)` at k = pi), and
//! occupation parity must match the spin parity. The whole mapping is
//! validated against the dense sector spectra rather than trusted.

use super::dense::{ChainSpec, Parity};
use crate::error::{Error, Result};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Vacuum energy and signed mode energies for one sector's grid.
pub fn ff_mode_energies(c: &ChainSpec, parity: Parity, twisted: bool) -> (f64, Vec<f64>) {
    let n = c.sites;
    let antiperiodic = (parity == Parity::Even) != twisted;
    let mut modes = Vec::with_capacity(n);
    for j in 0..n {
        // Antiperiodic: k = pi(2j+1)/n; periodic: k = 2 pi j / n.
        let two_j = 2 * j;
        let (num, is_zero, is_pi) = if antiperiodic {
            let num = two_j + 1;
            (num, false, num == n)
        } else {
            (two_j, j == 0, two_j == n)
        };
        let e = if is_zero {
            2.0 * (c.g_t - c.g_c)
        } else if is_pi {
            2.0 * (c.g_t + c.g_c)
        } else {
            let k = std::f64::consts::PI * num as f64 / n as f64;
            2.0 * (c.g_t * c.g_t + c.g_c * c.g_c - 2.0 * c.g_t * c.g_c * k.cos()).sqrt()
        };
        modes.push(e);
    }
    let vacuum = -0.5 * modes.iter().sum::<f64>();
    (vacuum, modes)
}

/// Lowest `m` levels of one parity sector from the free-fermion picture.
///
/// Occupations start from the filled-negative-modes configuration; excited
/// levels are enumerated best-first over toggle subsets with the occupation
/// parity pinned to the spin parity.
pub fn chain_ff_spectrum(c: &ChainSpec, parity: Parity, m: usize) -> Vec<f64> {
    let (vacuum, modes) = ff_mode_energies(c, parity, c.twisted);
    let mut base_energy = vacuum;
    let mut base_count = 0usize;
    let mut costs: Vec<f64> = Vec::with_capacity(modes.len());
    for &e in &modes {
        if e < 0.0 {
            base_energy += e;
            base_count += 1;
        }
        costs.push(e.abs());
    }
    costs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let want_odd = matches!(parity, Parity::Odd);
    let need_toggle_parity = (base_count % 2 == 1) != want_odd;
    k_smallest_subset_sums(&costs, need_toggle_parity, m)
        .into_iter()
        .map(|s| base_energy + s)
        .collect()
}

/// Non-decreasing sums `base + sum(subset)` over subsets of the sorted,
/// non-negative `costs`, keeping only subsets whose size parity matches.
fn k_smallest_subset_sums(costs: &[f64], odd_size: bool, m: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(m);
    if !odd_size {
        out.push(0.0); // empty subset
        if out.len() == m {
            return out;
        }
    }
    if costs.is_empty() {
        return out;
    }
    // Heap nodes: (sum, last index, subset-size parity). Children extend by
    // the next cost or replace the last element with the next one; every
    // non-empty subset is generated exactly once in non-decreasing order.
    #[derive(PartialEq)]
    struct Node(f64, usize, bool);
    impl Eq for Node {}
    impl PartialOrd for Node {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Node {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.partial_cmp(&other.0).unwrap_or(std::cmp::Ordering::Equal)
        }
    }
    let mut heap: BinaryHeap<Reverse<Node>> = BinaryHeap::new();
    heap.push(Reverse(Node(costs[0], 0, true)));
    while let Some(Reverse(Node(sum, last, odd))) = heap.pop() {
        if odd == odd_size {
            out.push(sum);
            if out.len() == m {
                break;
            }
        }
        if last + 1 < costs.len() {
            heap.push(Reverse(Node(sum + costs[last + 1], last + 1, !odd)));
            heap.push(Reverse(Node(sum - costs[last] + costs[last + 1], last + 1, odd)));
        }
    }
    out
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct GapCurvePoint {
    pub ratio: f64,
    pub gap: f64,
}

/// Gap curve of a single untwisted ring across a coupling-ratio grid:
/// the two-quasiparticle gap inside the even sector, the quantity whose
/// minimum tracks the transition.
pub fn chain_gap_curve(
    sites: usize,
    ratios: &[f64],
) -> Result<(Vec<GapCurvePoint>, usize)> {
    if sites < 2 {
        return Err(Error::Invalid("chain needs at least 2 sites".into()));
    }
    let pts: Vec<GapCurvePoint> = crate::par::map_items(ratios.to_vec(), |ratio| {
        let c = ChainSpec::new(sites, 1.0, ratio);
        let lv = chain_ff_spectrum(&c, Parity::Even, 2);
        GapCurvePoint {
            ratio,
            gap: lv[1] - lv[0],
        }
    });
    let argmin = pts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.gap.partial_cmp(&b.1.gap).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok((pts, argmin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::dense::chain_dense_spectrum;

    #[test]
    fn field_only_modes() {
        // g_c = 0: every mode costs 2 g_t.
        let c = ChainSpec::new(6, 0.0, 1.5);
        let (_, modes) = ff_mode_energies(&c, Parity::Even, false);
        for m in modes {
            assert!((m - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_dense_small() {
        for &n in &[2usize, 3, 4, 5] {
            for &(gt, gc) in &[(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (0.3, 1.1)] {
                for &tw in &[false, true] {
                    for parity in [Parity::Even, Parity::Odd] {
                        let c = ChainSpec::new(n, gc, gt).twisted(tw);
                        let dense = chain_dense_spectrum(&c, Some(parity)).unwrap();
                        let ff = chain_ff_spectrum(&c, parity, dense.len());
                        assert_eq!(ff.len(), dense.len());
                        for (a, b) in ff.iter().zip(&dense) {
                            assert!(
                                (a - b).abs() < 1e-10,
                                "n={n} gt={gt} gc={gc} tw={tw} {parity:?}: {ff:?} vs {dense:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gap_minimum_near_unit_ratio() {
        let ratios: Vec<f64> = (50..=200).map(|i| i as f64 / 100.0).collect();
        let (pts, argmin) = chain_gap_curve(64, &ratios).unwrap();
        assert!((pts[argmin].ratio - 1.0).abs() <= 0.1, "{}", pts[argmin].ratio);
    }
}
