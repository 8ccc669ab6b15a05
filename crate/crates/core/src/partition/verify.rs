use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cells::{is_strict, CellAssignment};
use crate::family::SignMatrix;

/// How much imbalance a split may have.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum BalanceMode {
    /// Max load `min(n - 1, ceil(beta * n / 2^Q) + 2^Q - 1)`.
    Relaxed { beta: f64 },
    /// Every load in `[floor(n/2^Q), floor(n/2^Q) + 2^Q - 1]`.
    Strict,
}

impl Default for BalanceMode {
    fn default() -> Self {
        BalanceMode::Relaxed { beta: 2.0 }
    }
}

impl BalanceMode {
    pub fn beta(&self) -> Option<f64> {
        match self {
            BalanceMode::Relaxed { beta } => Some(*beta),
            BalanceMode::Strict => None,
        }
    }
}

/// Largest admissible cell load for a node of `n` members.
pub fn balance_bound(n: usize, q: usize, mode: BalanceMode) -> usize {
    let cells = 1usize << q;
    match mode {
        BalanceMode::Relaxed { beta } => {
            let scaled = (beta * n as f64 / cells as f64).ceil() as usize;
            (scaled + cells - 1).min(n.saturating_sub(1))
        }
        BalanceMode::Strict => n / cells + cells - 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub loads: Vec<usize>,
    pub bound: usize,
    pub pass: bool,
    /// Loads meet the tight bounds.
    pub strict: bool,
}

pub fn verify_balance(loads: &[usize], q: usize, mode: BalanceMode) -> BalanceReport {
    let n: usize = loads.iter().sum();
    let bound = balance_bound(n, q, mode);
    let strict = loads.len() == 1 << q && is_strict(loads, n);
    let pass = match mode {
        BalanceMode::Strict => strict,
        BalanceMode::Relaxed { .. } => loads.iter().all(|&l| l <= bound),
    };
    BalanceReport {
        loads: loads.to_vec(),
        bound,
        pass,
        strict,
    }
}

/// Per-vertex uniform cells of one node, packed as `(uniform mask, value mask)`.
/// Bit `t - 1` of the uniform mask is set when every member of cell `t` other than
/// the vertex itself has the same edge relation to it; the value mask then carries
/// that relation (0 for cells with no such member).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeCertificate {
    cell_count: u32,
    masks: Vec<(u64, u64)>,
}

impl NodeCertificate {
    pub fn cell_count(&self) -> u32 {
        self.cell_count
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn uniform_mask(&self, y: usize) -> u64 {
        self.masks[y].0
    }

    pub fn value_mask(&self, y: usize) -> u64 {
        self.masks[y].1
    }

    /// Uniform cells for `y`, 1-based and increasing.
    pub fn uniform_cells(&self, y: usize) -> Vec<u32> {
        (0..self.cell_count)
            .filter(|&t| self.masks[y].0 >> t & 1 == 1)
            .map(|t| t + 1)
            .collect()
    }

    pub fn bit(&self, y: usize, cell: u32) -> bool {
        self.masks[y].1 >> (cell - 1) & 1 == 1
    }

    /// Smallest number of uniform cells over all vertices.
    pub fn min_uniform(&self) -> u32 {
        self.masks
            .iter()
            .map(|m| m.0.count_ones())
            .min()
            .unwrap_or(0)
    }
}

/// Computes the certificate of a node for every vertex of the graph, or the vertices
/// with no uniform cell.
pub fn verify_uniformity(
    a: &CellAssignment,
    signs: &SignMatrix,
) -> Result<NodeCertificate, Vec<usize>> {
    let cell_count = a.cell_count;
    assert!(cell_count <= 64, "at most 64 cells per node");
    let full = if cell_count == 64 {
        u64::MAX
    } else {
        (1u64 << cell_count) - 1
    };
    let masks: Vec<(u64, u64)> = (0..signs.n())
        .into_par_iter()
        .map(|y| {
            let (mut seen_edge, mut seen_non) = (0u64, 0u64);
            for (&m, &c) in a.members.iter().zip(&a.cells) {
                if m == y {
                    continue;
                }
                let bit = 1u64 << (c - 1);
                if signs.is_edge(m, y) {
                    seen_edge |= bit;
                } else {
                    seen_non |= bit;
                }
            }
            let mixed = seen_edge & seen_non;
            (full & !mixed, seen_edge & !mixed)
        })
        .collect();
    let violators: Vec<usize> = masks
        .iter()
        .enumerate()
        .filter(|(_, m)| m.0 == 0)
        .map(|(y, _)| y)
        .collect();
    if violators.is_empty() {
        Ok(NodeCertificate { cell_count, masks })
    } else {
        Err(violators)
    }
}

/// Brute-force audit of a certificate against the sign matrix; returns the first
/// `(vertex, cell)` whose claimed uniformity or value is wrong.
pub fn audit_certificate(
    a: &CellAssignment,
    cert: &NodeCertificate,
    signs: &SignMatrix,
) -> Option<(usize, u32)> {
    (0..signs.n()).into_par_iter().find_map_any(|y| {
        if cert.uniform_mask(y) == 0 {
            return Some((y, 0));
        }
        for cell in cert.uniform_cells(y) {
            let expect = cert.bit(y, cell);
            let bad = a
                .members
                .iter()
                .zip(&a.cells)
                .any(|(&m, &c)| c == cell && m != y && signs.is_edge(m, y) != expect);
            if bad {
                return Some((y, cell));
            }
        }
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const RELAXED: BalanceMode = BalanceMode::Relaxed { beta: 2.0 };

    #[test]
    fn balance_examples() {
        let r = verify_balance(&[8, 8], 1, RELAXED);
        assert!(r.pass && r.strict);
        let r = verify_balance(&[4, 4, 4, 4], 2, RELAXED);
        assert!(r.pass && r.strict);
        let r = verify_balance(&[13, 1, 1, 1], 2, RELAXED);
        assert!(!r.pass && !r.strict);
        assert!(verify_balance(&[4, 4, 4, 4], 2, BalanceMode::Strict).pass);
        assert!(!verify_balance(&[8, 3, 3, 2], 2, BalanceMode::Strict).pass);
    }

    #[test]
    fn relaxed_bound_formula() {
        assert_eq!(balance_bound(64, 2, RELAXED), 35);
        assert_eq!(balance_bound(3, 1, RELAXED), 2);
        assert_eq!(balance_bound(100, 4, RELAXED), 28);
        assert_eq!(balance_bound(17, 2, BalanceMode::Strict), 7);
    }
}
