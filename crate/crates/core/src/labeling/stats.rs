use serde::{Deserialize, Serialize};

use super::codec::VertexLabel;
use crate::bits::{ceil_log2, width_for};

/// Size summary of one label set against the theoretical budgets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelStats {
    pub n: usize,
    pub q: usize,
    pub depth: u32,
    pub max_bits: usize,
    pub mean_bits: f64,
    pub min_bits: usize,
    pub max_address_bits: usize,
    pub max_tree_bits: usize,
    /// `Q(s+2) + (alpha (2^Q-1)^s - (Q+1)) / (2^Q-2)`; for `Q = 1` the exact worst case.
    pub closed_form_bound: f64,
    /// Worst-case label length of this wire format at the measured depth.
    pub adjusted_bound: f64,
    pub trivial_bound: usize,
    /// `log(max_bits) / log(n)`; zero when `n < 2`.
    pub exponent_estimate: f64,
}

impl LabelStats {
    pub fn within_budget(&self) -> bool {
        self.max_bits as f64 <= self.adjusted_bound
    }
}

pub fn alpha(q: u32) -> i128 {
    let p = |b: i128| b.pow(q);
    p(8) - 2 * p(4) + 2 * p(2) - 3 * q as i128 - 1
}

/// `(alpha (2^Q-1)^m - (Q+1)) / (2^Q-2)`: closed-form tree bits at height `m`.
pub fn closed_form_tree_bound(q: u32, m: u32) -> f64 {
    let c = (1u64 << q) as f64;
    (alpha(q) as f64 * (c - 1.0).powi(m as i32) - (q as f64 + 1.0)) / (c - 2.0)
}

/// Worst-case tree bits for a subtree of height `m` in this wire format.
pub fn format_tree_bound(q: u32, m: u32) -> f64 {
    let final_bits = 1.0 + 2.0 * q as f64 + (1u64 << (2 * q)) as f64;
    let split_overhead = 1.0 + 2.0 * (q as f64 + 1.0);
    let fanout = ((1u64 << q) - 1) as f64;
    (0..m).fold(final_bits, |t, _| split_overhead + fanout * t)
}

/// Worst-case full label length at depth `s` in this wire format.
pub fn format_label_bound(n: usize, q: u32, s: u32) -> f64 {
    let address = ceil_log2(n as u64) + width_for(s as u64 + 1) + q * (s + 2);
    address as f64 + format_tree_bound(q, s)
}

pub fn closed_form_label_bound(n: usize, q: u32, s: u32) -> f64 {
    if q == 1 {
        return format_label_bound(n, q, s);
    }
    (q * (s + 2)) as f64 + closed_form_tree_bound(q, s)
}

/// `ceil((n-1)/2) + ceil(log2 n)`.
pub fn trivial_bound(n: usize) -> usize {
    (n.saturating_sub(1)).div_ceil(2) + ceil_log2(n as u64) as usize
}

pub fn label_stats(labels: &[VertexLabel]) -> LabelStats {
    assert!(!labels.is_empty(), "label_stats needs at least one label");
    let h = labels[0].header;
    let (n, q, s) = (h.n as usize, h.q as u32, h.s as u32);
    let lens: Vec<usize> = labels.iter().map(|l| l.len()).collect();
    let max_bits = *lens.iter().max().unwrap();
    LabelStats {
        n,
        q: q as usize,
        depth: s,
        max_bits,
        mean_bits: lens.iter().sum::<usize>() as f64 / lens.len() as f64,
        min_bits: *lens.iter().min().unwrap(),
        max_address_bits: labels.iter().map(|l| l.address_bits()).max().unwrap(),
        max_tree_bits: labels.iter().map(|l| l.tree_bits()).max().unwrap(),
        closed_form_bound: closed_form_label_bound(n, q, s),
        adjusted_bound: format_label_bound(n, q, s),
        trivial_bound: trivial_bound(n),
        exponent_estimate: if n < 2 {
            0.0
        } else {
            (max_bits as f64).ln() / (n as f64).ln()
        },
    }
}
