use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cells::{build_cell_assignment, CellAssignment, Strategy};
use super::lifted::{HyperplaneSet, LiftedPointSet};
use super::verify::{
    audit_certificate, verify_balance, verify_uniformity, BalanceMode, BalanceReport,
    NodeCertificate,
};
use crate::error::{Error, Result};
use crate::family::SignMatrix;

/// Largest supported reduced dimension: cell masks are 64-bit.
pub const MAX_Q: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HierarchyParams {
    pub seed: u64,
    pub balance: BalanceMode,
    pub max_retries: u32,
    /// Also require each certified cell to be geometrically avoided by the hyperplane.
    pub geometric_audit: bool,
}

impl Default for HierarchyParams {
    fn default() -> Self {
        Self {
            seed: 0,
            balance: BalanceMode::default(),
            max_retries: 32,
            geometric_audit: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Split {
    pub assignment: CellAssignment,
    pub certificate: NodeCertificate,
    pub balance: BalanceReport,
    /// Child node per cell (`children[t - 1]`); `None` for empty cells.
    pub children: Vec<Option<usize>>,
    pub retries: u32,
}

#[derive(Clone, Debug)]
pub struct HierarchyNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: u32,
    /// Members in increasing id order; for terminals this is the slot order.
    pub members: Vec<usize>,
    pub seed: u64,
    pub split: Option<Split>,
}

impl HierarchyNode {
    pub fn is_terminal(&self) -> bool {
        self.split.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct HierarchyTree {
    q: usize,
    n: usize,
    params: HierarchyParams,
    nodes: Vec<HierarchyNode>,
}

impl HierarchyTree {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &HierarchyParams {
        &self.params
    }

    pub fn nodes(&self) -> &[HierarchyNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &HierarchyNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> &HierarchyNode {
        &self.nodes[0]
    }

    pub fn cell_count(&self) -> u32 {
        1 << self.q
    }

    /// Number of splitting levels on the deepest root-to-terminal path.
    pub fn depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn total_retries(&self) -> u32 {
        self.nodes
            .iter()
            .filter_map(|n| n.split.as_ref())
            .map(|s| s.retries)
            .sum()
    }

    /// True when every split met the tight loads.
    pub fn all_strict(&self) -> bool {
        self.nodes
            .iter()
            .filter_map(|n| n.split.as_ref())
            .all(|s| s.balance.strict)
    }

    pub fn audit(&self) -> HierarchyAudit {
        HierarchyAudit {
            q: self.q,
            n: self.n,
            params: self.params,
            depth: self.depth(),
            depth_bound: depth_bound(self.n, self.q, self.params.balance),
            nodes: self
                .nodes
                .iter()
                .map(|node| {
                    let split = node.split.as_ref();
                    NodeAudit {
                        id: node.id,
                        parent: node.parent,
                        depth: node.depth,
                        members: node.members.clone(),
                        seed: node.seed,
                        terminal: split.is_none(),
                        strategy: split.map(|s| s.assignment.strategy),
                        retries: split.map_or(0, |s| s.retries),
                        loads: split.map(|s| s.balance.loads.clone()),
                        load_bound: split.map(|s| s.balance.bound),
                        strict: split.map(|s| s.balance.strict),
                        children: split.map(|s| s.children.clone()),
                        min_uniform_cells: split.map(|s| s.certificate.min_uniform()),
                    }
                })
                .collect(),
        }
    }

    /// Re-derives every certificate and every load from the sign matrix and compares.
    /// Returns a description of the first discrepancy.
    pub fn brute_force_audit(&self, signs: &SignMatrix) -> std::result::Result<(), String> {
        for node in &self.nodes {
            let Some(split) = &node.split else {
                if node.members.len() > 1usize << (2 * self.q) {
                    return Err(format!(
                        "terminal node {} has {} members",
                        node.id,
                        node.members.len()
                    ));
                }
                continue;
            };
            let a = &split.assignment;
            if a.members != node.members {
                return Err(format!(
                    "node {} assignment covers different members",
                    node.id
                ));
            }
            let report = verify_balance(&a.loads(), self.q, self.params.balance);
            if !report.pass {
                return Err(format!(
                    "node {} loads {:?} exceed {}",
                    node.id, report.loads, report.bound
                ));
            }
            for (t, members) in a.cell_members().iter().enumerate() {
                match split.children[t] {
                    None if !members.is_empty() => {
                        return Err(format!("node {} cell {} lost its members", node.id, t + 1))
                    }
                    Some(c) if self.nodes[c].members != *members => {
                        return Err(format!(
                            "node {} cell {} does not match child {}",
                            node.id,
                            t + 1,
                            c
                        ))
                    }
                    _ => {}
                }
            }
            if let Some((y, cell)) = audit_certificate(a, &split.certificate, signs) {
                return Err(format!(
                    "node {} certificate wrong for vertex {y} at cell {cell}",
                    node.id
                ));
            }
        }
        Ok(())
    }
}

/// Serializable summary of a hierarchy, one record per node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HierarchyAudit {
    pub q: usize,
    pub n: usize,
    pub params: HierarchyParams,
    pub depth: u32,
    pub depth_bound: u32,
    pub nodes: Vec<NodeAudit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeAudit {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: u32,
    pub members: Vec<usize>,
    pub seed: u64,
    pub terminal: bool,
    pub strategy: Option<Strategy>,
    pub retries: u32,
    pub loads: Option<Vec<usize>>,
    pub load_bound: Option<usize>,
    pub strict: Option<bool>,
    pub children: Option<Vec<Option<usize>>>,
    pub min_uniform_cells: Option<u32>,
}

impl HierarchyAudit {
    /// Structural checks that need no sign matrix: partition, loads, terminal sizes,
    /// non-empty certificates and the depth bound. Returns every problem found.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let cap = 1usize << (2 * self.q);
        if self.depth > self.depth_bound {
            problems.push(format!(
                "depth {} exceeds bound {}",
                self.depth, self.depth_bound
            ));
        }
        match self.nodes.first() {
            Some(root) if root.members == (0..self.n).collect::<Vec<_>>() => {}
            _ => problems.push("root does not cover every vertex".into()),
        }
        for node in &self.nodes {
            if node.terminal {
                if node.members.len() > cap {
                    problems.push(format!(
                        "terminal {} holds {} > {cap} members",
                        node.id,
                        node.members.len()
                    ));
                }
                continue;
            }
            if node.members.len() <= cap {
                problems.push(format!(
                    "node {} split with only {} members",
                    node.id,
                    node.members.len()
                ));
            }
            if node.min_uniform_cells == Some(0) {
                problems.push(format!(
                    "node {} has a vertex without a uniform cell",
                    node.id
                ));
            }
            if let (Some(loads), Some(bound)) = (&node.loads, node.load_bound) {
                if loads.iter().any(|&l| l > bound) {
                    problems.push(format!("node {} loads {loads:?} exceed {bound}", node.id));
                }
            }
            let mut covered: Vec<usize> = node
                .children
                .iter()
                .flatten()
                .flatten()
                .filter_map(|&c| self.nodes.get(c))
                .flat_map(|c| c.members.iter().copied())
                .collect();
            covered.sort_unstable();
            if covered != node.members {
                problems.push(format!("children of node {} do not partition it", node.id));
            }
        }
        problems
    }
}

/// Guaranteed maximum number of splitting levels for `n` points.
pub fn depth_bound(n: usize, q: usize, mode: BalanceMode) -> u32 {
    let cap = 1u128 << (2 * q);
    let cells = 1u128 << q;
    let n = n as u128;
    if n <= cap {
        return 0;
    }
    match mode {
        BalanceMode::Strict => {
            // s = ceil(log2((n - 2^Q + 1) / (4^Q - 2^Q + 1)) / Q), in integers
            let (num, den) = (n - cells + 1, cap - cells + 1);
            let mut s = 0;
            while den << (q as u32 * s) < num {
                s += 1;
            }
            s
        }
        BalanceMode::Relaxed { .. } => {
            let mut load = n as usize;
            let mut s = 0;
            while load as u128 > cap {
                load = super::verify::balance_bound(load, q, mode);
                s += 1;
            }
            s
        }
    }
}

fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn strategy_for(q: usize, members: usize, attempt: u32) -> Strategy {
    let tiny = members <= 12 && q <= 2;
    match q {
        1 if tiny && attempt % 2 == 1 => Strategy::Exhaustive,
        1 => Strategy::Median,
        _ if tiny && attempt % 2 == 1 => Strategy::Exhaustive,
        _ if attempt % 4 == 3 => Strategy::CenterpointOrthants,
        _ => Strategy::HalvingCuts,
    }
}

fn split_node(
    pts: &LiftedPointSet,
    hyps: &HyperplaneSet,
    signs: &SignMatrix,
    node: usize,
    members: &[usize],
    seed: u64,
    params: &HierarchyParams,
) -> Result<(CellAssignment, NodeCertificate, BalanceReport, u32)> {
    let q = pts.dim();
    let mut last = String::new();
    for attempt in 0..=params.max_retries {
        let strategy = strategy_for(q, members.len(), attempt);
        let a = match build_cell_assignment(pts, members, mix(seed, attempt as u64), strategy) {
            Ok(a) => a,
            Err(Error::Degenerate(msg)) if strategy == Strategy::Exhaustive => {
                last = msg;
                continue;
            }
            Err(e) => return Err(e),
        };
        let balance = verify_balance(&a.loads(), q, params.balance);
        if !balance.pass {
            last = match params.balance {
                BalanceMode::Strict => format!(
                    "{strategy:?} loads {:?} outside the strict range",
                    balance.loads
                ),
                BalanceMode::Relaxed { .. } => format!(
                    "{strategy:?} loads {:?} exceed bound {}",
                    balance.loads, balance.bound
                ),
            };
            continue;
        }
        let cert = match verify_uniformity(&a, signs) {
            Ok(c) => c,
            Err(violators) => {
                last = format!(
                    "{strategy:?} left {} vertices without a uniform cell (first: {:?})",
                    violators.len(),
                    &violators[..violators.len().min(8)]
                );
                continue;
            }
        };
        if params.geometric_audit {
            if let Some(y) = geometric_misses(hyps, &a, &cert) {
                last = format!("{strategy:?}: hyperplane of vertex {y} avoids no certified cell");
                continue;
            }
        }
        return Ok((a, cert, balance, attempt));
    }
    Err(Error::ProviderExhausted {
        node,
        attempts: params.max_retries as usize + 1,
        detail: last,
    })
}

/// First vertex whose hyperplane misses the interior of none of its certified cells.
fn geometric_misses(
    hyps: &HyperplaneSet,
    a: &CellAssignment,
    cert: &NodeCertificate,
) -> Option<usize> {
    let normals = &hyps.normals;
    (0..normals.len()).into_par_iter().find_first(|&y| {
        let avoided = a.geometrically_avoided(&normals[y]);
        !avoided
            .iter()
            .any(|&c| cert.uniform_mask(y) >> (c - 1) & 1 == 1)
    })
}

/// Splits recursively until every node holds at most `4^Q` points. Sibling nodes are
/// processed in parallel; node ids follow breadth-first order.
pub fn build_hierarchy(
    pts: &LiftedPointSet,
    hyps: &HyperplaneSet,
    signs: &SignMatrix,
    params: HierarchyParams,
) -> Result<HierarchyTree> {
    let n = pts.len();
    let q = pts.dim();
    if n == 0 {
        return Err(Error::Domain("hierarchy needs at least one point".into()));
    }
    if q > MAX_Q {
        return Err(Error::Domain(format!(
            "reduced dimension {q} exceeds the supported maximum {MAX_Q}"
        )));
    }
    if signs.n() != n || hyps.normals.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: signs.n(),
        });
    }
    let cap = 1usize << (2 * q);
    let mut nodes = vec![HierarchyNode {
        id: 0,
        parent: None,
        depth: 0,
        members: (0..n).collect(),
        seed: mix(params.seed, 0),
        split: None,
    }];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let results: Vec<_> = frontier
            .par_iter()
            .map(|&id| {
                let node = &nodes[id];
                if node.members.len() <= cap {
                    return Ok(None);
                }
                split_node(pts, hyps, signs, id, &node.members, node.seed, &params).map(Some)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut next = Vec::new();
        for (&id, result) in frontier.iter().zip(results) {
            let Some((assignment, certificate, balance, retries)) = result else {
                continue;
            };
            let depth = nodes[id].depth + 1;
            let mut children = Vec::with_capacity(assignment.cell_count as usize);
            for members in assignment.cell_members() {
                if members.is_empty() {
                    children.push(None);
                    continue;
                }
                let child = nodes.len();
                nodes.push(HierarchyNode {
                    id: child,
                    parent: Some(id),
                    depth,
                    members,
                    seed: mix(params.seed, child as u64),
                    split: None,
                });
                children.push(Some(child));
                next.push(child);
            }
            nodes[id].split = Some(Split {
                assignment,
                certificate,
                balance,
                children,
                retries,
            });
        }
        frontier = next;
    }
    Ok(HierarchyTree {
        q,
        n,
        params,
        nodes,
    })
}
