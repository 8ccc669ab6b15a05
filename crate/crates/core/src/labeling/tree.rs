use crate::bits::{BitReader, BitString};
use crate::error::{Error, Result};
use crate::family::SignMatrix;
use crate::partition::HierarchyTree;

/// Decision tree `B(y)` of one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelTree {
    Split {
        /// Cells answered directly, with the uniform adjacency bit; increasing cell order.
        leaves: Vec<(u32, bool)>,
        /// Subtrees for the remaining cells, in increasing cell order.
        children: Vec<LabelTree>,
    },
    Final {
        /// Adjacency of `y` to each terminal member in slot order.
        bits: Vec<bool>,
    },
}

impl LabelTree {
    pub fn node_count(&self) -> usize {
        match self {
            LabelTree::Final { .. } => 1,
            LabelTree::Split { children, .. } => {
                1 + children.iter().map(|c| c.node_count()).sum::<usize>()
            }
        }
    }

    /// Bit layout: tag `0` then leaf count (`Q+1` bits), `(cell-1, bit)` pairs and the
    /// children; or tag `1`, member count minus one (`2Q` bits) and the member bits.
    pub fn write(&self, q: u32, out: &mut BitString) {
        match self {
            LabelTree::Split { leaves, children } => {
                out.push(false);
                out.push_uint(leaves.len() as u64, q + 1);
                for &(cell, bit) in leaves {
                    out.push_uint(cell as u64 - 1, q);
                    out.push(bit);
                }
                for c in children {
                    c.write(q, out);
                }
            }
            LabelTree::Final { bits } => {
                out.push(true);
                out.push_uint(bits.len() as u64 - 1, 2 * q);
                for &b in bits {
                    out.push(b);
                }
            }
        }
    }

    pub fn read(q: u32, r: &mut BitReader<'_>) -> Result<Self> {
        let cells = 1u32 << q;
        if r.read()? {
            let c = r.read_uint(2 * q)? as usize + 1;
            let bits = (0..c).map(|_| r.read()).collect::<Result<_>>()?;
            return Ok(LabelTree::Final { bits });
        }
        let a = r.read_uint(q + 1)? as u32;
        if a == 0 || a > cells {
            return Err(Error::MalformedLabel(format!(
                "leaf count {a} out of range"
            )));
        }
        let mut leaves = Vec::with_capacity(a as usize);
        for _ in 0..a {
            let cell = r.read_uint(q)? as u32 + 1;
            if leaves.last().is_some_and(|&(prev, _)| prev >= cell) {
                return Err(Error::MalformedLabel("leaf cells not increasing".into()));
            }
            leaves.push((cell, r.read()?));
        }
        let children = (0..cells - a)
            .map(|_| Self::read(q, r))
            .collect::<Result<_>>()?;
        Ok(LabelTree::Split { leaves, children })
    }

    /// Walks an address through the tree.
    pub fn lookup(&self, path: &[u32], slot: u32) -> Result<bool> {
        let mut node = self;
        let mut depth = 0;
        loop {
            match node {
                LabelTree::Final { bits } => {
                    if depth != path.len() {
                        return Err(Error::MalformedLabel(
                            "address longer than the tree branch".into(),
                        ));
                    }
                    return bits.get(slot as usize - 1).copied().ok_or_else(|| {
                        Error::MalformedLabel(format!("slot {slot} beyond terminal"))
                    });
                }
                LabelTree::Split { leaves, children } => {
                    let &cell = path.get(depth).ok_or_else(|| {
                        Error::MalformedLabel("address shorter than the tree branch".into())
                    })?;
                    let before = leaves.partition_point(|&(c, _)| c < cell);
                    if let Some(&(c, bit)) = leaves.get(before) {
                        if c == cell {
                            return Ok(bit);
                        }
                    }
                    let rank = cell as usize - 1 - before;
                    node = children.get(rank).ok_or_else(|| {
                        Error::MalformedLabel(format!("cell {cell} out of range"))
                    })?;
                    depth += 1;
                }
            }
        }
    }
}

/// Builds `B(y)`: certified cells and empty cells become leaves, everything else recurses.
pub fn build_label_tree(y: usize, h: &HierarchyTree, signs: &SignMatrix) -> Result<LabelTree> {
    build_at(y, h, signs, 0)
}

fn build_at(y: usize, h: &HierarchyTree, signs: &SignMatrix, id: usize) -> Result<LabelTree> {
    let node = h.node(id);
    let Some(split) = &node.split else {
        let bits = node
            .members
            .iter()
            .map(|&m| m != y && signs.is_edge(m, y))
            .collect();
        return Ok(LabelTree::Final { bits });
    };
    let cert = &split.certificate;
    if cert.uniform_mask(y) == 0 {
        return Err(Error::MissingCertificate {
            node: id,
            vertex: y,
        });
    }
    let mut leaves = Vec::new();
    let mut children = Vec::new();
    for (t, child) in split.children.iter().enumerate() {
        let cell = t as u32 + 1;
        match child {
            None => leaves.push((cell, false)),
            Some(_) if cert.uniform_mask(y) >> t & 1 == 1 => leaves.push((cell, cert.bit(y, cell))),
            Some(c) => children.push(build_at(y, h, signs, *c)?),
        }
    }
    Ok(LabelTree::Split { leaves, children })
}
