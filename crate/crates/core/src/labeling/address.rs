use serde::{Deserialize, Serialize};

use crate::partition::HierarchyTree;

/// Location of a vertex: the cell taken at each split, then its slot in the terminal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Address {
    /// Cell indices in `1..=2^Q`, root first.
    pub path: Vec<u32>,
    /// Position in the terminal node's member order, in `1..=4^Q`.
    pub slot: u32,
}

/// Address of every vertex, indexed by vertex id.
pub fn assign_addresses(h: &HierarchyTree) -> Vec<Address> {
    let mut out = vec![Address::default(); h.n()];
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((id, path)) = stack.pop() {
        let node = h.node(id);
        match &node.split {
            None => {
                for (i, &m) in node.members.iter().enumerate() {
                    out[m] = Address {
                        path: path.clone(),
                        slot: i as u32 + 1,
                    };
                }
            }
            Some(split) => {
                for (t, child) in split.children.iter().enumerate() {
                    if let Some(c) = child {
                        let mut p = path.clone();
                        p.push(t as u32 + 1);
                        stack.push((*c, p));
                    }
                }
            }
        }
    }
    out
}
