//! The trivial scheme: each vertex stores its id and its adjacency to the next
//! `ceil((n-1)/2)` vertices in cyclic order.

use rayon::prelude::*;

use crate::bits::{ceil_log2, BitString};
use crate::error::{Error, Result};
use crate::family::SignMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialLabel {
    pub n: u32,
    pub id: u32,
    /// Id followed by the forward adjacency bits.
    pub bits: BitString,
}

impl TrivialLabel {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    fn forward(&self, k: usize) -> bool {
        self.bits.get(ceil_log2(self.n as u64) as usize + k - 1)
    }
}

fn half(n: usize) -> usize {
    (n - 1).div_ceil(2)
}

pub fn trivial_encode(signs: &SignMatrix) -> Result<Vec<TrivialLabel>> {
    let n = signs.n();
    if n < 2 {
        return Err(Error::Domain(
            "the trivial scheme needs at least two vertices".into(),
        ));
    }
    let w = ceil_log2(n as u64);
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let mut bits = BitString::new();
            bits.push_uint(i as u64, w);
            for k in 1..=half(n) {
                bits.push(signs.is_edge(i, (i + k) % n));
            }
            TrivialLabel {
                n: n as u32,
                id: i as u32,
                bits,
            }
        })
        .collect())
}

pub fn trivial_decode(a: &TrivialLabel, b: &TrivialLabel) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::HeaderMismatch);
    }
    if a.id == b.id {
        return Err(Error::SelfQuery(a.id));
    }
    let n = a.n as usize;
    let d = (b.id as usize + n - a.id as usize) % n;
    Ok(if d <= half(n) {
        a.forward(d)
    } else {
        b.forward(n - d)
    })
}
