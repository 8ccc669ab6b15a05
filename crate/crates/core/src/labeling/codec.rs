use std::io::{Read, Write};

use rayon::prelude::*;

use super::address::{assign_addresses, Address};
use super::tree::{build_label_tree, LabelTree};
use crate::bits::{ceil_log2, width_for, BitString};
use crate::error::{Error, Result};
use crate::family::SignMatrix;
use crate::partition::HierarchyTree;

pub const FORMAT_VERSION: u8 = 1;
pub const MAGIC: &[u8; 4] = b"SAGL";

pub const FLAG_STRICT: u8 = 1;
pub const FLAG_COMPLEMENT: u8 = 2;

/// Parameters shared by every label of one encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabelHeader {
    pub n: u32,
    pub q: u16,
    /// Hierarchy depth; sizes the address length field.
    pub s: u16,
    pub version: u8,
    pub flags: u8,
}

impl LabelHeader {
    pub const BITS: u32 = 80;

    pub fn id_width(&self) -> u32 {
        ceil_log2(self.n as u64)
    }

    pub fn length_width(&self) -> u32 {
        width_for(self.s as u64 + 1)
    }

    pub fn complement(&self) -> bool {
        self.flags & FLAG_COMPLEMENT != 0
    }

    pub fn strict(&self) -> bool {
        self.flags & FLAG_STRICT != 0
    }

    fn write_bits(&self, out: &mut BitString) {
        out.push_uint(self.n as u64, 32);
        out.push_uint(self.q as u64, 16);
        out.push_uint(self.s as u64, 16);
        out.push_uint(self.version as u64, 8);
        out.push_uint(self.flags as u64, 8);
    }

    fn write_bytes(&self, w: &mut impl Write) -> std::io::Result<()> {
        w.write_all(&self.n.to_be_bytes())?;
        w.write_all(&self.q.to_be_bytes())?;
        w.write_all(&self.s.to_be_bytes())?;
        w.write_all(&[self.flags])
    }

    fn validate(&self) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Version(self.version));
        }
        if self.n == 0 || self.q == 0 || self.q as usize > crate::partition::MAX_Q {
            return Err(Error::MalformedLabel(format!(
                "bad header n={} Q={}",
                self.n, self.q
            )));
        }
        Ok(())
    }
}

/// One vertex's label: id, address and decision tree, plus the exact body bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLabel {
    pub id: u32,
    pub header: LabelHeader,
    pub address: Address,
    pub tree: LabelTree,
    body: BitString,
}

impl VertexLabel {
    pub fn new(id: u32, header: LabelHeader, address: Address, tree: LabelTree) -> Self {
        let q = header.q as u32;
        let mut body = BitString::new();
        body.push_uint(id as u64, header.id_width());
        body.push_uint(address.path.len() as u64, header.length_width());
        for &c in &address.path {
            body.push_uint(c as u64 - 1, q);
        }
        body.push_uint(address.slot as u64 - 1, 2 * q);
        tree.write(q, &mut body);
        Self {
            id,
            header,
            address,
            tree,
            body,
        }
    }

    /// Label bits without the shared header.
    pub fn body(&self) -> &BitString {
        &self.body
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    pub fn address_bits(&self) -> usize {
        let q = self.header.q as usize;
        self.header.id_width() as usize
            + self.header.length_width() as usize
            + q * (self.address.path.len() + 2)
    }

    pub fn tree_bits(&self) -> usize {
        self.len() - self.address_bits()
    }

    /// Parses a body under a known header.
    pub fn from_body(header: LabelHeader, body: BitString) -> Result<Self> {
        header.validate()?;
        let q = header.q as u32;
        let mut r = body.reader();
        let id = r.read_uint(header.id_width())? as u32;
        if id >= header.n {
            return Err(Error::MalformedLabel(format!("id {id} out of range")));
        }
        let len = r.read_uint(header.length_width())? as usize;
        if len > header.s as usize {
            return Err(Error::MalformedLabel(format!(
                "address length {len} exceeds depth {}",
                header.s
            )));
        }
        let path = (0..len)
            .map(|_| Ok(r.read_uint(q)? as u32 + 1))
            .collect::<Result<_>>()?;
        let slot = r.read_uint(2 * q)? as u32 + 1;
        let tree = LabelTree::read(q, &mut r)?;
        if r.remaining() != 0 {
            return Err(Error::MalformedLabel(format!(
                "{} trailing bits",
                r.remaining()
            )));
        }
        Ok(Self {
            id,
            header,
            address: Address { path, slot },
            tree,
            body,
        })
    }
}

/// Self-describing bit string: the 80-bit header followed by the body.
pub fn serialize_label(v: &VertexLabel) -> BitString {
    let mut out = BitString::new();
    v.header.write_bits(&mut out);
    out.extend(&v.body);
    out
}

pub fn deserialize_label(bits: &BitString) -> Result<VertexLabel> {
    let mut r = bits.reader();
    let header = LabelHeader {
        n: r.read_uint(32)? as u32,
        q: r.read_uint(16)? as u16,
        s: r.read_uint(16)? as u16,
        version: r.read_uint(8)? as u8,
        flags: r.read_uint(8)? as u8,
    };
    header.validate()?;
    let mut body = BitString::new();
    while r.remaining() > 0 {
        body.push(r.read()?);
    }
    VertexLabel::from_body(header, body)
}

/// Answers adjacency from two labels: the smaller id's address is walked through the
/// larger id's tree.
pub fn decode(a: &VertexLabel, b: &VertexLabel) -> Result<bool> {
    if a.id < b.id {
        decode_oriented(a, b)
    } else {
        decode_oriented(b, a)
    }
}

/// Walks `x`'s address through `y`'s tree, in that orientation only.
pub fn decode_oriented(x: &VertexLabel, y: &VertexLabel) -> Result<bool> {
    if x.header != y.header {
        return Err(Error::HeaderMismatch);
    }
    if x.id == y.id {
        return Err(Error::SelfQuery(x.id));
    }
    let bit = y.tree.lookup(&x.address.path, x.address.slot)?;
    Ok(bit != x.header.complement())
}

/// Labels every vertex of a certified hierarchy.
pub fn encode_labels(h: &HierarchyTree, signs: &SignMatrix, flags: u8) -> Result<Vec<VertexLabel>> {
    let header = LabelHeader {
        n: h.n() as u32,
        q: h.q() as u16,
        s: h.depth() as u16,
        version: FORMAT_VERSION,
        flags,
    };
    let addresses = assign_addresses(h);
    addresses
        .into_par_iter()
        .enumerate()
        .map(|(y, address)| {
            let tree = build_label_tree(y, h, signs)?;
            Ok(VertexLabel::new(y as u32, header, address, tree))
        })
        .collect()
}

/// Writes one section: magic, version, header, then a length-prefixed record per label.
pub fn write_label_section(w: &mut impl Write, labels: &[VertexLabel]) -> Result<()> {
    let header = labels
        .first()
        .ok_or_else(|| Error::Domain("cannot write an empty label set".into()))?
        .header;
    w.write_all(MAGIC)?;
    w.write_all(&[header.version])?;
    header.write_bytes(w)?;
    for l in labels {
        if l.header != header {
            return Err(Error::HeaderMismatch);
        }
        w.write_all(&(l.len() as u32).to_be_bytes())?;
        w.write_all(l.body().as_bytes())?;
    }
    Ok(())
}

/// Reads every section of a label file; one section per constraint.
pub fn read_label_file(r: &mut impl Read) -> Result<Vec<Vec<VertexLabel>>> {
    let mut data = Vec::new();
    r.read_to_end(&mut data)?;
    let mut pos = 0usize;
    let take = |k: usize, pos: &mut usize| -> Result<&[u8]> {
        let s = data.get(*pos..*pos + k).ok_or(Error::Truncated)?;
        *pos += k;
        Ok(s)
    };
    let mut sections = Vec::new();
    while pos < data.len() {
        if take(4, &mut pos)? != MAGIC {
            return Err(Error::MalformedLabel("bad magic".into()));
        }
        let version = take(1, &mut pos)?[0];
        if version != FORMAT_VERSION {
            return Err(Error::Version(version));
        }
        let h = take(9, &mut pos)?;
        let header = LabelHeader {
            n: u32::from_be_bytes(h[0..4].try_into().unwrap()),
            q: u16::from_be_bytes(h[4..6].try_into().unwrap()),
            s: u16::from_be_bytes(h[6..8].try_into().unwrap()),
            version,
            flags: h[8],
        };
        header.validate()?;
        let mut labels = Vec::with_capacity(header.n as usize);
        for expect in 0..header.n {
            let len = u32::from_be_bytes(take(4, &mut pos)?.try_into().unwrap()) as usize;
            let bytes = take(len.div_ceil(8), &mut pos)?.to_vec();
            let label = VertexLabel::from_body(header, BitString::from_bytes(bytes, len)?)?;
            if label.id != expect {
                return Err(Error::MalformedLabel(format!(
                    "record {expect} carries id {}",
                    label.id
                )));
            }
            labels.push(label);
        }
        sections.push(labels);
    }
    Ok(sections)
}
