use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{
    Constraint, DirectSigns, Family, PreparedPoints, ReducedPredicate, SignMatrix,
};
use crate::labeling::{
    decode, encode_labels, label_stats, read_label_file, write_label_section, LabelStats,
    VertexLabel, FLAG_COMPLEMENT, FLAG_STRICT,
};
use crate::partition::{
    build_hierarchy, HierarchyParams, HierarchyTree, HyperplaneSet, LiftedPointSet,
};
use crate::rational::Rational;

/// One constraint reduced and evaluated on a vertex set.
#[derive(Clone, Debug)]
pub struct PreparedConstraint {
    pub reduced: ReducedPredicate,
    pub complement: bool,
    pub prepared: PreparedPoints,
    pub signs: SignMatrix,
}

/// Reduces a constraint and computes its sign matrix, rejecting any zero pair.
pub fn prepare_constraint(c: &Constraint, points: &[Vec<Rational>]) -> Result<PreparedConstraint> {
    let (pred, complement) = c.encoded_predicate();
    let reduced = ReducedPredicate::new(&pred)?;
    let prepared = PreparedPoints::new(&reduced, points)?;
    let signs = SignMatrix::compute(&prepared);
    general_position_gate(&signs)?;
    Ok(PreparedConstraint {
        reduced,
        complement,
        prepared,
        signs,
    })
}

/// Fails with the first vertex pair on which the predicate vanishes.
pub fn general_position_gate(signs: &SignMatrix) -> Result<()> {
    match signs.first_zero() {
        Some((i, j)) => Err(Error::GeneralPosition(i, j)),
        None => Ok(()),
    }
}

pub fn prepare_family(
    family: &Family,
    points: &[Vec<Rational>],
) -> Result<Vec<PreparedConstraint>> {
    if let Some(p) = points.iter().find(|p| p.len() != family.q) {
        return Err(Error::DimensionMismatch {
            expected: family.q,
            got: p.len(),
        });
    }
    family
        .constraints
        .iter()
        .map(|c| prepare_constraint(c, points))
        .collect()
}

/// Labels for one constraint together with the structures that produced them.
#[derive(Clone, Debug)]
pub struct ConstraintEncoding {
    pub constraint: PreparedConstraint,
    pub hierarchy: HierarchyTree,
    pub labels: Vec<VertexLabel>,
    pub stats: LabelStats,
}

#[derive(Clone, Debug)]
pub struct Encoding {
    pub sections: Vec<ConstraintEncoding>,
}

impl Encoding {
    pub fn n(&self) -> usize {
        self.sections[0].labels.len()
    }

    /// Total label bits of a vertex over all constraints.
    pub fn vertex_bits(&self, v: usize) -> usize {
        self.sections.iter().map(|s| s.labels[v].len()).sum()
    }

    pub fn write(&self, w: &mut impl std::io::Write) -> Result<()> {
        for s in &self.sections {
            write_label_section(w, &s.labels)?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        Ok(buf)
    }

    pub fn label_sections(&self) -> Vec<Vec<VertexLabel>> {
        self.sections.iter().map(|s| s.labels.clone()).collect()
    }
}

pub fn encode_constraint(
    c: PreparedConstraint,
    params: HierarchyParams,
) -> Result<ConstraintEncoding> {
    let lifted = LiftedPointSet::new(c.reduced.dim(), c.prepared.reduced.clone())?;
    let hyps = HyperplaneSet::from_lifted(&c.reduced, &lifted);
    let hierarchy = build_hierarchy(&lifted, &hyps, &c.signs, params)?;
    let mut flags = 0;
    if hierarchy.all_strict() {
        flags |= FLAG_STRICT;
    }
    if c.complement {
        flags |= FLAG_COMPLEMENT;
    }
    let labels = encode_labels(&hierarchy, &c.signs, flags)?;
    let stats = label_stats(&labels);
    Ok(ConstraintEncoding {
        constraint: c,
        hierarchy,
        labels,
        stats,
    })
}

/// Encodes every constraint of a family on a vertex set.
pub fn encode(
    family: &Family,
    points: &[Vec<Rational>],
    params: HierarchyParams,
) -> Result<Encoding> {
    if points.is_empty() {
        return Err(Error::Domain("cannot encode an empty vertex set".into()));
    }
    let sections = prepare_family(family, points)?
        .into_iter()
        .map(|c| encode_constraint(c, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(Encoding { sections })
}

/// Adjacency from the labels of two vertices, one label per constraint section.
pub fn decode_sections(sections: &[Vec<VertexLabel>], x: usize, y: usize) -> Result<bool> {
    for s in sections {
        if !decode(&s[x], &s[y])? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn decode_file_bytes(bytes: &[u8]) -> Result<Vec<Vec<VertexLabel>>> {
    let sections = read_label_file(&mut &bytes[..])?;
    if sections.is_empty() {
        return Err(Error::MalformedLabel("label file holds no sections".into()));
    }
    if sections.iter().any(|s| s.len() != sections[0].len()) {
        return Err(Error::HeaderMismatch);
    }
    Ok(sections)
}

/// Ground-truth adjacency by direct evaluation of every constraint, packed row-major
/// over unordered pairs `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    bits: Vec<bool>,
}

impl Adjacency {
    pub fn direct(family: &Family, points: &[Vec<Rational>]) -> Result<Self> {
        let n = points.len();
        let evals = family
            .constraints
            .iter()
            .map(|c| Ok((DirectSigns::new(&c.predicate, points)?, c.strict)))
            .collect::<Result<Vec<_>>>()?;
        let bits = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let evals = &evals;
                (0..n).map(move |j| {
                    i != j
                        && evals.iter().all(|(e, strict)| {
                            let s = e.sign(i, j);
                            if *strict {
                                s == crate::family::EdgeSign::Positive
                            } else {
                                s.is_edge()
                            }
                        })
                })
            })
            .collect();
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn to_sign_matrix(&self) -> SignMatrix {
        use crate::family::EdgeSign;
        SignMatrix::from_fn(self.n, |i, j| {
            if self.get(i, j) {
                EdgeSign::Positive
            } else {
                EdgeSign::Negative
            }
        })
    }

    pub fn edge_density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let edges = self.bits.iter().filter(|&&b| b).count() / 2;
        edges as f64 / (self.n * (self.n - 1) / 2) as f64
    }
}

/// Outcome of checking every unordered pair against the truth.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairCheck {
    pub pairs: u64,
    pub mismatches: u64,
    /// Pairs where the two decode orientations disagree.
    pub asymmetric: u64,
}

pub fn check_all_pairs(sections: &[Vec<VertexLabel>], truth: &Adjacency) -> Result<PairCheck> {
    let n = truth.n();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c = PairCheck::default();
            for j in i + 1..n {
                let mut forward = true;
                let mut backward = true;
                for s in sections {
                    forward &= crate::labeling::decode_oriented(&s[i], &s[j])?;
                    backward &= crate::labeling::decode_oriented(&s[j], &s[i])?;
                }
                c.pairs += 1;
                // i < j, so the forward walk is the canonical orientation
                c.mismatches += (forward != truth.get(i, j)) as u64;
                c.asymmetric += (forward != backward) as u64;
            }
            Ok(c)
        })
        .try_reduce(PairCheck::default, |a, b| {
            Ok(PairCheck {
                pairs: a.pairs + b.pairs,
                mismatches: a.mismatches + b.mismatches,
                asymmetric: a.asymmetric + b.asymmetric,
            })
        })
}
