use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{parse_document, Comparison, Poly};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Key of one term: exponent vectors on `x` and on `y`.
pub type TermKey = (Vec<u32>, Vec<u32>);

/// A symmetric polynomial `f(x, y)` with integer coefficients; an edge is `f(x, y) >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialPredicate {
    q: usize,
    degree: u32,
    terms: BTreeMap<TermKey, BigInt>,
}

impl PolynomialPredicate {
    /// Builds and validates a predicate. Zero coefficients are dropped.
    pub fn new(q: usize, terms: impl IntoIterator<Item = (TermKey, BigInt)>) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("ambient dimension q must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for ((a, b), c) in terms {
            if a.len() != q || b.len() != q {
                return Err(Error::DimensionMismatch {
                    expected: q,
                    got: a.len().max(b.len()),
                });
            }
            if !c.is_zero() {
                *map.entry((a, b)).or_insert_with(BigInt::zero) += c;
            }
        }
        map.retain(|_, c: &mut BigInt| !c.is_zero());
        if map.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        // mirror every term and compare against the original
        for ((a, b), c) in &map {
            if map.get(&(b.clone(), a.clone())) != Some(c) {
                return Err(Error::Asymmetric {
                    term: format_term(a, b, c),
                });
            }
        }
        let degree = map
            .keys()
            .map(|(a, b)| a.iter().chain(b).sum::<u32>())
            .max()
            .unwrap_or(0);
        Ok(Self {
            q,
            degree,
            terms: map,
        })
    }

    fn from_poly(q: usize, p: &Poly) -> Result<Self> {
        Self::new(
            q,
            p.terms
                .iter()
                .map(|(e, c)| ((e[..q].to_vec(), e[q..].to_vec()), c.clone())),
        )
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Total degree of `f` in `(x, y)`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Largest degree carried by either argument alone; this sizes the monomial lift.
    pub fn lift_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(a, b)| a.iter().sum::<u32>().max(b.iter().sum()))
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, BigInt> {
        &self.terms
    }

    pub fn negated(&self) -> Self {
        Self {
            q: self.q,
            degree: self.degree,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    /// Direct evaluation of `f(x, y)` term by term.
    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        for p in [x, y] {
            if p.len() != self.q {
                return Err(Error::DimensionMismatch {
                    expected: self.q,
                    got: p.len(),
                });
            }
        }
        let mono = |p: &[Rational], e: &[u32]| {
            p.iter().zip(e).fold(Rational::one(), |acc, (v, &k)| {
                acc * num_traits::pow(v.clone(), k as usize)
            })
        };
        Ok(self
            .terms
            .iter()
            .fold(Rational::zero(), |acc, ((a, b), c)| {
                acc + Rational::from_integer(c.clone()) * mono(x, a) * mono(y, b)
            }))
    }
}

fn format_term(a: &[u32], b: &[u32], c: &BigInt) -> String {
    let mut s = c.to_string();
    for (name, e) in [("x", a), ("y", b)] {
        for (i, &k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => s.push_str(&format!("*{name}{}", i + 1)),
                _ => s.push_str(&format!("*{name}{}^{k}", i + 1)),
            }
        }
    }
    s
}

/// One defining inequality: `f >= 0`, or `f > 0` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub predicate: PolynomialPredicate,
    pub strict: bool,
}

impl Constraint {
    /// The non-strict predicate actually encoded and whether its answers are complemented.
    /// `f > 0` holds exactly when `-f >= 0` fails.
    pub fn encoded_predicate(&self) -> (PolynomialPredicate, bool) {
        if self.strict {
            (self.predicate.negated(), true)
        } else {
            (self.predicate.clone(), false)
        }
    }
}

/// A semi-algebraic family: edges are pairs satisfying every constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub q: usize,
    pub constraints: Vec<Constraint>,
}

impl Family {
    /// Parses a family-spec document. `==` expands into two opposite non-strict inequalities.
    pub fn parse(text: &str) -> Result<Self> {
        let (q, stmts) = parse_document(text)?;
        let mut constraints = Vec::new();
        for s in stmts {
            let diff = s.lhs.sub(&s.rhs);
            let mut push = |p: &Poly, strict| -> Result<()> {
                constraints.push(Constraint {
                    predicate: PolynomialPredicate::from_poly(q, p)?,
                    strict,
                });
                Ok(())
            };
            match s.op {
                Comparison::Ge => push(&diff, false)?,
                Comparison::Gt => push(&diff, true)?,
                Comparison::Le => push(&diff.neg(), false)?,
                Comparison::Lt => push(&diff.neg(), true)?,
                Comparison::Eq => {
                    push(&diff, false)?;
                    push(&diff.neg(), false)?;
                }
            }
        }
        Ok(Self { q, constraints })
    }

    pub fn single(predicate: PolynomialPredicate) -> Self {
        Self {
            q: predicate.q(),
            constraints: vec![Constraint {
                predicate,
                strict: false,
            }],
        }
    }

    /// Direct evaluation of adjacency under the conjunction of all constraints.
    pub fn adjacent(&self, x: &[Rational], y: &[Rational]) -> Result<bool> {
        for c in &self.constraints {
            let v = c.predicate.eval(x, y)?;
            let holds = if c.strict {
                v > Rational::zero()
            } else {
                v >= Rational::zero()
            };
            if !holds {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            q: self.q,
            constraints: self
                .constraints
                .iter()
                .map(|c| PredicateJson::from_constraint(c))
                .collect(),
        }
    }

    pub fn from_json(j: &FamilyJson) -> Result<Self> {
        let constraints = j
            .constraints
            .iter()
            .map(PredicateJson::to_constraint)
            .collect::<Result<Vec<_>>>()?;
        if constraints.iter().any(|c| c.predicate.q() != j.q) {
            return Err(Error::Domain("constraint q differs from family q".into()));
        }
        Ok(Self {
            q: j.q,
            constraints,
        })
    }
}

/// Parses a document that must contain exactly one non-strict inequality.
pub fn parse_predicate(text: &str) -> Result<PolynomialPredicate> {
    let mut fam = Family::parse(text)?;
    match fam.constraints.len() {
        1 if !fam.constraints[0].strict => Ok(fam.constraints.pop().unwrap().predicate),
        1 => Err(Error::Domain("expected a non-strict inequality".into())),
        n => Err(Error::Domain(format!("expected one inequality, found {n}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub xexp: Vec<u32>,
    pub yexp: Vec<u32>,
    pub coef: String,
}

/// Canonical export of one constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateJson {
    pub q: usize,
    pub d: u32,
    pub terms: Vec<TermJson>,
    pub strict: bool,
}

impl PredicateJson {
    pub fn from_constraint(c: &Constraint) -> Self {
        let p = &c.predicate;
        Self {
            q: p.q(),
            d: p.degree(),
            terms: p
                .terms()
                .iter()
                .map(|((a, b), coef)| TermJson {
                    xexp: a.clone(),
                    yexp: b.clone(),
                    coef: coef.to_string(),
                })
                .collect(),
            strict: c.strict,
        }
    }

    pub fn to_constraint(&self) -> Result<Constraint> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let c: BigInt = t
                    .coef
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad coefficient {:?}", t.coef)))?;
                Ok(((t.xexp.clone(), t.yexp.clone()), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Constraint {
            predicate: PolynomialPredicate::new(self.q, terms)?,
            strict: self.strict,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub q: usize,
    pub constraints: Vec<PredicateJson>,
}
