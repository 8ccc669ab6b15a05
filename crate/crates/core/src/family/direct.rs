use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::predicate::PolynomialPredicate;
use super::sign::EdgeSign;
use crate::error::{Error, Result};
use crate::rational::{clear_denominators, Rational};

/// Term-by-term evaluation of `f` on integer-scaled monomials, independent of the
/// bilinear reduction. Each point is written as `X / D`, and every monomial `x^a` is
/// replaced by `X^a D^(e - |a|)` with `e` the lift degree, which scales `f(x, y)` by a
/// positive factor.
#[derive(Clone, Debug)]
pub struct DirectSigns {
    terms: Vec<(usize, usize, BigInt)>,
    monomials: Vec<Vec<BigInt>>,
    small: Option<(Vec<i128>, Vec<Vec<i128>>)>,
}

impl DirectSigns {
    pub fn new(pred: &PolynomialPredicate, points: &[Vec<Rational>]) -> Result<Self> {
        let mut exps: Vec<Vec<u32>> = pred
            .terms()
            .keys()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        exps.sort();
        exps.dedup();
        let index = |e: &Vec<u32>| exps.binary_search(e).unwrap();
        let terms: Vec<(usize, usize, BigInt)> = pred
            .terms()
            .iter()
            .map(|((a, b), c)| (index(a), index(b), c.clone()))
            .collect();
        let e = pred.lift_degree();
        if let Some(p) = points.iter().find(|p| p.len() != pred.q()) {
            return Err(Error::DimensionMismatch {
                expected: pred.q(),
                got: p.len(),
            });
        }
        let monomials: Vec<Vec<BigInt>> = points
            .par_iter()
            .map(|p| {
                let (d, xs) = clear_denominators(p);
                exps.iter()
                    .map(|a| {
                        let deg: u32 = a.iter().sum();
                        xs.iter().zip(a).fold(
                            num_traits::pow(d.clone(), (e - deg) as usize),
                            |acc, (x, &k)| acc * num_traits::pow(x.clone(), k as usize),
                        )
                    })
                    .collect()
            })
            .collect();
        let cbits = terms.iter().map(|t| t.2.bits()).max().unwrap_or(0);
        let mbits = monomials
            .iter()
            .flatten()
            .map(|m| m.bits())
            .max()
            .unwrap_or(0);
        let tbits = 64 - (terms.len() as u64).leading_zeros() as u64;
        let small = (cbits + 2 * mbits + tbits < 126).then(|| {
            let to = |v: &BigInt| v.to_i128().expect("bounded by bit count");
            (
                terms.iter().map(|t| to(&t.2)).collect(),
                monomials
                    .iter()
                    .map(|m| m.iter().map(to).collect())
                    .collect(),
            )
        });
        Ok(Self {
            terms,
            monomials,
            small,
        })
    }

    pub fn sign(&self, i: usize, j: usize) -> EdgeSign {
        if let Some((coefs, mono)) = &self.small {
            let v: i128 = self
                .terms
                .iter()
                .zip(coefs)
                .map(|(&(a, b, _), c)| c * mono[i][a] * mono[j][b])
                .sum();
            return EdgeSign::of_i128(v);
        }
        let v = self.terms.iter().fold(BigInt::zero(), |acc, (a, b, c)| {
            acc + c * &self.monomials[i][*a] * &self.monomials[j][*b]
        });
        if v.is_positive() {
            EdgeSign::Positive
        } else if v.is_negative() {
            EdgeSign::Negative
        } else {
            EdgeSign::Zero
        }
    }
}
