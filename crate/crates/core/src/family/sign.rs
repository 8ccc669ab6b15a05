use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::form::ReducedPredicate;
use crate::error::Result;
use crate::rational::{clear_denominators, Rational};

/// Exact sign of `f(x, y)`. `Zero` counts as an edge but marks a degenerate pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeSign {
    Negative,
    Zero,
    Positive,
}

impl EdgeSign {
    pub fn of(v: &Rational) -> Self {
        Self::from_ord(v.cmp(&Rational::zero()))
    }

    pub(crate) fn of_i128(v: i128) -> Self {
        Self::from_ord(v.cmp(&0))
    }

    fn from_ord(o: std::cmp::Ordering) -> Self {
        match o {
            std::cmp::Ordering::Less => EdgeSign::Negative,
            std::cmp::Ordering::Equal => EdgeSign::Zero,
            std::cmp::Ordering::Greater => EdgeSign::Positive,
        }
    }

    pub fn is_edge(self) -> bool {
        self != EdgeSign::Negative
    }

    fn to_i8(self) -> i8 {
        match self {
            EdgeSign::Negative => -1,
            EdgeSign::Zero => 0,
            EdgeSign::Positive => 1,
        }
    }

    fn from_i8(v: i8) -> Self {
        Self::from_ord(v.cmp(&0))
    }
}

/// Reduced lifts of a vertex set with denominators cleared, ready for bulk sign queries.
///
/// Every reduced vector is scaled by a positive integer, and the diagonal by the
/// positive lcm of its denominators, so signs are unchanged. When all magnitudes are
/// small enough the products are taken in `i128`.
#[derive(Clone, Debug)]
pub struct PreparedPoints {
    pub reduced: Vec<Vec<Rational>>,
    weights: Vec<BigInt>,
    scaled: Vec<Vec<BigInt>>,
    small: Option<(Vec<i128>, Vec<Vec<i128>>)>,
}

impl PreparedPoints {
    pub fn new(pred: &ReducedPredicate, points: &[Vec<Rational>]) -> Result<Self> {
        let reduced = points
            .par_iter()
            .map(|p| pred.reduced_lift(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_reduced(&pred.form.diagonal, reduced))
    }

    pub fn from_reduced(diagonal: &[Rational], reduced: Vec<Vec<Rational>>) -> Self {
        let (_, weights) = clear_denominators(diagonal);
        let scaled: Vec<Vec<BigInt>> = reduced
            .par_iter()
            .map(|v| clear_denominators(v).1)
            .collect();
        let bits = |v: &BigInt| v.bits();
        let wbits = weights.iter().map(bits).max().unwrap_or(0);
        let xbits = scaled.iter().flatten().map(bits).max().unwrap_or(0);
        let qbits = 64 - (weights.len() as u64).leading_zeros() as u64;
        let small = (wbits + 2 * xbits + qbits < 126).then(|| {
            let to = |v: &BigInt| v.to_i128().expect("bounded by bit count");
            (
                weights.iter().map(to).collect(),
                scaled.iter().map(|v| v.iter().map(to).collect()).collect(),
            )
        });
        Self {
            reduced,
            weights,
            scaled,
            small,
        }
    }

    pub fn len(&self) -> usize {
        self.reduced.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reduced.is_empty()
    }

    pub fn sign(&self, i: usize, j: usize) -> EdgeSign {
        if let Some((w, s)) = &self.small {
            let v: i128 = w
                .iter()
                .zip(s[i].iter().zip(&s[j]))
                .map(|(w, (a, b))| w * a * b)
                .sum();
            return EdgeSign::from_ord(v.cmp(&0));
        }
        let v = self
            .weights
            .iter()
            .zip(self.scaled[i].iter().zip(&self.scaled[j]))
            .fold(BigInt::zero(), |acc, (w, (a, b))| acc + w * a * b);
        if v.is_positive() {
            EdgeSign::Positive
        } else if v.is_negative() {
            EdgeSign::Negative
        } else {
            EdgeSign::Zero
        }
    }
}

/// `n x n` table of exact edge signs; the diagonal is not consulted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    n: usize,
    data: Vec<i8>,
}

impl SignMatrix {
    pub fn compute(points: &PreparedPoints) -> Self {
        let n = points.len();
        let data = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                (0..n).map(move |j| if i == j { 0 } else { points.sign(i, j).to_i8() })
            })
            .collect();
        Self { n, data }
    }

    /// Builds from a symmetric adjacency relation; used by tests and the baseline codec.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> EdgeSign) -> Self {
        let mut data = vec![0i8; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let s = f(i, j).to_i8();
                data[i * n + j] = s;
                data[j * n + i] = s;
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> EdgeSign {
        EdgeSign::from_i8(self.data[i * self.n + j])
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        self.data[i * self.n + j] >= 0
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// First off-diagonal pair with a zero sign, if any.
    pub fn first_zero(&self) -> Option<(usize, usize)> {
        (0..self.n).find_map(|i| {
            (i + 1..self.n)
                .find(|&j| self.data[i * self.n + j] == 0)
                .map(|j| (i, j))
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.data[i * self.n + j] == self.data[j * self.n + i]))
    }

    /// Restriction to the given vertex ids, renumbered `0..ids.len()`.
    pub fn induced(&self, ids: &[usize]) -> Self {
        let m = ids.len();
        let mut data = vec![0i8; m * m];
        for (a, &i) in ids.iter().enumerate() {
            for (b, &j) in ids.iter().enumerate() {
                if a != b {
                    data[a * m + b] = self.data[i * self.n + j];
                }
            }
        }
        Self { n: m, data }
    }
}
