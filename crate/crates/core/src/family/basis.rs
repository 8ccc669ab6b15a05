use std::collections::HashMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// All exponent vectors of total degree `<= d` in `q` variables, graded, and
/// lexicographically descending within each degree: `1, x1, x2, x1^2, x1x2, x2^2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    q: usize,
    d: u32,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(q: usize, d: u32) -> Self {
        let mut monomials = Vec::new();
        for deg in 0..=d {
            let mut cur = vec![0; q];
            push_degree(&mut monomials, &mut cur, 0, deg);
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Self {
            q,
            d,
            monomials,
            index,
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn index_of(&self, exponent: &[u32]) -> Option<usize> {
        self.index.get(exponent).copied()
    }

    /// Evaluates every monomial at `point`; entry 0 is always 1.
    pub fn lift(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        if point.len() != self.q {
            return Err(Error::DimensionMismatch {
                expected: self.q,
                got: point.len(),
            });
        }
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .map(|v| {
                let mut p = vec![Rational::one()];
                for k in 1..=self.d as usize {
                    let next = &p[k - 1] * v;
                    p.push(next);
                }
                p
            })
            .collect();
        Ok(self
            .monomials
            .iter()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .fold(Rational::one(), |acc, (i, &k)| acc * &powers[i][k as usize])
            })
            .collect())
    }
}

fn push_degree(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, var: usize, left: u32) {
    if var + 1 == cur.len() {
        cur[var] = left;
        out.push(cur.clone());
        cur[var] = 0;
        return;
    }
    for k in (0..=left).rev() {
        cur[var] = k;
        push_degree(out, cur, var + 1, left - k);
    }
    cur[var] = 0;
}

/// Veronese lift of `point` in `basis`.
pub fn veronese_lift(point: &[Rational], basis: &MonomialBasis) -> Result<Vec<Rational>> {
    basis.lift(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn binom(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    #[test]
    fn sizes_match_binomial() {
        for q in 1..5 {
            for d in 0..5 {
                let b = MonomialBasis::new(q, d);
                assert_eq!(b.len() as u64, binom(q as u64 + d as u64, d as u64));
                assert!(b.monomials()[0].iter().all(|&e| e == 0));
            }
        }
    }

    #[test]
    fn graded_lex_order() {
        let b = MonomialBasis::new(2, 2);
        assert_eq!(
            b.monomials(),
            &[
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
    }

    #[test]
    fn lift_examples() {
        let b = MonomialBasis::new(1, 1);
        assert_eq!(veronese_lift(&[int(5)], &b).unwrap(), vec![int(1), int(5)]);
        let b = MonomialBasis::new(2, 2);
        let expect: Vec<_> = [1, 2, 3, 4, 6, 9].into_iter().map(int).collect();
        assert_eq!(veronese_lift(&[int(2), int(3)], &b).unwrap(), expect);
        let zero: Vec<_> = [1, 0, 0, 0, 0, 0].into_iter().map(int).collect();
        assert_eq!(veronese_lift(&[int(0), int(0)], &b).unwrap(), zero);
        assert!(matches!(
            veronese_lift(&[int(1)], &b),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }
}
