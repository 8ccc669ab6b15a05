//! Heuristic deep points: a cheap stand-in for an exact centerpoint.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lifted::LiftedPointSet;
use crate::rational::Rational;

/// Returns a point of high estimated halfspace depth among `members`.
///
/// With one coordinate this is the exact lower median. Otherwise candidates from the
/// coordinate-wise median, the mean and iterated Radon points are scored against a
/// sampled set of directions and the deepest one wins.
pub fn centerpoint_estimate(pts: &LiftedPointSet, members: &[usize], seed: u64) -> Vec<Rational> {
    assert!(!members.is_empty(), "centerpoint of an empty set");
    let dim = pts.dim();
    if dim == 1 {
        let mut vals: Vec<&Rational> = members.iter().map(|&m| &pts.point(m)[0]).collect();
        vals.sort();
        return vec![vals[(vals.len() - 1) / 2].clone()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cloud: Vec<&[f64]> = members.iter().map(|&m| pts.approx(m)).collect();

    let mut candidates = vec![coordinate_median(&cloud), mean(&cloud)];
    for _ in 0..4 {
        if let Some(c) = iterated_radon(&cloud, &mut rng) {
            candidates.push(c);
        }
    }
    let directions: Vec<Vec<f64>> = (0..128).map(|_| random_unit(dim, &mut rng)).collect();
    let best = candidates
        .into_iter()
        .map(|c| (depth_estimate(&cloud, &c, &directions), c))
        .max_by_key(|(d, _)| *d)
        .map(|(_, c)| c)
        .unwrap();
    best.into_iter()
        .map(|v| Rational::from_float(v).unwrap_or_default())
        .collect()
}

fn coordinate_median(cloud: &[&[f64]]) -> Vec<f64> {
    let dim = cloud[0].len();
    (0..dim)
        .map(|k| {
            let mut v: Vec<f64> = cloud.iter().map(|p| p[k]).collect();
            v.sort_by(f64::total_cmp);
            v[(v.len() - 1) / 2]
        })
        .collect()
}

fn mean(cloud: &[&[f64]]) -> Vec<f64> {
    let dim = cloud[0].len();
    let n = cloud.len() as f64;
    (0..dim)
        .map(|k| cloud.iter().map(|p| p[k]).sum::<f64>() / n)
        .collect()
}

fn random_unit(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Minimum closed-halfspace count over the sampled directions.
fn depth_estimate(cloud: &[&[f64]], c: &[f64], directions: &[Vec<f64>]) -> usize {
    directions
        .iter()
        .map(|v| {
            let (mut pos, mut neg) = (0, 0);
            for p in cloud {
                let s: f64 = p.iter().zip(c).zip(v).map(|((a, b), w)| (a - b) * w).sum();
                if s >= 0.0 {
                    pos += 1;
                }
                if s <= 0.0 {
                    neg += 1;
                }
            }
            pos.min(neg)
        })
        .min()
        .unwrap_or(0)
}

fn iterated_radon(cloud: &[&[f64]], rng: &mut impl Rng) -> Option<Vec<f64>> {
    let dim = cloud[0].len();
    let group = dim + 2;
    let mut level: Vec<Vec<f64>> = {
        let target = group.pow(3).min(cloud.len().max(group));
        let mut idx: Vec<usize> = (0..cloud.len()).collect();
        idx.shuffle(rng);
        (0..target)
            .map(|i| cloud[idx[i % idx.len()]].to_vec())
            .collect()
    };
    while level.len() >= group {
        let next: Vec<Vec<f64>> = level.chunks_exact(group).filter_map(radon_point).collect();
        if next.is_empty() {
            return None;
        }
        level = next;
    }
    level.into_iter().next()
}

/// Radon point of `dim + 2` points, via a null vector of the affine dependence system.
fn radon_point(pts: &[Vec<f64>]) -> Option<Vec<f64>> {
    let dim = pts[0].len();
    let m = pts.len();
    // rows: coordinates then the all-ones row; columns: points
    let mut a: Vec<Vec<f64>> = (0..dim)
        .map(|k| pts.iter().map(|p| p[k]).collect())
        .chain(std::iter::once(vec![1.0; m]))
        .collect();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m {
        if r == rows {
            break;
        }
        let p = (r..rows).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-12 {
            continue;
        }
        a.swap(r, p);
        let pv = a[r][c];
        for v in a[r].iter_mut() {
            *v /= pv;
        }
        for i in 0..rows {
            if i != r {
                let f = a[i][c];
                if f != 0.0 {
                    for k in 0..m {
                        a[i][k] -= f * a[r][k];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..m).find(|c| !pivots.contains(c))?;
    let mut lambda = vec![0.0; m];
    lambda[free] = 1.0;
    for (row, &pc) in pivots.iter().enumerate() {
        lambda[pc] = -a[row][free];
    }
    let wsum: f64 = lambda.iter().filter(|&&l| l > 0.0).sum();
    if wsum <= 0.0 {
        return None;
    }
    Some(
        (0..dim)
            .map(|k| {
                pts.iter()
                    .zip(&lambda)
                    .filter(|(_, &l)| l > 0.0)
                    .map(|(p, l)| p[k] * l)
                    .sum::<f64>()
                    / wsum
            })
            .collect(),
    )
}
