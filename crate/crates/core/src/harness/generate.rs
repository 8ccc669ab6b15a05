use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::rational::Rational;

/// Coordinates are multiples of `2^-16`.
pub const DENOMINATOR_BITS: u32 = 16;

/// Side of the square holding unit-disk and disk centers; puts edge density near 0.4.
const SQUARE_SIDE: f64 = 5.6;

/// A reproducible instance: same spec, same points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    /// `unit-disk`, `disk` or `dot-product`.
    pub family: String,
    pub n: usize,
    pub seed: u64,
    /// Ambient dimension of the dot-product family.
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// Threshold `t` of the dot-product family `x . y >= t`.
    #[serde(default)]
    pub threshold: i64,
}

fn default_dim() -> usize {
    2
}

impl InstanceSpec {
    pub fn new(family: &str, n: usize, seed: u64) -> Self {
        Self {
            family: family.into(),
            n,
            seed,
            dim: default_dim(),
            threshold: 0,
        }
    }

    pub fn dot_product(dim: usize, n: usize, seed: u64) -> Self {
        Self {
            dim,
            ..Self::new("dot-product", n, seed)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinFamily {
    UnitDisk,
    Disk,
    DotProduct { dim: usize, threshold: i64 },
}

impl BuiltinFamily {
    pub fn from_spec(spec: &InstanceSpec) -> Result<Self> {
        match spec.family.as_str() {
            "unit-disk" => Ok(Self::UnitDisk),
            "disk" => Ok(Self::Disk),
            "dot-product" if spec.dim >= 1 => Ok(Self::DotProduct {
                dim: spec.dim,
                threshold: spec.threshold,
            }),
            "dot-product" => Err(Error::Domain("dot-product needs dim >= 1".into())),
            other => Err(Error::UnknownFamily(other.into())),
        }
    }

    pub fn q(&self) -> usize {
        match self {
            Self::UnitDisk => 2,
            Self::Disk => 3,
            Self::DotProduct { dim, .. } => *dim,
        }
    }

    /// Family-spec document of the predicate.
    pub fn spec_text(&self) -> String {
        match self {
            Self::UnitDisk => "q=2\n(x1-y1)^2 + (x2-y2)^2 <= 4\n".into(),
            Self::Disk => "q=3\n(x1-y1)^2 + (x2-y2)^2 <= (x3+y3)^2\n".into(),
            Self::DotProduct { dim, threshold } => {
                let sum: Vec<String> = (1..=*dim).map(|i| format!("x{i}*y{i}")).collect();
                format!("q={dim}\n{} >= {threshold}\n", sum.join(" + "))
            }
        }
    }

    pub fn family(&self) -> Family {
        Family::parse(&self.spec_text()).expect("built-in family parses")
    }

    /// `n` distinct points.
    pub fn points(&self, n: usize, seed: u64) -> Vec<Vec<Rational>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 1i64 << DENOMINATOR_BITS;
        let mut coord = |lo: f64, hi: f64| {
            let v = rng.gen_range((lo * scale as f64) as i64..=(hi * scale as f64) as i64);
            Rational::new(BigInt::from(v), BigInt::from(scale))
        };
        let half = SQUARE_SIDE / 2.0;
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let p: Vec<Rational> = match self {
                Self::UnitDisk => vec![coord(-half, half), coord(-half, half)],
                Self::Disk => vec![coord(-half, half), coord(-half, half), coord(0.5, 1.5)],
                Self::DotProduct { dim, .. } => (0..*dim).map(|_| coord(-1.0, 1.0)).collect(),
            };
            // repeated points would share a lift and could not be separated
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        out
    }
}

/// Points of an instance, without the general-position check.
pub fn generate_instance(spec: &InstanceSpec) -> Result<Vec<Vec<Rational>>> {
    Ok(BuiltinFamily::from_spec(spec)?.points(spec.n, spec.seed))
}

/// Seed used for the `k`-th resample of an instance.
pub fn resample_seed(seed: u64, k: u32) -> u64 {
    if k == 0 {
        seed
    } else {
        seed ^ (k as u64)
            .wrapping_mul(0xd134_2543_de82_ef95)
            .rotate_left(17)
    }
}
