//! Shared fixtures for the criterion benches.

use sagl::family::{BilinearForm, PreparedPoints, ReducedPredicate, SignMatrix};
use sagl::harness::{
    encode_constraint, gated_instance, ConstraintEncoding, InstanceSpec, PreparedConstraint,
};
use sagl::partition::HierarchyParams;
use sagl::rational::ratio;
use sagl::{Family, Rational};

/// A gated instance with its single constraint prepared.
pub struct Fixture {
    pub family: Family,
    pub points: Vec<Vec<Rational>>,
    pub prepared: PreparedConstraint,
}

impl Fixture {
    pub fn new(spec: &InstanceSpec) -> Self {
        let (family, points, mut prepared, _) =
            gated_instance(spec, 16).expect("instance passes the gate");
        Self {
            family,
            points,
            prepared: prepared.remove(0),
        }
    }

    pub fn reduced(&self) -> &ReducedPredicate {
        &self.prepared.reduced
    }

    pub fn sign_matrix(&self) -> SignMatrix {
        SignMatrix::compute(
            &PreparedPoints::new(self.reduced(), &self.points).expect("points match q"),
        )
    }

    pub fn encode(&self) -> ConstraintEncoding {
        encode_constraint(self.prepared.clone(), HierarchyParams::default())
            .expect("encoding succeeds")
    }
}

/// Dense symmetric matrix with small rational entries, deterministic in `dim`.
pub fn symmetric_matrix(dim: usize) -> BilinearForm {
    let mut m = vec![vec![ratio(0, 1); dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let v = ratio(((i * 7 + j * 13) % 19) as i64 - 9, 1 + ((i + j) % 5) as i64);
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    BilinearForm { matrix: m }
}
