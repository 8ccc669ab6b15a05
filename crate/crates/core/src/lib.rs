//! Adjacency labels for graphs defined by a symmetric polynomial inequality on points.
//!
//! A predicate `f(x, y) >= 0` is lifted to a bilinear form, diagonalized over the
//! rationals and turned into a point-versus-hyperplane incidence problem in `R^Q`.
//! A recursive partition with a common apex per node then yields, for every vertex,
//! an address and a decision tree from which any two labels decode their adjacency.

pub mod baseline;
pub mod bits;
pub mod bounds;
pub mod error;
pub mod family;
pub mod harness;
pub mod labeling;
pub mod partition;
pub mod rational;

pub use baseline::{trivial_decode, trivial_encode, TrivialLabel};
pub use bits::BitString;
pub use error::{Error, Result};
pub use family::{EdgeSign, Family, PolynomialPredicate, ReducedPredicate, SignMatrix};
pub use harness::{encode, Encoding, InstanceSpec, RunParams, RunReport};
pub use labeling::{decode, Address, LabelHeader, LabelTree, VertexLabel};
pub use partition::{BalanceMode, HierarchyParams, HierarchyTree};
pub use rational::Rational;
