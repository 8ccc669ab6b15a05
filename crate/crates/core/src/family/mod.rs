//! Family specifications, the monomial lift, and exact reduction to a diagonal form.

mod basis;
mod direct;
mod form;
mod poly;
mod predicate;
mod sign;

pub use basis::{veronese_lift, MonomialBasis};
pub use direct::DirectSigns;
pub use form::{
    congruence_diagonalize, to_bilinear, BilinearForm, DiagonalizedForm, ReducedPredicate,
};
pub use poly::{Comparison, Poly};
pub use predicate::{
    parse_predicate, Constraint, Family, FamilyJson, PolynomialPredicate, PredicateJson, TermJson,
    TermKey,
};
pub use sign::{EdgeSign, PreparedPoints, SignMatrix};

/// Parses a family-spec document.
pub fn parse_family(text: &str) -> crate::Result<Family> {
    Family::parse(text)
}
