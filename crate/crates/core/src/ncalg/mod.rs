//! Noncommutative side: words, relation-driven normal ordering, the Weyl map,
//! the star product and the brute-force action oracle.

mod ncpoly;
mod oracle;
mod rewrite;
mod space;
mod validate;

pub use ncpoly::NCPolynomial;
pub use rewrite::{RewriteSystem, Side};
pub use space::{
    collect, space_names, Calculus, GenId, GenKind, Generator, LinComb, Ordering, Relation, Section, SpaceDef,
    Word,
};
pub use validate::{validate_space, PbwCount, ValidationReport};
