use thiserror::Error;

use crate::poly::IntPoly;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{dividend} is not divisible by {divisor} in Z[q] (remainder {remainder})")]
    NotDivisible {
        dividend: IntPoly,
        divisor: IntPoly,
        remainder: IntPoly,
    },
    #[error("denominator {0} does not have constant term ±1")]
    NotInP(IntPoly),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("malformed Coxeter matrix: {0}")]
    BadMatrix(String),
    #[error("group enumeration exceeded the cap of {cap} elements; the group is infinite or too large")]
    NonFiniteGroup { cap: usize },
    #[error("no exact faithful action available for this matrix: {0}")]
    Unsupported(String),
    #[error("unknown Coxeter type {0:?}")]
    UnknownType(String),
    #[error("element {d} is not a minimal double coset representative")]
    NotDistinguished { d: usize },
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HeckeError {
    #[error("m = {m} is out of range 1..={max}")]
    OutOfRange { m: usize, max: usize },
    #[error("generator expansion failed: {0}")]
    NoExpansion(String),
    #[error("not a maximal chain of subsets: {0}")]
    BadChain(String),
    #[error("KL cache fingerprint mismatch: file has {found}, system is {expected}")]
    FingerprintMismatch { expected: String, found: String },
    #[error("KL cache I/O: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EndoError {
    #[error("element is not in the image of left multiplication by x_J")]
    NotInImage,
    #[error("hom value is not in the span of the double coset basis")]
    NotInSpan,
    #[error("composition mismatch: target {target:?} does not match source {start:?}")]
    NotComposable { target: u32, start: u32 },
    #[error("subsets {0:?} and {1:?} are not a covering pair")]
    NotCovering(u32, u32),
    #[error("factorization did not terminate within {0} steps")]
    NonTermination(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuiverError {
    #[error("torsion relations are implemented only for dihedral groups and type A3")]
    UnsupportedTorsion,
    #[error("paths are not composable")]
    NotComposable,
    #[error("no rewrite rule applies to non-standard path {0}")]
    StuckPath(String),
    #[error("cannot parse path {0:?}: {1}")]
    Parse(String, String),
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum VerifyError {
    #[error("unknown check family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}
