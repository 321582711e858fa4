//! Exact arithmetic for Hecke algebras of finite Coxeter groups, their
//! endomorphism algebras of parabolic permutation modules, and presentations
//! of those endomorphism algebras by the Hasse quiver of finitary subsets.

pub mod coxeter;
pub mod endo;
pub mod error;
pub mod exec;
pub mod hecke;
pub mod poly;
pub mod quiver;
pub mod verify;

pub use coxeter::{CoxeterSystem, GroupElement, Subset};
pub use endo::{EndoAlgebra, HomElement, RHom, ZBElement};
pub use exec::Exec;
pub use hecke::{HeckeAlgebra, HeckeElement, KLCache};
pub use poly::{Frac, IntPoly, PFraction};
pub use quiver::{HasseQuiver, Path, PathElement};
pub use verify::{Check, Options, Report};
