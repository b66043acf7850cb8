//! Exact differential algebra for derivations of `Q[x1, ..., xn]`.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] – rational scalars and fraction-free dense elimination.
//! * [`poly`] – sparse multivariate polynomials in a named variable context.
//! * [`derivation`] – derivations `D = sum a_i d/dx_i`, brackets, local
//!   nilpotency, exponentials, Darboux and bounded-degree kernel/image solves.
//! * [`automorphism`] – tame polynomial automorphisms, conjugation of
//!   derivations, isotropy membership and a few heuristics on them.
//! * [`simplicity`] – degree-stamped simplicity certificates, tower
//!   extensions and bounded-degree centralizers.
//! * [`cli`] – expression parser, example registry and report emission.
//!
//! Every "certificate" produced here is bounded by an explicit degree; none
//! of them decides simplicity outright.

pub mod automorphism;
pub mod cli;
pub mod derivation;
pub mod linalg;
pub mod poly;
pub mod simplicity;

pub use automorphism::{Automorphism, ElementaryGen};
pub use derivation::{Derivation, LndStatus, LndWitness};
pub use linalg::{ExactScalar, QMatrix};
pub use poly::{Monomial, Poly, VarContext};
