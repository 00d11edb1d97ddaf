//! Operator theory on the symmetrized bidisc Γ.
//!
//! Finite-dimensional tools for pairs of commuting matrices `(S, P)`:
//! membership of points in Γ, numerical radii, fundamental operators,
//! Γ-unitary / Γ-isometry / Γ-contraction tests, characteristic functions
//! and model spaces, dilations, and Beurling–Lax–Halmos data.

pub mod blh;
pub mod classify;
pub mod cli;
pub mod defect;
pub mod dilation;
pub mod error;
pub mod gamma_point;
pub mod hardy;
pub mod io;
pub mod linalg;
pub mod numrad;
pub mod suite;

pub use classify::{classify, fundamental_op, Kind, OperatorPair};
pub use error::{Error, Result};
pub use gamma_point::{in_gamma, GammaPoint};
pub use linalg::{ComplexMatrix, ComplexVector, Tolerance};
