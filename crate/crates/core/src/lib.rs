//! Numerical laboratory for the energy functional
//! `F(X) = ∫‖∇X‖² / ∫‖X‖²` on tangent vector fields.
//!
//! The crate covers round spheres `S^n(1/k)` (exact covariant calculus on
//! ambient polynomial fields, Rayleigh–Ritz spectra of the rough Laplacian,
//! averaging over compact groups of isometries) and rotationally symmetric
//! warped products `ds² + f(s)² g_{S^{n-1}}` (radial Sturm–Liouville
//! reduction, curvature data, rigidity experiments).

pub mod acceptance;
pub mod eigen;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod parse;
pub mod poly;
pub mod quadrature;
pub mod radial;
pub mod rayleigh;
pub mod rng;
pub mod symmetrize;
pub mod tridiag;

pub use error::{Error, Result};
pub use fields::{AmbientPolyField, HopfAxis, VectorField};
pub use geometry::{SphereModel, TangentVector, WarpedProfile};
pub use quadrature::QuadratureRule;
pub use symmetrize::{GroupSpec, SymmetrizedField};

/// Dense column vector used for points and tangent vectors in ambient space.
pub type Vector = nalgebra::DVector<f64>;
/// Dense matrix used for group elements and Gram matrices.
pub type Matrix = nalgebra::DMatrix<f64>;
