//! Computation of d-conormal spaces of affine varieties.
//!
//! For an affine variety `X ⊂ C^n` of dimension `k` and any `k ≤ d ≤ n-1`, the
//! d-conormal `C_d(X) ⊂ C^n × G(d,n)` is the closure of the pairs `(z, W)` where
//! `z` is a smooth point of `X` and `W` is a d-plane containing `T_z X`. The
//! case `d = k` is the Nash modification and `d = n-1` the classical conormal.
//!
//! The crate works chart by chart on `C^n × G(d,n)` and is split into:
//!
//! * [`exactpoly`]: polynomials over the rationals, Gröbner bases, elimination,
//!   saturation and radical membership.
//! * [`numlin`]: small dense complex linear algebra (projectors, subspace distance).
//! * [`grassmann`]: coordinate charts of the Grassmannian.
//! * [`distribution`]: the plane distribution `(z, W) ↦ W × T_W G(d,n)` as 1-forms.
//! * [`integrality`]: integral-subvariety tests and the characterization of `C_d(X)`.
//! * [`conormal`]: chart ideals of `C_d(X)`, fibers, dimension and transversality checks.
//! * [`whitney`]: Whitney condition a) and a numeric probe for condition w).
//! * [`polar`]: Schubert conditions and polar varieties.
//! * [`cli`]: file formats and JSON reports for the `dconormal` binary.

pub mod cli;
pub mod conormal;
pub mod distribution;
pub mod error;
pub mod exactpoly;
pub mod grassmann;
pub mod integrality;
pub mod numlin;
pub mod par;
pub mod polar;
pub mod sample;
pub mod whitney;

pub use error::{Error, Result};
