//! Exact construction of time-space harmonic polynomials for Lévy processes.
//!
//! A polynomial `Q(x, t)` is time-space harmonic relative to a process `X`
//! when `Q(X_t, t)` is a martingale. For a centered Lévy process with enough
//! moments, a full family `Q_n` can be built from the cumulant data of the
//! process: the Gaussian variance `σ²` and the moments `m_k` of the Lévy
//! measure. This crate constructs `Q_n` by several independent routes over
//! exact rational arithmetic, relates them to the classical Hermite, Charlier
//! and Laguerre families, builds the Kailath-Segall polynomials expressing
//! iterated integrals in terms of path variations, and verifies the
//! martingale and orthogonality claims by seeded Monte Carlo simulation.
//!
//! Module map:
//! - [`poly`], [`series`], [`render`]: sparse multivariate polynomials with
//!   `BigRational` coefficients, truncated exponential-generating-function
//!   series, and plain/LaTeX/JSON output.
//! - [`gamma`]: the cumulant-to-moment polynomials `Γ_n` and their identities.
//! - [`models`]: Lévy process specifications (cumulant data plus samplers).
//! - [`harmonic`]: the `Q_n` family, classical-family oracles, and span checks.
//! - [`kailath_segall`]: the `P_n` family and its numeric evaluation.
//! - [`sim`]: seeded path simulation and Monte Carlo verdicts.
//! - [`selftest`]: the deterministic symbolic identity suite.

pub mod error;
pub mod gamma;
pub mod harmonic;
pub mod kailath_segall;
pub mod limits;
pub mod models;
pub mod poly;
pub mod rat;
pub mod render;
pub mod scalar;
pub mod selftest;
pub mod series;
pub mod sim;
pub mod vars;

pub use error::{Error, Result};
pub use poly::{Monomial, SparsePoly, VarId};
