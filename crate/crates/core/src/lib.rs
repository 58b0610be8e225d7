//! Network Tikhonov (NETT) regularization for ill-posed inverse problems.
//!
//! The crate implements generalized Tikhonov minimization
//! `½‖F(x) − y_δ‖² + α·R(x)` with pluggable, possibly non-convex
//! regularizers:
//!
//! * [`grid`] — dense 2D grids, deterministic RNG, binary grid file format;
//! * [`operators`] — matrix-free forward operators with exact adjoints: a
//!   dense oracle operator and a subsampled circular-means tomography
//!   surrogate, plus filtered backprojection;
//! * [`regularizers`] — the value/gradient contract with weighted ℓq,
//!   non-convex ℓq over nonlinear features, and a trained encoder network
//!   regularizer;
//! * [`net`] — a small from-scratch encoder-decoder convolutional network
//!   with hand-written backpropagation and an SGD training loop;
//! * [`solver`] — incremental gradient descent on the Tikhonov functional,
//!   the regularization-parameter choice rule, and dense closed-form
//!   oracles;
//! * [`analysis`] — absolute Bregman distance, modulus of total
//!   nonlinearity, error-rate bounds and convergence-rate experiments;
//! * [`phantoms`] — random ellipse/blob phantoms, exact-norm noise
//!   injection and training-set construction.

pub mod analysis;
pub mod error;
pub mod grid;
pub(crate) mod linalg;
pub mod net;
pub mod operators;
pub mod phantoms;
pub mod regularizers;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{relative_error, Image, SeededRng, Sinogram};
pub use operators::{DenseOperator, FbpConfig, FbpFilter, ForwardOperator, PatOperator};
// pub use regularizers::Regularizer;
