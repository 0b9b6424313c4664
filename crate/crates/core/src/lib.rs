//! Time as a dynamical variable: classical brackets on `(q, p, t, s)` grids and
//! the quantized counterpart on `H_space ⊗ H_clock`.
//!
//! Everything is generic over [`scalar::Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`.
//!
//! ```
//! use timeop_core::{dynamics, Clock, Hbar, Space};
//! use nalgebra::DMatrix;
//! use num_complex::Complex64;
//!
//! let hbar = Hbar::new(1.0)?;
//! let n = 32;
//! let clock = Clock::build(n, std::f64::consts::TAU / n as f64, hbar)?; // ladder step 1
//! let space = Space::from_energies(&[0.0, 1.0], hbar)?;
//! let c = DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0));
//! let (_, rho) = dynamics::solve_stationary(&space, &clock, &c, &[0, 1], 0.0)?;
//! assert!(dynamics::vn_residual(&rho, &space, &clock)? < 1e-12);
//! # Ok::<(), timeop_core::Error>(())
//! ```

// `!(x > 0)` is how NaN gets rejected along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod clock;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod scalar;
pub mod weylprod;

pub use error::{Error, Result};
pub use scalar::{Hbar, Real};

pub type Operator = hilbert::ComplexOperator<f64>;
pub type State = hilbert::StateVector<f64>;
pub type Eigen = hilbert::EigenSystem<f64>;
pub type Clock = clock::ClockSpace<f64>;
pub type Space = dynamics::SpaceSystem<f64>;
pub type Solution = dynamics::SpectralSolution<f64>;
pub type Poly = weylprod::PolyOp<f64>;
pub type Field = classical::PhaseField<f64>;
pub type PhaseGrid = classical::Grid<f64>;
