//! Statevector simulation of the quantum lattice-Boltzmann method with
//! bounce-back obstacles and quantum momentum-exchange force measurement.
//!
//! * [`lattice`]: DdQq velocity sets, box obstacles, boundary links.
//! * [`classical`]: the classical LBM reference used as ground truth.
//! * [`engine`]: the statevector simulator and its gate set.
//! * [`circuits`]: encoding and the per-timestep bounce-back circuits.
//! * [`qmem`]: force measurement by diagonal observable or by ancilla readout.
//! * [`config`] and [`run`]: the batch driver behind the `qlbm` binary.

pub mod circuits;
pub mod classical;
pub mod config;
pub mod engine;
pub mod error;
pub mod lattice;
pub mod qmem;
pub mod run;

pub use error::{QlbmError, Result};
