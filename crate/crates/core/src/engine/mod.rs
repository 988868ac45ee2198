//! Exact statevector simulator with the small gate set the QLBM circuits use:
//! multi-controlled X with mixed polarities, controlled phase, subregister
//! QFT, and the shift/comparator blocks assembled from them.

pub mod arith;
pub mod gate;
pub mod layout;
pub mod measure;
pub mod state;

pub use arith::{controlled_shift, flag_in_range, push_controlled_add, push_flag_in_range};
pub use gate::{value_controls, Circuit, Control, Gate, GateCounts};
pub use layout::RegisterLayout;
pub use measure::{ancilla_probability, expectation, marginal_distribution, sample_shots, DiagonalObservable};
pub use state::StateVector;

/// Statevector plus the total mass `sum f` fixed at encoding time.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumFlowState {
    pub state: StateVector,
    pub total_mass: f64,
}
