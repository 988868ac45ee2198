//! Quantum momentum-exchange force measurement.
//!
//! Two routes give the same force:
//!
//! * a diagonal observable per axis and sign, with weight 2 on every
//!   boundary-link basis state `|x_f, e_i>`, read on the pre-stream state;
//! * the momentum ancillae `a_{o,+}` / `a_{o,-}`, flipped on in-object states
//!   by velocity sign right after object flagging, read as one-qubit
//!   probabilities (exactly or from shots).
//!
//! Both are rescaled by the stored total mass.

use std::fmt;

use crate::circuits::{build_momentum_flags, velocity_bits};
use crate::engine::{
    ancilla_probability, expectation, sample_shots, DiagonalObservable, QuantumFlowState, RegisterLayout, StateVector,
};
use crate::error::{QlbmError, Result};
use crate::lattice::DomainGeometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementMode {
    /// Exact expectation of the diagonal observables.
    Observable,
    /// Exact momentum-ancilla probabilities.
    Ancilla,
    /// Momentum ancillae sampled with a finite number of shots.
    Shots,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceMeasurementConfig {
    pub mode: MeasurementMode,
    pub shots: Option<u64>,
    pub seed: u64,
    /// Target precision, reported only.
    pub epsilon: Option<f64>,
}

impl ForceMeasurementConfig {
    pub fn exact(mode: MeasurementMode) -> Self {
        Self {
            mode,
            shots: None,
            seed: 0,
            epsilon: None,
        }
    }

    pub fn shots(shots: u64, seed: u64) -> Self {
        Self {
            mode: MeasurementMode::Shots,
            shots: Some(shots),
            seed,
            epsilon: None,
        }
    }
}

/// Per-axis force with its shot standard error and the per-sign
/// probabilities it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceVector {
    pub components: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Probability mass of the `+` links (observable mode: `<O_{j,+}>/2`).
    pub p_plus: Vec<f64>,
    pub p_minus: Vec<f64>,
}

impl ForceVector {
    fn zeros(d: usize) -> Self {
        Self {
            components: vec![0.0; d],
            stderr: vec![0.0; d],
            p_plus: vec![0.0; d],
            p_minus: vec![0.0; d],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Diagonal observable with entry 2 at every `|0_anc, x_f, bits(i)>` where
/// `(x_f, i)` is a boundary link with `(e_i)_axis = sign`.
pub fn build_observable(
    layout: &RegisterLayout,
    geometry: &DomainGeometry,
    axis: usize,
    sign: Sign,
) -> DiagonalObservable {
    let lat = geometry.lattice();
    let entries = geometry
        .boundary_links()
        .into_iter()
        .filter(|link| lat.velocity(link.velocity)[axis] == sign.value())
        .map(|link| {
            let cell = lat.cell_index(&link.fluid);
            (
                layout.basis_index(cell, velocity_bits(lat.velocity(link.velocity))),
                2.0,
            )
        })
        .collect();
    DiagonalObservable::new(layout.num_qubits(), entries)
}

/// `F_j = sum f * (<O_{j,+}> - <O_{j,-}>)` on the pre-stream state.
pub fn measure_force_observable(
    state: &QuantumFlowState,
    layout: &RegisterLayout,
    geometry: &DomainGeometry,
) -> ForceVector {
    let d = layout.dim();
    let mut out = ForceVector::zeros(d);
    for axis in 0..d {
        let plus = expectation(&state.state, &build_observable(layout, geometry, axis, Sign::Plus));
        let minus = expectation(&state.state, &build_observable(layout, geometry, axis, Sign::Minus));
        out.components[axis] = state.total_mass * (plus - minus);
        out.p_plus[axis] = plus / 2.0;
        out.p_minus[axis] = minus / 2.0;
    }
    out
}

/// Toggles the momentum ancillae for `axis`. Must run while `a_o` marks the
/// in-object states; a second call clears them again.
pub fn flag_momentum_ancillae(state: &mut StateVector, layout: &RegisterLayout, axis: usize) -> Result<()> {
    state.run(&build_momentum_flags(layout, axis)?)
}

/// Reads the force from the momentum ancillae at the tap point, one axis at a
/// time: flag, read, unflag. The state is returned unchanged.
///
/// `F_j = 2 sum f (P[a_{o,+} = 1] - P[a_{o,-} = 1])`. In shots mode the
/// two flags are sampled jointly and the error is that of the difference of
/// two multinomial frequencies.
pub fn measure_force_ancilla(
    state: &mut StateVector,
    total_mass: f64,
    layout: &RegisterLayout,
    config: &ForceMeasurementConfig,
) -> Result<ForceVector> {
    let d = layout.dim();
    let mut out = ForceVector::zeros(d);
    let shots = match config.mode {
        MeasurementMode::Shots => Some(config.shots.ok_or(QlbmError::MissingShots)?),
        _ => None,
    };
    for axis in 0..d {
        flag_momentum_ancillae(state, layout, axis)?;
        let (p_plus, p_minus, stderr) = match shots {
            None => (
                ancilla_probability(state, layout.a_plus(), true),
                ancilla_probability(state, layout.a_minus(), true),
                0.0,
            ),
            Some(m) => {
                let seed = config.seed.wrapping_add(axis as u64);
                let counts = sample_shots(state, &[layout.a_plus(), layout.a_minus()], m, seed)?;
                let mf = m as f64;
                let p = (counts[0b01] + counts[0b11]) as f64 / mf;
                let n = (counts[0b10] + counts[0b11]) as f64 / mf;
                let var = ((p + n - (p - n) * (p - n)) / mf).max(0.0);
                (p, n, 2.0 * total_mass * var.sqrt())
            }
        };
        flag_momentum_ancillae(state, layout, axis)?;
        out.components[axis] = 2.0 * total_mass * (p_plus - p_minus);
        out.stderr[axis] = stderr;
        out.p_plus[axis] = p_plus;
        out.p_minus[axis] = p_minus;
    }
    Ok(out)
}

/// Sparsity of one per-axis, per-sign observable.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSparsity {
    pub axis: usize,
    pub sign: Sign,
    pub nonzeros: usize,
}

/// Nonzero entries of every observable against the position-velocity
/// Hilbert dimension `2^(n_g + n_v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonzeroReport {
    pub dimension: usize,
    pub observables: Vec<ObservableSparsity>,
}

impl NonzeroReport {
    pub fn total_nonzeros(&self) -> usize {
        self.observables.iter().map(|o| o.nonzeros).sum()
    }

    pub fn ratio(&self) -> f64 {
        self.total_nonzeros() as f64 / self.dimension as f64
    }
}

pub fn nonzero_fraction_report(geometry: &DomainGeometry, layout: &RegisterLayout) -> NonzeroReport {
    let observables = (0..layout.dim())
        .flat_map(|axis| [Sign::Plus, Sign::Minus].map(|sign| (axis, sign)))
        .map(|(axis, sign)| ObservableSparsity {
            axis,
            sign,
            nonzeros: build_observable(layout, geometry, axis, sign).nonzeros(),
        })
        .collect();
    NonzeroReport {
        dimension: 1 << layout.num_system_qubits(),
        observables,
    }
}

impl fmt::Display for NonzeroReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<6} {:<5} {:>10} {:>12} {:>12}",
            "axis", "sign", "nonzeros", "dimension", "ratio"
        )?;
        for o in &self.observables {
            writeln!(
                f,
                "{:<6} {:<5} {:>10} {:>12} {:>12.3e}",
                o.axis + 1,
                if o.sign == Sign::Plus { "+" } else { "-" },
                o.nonzeros,
                self.dimension,
                o.nonzeros as f64 / self.dimension as f64
            )?;
        }
        write!(
            f,
            "{:<12} {:>10} {:>12} {:>12.3e}",
            "total",
            self.total_nonzeros(),
            self.dimension,
            self.ratio()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{encode_rooted, TimestepPlan};
    use crate::classical::ClassicalFlowField;
    use crate::lattice::{LatticeDescriptor, ObstacleBox};
    use std::sync::Arc;

    fn line4() -> Arc<DomainGeometry> {
        Arc::new(
            DomainGeometry::new(
                LatticeDescriptor::new(&[4]).unwrap(),
                vec![ObstacleBox::new(vec![2], vec![2])],
            )
            .unwrap(),
        )
    }

    #[test]
    fn line4_observable_single_entry() {
        let g = line4();
        let l = RegisterLayout::new(g.lattice());
        let o = build_observable(&l, &g, 0, Sign::Plus);
        assert_eq!(o.entries(), &[(6, 2.0)]);
        let dense = o.to_dense();
        assert_eq!(dense[..16].iter().filter(|&&v| v != 0.0).count(), 1);
        let m = build_observable(&l, &g, 0, Sign::Minus);
        assert_eq!(m.entries(), &[(l.basis_index(3, 0b11), 2.0)]);
    }

    #[test]
    fn no_obstacle_observable_empty() {
        let g = DomainGeometry::new(LatticeDescriptor::new(&[4, 4]).unwrap(), vec![]).unwrap();
        let l = RegisterLayout::new(g.lattice());
        assert_eq!(build_observable(&l, &g, 1, Sign::Minus).nonzeros(), 0);
        assert_eq!(nonzero_fraction_report(&g, &l).total_nonzeros(), 0);
    }

    #[test]
    fn line4_force_from_single_population() {
        let g = line4();
        let l = RegisterLayout::new(g.lattice());
        let mut f = ClassicalFlowField::zeros(g.clone());
        f.set(&[1], 1, 0.35);
        let s = encode_rooted(&f, &l).unwrap();
        let force = measure_force_observable(&s, &l, &g);
        assert!((force.components[0] - 0.7).abs() < 1e-14);
    }

    #[test]
    fn ancilla_route_line4() {
        let g = line4();
        let plan = TimestepPlan::new(g.clone()).unwrap();
        let l = plan.layout().clone();
        let mut f = ClassicalFlowField::zeros(g.clone());
        f.set(&[1], 1, 0.5);
        f.set(&[0], 0, 1.5);
        let mut s = encode_rooted(&f, &l).unwrap();
        let mass = s.total_mass;
        let mut forces = Vec::new();
        plan.step_with_tap(&mut s.state, |st| {
            forces.push(measure_force_ancilla(
                st,
                mass,
                &l,
                &ForceMeasurementConfig::exact(MeasurementMode::Ancilla),
            )?);
            Ok(())
        })
        .unwrap();
        assert!((forces[0].components[0] - 1.0).abs() < 1e-12);
        assert!((forces[0].p_plus[0] - 0.25).abs() < 1e-12);
        assert_eq!(forces[0].p_minus[0], 0.0);
    }

    #[test]
    fn shots_mode_requires_count() {
        let g = line4();
        let l = RegisterLayout::new(g.lattice());
        let mut s = StateVector::zero(l.num_qubits());
        let cfg = ForceMeasurementConfig {
            mode: MeasurementMode::Shots,
            shots: None,
            seed: 0,
            epsilon: None,
        };
        assert!(matches!(
            measure_force_ancilla(&mut s, 1.0, &l, &cfg),
            Err(QlbmError::MissingShots)
        ));
    }

    #[test]
    fn report_line4() {
        let g = line4();
        let l = RegisterLayout::new(g.lattice());
        let r = nonzero_fraction_report(&g, &l);
        assert_eq!(r.dimension, 16);
        assert_eq!(r.observables[0].nonzeros, 1);
        assert_eq!(r.total_nonzeros(), 2);
        assert!(r.to_string().contains("total"));
    }
}
