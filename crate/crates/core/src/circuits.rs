//! QLBM circuits on the rooted-density encoding: streaming, object flagging,
//! bounce-back reversal and return, and the geometry-generated ancilla reset.
//!
//! A timestep runs the phases of [`TimestepPhase`] in declaration order.
//! After `flag_object` the object ancilla `a_o` marks every population that
//! streamed into a solid cell; this is where force measurement taps in.

use std::sync::Arc;

use num_complex::Complex64;

use crate::classical::ClassicalFlowField;
use crate::engine::{
    push_controlled_add, push_flag_in_range, value_controls, Circuit, Control, Gate, QuantumFlowState, RegisterLayout,
    StateVector,
};
use crate::error::{QlbmError, Result};
use crate::lattice::{DomainGeometry, LatticeDescriptor, ObstacleBox};

/// Amplitudes at or below this magnitude count as unpopulated.
pub const AMPLITUDE_EPS: f64 = 1e-14;

/// Velocity bits of lattice vector `e`: per axis `+1 -> (v, v_dir) = (1, 0)`,
/// `-1 -> (1, 1)`, `0 -> (0, 1)`. The pattern `(0, 0)` is never produced.
pub fn velocity_bits(e: &[i8]) -> usize {
    e.iter().enumerate().fold(0, |acc, (j, &c)| {
        let (v, dir) = match c {
            1 => (1, 0),
            -1 => (1, 1),
            _ => (0, 1),
        };
        acc | v << (2 * j + 1) | dir << (2 * j)
    })
}

/// Inverse of [`velocity_bits`]; `None` if some axis holds the unused `(0, 0)`.
pub fn bits_velocity(bits: usize, dim: usize) -> Option<Vec<i8>> {
    (0..dim)
        .map(|j| match (bits >> (2 * j + 1) & 1, bits >> (2 * j) & 1) {
            (1, 0) => Some(1),
            (1, 1) => Some(-1),
            (0, 1) => Some(0),
            _ => None,
        })
        .collect()
}

/// Basis-index lookup from velocity index to velocity bits.
fn velocity_bit_table(lattice: &LatticeDescriptor) -> Vec<usize> {
    lattice.velocities().iter().map(|e| velocity_bits(e)).collect()
}

/// Rooted-density encoding: amplitude `sqrt(f_i(x) / sum f)` at
/// `|ancillae = 0, x, bits(i)>`.
pub fn encode_rooted(field: &ClassicalFlowField, layout: &RegisterLayout) -> Result<QuantumFlowState> {
    let lat = field.lattice();
    let q = lat.q();
    let total_mass = field.total_mass();
    if !(total_mass > 0.0 && total_mass.is_finite()) {
        return Err(QlbmError::ZeroMass(total_mass));
    }
    let bits = velocity_bit_table(lat);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << layout.num_qubits()];
    for (slot, &f) in field.values().iter().enumerate() {
        if f < 0.0 {
            return Err(QlbmError::NegativeDensity {
                cell: slot / q,
                velocity: slot % q,
                value: f,
            });
        }
        if f > 0.0 {
            amps[layout.basis_index(slot / q, bits[slot % q])] = Complex64::new((f / total_mass).sqrt(), 0.0);
        }
    }
    Ok(QuantumFlowState {
        state: StateVector::from_amplitudes(amps)?,
        total_mass,
    })
}

/// First populated basis state with any ancilla bit set.
pub fn ancilla_violation(state: &StateVector, layout: &RegisterLayout) -> Option<(usize, f64)> {
    let mask = layout.ancilla_mask();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .find(|(i, a)| i & mask != 0 && a.norm() > AMPLITUDE_EPS)
        .map(|(i, a)| (i, a.norm()))
}

/// Reads the field back as `f_i(x) = sum f * |amplitude|^2`. Fails if any
/// populated state has an ancilla set or an unused velocity pattern.
pub fn decode(
    state: &QuantumFlowState,
    layout: &RegisterLayout,
    geometry: &Arc<DomainGeometry>,
) -> Result<ClassicalFlowField> {
    if let Some((index, magnitude)) = ancilla_violation(&state.state, layout) {
        return Err(QlbmError::AncillaEntangled { index, magnitude });
    }
    let lat = geometry.lattice();
    let q = lat.q();
    let mut slot_of_bits = vec![usize::MAX; 1 << layout.num_velocity_qubits()];
    for (i, b) in velocity_bit_table(lat).into_iter().enumerate() {
        slot_of_bits[b] = i;
    }
    let mut f = vec![0.0; lat.num_cells() * q];
    let system = 1usize << layout.num_system_qubits();
    for (index, a) in state.state.amplitudes()[..system].iter().enumerate() {
        if a.norm() <= AMPLITUDE_EPS {
            continue;
        }
        let (cell, bits) = layout.split_index(index);
        let i = slot_of_bits[bits];
        if i == usize::MAX || geometry.is_solid_cell(cell) {
            return Err(QlbmError::AncillaEntangled {
                index,
                magnitude: a.norm(),
            });
        }
        f[cell * q + i] = state.total_mass * a.norm_sqr();
    }
    ClassicalFlowField::new(geometry.clone(), f)
}

/// `a_v^j ^= v^j` on every axis. Self-inverse; also clears the flags.
pub fn build_stream_flags(layout: &RegisterLayout) -> Result<Circuit> {
    let mut c = Circuit::new();
    for j in 0..layout.dim() {
        c.push(Gate::mcx(vec![Control::on(layout.v(j))], layout.a_v(j))?);
    }
    Ok(c)
}

/// Position `x_j += 1` (v_dir^j = 0) or `-= 1` (v_dir^j = 1) where `a_v^j = 1`
/// and all `extra` controls match.
fn push_axis_streaming(c: &mut Circuit, layout: &RegisterLayout, extra: &[Control]) -> Result<()> {
    for j in 0..layout.dim() {
        for (dir, delta) in [(false, 1), (true, -1)] {
            let mut controls = extra.to_vec();
            controls.push(Control::on(layout.a_v(j)));
            controls.push(Control::when(layout.v_dir(j), dir));
            push_controlled_add(c, layout.position(j), delta, &controls)?;
        }
    }
    Ok(())
}

pub fn build_stream(layout: &RegisterLayout) -> Result<Circuit> {
    let mut c = Circuit::new();
    push_axis_streaming(&mut c, layout, &[])?;
    Ok(c)
}

/// Writes `[x_m in [lo_m, hi_m]]` into the per-axis scratch qubits. Applying
/// it twice clears them.
fn push_box_ranges(c: &mut Circuit, layout: &RegisterLayout, b: &ObstacleBox) -> Result<()> {
    for m in 0..layout.dim() {
        push_flag_in_range(
            c,
            layout.position(m),
            b.lower[m],
            b.upper[m],
            layout.carry(),
            layout.range_scratch(m),
        )?;
    }
    Ok(())
}

/// `a_o ^= [x inside some obstacle]`, one box at a time.
pub fn build_flag_object(layout: &RegisterLayout, geometry: &DomainGeometry) -> Result<Circuit> {
    let mut c = Circuit::new();
    for b in geometry.obstacles() {
        push_box_ranges(&mut c, layout, b)?;
        let controls = (0..layout.dim())
            .map(|m| Control::on(layout.range_scratch(m)))
            .collect();
        c.push(Gate::mcx(controls, layout.a_o())?);
        push_box_ranges(&mut c, layout, b)?;
    }
    Ok(c)
}

/// Flips `v_dir^j` on flagged states for every axis the particle moves along.
/// Rest components keep their `(0, 1)` pattern.
pub fn build_reverse_velocity(layout: &RegisterLayout) -> Result<Circuit> {
    let mut c = Circuit::new();
    for j in 0..layout.dim() {
        c.push(Gate::mcx(
            vec![Control::on(layout.a_o()), Control::on(layout.a_v(j))],
            layout.v_dir(j),
        )?);
    }
    Ok(c)
}

/// Streams flagged states one step along their (reversed) velocity.
pub fn build_return_step(layout: &RegisterLayout) -> Result<Circuit> {
    let mut c = Circuit::new();
    push_axis_streaming(&mut c, layout, &[Control::on(layout.a_o())])?;
    Ok(c)
}

/// Clears `a_o` on populations just returned from a box.
///
/// A state sitting at fluid cell `y` with velocity `e` carries `a_o = 1`
/// exactly when `y - e` lies in the box: that is the only way to reach `y`
/// moving along `e` after a reflection. For each neighbourhood class
/// `sigma` (which side of the box `y` lies on per axis) the table holds
///
/// * a wall rule: `y` on the shell cells of `sigma`, moving away from the box
///   along every axis where `sigma != 0`, any motion along the others;
/// * edge corrections for the states the wall rule flipped wrongly, those at
///   the end rows moving outward along an in-range axis (which came from
///   outside the box). Corrections for several axes combine by
///   inclusion-exclusion, so their XOR is exact.
///
/// Corner classes (`sigma` nonzero on every axis) have no corrections.
pub fn push_reset_table(c: &mut Circuit, layout: &RegisterLayout, b: &ObstacleBox) -> Result<()> {
    let d = layout.dim();
    for sigma in sigma_classes(d) {
        let mut base = Vec::new();
        let mut free_axes = Vec::new();
        for (m, &s) in sigma.iter().enumerate() {
            match s {
                0 => free_axes.push(m),
                _ => {
                    let coord = if s < 0 { b.lower[m] - 1 } else { b.upper[m] + 1 };
                    base.extend(value_controls(layout.position(m), coord));
                    base.push(Control::on(layout.a_v(m)));
                    base.push(Control::when(layout.v_dir(m), s < 0));
                }
            }
        }
        // every subset S of the free axes, every side choice on S
        for subset in 0..(1usize << free_axes.len()) {
            let chosen: Vec<usize> = (0..free_axes.len())
                .filter(|k| subset >> k & 1 == 1)
                .map(|k| free_axes[k])
                .collect();
            for sides in 0..(1usize << chosen.len()) {
                let mut controls = base.clone();
                for &m in &free_axes {
                    if let Some(k) = chosen.iter().position(|&a| a == m) {
                        let high = sides >> k & 1 == 1;
                        let coord = if high { b.upper[m] } else { b.lower[m] };
                        controls.extend(value_controls(layout.position(m), coord));
                        controls.push(Control::on(layout.a_v(m)));
                        controls.push(Control::when(layout.v_dir(m), high));
                    } else {
                        controls.push(Control::on(layout.range_scratch(m)));
                    }
                }
                c.push(Gate::mcx(controls, layout.a_o())?);
            }
        }
    }
    Ok(())
}

/// All of `{-1, 0, 1}^d` except the origin.
fn sigma_classes(d: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(d as u32) {
        let sigma: Vec<i8> = (0..d).map(|m| (code / 3usize.pow(m as u32) % 3) as i8 - 1).collect();
        if sigma.iter().any(|&s| s != 0) {
            out.push(sigma);
        }
    }
    out
}

pub fn build_reset_object_flag(layout: &RegisterLayout, geometry: &DomainGeometry) -> Result<Circuit> {
    let mut c = Circuit::new();
    for b in geometry.obstacles() {
        push_box_ranges(&mut c, layout, b)?;
        push_reset_table(&mut c, layout, b)?;
        push_box_ranges(&mut c, layout, b)?;
    }
    Ok(c)
}

/// Momentum flags for axis `j`: `a_{o,+} ^= a_o & (v^j, v_dir^j) = (1, 0)` and
/// `a_{o,-} ^= a_o & (1, 1)`. Self-inverse.
pub fn build_momentum_flags(layout: &RegisterLayout, axis: usize) -> Result<Circuit> {
    let mut c = Circuit::new();
    for (dir, target) in [(false, layout.a_plus()), (true, layout.a_minus())] {
        c.push(Gate::mcx(
            vec![
                Control::on(layout.a_o()),
                Control::on(layout.a_v(axis)),
                Control::when(layout.v_dir(axis), dir),
            ],
            target,
        )?);
    }
    Ok(c)
}

/// Phases of one timestep, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimestepPhase {
    SetStreamFlags,
    Stream,
    FlagObject,
    ReverseVelocity,
    ReturnStep,
    ResetObjectFlag,
    ClearStreamFlags,
}

impl TimestepPhase {
    pub const ALL: [TimestepPhase; 7] = [
        TimestepPhase::SetStreamFlags,
        TimestepPhase::Stream,
        TimestepPhase::FlagObject,
        TimestepPhase::ReverseVelocity,
        TimestepPhase::ReturnStep,
        TimestepPhase::ResetObjectFlag,
        TimestepPhase::ClearStreamFlags,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TimestepPhase::SetStreamFlags => "set_stream_flags",
            TimestepPhase::Stream => "stream",
            TimestepPhase::FlagObject => "flag_object",
            TimestepPhase::ReverseVelocity => "reverse_velocity",
            TimestepPhase::ReturnStep => "return_step",
            TimestepPhase::ResetObjectFlag => "reset_object_flag",
            TimestepPhase::ClearStreamFlags => "clear_stream_flags",
        }
    }

    /// Force measurement taps in after this phase.
    pub fn is_tap_point(self) -> bool {
        self == TimestepPhase::FlagObject
    }
}

/// Prebuilt circuits for one collisionless timestep on a fixed geometry.
#[derive(Debug, Clone)]
pub struct TimestepPlan {
    layout: RegisterLayout,
    geometry: Arc<DomainGeometry>,
    phases: Vec<(TimestepPhase, Circuit)>,
}

impl TimestepPlan {
    pub fn new(geometry: Arc<DomainGeometry>) -> Result<Self> {
        let layout = RegisterLayout::new(geometry.lattice());
        // without obstacles a_o is never set, so the bounce-back phases are empty
        let solid = !geometry.obstacles().is_empty();
        let phases = TimestepPhase::ALL
            .iter()
            .map(|&p| {
                let circuit = match p {
                    TimestepPhase::ReverseVelocity | TimestepPhase::ReturnStep if !solid => Ok(Circuit::new()),
                    TimestepPhase::SetStreamFlags | TimestepPhase::ClearStreamFlags => build_stream_flags(&layout),
                    TimestepPhase::Stream => build_stream(&layout),
                    TimestepPhase::FlagObject => build_flag_object(&layout, &geometry),
                    TimestepPhase::ReverseVelocity => build_reverse_velocity(&layout),
                    TimestepPhase::ReturnStep => build_return_step(&layout),
                    TimestepPhase::ResetObjectFlag => build_reset_object_flag(&layout, &geometry),
                }?;
                Ok((p, circuit))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            layout,
            geometry,
            phases,
        })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn geometry(&self) -> &Arc<DomainGeometry> {
        &self.geometry
    }

    pub fn phases(&self) -> &[(TimestepPhase, Circuit)] {
        &self.phases
    }

    pub fn phase(&self, phase: TimestepPhase) -> &Circuit {
        &self
            .phases
            .iter()
            .find(|(p, _)| *p == phase)
            .expect("all phases built")
            .1
    }

    /// The whole timestep as one circuit.
    pub fn circuit(&self) -> Circuit {
        let mut c = Circuit::new();
        for (_, phase) in &self.phases {
            c.append(phase);
        }
        c
    }

    /// Runs one timestep; `tap` sees the state right after `flag_object`.
    pub fn step_with_tap<F>(&self, state: &mut StateVector, mut tap: F) -> Result<()>
    where
        F: FnMut(&mut StateVector) -> Result<()>,
    {
        for (phase, circuit) in &self.phases {
            state.run(circuit)?;
            // ancillae freed by this phase drop out of the kernel loops
            state.refresh_support();
            if phase.is_tap_point() {
                tap(state)?;
            }
        }
        Ok(())
    }

    pub fn step(&self, state: &mut StateVector) -> Result<()> {
        self.step_with_tap(state, |_| Ok(()))
    }

    pub fn encode(&self, field: &ClassicalFlowField) -> Result<QuantumFlowState> {
        encode_rooted(field, &self.layout)
    }

    pub fn decode(&self, state: &QuantumFlowState) -> Result<ClassicalFlowField> {
        decode(state, &self.layout, &self.geometry)
    }
}

/// One timestep on `state` (builds the circuits on every call; prefer
/// [`TimestepPlan`] for repeated steps).
pub fn timestep(state: &mut QuantumFlowState, geometry: &Arc<DomainGeometry>) -> Result<()> {
    TimestepPlan::new(geometry.clone())?.step(&mut state.state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeDescriptor;

    fn geometry(extents: &[usize], boxes: Vec<ObstacleBox>) -> Arc<DomainGeometry> {
        Arc::new(DomainGeometry::new(LatticeDescriptor::new(extents).unwrap(), boxes).unwrap())
    }

    fn line4() -> Arc<DomainGeometry> {
        geometry(&[4], vec![ObstacleBox::new(vec![2], vec![2])])
    }

    fn single(plan: &TimestepPlan, coords: &[usize], e: &[i8]) -> StateVector {
        let l = plan.layout();
        let cell = plan.geometry().lattice().cell_index(coords);
        StateVector::basis(l.num_qubits(), l.basis_index(cell, velocity_bits(e)))
    }

    fn only_index(s: &StateVector) -> usize {
        let hits: Vec<usize> = (0..s.amplitudes().len())
            .filter(|&i| s.amplitudes()[i].norm() > 1e-9)
            .collect();
        assert_eq!(hits.len(), 1, "{hits:?}");
        hits[0]
    }

    #[test]
    fn velocity_encoding_is_injective() {
        for d in 1..=3 {
            let lat = LatticeDescriptor::new(&vec![2; d]).unwrap();
            let mut bits = velocity_bit_table(&lat);
            for (i, b) in bits.iter().enumerate() {
                assert_eq!(bits_velocity(*b, d).unwrap(), lat.velocity(i));
            }
            bits.sort();
            bits.dedup();
            assert_eq!(bits.len(), lat.q());
        }
        assert_eq!(velocity_bits(&[0]), 0b01);
        assert_eq!(velocity_bits(&[1]), 0b10);
        assert_eq!(velocity_bits(&[-1]), 0b11);
        assert_eq!(bits_velocity(0b00, 1), None);
    }

    #[test]
    fn encode_line4_vector() {
        let g = line4();
        let l = RegisterLayout::new(g.lattice());
        let mut f = ClassicalFlowField::zeros(g.clone());
        f.set(&[1], 1, 4.0);
        let s = encode_rooted(&f, &l).unwrap();
        assert_eq!(s.total_mass, 4.0);
        assert_eq!(only_index(&s.state), 6);
        assert!(matches!(
            encode_rooted(&ClassicalFlowField::zeros(g), &l),
            Err(QlbmError::ZeroMass(_))
        ));
    }

    #[test]
    fn decode_rejects_ancilla() {
        let g = line4();
        let l = RegisterLayout::new(g.lattice());
        let mut f = ClassicalFlowField::zeros(g.clone());
        f.set(&[1], 1, 1.0);
        let mut s = encode_rooted(&f, &l).unwrap();
        s.state.apply(&Gate::x(l.a_o())).unwrap();
        assert!(matches!(decode(&s, &l, &g), Err(QlbmError::AncillaEntangled { .. })));
    }

    #[test]
    fn stream_flags_copy_and_clear() {
        let g = geometry(&[4, 4], vec![]);
        let l = RegisterLayout::new(g.lattice());
        let c = build_stream_flags(&l).unwrap();
        let mut s = StateVector::basis(l.num_qubits(), l.basis_index(0, velocity_bits(&[1, 0])));
        s.run(&c).unwrap();
        let idx = only_index(&s);
        assert_eq!(idx >> l.a_v(0) & 1, 1);
        assert_eq!(idx >> l.a_v(1) & 1, 0);
        s.run(&c).unwrap();
        assert_eq!(only_index(&s), l.basis_index(0, velocity_bits(&[1, 0])));

        let mut s = StateVector::basis(l.num_qubits(), l.basis_index(5, velocity_bits(&[0, 0])));
        s.run(&c).unwrap();
        assert_eq!(only_index(&s), l.basis_index(5, velocity_bits(&[0, 0])));
    }

    #[test]
    fn streaming_moves_populations() {
        let g = geometry(&[4], vec![]);
        let plan = TimestepPlan::new(g).unwrap();
        let l = plan.layout();
        let mut s = single(&plan, &[1], &[1]);
        plan.step(&mut s).unwrap();
        assert_eq!(only_index(&s), l.basis_index(2, velocity_bits(&[1])));
        let mut s = single(&plan, &[3], &[1]);
        plan.step(&mut s).unwrap();
        assert_eq!(only_index(&s), l.basis_index(0, velocity_bits(&[1])));

        let g = geometry(&[4, 4], vec![]);
        let plan = TimestepPlan::new(g.clone()).unwrap();
        let mut s = single(&plan, &[0, 0], &[1, 1]);
        plan.step(&mut s).unwrap();
        let cell = g.lattice().cell_index(&[1, 1]);
        assert_eq!(only_index(&s), plan.layout().basis_index(cell, velocity_bits(&[1, 1])));
    }

    #[test]
    fn wall_flagging() {
        // wall x = 2, y in [2, 5] on an 8 x 8 grid
        let g = geometry(&[8, 8], vec![ObstacleBox::new(vec![2, 2], vec![2, 5])]);
        let l = RegisterLayout::new(g.lattice());
        let c = build_flag_object(&l, &g).unwrap();
        assert!(c.comparisons > 0);
        for cell in 0..64 {
            let mut s = StateVector::basis(l.num_qubits(), l.basis_index(cell, velocity_bits(&[1, 0])));
            s.run(&c).unwrap();
            let idx = only_index(&s);
            assert_eq!(idx >> l.a_o() & 1 == 1, g.is_solid_cell(cell), "cell {cell}");
            assert_eq!(idx & !(1 << l.a_o()), l.basis_index(cell, velocity_bits(&[1, 0])));
        }
    }

    #[test]
    fn reverse_is_full_reversal() {
        let g = geometry(&[8, 8], vec![ObstacleBox::new(vec![3, 3], vec![4, 4])]);
        let l = RegisterLayout::new(g.lattice());
        let c = build_reverse_velocity(&l).unwrap();
        for (e, r) in [([1i8, -1i8], [-1i8, 1i8]), ([1, 0], [-1, 0]), ([0, 0], [0, 0])] {
            let idx = l.basis_index(3, velocity_bits(&e)) | 1 << l.a_o();
            let mut s = StateVector::basis(l.num_qubits(), idx);
            s.run(&build_stream_flags(&l).unwrap()).unwrap();
            s.run(&c).unwrap();
            s.run(&build_stream_flags(&l).unwrap()).unwrap();
            assert_eq!(only_index(&s), l.basis_index(3, velocity_bits(&r)) | 1 << l.a_o());
        }
        // unflagged untouched
        let idx = l.basis_index(3, velocity_bits(&[1, 1])) | 1 << l.a_v(0) | 1 << l.a_v(1);
        let mut s = StateVector::basis(l.num_qubits(), idx);
        s.run(&c).unwrap();
        assert_eq!(only_index(&s), idx);
    }

    #[test]
    fn line4_single_step_bounces() {
        let plan = TimestepPlan::new(line4()).unwrap();
        let l = plan.layout();
        let mut s = single(&plan, &[1], &[1]);
        plan.step(&mut s).unwrap();
        assert_eq!(only_index(&s), l.basis_index(1, velocity_bits(&[-1])));
    }

    #[test]
    fn return_step_without_flags_is_identity() {
        let g = geometry(&[4, 4], vec![ObstacleBox::new(vec![1, 1], vec![2, 1])]);
        let l = RegisterLayout::new(g.lattice());
        let c = build_return_step(&l).unwrap();
        let idx = l.basis_index(9, velocity_bits(&[1, -1])) | 1 << l.a_v(0) | 1 << l.a_v(1);
        let mut s = StateVector::basis(l.num_qubits(), idx);
        s.run(&c).unwrap();
        assert_eq!(only_index(&s), idx);
    }

    #[test]
    fn reset_table_sizes() {
        // 2D box: 4 faces (3 terms each), 4 corners (1 term each)
        let g = geometry(&[8, 8], vec![ObstacleBox::new(vec![2, 2], vec![3, 5])]);
        let l = RegisterLayout::new(g.lattice());
        let mut c = Circuit::new();
        push_reset_table(&mut c, &l, &g.obstacles()[0]).unwrap();
        assert_eq!(c.gates.len(), 4 * 3 + 4);
        // 3D: 6 faces x 9, 12 edges x 3, 8 corners x 1
        let g = geometry(&[4, 4, 4], vec![ObstacleBox::new(vec![1, 1, 1], vec![2, 2, 1])]);
        let l = RegisterLayout::new(g.lattice());
        let mut c = Circuit::new();
        push_reset_table(&mut c, &l, &g.obstacles()[0]).unwrap();
        assert_eq!(c.gates.len(), 6 * 9 + 12 * 3 + 8);
    }

    #[test]
    fn every_link_returns_with_clean_ancillae() {
        let g = geometry(
            &[8, 8],
            vec![
                ObstacleBox::new(vec![2, 2], vec![3, 5]),
                ObstacleBox::new(vec![5, 4], vec![6, 4]),
            ],
        );
        let plan = TimestepPlan::new(g.clone()).unwrap();
        let l = plan.layout();
        let lat = g.lattice();
        for link in g.boundary_links() {
            let e = lat.velocity(link.velocity);
            let mut s = single(&plan, &link.fluid, e);
            plan.step(&mut s).unwrap();
            let back = lat.velocity(lat.opposite(link.velocity));
            let cell = lat.cell_index(&link.fluid);
            assert_eq!(only_index(&s), l.basis_index(cell, velocity_bits(back)), "{link:?}");
        }
    }
}
