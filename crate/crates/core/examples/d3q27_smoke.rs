//! D3Q27 on a 4x4x4 grid with one box: 22 qubits, about four million
//! amplitudes. Compares against the classical reference and times each step.

use std::sync::Arc;
use std::time::Instant;

use qlbm::circuits::{ancilla_violation, TimestepPlan};
use qlbm::classical::ClassicalFlowField;
use qlbm::lattice::{DomainGeometry, LatticeDescriptor, ObstacleBox};
use qlbm::qmem::measure_force_observable;

fn main() -> qlbm::Result<()> {
    let lattice = LatticeDescriptor::new(&[4, 4, 4])?;
    let geometry = Arc::new(DomainGeometry::new(
        lattice,
        vec![ObstacleBox::new(vec![1, 1, 1], vec![2, 2, 1])],
    )?);
    let plan = TimestepPlan::new(geometry.clone())?;
    println!(
        "{} qubits, {} gates per step",
        plan.layout().num_qubits(),
        plan.circuit().len()
    );

    let q = geometry.lattice().q();
    let f = (0..geometry.lattice().num_cells() * q)
        .map(|s| {
            if geometry.is_solid_cell(s / q) {
                0.0
            } else {
                1.0 + (s * 7919 % 13) as f64
            }
        })
        .collect();
    let mut classical = ClassicalFlowField::new(geometry.clone(), f)?;
    let mut quantum = plan.encode(&classical)?;

    for t in 0..4 {
        let force = measure_force_observable(&quantum, plan.layout(), &geometry).components;
        let start = Instant::now();
        plan.step(&mut quantum.state)?;
        let elapsed = start.elapsed();
        classical = classical.step()?;
        let dev = plan.decode(&quantum)?.max_deviation(&classical);
        println!(
            "t={t} F={force:.4?} step {elapsed:.2?} field dev {dev:.1e} ancillae {}",
            if ancilla_violation(&quantum.state, plan.layout()).is_none() {
                "clean"
            } else {
                "DIRTY"
            }
        );
    }
    Ok(())
}
