//! One-dimensional worked example: four cells, a single solid cell at x = 2.
//!
//! Prints the encoded coefficient vector, the force observable and the force
//! read three ways (classical, observable, ancilla) over a few steps.

use std::sync::Arc;

use qlbm::circuits::TimestepPlan;
use qlbm::classical::ClassicalFlowField;
use qlbm::engine::expectation;
use qlbm::lattice::{DomainGeometry, LatticeDescriptor, ObstacleBox};
use qlbm::qmem::{
    build_observable, measure_force_ancilla, measure_force_observable, ForceMeasurementConfig, MeasurementMode, Sign,
};

fn main() -> qlbm::Result<()> {
    let lattice = LatticeDescriptor::new(&[4])?;
    let geometry = Arc::new(DomainGeometry::new(lattice, vec![ObstacleBox::new(vec![2], vec![2])])?);
    let plan = TimestepPlan::new(geometry.clone())?;
    let layout = plan.layout().clone();

    // rest, +x, -x populations per cell; the solid cell stays empty
    let f = vec![
        0.4, 0.3, 0.2, //
        0.5, 0.9, 0.1, //
        0.0, 0.0, 0.0, //
        0.2, 0.6, 0.7,
    ];
    let mut classical = ClassicalFlowField::new(geometry.clone(), f)?;
    let mut quantum = plan.encode(&classical)?;
    let mass = quantum.total_mass;

    println!("{} qubits, total mass {mass}", layout.num_qubits());
    println!("coefficients over |g2 g1 v v_dir> (ancillae zero):");
    for (k, a) in quantum.state.amplitudes()[..16].iter().enumerate() {
        println!("  {k:04b}  {:.6}", a.re);
    }
    let o_plus = build_observable(&layout, &geometry, 0, Sign::Plus);
    println!(
        "<O+> = {:.6}, 2 f_1(1)/sum f = {:.6}",
        expectation(&quantum.state, &o_plus),
        2.0 * classical.get(&[1], 1) / mass
    );

    println!("\n t   classical   observable    ancilla");
    for t in 0..4 {
        let fc = classical.mem_force()[0];
        let fo = measure_force_observable(&quantum, &layout, &geometry).components[0];
        let mut fa = 0.0;
        plan.step_with_tap(&mut quantum.state, |s| {
            fa = measure_force_ancilla(
                s,
                mass,
                &layout,
                &ForceMeasurementConfig::exact(MeasurementMode::Ancilla),
            )?
            .components[0];
            Ok(())
        })?;
        classical = classical.step()?;
        println!("{t:2} {fc:11.6} {fo:12.6} {fa:10.6}");
    }
    println!(
        "\nfield deviation after 4 steps: {:e}",
        plan.decode(&quantum)?.max_deviation(&classical)
    );
    Ok(())
}
