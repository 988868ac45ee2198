//! D2Q9 flow past a thin wall on an 8x8 periodic grid. The quantum
//! timestep runs in lockstep with the classical stream + bounce-back
//! reference; every step reports the field deviation and both forces.

use std::sync::Arc;

use qlbm::circuits::{ancilla_violation, TimestepPlan};
use qlbm::classical::ClassicalFlowField;
use qlbm::lattice::{DomainGeometry, LatticeDescriptor, ObstacleBox};
use qlbm::qmem::measure_force_observable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> qlbm::Result<()> {
    let lattice = LatticeDescriptor::new(&[8, 8])?;
    let geometry = Arc::new(DomainGeometry::new(
        lattice,
        vec![ObstacleBox::new(vec![2, 2], vec![2, 5])],
    )?);
    let plan = TimestepPlan::new(geometry.clone())?;
    println!(
        "{} boundary links, {} qubits, {} gates per step",
        geometry.boundary_links().len(),
        plan.layout().num_qubits(),
        plan.circuit().len()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let q = geometry.lattice().q();
    let f = (0..geometry.lattice().num_cells() * q)
        .map(|s| {
            if geometry.is_solid_cell(s / q) {
                0.0
            } else {
                rng.random_range(0.1..1.0)
            }
        })
        .collect();
    let mut classical = ClassicalFlowField::new(geometry.clone(), f)?;
    let mut quantum = plan.encode(&classical)?;

    println!(" t        F_x (q)        F_y (q)    F_x (c)    F_y (c)   field dev  ancillae");
    for t in 0..8 {
        let fq = measure_force_observable(&quantum, plan.layout(), &geometry).components;
        let fc = classical.mem_force();
        plan.step(&mut quantum.state)?;
        classical = classical.step()?;
        let dev = plan.decode(&quantum)?.max_deviation(&classical);
        let clean = ancilla_violation(&quantum.state, plan.layout()).is_none();
        println!(
            "{t:2} {:14.9} {:14.9} {:10.5} {:10.5} {dev:11.2e}  {}",
            fq[0],
            fq[1],
            fc[0],
            fc[1],
            if clean { "clean" } else { "DIRTY" }
        );
    }
    Ok(())
}
