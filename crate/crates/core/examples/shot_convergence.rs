//! Shot noise of the ancilla force measurement. For growing shot budgets
//! M the rms error against the exact force should fall like M^-1/2.

use std::sync::Arc;

use qlbm::circuits::TimestepPlan;
use qlbm::classical::ClassicalFlowField;
use qlbm::lattice::{DomainGeometry, LatticeDescriptor, ObstacleBox};
use qlbm::qmem::{measure_force_ancilla, ForceMeasurementConfig, MeasurementMode};

fn main() -> qlbm::Result<()> {
    let lattice = LatticeDescriptor::new(&[8, 8])?;
    let geometry = Arc::new(DomainGeometry::new(
        lattice,
        vec![ObstacleBox::new(vec![3, 2], vec![4, 5])],
    )?);
    let plan = TimestepPlan::new(geometry.clone())?;
    let layout = plan.layout().clone();
    let q = geometry.lattice().q();
    // a drift to +x so the obstacle feels a net push
    let f = (0..geometry.lattice().num_cells() * q)
        .map(
            |s| match (geometry.is_solid_cell(s / q), geometry.lattice().velocity(s % q)[0]) {
                (true, _) => 0.0,
                (false, 1) => 2.0,
                (false, _) => 1.0,
            },
        )
        .collect();
    let field = ClassicalFlowField::new(geometry.clone(), f)?;
    let mut quantum = plan.encode(&field)?;
    let mass = quantum.total_mass;
    let seeds = 20;

    plan.step_with_tap(&mut quantum.state, |s| {
        let exact = measure_force_ancilla(
            s,
            mass,
            &layout,
            &ForceMeasurementConfig::exact(MeasurementMode::Ancilla),
        )?;
        println!("exact F = {:?}", exact.components);
        println!("{:>8} {:>12} {:>14}", "M", "rms error", "mean stderr");
        for m in [100u64, 1_000, 10_000, 100_000] {
            let (mut sq, mut se) = (0.0, 0.0);
            for seed in 0..seeds {
                let f = measure_force_ancilla(s, mass, &layout, &ForceMeasurementConfig::shots(m, seed))?;
                sq += (f.components[0] - exact.components[0]).powi(2);
                se += f.stderr[0];
            }
            println!(
                "{m:>8} {:>12.4} {:>14.4}",
                (sq / seeds as f64).sqrt(),
                se / seeds as f64
            );
        }
        Ok(())
    })?;
    Ok(())
}
