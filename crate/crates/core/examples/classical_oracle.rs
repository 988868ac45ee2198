//! The classical reference on its own: streaming with bounce-back, BGK
//! relaxation toward equilibrium, and the momentum-exchange force.

use std::sync::Arc;

use qlbm::classical::{equilibrium, ClassicalFlowField, CollisionParams};
use qlbm::lattice::{DomainGeometry, LatticeDescriptor, ObstacleBox};

fn main() -> qlbm::Result<()> {
    let lattice = LatticeDescriptor::new(&[16, 8])?;
    let geometry = Arc::new(DomainGeometry::new(
        lattice.clone(),
        vec![ObstacleBox::new(vec![6, 3], vec![7, 4])],
    )?);
    let feq = equilibrium(&lattice, 1.0, &[0.1, 0.0])?;
    let q = lattice.q();
    let f = (0..lattice.num_cells() * q)
        .map(|s| if geometry.is_solid_cell(s / q) { 0.0 } else { feq[s % q] })
        .collect();
    let mut field = ClassicalFlowField::new(geometry, f)?;
    let params = CollisionParams::new(0.8);
    let mass0 = field.total_mass();

    println!(" t        F_x        F_y   mass drift");
    for t in 0..20 {
        let force = field.mem_force();
        field = field.bgk_collide(&params)?.step()?;
        if t % 4 == 0 {
            println!(
                "{t:2} {:10.6} {:10.6} {:12.2e}",
                force[0],
                force[1],
                field.total_mass() - mass0
            );
        }
    }
    Ok(())
}
