//! Per-phase gate counts and force-observable sparsity for a few grids.

use std::sync::Arc;

use qlbm::circuits::TimestepPlan;
use qlbm::lattice::{DomainGeometry, LatticeDescriptor, ObstacleBox};
use qlbm::qmem::nonzero_fraction_report;
use qlbm::run::GateReport;

fn main() -> qlbm::Result<()> {
    let cases: Vec<(Vec<usize>, Vec<ObstacleBox>)> = vec![
        (vec![4], vec![ObstacleBox::new(vec![2], vec![2])]),
        (vec![8, 8], vec![]),
        (vec![8, 8], vec![ObstacleBox::new(vec![2, 2], vec![2, 5])]),
        (
            vec![16, 16],
            vec![
                ObstacleBox::new(vec![2, 2], vec![2, 5]),
                ObstacleBox::new(vec![8, 8], vec![11, 9]),
            ],
        ),
        (vec![4, 4, 4], vec![ObstacleBox::new(vec![1, 1, 1], vec![2, 2, 1])]),
    ];
    for (extents, boxes) in cases {
        let geometry = Arc::new(DomainGeometry::new(LatticeDescriptor::new(&extents)?, boxes)?);
        let plan = TimestepPlan::new(geometry.clone())?;
        println!("{}", GateReport::new(&plan, &extents));
        println!("{}\n", nonzero_fraction_report(&geometry, plan.layout()));
    }
    Ok(())
}
