//! Randomized geometries and fields shared by the integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use qlbm::classical::ClassicalFlowField;
use qlbm::lattice::{DomainGeometry, LatticeDescriptor, ObstacleBox};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Case {
    pub label: String,
    pub geometry: Arc<DomainGeometry>,
    pub field: ClassicalFlowField,
    pub steps: u64,
}

fn random_box(rng: &mut ChaCha8Rng, extents: &[usize]) -> ObstacleBox {
    let (lower, upper) = extents
        .iter()
        .map(|&n| {
            let lo = rng.random_range(1..=n - 2);
            let hi = rng.random_range(lo..=(lo + 2).min(n - 2));
            (lo, hi)
        })
        .unzip();
    ObstacleBox::new(lower, upper)
}

/// One or two valid boxes. The second box is dropped if no non-touching
/// placement turns up.
pub fn random_geometry(rng: &mut ChaCha8Rng, extents: &[usize], max_boxes: usize) -> Arc<DomainGeometry> {
    let lattice = LatticeDescriptor::new(extents).unwrap();
    let mut boxes = vec![random_box(rng, extents)];
    if max_boxes > 1 && rng.random_bool(0.5) {
        for _ in 0..100 {
            let mut trial = boxes.clone();
            trial.push(random_box(rng, extents));
            if DomainGeometry::new(lattice.clone(), trial.clone()).is_ok() {
                boxes = trial;
                break;
            }
        }
    }
    Arc::new(DomainGeometry::new(lattice, boxes).unwrap())
}

/// Uniform `(0, 1]` values on fluid slots, zero in solids.
pub fn random_field(rng: &mut ChaCha8Rng, geometry: &Arc<DomainGeometry>) -> ClassicalFlowField {
    let q = geometry.lattice().q();
    let f = (0..geometry.lattice().num_cells() * q)
        .map(|s| {
            let v = 1.0 - rng.random::<f64>();
            if geometry.is_solid_cell(s / q) {
                0.0
            } else {
                v
            }
        })
        .collect();
    ClassicalFlowField::new(geometry.clone(), f).unwrap()
}

fn case(rng: &mut ChaCha8Rng, label: String, geometry: Arc<DomainGeometry>, steps: u64) -> Case {
    let field = random_field(rng, &geometry);
    Case {
        label,
        geometry,
        field,
        steps,
    }
}

/// The vertical wall from (2,2) to (2,5) on an 8x8 grid: flat sides, side
/// edges and corners all meet streaming populations.
pub fn wall_geometry() -> Arc<DomainGeometry> {
    let lattice = LatticeDescriptor::new(&[8, 8]).unwrap();
    Arc::new(DomainGeometry::new(lattice, vec![ObstacleBox::new(vec![2, 2], vec![2, 5])]).unwrap())
}

/// 20 D1Q3 cases, 30 D2Q9 cases (five on the wall geometry) and one D3Q27
/// case on 4x4x4.
pub fn equivalence_suite(rng: &mut ChaCha8Rng) -> Vec<Case> {
    let mut cases = Vec::new();
    for k in 0..20 {
        let n = [4, 8, 16][k % 3];
        let g = random_geometry(rng, &[n], 2);
        let steps = rng.random_range(1..=8);
        cases.push(case(rng, format!("d1q3 N={n} #{k}"), g, steps));
    }
    for k in 0..5 {
        cases.push(case(rng, format!("d2q9 8x8 wall #{k}"), wall_geometry(), 8));
    }
    for k in 0..25 {
        let extents = [[4, 4], [4, 8], [8, 4], [8, 8]][k % 4];
        let g = random_geometry(rng, &extents, 2);
        let steps = rng.random_range(1..=8);
        cases.push(case(rng, format!("d2q9 {}x{} #{k}", extents[0], extents[1]), g, steps));
    }
    let lattice = LatticeDescriptor::new(&[4, 4, 4]).unwrap();
    let g = Arc::new(DomainGeometry::new(lattice, vec![ObstacleBox::new(vec![1, 1, 1], vec![2, 2, 1])]).unwrap());
    cases.push(case(rng, "d3q27 4x4x4".into(), g, 8));
    cases
}
