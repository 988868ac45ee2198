mod common;

use std::sync::Arc;

use proptest::prelude::*;
use qlbm::circuits::{ancilla_violation, velocity_bits, TimestepPlan};
use qlbm::classical::ClassicalFlowField;
use qlbm::lattice::{DomainGeometry, LatticeDescriptor, ObstacleBox};
use qlbm::qmem::{measure_force_ancilla, measure_force_observable, ForceMeasurementConfig, MeasurementMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn extents_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![
        prop::sample::select(vec![4usize, 8, 16]).prop_map(|n| vec![n]),
        (
            prop::sample::select(vec![4usize, 8]),
            prop::sample::select(vec![4usize, 8])
        )
            .prop_map(|(a, b)| vec![a, b]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quantum_step_tracks_classical_step(extents in extents_strategy(), seed in any::<u64>(), steps in 1u64..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let geometry = common::random_geometry(&mut rng, &extents, 2);
        let mut classical = common::random_field(&mut rng, &geometry);
        let plan = TimestepPlan::new(geometry.clone()).unwrap();
        let mut quantum = plan.encode(&classical).unwrap();
        for _ in 0..steps {
            plan.step(&mut quantum.state).unwrap();
            classical = classical.step().unwrap();
            prop_assert!(ancilla_violation(&quantum.state, plan.layout()).is_none());
            let decoded = plan.decode(&quantum).unwrap();
            prop_assert!(decoded.max_deviation(&classical) < 1e-10);
        }
    }

    #[test]
    fn unused_velocity_pattern_stays_empty(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let geometry = common::random_geometry(&mut rng, &[8, 8], 2);
        let field = common::random_field(&mut rng, &geometry);
        let plan = TimestepPlan::new(geometry.clone()).unwrap();
        let layout = plan.layout().clone();
        let mut quantum = plan.encode(&field).unwrap();
        plan.step(&mut quantum.state).unwrap();
        plan.step(&mut quantum.state).unwrap();
        let system = 1usize << layout.num_system_qubits();
        for (index, a) in quantum.state.amplitudes()[..system].iter().enumerate() {
            let (_, bits) = layout.split_index(index);
            let unused = (0..2).any(|j| bits >> (2 * j) & 0b11 == 0);
            if unused {
                prop_assert!(a.norm() == 0.0, "index {index} holds {a}");
            }
        }
    }

    #[test]
    fn observable_and_ancilla_forces_match_oracle(extents in extents_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let geometry = common::random_geometry(&mut rng, &extents, 2);
        let field = common::random_field(&mut rng, &geometry);
        let plan = TimestepPlan::new(geometry.clone()).unwrap();
        let layout = plan.layout().clone();
        let mut quantum = plan.encode(&field).unwrap();
        let oracle = field.mem_force();
        let observed = measure_force_observable(&quantum, &layout, &geometry);
        let mass = quantum.total_mass;
        let mut tapped = None;
        plan.step_with_tap(&mut quantum.state, |s| {
            tapped = Some(measure_force_ancilla(s, mass, &layout, &ForceMeasurementConfig::exact(MeasurementMode::Ancilla))?);
            Ok(())
        }).unwrap();
        let tapped = tapped.unwrap();
        for (j, want) in oracle.iter().enumerate() {
            prop_assert!((want - observed.components[j]).abs() < 1e-10);
            prop_assert!((want - tapped.components[j]).abs() < 1e-10);
        }
    }
}

/// A single population pushing on a wall gives a force with the sign of
/// its velocity component, and nothing else does.
#[test]
fn impulse_force_sign_follows_velocity() {
    let lattice = LatticeDescriptor::new(&[8, 8]).unwrap();
    let geometry =
        Arc::new(DomainGeometry::new(lattice.clone(), vec![ObstacleBox::new(vec![3, 3], vec![4, 4])]).unwrap());
    let plan = TimestepPlan::new(geometry.clone()).unwrap();
    for link in geometry.boundary_links() {
        let mut field = ClassicalFlowField::zeros(geometry.clone());
        field.set(&link.fluid, link.velocity, 1.5);
        let quantum = plan.encode(&field).unwrap();
        let force = measure_force_observable(&quantum, plan.layout(), &geometry);
        let e = lattice.velocity(link.velocity);
        for (j, &ej) in e.iter().enumerate() {
            assert_eq!(force.components[j], 3.0 * f64::from(ej), "link {link:?} axis {j}");
        }
    }
}

#[test]
fn single_population_round_trip() {
    let lattice = LatticeDescriptor::new(&[4]).unwrap();
    let geometry = Arc::new(DomainGeometry::new(lattice.clone(), vec![]).unwrap());
    let mut field = ClassicalFlowField::zeros(geometry.clone());
    field.set(&[0], 1, 4.0);
    let plan = TimestepPlan::new(geometry.clone()).unwrap();
    let quantum = plan.encode(&field).unwrap();
    assert_eq!(quantum.total_mass, 4.0);
    let index = plan.layout().basis_index(0, velocity_bits(lattice.velocity(1)));
    assert_eq!(quantum.state.amplitudes()[index].re, 1.0);
    assert_eq!(plan.decode(&quantum).unwrap(), field);
}
