//! The QFT range comparator: flags `lo <= r <= hi` on a 3-qubit register,
//! prints its gate list and checks every register value.

use qlbm::engine::{push_flag_in_range, Circuit, StateVector};

fn main() -> qlbm::Result<()> {
    let register = [0, 1, 2];
    let (carry, target) = (3, 4);
    let (lo, hi) = (2, 5);

    let mut circuit = Circuit::new();
    push_flag_in_range(&mut circuit, &register, lo, hi, carry, target)?;
    println!(
        "flag {lo} <= r <= {hi}: {} gates, {} comparisons",
        circuit.len(),
        circuit.comparisons
    );
    for gate in &circuit.gates {
        println!("  {gate}");
    }

    println!("\n r  flag");
    for r in 0..8usize {
        let mut s = StateVector::basis(5, r);
        s.run(&circuit)?;
        let flagged = s.amplitudes()[r | 1 << target].norm() > 0.5;
        assert_eq!(flagged, (lo..=hi).contains(&r));
        println!("{r:2}  {}", u8::from(flagged));
    }
    Ok(())
}
