//! Reversible register arithmetic built from QFT blocks and phase rotations:
//! controlled modular shifts and range comparators.

use std::f64::consts::PI;

use super::gate::{value_controls, Circuit, Control, Gate};
use super::state::StateVector;
use crate::error::{QlbmError, Result};

/// Appends `register <- register + delta mod 2^m` on basis states matching
/// `controls`. The register is listed least significant qubit first.
///
/// The QFT blocks are left uncontrolled; only the Fourier-space phases carry
/// the controls, so unmatched states see `IQFT . QFT = 1`.
pub fn push_controlled_add(circuit: &mut Circuit, register: &[usize], delta: i64, controls: &[Control]) -> Result<()> {
    let m = register.len();
    let modulus = 1i64 << m;
    let delta = delta.rem_euclid(modulus);
    circuit.shifts += 1;
    if delta == 0 || m == 0 {
        return Ok(());
    }
    circuit.push(Gate::qft(register.to_vec(), false)?);
    for (b, &q) in register.iter().enumerate() {
        // phase exp(2 pi i delta 2^b / 2^m) on qubit b, reduced mod 2 pi
        let turns = (delta << b) % modulus;
        if turns == 0 {
            continue;
        }
        let angle = 2.0 * PI * turns as f64 / modulus as f64;
        circuit.push(Gate::phase(controls.to_vec(), q, angle)?);
    }
    circuit.push(Gate::qft(register.to_vec(), true)?);
    Ok(())
}

/// Appends `target ^= [register >= k]` using `carry` as a borrow qubit, which
/// must be |0> on entry and is returned to |0>.
fn push_compare_ge(circuit: &mut Circuit, register: &[usize], k: usize, carry: usize, target: usize) -> Result<()> {
    let extended: Vec<usize> = register.iter().copied().chain([carry]).collect();
    circuit.comparisons += 1;
    push_controlled_add(circuit, &extended, -(k as i64), &[])?;
    circuit.shifts -= 1;
    circuit.push(Gate::mcx(vec![Control::off(carry)], target)?);
    push_controlled_add(circuit, &extended, k as i64, &[])?;
    circuit.shifts -= 1;
    Ok(())
}

/// Appends `target ^= [lo <= register <= hi]`.
///
/// A single value is matched with one multi-controlled X on the register's
/// bit pattern. Otherwise the flag is the XOR of two comparators,
/// `[r >= lo] ^ [r >= hi + 1]`, each a QFT subtract, a borrow test on
/// `carry` and a QFT add.
pub fn push_flag_in_range(
    circuit: &mut Circuit,
    register: &[usize],
    lo: usize,
    hi: usize,
    carry: usize,
    target: usize,
) -> Result<()> {
    let bits = register.len();
    let max = (1usize << bits) - 1;
    if lo > hi || hi > max {
        return Err(QlbmError::MalformedRange { lo, hi, bits });
    }
    if lo == hi {
        circuit.push(Gate::mcx(value_controls(register, lo), target)?);
        return Ok(());
    }
    if lo == 0 {
        circuit.push(Gate::x(target));
    } else {
        push_compare_ge(circuit, register, lo, carry, target)?;
    }
    if hi < max {
        push_compare_ge(circuit, register, hi + 1, carry, target)?;
    }
    Ok(())
}

/// Applies a controlled modular shift by `direction` to `state`.
pub fn controlled_shift(
    state: &mut StateVector,
    register: &[usize],
    direction: i64,
    controls: &[Control],
) -> Result<()> {
    let mut c = Circuit::new();
    push_controlled_add(&mut c, register, direction, controls)?;
    state.run(&c)
}

/// Applies the range flag of [`push_flag_in_range`] to `state`.
pub fn flag_in_range(
    state: &mut StateVector,
    register: &[usize],
    lo: usize,
    hi: usize,
    carry: usize,
    target: usize,
) -> Result<()> {
    let mut c = Circuit::new();
    push_flag_in_range(&mut c, register, lo, hi, carry, target)?;
    state.run(&c)
}
