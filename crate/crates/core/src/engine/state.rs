use std::f64::consts::PI;
use std::time::Instant;

use log::{debug, log_enabled, Level};
use num_complex::Complex64;

use super::gate::{Circuit, Control, Gate};
use crate::error::{QlbmError, Result};

/// Inverse-QFT outputs below this fraction of their fiber norm are rounding
/// residue of an exact zero and are flushed.
pub const QFT_FLUSH_RELATIVE: f64 = 1e-13;

/// Dense `2^n` complex amplitude vector. Qubit `k` is bit `k` of the basis index.
///
/// `support` is a superset of the qubits that are 1 on some nonzero
/// amplitude. Kernels only visit indices inside it, so idle ancillae cost
/// nothing.
#[derive(Debug, Clone)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
    support: usize,
}

impl PartialEq for StateVector {
    fn eq(&self, other: &Self) -> bool {
        self.num_qubits == other.num_qubits && self.amps == other.amps
    }
}

/// Calls `f` for every basis index whose bits under `fixed_mask` equal
/// `fixed_val`, in increasing order.
#[inline]
fn for_each_matching(num_qubits: usize, fixed_mask: usize, fixed_val: usize, mut f: impl FnMut(usize)) {
    let free = ((1usize << num_qubits) - 1) & !fixed_mask;
    let mut x = 0usize;
    loop {
        f(x | fixed_val);
        if x == free {
            break;
        }
        x = x.wrapping_sub(free) & free;
    }
}

fn control_mask(controls: &[Control]) -> (usize, usize) {
    controls.iter().fold((0, 0), |(m, v), c| {
        (m | 1 << c.qubit, if c.on { v | 1 << c.qubit } else { v })
    })
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self {
            num_qubits,
            amps,
            support: index,
        }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(QlbmError::ShapeMismatch {
                expected: len.next_power_of_two(),
                got: len,
            });
        }
        let mut s = Self {
            num_qubits: len.trailing_zeros() as usize,
            amps,
            support: 0,
        };
        s.refresh_support();
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Mutable amplitudes. Call [`Self::refresh_support`] after writing
    /// outside the current support.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        self.support = self.full_mask();
        &mut self.amps
    }

    pub fn support(&self) -> usize {
        self.support
    }

    /// Recomputes the support exactly from the nonzero amplitudes.
    pub fn refresh_support(&mut self) {
        let zero = Complex64::new(0.0, 0.0);
        self.support = self
            .amps
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != zero)
            .fold(0, |acc, (i, _)| acc | i);
    }

    fn full_mask(&self) -> usize {
        (1usize << self.num_qubits) - 1
    }

    /// Bits that are known to be 0 on every nonzero amplitude.
    fn idle_mask(&self) -> usize {
        self.full_mask() & !self.support
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubits(&self, gate: &Gate) -> Result<()> {
        match gate.qubits().into_iter().find(|&q| q >= self.num_qubits) {
            Some(qubit) => Err(QlbmError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            }),
            None => Ok(()),
        }
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        self.check_qubits(gate)?;
        match gate {
            Gate::Mcx { controls, target } => self.mcx(controls, *target),
            Gate::Phase { controls, qubit, angle } => self.phase(controls, *qubit, *angle),
            Gate::Qft { qubits, inverse } => self.qft(qubits, *inverse),
        }
        Ok(())
    }

    /// Applies every gate in order. With debug logging enabled each gate is
    /// traced with its wall time.
    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        let trace = log_enabled!(Level::Debug);
        for gate in &circuit.gates {
            if trace {
                let start = Instant::now();
                self.apply(gate)?;
                debug!("{gate} time={:?}", start.elapsed());
            } else {
                self.apply(gate)?;
            }
        }
        Ok(())
    }

    fn mcx(&mut self, controls: &[Control], target: usize) {
        let (mask, val) = control_mask(controls);
        if val & self.idle_mask() != 0 {
            return;
        }
        let tbit = 1usize << target;
        let fixed = mask | tbit | self.idle_mask();
        let amps = &mut self.amps;
        for_each_matching(self.num_qubits, fixed, val, |i| amps.swap(i, i | tbit));
        self.support |= tbit;
    }

    fn phase(&mut self, controls: &[Control], qubit: usize, angle: f64) {
        let (mask, val) = control_mask(controls);
        let bit = 1usize << qubit;
        if (val | bit) & self.idle_mask() != 0 {
            return;
        }
        let factor = Complex64::from_polar(1.0, angle);
        let fixed = mask | bit | self.idle_mask();
        let amps = &mut self.amps;
        for_each_matching(self.num_qubits, fixed, val | bit, |i| amps[i] *= factor);
    }

    fn qft(&mut self, qubits: &[usize], inverse: bool) {
        let m = qubits.len();
        if m == 0 {
            return;
        }
        let size = 1usize << m;
        let offsets: Vec<usize> = (0..size)
            .map(|k| {
                qubits
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| (k >> b) & 1 == 1)
                    .fold(0, |acc, (_, &q)| acc | 1 << q)
            })
            .collect();
        let mask = offsets[size - 1];
        let sign = if inverse { -1.0 } else { 1.0 };
        let norm = 1.0 / (size as f64).sqrt();
        let twiddle: Vec<Complex64> = (0..size)
            .map(|k| Complex64::from_polar(norm, sign * 2.0 * PI * k as f64 / size as f64))
            .collect();
        let zero = Complex64::new(0.0, 0.0);
        let mut input = vec![zero; size];
        let mut output = vec![zero; size];
        let mut register_support = 0usize;
        let fixed = mask | (self.idle_mask() & !mask);
        let amps = &mut self.amps;
        for_each_matching(self.num_qubits, fixed, 0, |base| {
            let mut fiber_norm = 0.0;
            for (k, off) in offsets.iter().enumerate() {
                input[k] = amps[base | off];
                fiber_norm += input[k].norm_sqr();
            }
            if fiber_norm == 0.0 {
                return;
            }
            let flush = QFT_FLUSH_RELATIVE * fiber_norm.sqrt();
            for (y, out) in output.iter_mut().enumerate() {
                let mut acc = zero;
                for (x, a) in input.iter().enumerate() {
                    acc += a * twiddle[(x * y) & (size - 1)];
                }
                if inverse && acc.norm() < flush {
                    acc = zero;
                }
                *out = acc;
            }
            for (off, out) in offsets.iter().zip(&output) {
                amps[base | off] = *out;
                if *out != zero {
                    register_support |= off;
                }
            }
        });
        self.support = if inverse {
            (self.support & !mask) | register_support
        } else {
            self.support | mask
        };
    }
}
