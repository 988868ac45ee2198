use std::collections::BTreeMap;
use std::fmt;

use crate::error::{QlbmError, Result};

/// A control qubit with its required value (`on = false` is a negative control).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub on: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, on: true }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, on: false }
    }

    pub fn when(qubit: usize, on: bool) -> Self {
        Self { qubit, on }
    }
}

/// Controls requiring the register (listed least-significant qubit first)
/// to hold exactly `value`.
pub fn value_controls(register: &[usize], value: usize) -> Vec<Control> {
    register
        .iter()
        .enumerate()
        .map(|(b, &q)| Control::when(q, (value >> b) & 1 == 1))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Multi-controlled NOT; a plain X when `controls` is empty.
    Mcx { controls: Vec<Control>, target: usize },
    /// Multiplies the amplitude by `exp(i angle)` where `qubit` is 1 and all
    /// controls match.
    Phase {
        controls: Vec<Control>,
        qubit: usize,
        angle: f64,
    },
    /// Quantum Fourier transform on a subregister, qubits listed least
    /// significant first: `|x> -> 2^{-m/2} sum_y exp(2 pi i x y / 2^m) |y>`.
    /// `inverse` uses the conjugate kernel.
    Qft { qubits: Vec<usize>, inverse: bool },
}

fn check_distinct(qubits: impl IntoIterator<Item = usize>) -> Result<()> {
    let mut seen = Vec::new();
    for q in qubits {
        if seen.contains(&q) {
            return Err(QlbmError::DuplicateQubit(q));
        }
        seen.push(q);
    }
    Ok(())
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Gate::Mcx {
            controls: Vec::new(),
            target,
        }
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Result<Self> {
        check_distinct(controls.iter().map(|c| c.qubit).chain([target]))?;
        Ok(Gate::Mcx { controls, target })
    }

    pub fn phase(controls: Vec<Control>, qubit: usize, angle: f64) -> Result<Self> {
        check_distinct(controls.iter().map(|c| c.qubit).chain([qubit]))?;
        Ok(Gate::Phase { controls, qubit, angle })
    }

    pub fn qft(qubits: Vec<usize>, inverse: bool) -> Result<Self> {
        check_distinct(qubits.iter().copied())?;
        Ok(Gate::Qft { qubits, inverse })
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Mcx { controls, target } => controls.iter().map(|c| c.qubit).chain([*target]).collect(),
            Gate::Phase { controls, qubit, .. } => controls.iter().map(|c| c.qubit).chain([*qubit]).collect(),
            Gate::Qft { qubits, .. } => qubits.clone(),
        }
    }

    /// True for gates that only permute computational basis states.
    pub fn is_permutation(&self) -> bool {
        matches!(self, Gate::Mcx { .. })
    }
}

fn fmt_controls(f: &mut fmt::Formatter<'_>, controls: &[Control]) -> fmt::Result {
    write!(f, "[")?;
    for (k, c) in controls.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{}{}", if c.on { "" } else { "!" }, c.qubit)?;
    }
    write!(f, "]")
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Mcx { controls, target } => {
                if controls.is_empty() {
                    write!(f, "x target={target}")
                } else {
                    write!(f, "mcx controls=")?;
                    fmt_controls(f, controls)?;
                    write!(f, " target={target}")
                }
            }
            Gate::Phase { controls, qubit, angle } => {
                write!(f, "phase({angle:.6}) controls=")?;
                fmt_controls(f, controls)?;
                write!(f, " target={qubit}")
            }
            Gate::Qft { qubits, inverse } => {
                // most significant qubit first, matching register diagrams
                let msb_first: Vec<String> = qubits.iter().rev().map(|q| q.to_string()).collect();
                write!(
                    f,
                    "{} target=[{}]",
                    if *inverse { "iqft" } else { "qft" },
                    msb_first.join(",")
                )
            }
        }
    }
}

/// Gate list plus counts of the arithmetic blocks it was assembled from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    pub gates: Vec<Gate>,
    pub shifts: usize,
    pub comparisons: usize,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn append(&mut self, other: &Circuit) {
        self.gates.extend(other.gates.iter().cloned());
        self.shifts += other.shifts;
        self.comparisons += other.comparisons;
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn counts(&self) -> GateCounts {
        let mut counts = GateCounts {
            shifts: self.shifts,
            comparisons: self.comparisons,
            ..GateCounts::default()
        };
        for g in &self.gates {
            match g {
                Gate::Mcx { controls, .. } if controls.is_empty() => counts.x += 1,
                Gate::Mcx { controls, .. } => *counts.mcx_by_arity.entry(controls.len()).or_default() += 1,
                Gate::Phase { .. } => counts.phase += 1,
                Gate::Qft { .. } => counts.qft_blocks += 1,
            }
        }
        counts
    }

    /// Largest qubit index referenced, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        self.gates.iter().flat_map(|g| g.qubits()).max()
    }
}

/// Gate tally used by the gate report.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub x: usize,
    /// MCX count keyed by number of controls.
    pub mcx_by_arity: BTreeMap<usize, usize>,
    pub phase: usize,
    pub qft_blocks: usize,
    pub shifts: usize,
    pub comparisons: usize,
}

impl GateCounts {
    pub fn mcx(&self) -> usize {
        self.mcx_by_arity.values().sum()
    }

    pub fn total_gates(&self) -> usize {
        self.x + self.mcx() + self.phase + self.qft_blocks
    }

    pub fn is_empty(&self) -> bool {
        self.total_gates() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_qubits_rejected() {
        assert!(matches!(
            Gate::mcx(vec![Control::on(1), Control::off(1)], 0),
            Err(QlbmError::DuplicateQubit(1))
        ));
        assert!(Gate::mcx(vec![Control::on(2)], 2).is_err());
        assert!(Gate::qft(vec![0, 1, 0], false).is_err());
        assert!(Gate::phase(vec![Control::on(0)], 0, 1.0).is_err());
    }

    #[test]
    fn counts_by_kind() {
        let mut c = Circuit::new();
        c.push(Gate::x(0));
        c.push(Gate::mcx(vec![Control::on(1)], 0).unwrap());
        c.push(Gate::mcx(vec![Control::on(1), Control::off(2)], 0).unwrap());
        c.push(Gate::mcx(vec![Control::on(3), Control::off(2)], 0).unwrap());
        c.push(Gate::qft(vec![0, 1], false).unwrap());
        c.push(Gate::phase(vec![], 1, 0.5).unwrap());
        let k = c.counts();
        assert_eq!(k.x, 1);
        assert_eq!(k.mcx_by_arity.get(&1), Some(&1));
        assert_eq!(k.mcx_by_arity.get(&2), Some(&2));
        assert_eq!(k.qft_blocks, 1);
        assert_eq!(k.phase, 1);
        assert_eq!(k.total_gates(), 6);
    }

    #[test]
    fn display_lists_msb_first() {
        let g = Gate::qft(vec![4, 5, 6], true).unwrap();
        assert_eq!(g.to_string(), "iqft target=[6,5,4]");
        let g = Gate::mcx(vec![Control::on(1), Control::off(3)], 0).unwrap();
        assert_eq!(g.to_string(), "mcx controls=[1,!3] target=0");
    }

    #[test]
    fn value_controls_bit_pattern() {
        let c = value_controls(&[7, 8, 9], 0b101);
        assert_eq!(c, vec![Control::on(7), Control::off(8), Control::on(9)]);
    }
}
