use crate::lattice::LatticeDescriptor;

/// Qubit assignment for a DdQq lattice.
///
/// Basis index bits, least significant first:
///
/// * velocity, two qubits per axis `j`: `v_dir^j` at `2j`, `v^j` at `2j + 1`
///   (the written ket reads `|v^d v_dir^d ... v^1 v_dir^1>`);
/// * position, axis 0 lowest, each axis register holding the binary coordinate;
/// * ancillae: `a_v^j` per axis, `a_o`, `a_{o,+}`, `a_{o,-}`, one range
///   scratch qubit per axis, and the comparator carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    dim: usize,
    position: Vec<Vec<usize>>,
    ancilla_base: usize,
    num_qubits: usize,
}

impl RegisterLayout {
    pub fn new(lattice: &LatticeDescriptor) -> Self {
        let dim = lattice.dim();
        let n_v = 2 * dim;
        let mut next = n_v;
        let position = (0..dim)
            .map(|axis| {
                let bits = lattice.axis_bits(axis);
                let reg: Vec<usize> = (next..next + bits).collect();
                next += bits;
                reg
            })
            .collect();
        let ancilla_base = next;
        let n_a = 2 * dim + 4;
        Self {
            dim,
            position,
            ancilla_base,
            num_qubits: ancilla_base + n_a,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_velocity_qubits(&self) -> usize {
        2 * self.dim
    }

    pub fn num_position_qubits(&self) -> usize {
        self.ancilla_base - self.num_velocity_qubits()
    }

    pub fn num_ancillae(&self) -> usize {
        self.num_qubits - self.ancilla_base
    }

    /// Qubits below the ancillae: position and velocity.
    pub fn num_system_qubits(&self) -> usize {
        self.ancilla_base
    }

    /// Position register of `axis`, least significant qubit first.
    pub fn position(&self, axis: usize) -> &[usize] {
        &self.position[axis]
    }

    pub fn v(&self, axis: usize) -> usize {
        2 * axis + 1
    }

    pub fn v_dir(&self, axis: usize) -> usize {
        2 * axis
    }

    pub fn a_v(&self, axis: usize) -> usize {
        self.ancilla_base + axis
    }

    pub fn a_o(&self) -> usize {
        self.ancilla_base + self.dim
    }

    pub fn a_plus(&self) -> usize {
        self.ancilla_base + self.dim + 1
    }

    pub fn a_minus(&self) -> usize {
        self.ancilla_base + self.dim + 2
    }

    pub fn range_scratch(&self, axis: usize) -> usize {
        self.ancilla_base + self.dim + 3 + axis
    }

    pub fn carry(&self) -> usize {
        self.ancilla_base + 2 * self.dim + 3
    }

    pub fn ancilla_mask(&self) -> usize {
        ((1usize << self.num_qubits) - 1) & !((1usize << self.ancilla_base) - 1)
    }

    /// Basis index of `(ancillae = 0, cell, velocity bits)`.
    pub fn basis_index(&self, cell: usize, velocity_bits: usize) -> usize {
        cell << self.num_velocity_qubits() | velocity_bits
    }

    /// `(cell, velocity bits)` of a basis index, ignoring ancillae.
    pub fn split_index(&self, index: usize) -> (usize, usize) {
        let n_v = self.num_velocity_qubits();
        let cell = (index & ((1usize << self.ancilla_base) - 1)) >> n_v;
        (cell, index & ((1 << n_v) - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d1q3_n4_layout() {
        let lat = LatticeDescriptor::new(&[4]).unwrap();
        let l = RegisterLayout::new(&lat);
        assert_eq!(l.v_dir(0), 0);
        assert_eq!(l.v(0), 1);
        assert_eq!(l.position(0), &[2, 3]);
        assert_eq!(l.num_system_qubits(), 4);
        assert_eq!(l.num_ancillae(), 6);
        assert_eq!(l.basis_index(1, 0b10), 6);
    }

    #[test]
    fn qubits_distinct_and_counted() {
        let lat = LatticeDescriptor::new(&[8, 4, 2]).unwrap();
        let l = RegisterLayout::new(&lat);
        let mut all: Vec<usize> = Vec::new();
        for a in 0..3 {
            all.extend(l.position(a));
            all.extend([l.v(a), l.v_dir(a), l.a_v(a), l.range_scratch(a)]);
        }
        all.extend([l.a_o(), l.a_plus(), l.a_minus(), l.carry()]);
        let n = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), n);
        assert_eq!(n, l.num_qubits());
        assert_eq!(l.num_position_qubits(), 6);
        assert_eq!(l.num_velocity_qubits(), 6);
        assert!(all.iter().all(|&q| q < l.num_qubits()));
    }
}
