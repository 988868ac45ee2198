use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::state::StateVector;
use crate::error::{QlbmError, Result};

/// Real diagonal operator stored as sorted `(basis index, value)` pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagonalObservable {
    num_qubits: usize,
    entries: Vec<(usize, f64)>,
}

impl DiagonalObservable {
    /// Entries are sorted by index; repeated indices are summed and zeros dropped.
    pub fn new(num_qubits: usize, mut entries: Vec<(usize, f64)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += v,
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|e| e.1 != 0.0);
        Self {
            num_qubits,
            entries: merged,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.len()
    }

    pub fn diag(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .map(|k| self.entries[k].1)
            .unwrap_or(0.0)
    }

    /// Dense diagonal; only for small systems.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; 1 << self.num_qubits];
        for &(i, v) in &self.entries {
            d[i] = v;
        }
        d
    }
}

/// `<psi|O|psi> = sum_k diag[k] |psi_k|^2`, summed in index order.
pub fn expectation(state: &StateVector, obs: &DiagonalObservable) -> f64 {
    let amps = state.amplitudes();
    obs.entries().iter().map(|&(i, v)| v * amps[i].norm_sqr()).sum()
}

/// Marginal probability of reading `outcome` on `qubit`.
pub fn ancilla_probability(state: &StateVector, qubit: usize, outcome: bool) -> f64 {
    let bit = 1usize << qubit;
    let (mut p0, mut p1) = (0.0, 0.0);
    for (i, a) in state.amplitudes().iter().enumerate() {
        if i & bit == 0 {
            p0 += a.norm_sqr();
        } else {
            p1 += a.norm_sqr();
        }
    }
    let total = p0 + p1;
    if outcome {
        p1 / total
    } else {
        p0 / total
    }
}

/// Joint distribution of `qubits`; outcome bit `b` is the value of `qubits[b]`.
pub fn marginal_distribution(state: &StateVector, qubits: &[usize]) -> Vec<f64> {
    let mut probs = vec![0.0; 1 << qubits.len()];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let outcome = qubits
            .iter()
            .enumerate()
            .fold(0, |acc, (b, &q)| acc | ((i >> q) & 1) << b);
        probs[outcome] += p;
    }
    probs
}

/// Draws `shots` measurements of `qubits` and returns counts per outcome
/// (same outcome encoding as [`marginal_distribution`]). Deterministic in `seed`.
/// The state is not collapsed.
pub fn sample_shots(state: &StateVector, qubits: &[usize], shots: u64, seed: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(QlbmError::MissingShots);
    }
    let probs = marginal_distribution(state, qubits);
    let dist = WeightedIndex::new(&probs).expect("state has nonzero norm");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        counts[dist.sample(&mut rng)] += 1;
    }
    Ok(counts)
}
