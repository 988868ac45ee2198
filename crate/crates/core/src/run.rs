//! Batch driver: T quantum timesteps with a force measurement per step,
//! optionally in lockstep with the classical reference, written as CSV.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::info;

use crate::circuits::TimestepPlan;
use crate::config::RunConfig;
use crate::engine::GateCounts;
use crate::error::{QlbmError, Result};
use crate::qmem::{
    measure_force_ancilla, measure_force_observable, ForceMeasurementConfig, ForceVector, MeasurementMode,
};

/// Largest statevector the driver will allocate (2^26 amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Comparison runs fail when the quantum and classical fields differ by more.
pub const COMPARE_TOLERANCE: f64 = 1e-8;

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub compare: bool,
    pub report_gates: bool,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub mode: Option<MeasurementMode>,
}

impl RunOptions {
    pub fn apply(&self, config: &mut RunConfig) {
        if self.compare {
            config.output.compare = true;
        }
        if let Some(out) = &self.out {
            config.output.dir = out.clone();
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(shots) = self.shots {
            config.measurement.shots = Some(shots);
        }
        if let Some(mode) = self.mode {
            config.measurement.mode = mode;
        }
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t: u64,
    pub force: ForceVector,
    /// Decoded total mass after the step.
    pub total_mass: f64,
    pub classical_force: Option<Vec<f64>>,
    pub max_deviation: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub records: Vec<StepRecord>,
    pub forces_csv: PathBuf,
    pub field_csv: Option<PathBuf>,
    pub gate_report: Option<GateReport>,
}

impl RunSummary {
    pub fn max_deviation(&self) -> Option<f64> {
        self.records
            .iter()
            .filter_map(|r| r.max_deviation)
            .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.max(d))))
    }

    /// False when a comparison run drifted past [`COMPARE_TOLERANCE`].
    pub fn passed(&self) -> bool {
        self.max_deviation().is_none_or(|d| d <= COMPARE_TOLERANCE)
    }
}

/// Full double precision with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn check_budget(plan: &TimestepPlan) -> Result<()> {
    let needed = plan.layout().num_qubits();
    if needed > MAX_QUBITS {
        return Err(QlbmError::QubitBudget {
            needed,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

fn forces_header(d: usize, compare: bool) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for prefix in ["F", "stderr", "P_plus", "P_minus"] {
        h.extend((1..=d).map(|j| format!("{prefix}_{j}")));
    }
    h.push("total_mass".into());
    if compare {
        h.extend((1..=d).map(|j| format!("F_classical_{j}")));
        h.push("max_field_deviation".into());
    }
    h
}

fn forces_row(r: &StepRecord) -> Vec<String> {
    let mut row = vec![r.t.to_string()];
    for v in [&r.force.components, &r.force.stderr, &r.force.p_plus, &r.force.p_minus] {
        row.extend(v.iter().map(|&x| format_f64(x)));
    }
    row.push(format_f64(r.total_mass));
    if let (Some(fc), Some(dev)) = (&r.classical_force, r.max_deviation) {
        row.extend(fc.iter().map(|&x| format_f64(x)));
        row.push(format_f64(dev));
    }
    row
}

/// Runs the configured simulation and writes `forces.csv` (and `field.csv`,
/// `gates.csv` when requested) into the output directory.
pub fn run(config: &RunConfig, report_gates: bool) -> Result<RunSummary> {
    let geometry = config.geometry()?;
    let plan = TimestepPlan::new(geometry.clone())?;
    check_budget(&plan)?;
    let layout = plan.layout().clone();
    let d = layout.dim();
    let compare = config.output.compare;
    let mcfg = config.measurement_config();
    if mcfg.mode == MeasurementMode::Shots && mcfg.shots.unwrap_or(0) == 0 {
        return Err(QlbmError::MissingShots);
    }

    let out_dir = &config.output.dir;
    fs::create_dir_all(out_dir)?;
    let forces_csv = out_dir.join("forces.csv");
    let mut forces = csv::Writer::from_path(&forces_csv)?;
    forces.write_record(forces_header(d, compare))?;

    let field_csv = config.output.dump_field.then(|| out_dir.join("field.csv"));
    let mut field_writer = match &field_csv {
        Some(p) => {
            let mut w = csv::Writer::from_path(p)?;
            let mut h = vec!["t".to_string()];
            h.extend((1..=d).map(|j| format!("x_{j}")));
            h.extend(["velocity".to_string(), "value".to_string()]);
            w.write_record(h)?;
            Some(w)
        }
        None => None,
    };

    let gate_report = if report_gates {
        let report = GateReport::new(&plan, config.extents.get_ref());
        report.write_csv(&out_dir.join("gates.csv"))?;
        Some(report)
    } else {
        None
    };

    let mut classical = config.initial_field(&geometry)?;
    let mut state = plan.encode(&classical)?;
    let mass = state.total_mass;
    let mut records = Vec::new();
    if let Some(w) = field_writer.as_mut() {
        write_field(w, 0, &classical)?;
    }

    for t in 0..config.timesteps {
        let force = match mcfg.mode {
            MeasurementMode::Observable => {
                let f = measure_force_observable(&state, &layout, &geometry);
                plan.step(&mut state.state)?;
                f
            }
            MeasurementMode::Ancilla | MeasurementMode::Shots => {
                let step_cfg = ForceMeasurementConfig {
                    seed: mcfg.seed.wrapping_add(t << 8),
                    ..mcfg.clone()
                };
                let mut measured = None;
                plan.step_with_tap(&mut state.state, |s| {
                    measured = Some(measure_force_ancilla(s, mass, &layout, &step_cfg)?);
                    Ok(())
                })?;
                measured.expect("tap runs once per step")
            }
        };
        let decoded = plan.decode(&state)?.with_time(t + 1);
        let (classical_force, max_deviation) = if compare {
            let fc = classical.mem_force();
            classical = classical.step()?;
            (Some(fc), Some(decoded.max_deviation(&classical)))
        } else {
            (None, None)
        };
        let record = StepRecord {
            t,
            force,
            total_mass: decoded.total_mass(),
            classical_force,
            max_deviation,
        };
        info!("t={t} F={:?}", record.force.components);
        forces.write_record(forces_row(&record))?;
        if let Some(w) = field_writer.as_mut() {
            write_field(w, t + 1, &decoded)?;
        }
        records.push(record);
    }
    forces.flush()?;
    if let Some(mut w) = field_writer {
        w.flush()?;
    }
    Ok(RunSummary {
        records,
        forces_csv,
        field_csv,
        gate_report,
    })
}

fn write_field<W: Write>(w: &mut csv::Writer<W>, t: u64, field: &crate::classical::ClassicalFlowField) -> Result<()> {
    let lat = field.lattice();
    let q = lat.q();
    for (slot, &v) in field.values().iter().enumerate() {
        let mut row = vec![t.to_string()];
        row.extend(lat.cell_coords(slot / q).iter().map(|c| c.to_string()));
        row.push((slot % q).to_string());
        row.push(format_f64(v));
        w.write_record(row)?;
    }
    Ok(())
}

/// Per-phase gate counts of one timestep.
#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub extents: Vec<usize>,
    pub num_qubits: usize,
    pub phases: Vec<(String, GateCounts)>,
}

impl GateReport {
    pub fn new(plan: &TimestepPlan, extents: &[usize]) -> Self {
        Self {
            extents: extents.to_vec(),
            num_qubits: plan.layout().num_qubits(),
            phases: plan
                .phases()
                .iter()
                .map(|(p, c)| (p.name().to_string(), c.counts()))
                .collect(),
        }
    }

    pub fn phase(&self, name: &str) -> Option<&GateCounts> {
        self.phases.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn total(&self) -> GateCounts {
        let mut total = GateCounts::default();
        for (_, c) in &self.phases {
            total.x += c.x;
            total.phase += c.phase;
            total.qft_blocks += c.qft_blocks;
            total.shifts += c.shifts;
            total.comparisons += c.comparisons;
            for (k, v) in &c.mcx_by_arity {
                *total.mcx_by_arity.entry(*k).or_default() += v;
            }
        }
        total
    }

    fn rows(&self) -> Vec<(String, GateCounts)> {
        let mut rows = self.phases.clone();
        rows.push(("total".into(), self.total()));
        rows
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            "phase",
            "x",
            "mcx",
            "mcx_by_arity",
            "phase_rotations",
            "qft_blocks",
            "shifts",
            "comparisons",
            "cells",
            "qubits",
        ])?;
        let cells: usize = self.extents.iter().product();
        for (name, c) in self.rows() {
            w.write_record([
                name,
                c.x.to_string(),
                c.mcx().to_string(),
                arity_string(&c),
                c.phase.to_string(),
                c.qft_blocks.to_string(),
                c.shifts.to_string(),
                c.comparisons.to_string(),
                cells.to_string(),
                self.num_qubits.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn arity_string(c: &GateCounts) -> String {
    c.mcx_by_arity
        .iter()
        .map(|(k, v)| format!("{k}:{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for GateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: usize = self.extents.iter().product();
        writeln!(f, "grid {:?} ({cells} cells), {} qubits", self.extents, self.num_qubits)?;
        writeln!(
            f,
            "{:<20} {:>6} {:>6} {:>7} {:>6} {:>7} {:>6}  mcx by arity",
            "phase", "x", "mcx", "phase", "qft", "shifts", "cmp"
        )?;
        for (name, c) in self.rows() {
            writeln!(
                f,
                "{:<20} {:>6} {:>6} {:>7} {:>6} {:>7} {:>6}  {}",
                name,
                c.x,
                c.mcx(),
                c.phase,
                c.qft_blocks,
                c.shifts,
                c.comparisons,
                arity_string(&c)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_f64(2.0), "2.0000000000000000e0");
        let x = 0.1 + 0.2;
        assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn header_layout() {
        assert_eq!(
            forces_header(2, true),
            vec![
                "t",
                "F_1",
                "F_2",
                "stderr_1",
                "stderr_2",
                "P_plus_1",
                "P_plus_2",
                "P_minus_1",
                "P_minus_2",
                "total_mass",
                "F_classical_1",
                "F_classical_2",
                "max_field_deviation"
            ]
        );
    }
}
