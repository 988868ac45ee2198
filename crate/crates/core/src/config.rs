//! Run configuration, read from TOML.
//!
//! ```toml
//! extents = [4]            # one power-of-two extent per axis
//! timesteps = 1
//! seed = 0
//!
//! [[obstacles]]            # inclusive box corners
//! lower = [2]
//! upper = [2]
//!
//! [initial]                # uniform | impulse | table | random
//! kind = "impulse"
//! cell = [1]
//! velocity = 1
//! value = 1.0
//!
//! [measurement]
//! mode = "observable"      # observable | ancilla | shots
//! shots = 1000
//!
//! [output]
//! dir = "out"
//! compare = false
//! dump_field = false
//! ```

use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::classical::ClassicalFlowField;
use crate::error::{QlbmError, Result};
use crate::lattice::{DomainGeometry, LatticeDescriptor, ObstacleBox};
use crate::qmem::{ForceMeasurementConfig, MeasurementMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; must match the number of extents when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<Spanned<usize>>,
    pub extents: Spanned<Vec<usize>>,
    #[serde(default)]
    pub timesteps: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub obstacles: Vec<Spanned<ObstacleSpec>>,
    pub initial: Spanned<InitialField>,
    #[serde(default)]
    pub measurement: MeasurementSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSpec {
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialField {
    /// Same value on every fluid (cell, velocity) slot.
    Uniform { value: f64 },
    /// A single population.
    Impulse {
        cell: Vec<usize>,
        velocity: usize,
        #[serde(default = "one")]
        value: f64,
    },
    /// Listed populations; everything else zero.
    Table { entries: Vec<PopulationEntry> },
    /// Independent uniform values in `[low, high)` on fluid slots, drawn from `seed`.
    Random {
        #[serde(default)]
        low: f64,
        #[serde(default = "one")]
        high: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationEntry {
    pub cell: Vec<usize>,
    pub velocity: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSection {
    #[serde(default = "default_mode")]
    pub mode: MeasurementMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

fn default_mode() -> MeasurementMode {
    MeasurementMode::Observable
}

impl Default for MeasurementSection {
    fn default() -> Self {
        Self {
            mode: default_mode(),
            shots: None,
            epsilon: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub compare: bool,
    #[serde(default)]
    pub dump_field: bool,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            compare: false,
            dump_field: false,
        }
    }
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

impl RunConfig {
    /// Parses and validates. Errors carry the line of the offending entry.
    pub fn parse(source: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(source).map_err(|e| QlbmError::Config {
            line: e.span().map(|s| line_of(source, s.start)).unwrap_or(1),
            message: e.message().to_string(),
        })?;
        config.validate(source)?;
        Ok(config)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is serializable")
    }

    fn validate(&self, source: &str) -> Result<()> {
        let err = |span: std::ops::Range<usize>, message: String| QlbmError::Config {
            line: line_of(source, span.start),
            message,
        };
        let d = self.extents.get_ref().len();
        if let Some(dim) = &self.dimension {
            if *dim.get_ref() != d {
                return Err(err(
                    dim.span(),
                    format!("dimension {} does not match {d} extents", dim.get_ref()),
                ));
            }
        }
        let lattice =
            LatticeDescriptor::new(self.extents.get_ref()).map_err(|e| err(self.extents.span(), e.to_string()))?;
        let boxes = self.obstacle_boxes();
        for (k, spec) in self.obstacles.iter().enumerate() {
            // validate each box against the grid and all earlier boxes
            DomainGeometry::new(lattice.clone(), boxes[..=k].to_vec()).map_err(|e| err(spec.span(), e.to_string()))?;
        }
        if self.measurement.mode == MeasurementMode::Shots && self.measurement.shots.unwrap_or(0) == 0 {
            let at = source.find("[measurement]").unwrap_or(0);
            return Err(err(at..at, "measurement mode \"shots\" needs shots >= 1".into()));
        }
        let geometry = Arc::new(DomainGeometry::new(lattice, boxes).expect("validated above"));
        self.initial_field(&geometry)
            .map_err(|e| err(self.initial.span(), e.to_string()))?;
        Ok(())
    }

    pub fn obstacle_boxes(&self) -> Vec<ObstacleBox> {
        self.obstacles
            .iter()
            .map(|o| ObstacleBox::new(o.get_ref().lower.clone(), o.get_ref().upper.clone()))
            .collect()
    }

    pub fn geometry(&self) -> Result<Arc<DomainGeometry>> {
        let lattice = LatticeDescriptor::new(self.extents.get_ref())?;
        Ok(Arc::new(DomainGeometry::new(lattice, self.obstacle_boxes())?))
    }

    pub fn measurement_config(&self) -> ForceMeasurementConfig {
        ForceMeasurementConfig {
            mode: self.measurement.mode,
            shots: self.measurement.shots,
            seed: self.seed,
            epsilon: self.measurement.epsilon,
        }
    }

    /// Builds the `t = 0` field; rejects mass on solid cells and zero total mass.
    pub fn initial_field(&self, geometry: &Arc<DomainGeometry>) -> Result<ClassicalFlowField> {
        let lat = geometry.lattice();
        let q = lat.q();
        let n = lat.num_cells() * q;
        let check_cell = |cell: &[usize], velocity: usize| -> Result<usize> {
            if cell.len() != lat.dim() || cell.iter().zip(lat.extents()).any(|(c, n)| c >= n) || velocity >= q {
                return Err(QlbmError::Config {
                    line: 0,
                    message: format!("population ({cell:?}, {velocity}) is outside the lattice"),
                });
            }
            Ok(lat.cell_index(cell) * q + velocity)
        };
        let f = match self.initial.get_ref() {
            InitialField::Uniform { value } => (0..n)
                .map(|s| if geometry.is_solid_cell(s / q) { 0.0 } else { *value })
                .collect(),
            InitialField::Impulse { cell, velocity, value } => {
                let mut f = vec![0.0; n];
                f[check_cell(cell, *velocity)?] = *value;
                f
            }
            InitialField::Table { entries } => {
                let mut f = vec![0.0; n];
                for e in entries {
                    f[check_cell(&e.cell, e.velocity)?] = e.value;
                }
                f
            }
            InitialField::Random { low, high } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..n)
                    .map(|s| {
                        let v = low + (high - low) * rng.random::<f64>();
                        if geometry.is_solid_cell(s / q) {
                            0.0
                        } else {
                            v
                        }
                    })
                    .collect()
            }
        };
        let field = ClassicalFlowField::new(geometry.clone(), f)?;
        let mass = field.total_mass();
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(QlbmError::ZeroMass(mass));
        }
        Ok(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE4: &str = r#"
extents = [4]
timesteps = 1

[[obstacles]]
lower = [2]
upper = [2]

[initial]
kind = "impulse"
cell = [1]
velocity = 1
"#;

    #[test]
    fn parses_line4() {
        let c = RunConfig::parse(LINE4).unwrap();
        assert_eq!(c.extents.get_ref(), &vec![4]);
        assert_eq!(c.measurement.mode, MeasurementMode::Observable);
        let g = c.geometry().unwrap();
        let f = c.initial_field(&g).unwrap();
        assert_eq!(f.get(&[1], 1), 1.0);
    }

    #[test]
    fn round_trip() {
        let c = RunConfig::parse(LINE4).unwrap();
        let again = RunConfig::parse(&c.to_toml_string()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn bad_obstacle_reports_its_line() {
        let src = LINE4.replace("upper = [2]", "upper = [3]");
        match RunConfig::parse(&src) {
            Err(QlbmError::Config { line, message }) => {
                assert_eq!(line, 5, "{message}");
                assert!(message.contains("obstacle"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_line() {
        let src = "extents = [4]\ntimesteps = -1\n[initial]\nkind = \"uniform\"\nvalue = 1.0\n";
        match RunConfig::parse(src) {
            Err(QlbmError::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn impulse_on_solid_rejected() {
        let src = LINE4.replace("cell = [1]", "cell = [2]");
        match RunConfig::parse(&src) {
            Err(QlbmError::Config { line, message }) => {
                assert_eq!(line, 9);
                assert!(message.contains("solid"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        let src = format!("dimension = 2\n{LINE4}");
        assert!(matches!(RunConfig::parse(&src), Err(QlbmError::Config { line: 1, .. })));
    }

    #[test]
    fn random_initial_is_seeded() {
        let src = "extents = [8, 8]\nseed = 3\n[initial]\nkind = \"random\"\n";
        let c = RunConfig::parse(src).unwrap();
        let g = c.geometry().unwrap();
        assert_eq!(c.initial_field(&g).unwrap(), c.initial_field(&g).unwrap());
    }
}
