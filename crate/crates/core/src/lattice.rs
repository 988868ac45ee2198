//! Lattice geometry: DdQq velocity sets, grid extents, box obstacles and
//! the boundary links between fluid and solid cells.

use crate::error::{QlbmError, Result};

/// Integer lattice velocity with components in {-1, 0, +1}.
pub type Velocity = Vec<i8>;

/// Returns the DdQq velocity set for `d` in {1, 2, 3}.
///
/// Ordering: rest vector first, then the axis vectors (`+e_1 .. +e_d`,
/// `-e_1 .. -e_d`), then the vectors with two nonzero components, then (for
/// d = 3) the corner vectors. Diagonals in a plane run counter-clockwise
/// starting at `(+,+)`, so d = 2 gives
/// `(0,0) (1,0) (0,1) (-1,0) (0,-1) (1,1) (-1,1) (-1,-1) (1,-1)`.
pub fn build_velocity_set(d: usize) -> Result<Vec<Velocity>> {
    if !(1..=3).contains(&d) {
        return Err(QlbmError::UnsupportedDimension(d));
    }
    let unit = |axis: usize, sign: i8| {
        let mut v = vec![0i8; d];
        v[axis] = sign;
        v
    };
    let mut out = vec![vec![0i8; d]];
    for sign in [1, -1] {
        for axis in 0..d {
            out.push(unit(axis, sign));
        }
    }
    const PLANE_SIGNS: [(i8, i8); 4] = [(1, 1), (-1, 1), (-1, -1), (1, -1)];
    for a in 0..d {
        for b in (a + 1)..d {
            for (sa, sb) in PLANE_SIGNS {
                let mut v = vec![0i8; d];
                v[a] = sa;
                v[b] = sb;
                out.push(v);
            }
        }
    }
    if d == 3 {
        for sz in [1, -1] {
            for (sx, sy) in PLANE_SIGNS {
                out.push(vec![sx, sy, sz]);
            }
        }
    }
    debug_assert_eq!(out.len(), 3usize.pow(d as u32));
    Ok(out)
}

/// Dimension, grid extents and velocity set of a DdQq lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeDescriptor {
    extents: Vec<usize>,
    velocities: Vec<Velocity>,
    opposite: Vec<usize>,
}

impl LatticeDescriptor {
    /// Every extent must be a power of two, at least 2.
    pub fn new(extents: &[usize]) -> Result<Self> {
        let velocities = build_velocity_set(extents.len())?;
        for (axis, &n) in extents.iter().enumerate() {
            if n < 2 || !n.is_power_of_two() {
                return Err(QlbmError::InvalidExtent { axis, extent: n });
            }
        }
        let opposite = velocities
            .iter()
            .map(|v| {
                let neg: Velocity = v.iter().map(|c| -c).collect();
                velocities
                    .iter()
                    .position(|w| *w == neg)
                    .expect("velocity set is symmetric")
            })
            .collect();
        Ok(Self {
            extents: extents.to_vec(),
            velocities,
            opposite,
        })
    }

    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn q(&self) -> usize {
        self.velocities.len()
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn velocities(&self) -> &[Velocity] {
        &self.velocities
    }

    pub fn velocity(&self, i: usize) -> &[i8] {
        &self.velocities[i]
    }

    /// Index of the velocity `-e_i`.
    pub fn opposite(&self, i: usize) -> usize {
        self.opposite[i]
    }

    /// Number of position qubits for axis `axis`.
    pub fn axis_bits(&self, axis: usize) -> usize {
        self.extents[axis].trailing_zeros() as usize
    }

    pub fn num_cells(&self) -> usize {
        self.extents.iter().product()
    }

    /// Linear cell index with axis 0 varying fastest. This is the same
    /// integer the position register holds in the quantum encoding.
    pub fn cell_index(&self, coords: &[usize]) -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for (c, n) in coords.iter().zip(&self.extents) {
            idx += c * stride;
            stride *= n;
        }
        idx
    }

    pub fn cell_coords(&self, mut idx: usize) -> Vec<usize> {
        self.extents
            .iter()
            .map(|n| {
                let c = idx % n;
                idx /= n;
                c
            })
            .collect()
    }

    /// `coords + e_i` with periodic wraparound.
    pub fn neighbor(&self, coords: &[usize], i: usize) -> Vec<usize> {
        self.shifted(coords, &self.velocities[i], 1)
    }

    /// `coords + sign * v` with periodic wraparound.
    pub fn shifted(&self, coords: &[usize], v: &[i8], sign: i64) -> Vec<usize> {
        coords
            .iter()
            .zip(v)
            .zip(&self.extents)
            .map(|((&c, &e), &n)| (c as i64 + sign * e as i64).rem_euclid(n as i64) as usize)
            .collect()
    }
}

/// Axis-aligned obstacle box with inclusive corner coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstacleBox {
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
}

impl ObstacleBox {
    pub fn new(lower: Vec<usize>, upper: Vec<usize>) -> Self {
        Self { lower, upper }
    }

    pub fn contains(&self, coords: &[usize]) -> bool {
        coords
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(c, (lo, hi))| lo <= c && c <= hi)
    }

    /// True when the two boxes overlap or touch (including diagonally).
    fn touches(&self, other: &ObstacleBox) -> bool {
        (0..self.lower.len()).all(|a| self.lower[a] <= other.upper[a] + 1 && other.lower[a] <= self.upper[a] + 1)
    }
}

/// A lattice together with its solid obstacles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainGeometry {
    lattice: LatticeDescriptor,
    obstacles: Vec<ObstacleBox>,
    solid: Vec<bool>,
}

impl DomainGeometry {
    /// Validates that each box lies strictly inside the grid with at least
    /// one fluid cell to the wrap seam, and that no two boxes touch.
    pub fn new(lattice: LatticeDescriptor, obstacles: Vec<ObstacleBox>) -> Result<Self> {
        let d = lattice.dim();
        for (k, b) in obstacles.iter().enumerate() {
            if b.lower.len() != d || b.upper.len() != d {
                return Err(QlbmError::InvalidObstacle {
                    index: k,
                    reason: format!("expected {d} coordinates per corner"),
                });
            }
            for a in 0..d {
                let (lo, hi, n) = (b.lower[a], b.upper[a], lattice.extents()[a]);
                if lo > hi {
                    return Err(QlbmError::InvalidObstacle {
                        index: k,
                        reason: format!("lower {lo} exceeds upper {hi} on axis {a}"),
                    });
                }
                if lo < 1 || hi + 2 > n {
                    return Err(QlbmError::InvalidObstacle {
                        index: k,
                        reason: format!(
                            "axis {a} range [{lo}, {hi}] must lie within [1, {}] to keep a fluid cell at the periodic seam",
                            n as i64 - 2
                        ),
                    });
                }
            }
            for (k2, other) in obstacles.iter().enumerate().take(k) {
                if b.touches(other) {
                    return Err(QlbmError::InvalidObstacle {
                        index: k,
                        reason: format!("touches or overlaps obstacle {k2}"),
                    });
                }
            }
        }
        let solid = (0..lattice.num_cells())
            .map(|c| {
                let x = lattice.cell_coords(c);
                obstacles.iter().any(|b| b.contains(&x))
            })
            .collect();
        Ok(Self {
            lattice,
            obstacles,
            solid,
        })
    }

    pub fn lattice(&self) -> &LatticeDescriptor {
        &self.lattice
    }

    pub fn obstacles(&self) -> &[ObstacleBox] {
        &self.obstacles
    }

    pub fn is_solid(&self, coords: &[usize]) -> bool {
        self.solid[self.lattice.cell_index(coords)]
    }

    pub fn is_solid_cell(&self, cell: usize) -> bool {
        self.solid[cell]
    }

    /// All `(x_f, i)` with `x_f` fluid and `x_f + e_i` solid, ordered by
    /// `x_f` lexicographically (axis 0 first) and then by `i`.
    pub fn boundary_links(&self) -> Vec<BoundaryLink> {
        let lat = &self.lattice;
        let mut cells: Vec<Vec<usize>> = (0..lat.num_cells())
            .filter(|&c| !self.solid[c])
            .map(|c| lat.cell_coords(c))
            .collect();
        cells.sort();
        let mut links = Vec::new();
        for x in cells {
            for i in 0..lat.q() {
                if self.is_solid(&lat.neighbor(&x, i)) {
                    links.push(BoundaryLink {
                        fluid: x.clone(),
                        velocity: i,
                    });
                }
            }
        }
        links
    }
}

/// Fluid cell `fluid` whose population `velocity` streams into a solid cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryLink {
    pub fluid: Vec<usize>,
    pub velocity: usize,
}
