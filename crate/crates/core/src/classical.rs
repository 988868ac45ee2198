//! Classical lattice-Boltzmann reference: streaming, full-way bounce-back,
//! BGK collision and the link-wise momentum-exchange force.
//!
//! Every quantum-path result in this crate is checked against this module.

use std::sync::Arc;

use crate::error::{QlbmError, Result};
use crate::lattice::{DomainGeometry, LatticeDescriptor};

/// Largest flow speed accepted by [`equilibrium`].
pub const VELOCITY_GUARD: f64 = 0.3;

/// Densities `f_i(x)` on every (cell, velocity) slot, slot index `cell * q + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalFlowField {
    geometry: Arc<DomainGeometry>,
    f: Vec<f64>,
    t: u64,
}

impl ClassicalFlowField {
    /// Builds a field at `t = 0`. Densities must be finite, nonnegative and
    /// zero on solid cells.
    pub fn new(geometry: Arc<DomainGeometry>, f: Vec<f64>) -> Result<Self> {
        let lat = geometry.lattice();
        let q = lat.q();
        let expected = lat.num_cells() * q;
        if f.len() != expected {
            return Err(QlbmError::ShapeMismatch { expected, got: f.len() });
        }
        for (slot, &value) in f.iter().enumerate() {
            let (cell, velocity) = (slot / q, slot % q);
            if !(value.is_finite() && value >= 0.0) {
                return Err(QlbmError::NegativeDensity { cell, velocity, value });
            }
            if value != 0.0 && geometry.is_solid_cell(cell) {
                return Err(QlbmError::DensityInSolid { cell, velocity, value });
            }
        }
        Ok(Self { geometry, f, t: 0 })
    }

    pub fn zeros(geometry: Arc<DomainGeometry>) -> Self {
        let n = geometry.lattice().num_cells() * geometry.lattice().q();
        Self {
            geometry,
            f: vec![0.0; n],
            t: 0,
        }
    }

    pub fn geometry(&self) -> &Arc<DomainGeometry> {
        &self.geometry
    }

    pub fn lattice(&self) -> &LatticeDescriptor {
        self.geometry.lattice()
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn with_time(mut self, t: u64) -> Self {
        self.t = t;
        self
    }

    pub fn get(&self, coords: &[usize], i: usize) -> f64 {
        self.f[self.lattice().cell_index(coords) * self.lattice().q() + i]
    }

    /// Unchecked write; callers keep the nonnegativity invariant.
    pub fn set(&mut self, coords: &[usize], i: usize, value: f64) {
        let q = self.lattice().q();
        let idx = self.lattice().cell_index(coords) * q + i;
        self.f[idx] = value;
    }

    pub fn total_mass(&self) -> f64 {
        self.f.iter().sum()
    }

    /// Largest absolute slot-wise difference to `other`.
    pub fn max_deviation(&self, other: &ClassicalFlowField) -> f64 {
        self.f
            .iter()
            .zip(&other.f)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Moves every population one cell along its velocity, with periodic wrap.
    pub fn stream(&self) -> Self {
        let lat = self.lattice();
        let q = lat.q();
        let mut out = vec![0.0; self.f.len()];
        for cell in 0..lat.num_cells() {
            let x = lat.cell_coords(cell);
            for i in 0..q {
                let v = self.f[cell * q + i];
                if v != 0.0 {
                    let dest = lat.cell_index(&lat.neighbor(&x, i));
                    out[dest * q + i] += v;
                }
            }
        }
        Self {
            geometry: self.geometry.clone(),
            f: out,
            t: self.t,
        }
    }

    /// Reverses every population that sits on a solid cell and puts it back
    /// on the fluid cell it streamed from. Must follow [`Self::stream`].
    pub fn bounce_back(&self) -> Result<Self> {
        let lat = self.lattice();
        let q = lat.q();
        let mut out = self.f.clone();
        for cell in (0..lat.num_cells()).filter(|&c| self.geometry.is_solid_cell(c)) {
            let x = lat.cell_coords(cell);
            for i in 0..q {
                let v = out[cell * q + i];
                if v == 0.0 {
                    continue;
                }
                let back = lat.shifted(&x, lat.velocity(i), -1);
                let back_cell = lat.cell_index(&back);
                if self.geometry.is_solid_cell(back_cell) {
                    return Err(QlbmError::BounceBackDepth { cell });
                }
                out[cell * q + i] = 0.0;
                out[back_cell * q + lat.opposite(i)] += v;
            }
        }
        Ok(Self {
            geometry: self.geometry.clone(),
            f: out,
            t: self.t,
        })
    }

    /// One collisionless timestep: stream, then bounce-back.
    pub fn step(&self) -> Result<Self> {
        let mut next = self.stream().bounce_back()?;
        next.t = self.t + 1;
        Ok(next)
    }

    /// BGK relaxation `f <- f - (f - f_eq) / tau` at every fluid cell.
    pub fn bgk_collide(&self, params: &CollisionParams) -> Result<Self> {
        if !params.enabled {
            return Ok(self.clone());
        }
        params.validate()?;
        let lat = self.lattice();
        let q = lat.q();
        let d = lat.dim();
        let omega = params.dt / params.tau;
        let mut out = self.f.clone();
        for cell in 0..lat.num_cells() {
            if self.geometry.is_solid_cell(cell) {
                continue;
            }
            let slots = &self.f[cell * q..(cell + 1) * q];
            let rho: f64 = slots.iter().sum();
            if rho == 0.0 {
                continue;
            }
            let mut u = vec![0.0; d];
            for (i, fi) in slots.iter().enumerate() {
                for (a, e) in lat.velocity(i).iter().enumerate() {
                    u[a] += fi * f64::from(*e);
                }
            }
            u.iter_mut().for_each(|c| *c /= rho);
            let feq = equilibrium(lat, rho, &u)?;
            for i in 0..q {
                out[cell * q + i] = slots[i] - omega * (slots[i] - feq[i]);
            }
        }
        Ok(Self {
            geometry: self.geometry.clone(),
            f: out,
            t: self.t,
        })
    }

    /// Momentum-exchange force on all obstacles, summed over boundary links:
    /// `F_j = sum 2 (e_i)_j f_i(x_f)`. Evaluate on the pre-stream field.
    pub fn mem_force(&self) -> Vec<f64> {
        let lat = self.lattice();
        let mut force = vec![0.0; lat.dim()];
        for link in self.geometry.boundary_links() {
            let fi = self.get(&link.fluid, link.velocity);
            for (a, e) in lat.velocity(link.velocity).iter().enumerate() {
                force[a] += 2.0 * f64::from(*e) * fi;
            }
        }
        force
    }
}

/// BGK parameters in lattice units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionParams {
    pub tau: f64,
    pub dt: f64,
    pub enabled: bool,
}

impl CollisionParams {
    pub fn new(tau: f64) -> Self {
        Self {
            tau,
            dt: 1.0,
            enabled: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.enabled && !(self.tau > 0.5 && self.tau.is_finite()) {
            return Err(QlbmError::TauOutOfRange(self.tau));
        }
        Ok(())
    }
}

/// Lattice weight of velocity `e`: product of the D1Q3 weights 2/3 and 1/6.
pub fn lattice_weight(e: &[i8]) -> f64 {
    e.iter().map(|&c| if c == 0 { 2.0 / 3.0 } else { 1.0 / 6.0 }).product()
}

/// Second-order equilibrium
/// `w_i rho (1 + 3 e.u + 4.5 (e.u)^2 - 1.5 u.u)`.
pub fn equilibrium(lattice: &LatticeDescriptor, rho: f64, u: &[f64]) -> Result<Vec<f64>> {
    let speed = u.iter().map(|c| c * c).sum::<f64>().sqrt();
    if speed.is_nan() || speed > VELOCITY_GUARD {
        return Err(QlbmError::VelocityGuard(speed));
    }
    let usq: f64 = u.iter().map(|c| c * c).sum();
    Ok(lattice
        .velocities()
        .iter()
        .map(|e| {
            let eu: f64 = e.iter().zip(u).map(|(a, b)| f64::from(*a) * b).sum();
            lattice_weight(e) * rho * (1.0 + 3.0 * eu + 4.5 * eu * eu - 1.5 * usq)
        })
        .collect())
}
