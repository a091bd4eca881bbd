use std::f64::consts::PI;

use faer::c64;

use crate::error::{invalid, Result};
use crate::geometry::{Site, MAX_DIM};

/// Antisymmetric form B with x∧y = ½ Σ_ij B_ij x_i y_j. B_ij is the flux per
/// plaquette in the (i, j) plane.
#[derive(Clone, Debug, PartialEq)]
pub struct MagneticForm {
    dim: usize,
    b: [[f64; MAX_DIM]; MAX_DIM],
}

impl MagneticForm {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            b: [[0.0; MAX_DIM]; MAX_DIM],
        }
    }

    /// Uniform flux `phi` through the (i, j) plane.
    pub fn plane(dim: usize, i: usize, j: usize, phi: f64) -> Result<Self> {
        if i >= dim || j >= dim || i == j {
            return invalid(format!("no ({i}, {j}) plane in d = {dim}"));
        }
        let mut m = Self::zero(dim);
        m.b[i][j] = phi;
        m.b[j][i] = -phi;
        Ok(m)
    }

    pub fn from_matrix(dim: usize, b: [[f64; MAX_DIM]; MAX_DIM]) -> Result<Self> {
        for i in 0..MAX_DIM {
            for j in 0..MAX_DIM {
                if b[i][j] != -b[j][i] {
                    return invalid("magnetic form must be exactly antisymmetric");
                }
                if (i >= dim || j >= dim) && b[i][j] != 0.0 {
                    return invalid("magnetic form has entries beyond the lattice dimension");
                }
            }
        }
        Ok(Self { dim, b })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> [[f64; MAX_DIM]; MAX_DIM] {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.b.iter().flatten().all(|&v| v == 0.0)
    }

    /// Rounds every B_ij to the nearest multiple of 2π/L².
    pub fn quantized(&self, size: usize) -> Self {
        let quantum = 2.0 * PI / (size * size) as f64;
        let mut out = self.clone();
        for i in 0..MAX_DIM {
            for j in (i + 1)..MAX_DIM {
                let v = (self.b[i][j] / quantum).round() * quantum;
                out.b[i][j] = v;
                out.b[j][i] = -v;
            }
        }
        out
    }

    pub fn wedge(&self, x: &Site, y: &Site) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.b[i][j] * x[i] as f64 * y[j] as f64;
            }
        }
        0.5 * acc
    }

    pub fn phase(&self, x: &Site, y: &Site) -> c64 {
        c64::cis(self.wedge(x, y))
    }

    /// Factor c(y, n) in ψ(y + Ln) = c(y, n) ψ(y) for magnetic-periodic states.
    pub(crate) fn boundary_factor(&self, y: &Site, winding: &Site, size: usize) -> c64 {
        if self.is_zero() {
            return c64::new(1.0, 0.0);
        }
        let l = size as i64;
        let ln = [winding[0] * l, winding[1] * l, winding[2] * l];
        let mut eps = 0.0;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                eps += self.b[i][j] * (ln[i] * winding[j] * l) as f64;
            }
        }
        c64::cis(-self.wedge(&ln, y) - 0.5 * eps)
    }
}
