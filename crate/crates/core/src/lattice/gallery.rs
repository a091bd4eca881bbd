use std::collections::BTreeMap;

use faer::{c64, Mat};

use crate::clifford::build_clifford_rep;
use crate::error::{invalid, Result};
use crate::geometry::{Boundary, Geometry, Site};

use super::{ChiralStructure, MagneticForm, ModelSpec};

/// Reference models with their mass parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GalleryModel {
    /// d = 1 chiral chain, H(k) = (m + cos k)σ_x + sin k σ_y.
    Ssh(f64),
    /// d = 2 Chern insulator, H(k) = sin k_x σ_x + sin k_y σ_y + (m − cos k_x − cos k_y)σ_z.
    Qwz(f64),
    /// d = 3 four-band chiral model, H(k) = Σ_j sin k_j γ_j + (m − Σ_j cos k_j)γ_4.
    Chiral3d(f64),
}

impl GalleryModel {
    pub fn from_name(name: &str, m: f64) -> Result<Self> {
        match name {
            "ssh" => Ok(Self::Ssh(m)),
            "qwz" => Ok(Self::Qwz(m)),
            "chiral3d" => Ok(Self::Chiral3d(m)),
            _ => invalid(format!("unknown gallery model '{name}'")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ssh(_) => "ssh",
            Self::Qwz(_) => "qwz",
            Self::Chiral3d(_) => "chiral3d",
        }
    }

    pub fn mass(&self) -> f64 {
        match *self {
            Self::Ssh(m) | Self::Qwz(m) | Self::Chiral3d(m) => m,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ssh(_) => 1,
            Self::Qwz(_) => 2,
            Self::Chiral3d(_) => 3,
        }
    }

    pub fn is_chiral(&self) -> bool {
        !matches!(self, Self::Qwz(_))
    }
}

pub fn gallery_model(model: GalleryModel, size: usize, boundary: Boundary) -> Result<ModelSpec> {
    if size < 4 {
        return invalid(format!("gallery models need L ≥ 4, got {size}"));
    }
    let d = model.dim();
    let pauli = build_clifford_rep(3)?;
    let (sx, sy, sz) = (pauli.generator(0), pauli.generator(1), pauli.generator(2));
    let mut hop: BTreeMap<Site, Mat<c64>> = BTreeMap::new();
    let (orbitals, chiral) = match model {
        GalleryModel::Ssh(m) => {
            let z = c64::new(0.0, 0.0);
            let one = c64::new(1.0, 0.0);
            hop.insert([0, 0, 0], scale(sx, m));
            hop.insert([1, 0, 0], Mat::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { one } else { z }));
            hop.insert([-1, 0, 0], Mat::from_fn(2, 2, |i, j| if (i, j) == (1, 0) { one } else { z }));
            (2, Some(ChiralStructure::new(sz.clone(), sx.clone())?))
        }
        GalleryModel::Qwz(m) => {
            hop.insert([0, 0, 0], scale(sz, m));
            for (j, s) in [sx, sy].into_iter().enumerate() {
                insert_sine_cosine(&mut hop, j, s, sz);
            }
            (2, None)
        }
        GalleryModel::Chiral3d(m) => {
            let rep = build_clifford_rep(4)?;
            let g4 = rep.generator(3);
            hop.insert([0, 0, 0], scale(g4, m));
            for j in 0..3 {
                insert_sine_cosine(&mut hop, j, rep.generator(j), g4);
            }
            let grading = rep.grading().expect("even rep carries a grading").clone();
            let swap = Mat::from_fn(4, 4, |i, j| {
                c64::new(if (i + 2) % 4 == j { 1.0 } else { 0.0 }, 0.0)
            });
            (4, Some(ChiralStructure::new(grading, swap)?))
        }
    };
    let g = Geometry::new(d, size, orbitals, boundary)?;
    ModelSpec::new(g, hop, MagneticForm::zero(d), chiral)
}

/// Adds hoppings along e_j producing sin k_j·a − cos k_j·b in H(k).
fn insert_sine_cosine(hop: &mut BTreeMap<Site, Mat<c64>>, j: usize, a: &Mat<c64>, b: &Mat<c64>) {
    let n = a.nrows();
    let mut e = [0i64; 3];
    e[j] = 1;
    let fwd = Mat::from_fn(n, n, |p, q| c64::new(0.0, 0.5) * a[(p, q)] - b[(p, q)] * 0.5);
    let back = Mat::from_fn(n, n, |p, q| c64::new(0.0, -0.5) * a[(p, q)] - b[(p, q)] * 0.5);
    hop.insert(e, fwd);
    hop.insert([-e[0], -e[1], -e[2]], back);
}

fn scale(m: &Mat<c64>, s: f64) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}
