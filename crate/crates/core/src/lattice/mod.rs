//! Tight-binding Hamiltonians with magnetic phases and disorder.

mod chiral;
mod disorder;
mod gallery;
mod magnetic;

use std::collections::BTreeMap;

use faer::{c64, Mat, MatRef};

pub use chiral::{chiral_symmetry_check, ChiralStructure};
pub use disorder::{translate_disorder, DisorderKind, DisorderRealization, DisorderSpec};
pub use gallery::{gallery_model, GalleryModel};
pub use magnetic::MagneticForm;

use crate::error::{Error, Result};
use crate::geometry::{is_canonical, neg, sub, Boundary, Geometry, Site};
use crate::operator::DenseOperator;

/// A lattice model family: hopping table, magnetic form and boundary.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    geometry: Geometry,
    hoppings: BTreeMap<Site, Mat<c64>>,
    magnetic: MagneticForm,
    chiral: Option<ChiralStructure>,
}

impl ModelSpec {
    /// Validates the hopping table. On a periodic box the magnetic form is
    /// rounded to multiples of 2π/L² so that magnetic translations close.
    pub fn new(
        geometry: Geometry,
        hoppings: BTreeMap<Site, Mat<c64>>,
        magnetic: MagneticForm,
        chiral: Option<ChiralStructure>,
    ) -> Result<Self> {
        let n = geometry.orbitals;
        if magnetic.dim() != geometry.dim {
            return Err(Error::InvalidModel("magnetic form dimension mismatch".into()));
        }
        for (r, t) in &hoppings {
            if t.nrows() != n || t.ncols() != n {
                return Err(Error::InvalidModel(format!("hopping {r:?} is not {n}x{n}")));
            }
            if r[geometry.dim..].iter().any(|&c| c != 0) {
                return Err(Error::InvalidModel(format!(
                    "hopping {r:?} has components beyond d = {}",
                    geometry.dim
                )));
            }
            let Some(back) = hoppings.get(&neg(r)) else {
                return Err(Error::InvalidModel(format!("hopping {r:?} has no reverse partner")));
            };
            let dev = (back - t.adjoint()).norm_max();
            if dev > 1e-12 {
                return Err(Error::InvalidModel(format!(
                    "hopping table not Hermitian at {r:?} (deviation {dev:.3e})"
                )));
            }
        }
        if let Some(cs) = &chiral {
            if cs.orbitals() != n {
                return Err(Error::InvalidModel("chiral structure size mismatch".into()));
            }
        }
        let magnetic = match geometry.boundary {
            Boundary::Periodic => magnetic.quantized(geometry.size),
            Boundary::Open => magnetic,
        };
        Ok(Self {
            geometry,
            hoppings,
            magnetic,
            chiral,
        })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim
    }

    pub fn size(&self) -> usize {
        self.geometry.size
    }

    pub fn orbitals(&self) -> usize {
        self.geometry.orbitals
    }

    pub fn boundary(&self) -> Boundary {
        self.geometry.boundary
    }

    pub fn hoppings(&self) -> &BTreeMap<Site, Mat<c64>> {
        &self.hoppings
    }

    pub fn magnetic_form(&self) -> &MagneticForm {
        &self.magnetic
    }

    pub fn chiral(&self) -> Option<&ChiralStructure> {
        self.chiral.as_ref()
    }

    /// Same model on a different box or boundary.
    pub fn with_geometry(&self, size: usize, boundary: Boundary) -> Result<Self> {
        let g = Geometry::new(self.geometry.dim, size, self.geometry.orbitals, boundary)?;
        Self::new(g, self.hoppings.clone(), self.magnetic.clone(), self.chiral.clone())
    }

    pub fn with_magnetic_form(&self, magnetic: MagneticForm) -> Result<Self> {
        Self::new(self.geometry, self.hoppings.clone(), magnetic, self.chiral.clone())
    }

    /// Canonical bond displacements: hoppings with lexicographically non-negative r.
    pub fn bond_displacements(&self) -> Vec<Site> {
        self.hoppings.keys().filter(|r| is_canonical(r)).copied().collect()
    }

    /// H(k) = Σ_r t_r e^{−ik·r}, ignoring magnetic phases.
    pub fn bloch_hamiltonian(&self, k: &[f64]) -> Mat<c64> {
        let n = self.orbitals();
        let mut h = Mat::<c64>::zeros(n, n);
        for (r, t) in &self.hoppings {
            let phase: f64 = (0..self.dim()).map(|j| k[j] * r[j] as f64).sum();
            let z = c64::cis(-phase);
            for j in 0..n {
                for i in 0..n {
                    h[(i, j)] += z * t[(i, j)];
                }
            }
        }
        h
    }

    fn check_range(&self) -> Result<()> {
        if self.boundary() == Boundary::Periodic {
            let l = self.size() as i64;
            for r in self.hoppings.keys() {
                if r.iter().any(|&c| 2 * c.abs() >= l) {
                    return Err(Error::InvalidModel(format!(
                        "hopping {r:?} reaches half the box (L = {l})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// H_ω for realization `realization_index` of `dis`.
pub fn build_hamiltonian(
    spec: &ModelSpec,
    dis: &DisorderSpec,
    realization_index: u64,
) -> Result<DenseOperator> {
    let realization = DisorderRealization::generate(spec, dis, realization_index)?;
    hamiltonian_from_realization(spec, &realization, dis.strength)
}

/// H_ω for an explicit realization, entries (1+λω_{xy})·e^{i x∧y}·t_{x−y} for
/// bond disorder or t_{x−y} + λω_x on the diagonal for onsite disorder.
pub fn hamiltonian_from_realization(
    spec: &ModelSpec,
    realization: &DisorderRealization,
    strength: f64,
) -> Result<DenseOperator> {
    spec.check_range()?;
    realization.check_compatible(spec)?;
    let g = spec.geometry();
    let n = g.orbitals;
    let mut h = Mat::<c64>::zeros(g.hilbert_dim(), g.hilbert_dim());
    let bond = realization.kind() == DisorderKind::Bond;
    for xr in 0..g.n_sites() {
        let x = g.site(xr);
        for (r, t) in spec.hoppings() {
            let y_unwrapped = sub(&x, r);
            let (y, phase) = match g.boundary {
                Boundary::Open => {
                    if !g.contains(&y_unwrapped) {
                        continue;
                    }
                    (y_unwrapped, spec.magnetic.phase(&x, &y_unwrapped))
                }
                Boundary::Periodic => {
                    let (y, winding) = g.wrap(y_unwrapped);
                    let phase = spec.magnetic.phase(&x, &y_unwrapped)
                        * spec.magnetic.boundary_factor(&y, &winding, g.size);
                    (y, phase)
                }
            };
            let factor = if bond {
                1.0 + strength * realization.bond_value(xr, r)
            } else {
                1.0
            };
            add_block(&mut h, xr * n, g.rank(&y) * n, t.as_ref(), phase * factor);
        }
        if !bond && strength != 0.0 {
            let w = strength * realization.site_value(xr);
            for a in 0..n {
                h[(xr * n + a, xr * n + a)] += c64::new(w, 0.0);
            }
        }
    }
    let op = DenseOperator::new(h, g)?;
    let dev = op.hermiticity_deviation();
    if dev > 1e-12 * op.max_abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "assembled Hamiltonian not Hermitian (deviation {dev:.3e})"
        )));
    }
    Ok(op)
}

/// Magnetic translation (U_a ψ)(x) = e^{−i a∧x} ψ(x − a) on the magnetic torus.
pub fn magnetic_translation(spec: &ModelSpec, a: &Site) -> Result<DenseOperator> {
    let g = spec.geometry();
    if g.boundary != Boundary::Periodic {
        return Err(Error::UnsupportedBoundary(
            "magnetic translations need a periodic box".into(),
        ));
    }
    let n = g.orbitals;
    let mut u = Mat::<c64>::zeros(g.hilbert_dim(), g.hilbert_dim());
    for xr in 0..g.n_sites() {
        let x = g.site(xr);
        let (y, winding) = g.wrap(sub(&x, a));
        let z = c64::cis(-spec.magnetic.wedge(a, &x))
            * spec.magnetic.boundary_factor(&y, &winding, g.size);
        let yr = g.rank(&y);
        for o in 0..n {
            u[(xr * n + o, yr * n + o)] = z;
        }
    }
    DenseOperator::new(u, g)
}

fn add_block(h: &mut Mat<c64>, row: usize, col: usize, t: MatRef<'_, c64>, z: c64) {
    for j in 0..t.ncols() {
        for i in 0..t.nrows() {
            h[(row + i, col + j)] += z * t[(i, j)];
        }
    }
}
