//! Hermitian eigendecomposition, Fermi projector, sign(H) and the flat-band unitary.

use faer::{c64, Mat, Side};

use crate::error::{invalid, Error, Result};
use crate::geometry::Geometry;
use crate::lattice::ChiralStructure;
use crate::operator::{left_site_local, right_site_local, DenseOperator};

#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are eigenvectors, each with its first
    /// non-negligible component real and positive.
    pub eigenvectors: Mat<c64>,
    pub geometry: Geometry,
}

impl EigenSystem {
    /// Σ_{E_k < e_fermi} v_k v_k†.
    pub fn projector_below(&self, e_fermi: f64, tol: f64) -> Result<DenseOperator> {
        if let Some(&e) = self
            .eigenvalues
            .iter()
            .find(|&&e| (e - e_fermi).abs() < tol)
        {
            return Err(Error::FermiLevelOnSpectrum {
                fermi: e_fermi,
                eigenvalue: e,
            });
        }
        let occ = self.eigenvalues.iter().filter(|&&e| e < e_fermi).count();
        let v = self.eigenvectors.as_ref().subcols(0, occ);
        DenseOperator::new(v * v.adjoint(), self.geometry)
    }

    /// Smallest |E − e| over the spectrum.
    pub fn distance_to(&self, e: f64) -> f64 {
        self.eigenvalues
            .iter()
            .map(|x| (x - e).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn eigendecompose(h: &DenseOperator) -> Result<EigenSystem> {
    let dev = h.hermiticity_deviation();
    if dev > 1e-10 * h.max_abs().max(1.0) {
        return invalid(format!("operator is not Hermitian (deviation {dev:.3e})"));
    }
    let eig = h
        .matrix()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigensolver failed: {e:?}")))?;
    let eigenvalues: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
    let mut v = eig.U().to_owned();
    let n = v.nrows();
    for k in 0..v.ncols() {
        if let Some(i) = (0..n).find(|&i| v[(i, k)].norm() > 1e-8) {
            let p = v[(i, k)];
            let fix = p.conj() / p.norm();
            for i in 0..n {
                v[(i, k)] *= fix;
            }
        }
    }
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors: v,
        geometry: h.geometry(),
    })
}

/// Default gap tolerance 1e−8·‖H‖_max.
pub fn default_tolerance(h: &DenseOperator) -> f64 {
    1e-8 * h.max_abs()
}

pub fn fermi_projector(h: &DenseOperator, e_fermi: f64, tol: f64) -> Result<DenseOperator> {
    eigendecompose(h)?.projector_below(e_fermi, tol)
}

/// Q = sign(H) = 1 − 2P at E_F = 0.
pub fn hamiltonian_sign(h: &DenseOperator, tol: f64) -> Result<DenseOperator> {
    let p = fermi_projector(h, 0.0, tol)?;
    Ok(p.scaled(c64::new(-2.0, 0.0)).shifted(c64::new(1.0, 0.0)))
}

/// U = (1⊗R) Q (1⊗S₋) + (1⊗S₊) on the full space, and its block u on the S₋ sector.
#[derive(Clone, Debug)]
pub struct FlatBandUnitary {
    pub full: DenseOperator,
    pub reduced: DenseOperator,
}

pub fn flat_band_unitary(q: &DenseOperator, cs: &ChiralStructure) -> Result<FlatBandUnitary> {
    let g = q.geometry();
    let n = g.orbitals;
    if cs.orbitals() != n {
        return invalid("chiral structure does not match the operator's orbitals");
    }
    let sites = g.n_sites();
    let sqs = right_site_local(
        left_site_local(cs.s().as_ref(), q.matrix(), sites).as_ref(),
        cs.s().as_ref(),
        sites,
    );
    let deviation = (sqs + q.matrix()).norm_max();
    if deviation > 1e-8 {
        return Err(Error::NotChiral { deviation });
    }
    let rq = left_site_local(cs.r().as_ref(), q.matrix(), sites);
    let mut full = right_site_local(rq.as_ref(), cs.s_minus().as_ref(), sites);
    for s in 0..sites {
        for j in 0..n {
            for i in 0..n {
                full[(s * n + i, s * n + j)] += cs.s_plus()[(i, j)];
            }
        }
    }
    let w = cs.basis_minus().as_ref();
    let w_adj = w.adjoint().to_owned();
    let reduced = left_site_local(
        w_adj.as_ref(),
        right_site_local(full.as_ref(), w, sites).as_ref(),
        sites,
    );
    Ok(FlatBandUnitary {
        full: DenseOperator::new(full, g)?,
        reduced: DenseOperator::new(reduced, g.with_orbitals(n / 2))?,
    })
}
