use faer::{c64, Mat, MatRef};

use crate::clifford::CliffordRep;
use crate::error::{invalid, Result};
use crate::geometry::{Geometry, MAX_DIM};
use crate::operator::DenseOperator;

/// Site-diagonal phase F = (x + x0)·Γ / |x + x0| in centered coordinates,
/// acting on lattice ⊗ orbital ⊗ spinor with the spinor index fastest.
#[derive(Clone, Debug)]
pub struct DiracPhase {
    x0: [f64; MAX_DIM],
    geometry: Geometry,
    rep: CliffordRep,
    blocks: Vec<Mat<c64>>,
}

/// Builds F for operators on `geometry` (lattice ⊗ orbital). Coordinates are
/// centered so the box is symmetric around the origin on either boundary.
pub fn dirac_phase(geometry: Geometry, x0: &[f64], rep: &CliffordRep) -> Result<DiracPhase> {
    let d = geometry.dim;
    if x0.len() != d || x0.iter().any(|v| !(0.0..1.0).contains(v)) {
        return invalid(format!("x0 must be a point of [0,1)^{d}"));
    }
    if rep.n() != d {
        return invalid(format!("Clifford rep has {} generators, need {d}", rep.n()));
    }
    if d % 2 == 0 && rep.grading().is_none() {
        return invalid("even dimension needs a graded Clifford rep");
    }
    let mut shift = [0.0; MAX_DIM];
    shift[..d].copy_from_slice(x0);
    let s = rep.spinor_dim();
    let blocks = (0..geometry.n_sites())
        .map(|r| {
            let c = geometry.centered(&geometry.site(r));
            let v: Vec<f64> = (0..d).map(|j| c[j] + shift[j]).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            let coef: Vec<f64> = if norm == 0.0 {
                vec![1.0 / (d as f64).sqrt(); d]
            } else {
                v.iter().map(|a| a / norm).collect()
            };
            Mat::from_fn(s, s, |i, j| {
                (0..d)
                    .map(|k| rep.generator(k)[(i, j)] * coef[k])
                    .sum::<c64>()
            })
        })
        .collect();
    Ok(DiracPhase {
        x0: shift,
        geometry,
        rep: rep.clone(),
        blocks,
    })
}

impl DiracPhase {
    pub fn x0(&self) -> &[f64] {
        &self.x0[..self.geometry.dim]
    }

    pub fn clifford(&self) -> &CliffordRep {
        &self.rep
    }

    pub fn spinor_dim(&self) -> usize {
        self.rep.spinor_dim()
    }

    /// Geometry of the operators F pairs with (without the spinor factor).
    pub fn base_geometry(&self) -> Geometry {
        self.geometry
    }

    /// Geometry of F itself.
    pub fn geometry(&self) -> Geometry {
        self.geometry
            .with_orbitals(self.geometry.orbitals * self.spinor_dim())
    }

    pub fn site_block(&self, rank: usize) -> &Mat<c64> {
        &self.blocks[rank]
    }

    /// |x + x0| for site `rank`, centered coordinates.
    pub fn radius(&self, rank: usize) -> f64 {
        let c = self.geometry.centered(&self.geometry.site(rank));
        (0..self.geometry.dim)
            .map(|j| (c[j] + self.x0[j]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn operator(&self) -> DenseOperator {
        let n = self.geometry.hilbert_dim() * self.spinor_dim();
        let id = Mat::<c64>::identity(n, n);
        let m = self.apply_left(id.as_ref());
        DenseOperator::new(m, self.geometry()).expect("sizes agree by construction")
    }

    /// 1 ⊗ γ₀ for even d.
    pub fn grading_operator(&self) -> Option<DenseOperator> {
        let g = self.rep.grading()?;
        let geo = self.geometry();
        DenseOperator::site_local(geo, identity_kron(self.geometry.orbitals, g).as_ref()).ok()
    }

    /// F·A for A with rows indexed by lattice ⊗ orbital ⊗ spinor.
    pub fn apply_left(&self, a: MatRef<'_, c64>) -> Mat<c64> {
        let s = self.spinor_dim();
        let n = self.geometry.orbitals;
        let mut out = Mat::<c64>::zeros(a.nrows(), a.ncols());
        for (r, f) in self.blocks.iter().enumerate() {
            for o in 0..n {
                let off = (r * n + o) * s;
                let prod = f * a.subrows(off, s);
                out.as_mut().subrows_mut(off, s).copy_from(&prod);
            }
        }
        out
    }

    /// A·F for A with columns indexed by lattice ⊗ orbital ⊗ spinor.
    pub fn apply_right(&self, a: MatRef<'_, c64>) -> Mat<c64> {
        let s = self.spinor_dim();
        let n = self.geometry.orbitals;
        let mut out = Mat::<c64>::zeros(a.nrows(), a.ncols());
        for (r, f) in self.blocks.iter().enumerate() {
            for o in 0..n {
                let off = (r * n + o) * s;
                let prod = a.subcols(off, s) * f;
                out.as_mut().subcols_mut(off, s).copy_from(&prod);
            }
        }
        out
    }

    /// Sites with |x + x0| < radius, as a per-site mask.
    pub fn window(&self, radius: f64) -> Vec<bool> {
        (0..self.geometry.n_sites())
            .map(|r| self.radius(r) < radius)
            .collect()
    }
}

fn identity_kron(n: usize, g: &Mat<c64>) -> Mat<c64> {
    Mat::<c64>::identity(n, n).kron(g)
}
