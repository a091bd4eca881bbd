use faer::{c64, Mat, Side};

use crate::error::{invalid, Result};
use crate::operator::{left_site_local, right_site_local, DenseOperator};

/// AIII data: grading S with S² = 1 and a unitary R exchanging its eigenspaces.
#[derive(Clone, Debug)]
pub struct ChiralStructure {
    s: Mat<c64>,
    s_plus: Mat<c64>,
    s_minus: Mat<c64>,
    r: Mat<c64>,
    basis_plus: Mat<c64>,
    basis_minus: Mat<c64>,
}

impl ChiralStructure {
    pub fn new(s: Mat<c64>, r: Mat<c64>) -> Result<Self> {
        const TOL: f64 = 1e-12;
        let n = s.nrows();
        if s.ncols() != n || r.nrows() != n || r.ncols() != n || n % 2 != 0 {
            return invalid("S and R must be square of equal even size");
        }
        let id = Mat::<c64>::identity(n, n);
        if (&s - s.adjoint()).norm_max() > TOL || (&s * &s - &id).norm_max() > TOL {
            return invalid("S must be a Hermitian involution");
        }
        if (r.adjoint() * &r - &id).norm_max() > TOL {
            return invalid("R must be unitary");
        }
        let half = c64::new(0.5, 0.0);
        let s_plus = Mat::from_fn(n, n, |i, j| half * (id[(i, j)] + s[(i, j)]));
        let s_minus = Mat::from_fn(n, n, |i, j| half * (id[(i, j)] - s[(i, j)]));
        let tr_plus: f64 = (0..n).map(|i| s_plus[(i, i)].re).sum();
        if (tr_plus - (n / 2) as f64).abs() > 1e-9 {
            return invalid("S₊ and S₋ must have equal rank");
        }
        if (&r * &s_plus * r.adjoint() - &s_minus).norm_max() > TOL {
            return invalid("R must map S₊ onto S₋");
        }
        let (basis_plus, basis_minus) = eigenbases(&s)?;
        Ok(Self {
            s,
            s_plus,
            s_minus,
            r,
            basis_plus,
            basis_minus,
        })
    }

    pub fn orbitals(&self) -> usize {
        self.s.nrows()
    }

    pub fn s(&self) -> &Mat<c64> {
        &self.s
    }

    pub fn s_plus(&self) -> &Mat<c64> {
        &self.s_plus
    }

    pub fn s_minus(&self) -> &Mat<c64> {
        &self.s_minus
    }

    pub fn r(&self) -> &Mat<c64> {
        &self.r
    }

    /// Orthonormal columns spanning the S = +1 eigenspace (N × N/2).
    pub fn basis_plus(&self) -> &Mat<c64> {
        &self.basis_plus
    }

    /// Orthonormal columns spanning the S = −1 eigenspace (N × N/2).
    pub fn basis_minus(&self) -> &Mat<c64> {
        &self.basis_minus
    }
}

/// For diagonal S the bases are unit vectors in index order, so the reduced
/// blocks are plain index slices.
fn eigenbases(s: &Mat<c64>) -> Result<(Mat<c64>, Mat<c64>)> {
    let n = s.nrows();
    let diagonal = (0..n).all(|j| (0..n).all(|i| i == j || s[(i, j)] == c64::new(0.0, 0.0)));
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    if diagonal {
        for i in 0..n {
            let col = Mat::from_fn(n, 1, |a, _| c64::new(if a == i { 1.0 } else { 0.0 }, 0.0));
            if s[(i, i)].re > 0.0 {
                plus.push(col);
            } else {
                minus.push(col);
            }
        }
    } else {
        let eig = s
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| crate::Error::Numerical(format!("{e:?}")))?;
        let vals = eig.S().column_vector();
        for k in 0..n {
            let col = eig.U().subcols(k, 1).to_owned();
            if vals[k].re > 0.0 {
                plus.push(col);
            } else {
                minus.push(col);
            }
        }
    }
    let stack = |cols: Vec<Mat<c64>>| Mat::from_fn(n, cols.len(), |i, j| cols[j][(i, 0)]);
    Ok((stack(plus), stack(minus)))
}

/// max |(1⊗S)H(1⊗S) + H|.
pub fn chiral_symmetry_check(h: &DenseOperator, cs: &ChiralStructure) -> Result<f64> {
    let g = h.geometry();
    if g.orbitals != cs.orbitals() {
        return invalid("chiral structure does not match the operator's orbitals");
    }
    let sites = g.n_sites();
    let shs = right_site_local(
        left_site_local(cs.s().as_ref(), h.matrix(), sites).as_ref(),
        cs.s().as_ref(),
        sites,
    );
    Ok((shs + h.matrix()).norm_max())
}
