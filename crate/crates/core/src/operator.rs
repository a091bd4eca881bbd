use std::ops::{Add, Mul, Sub};

use faer::{c64, Mat, MatRef};

use crate::error::{invalid, Result};
use crate::geometry::Geometry;

/// Dense complex matrix on the lattice ⊗ orbital space of `geometry`.
///
/// When tensored with a spinor factor of dimension `s`, the geometry carries
/// `orbitals * s` states per site and the spinor index runs fastest.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    matrix: Mat<c64>,
    geometry: Geometry,
}

impl DenseOperator {
    pub fn new(matrix: Mat<c64>, geometry: Geometry) -> Result<Self> {
        let n = geometry.hilbert_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return invalid(format!(
                "matrix is {}x{}, geometry needs {n}x{n}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        Ok(Self { matrix, geometry })
    }

    pub fn zeros(geometry: Geometry) -> Self {
        let n = geometry.hilbert_dim();
        Self {
            matrix: Mat::zeros(n, n),
            geometry,
        }
    }

    pub fn identity(geometry: Geometry) -> Self {
        let n = geometry.hilbert_dim();
        Self {
            matrix: Mat::identity(n, n),
            geometry,
        }
    }

    /// `1 ⊗ block` with the same `block` on every site.
    pub fn site_local(geometry: Geometry, block: MatRef<'_, c64>) -> Result<Self> {
        if block.nrows() != geometry.orbitals || block.ncols() != geometry.orbitals {
            return invalid("site block does not match orbital count");
        }
        let n = geometry.hilbert_dim();
        let m = Mat::<c64>::identity(n, n);
        let matrix = left_site_local(block, m.as_ref(), geometry.n_sites());
        Ok(Self { matrix, geometry })
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Same geometry, new matrix of matching size.
    pub fn with_matrix(&self, matrix: Mat<c64>) -> Self {
        assert_eq!(matrix.nrows(), self.dim());
        assert_eq!(matrix.ncols(), self.dim());
        Self {
            matrix,
            geometry: self.geometry,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> c64 {
        self.matrix[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        self.with_matrix(self.matrix.adjoint().to_owned())
    }

    pub fn scaled(&self, z: c64) -> Self {
        self.with_matrix(Mat::from_fn(self.dim(), self.dim(), |i, j| {
            z * self.matrix[(i, j)]
        }))
    }

    /// `self + z·1`.
    pub fn shifted(&self, z: c64) -> Self {
        let mut m = self.matrix.clone();
        for i in 0..self.dim() {
            m[(i, i)] += z;
        }
        self.with_matrix(m)
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.norm_max()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                dev = dev.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn trace(&self) -> c64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).sum()
    }

    /// Max-entry distance to another operator of the same size.
    pub fn distance(&self, other: &DenseOperator) -> f64 {
        (&self.matrix - &other.matrix).norm_max()
    }

    /// `self ⊗ 1_s`, with the spinor index running fastest inside each site.
    pub fn tensor_identity(&self, s: usize) -> Self {
        let g = self.geometry.with_orbitals(self.geometry.orbitals * s);
        let matrix = self.matrix.kron(Mat::<c64>::identity(s, s));
        Self { matrix, geometry: g }
    }

    /// Inverse via LU with partial pivoting; caller checks invertibility.
    pub fn inverse(&self) -> Self {
        use faer::linalg::solvers::DenseSolveCore;
        self.with_matrix(self.matrix.partial_piv_lu().inverse())
    }
}

fn check_same(a: &DenseOperator, b: &DenseOperator) {
    assert_eq!(
        a.dim(),
        b.dim(),
        "operator dimensions differ ({} vs {})",
        a.dim(),
        b.dim()
    );
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        check_same(self, rhs);
        self.with_matrix(&self.matrix * &rhs.matrix)
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        check_same(self, rhs);
        self.with_matrix(&self.matrix + &rhs.matrix)
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        check_same(self, rhs);
        self.with_matrix(&self.matrix - &rhs.matrix)
    }
}

/// `(1_sites ⊗ block) · a` for a `p × q` block and `a` with `sites·q` rows.
pub fn left_site_local(block: MatRef<'_, c64>, a: MatRef<'_, c64>, sites: usize) -> Mat<c64> {
    let (p, q) = (block.nrows(), block.ncols());
    assert_eq!(a.nrows(), sites * q);
    let mut out = Mat::<c64>::zeros(sites * p, a.ncols());
    for s in 0..sites {
        let prod = block * a.subrows(s * q, q);
        out.as_mut().subrows_mut(s * p, p).copy_from(&prod);
    }
    out
}

/// `a · (1_sites ⊗ block)` for a `p × q` block and `a` with `sites·p` columns.
pub fn right_site_local(a: MatRef<'_, c64>, block: MatRef<'_, c64>, sites: usize) -> Mat<c64> {
    let (p, q) = (block.nrows(), block.ncols());
    assert_eq!(a.ncols(), sites * p);
    let mut out = Mat::<c64>::zeros(a.nrows(), sites * q);
    for s in 0..sites {
        let prod = a.subcols(s * p, p) * block;
        out.as_mut().subcols_mut(s * q, q).copy_from(&prod);
    }
    out
}

/// `Σ_ij a_ij b_ji` restricted to rows `i` accepted by `keep`.
pub fn trace_of_product(
    a: MatRef<'_, c64>,
    b: MatRef<'_, c64>,
    keep: impl Fn(usize) -> bool,
) -> c64 {
    let n = a.nrows();
    let mut acc = c64::new(0.0, 0.0);
    for i in 0..n {
        if !keep(i) {
            continue;
        }
        let mut row = c64::new(0.0, 0.0);
        for j in 0..a.ncols() {
            row += a[(i, j)] * b[(j, i)];
        }
        acc += row;
    }
    acc
}
