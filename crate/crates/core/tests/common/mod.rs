#![allow(dead_code)]

use std::f64::consts::PI;

use faer::{c64, Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ncbloch_core::lattice::{build_hamiltonian, gallery_model, DisorderSpec, GalleryModel};
use ncbloch_core::spectral::{default_tolerance, fermi_projector, flat_band_unitary, hamiltonian_sign};
use ncbloch_core::{Boundary, DenseOperator, Geometry};

pub fn c(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

/// Pauli matrices written out by hand, independent of the Clifford module.
pub fn pauli() -> [Mat<c64>; 3] {
    let z = c(0.0, 0.0);
    [
        Mat::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { z }),
        Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => z,
        }),
        Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(1.0, 0.0),
            (1, 1) => c(-1.0, 0.0),
            _ => z,
        }),
    ]
}

pub fn qwz_bloch(m: f64, k: &[f64]) -> Mat<c64> {
    let [sx, sy, sz] = pauli();
    Mat::from_fn(2, 2, |i, j| {
        sx[(i, j)] * k[0].sin() + sy[(i, j)] * k[1].sin()
            + sz[(i, j)] * (m - k[0].cos() - k[1].cos())
    })
}

pub fn ssh_bloch(m: f64, k: f64) -> Mat<c64> {
    let [sx, sy, _] = pauli();
    Mat::from_fn(2, 2, |i, j| sx[(i, j)] * (m + k.cos()) + sy[(i, j)] * k.sin())
}

/// (i/2π)∫ tr P[∂₁P, ∂₂P] d²k by central differences on a `grid²` mesh.
pub fn curvature_integral(h: impl Fn(&[f64]) -> Mat<c64>, grid: usize) -> f64 {
    let proj = |k: &[f64]| {
        let e = h(k).self_adjoint_eigen(Side::Lower).unwrap();
        let vals: Vec<f64> = e.S().column_vector().iter().map(|z| z.re).collect();
        let occ = vals.iter().filter(|&&v| v < 0.0).count();
        let v = e.U().subcols(0, occ);
        v * v.adjoint()
    };
    let dk = 2.0 * PI / grid as f64;
    let eps = 1e-5;
    let mut acc = c(0.0, 0.0);
    for i in 0..grid {
        for j in 0..grid {
            let k = [(i as f64 + 0.5) * dk, (j as f64 + 0.5) * dk];
            let p = proj(&k);
            let d1 = (proj(&[k[0] + eps, k[1]]) - proj(&[k[0] - eps, k[1]])) * faer::Scale(c(0.5 / eps, 0.0));
            let d2 = (proj(&[k[0], k[1] + eps]) - proj(&[k[0], k[1] - eps])) * faer::Scale(c(0.5 / eps, 0.0));
            let comm = &d1 * &d2 - &d2 * &d1;
            let t = &p * &comm;
            acc += (0..t.nrows()).map(|a| t[(a, a)]).sum::<c64>();
        }
    }
    (acc * c(0.0, 1.0) * (dk * dk / (2.0 * PI))).re
}

/// Winding number of k ↦ z(k) by summing phase increments on a fine grid.
pub fn winding(z: impl Fn(f64) -> c64, grid: usize) -> f64 {
    (0..grid)
        .map(|i| {
            let a = z(2.0 * PI * i as f64 / grid as f64);
            let b = z(2.0 * PI * (i + 1) as f64 / grid as f64);
            (b / a).arg()
        })
        .sum::<f64>()
        / (2.0 * PI)
}

/// Random operator with hoppings of range ≤ `range` in every direction.
pub fn random_short_range(g: Geometry, range: i64, seed: u64) -> DenseOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.hilbert_dim();
    let mut m = Mat::<c64>::zeros(n, n);
    for xr in 0..g.n_sites() {
        for yr in 0..g.n_sites() {
            let d = g.displacement(&g.site(xr), &g.site(yr));
            if d.iter().all(|c| c.abs() <= range) {
                for a in 0..g.orbitals {
                    for b in 0..g.orbitals {
                        m[(xr * g.orbitals + a, yr * g.orbitals + b)] =
                            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                    }
                }
            }
        }
    }
    DenseOperator::new(m, g).unwrap()
}

pub fn random_dense(g: Geometry, seed: u64) -> DenseOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.hilbert_dim();
    let m = Mat::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    DenseOperator::new(m, g).unwrap()
}

pub fn hermitian_part(a: &DenseOperator) -> DenseOperator {
    (a + &a.adjoint()).scaled(c(0.5, 0.0))
}

pub fn qwz_projector(m: f64, size: usize, dis: &DisorderSpec, index: u64) -> DenseOperator {
    let spec = gallery_model(GalleryModel::Qwz(m), size, Boundary::Periodic).unwrap();
    let h = build_hamiltonian(&spec, dis, index).unwrap();
    fermi_projector(&h, 0.0, default_tolerance(&h)).unwrap()
}

/// Reduced flat-band unitary u of an SSH chain.
pub fn ssh_unitary(m: f64, size: usize, boundary: Boundary, dis: &DisorderSpec, index: u64) -> DenseOperator {
    let spec = gallery_model(GalleryModel::Ssh(m), size, boundary).unwrap();
    let h = build_hamiltonian(&spec, dis, index).unwrap();
    let q = hamiltonian_sign(&h, default_tolerance(&h)).unwrap();
    flat_band_unitary(&q, spec.chiral().unwrap()).unwrap().reduced
}

pub fn ssh_projector(m: f64, size: usize, boundary: Boundary) -> DenseOperator {
    let spec = gallery_model(GalleryModel::Ssh(m), size, boundary).unwrap();
    let h = build_hamiltonian(&spec, &DisorderSpec::clean(), 0).unwrap();
    fermi_projector(&h, 0.0, default_tolerance(&h)).unwrap()
}
