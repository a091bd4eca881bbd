//! Momentum-space reference invariants for clean periodic models.

use std::f64::consts::PI;

use faer::{c64, Mat, Side};

use crate::error::{invalid, Error, Result};

/// Chern number of the bands below zero energy from the lattice field
/// strength on a `grid × grid` Brillouin torus.
///
/// Sign: −Σ_plaquettes arg(U₁U₂U₃U₄)/2π, which equals (i/2π)∫tr P[∂₁P, ∂₂P]
/// for H(k) = Σ_r t_r e^{−ik·r} and so matches the real-space formula.
pub fn kspace_chern_2d(bloch: impl Fn(&[f64]) -> Mat<c64>, grid: usize) -> Result<i64> {
    if grid < 2 {
        return invalid("k grid needs at least 2 points per direction");
    }
    let k = |i: usize| 2.0 * PI * (i % grid) as f64 / grid as f64;
    let mut frames: Vec<Mat<c64>> = Vec::with_capacity(grid * grid);
    let mut occupied = None;
    for i in 0..grid {
        for j in 0..grid {
            let h = bloch(&[k(i), k(j)]);
            let eig = h
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| Error::Numerical(format!("{e:?}")))?;
            let vals: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
            let scale = h.norm_max().max(1.0);
            if vals.iter().any(|e| e.abs() < 1e-9 * scale) {
                return Err(Error::Gapless(format!("zero-energy state at k = ({}, {})", k(i), k(j))));
            }
            let occ = vals.iter().filter(|&&e| e < 0.0).count();
            if *occupied.get_or_insert(occ) != occ {
                return Err(Error::Gapless("occupied band count changes across the grid".into()));
            }
            frames.push(eig.U().subcols(0, occ).to_owned());
        }
    }
    let at = |i: usize, j: usize| &frames[(i % grid) * grid + (j % grid)];
    let link = |a: &Mat<c64>, b: &Mat<c64>| (a.adjoint() * b).as_ref().determinant();
    let mut flux = 0.0;
    for i in 0..grid {
        for j in 0..grid {
            let w = link(at(i, j), at(i + 1, j))
                * link(at(i + 1, j), at(i + 1, j + 1))
                * link(at(i + 1, j + 1), at(i, j + 1))
                * link(at(i, j + 1), at(i, j));
            flux += w.arg();
        }
    }
    Ok((-flux / (2.0 * PI)).round() as i64)
}

/// Winding of det u(k) around the Brillouin circle, sampled at `grid` points.
pub fn kspace_winding_1d(block: impl Fn(f64) -> Mat<c64>, grid: usize) -> Result<i64> {
    if grid < 2 {
        return invalid("k grid needs at least 2 points");
    }
    let dets: Vec<c64> = (0..grid)
        .map(|i| block(2.0 * PI * i as f64 / grid as f64).as_ref().determinant())
        .collect();
    if let Some(z) = dets.iter().find(|z| z.norm() < 1e-12) {
        return Err(Error::Gapless(format!("singular block (|det| = {:.3e})", z.norm())));
    }
    let total: f64 = (0..grid)
        .map(|i| (dets[(i + 1) % grid] / dets[i]).arg())
        .sum();
    Ok((total / (2.0 * PI)).round() as i64)
}
