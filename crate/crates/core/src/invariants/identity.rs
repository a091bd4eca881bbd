//! Quadrature check of the geometric identities behind the local formulas.

use std::f64::consts::PI;

use faer::{c64, Mat};

use crate::clifford::build_clifford_rep;
use crate::error::{invalid, Result};

use super::permutations;

/// How x_{d+1} in the product Π_i (x̂_i − x̂_{i+1}) is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityConvention {
    /// x_{d+1} is its own point (the site of f₀); the closed form uses x_i − x_{d+1}.
    Independent,
    /// x_{d+1} = x_1; the closed form uses the raw x_i.
    Cyclic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual {
    pub lhs: c64,
    pub rhs: c64,
    /// |lhs − rhs| / (1 + |rhs|).
    pub residual: f64,
}

/// Identity check with the convention that matches numerically
/// ([`IdentityConvention::Independent`]); `points` holds d + 1 vectors.
pub fn geometric_identity_residual(
    d: usize,
    points: &[Vec<f64>],
    quad_box: f64,
    quad_step: f64,
) -> Result<IdentityResidual> {
    geometric_identity_with(d, points, quad_box, quad_step, IdentityConvention::Independent)
}

pub fn geometric_identity_with(
    d: usize,
    points: &[Vec<f64>],
    quad_box: f64,
    quad_step: f64,
    convention: IdentityConvention,
) -> Result<IdentityResidual> {
    if !(1..=3).contains(&d) {
        return invalid(format!("identity defined for d = 1, 2, 3, got {d}"));
    }
    if points.len() != d + 1
        || points.iter().any(|p| p.len() != d || p.iter().any(|c| !c.is_finite()))
    {
        return invalid(format!("need {} finite points in R^{d}", d + 1));
    }
    if !(quad_box > 0.0 && quad_step > 0.0 && quad_step < quad_box) {
        return invalid("quadrature box and step must be positive with step < box");
    }
    let chain: Vec<&[f64]> = match convention {
        IdentityConvention::Independent => points.iter().map(|p| p.as_slice()).collect(),
        IdentityConvention::Cyclic => points[..d]
            .iter()
            .chain(std::iter::once(&points[0]))
            .map(|p| p.as_slice())
            .collect(),
    };
    let lhs = quadrature(d, &chain, quad_box, quad_step)?;
    let shifted: Vec<Vec<f64>> = match convention {
        IdentityConvention::Independent => points[..d]
            .iter()
            .map(|p| (0..d).map(|j| p[j] - points[d][j]).collect())
            .collect(),
        IdentityConvention::Cyclic => points[..d].to_vec(),
    };
    let rhs = closed_form_constant(d) * determinant(&shifted);
    Ok(IdentityResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).norm() / (1.0 + rhs.norm()),
    })
}

/// 2^{(d+1)/2}(2π)^{(d−1)/2}/(i^{(d−1)/2} d!!) for odd d,
/// −(2π)^{d/2}/(i^{d/2}(d/2)!) for even d.
fn closed_form_constant(d: usize) -> c64 {
    let i = c64::new(0.0, 1.0);
    if d % 2 == 1 {
        let h = ((d - 1) / 2) as i32;
        let dfact: f64 = (1..=d).rev().step_by(2).map(|k| k as f64).product();
        c64::new(2f64.powf((d + 1) as f64 / 2.0) * (2.0 * PI).powi(h) / dfact, 0.0) / i.powi(h)
    } else {
        let h = (d / 2) as i32;
        let fact: f64 = (1..=d / 2).map(|k| k as f64).product();
        -c64::new((2.0 * PI).powi(h) / fact, 0.0) / i.powi(h)
    }
}

/// Σ_ρ (−1)^ρ Π_i y_i^{ρ_i}.
fn determinant(y: &[Vec<f64>]) -> f64 {
    let d = y.len();
    permutations(d)
        .into_iter()
        .map(|(p, sign)| sign * (0..d).map(|i| y[i][p[i]]).product::<f64>())
        .sum()
}

/// Midpoint rule over [−R, R]^d of tr{γ₀? Π_i (â_i − â_{i+1})·Γ}, â_i the
/// unit vector of chain[i] + x.
fn quadrature(d: usize, chain: &[&[f64]], r: f64, step: f64) -> Result<c64> {
    let rep = build_clifford_rep(d)?;
    let s = rep.spinor_dim();
    let gens: Vec<Mat<c64>> = rep.generators().to_vec();
    let grading = rep.grading().cloned();
    let n = (2.0 * r / step).round().max(1.0) as usize;
    let h = 2.0 * r / n as f64;
    let total = n.pow(d as u32);
    let mut x = vec![0.0; d];
    let mut unit = vec![vec![0.0; d]; chain.len()];
    let mut acc = c64::new(0.0, 0.0);
    for idx in 0..total {
        let mut rem = idx;
        for j in (0..d).rev() {
            x[j] = -r + ((rem % n) as f64 + 0.5) * h;
            rem /= n;
        }
        for (u, p) in unit.iter_mut().zip(chain) {
            let v: Vec<f64> = (0..d).map(|j| p[j] + x[j]).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            for j in 0..d {
                u[j] = if norm == 0.0 { 1.0 / (d as f64).sqrt() } else { v[j] / norm };
            }
        }
        let mut m = match &grading {
            Some(g) => g.clone(),
            None => Mat::<c64>::identity(s, s),
        };
        for i in 0..d {
            let diff = Mat::from_fn(s, s, |a, b| {
                (0..d)
                    .map(|j| gens[j][(a, b)] * (unit[i][j] - unit[i + 1][j]))
                    .sum::<c64>()
            });
            m = &m * &diff;
        }
        acc += (0..s).map(|a| m[(a, a)]).sum::<c64>();
    }
    Ok(acc * h.powi(d as i32))
}
