//! Finite-volume trace per volume, position-commutator derivations and
//! calculus diagnostics.

use faer::{c64, Mat};

use crate::error::{invalid, Result};
use crate::geometry::Geometry;
use crate::operator::{trace_of_product, DenseOperator};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum TraceStrategy {
    /// Trace over a centered sub-box with ⌈bulk_fraction·L⌉ sites per
    /// direction; derivatives use the exact position operator.
    OpenBulk { bulk_fraction: f64 },
    /// Full trace; derivatives use nearest-image displacements.
    #[default]
    PeriodicSawtooth,
}

impl TraceStrategy {
    pub fn open_bulk(bulk_fraction: f64) -> Result<Self> {
        if !(bulk_fraction > 0.0 && bulk_fraction <= 1.0) {
            return invalid(format!("bulk fraction must lie in (0, 1], got {bulk_fraction}"));
        }
        Ok(Self::OpenBulk { bulk_fraction })
    }

    /// Per-site mask of the traced region.
    pub fn region(&self, g: &Geometry) -> Vec<bool> {
        match *self {
            Self::PeriodicSawtooth => vec![true; g.n_sites()],
            Self::OpenBulk { bulk_fraction } => {
                let m = ((bulk_fraction * g.size as f64).ceil() as usize).clamp(1, g.size);
                let lo = ((g.size - m) / 2) as i64;
                let hi = lo + m as i64;
                (0..g.n_sites())
                    .map(|r| {
                        let x = g.site(r);
                        x.iter().take(g.dim).all(|&c| c >= lo && c < hi)
                    })
                    .collect()
            }
        }
    }
}

/// Tr(Π A Π) / (number of traced sites).
pub fn nc_trace(a: &DenseOperator, s: TraceStrategy) -> c64 {
    let g = a.geometry();
    let mask = s.region(&g);
    let count = mask.iter().filter(|&&b| b).count();
    let n = g.orbitals;
    let tr: c64 = (0..a.dim())
        .filter(|&i| mask[i / n])
        .map(|i| a.get(i, i))
        .sum();
    tr / count as f64
}

/// nc_trace(A·B) without forming the product.
pub fn nc_trace_product(a: &DenseOperator, b: &DenseOperator, s: TraceStrategy) -> c64 {
    let g = a.geometry();
    let mask = s.region(&g);
    let count = mask.iter().filter(|&&b| b).count();
    let n = g.orbitals;
    trace_of_product(a.matrix(), b.matrix(), |i| mask[i / n]) / count as f64
}

/// Per-site-pair displacement component used by the derivation along `j`.
fn derivative_weights(g: &Geometry, j: usize, s: TraceStrategy) -> Mat<f64> {
    let sites = g.n_sites();
    let l = g.size as i64;
    Mat::from_fn(sites, sites, |xr, yr| {
        let d = g.site(xr)[j] - g.site(yr)[j];
        match s {
            TraceStrategy::OpenBulk { .. } => d as f64,
            TraceStrategy::PeriodicSawtooth => {
                let mut r = d.rem_euclid(l);
                if 2 * r > l {
                    r -= l;
                }
                // The two images at exactly L/2 cancel.
                if 2 * r == l {
                    0.0
                } else {
                    r as f64
                }
            }
        }
    })
}

/// ∂_j A = i[X_j, A], rendered per strategy.
pub fn nc_derivative(a: &DenseOperator, j: usize, s: TraceStrategy) -> Result<DenseOperator> {
    let g = a.geometry();
    if j >= g.dim {
        return invalid(format!("direction {j} out of range for d = {}", g.dim));
    }
    let w = derivative_weights(&g, j, s);
    let n = g.orbitals;
    let m = a.matrix();
    Ok(a.with_matrix(Mat::from_fn(a.dim(), a.dim(), |p, q| {
        c64::new(0.0, w[(p / n, q / n)]) * m[(p, q)]
    })))
}

/// |nc_trace(A ∂_j B) + nc_trace(∂_j A · B)|.
pub fn integration_by_parts_check(
    a: &DenseOperator,
    b: &DenseOperator,
    j: usize,
    s: TraceStrategy,
) -> Result<f64> {
    let da = nc_derivative(a, j, s)?;
    let db = nc_derivative(b, j, s)?;
    Ok((nc_trace_product(a, &db, s) + nc_trace_product(&da, b, s)).norm())
}

/// sqrt(nc_trace(f f†)).
pub fn gns_norm(f: &DenseOperator, s: TraceStrategy) -> f64 {
    nc_trace_product(f, &f.adjoint(), s).re.max(0.0).sqrt()
}

/// Log-linear fit mean|A_xy| ≈ amplitude·e^{−rate·|x−y|}.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit {
    pub amplitude: f64,
    /// +∞ when no off-diagonal shell rises above the noise floor.
    pub rate: f64,
    /// (shell distance, mean block norm) for every populated shell.
    pub shells: Vec<(f64, f64)>,
}

/// Shells below this fraction of the largest shell mean are treated as round-off.
const NOISE_FLOOR: f64 = 1e-13;

pub fn localization_profile(a: &DenseOperator) -> DecayFit {
    let g = a.geometry();
    let n = g.orbitals;
    let m = a.matrix();
    let mut sums: Vec<f64> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for xr in 0..g.n_sites() {
        let x = g.site(xr);
        for yr in 0..g.n_sites() {
            let shell = g.distance(&x, &g.site(yr)).round() as usize;
            let mut fro = 0.0;
            for q in 0..n {
                for p in 0..n {
                    fro += m[(xr * n + p, yr * n + q)].norm_sqr();
                }
            }
            if shell >= sums.len() {
                sums.resize(shell + 1, 0.0);
                counts.resize(shell + 1, 0);
            }
            sums[shell] += fro.sqrt();
            counts[shell] += 1;
        }
    }
    let shells: Vec<(f64, f64)> = sums
        .iter()
        .zip(&counts)
        .enumerate()
        .filter(|(_, (_, &c))| c > 0)
        .map(|(d, (&s, &c))| (d as f64, s / c as f64))
        .collect();
    let peak = shells.iter().map(|s| s.1).fold(0.0, f64::max);
    let usable: Vec<(f64, f64)> = shells
        .iter()
        .filter(|(d, v)| *d >= 1.0 && *v > NOISE_FLOOR * peak && *v > 0.0)
        .map(|&(d, v)| (d, v.ln()))
        .collect();
    if usable.len() < 2 {
        let amplitude = shells.first().map(|s| s.1).unwrap_or(0.0);
        return DecayFit {
            amplitude,
            rate: f64::INFINITY,
            shells,
        };
    }
    let k = usable.len() as f64;
    let mx = usable.iter().map(|u| u.0).sum::<f64>() / k;
    let my = usable.iter().map(|u| u.1).sum::<f64>() / k;
    let sxy: f64 = usable.iter().map(|u| (u.0 - mx) * (u.1 - my)).sum();
    let sxx: f64 = usable.iter().map(|u| (u.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    DecayFit {
        amplitude: (my - slope * mx).exp(),
        rate: -slope,
        shells,
    }
}
