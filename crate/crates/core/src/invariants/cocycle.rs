//! Non-local Chern-character cocycles evaluated with the Dirac phase.
//!
//! The full finite-volume trace of these expressions vanishes for the
//! pairing inputs (the defect at −x0 and the boundary contribute opposite
//! amounts), so the trace is restricted to a window around the defect.

use faer::{c64, Mat};

use crate::clifford::build_clifford_rep;
use crate::error::{invalid, Result};
use crate::nccalc::localization_profile;
use crate::operator::DenseOperator;

use super::dirac::dirac_phase;
use super::check_odd;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CocycleOptions {
    /// Radius of the trace window around −x0; defaults to L/4.
    pub window_radius: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CocycleValue {
    pub value: c64,
    pub samples: usize,
    /// False when some input shows no exponential decay.
    pub localized: bool,
    /// Smallest decay rate among the inputs.
    pub min_rate: f64,
}

/// Points (k + ½)/n in every direction, last direction fastest.
pub fn uniform_x0_grid(d: usize, per_direction: usize) -> Vec<Vec<f64>> {
    let n = per_direction.max(1);
    let total = n.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut x = vec![0.0; d];
            for j in (0..d).rev() {
                x[j] = ((idx % n) as f64 + 0.5) / n as f64;
                idx /= n;
            }
            x
        })
        .collect()
}

/// (u⁻¹ − 1, u − 1, u⁻¹ − 1, …), d + 1 entries.
pub fn odd_pairing_inputs(u: &DenseOperator) -> Result<Vec<DenseOperator>> {
    let d = u.geometry().dim;
    check_odd("odd pairing", d)?;
    let one = c64::new(-1.0, 0.0);
    let inv = u.inverse().shifted(one);
    let fwd = u.shifted(one);
    Ok((0..=d)
        .map(|i| if i % 2 == 0 { inv.clone() } else { fwd.clone() })
        .collect())
}

/// (p, p, …), d + 1 entries.
pub fn even_pairing_inputs(p: &DenseOperator) -> Vec<DenseOperator> {
    vec![p.clone(); p.geometry().dim + 1]
}

/// Average over realizations and x0 samples of
/// c_d · Tr′{π(f₀)[F, π(f₁)]⋯[F, π(f_d)]}, with c_d = i^{d+1}/2^d and
/// Tr′ = ½Tr(F d·) for odd d, c_d = 1 and Tr′ = ½Tr(γF d·) for even d.
pub fn cocycle_eval(
    realizations: &[Vec<DenseOperator>],
    x0_samples: &[Vec<f64>],
    opts: CocycleOptions,
) -> Result<CocycleValue> {
    let Some(first) = realizations.first().and_then(|r| r.first()) else {
        return invalid("no operators supplied");
    };
    if x0_samples.is_empty() {
        return invalid("no x0 samples supplied");
    }
    let geo = first.geometry();
    let d = geo.dim;
    for list in realizations {
        if list.len() != d + 1 {
            return invalid(format!("need {} operators, got {}", d + 1, list.len()));
        }
        if list.iter().any(|f| f.geometry() != geo) {
            return invalid("operators live on different geometries");
        }
    }
    let min_rate = realizations
        .iter()
        .flatten()
        .map(|f| localization_profile(f).rate)
        .fold(f64::INFINITY, f64::min);
    let rep = build_clifford_rep(d)?;
    let s = rep.spinor_dim();
    let radius = opts.window_radius.unwrap_or(geo.size as f64 / 4.0);
    let prefactor = if d % 2 == 1 {
        c64::new(0.0, 1.0).powi(d as i32 + 1) / 2f64.powi(d as i32)
    } else {
        c64::new(1.0, 0.0)
    };
    let mut acc = c64::new(0.0, 0.0);
    let mut samples = 0usize;
    for list in realizations {
        let lifted: Vec<DenseOperator> = list.iter().map(|f| f.tensor_identity(s)).collect();
        for x0 in x0_samples {
            let f = dirac_phase(geo, x0, &rep)?;
            let mut eta: Mat<c64> = lifted[0].matrix().to_owned();
            for op in &lifted[1..] {
                let comm = f.apply_left(op.matrix()) - f.apply_right(op.matrix());
                eta = &eta * &comm;
            }
            let conj = f.apply_right(f.apply_left(eta.as_ref()).as_ref());
            let x = if d % 2 == 1 {
                &eta + &conj
            } else {
                let gamma = f.grading_operator().expect("even rep is graded");
                gamma.matrix() * (&eta - &conj)
            };
            let mask = f.window(radius);
            let per_site = geo.orbitals * s;
            let tr: c64 = (0..x.nrows())
                .filter(|&i| mask[i / per_site])
                .map(|i| x[(i, i)])
                .sum();
            acc += prefactor * tr * 0.5;
            samples += 1;
        }
    }
    Ok(CocycleValue {
        value: acc / samples as f64,
        samples,
        localized: min_rate > 0.0,
        min_rate,
    })
}
