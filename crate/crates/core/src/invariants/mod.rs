//! Even and odd Chern numbers, index pairings, Chern-character cocycles and
//! k-space reference values.

mod cocycle;
mod dirac;
mod identity;
mod index;
mod kspace;
mod local;
mod summability;

use faer::c64;

pub use cocycle::{
    cocycle_eval, even_pairing_inputs, odd_pairing_inputs, uniform_x0_grid, CocycleOptions,
    CocycleValue,
};
pub use dirac::{dirac_phase, DiracPhase};
pub use identity::{
    geometric_identity_residual, geometric_identity_with, IdentityConvention, IdentityResidual,
};
pub use index::{fredholm_index_even, fredholm_index_odd, IndexOptions, IndexResult};
pub use kspace::{kspace_chern_2d, kspace_winding_1d};
pub use local::{chern_even, chern_odd};
pub use summability::schatten_summability;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantResult {
    pub value: c64,
    pub nearest_integer: i64,
    /// |Re value − nearest_integer|.
    pub deviation: f64,
    pub realizations: usize,
    pub x0_samples: usize,
    pub std_error: f64,
}

impl InvariantResult {
    pub fn single(value: c64) -> Self {
        let nearest = value.re.round();
        Self {
            value,
            nearest_integer: nearest as i64,
            deviation: (value.re - nearest).abs(),
            realizations: 1,
            x0_samples: 1,
            std_error: 0.0,
        }
    }

    /// Mean over results in the given order; standard error from the real parts.
    pub fn mean(results: &[InvariantResult]) -> Option<Self> {
        let k = results.len();
        if k == 0 {
            return None;
        }
        let mut sum = c64::new(0.0, 0.0);
        for r in results {
            sum += r.value;
        }
        let mean = sum / k as f64;
        let std_error = if k > 1 {
            let var = results
                .iter()
                .map(|r| (r.value.re - mean.re).powi(2))
                .sum::<f64>()
                / (k - 1) as f64;
            (var / k as f64).sqrt()
        } else {
            0.0
        };
        let mut out = Self::single(mean);
        out.realizations = results.iter().map(|r| r.realizations).sum();
        out.x0_samples = results[0].x0_samples;
        out.std_error = std_error;
        Some(out)
    }
}

/// Λ_d = (2πi)^{d/2} / (d/2)! for even d.
pub fn lambda_even(d: usize) -> c64 {
    let h = (d / 2) as i32;
    c64::new(0.0, 2.0 * std::f64::consts::PI).powi(h) / factorial(d / 2)
}

/// Λ̃_d = i(−iπ)^{(d−1)/2} / d!! for odd d.
pub fn lambda_odd(d: usize) -> c64 {
    let h = ((d - 1) / 2) as i32;
    c64::new(0.0, 1.0) * c64::new(0.0, -std::f64::consts::PI).powi(h) / double_factorial(d)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn double_factorial(n: usize) -> f64 {
    (1..=n).rev().step_by(2).map(|k| k as f64).product()
}

/// All permutations of 0..d with their signs.
pub(crate) fn permutations(d: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..d).collect(), &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..d)
                .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

pub(crate) fn check_even(what: &'static str, d: usize) -> crate::Result<()> {
    if d % 2 != 0 {
        return Err(crate::Error::WrongParity {
            what,
            expected: "even",
            dim: d,
        });
    }
    Ok(())
}

pub(crate) fn check_odd(what: &'static str, d: usize) -> crate::Result<()> {
    if d % 2 != 1 {
        return Err(crate::Error::WrongParity {
            what,
            expected: "odd",
            dim: d,
        });
    }
    Ok(())
}
