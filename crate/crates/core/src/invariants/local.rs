use faer::c64;

use crate::error::{invalid, Error, Result};
use crate::nccalc::{nc_derivative, nc_trace, nc_trace_product, TraceStrategy};
use crate::operator::DenseOperator;

use super::{check_even, check_odd, lambda_even, lambda_odd, permutations, InvariantResult};

/// Λ_d Σ_ρ (−1)^ρ nc_trace(P ∂_{ρ1}P ⋯ ∂_{ρd}P).
pub fn chern_even(p: &DenseOperator, s: TraceStrategy) -> Result<InvariantResult> {
    let d = p.geometry().dim;
    check_even("chern_even", d)?;
    let idem = (&(p * p) - p).max_abs();
    if idem > 1e-8 {
        return invalid(format!("input is not a projector (|P² − P| = {idem:.3e})"));
    }
    let dp: Vec<DenseOperator> = (0..d)
        .map(|j| nc_derivative(p, j, s))
        .collect::<Result<_>>()?;
    let value = antisymmetrized(p, &dp, s) * lambda_even(d);
    Ok(InvariantResult::single(value))
}

/// Λ̃_d Σ_ρ (−1)^ρ nc_trace(U⁻¹∂_{ρ1}U ⋯ U⁻¹∂_{ρd}U).
pub fn chern_odd(u: &DenseOperator, s: TraceStrategy) -> Result<InvariantResult> {
    let d = u.geometry().dim;
    check_odd("chern_odd", d)?;
    let sv = u
        .matrix()
        .singular_values()
        .map_err(|e| Error::Numerical(format!("{e:?}")))?;
    let smallest = sv.last().copied().unwrap_or(0.0);
    if smallest <= 1e-8 {
        return Err(Error::NotInvertible { smallest });
    }
    let inv = u.inverse();
    let m: Vec<DenseOperator> = (0..d)
        .map(|j| nc_derivative(u, j, s).map(|du| &inv * &du))
        .collect::<Result<_>>()?;
    let mut acc = c64::new(0.0, 0.0);
    for (perm, sign) in permutations(d) {
        let t = if d == 1 {
            nc_trace(&m[0], s)
        } else {
            let mut head = m[perm[0]].clone();
            for &k in &perm[1..d - 1] {
                head = &head * &m[k];
            }
            nc_trace_product(&head, &m[perm[d - 1]], s)
        };
        acc += t * sign;
    }
    Ok(InvariantResult::single(acc * lambda_odd(d)))
}

/// Σ_ρ (−1)^ρ nc_trace(P ∂_{ρ1}P ⋯ ∂_{ρd}P) with the last product folded into the trace.
fn antisymmetrized(p: &DenseOperator, dp: &[DenseOperator], s: TraceStrategy) -> c64 {
    let d = dp.len();
    let mut acc = c64::new(0.0, 0.0);
    for (perm, sign) in permutations(d) {
        let mut head = p.clone();
        for &k in &perm[..d - 1] {
            head = &head * &dp[k];
        }
        acc += nc_trace_product(&head, &dp[perm[d - 1]], s) * sign;
    }
    acc
}
