
use crate::error::{invalid, Error, Result};
use crate::operator::DenseOperator;

use super::dirac::DiracPhase;

/// Tr|[F, f ⊗ 1]|^q = Σ_k σ_k^q over the singular values of the commutator.
pub fn schatten_summability(f: &DenseOperator, phase: &DiracPhase, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return invalid(format!("Schatten exponent must be ≥ 1, got {q}"));
    }
    if f.geometry() != phase.base_geometry() {
        return invalid("Dirac phase was built for a different geometry");
    }
    let lifted = f.tensor_identity(phase.spinor_dim());
    let comm = phase.apply_left(lifted.matrix()) - phase.apply_right(lifted.matrix());
    if comm.norm_max() == 0.0 {
        return Ok(0.0);
    }
    let sv = comm
        .singular_values()
        .map_err(|e| Error::Numerical(format!("{e:?}")))?;
    Ok(sv.iter().map(|s| s.powf(q)).sum())
}
