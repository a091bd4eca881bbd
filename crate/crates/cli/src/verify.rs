//! Built-in identity checks run by `ncbloch verify`.

use std::f64::consts::PI;
use std::fmt;

use ncbloch_core::clifford::{build_clifford_rep, CliffordRep};
use ncbloch_core::geometry::Site;
use ncbloch_core::invariants::{dirac_phase, geometric_identity_residual};
use ncbloch_core::lattice::{
    gallery_model, hamiltonian_from_realization, magnetic_translation, translate_disorder,
    DisorderKind, DisorderRealization, DisorderSpec, GalleryModel, MagneticForm,
};
use ncbloch_core::nccalc::{integration_by_parts_check, nc_trace, TraceStrategy};
use ncbloch_core::{Boundary, DenseOperator, Geometry, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} residual={:.3e} tol={:.1e}", self.name, self.residual, self.tolerance)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Anticommutation, Hermiticity and grading residuals of one representation.
pub fn check_clifford(rep: &CliffordRep) -> Check {
    let r = rep
        .anticommutation_deviation()
        .max(rep.hermiticity_deviation())
        .max(rep.grading_deviation());
    Check::new(format!("clifford n={}", rep.n()), r, 1e-12)
}

/// max |U_a H_ω U_a⁻¹ − H_{t_a ω}| over the given translations.
pub fn covariance_residual(flux: f64, shifts: &[Site]) -> Result<f64> {
    let spec = gallery_model(GalleryModel::Qwz(1.0), 8, Boundary::Periodic)?
        .with_magnetic_form(MagneticForm::plane(2, 0, 1, flux)?)?;
    let dis = DisorderSpec::new(DisorderKind::Bond, 1.0, 11)?;
    let real = DisorderRealization::generate(&spec, &dis, 0)?;
    let h = hamiltonian_from_realization(&spec, &real, 1.0)?;
    let mut worst = 0.0f64;
    for a in shifts {
        let u = magnetic_translation(&spec, a)?;
        let moved = &(&u * &h) * &u.adjoint();
        let expect = hamiltonian_from_realization(&spec, &translate_disorder(&real, a)?, 1.0)?;
        worst = worst.max((&moved - &expect).max_abs());
    }
    Ok(worst)
}

/// Two independent range-1 operators on a 16 × 16 torus.
fn calculus_pair() -> Result<(DenseOperator, DenseOperator)> {
    let spec = gallery_model(GalleryModel::Qwz(0.7), 16, Boundary::Periodic)?;
    let dis = DisorderSpec::new(DisorderKind::Bond, 1.0, 5)?;
    let a = ncbloch_core::lattice::build_hamiltonian(&spec, &dis, 0)?;
    let b = ncbloch_core::lattice::build_hamiltonian(&spec, &dis, 1)?;
    let b = &b + &b.scaled(ncbloch_core::c64::new(0.0, 0.5));
    Ok((a, b))
}

fn dirac_residual() -> Result<f64> {
    let mut worst = 0.0f64;
    for (d, size) in [(1usize, 9usize), (2, 5), (3, 3)] {
        let rep = build_clifford_rep(d)?;
        let g = Geometry::new(d, size, 1, Boundary::Open)?;
        for x0 in [vec![0.0; d], vec![0.5; d], vec![0.3; d]] {
            let phase = dirac_phase(g, &x0, &rep)?;
            let f = phase.operator();
            let id = DenseOperator::identity(f.geometry());
            worst = worst
                .max((&(&f * &f) - &id).max_abs())
                .max(f.hermiticity_deviation());
            if let (0, Some(gamma)) = (d % 2, phase.grading_operator()) {
                worst = worst.max((&(&f * &gamma) + &(&gamma * &f)).max_abs());
            }
        }
    }
    Ok(worst)
}

pub const IDENTITY_POINT_SETS: [[[f64; 2]; 3]; 3] = [
    [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
    [[1.0, 2.0], [-1.0, 0.0], [2.0, -1.0]],
    [[0.0, 0.0], [3.0, 1.0], [1.0, 2.0]],
];

fn run(level: Level) -> Result<Report> {
    let mut checks = Vec::new();
    for n in 1..=8 {
        checks.push(check_clifford(&build_clifford_rep(n)?));
    }
    let shifts: [Site; 4] = [[1, 0, 0], [0, 3, 0], [2, 5, 0], [-3, 1, 0]];
    checks.push(Check::new("covariance flux=0", covariance_residual(0.0, &shifts)?, 1e-12));
    checks.push(Check::new(
        "covariance flux=2pi/8",
        covariance_residual(2.0 * PI / 8.0, &shifts)?,
        1e-12,
    ));
    let s = TraceStrategy::PeriodicSawtooth;
    let (a, b) = calculus_pair()?;
    let cyc = (nc_trace(&(&a * &b), s) - nc_trace(&(&b * &a), s)).norm();
    checks.push(Check::new("cyclicity L=16", cyc, 1e-12));
    let parts = (0..2)
        .map(|j| integration_by_parts_check(&a, &b, j, s))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::new("integration by parts L=16", parts, 1e-12));
    checks.push(Check::new("dirac phase F^2=1, F=F*", dirac_residual()?, 1e-12));
    let one_d = geometric_identity_residual(1, &[vec![2.0], vec![-1.0]], 10.0, 0.5)?;
    checks.push(Check::new("identity d=1", one_d.residual, 1e-12));
    let (r, step) = match level {
        Level::Quick => (10.0, 0.1),
        Level::Full => (40.0, 0.05),
    };
    for (k, set) in IDENTITY_POINT_SETS.iter().enumerate() {
        let pts: Vec<Vec<f64>> = set.iter().map(|p| p.to_vec()).collect();
        let res = geometric_identity_residual(2, &pts, r, step)?;
        checks.push(Check::new(format!("identity d=2 set {k} R={r}"), res.residual, 2e-2));
    }
    Ok(Report { checks })
}

/// Runs every check; an internal error becomes a failing check.
pub fn verify_suite(level: Level) -> Report {
    run(level).unwrap_or_else(|e| Report {
        checks: vec![Check::new(format!("internal error: {e}"), f64::INFINITY, 0.0)],
    })
}
