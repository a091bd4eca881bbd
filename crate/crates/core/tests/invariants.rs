mod common;

use common::{c, curvature_integral, pauli, qwz_bloch, qwz_projector, ssh_bloch, ssh_projector, ssh_unitary, winding};
use faer::Mat;
use ncbloch_core::clifford::build_clifford_rep;
use ncbloch_core::invariants::*;
use ncbloch_core::lattice::{DisorderKind, DisorderSpec};
use ncbloch_core::nccalc::TraceStrategy;
use ncbloch_core::{Boundary, DenseOperator, Error, Geometry};

const SAW: TraceStrategy = TraceStrategy::PeriodicSawtooth;

fn torus(d: usize, size: usize, n: usize) -> Geometry {
    Geometry::new(d, size, n, Boundary::Periodic).unwrap()
}

fn ssh_block(m: f64) -> impl Fn(f64) -> Mat<faer::c64> {
    move |k| Mat::from_fn(1, 1, |_, _| ssh_bloch(m, k)[(0, 1)])
}

#[test]
fn kspace_oracles_agree_with_curvature_and_winding() {
    for m in [0.5, 1.0, 3.0, -1.5] {
        let fhs = kspace_chern_2d(|k| qwz_bloch(m, k), 32).unwrap();
        let curv = curvature_integral(|k| qwz_bloch(m, k), 48);
        assert_eq!(fhs, curv.round() as i64, "m = {m}: {curv}");
    }
    assert_eq!(kspace_chern_2d(|k| qwz_bloch(1.0, k), 64).unwrap(), -1);
    assert_eq!(kspace_chern_2d(|k| qwz_bloch(3.0, k), 64).unwrap(), 0);
    for m in [0.5, 2.0] {
        let w = winding(|k| c(m + k.cos(), -k.sin()), 400);
        assert_eq!(kspace_winding_1d(ssh_block(m), 64).unwrap(), w.round() as i64);
    }
    assert_eq!(kspace_winding_1d(ssh_block(0.5), 64).unwrap(), -1);
}

#[test]
fn kspace_trivial_examples() {
    let one = |z: faer::c64| Mat::from_fn(1, 1, |_, _| z);
    assert_eq!(kspace_winding_1d(|k| one(c(k.cos(), k.sin())), 16).unwrap(), 1);
    assert_eq!(kspace_winding_1d(|_| one(c(0.3, -2.0)), 16).unwrap(), 0);
    let [_, _, sz] = pauli();
    assert_eq!(kspace_chern_2d(|_| sz.clone(), 16).unwrap(), 0);
    assert!(matches!(kspace_winding_1d(ssh_block(1.0), 64), Err(Error::Gapless(_))));
    assert!(matches!(kspace_chern_2d(|k| qwz_bloch(2.0, k), 64), Err(Error::Gapless(_))));
}

#[test]
fn chern_even_clean_qwz() {
    for (m, oracle) in [(1.0, -1.0), (3.0, 0.0)] {
        let p = qwz_projector(m, 20, &DisorderSpec::clean(), 0);
        let r = chern_even(&p, SAW).unwrap();
        assert!((r.value.re - oracle).abs() <= 0.05, "m = {m}: {:?}", r.value);
        assert!(r.value.im.abs() <= 1e-8);
        assert_eq!(r.nearest_integer, oracle as i64);
    }
}

#[test]
fn chern_even_trivial_and_errors() {
    let g = torus(2, 4, 2);
    assert_eq!(chern_even(&DenseOperator::zeros(g), SAW).unwrap().value.norm(), 0.0);
    let half = DenseOperator::identity(g).scaled(c(0.5, 0.0));
    assert!(matches!(chern_even(&half, SAW), Err(Error::InvalidArgument(_))));
    let p1 = ssh_projector(0.5, 10, Boundary::Periodic);
    assert!(matches!(chern_even(&p1, SAW), Err(Error::WrongParity { .. })));
}

#[test]
fn chern_odd_clean_ssh() {
    for m in [0.5, 2.0] {
        let u = ssh_unitary(m, 100, Boundary::Periodic, &DisorderSpec::clean(), 0);
        let oracle = kspace_winding_1d(ssh_block(m), 128).unwrap() as f64;
        let r = chern_odd(&u, SAW).unwrap();
        assert!((r.value.re - oracle).abs() <= 0.02, "m = {m}: {:?}", r.value);
        assert!(r.value.im.abs() <= 1e-8);
    }
}

#[test]
fn chern_odd_trivial_and_errors() {
    let g = torus(1, 8, 1);
    assert_eq!(chern_odd(&DenseOperator::identity(g), SAW).unwrap().value.norm(), 0.0);
    assert!(matches!(chern_odd(&DenseOperator::zeros(g), SAW), Err(Error::NotInvertible { .. })));
    let id2 = DenseOperator::identity(torus(2, 4, 1));
    assert!(matches!(chern_odd(&id2, SAW), Err(Error::WrongParity { .. })));
}

#[test]
fn dirac_phase_in_one_dimension_is_a_sign() {
    let g = Geometry::new(1, 10, 1, Boundary::Open).unwrap();
    let f = dirac_phase(g, &[0.5], &build_clifford_rep(1).unwrap()).unwrap().operator();
    for x in 0..10 {
        let expect = if x as f64 - 5.0 + 0.5 > 0.0 { 1.0 } else { -1.0 };
        assert_eq!(f.get(x, x), c(expect, 0.0));
    }
}

#[test]
fn dirac_phase_is_a_hermitian_involution() {
    for (d, size) in [(1, 9), (2, 5), (3, 3)] {
        let rep = build_clifford_rep(d).unwrap();
        for x0 in [vec![0.37; d], vec![0.0; d], vec![0.91; d]] {
            let g = Geometry::new(d, size, 2, Boundary::Open).unwrap();
            let phase = dirac_phase(g, &x0, &rep).unwrap();
            let f = phase.operator();
            let id = DenseOperator::identity(f.geometry());
            assert!((&(&f * &f) - &id).max_abs() <= 1e-12);
            assert!(f.hermiticity_deviation() <= 1e-12);
            if d == 2 {
                let gamma = phase.grading_operator().unwrap();
                assert!((&(&f * &gamma) + &(&gamma * &f)).max_abs() <= 1e-12);
            }
        }
    }
    let g = torus(2, 4, 1);
    let rep = build_clifford_rep(2).unwrap();
    assert!(dirac_phase(g, &[1.0, 0.0], &rep).is_err());
    assert!(dirac_phase(g, &[0.5], &rep).is_err());
    assert!(dirac_phase(g, &[0.5, 0.5], &build_clifford_rep(3).unwrap()).is_err());
}

#[test]
fn even_index_trivial_cases() {
    let g = torus(2, 6, 2);
    let rep = build_clifford_rep(2).unwrap();
    let f = dirac_phase(g, &[0.5, 0.5], &rep).unwrap();
    let r = fredholm_index_even(&DenseOperator::zeros(g), &f, IndexOptions::default()).unwrap();
    assert_eq!((r.index, r.kernel_dim), (0, 0));
    let lower = Mat::from_fn(2, 2, |i, j| c(if (i, j) == (1, 1) { 1.0 } else { 0.0 }, 0.0));
    let atomic = DenseOperator::site_local(g, lower.as_ref()).unwrap();
    assert_eq!(fredholm_index_even(&atomic, &f, IndexOptions::default()).unwrap().index, 0);
    let f1 = dirac_phase(torus(1, 6, 1), &[0.5], &build_clifford_rep(1).unwrap()).unwrap();
    let p1 = DenseOperator::zeros(torus(1, 6, 1));
    assert!(matches!(
        fredholm_index_even(&p1, &f1, IndexOptions::default()),
        Err(Error::WrongParity { .. })
    ));
}

#[test]
fn even_index_matches_chern_number_at_every_offset() {
    let p = qwz_projector(1.0, 16, &DisorderSpec::clean(), 0);
    let chern = chern_even(&p, SAW).unwrap().nearest_integer;
    let rep = build_clifford_rep(2).unwrap();
    for x0 in [[0.5, 0.5], [0.2, 0.7], [0.8, 0.1], [0.35, 0.35]] {
        let f = dirac_phase(p.geometry(), &x0, &rep).unwrap();
        let r = fredholm_index_even(&p, &f, IndexOptions::default()).unwrap();
        assert_eq!(r.index, chern, "x0 = {x0:?}: {r:?}");
        assert!(r.largest_discarded.unwrap_or(0.0) < r.smallest_retained.unwrap() * 1e-2, "{r:?}");
    }
}

#[test]
fn odd_index_trivial_cases() {
    let g = torus(1, 12, 1);
    let f = dirac_phase(g, &[0.5], &build_clifford_rep(1).unwrap()).unwrap();
    let id = DenseOperator::identity(g);
    assert_eq!(fredholm_index_odd(&id, &f, IndexOptions::default()).unwrap().index, 0);
    let phase = id.scaled(c(0.6, 0.8));
    assert_eq!(fredholm_index_odd(&phase, &f, IndexOptions::default()).unwrap().index, 0);
    assert!(fredholm_index_odd(&id.scaled(c(2.0, 0.0)), &f, IndexOptions::default()).is_err());
}

#[test]
fn odd_index_matches_winding_at_every_offset() {
    let u = ssh_unitary(0.5, 128, Boundary::Periodic, &DisorderSpec::clean(), 0);
    let chern = chern_odd(&u, SAW).unwrap().nearest_integer;
    assert_eq!(chern, -1);
    let rep = build_clifford_rep(1).unwrap();
    for x0 in [0.5, 0.2, 0.8, 0.0] {
        let f = dirac_phase(u.geometry(), &[x0], &rep).unwrap();
        let r = fredholm_index_odd(&u, &f, IndexOptions::default()).unwrap();
        assert_eq!(r.index, chern, "x0 = {x0}: {r:?}");
    }
}

#[test]
fn cocycle_of_identities_vanishes() {
    let g = torus(1, 16, 1);
    let ops = vec![vec![DenseOperator::identity(g); 2]];
    let v = cocycle_eval(&ops, &uniform_x0_grid(1, 4), CocycleOptions::default()).unwrap();
    assert_eq!(v.value.norm(), 0.0);
    assert_eq!(v.samples, 4);
}

#[test]
fn cocycle_is_linear_in_the_first_slot() {
    let u = ssh_unitary(0.5, 32, Boundary::Periodic, &DisorderSpec::clean(), 0);
    let inputs = odd_pairing_inputs(&u).unwrap();
    let g0 = common::random_short_range(u.geometry(), 1, 17);
    let (alpha, beta) = (c(0.3, -1.2), c(2.0, 0.5));
    let grid = uniform_x0_grid(1, 2);
    let eval = |first: DenseOperator| {
        let mut list = inputs.clone();
        list[0] = first;
        cocycle_eval(&[list], &grid, CocycleOptions::default()).unwrap().value
    };
    let combined = eval(&inputs[0].scaled(alpha) + &g0.scaled(beta));
    let separate = alpha * eval(inputs[0].clone()) + beta * eval(g0);
    assert!((combined - separate).norm() <= 1e-10);
}

#[test]
fn odd_pairing_reproduces_the_local_formula() {
    let u = ssh_unitary(0.5, 64, Boundary::Periodic, &DisorderSpec::clean(), 0);
    let local = chern_odd(&u, SAW).unwrap().value.re;
    let inputs = odd_pairing_inputs(&u).unwrap();
    let v = cocycle_eval(&[inputs], &uniform_x0_grid(1, 8), CocycleOptions::default()).unwrap();
    assert!((v.value.re - local).abs() <= 0.1, "{:?} vs {local}", v.value);
    assert!(v.localized && v.min_rate > 0.0);
    assert_eq!(v.samples, 8);
}

#[test]
fn cocycle_rejects_bad_input() {
    let g = torus(1, 8, 1);
    let id = DenseOperator::identity(g);
    assert!(cocycle_eval(&[vec![id.clone()]], &uniform_x0_grid(1, 2), CocycleOptions::default()).is_err());
    assert!(cocycle_eval(&[vec![id.clone(), id]], &[], CocycleOptions::default()).is_err());
    assert!(cocycle_eval(&[], &uniform_x0_grid(1, 2), CocycleOptions::default()).is_err());
}

#[test]
fn x0_grid_layout() {
    let g = uniform_x0_grid(2, 2);
    assert_eq!(g, vec![vec![0.25, 0.25], vec![0.25, 0.75], vec![0.75, 0.25], vec![0.75, 0.75]]);
}

#[test]
fn identity_with_coincident_points_vanishes() {
    for d in 1..=3 {
        let pts = vec![vec![0.5; d]; d + 1];
        let r = geometric_identity_residual(d, &pts, 4.0, 0.5).unwrap();
        assert_eq!(r.lhs.norm(), 0.0);
        assert_eq!(r.rhs.norm(), 0.0);
    }
}

#[test]
fn identity_in_one_dimension_selects_the_independent_reading() {
    let pts = vec![vec![2.0], vec![-1.0]];
    let ind = geometric_identity_with(1, &pts, 10.0, 0.5, IdentityConvention::Independent).unwrap();
    assert!((ind.lhs - c(6.0, 0.0)).norm() <= 1e-12 && ind.residual <= 1e-12);
    let cyc = geometric_identity_with(1, &pts, 10.0, 0.5, IdentityConvention::Cyclic).unwrap();
    assert_eq!(cyc.lhs.norm(), 0.0);
    assert!(cyc.residual > 0.5);
}

#[test]
fn identity_is_antisymmetric() {
    let a = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
    let b = vec![a[1].clone(), a[0].clone(), a[2].clone()];
    let ra = geometric_identity_residual(2, &a, 6.0, 0.1).unwrap();
    let rb = geometric_identity_residual(2, &b, 6.0, 0.1).unwrap();
    assert!((ra.lhs + rb.lhs).norm() <= 1e-10);
    assert!((ra.rhs + rb.rhs).norm() <= 1e-10);
}

#[test]
fn identity_in_two_dimensions() {
    let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
    let r = geometric_identity_residual(2, &pts, 40.0, 0.05).unwrap();
    assert!(r.residual <= 2e-2, "{r:?}");
    assert!(r.rhs.im.abs() > 6.0);
}

#[test]
fn identity_rejects_bad_input() {
    assert!(geometric_identity_residual(4, &vec![vec![0.0; 4]; 5], 4.0, 0.5).is_err());
    assert!(geometric_identity_residual(2, &vec![vec![0.0; 2]; 2], 4.0, 0.5).is_err());
    assert!(geometric_identity_residual(1, &[vec![0.0], vec![f64::NAN]], 4.0, 0.5).is_err());
    assert!(geometric_identity_residual(1, &[vec![0.0], vec![1.0]], 1.0, 2.0).is_err());
}

#[test]
fn summability_diagnostic() {
    let g = torus(1, 16, 2);
    let f = dirac_phase(g, &[0.5], &build_clifford_rep(1).unwrap()).unwrap();
    assert_eq!(schatten_summability(&DenseOperator::identity(g), &f, 2.0).unwrap(), 0.0);
    assert!(schatten_summability(&DenseOperator::identity(g), &f, 0.5).is_err());
    let sizes = [64, 128];
    let values: Vec<f64> = sizes
        .iter()
        .map(|&l| {
            let p = ssh_projector(0.5, l, Boundary::Periodic);
            let f = dirac_phase(p.geometry(), &[0.5], &build_clifford_rep(1).unwrap()).unwrap();
            schatten_summability(&p, &f, 2.0).unwrap()
        })
        .collect();
    assert!((values[1] / values[0] - 1.0).abs() < 0.1, "{values:?}");
}

#[test]
fn homotopy_keeps_the_chern_number() {
    let dis = DisorderSpec::new(DisorderKind::Bond, 0.5, 77).unwrap();
    let spec = ncbloch_core::lattice::gallery_model(
        ncbloch_core::lattice::GalleryModel::Qwz(1.0),
        12,
        Boundary::Periodic,
    )
    .unwrap();
    let h0 = ncbloch_core::lattice::build_hamiltonian(&spec, &dis, 0).unwrap();
    let h1 = ncbloch_core::lattice::build_hamiltonian(&spec, &dis, 1).unwrap();
    for step in 0..5 {
        let t = step as f64 / 4.0;
        let h = &h0.scaled(c(1.0 - t, 0.0)) + &h1.scaled(c(t, 0.0));
        let p = ncbloch_core::spectral::fermi_projector(&h, 0.0, 1e-9).unwrap();
        let r = chern_even(&p, SAW).unwrap();
        assert_eq!(r.nearest_integer, -1, "t = {t}: {:?}", r.value);
    }
}

#[test]
fn mean_and_standard_error() {
    let rs: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&v| InvariantResult::single(c(v, 0.0))).collect();
    let m = InvariantResult::mean(&rs).unwrap();
    assert_eq!(m.value, c(2.0, 0.0));
    assert!((m.std_error - (1.0f64 / 3.0).sqrt()).abs() <= 1e-15);
    assert_eq!((m.realizations, m.nearest_integer), (3, 2));
    assert!(InvariantResult::mean(&[]).is_none());
    let r = InvariantResult::single(c(-0.96, 0.1));
    assert_eq!(r.nearest_integer, -1);
    assert!((r.deviation - 0.04).abs() < 1e-12);
}

#[test]
fn normalization_constants() {
    assert!((lambda_even(2) - c(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-14);
    assert!((lambda_odd(1) - c(0.0, 1.0)).norm() < 1e-14);
    assert!((lambda_odd(3) - c(std::f64::consts::PI / 3.0, 0.0)).norm() < 1e-14);
}

#[test]
fn adaptive_cut_recovers_the_index_under_disorder() {
    let dis = DisorderSpec::new(DisorderKind::Bond, 0.5, 42).unwrap();
    let rep = build_clifford_rep(2).unwrap();
    for (m, expect) in [(1.0, -1), (-1.0, 1), (3.0, 0)] {
        let p = qwz_projector(m, 12, &dis, 0);
        for x0 in [[0.5, 0.5], [0.2, 0.7], [0.0, 0.0]] {
            let f = dirac_phase(p.geometry(), &x0, &rep).unwrap();
            let r = fredholm_index_even(&p, &f, IndexOptions::adaptive()).unwrap();
            assert_eq!(r.index, expect, "m = {m}, x0 = {x0:?}: {r:?}");
            if expect != 0 {
                assert!(r.threshold_used < 0.1 && r.smallest_retained.unwrap() > r.threshold_used);
            }
        }
    }
    // The fixed cut misses the weakly hybridized pair at this size.
    let p = qwz_projector(1.0, 12, &dis, 0);
    let f = dirac_phase(p.geometry(), &[0.2, 0.7], &rep).unwrap();
    let fixed = fredholm_index_even(&p, &f, IndexOptions::default()).unwrap();
    assert_eq!((fixed.index, fixed.kernel_dim), (0, 0));
}

#[test]
fn identity_in_three_dimensions_has_the_opposite_orientation() {
    // Magnitude agrees with the closed form; the sign is reversed under this
    // Clifford representation, so only |lhs| is compared.
    let pts = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
    let r = geometric_identity_residual(3, &pts, 12.0, 0.2).unwrap();
    assert!((r.lhs + r.rhs).norm() / r.rhs.norm() < 1e-2, "{r:?}");
}
