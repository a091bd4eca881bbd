mod common;

use common::{c, hermitian_part, random_dense, random_short_range, ssh_projector};
use faer::Mat;
use ncbloch_core::nccalc::*;
use ncbloch_core::{Boundary, DenseOperator, Error, Geometry};

const SAW: TraceStrategy = TraceStrategy::PeriodicSawtooth;

fn torus(d: usize, size: usize, n: usize) -> Geometry {
    Geometry::new(d, size, n, Boundary::Periodic).unwrap()
}

#[test]
fn trace_of_identity_counts_orbitals() {
    let g = torus(2, 5, 3);
    let id = DenseOperator::identity(g);
    assert!((nc_trace(&id, SAW) - c(3.0, 0.0)).norm() < 1e-14);
    let bulk = TraceStrategy::open_bulk(0.5).unwrap();
    assert!((nc_trace(&id, bulk) - c(3.0, 0.0)).norm() < 1e-14);
}

#[test]
fn traceless_orbital_block() {
    let g = torus(1, 7, 2);
    let sz = Mat::from_fn(2, 2, |i, j| c(if i != j { 0.0 } else if i == 0 { 1.0 } else { -1.0 }, 0.0));
    let a = DenseOperator::site_local(g, sz.as_ref()).unwrap();
    assert!(nc_trace(&a, SAW).norm() < 1e-15);
}

#[test]
fn bulk_region_is_centered() {
    let g = Geometry::new(2, 10, 1, Boundary::Open).unwrap();
    let mask = TraceStrategy::open_bulk(0.5).unwrap().region(&g);
    assert_eq!(mask.iter().filter(|&&b| b).count(), 25);
    assert!(mask[g.rank(&[2, 2, 0])] && mask[g.rank(&[6, 6, 0])]);
    assert!(!mask[g.rank(&[1, 4, 0])] && !mask[g.rank(&[7, 4, 0])]);
    assert!(TraceStrategy::open_bulk(0.0).is_err());
    assert!(TraceStrategy::open_bulk(1.5).is_err());
}

#[test]
fn cyclicity() {
    let g = torus(2, 4, 2);
    let a = random_dense(g, 1);
    let b = random_dense(g, 2);
    let ab = nc_trace(&(&a * &b), SAW);
    let ba = nc_trace(&(&b * &a), SAW);
    assert!((ab - ba).norm() <= 1e-12);
    assert!((nc_trace_product(&a, &b, SAW) - ab).norm() <= 1e-12);
}

#[test]
fn derivative_of_site_diagonal_vanishes() {
    let g = torus(2, 6, 2);
    let block = Mat::from_fn(2, 2, |i, j| c((i + j) as f64, i as f64));
    let a = DenseOperator::site_local(g, block.as_ref()).unwrap();
    for j in 0..2 {
        assert_eq!(nc_derivative(&a, j, SAW).unwrap().max_abs(), 0.0);
    }
}

#[test]
fn derivative_of_unit_hop() {
    let g = torus(1, 8, 1);
    let hop = Mat::from_fn(8, 8, |x, y| c(if (x + 8 - y) % 8 == 1 { 1.0 } else { 0.0 }, 0.0));
    let a = DenseOperator::new(hop, g).unwrap();
    let da = nc_derivative(&a, 0, SAW).unwrap();
    assert!((&da - &a.scaled(c(0.0, 1.0))).max_abs() < 1e-15);
    assert!(matches!(nc_derivative(&a, 1, SAW), Err(Error::InvalidArgument(_))));
}

#[test]
fn leibniz_rule_for_short_range_operators() {
    let g = torus(2, 16, 1);
    let a = random_short_range(g, 1, 3);
    let b = random_short_range(g, 1, 4);
    for j in 0..2 {
        let lhs = nc_derivative(&(&a * &b), j, SAW).unwrap();
        let rhs = &(&nc_derivative(&a, j, SAW).unwrap() * &b) + &(&a * &nc_derivative(&b, j, SAW).unwrap());
        assert!((&lhs - &rhs).max_abs() <= 1e-12);
    }
}

#[test]
fn integration_by_parts() {
    let g = torus(2, 16, 1);
    let id = DenseOperator::identity(g);
    assert_eq!(integration_by_parts_check(&id, &id, 0, SAW).unwrap(), 0.0);
    let a = random_short_range(g, 1, 5);
    let b = random_short_range(g, 1, 6);
    for j in 0..2 {
        assert!(integration_by_parts_check(&a, &b, j, SAW).unwrap() <= 1e-12);
    }
    let even = torus(1, 6, 2);
    let a = random_dense(even, 7);
    let b = random_dense(even, 8);
    assert!(integration_by_parts_check(&a, &b, 0, SAW).unwrap() <= 1e-12);
}

#[test]
fn open_bulk_boundary_term_is_reported() {
    let bulk = TraceStrategy::open_bulk(0.5).unwrap();
    let values: Vec<f64> = [12, 16, 20]
        .iter()
        .map(|&l| {
            let p = ssh_projector(2.0, l, Boundary::Open);
            let x = p.with_matrix(Mat::from_fn(p.dim(), p.dim(), |i, j| {
                if i == j { c((i / 2) as f64 * 0.1, 0.0) } else { c(0.0, 0.0) }
            }));
            let a = &p * &(&x * &p);
            integration_by_parts_check(&a, &p, 0, bulk).unwrap()
        })
        .collect();
    // Tr_W(i[X, AB]) vanishes entry by entry for a site-diagonal window.
    assert!(values.iter().all(|&v| v <= 1e-12), "{values:?}");
}

#[test]
fn derivations_commute_and_preserve_hermiticity() {
    let g = torus(2, 6, 2);
    let a = hermitian_part(&random_dense(g, 9));
    let d01 = nc_derivative(&nc_derivative(&a, 0, SAW).unwrap(), 1, SAW).unwrap();
    let d10 = nc_derivative(&nc_derivative(&a, 1, SAW).unwrap(), 0, SAW).unwrap();
    assert!((&d01 - &d10).max_abs() <= 1e-12);
    for j in 0..2 {
        assert!(nc_derivative(&a, j, SAW).unwrap().hermiticity_deviation() <= 1e-12);
    }
}

#[test]
fn gns_schwarz_bound() {
    let g = torus(2, 4, 2);
    for seed in 0..10 {
        let f = random_dense(g, 100 + seed);
        let h = random_dense(g, 200 + seed);
        let lhs = nc_trace(&(&f * &h), SAW).norm();
        assert!(lhs <= gns_norm(&f, SAW) * gns_norm(&h, SAW) + 1e-12);
    }
}

#[test]
fn localization_profiles() {
    let id = DenseOperator::identity(torus(1, 10, 2));
    assert!(localization_profile(&id).rate.is_infinite());
    let fast = localization_profile(&ssh_projector(0.5, 60, Boundary::Periodic)).rate;
    let slow = localization_profile(&ssh_projector(0.9, 60, Boundary::Periodic)).rate;
    assert!(fast > slow && slow > 0.0, "{fast} {slow}");
    let critical = localization_profile(&ssh_projector(1.0, 201, Boundary::Open)).rate;
    assert!(critical.abs() < 0.05 && critical < slow, "{critical}");
}
