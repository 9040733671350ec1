//! Regression values for the ED oracle at N = 12, frozen from an
//! independent dense-diagonalization implementation. Any drift in basis
//! conventions, Jordan-Wigner signs, or the spectral Green function shows
//! up here first.

use kitaev_qc::ed::{self, GreenOracle};
use kitaev_qc::model::{Boundary, CouplingSet};
use kitaev_qc::topo;

const N: usize = 12;

fn ground_pair(cs: &CouplingSet) -> (f64, f64) {
    let (ep, _) = ed::ground_in_parity(cs, N, Boundary::Open, 1).unwrap();
    let (em, _) = ed::ground_in_parity(cs, N, Boundary::Open, -1).unwrap();
    (ep, em)
}

#[test]
fn parity_resolved_ground_energies_n12() {
    let table: [(f64, f64, f64, f64, f64, f64); 6] = [
        (1.0, 0.5, 0.0, 0.0, -2.959377927262, -2.953512455873),
        (1.0, 0.5, 0.0, 0.01, -2.959597360080, -2.953831374338),
        (0.0, 0.0, 0.0, 1.0, -6.0, -5.0),
        (1.0, 0.5, 0.5, 0.01, -2.750678917980, -2.750678917980),
        (1.0, 0.5, 8.0, 0.01, -22.085420722417, -18.277145804944),
        (1.0, 0.5, 0.0, 1.0, -6.099451544863, -5.823157484866),
    ];
    for (jx, jy, jz, hz, e_plus, e_minus) in table {
        let cs = CouplingSet::from_spin(jx, jy, jz, hz);
        let (ep, em) = ground_pair(&cs);
        assert!((ep - e_plus).abs() < 1e-9, "({jx},{jy},{jz},{hz}): even {ep} vs {e_plus}");
        assert!((em - e_minus).abs() < 1e-9, "({jx},{jy},{jz},{hz}): odd {em} vs {e_minus}");
    }
}

#[test]
fn even_sector_gap_n12() {
    let oracle = GreenOracle::new(&CouplingSet::from_spin(1.0, 0.5, 0.0, 0.0), N, Boundary::Open).unwrap();
    assert!((oracle.even_gap - 0.292525).abs() < 1e-5, "gap {}", oracle.even_gap);
}

#[test]
fn green_matrix_entries_n12() {
    let cs = CouplingSet::from_spin(1.0, 0.5, 0.0, 0.01);
    let oracle = GreenOracle::new(&cs, N, Boundary::Open).unwrap();
    let g = oracle.green_matrix(0.15).unwrap();
    let expect = [
        (0usize, 0usize, 0.049011130087),
        (0, 1, 1.794227382074),
        (5, 7, -0.008146208653),
        (11, 11, 0.049011130087),
    ];
    for (j, jp, v) in expect {
        let got = g[j * N + jp];
        assert!((got - v).abs() < 1e-9, "g[{j},{jp}] = {got}, want {v}");
    }
}

#[test]
fn zk_series_and_winding_n12() {
    let cs = CouplingSet::from_spin(1.0, 0.5, 0.0, 0.01);
    let oracle = GreenOracle::new(&cs, N, Boundary::Open).unwrap();
    let zk = oracle.exact_zk(0.15).unwrap();
    assert_eq!(zk.momenta.len(), N);
    // momenta run l = -N/2 .. N/2-1
    assert!((zk.momenta[0] + std::f64::consts::PI).abs() < 1e-12);
    assert!(zk.momenta[6].abs() < 1e-12);

    let checks = [
        (0usize, -1.3179030163, 0.0),
        (3, 0.0781544637, 1.8869673267),
        (6, 1.2887674116, 0.0),
        (9, 0.0781544637, -1.8869673267),
    ];
    for (i, re, im) in checks {
        let z = zk.values[i];
        assert!((z.re - re).abs() < 1e-8 && (z.im - im).abs() < 1e-8, "Z[{i}] = {z}");
    }

    let w = oracle.exact_winding(0.15).unwrap();
    assert_eq!(w.winding, -1);
    assert!((w.raw + 1.0).abs() < 1e-9, "raw {}", w.raw);
}

#[test]
fn exact_winding_robust_in_delta_n12() {
    let cs = CouplingSet::from_spin(1.0, 0.5, 0.0, 0.01);
    let oracle = GreenOracle::new(&cs, N, Boundary::Open).unwrap();
    for delta in [0.05, 0.15, 0.5] {
        assert_eq!(oracle.exact_winding(delta).unwrap().winding, -1, "delta {delta}");
    }
}

#[test]
fn obc_and_pbc_windings_agree_in_the_bulk_gap() {
    // away from phase boundaries the invariant is insensitive to boundary
    let cs = CouplingSet::from_fermion(1.0, 0.5, 0.0, 0.01);
    let obc = ed::exact_winding(&cs, N, Boundary::Open, 0.15).unwrap();
    let pbc = ed::exact_winding(&cs, N, Boundary::Periodic, 0.15).unwrap();
    assert_eq!(obc.winding, -1);
    assert_eq!(pbc.winding, -1);
    assert_eq!(topo::tb_winding(&cs, 2000).unwrap(), -1);
}

#[test]
fn circuit_green_matrix_tracks_oracle_n8() {
    // pipeline (Trotter + damped trapezoid) vs the spectral closed form
    let n = 8;
    let cs = CouplingSet::from_spin(1.0, 0.5, 0.0, 0.01);
    let (_, gs) = ed::ground_in_parity(&cs, n, Boundary::Open, 1).unwrap();
    let mats = topo::green_matrices(&gs, &cs, &[0.15], 5.0, 0.01).unwrap();
    let oracle = GreenOracle::new(&cs, n, Boundary::Open).unwrap();
    let exact = oracle.green_matrix(0.15).unwrap();
    // cutoff T = 5/delta and first-order Trotter leave a few-percent residual
    let mut worst = 0.0f64;
    for (a, b) in mats[0].iter().zip(&exact) {
        worst = worst.max((a - b).abs());
    }
    assert!(worst < 0.1, "worst deviation {worst}");
    let zk = topo::zk_series(&mats[0], n);
    let w = topo::winding_from_zk(&zk).unwrap();
    assert_eq!(w.winding, oracle.exact_winding(0.15).unwrap().winding);
}
