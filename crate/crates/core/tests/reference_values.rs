//! Values frozen from an arbitrary-precision oracle (see data/gen_reference.py).

#[path = "data/reference.rs"]
mod reference;

use gwright_core::donsker::donsker_expectation;
use gwright_core::fhdam::FHDensity;
use gwright_core::gwm::GWMeasure;
use gwright_core::specfun::ln_gamma_complex;
use gwright_core::wright::{family_psi_real, validate, WrightParams};
use num_complex::Complex;
use reference::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn ml(rho: f64) -> gwright_core::Family {
    validate(&WrightParams::mittag_leffler(rho), true).unwrap()
}

#[test]
fn log_gamma_complex() {
    let cases = [
        (Complex::new(1.0, 1.0), LOG_GAMMA_1P1I_RE, LOG_GAMMA_1P1I_IM),
        (Complex::new(-2.5, 0.75), LOG_GAMMA_M2P5_0P75I_RE, LOG_GAMMA_M2P5_0P75I_IM),
        (Complex::new(3.25, -17.5), LOG_GAMMA_3P25_M17P5I_RE, LOG_GAMMA_3P25_M17P5I_IM),
        (Complex::new(0.5, 700.0), LOG_GAMMA_0P5_700I_RE, LOG_GAMMA_0P5_700I_IM),
    ];
    for (z, re, im) in cases {
        let v = ln_gamma_complex(z).unwrap();
        assert!(rel(v.re, re) < 1e-13, "re at {z}: {} vs {re}", v.re);
        // Branch of the imaginary part: compare modulo 2 pi.
        let d = (v.im - im) / (2.0 * std::f64::consts::PI);
        assert!((d - d.round()).abs() * 2.0 * std::f64::consts::PI < 1e-11 * im.abs().max(1.0), "im at {z}");
    }
}

#[test]
fn mittag_leffler_half() {
    let f = ml(0.5);
    assert!(rel(family_psi_real(&f, 1.0, 1e-14).unwrap(), E_HALF_AT_1) < 1e-13);
    assert!(rel(family_psi_real(&f, -1.0, 1e-14).unwrap(), E_HALF_AT_M1) < 1e-12);
    assert!(rel(family_psi_real(&f, -0.5, 1e-14).unwrap(), E_HALF_AT_MHALF) < 1e-12);
}

#[test]
fn mittag_leffler_grids() {
    for (rho, want) in [(0.5, &ML05_NEG_GRID), (0.9, &ML09_NEG_GRID)] {
        let f = ml(rho);
        for (s, w) in ML_GRID_S.iter().zip(want.iter()) {
            let v = family_psi_real(&f, -s, 1e-13).unwrap();
            assert!(rel(v, *w) < 1e-10, "rho {rho} s {s}: {v} vs {w}");
        }
    }
}

#[test]
fn duality_values() {
    let g = validate(&WrightParams::white_noise(), false).unwrap();
    for (fam, want) in [(g, &DUALITY_GAUSSIAN), (ml(0.5), &DUALITY_ML05), (ml(0.9), &DUALITY_ML09)] {
        for (z, w) in DUALITY_Z.iter().zip(want.iter()) {
            let v = family_psi_real(&fam, -z, 1e-13).unwrap() / fam.k();
            assert!(rel(v, *w) < 1e-10, "z {z}: {v} vs {w}");
        }
    }
}

#[test]
fn m_wright_densities() {
    let half = FHDensity::new(ml(0.5)).unwrap();
    assert!(rel(half.density(1.0).unwrap(), M_WRIGHT_HALF_AT_1) < 1e-10);
    let m09 = FHDensity::new(ml(0.9)).unwrap();
    for (t, w) in M_WRIGHT_09_TAU.iter().zip(M_WRIGHT_09_VALUES.iter()) {
        let v = m09.density(*t).unwrap();
        assert!(rel(v, *w) < 1e-9, "tau {t}: {v} vs {w}");
    }
}

#[test]
fn mixing_moment_and_donsker_constants() {
    let f = ml(0.5);
    assert!(rel(f.moment(1.0).unwrap(), INV_GAMMA_1P5) < 1e-13);
    assert!(rel(donsker_expectation(&f, 1.0).unwrap(), DONSKER_ML05_EXPECTATION) < 1e-12);
}

#[test]
fn one_dimensional_densities() {
    for (rho, want) in [(0.5, &GWM_DENSITY_ML05), (0.9, &GWM_DENSITY_ML09)] {
        let mu = GWMeasure::new(FHDensity::new(ml(rho)).unwrap(), 1).unwrap();
        for (x, w) in GWM_DENSITY_X.iter().zip(want.iter()) {
            let a = mu.density(&[*x]).unwrap();
            let b = mu.density_foxh(&[*x]).unwrap();
            assert!(rel(a, *w) < 1e-8, "rho {rho} x {x}: mixture {a} vs {w}");
            assert!(rel(b, *w) < 1e-8, "rho {rho} x {x}: contour {b} vs {w}");
        }
    }
}
