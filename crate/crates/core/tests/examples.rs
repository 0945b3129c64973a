use std::f64::consts::PI;

use kaden_core::measures::{KadenSheet, SheetMu, TimeZeroSheet, VorticitySheet};
use kaden_core::moments::{inner_moment, surface_energy, EnergyMethod, DEFAULT_MAX_SERIES_ORDER};
use kaden_core::quadrature::QuadConfig;
use kaden_core::velocity::{matching_lhs, pv_lemma_value, velocity_timezero, MatchingScheme, MATCHING_RHS};
use kaden_core::RunConfig;

#[test]
fn pv_lemma_at_quarter_is_pi() {
    let v = pv_lemma_value(0.25, &QuadConfig::default()).unwrap();
    assert!((v.value - PI).abs() < 1e-9);
    assert!(pv_lemma_value(1.5, &QuadConfig::default()).is_err());
}

#[test]
fn zeroth_inner_moment_is_mass() {
    let sheet = VorticitySheet::TimeZero(TimeZeroSheet::new(SheetMu::new(0.6667).unwrap()));
    let m = inner_moment(&sheet, 1.0, 0, &QuadConfig::default()).unwrap();
    assert!((m.value.re - 1.0).abs() < 1e-12 && m.value.im.abs() < 1e-12);
}

#[test]
fn velocity_halves_by_root_two_along_axis() {
    let p = SheetMu::from_alpha(0.5).unwrap();
    let c = QuadConfig::default();
    let a = velocity_timezero([0.0, 2.0], p, &c).unwrap().vector;
    let b = velocity_timezero([0.0, 1.0], p, &c).unwrap().vector;
    let f = 2f64.powf(-0.5);
    assert!((a[0] - f * b[0]).abs() < 1e-10 && (a[1] - f * b[1]).abs() < 1e-10);
}

#[test]
fn kaden_energy_small_and_methods_agree() {
    let sheet = VorticitySheet::Kaden(KadenSheet::new(SheetMu::new(0.8).unwrap(), 1.0).unwrap());
    let c = QuadConfig::default().with_tolerances(1e-12, 1e-8);
    let s = surface_energy(&sheet, 0.01, EnergyMethod::Series, DEFAULT_MAX_SERIES_ORDER, &c).unwrap();
    let d = surface_energy(&sheet, 0.01, EnergyMethod::Direct, DEFAULT_MAX_SERIES_ORDER, &c).unwrap();
    assert!(s.converged && d.converged);
    assert!((s.value - d.value).abs() <= s.error_estimate + d.error_estimate);
    assert!(s.value < 0.05);
}

#[test]
fn matching_at_gamma_two_is_self_consistent() {
    let a = matching_lhs(2.0, MatchingScheme::Adaptive, &QuadConfig::default()).unwrap();
    let b = matching_lhs(2.0, MatchingScheme::Adaptive, &QuadConfig::default().with_tolerances(1e-9, 1e-8)).unwrap();
    assert!(a.converged && b.converged);
    assert!(a.lhs.is_finite());
    assert!((a.lhs - b.lhs).abs() <= b.error_estimate.max(1e-9));
    assert_eq!(a.rhs, MATCHING_RHS);
    let l = matching_lhs(2.0, MatchingScheme::Listing, &QuadConfig::default()).unwrap();
    assert_eq!(l.excision_trace.len(), 9);
    assert!((l.lhs - a.lhs).abs() < 1e-4, "{} vs {}", l.lhs, a.lhs);
}

#[test]
fn listing_reproduces_table_but_reports_its_error() {
    let m = matching_lhs(1.0, MatchingScheme::Listing, &QuadConfig::default()).unwrap();
    for (e, (eps, want)) in m.excision_trace.iter().zip(kaden_core::reproduce::LISTING_TABLE) {
        assert_eq!(e.eps, eps);
        assert!((e.value - want).abs() < 1e-6);
    }
    assert!((m.lhs + 0.0430158).abs() < 1e-6);
    assert!(m.error_estimate > 1e-4);
    assert!(!m.converged);
}

#[test]
fn run_config_round_trips() {
    let c = RunConfig::default();
    let s = serde_json::to_string(&c).unwrap();
    let back: RunConfig = serde_json::from_str(&s).unwrap();
    assert_eq!(c, back);
}
