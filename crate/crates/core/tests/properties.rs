use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use kaden_core::euler::{
    boundary_terms, condition_report, momentum_form, weak_divergence, Profile, StreamBump, TestField,
    IMPULSE_Y1,
};
use kaden_core::measures::{KadenSheet, SheetMu, TimeZeroSheet, VorticitySheet};
use kaden_core::moments::{
    inner_moment, inner_moment_bound, mass_by_quadrature, outer_moment, outer_moment_bound, surface_energy,
    EnergyMethod, DEFAULT_MAX_SERIES_ORDER,
};
use kaden_core::quadrature::{
    integrate_finite, integrate_power_phase, pv_cauchy, PowerPhase, PvProblem, QuadConfig, Trig, Upper,
};
use kaden_core::velocity::{
    kaden_velocity, pv_lemma_value, trace_closed, trace_limit_check, velocity_timezero, KadenStrategy,
};

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig::with_cases(cases)
}

fn profile() -> impl Strategy<Value = Profile> {
    prop_oneof![
        (3u32..8).prop_map(|order| Profile::Polynomial { order }),
        Just(Profile::SmoothExponential),
    ]
}

fn bump_near_origin() -> impl Strategy<Value = StreamBump> {
    (-0.4..0.4f64, -0.4..0.4f64, 0.7..1.5f64, -2.0..2.0f64, profile())
        .prop_map(|(x, y, r, a, p)| StreamBump::new([x, y], r, a, p).unwrap())
}

fn point_off_sheet() -> impl Strategy<Value = [f64; 2]> {
    (-2.0..1.0f64, 0.02..(2.0 * PI - 0.02)).prop_map(|(l, t)| {
        let r = 10f64.powf(l);
        [r * t.cos(), r * t.sin()]
    })
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn odd_integrand_has_zero_principal_value(pole in 0.3..2.0f64, half in 0.1..1.0f64, c in -3.0..3.0f64, d in -3.0..3.0f64) {
        let f = |t: f64| {
            let h = t - pole;
            c / h + d * h * h * h
        };
        let problem = PvProblem::finite(pole - half, pole + half, pole);
        let r = pv_cauchy(f, &problem, &cfg()).unwrap();
        prop_assert!(r.value.abs() <= cfg().abs_tol, "{}", r.value);
    }

    #[test]
    fn pv_trace_sign_follows_alpha(alpha in 0.05..0.95f64) {
        prop_assume!((alpha - 0.5).abs() > 0.02);
        let r = pv_lemma_value(alpha, &cfg()).unwrap();
        let trace = r.excision_trace.unwrap();
        let tol = cfg().abs_tol;
        for e in trace.iter().skip(trace.len() - 3) {
            if alpha < 0.5 {
                prop_assert!(e.value >= -tol);
            } else {
                prop_assert!(e.value <= tol);
            }
        }
    }

    #[test]
    fn zero_phase_reduces_to_plain_integral(p in 0.5..3.0f64, a in 0.1..1.0f64, b in 1.5..4.0f64, k in 0.0..3.0f64) {
        let g = |t: f64| (k * t).cos() + t * t;
        let phase = PowerPhase::new(0.0, p);
        let pp = integrate_power_phase(g, Trig::Cos, &phase, a, Upper::Finite(b), &cfg()).unwrap();
        let plain = integrate_finite(g, a, b, &cfg()).unwrap();
        prop_assert!((pp.value - plain.value).abs() <= pp.error_estimate + plain.error_estimate + 1e-12);
    }

    #[test]
    fn error_estimate_bounds_refinement(alpha in 0.1..0.9f64, l in -1.0..1.0f64, t in 0.1..6.0f64) {
        let coarse = QuadConfig::default().with_tolerances(1e-8, 1e-7);
        let fine = QuadConfig::default().with_tolerances(1e-9, 1e-8);
        let p = SheetMu::from_alpha(alpha).unwrap();
        let x = [10f64.powf(l) * t.cos(), 10f64.powf(l) * t.sin()];
        let a = velocity_timezero(x, p, &coarse).unwrap();
        let b = velocity_timezero(x, p, &fine).unwrap();
        let diff = (a.vector[0] - b.vector[0]).hypot(a.vector[1] - b.vector[1]);
        prop_assert!(diff <= a.error_estimate.max(1e-15), "{diff} > {}", a.error_estimate);
        let pa = pv_lemma_value(alpha, &coarse).unwrap();
        let pb = pv_lemma_value(alpha, &fine).unwrap();
        prop_assert!((pa.value - pb.value).abs() <= pa.error_estimate.max(1e-15));
    }

    #[test]
    fn density_integrates_to_ball_mass(mu in 0.51..0.99f64, l in -3.0..2.0f64) {
        let r = 10f64.powf(l);
        let sheet = VorticitySheet::TimeZero(TimeZeroSheet::new(SheetMu::new(mu).unwrap()));
        let q = mass_by_quadrature(&sheet, r, &cfg()).unwrap();
        let m = sheet.ball_mass(r).unwrap();
        prop_assert!((q.value - m).abs() <= 1e-9 * m);
    }

    #[test]
    fn spiral_angle_decreases(mu in 0.51..0.99f64, t in 0.1..5.0f64, s in 1e-3..10.0f64, ds in 1e-6..1.0f64) {
        let k = KadenSheet::new(SheetMu::new(mu).unwrap(), t).unwrap();
        prop_assert!(k.angle(s + ds) < k.angle(s));
        let z = k.spiral_point(s).unwrap();
        let sheet = VorticitySheet::Kaden(k);
        let a = 2.0 - 1.0 / mu;
        let mass = sheet.ball_mass(z.norm()).unwrap();
        prop_assert!((mass - s.powf(a)).abs() <= 1e-12 * s.powf(a));
    }

    #[test]
    fn homogeneity_and_parity(x in point_off_sheet(), half in any::<bool>(), double in any::<bool>()) {
        let a = if half { 0.5 } else { 0.75 };
        let t: f64 = if double { 2.0 } else { 1.0 / 3.0 };
        let p = SheetMu::from_alpha(a).unwrap();
        let v = velocity_timezero(x, p, &cfg()).unwrap().vector;
        let vt = velocity_timezero([t * x[0], t * x[1]], p, &cfg()).unwrap().vector;
        let vr = velocity_timezero([x[0], -x[1]], p, &cfg()).unwrap().vector;
        let n = v[0].hypot(v[1]);
        let f = t.powf(a - 1.0);
        prop_assert!((vt[0] - f * v[0]).hypot(vt[1] - f * v[1]) <= 1e-8 * n);
        prop_assert!((vr[0] + v[0]).abs() <= 1e-10 * n);
        prop_assert!((vr[1] - v[1]).abs() <= 1e-10 * n);
    }

    #[test]
    fn surface_energy_power_law(alpha in 0.2..0.9f64) {
        let sheet = VorticitySheet::TimeZero(TimeZeroSheet::new(SheetMu::from_alpha(alpha).unwrap()));
        let e = |r: f64| surface_energy(&sheet, r, EnergyMethod::Series, DEFAULT_MAX_SERIES_ORDER, &cfg()).unwrap().value;
        let slope = (e(10.0) / e(0.1)).ln() / 100f64.ln();
        prop_assert!((slope - (2.0 * alpha - 1.0)).abs() < 0.01, "{slope}");
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn kaden_moments_obey_bounds(mu in 0.55..0.95f64, l in -1.5..0.5f64, n in 0u32..6, k in 1u32..6) {
        let p = SheetMu::new(mu).unwrap();
        let r = 10f64.powf(l);
        let sheet = VorticitySheet::Kaden(KadenSheet::new(p, 1.0).unwrap());
        let m = inner_moment(&sheet, r, n, &cfg()).unwrap();
        let big = outer_moment(&sheet, r, k, &cfg()).unwrap();
        prop_assert!(m.value.norm() <= inner_moment_bound(p, r, n) * (1.0 + 1e-9));
        prop_assert!(big.value.norm() <= outer_moment_bound(p, r, k) * (1.0 + 1e-9));
    }

    #[test]
    fn kaden_self_similarity(mu in 0.55..0.95f64, t in 0.3..3.0f64, x in point_off_sheet()) {
        let p = SheetMu::new(mu).unwrap();
        let at_t = KadenSheet::new(p, t).unwrap();
        let at_1 = KadenSheet::new(p, 1.0).unwrap();
        let z = Complex64::new(x[0], x[1]);
        let zs = z * t.powf(-mu);
        let a = kaden_velocity(&at_t, z, KadenStrategy::PhaseSubstitution, &cfg());
        let b = kaden_velocity(&at_1, zs, KadenStrategy::PhaseSubstitution, &cfg());
        prop_assume!(a.is_ok() && b.is_ok());
        let (a, b) = (a.unwrap().value, b.unwrap().value * t.powf(mu - 1.0));
        prop_assert!((a - b).norm() <= 1e-7 * b.norm(), "{a} vs {b}");
    }

    #[test]
    fn traces_match_closed_form(alpha in 0.3..0.9f64, s in 0.3..3.0f64) {
        let p = SheetMu::from_alpha(alpha).unwrap();
        let rep = trace_limit_check(s, p, &[1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4], &cfg()).unwrap();
        let (up, down) = trace_closed(s, p).unwrap();
        prop_assert!(rep.above.distance < 1e-4);
        prop_assert!(rep.below.distance < 1e-4);
        prop_assert!((rep.above.trace[0] - up[0]).abs() < 1e-8);
        prop_assert!((rep.below.trace[0] - down[0]).abs() < 1e-8);
    }

    #[test]
    fn point_force_identity(b in bump_near_origin()) {
        let f = TestField::new(b).unwrap();
        let p = SheetMu::from_alpha(0.5).unwrap();
        let m = momentum_form(p, &f, &cfg()).unwrap();
        let rhs = IMPULSE_Y1 * f.phi([0.0, 0.0])[0];
        prop_assert!((m.value - rhs).abs() <= 1e-3 * rhs.abs().max(m.scale), "{} vs {rhs}", m.value);
    }

    #[test]
    fn boundary_terms_limit_to_pairing(b in bump_near_origin(), three_quarters in any::<bool>()) {
        let a = if three_quarters { 0.75 } else { 0.5 };
        let p = SheetMu::from_alpha(a).unwrap();
        let f = TestField::new(b).unwrap();
        let m = momentum_form(p, &f, &cfg()).unwrap();
        let radii = [1e-2, 5e-3, 2.5e-3];
        let totals: Vec<f64> = radii.iter().map(|&r| boundary_terms(p, r, &f, &cfg()).unwrap().total).collect();
        // The gap closes like r^(2α); one Richardson step in that variable.
        let q = 2f64.powf(2.0 * a);
        let limit = (q * totals[2] - totals[1]) / (q - 1.0);
        prop_assert!((limit - m.value).abs() <= 1e-3 * m.value.abs().max(m.scale), "{limit} vs {}", m.value);
    }

    #[test]
    fn weak_divergence_vanishes(b in bump_near_origin(), alpha in 0.2..0.9f64) {
        let p = SheetMu::from_alpha(alpha).unwrap();
        let w = weak_divergence(p, &b, &cfg()).unwrap();
        prop_assert!(w.value.abs() <= 1e-5 * w.scale);
    }

    #[test]
    fn report_follows_trichotomy(mu in 0.52..0.98f64) {
        let p = SheetMu::new(mu).unwrap();
        let r = condition_report(p, &cfg()).unwrap();
        let a = p.alpha();
        prop_assert_eq!(r.decay_holds, 2.0 * a - 1.0 > r.thresholds.decay_exponent);
        let v2 = a / 2.0 / (PI * a).tan();
        prop_assert_eq!(r.matching_holds, v2.abs() <= r.thresholds.matching);
        prop_assert!(!r.pressure_continuity_holds);
    }
}

#[test]
fn field_derivatives_are_exact() {
    let f = TestField::new(StreamBump::new([0.3, -0.1], 1.2, 1.7, Profile::Polynomial { order: 5 }).unwrap()).unwrap();
    let mut runner = proptest::test_runner::TestRunner::new(config(200));
    runner
        .run(&((-1.0..1.5f64), (-1.3..1.1f64)), |(x, y)| {
            let g = f.gradient([x, y]);
            let scale = g.iter().flatten().fold(1e-300f64, |m, v| m.max(v.abs()));
            prop_assert!((g[0][0] + g[1][1]).abs() <= 1e-13 * scale);
            Ok(())
        })
        .unwrap();
}
