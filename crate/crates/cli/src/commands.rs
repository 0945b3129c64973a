use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use kaden_core::euler::{
    condition_report, impulse_y, line_rhs, momentum_form, weak_divergence, StreamBump, TestField, IMPULSE_Y1,
};
use kaden_core::measures::{KadenSheet, SheetMu, TimeZeroSheet, VorticitySheet};
use kaden_core::moments::{moment_table, surface_energy, surface_energy_closed, EnergyMethod};
use kaden_core::quadrature::QuadConfig;
use kaden_core::reproduce::{run_all, run_criterion};
use kaden_core::velocity::{
    kaden_velocity, matching_lhs, pv_lemma_closed_form, pv_lemma_reduction, pv_lemma_value, velocity_timezero,
    KadenStrategy, MatchingScheme,
};
use kaden_core::{Error, RunConfig};
use num_complex::Complex64;
use serde_json::json;

use crate::record::{format_eps, RunRecord};
use crate::{Command, Format, Measure, Method, PvPath, Scheme};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(Error::NonFinite { .. } | Error::NotIntegrable { .. } | Error::UntamedAmplitude(_)) => {
                ExitCode::from(2)
            }
            _ => ExitCode::from(1),
        }
    }
}

type Out = Result<ExitCode, CliError>;

fn emit(mut rec: RunRecord, start: Instant, compact: bool) -> ExitCode {
    rec.wall_time = start.elapsed().as_secs_f64();
    let s = if compact {
        serde_json::to_string(&rec)
    } else {
        serde_json::to_string_pretty(&rec)
    };
    println!("{}", s.expect("run records serialise"));
    rec.exit_code()
}

fn sheet(measure: Measure, mu: SheetMu, t: f64) -> Result<VorticitySheet, CliError> {
    Ok(match measure {
        Measure::Timezero => VorticitySheet::TimeZero(TimeZeroSheet::new(mu)),
        Measure::Kaden => VorticitySheet::Kaden(KadenSheet::new(mu, t)?),
    })
}

fn measure_name(m: Measure) -> &'static str {
    match m {
        Measure::Timezero => "timezero",
        Measure::Kaden => "kaden",
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn run(cmd: Command, cfg: &RunConfig, compact: bool) -> Out {
    let start = Instant::now();
    let q = &cfg.quad;
    match cmd {
        Command::PvLemma { alpha, path } => {
            let (name, r) = match path {
                PvPath::Excision => ("excision", pv_lemma_value(alpha, q)?),
                PvPath::Reduction => ("reduction", pv_lemma_reduction(alpha, q)?),
            };
            let closed = pv_lemma_closed_form(alpha)?;
            let mut rec = RunRecord::new("pv-lemma").param("alpha", alpha).param("path", name);
            rec.value("value", r.value);
            rec.value("closed_form", closed);
            rec.value("difference", r.value - closed);
            rec.error_estimate = r.error_estimate;
            rec.converged = r.converged;
            rec.trace = r.excision_trace.map(|t| json!(t));
            Ok(emit(rec, start, compact))
        }
        Command::Matching {
            gamma,
            eps_schedule,
            scheme,
            format,
            csv,
        } => {
            let mut qc: QuadConfig = q.clone();
            if let Some(s) = eps_schedule {
                qc.excision_schedule = s;
                qc.validate()?;
            }
            let (scheme, name) = match scheme {
                Scheme::Listing => (MatchingScheme::Listing, "listing"),
                Scheme::Adaptive => (MatchingScheme::Adaptive, "adaptive"),
            };
            let m = matching_lhs(gamma, scheme, &qc)?;
            let mut table = String::from("eps,value\n");
            for e in &m.excision_trace {
                let _ = writeln!(table, "{},{:.10}", format_eps(e.eps), e.value);
            }
            if let Some(p) = &csv {
                write_file(p, &table)?;
            }
            let mut rec = RunRecord::new("matching")
                .param("gamma", gamma)
                .param("scheme", name)
                .param("eps_schedule", &qc.excision_schedule);
            rec.value("lhs", m.lhs);
            rec.value("rhs", m.rhs);
            rec.value("residual", m.residual);
            rec.value("evaluations", m.evaluations);
            rec.error_estimate = m.error_estimate;
            rec.converged = m.converged;
            rec.trace = Some(json!(m.excision_trace));
            match format {
                Format::Csv => {
                    print!("{table}");
                    Ok(rec.exit_code())
                }
                Format::Json => Ok(emit(rec, start, compact)),
            }
        }
        Command::SurfaceEnergy {
            measure,
            mu,
            t,
            r,
            method,
        } => {
            let sh = sheet(measure, mu, t)?;
            let (m, name) = match method {
                Method::Series => (EnergyMethod::Series, "series"),
                Method::Direct => (EnergyMethod::Direct, "direct"),
            };
            let e = surface_energy(&sh, r, m, cfg.max_series_order, q)?;
            let mut rec = RunRecord::new("surface-energy")
                .param("measure", measure_name(measure))
                .param("mu", mu.mu())
                .param("alpha", mu.alpha())
                .param("r", r)
                .param("method", name);
            if let Measure::Kaden = measure {
                rec = rec.param("t", t);
            } else {
                rec.value("closed_form", surface_energy_closed(mu, r)?);
            }
            rec.value("value", e.value);
            rec.value("evaluations", e.evaluations);
            rec.error_estimate = e.error_estimate;
            rec.converged = e.converged;
            Ok(emit(rec, start, compact))
        }
        Command::Residual { mu, field } => {
            let text = std::fs::read_to_string(&field)
                .map_err(|e| CliError::Usage(format!("{}: {e}", field.display())))?;
            let bump: StreamBump = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", field.display())))?;
            let f = TestField::new(bump)?;
            let a = mu.alpha();
            let m = momentum_form(mu, &f, q)?;
            let wd = weak_divergence(mu, &bump, q)?;
            let mut rec = RunRecord::new("residual")
                .param("mu", mu.mu())
                .param("alpha", a)
                .param("field", &bump);
            rec.value("momentum_form", m.value);
            rec.value("scale", m.scale);
            rec.value("weak_divergence", wd.value);
            rec.value("weak_divergence_scale", wd.scale);
            let mut converged = m.converged && wd.converged;
            let mut err = m.error_estimate;
            let rhs = if (a - 0.5).abs() <= 1e-12 {
                let y = impulse_y(q)?;
                let phi0 = f.phi([0.0, 0.0]);
                converged &= y.converged;
                err += y.error_estimate * phi0[0].hypot(phi0[1]);
                rec.value("rhs_kind", "point_force");
                rec.value("impulse", y.y);
                Some(y.y[0] * phi0[0] + y.y[1] * phi0[1])
            } else if a > 0.5 {
                let l = line_rhs(mu, &f, q)?;
                converged &= l.converged;
                err += l.error_estimate;
                rec.value("rhs_kind", "line_force");
                Some(l.value)
            } else {
                rec.value("rhs_kind", "none");
                None
            };
            if let Some(rhs) = rhs {
                let diff = m.value - rhs;
                rec.value("rhs", rhs);
                rec.value("difference", diff);
                rec.value("relative_difference", diff.abs() / rhs.abs().max(m.scale));
            }
            rec.error_estimate = err;
            rec.converged = converged;
            if !m.excision_trace.is_empty() {
                let rows: Vec<_> = m
                    .excision_trace
                    .iter()
                    .zip(&m.excision_bounds)
                    .map(|(e, b)| json!({"delta": e.eps, "value": e.value, "bound": b}))
                    .collect();
                rec.trace = Some(json!(rows));
            }
            Ok(emit(rec, start, compact))
        }
        Command::Conditions { mu } => {
            let report = condition_report(mu, q)?;
            let mut rec = RunRecord::new("conditions").param("mu", mu.mu()).param("alpha", mu.alpha());
            if let serde_json::Value::Object(map) = json!(report) {
                for (k, v) in map {
                    rec.values.insert(k, v);
                }
            }
            Ok(emit(rec, start, compact))
        }
        Command::Velocity {
            measure,
            mu,
            t,
            grid,
            format,
            csv,
        } => velocity_grid(measure, mu, t, &grid, format, csv.as_ref(), q, start, compact),
        Command::Moments { measure, mu, t, r, n } => {
            let sh = sheet(measure, mu, t)?;
            let tab = moment_table(&sh, r, n, q)?;
            let mut rec = RunRecord::new("moments")
                .param("measure", measure_name(measure))
                .param("mu", mu.mu())
                .param("r", r)
                .param("n", n);
            if let Measure::Kaden = measure {
                rec = rec.param("t", t);
            }
            let pair = |z: Complex64| [z.re, z.im];
            rec.value("inner_moment", pair(tab.inner[n as usize]));
            if n >= 1 {
                rec.value("outer_moment", pair(tab.outer[n as usize - 1]));
            }
            rec.value("truncation_bound", tab.truncation_bound);
            rec.error_estimate = tab.error_estimate;
            rec.converged = tab.converged;
            rec.trace = Some(json!({
                "inner": tab.inner.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
                "outer": tab.outer.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
            }));
            Ok(emit(rec, start, compact))
        }
        Command::Impulse => {
            let y = impulse_y(q)?;
            let mut rec = RunRecord::new("impulse").param("alpha", 0.5);
            rec.value("y", y.y);
            rec.value("reference_y1", IMPULSE_Y1);
            rec.value("evaluations", y.evaluations);
            rec.error_estimate = y.error_estimate;
            rec.converged = y.converged;
            Ok(emit(rec, start, compact))
        }
        Command::ReproducePaper { criteria } => {
            let reports = match criteria {
                None => run_all(cfg),
                Some(ids) => ids.into_iter().map(|i| run_criterion(i, cfg)).collect(),
            };
            for r in &reports {
                eprintln!("{}", r.summary_line());
            }
            let mut rec = RunRecord::new("reproduce-paper");
            for r in &reports {
                rec.value(&format!("criterion_{}", r.id), if r.passed { "pass" } else { "fail" });
            }
            rec.converged = reports.iter().all(|r| r.passed);
            rec.trace = Some(json!(reports));
            Ok(emit(rec, start, compact))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn velocity_grid(
    measure: Measure,
    mu: SheetMu,
    t: f64,
    grid: &[f64],
    format: Format,
    csv: Option<&PathBuf>,
    q: &QuadConfig,
    start: Instant,
    compact: bool,
) -> Out {
    let [x0, x1, nx, y0, y1, ny] = grid else {
        return Err(CliError::Usage("--grid takes x0,x1,nx,y0,y1,ny".into()));
    };
    let count = |n: f64| -> Result<usize, CliError> {
        if n >= 1.0 && n.fract() == 0.0 && n <= 1e6 {
            Ok(n as usize)
        } else {
            Err(CliError::Usage(format!("grid counts must be positive integers, got {n}")))
        }
    };
    let (nx, ny) = (count(*nx)?, count(*ny)?);
    let lin = |a: f64, b: f64, n: usize, i: usize| if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
    let kaden = match measure {
        Measure::Kaden => Some(KadenSheet::new(mu, t)?),
        Measure::Timezero => None,
    };
    let mut table = String::from("x1,x2,v1,v2,err\n");
    let mut rows = Vec::new();
    let (mut skipped, mut converged, mut worst) = (0usize, true, 0.0f64);
    for j in 0..ny {
        for i in 0..nx {
            let x = [lin(*x0, *x1, nx, i), lin(*y0, *y1, ny, j)];
            let sample = match &kaden {
                None => velocity_timezero(x, mu, q).map(|s| (s.vector, s.error_estimate, s.converged)),
                Some(k) => kaden_velocity(k, Complex64::new(x[0], x[1]), KadenStrategy::PhaseSubstitution, q)
                    .map(|s| ([s.value.re, s.value.im], s.error_estimate, s.converged)),
            };
            let (v, err) = match sample {
                Ok((v, err, conv)) => {
                    converged &= conv;
                    worst = worst.max(err);
                    (v, err)
                }
                Err(Error::OnSupport { .. } | Error::NearSheet { .. }) => {
                    skipped += 1;
                    ([f64::NAN, f64::NAN], f64::NAN)
                }
                Err(e) => return Err(e.into()),
            };
            let _ = writeln!(table, "{:.12e},{:.12e},{:.12e},{:.12e},{:.3e}", x[0], x[1], v[0], v[1], err);
            rows.push([x[0], x[1], v[0], v[1], err]);
        }
    }
    if let Some(p) = csv {
        write_file(p, &table)?;
    }
    let mut rec = RunRecord::new("velocity")
        .param("measure", measure_name(measure))
        .param("mu", mu.mu())
        .param("grid", grid);
    if kaden.is_some() {
        rec = rec.param("t", t);
    }
    rec.value("points", nx * ny);
    rec.value("skipped_on_sheet", skipped);
    rec.error_estimate = worst;
    rec.converged = converged;
    match format {
        Format::Csv => {
            print!("{table}");
            Ok(rec.exit_code())
        }
        Format::Json => {
            rec.trace = Some(json!(rows
                .iter()
                .map(|r| r.map(|v| if v.is_finite() { json!(v) } else { json!(null) }))
                .collect::<Vec<_>>()));
            Ok(emit(rec, start, compact))
        }
    }
}
