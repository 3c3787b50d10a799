use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use sgedr::experiment::{self, ExperimentConfig, PhysicalConstants};
use sgedr::qrms::{lund_wiseman, qrms_disturbance, qrms_error, sweep_angles, LwParams};
use sgedr::sg::{self, Axis, RegionGrid};
use sgedr::spin::{evaluate_edrs, PauliObservable, QubitState};
use sgedr::{EdPoint, FreeFlight, GaussianProbe, SgParams};
use sgedr_gridsim::validation::{run_cases, sanity_cases, CaseReport, GridOptions};
use sgedr_gridsim::dimensionless_test_set;

use crate::table::{Cell, Table};
use crate::{CliError, Command, Format, OutputArgs, Span};

/// Sample count of the region boundary trace.
pub const BOUNDARY_POINTS: usize = 1024;

type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Lw { steps, output } => cmd_lw(steps, &output, stdout),
        Command::Region {
            steps,
            re_lambda,
            im_lambda,
            b0,
            tau,
            b1,
            output,
        } => cmd_region(steps, [re_lambda, im_lambda, b0, tau], b1, &output, stdout),
        Command::Experiment {
            config,
            k_min,
            k_max,
            k_steps,
            out,
        } => cmd_experiment(config.as_deref(), (k_min, k_max, k_steps), out.as_deref(), stdout),
        Command::Validate { grid_n, dt_steps, output } => cmd_validate(grid_n, dt_steps, &output, stdout),
        Command::TauOpt {
            re_lambda,
            im_lambda,
            b1,
            b0,
            steps,
            output,
        } => cmd_tau_opt(Complex64::new(re_lambda, im_lambda), b1, b0, steps, &output, stdout),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn write_stdout(stdout: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    f(stdout).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

/// Writes one table to `--out` or standard output in the chosen format.
fn emit(table: &Table, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    let write = |w: &mut dyn Write| -> std::io::Result<()> {
        match output.format {
            Format::Csv => table.write_csv(w),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &table.to_json())?;
                writeln!(w)
            }
        }
    };
    match &output.out {
        Some(path) => {
            let mut f = create(path)?;
            write(&mut f).and_then(|_| f.flush()).map_err(|e| CliError::io(path, e))
        }
        None => write_stdout(stdout, write),
    }
}

/// `dir/name.csv` → `dir/name_boundary.csv`.
pub fn boundary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_boundary.{}", ext.to_string_lossy()),
        None => format!("{stem}_boundary"),
    };
    out.with_file_name(name)
}

fn cmd_lw(steps: usize, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    let state = QubitState::sigma_y_plus();
    let (x, z) = (PauliObservable::x(), PauliObservable::z());
    let mut table = Table::new(
        "lw v1",
        vec!["theta", "eps", "eta", "eps_sq", "eta_sq", "tight_lhs", "heisenberg_lhs"],
    );
    for theta in sweep_angles(steps) {
        let mp = lund_wiseman(LwParams { theta });
        let (eps, eta) = (qrms_error(&mp, &state, &z), qrms_disturbance(&mp, &state, &x));
        let point = EdPoint::from_rms(eps, eta)?;
        table.push(vec![
            theta.into(),
            eps.into(),
            eta.into(),
            point.eps_sq().into(),
            point.eta_sq().into(),
            point.tight_lhs().into(),
            (eps * eta).into(),
        ]);
    }
    emit(&table, output, stdout)
}

fn axis(span: Span, steps: usize, name: &str) -> Result<Axis> {
    let steps = if span.min == span.max { 1 } else { steps };
    Axis::new(span.min, span.max, steps).map_err(|e| CliError::Usage(format!("{name}: {e}")))
}

fn cmd_region(steps: usize, spans: [Span; 4], b1: f64, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let [re, im, b0, tau] = spans;
    let grid = RegionGrid {
        base: SgParams::new(1.0, 0.0, b1, 1.0, 1.0, 1.0, FreeFlight::Finite(0.0))?,
        lambda_re: axis(re, steps, "--re-lambda")?,
        lambda_im: axis(im, steps, "--im-lambda")?,
        b0: axis(b0, steps, "--b0")?,
        tau: axis(tau, steps, "--tau")?,
    };
    let samples = sg::sweep_region(&grid)?;

    let state = QubitState::sigma_y_plus();
    let (x, z) = (PauliObservable::x(), PauliObservable::z());
    let mut table = Table::new(
        "region v1",
        vec![
            "re_lambda",
            "im_lambda",
            "b0",
            "tau",
            "eps_sq",
            "eta_sq",
            "in_region",
            "tight_ok",
            "heisenberg_violated",
        ],
    );
    let (mut outside, mut violated) = (0usize, 0usize);
    for s in &samples {
        let report = evaluate_edrs(&s.point, &state, &z, &x);
        let in_region = sg::in_region(&s.point);
        let tight_ok = s.point.tight_lhs() <= 4.0 + 1e-9;
        let heis = report.heisenberg.is_violated();
        outside += usize::from(!in_region || !tight_ok);
        violated += usize::from(heis);
        table.push(vec![
            s.lambda.re.into(),
            s.lambda.im.into(),
            s.b0.into(),
            s.tau.into(),
            s.point.eps_sq().into(),
            s.point.eta_sq().into(),
            in_region.into(),
            tight_ok.into(),
            heis.into(),
        ]);
    }

    let mut boundary = Table::new("region-boundary v1", vec!["eps_sq", "bound", "eta_sq_low", "eta_sq_high"]);
    for i in 0..BOUNDARY_POINTS {
        let eps_sq = 4.0 * i as f64 / (BOUNDARY_POINTS - 1) as f64;
        let b = sg::region_bound(eps_sq)?;
        boundary.push(vec![eps_sq.into(), b.into(), (2.0 - 2.0 * b).into(), (2.0 + 2.0 * b).into()]);
    }

    match (output.format, &output.out) {
        (Format::Json, _) => {
            let doc = serde_json::json!({
                "schema": "sgedr region v1",
                "rows": table.to_json()["rows"],
                "boundary": boundary.to_json()["rows"],
            });
            let write = |w: &mut dyn Write| -> std::io::Result<()> {
                serde_json::to_writer_pretty(&mut *w, &doc)?;
                writeln!(w)
            };
            match &output.out {
                Some(path) => {
                    let mut f = create(path)?;
                    write(&mut f).and_then(|_| f.flush()).map_err(|e| CliError::io(path, e))?;
                }
                None => write_stdout(stdout, write)?,
            }
        }
        (Format::Csv, Some(path)) => {
            emit(&table, output, stdout)?;
            let bpath = boundary_path(path);
            let mut f = create(&bpath)?;
            boundary
                .write_csv(&mut f)
                .and_then(|_| f.flush())
                .map_err(|e| CliError::io(&bpath, e))?;
        }
        (Format::Csv, None) => {
            write_stdout(stdout, |w| {
                table.write_csv(w)?;
                boundary.write_csv(w)
            })?;
        }
    }
    eprintln!(
        "{} points, {} outside a bound, {} violate Heisenberg's relation",
        samples.len(),
        outside,
        violated
    );
    if outside > 0 {
        return Err(CliError::Validation(format!("{outside} swept points lie outside the achievable region")));
    }
    Ok(())
}

fn cmd_experiment(
    config: Option<&Path>,
    k: (Option<f64>, Option<f64>, Option<usize>),
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<()> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            text.parse::<ExperimentConfig>()
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(v) = k.0 {
        cfg.k_min = v;
    }
    if let Some(v) = k.1 {
        cfg.k_max = v;
    }
    if let Some(v) = k.2 {
        cfg.k_steps = v;
    }
    let constants = PhysicalConstants::default();
    let report = experiment::run_chain(&cfg, &constants, &cfg.k_values()?)?;

    let checks = if cfg.is_original_apparatus() {
        Some(experiment::appendix_checks(&report))
    } else {
        None
    };
    write_stdout(stdout, |w| {
        write!(w, "{}", experiment::render_table(&report))?;
        writeln!(w)?;
        match &checks {
            Some(checks) => {
                writeln!(w, "Published intermediates (tolerance {:.1}%)", 100.0 * experiment::PRINTED_TOL)?;
                for c in checks {
                    writeln!(
                        w,
                        "  {:<36} computed {:>13.6e}  printed {:>10.3e}  rel {:>9.3e}  {}",
                        c.name,
                        c.computed,
                        c.printed,
                        c.rel_err,
                        if c.pass { "ok" } else { "MISMATCH" }
                    )?;
                }
            }
            None => writeln!(w, "Published intermediates: skipped (apparatus differs from Table 1)")?,
        }
        Ok(())
    })?;

    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    match out {
        Some(path) => {
            let mut f = create(path)?;
            writeln!(f, "{json}").and_then(|_| f.flush()).map_err(|e| CliError::io(path, e))?;
        }
        None => write_stdout(stdout, |w| writeln!(w, "{json}"))?,
    }

    let failed: Vec<String> = checks
        .iter()
        .flatten()
        .filter(|c| !c.pass)
        .map(|c| format!("{} ({:.2}% off)", c.name, 100.0 * c.rel_err))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("cross-checks failed: {}", failed.join("; "))))
    }
}

fn cmd_validate(grid_n: usize, dt_steps: Option<usize>, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    let opts = GridOptions { n: grid_n, steps: dt_steps };
    let mut cases = dimensionless_test_set();
    cases.extend(sanity_cases());
    let results = run_cases(&cases, opts);

    let mut table = Table::new(
        "validate v1",
        vec![
            "re_lambda",
            "im_lambda",
            "b1",
            "b0",
            "tau",
            "n",
            "steps",
            "eps_sq_model",
            "eps_sq_grid",
            "eta_sq_model",
            "eta_sq_grid",
            "eps_rel_err",
            "eta_rel_err",
            "eps_refine_change",
            "eta_refine_change",
            "passed",
        ],
    );
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for (case, result) in cases.iter().zip(&results) {
        let label = format!(
            "λ={}{:+}i μB₁={} B₀={} τ={}",
            case.lambda.re, case.lambda.im, case.b1, case.b0, case.tau
        );
        match result {
            Ok(r) => {
                lines.push(case_line(&label, r));
                if !r.passed() {
                    failures.push(label);
                }
                table.push(vec![
                    case.lambda.re.into(),
                    case.lambda.im.into(),
                    case.b1.into(),
                    case.b0.into(),
                    case.tau.into(),
                    r.n.into(),
                    r.steps.into(),
                    r.eps_sq_model.into(),
                    r.eps_sq_grid.into(),
                    r.eta_sq_model.into(),
                    r.eta_sq_grid.into(),
                    r.eps_rel_err.into(),
                    r.eta_rel_err.into(),
                    r.eps_refine_change.into(),
                    r.eta_refine_change.into(),
                    Cell::Flag(r.passed()),
                ]);
            }
            Err(e) => {
                lines.push(format!("{label:<40} ERROR {e}"));
                failures.push(label);
            }
        }
    }
    match &output.out {
        Some(_) => {
            emit(&table, output, stdout)?;
            write_stdout(stdout, |w| lines.iter().try_for_each(|l| writeln!(w, "{l}")))?;
        }
        None => match output.format {
            Format::Csv => write_stdout(stdout, |w| lines.iter().try_for_each(|l| writeln!(w, "{l}")))?,
            Format::Json => emit(&table, output, stdout)?,
        },
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{} of {} cases outside tolerance: {}",
            failures.len(),
            cases.len(),
            failures.join(", ")
        )))
    }
}

fn case_line(label: &str, r: &CaseReport) -> String {
    format!(
        "{label:<40} ε² {:.6e} vs {:.6e} |Δε²| {:.2e} rel {:.2e}   η² {:.6e} vs {:.6e} |Δη²| {:.2e} rel {:.2e}   refine {:.1e}/{:.1e}  {}",
        r.eps_sq_grid,
        r.eps_sq_model,
        (r.eps_sq_grid - r.eps_sq_model).abs(),
        r.eps_rel_err,
        r.eta_sq_grid,
        r.eta_sq_model,
        (r.eta_sq_grid - r.eta_sq_model).abs(),
        r.eta_rel_err,
        r.eps_refine_change,
        r.eta_refine_change,
        if r.passed() { "ok" } else { "FAIL" }
    )
}

fn cmd_tau_opt(lambda: Complex64, b1: f64, b0: f64, steps: usize, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    let probe = GaussianProbe::new(lambda, 1.0, 1.0)?;
    let base = SgParams::new(1.0, b0, b1, 1.0, 1.0, 1.0, FreeFlight::Finite(0.0))?;
    let condition = sg::tau_condition(&base, &probe);
    let optimum = sg::optimal_tau(&base, &probe);
    let limit = sg::error_sq_limit(&base, &probe)?;

    let taus: Vec<f64> = match optimum {
        FreeFlight::Finite(t0) if t0 > 0.0 => (0..steps).map(|i| 100.0 * t0 * i as f64 / (steps - 1) as f64).collect(),
        FreeFlight::Finite(_) => (0..steps).map(|i| 10.0 * i as f64 / (steps - 1) as f64).collect(),
        FreeFlight::Infinite => (0..steps)
            .map(|i| 1e-2 * 1e6f64.powf(i as f64 / (steps - 1) as f64))
            .collect(),
    };
    let mut table = Table::new("tau-opt v1", vec!["tau", "eps_sq", "eta_sq"]);
    for tau in taus {
        let p = base.with_tau(FreeFlight::Finite(tau))?;
        table.push(vec![
            tau.into(),
            sg::error_sq(&p, &probe)?.into(),
            sg::disturbance_sq(&p, &probe)?.into(),
        ]);
    }
    let optimum_text = match optimum {
        FreeFlight::Finite(t0) => {
            let p = base.with_tau(optimum)?;
            format!("τ₀ = {t0:.10e}, ε²(τ₀) = {:.10e}", sg::error_sq(&p, &probe)?)
        }
        FreeFlight::Infinite => "τ₀ = ∞".to_string(),
    };
    eprintln!("condition {condition}; {optimum_text}; ε²(∞) = {limit:.10e}");
    emit(&table, output, stdout)
}
