use std::collections::BTreeMap;
use std::io::{self, Write};
use std::sync::atomic::{AtomicBool, Ordering};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use symdunkl::bessel::{bessel_k, bessel_k2_closed, bessel_k2_direct, bessel_recursive, Argument};
use symdunkl::harmonics::{
    build_sphere_rule, default_sphere_order, hharmonic_basis, random_sphere_points, repro_kernel_axis,
    repro_kernel_basis,
};
use symdunkl::intertwine::verify_intertwining;
use symdunkl::simplex::default_order;
use symdunkl::summability::bounds::{estimate_sweep, kernel_bound_sweep, knd_positivity_check, szego_check, BoundFit};
use symdunkl::summability::sweep::{fit_records, MIN_CRITICAL_N_MAX};
use symdunkl::summability::{cesaro_kernel_axis, lebesgue_sweep, GrowthFit, SweepRecord, SweepSpec};
use symdunkl::{CesaroOrder, Error, JacobiParams, KappaParams, SimplexRule};

use crate::args::{
    BesselArgs, BesselPath, BoundsArgs, Check, Command, Format, HbasisArgs, KernelArgs, LebesgueArgs, VerifyArgs,
};
use crate::output::{csv_preamble, format_for, open, write_json};

pub enum Outcome {
    Passed,
    Failed(String),
}

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::AxisOutOfRange { .. }
            | Error::SameAxis(_)
            | Error::DimensionMismatch { .. }
            | Error::Domain(_)
            | Error::InvalidParameter(_)
            | Error::Hypothesis(_)
            | Error::Unsupported(_)
            | Error::Parse(_) => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self {
            code: 1,
            message: format!("output: {e}"),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self {
            code: 1,
            message: format!("output: {e}"),
        }
    }
}

type CmdResult = Result<Outcome, CliError>;

pub fn run(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Verify(a) => verify(a),
        Command::Hbasis(a) => hbasis(a),
        Command::Kernel(a) => kernel(a),
        Command::Bessel(a) => bessel(a),
        Command::Lebesgue(a) => lebesgue(a),
        Command::Bounds(a) => bounds(a),
    }
}

fn emit<C: Serialize, R: Serialize>(
    command: &str,
    config: &C,
    out: Option<&std::path::Path>,
    result: &R,
) -> Result<(), CliError> {
    Ok(write_json(out, command, config, result)?)
}

fn verify(a: &VerifyArgs) -> CmdResult {
    check_format(&a.common, "verify")?;
    let p = KappaParams::parse(a.d, &a.kappa)?;
    let report = verify_intertwining(a.max_degree, &p)?;
    emit("verify", a, a.common.out.as_deref(), &report)?;
    Ok(if report.passed {
        Outcome::Passed
    } else {
        Outcome::Failed(format!(
            "{} of {} identities differ",
            report.failed.len(),
            report.checked
        ))
    })
}

fn check_format(c: &crate::args::Common, name: &str) -> Result<(), CliError> {
    if format_for(c.format, c.out.as_deref(), Format::Json) != Format::Json {
        return Err(CliError::usage(format!("{name} writes JSON only")));
    }
    Ok(())
}

fn hbasis(a: &HbasisArgs) -> CmdResult {
    check_format(&a.common, "hbasis")?;
    let p = KappaParams::parse(a.d, &a.kappa)?;
    let order = a.sphere_order.unwrap_or_else(|| default_sphere_order(a.n, &p));
    let rule = build_sphere_rule(a.d, order, Some(p.kappa_f64()))?;
    let basis = hharmonic_basis(a.n, &p, &rule)?;
    let result = json!({
        "dim": basis.dim(),
        "gram_residual": basis.gram_residual,
        "gram_condition": basis.gram_condition,
        "orthonormal": basis.polynomials(),
        "basis": basis,
    });
    emit("hbasis", a, a.common.out.as_deref(), &result)?;
    Ok(if basis.gram_residual <= a.tol {
        Outcome::Passed
    } else {
        Outcome::Failed(format!("Gram residual {:e} exceeds {:e}", basis.gram_residual, a.tol))
    })
}

fn unit(v: &[f64], d: usize) -> Result<Vec<f64>, CliError> {
    if v.len() != d {
        return Err(CliError::usage(format!("point has {} coordinates, d = {d}", v.len())));
    }
    let r = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    if !(r > 0.0) {
        return Err(CliError::usage("point must be non-zero"));
    }
    Ok(v.iter().map(|t| t / r).collect())
}

fn kernel(a: &KernelArgs) -> CmdResult {
    check_format(&a.common, "kernel")?;
    let p = KappaParams::parse(a.d, &a.kappa)?;
    let x = unit(&a.x.0, a.d)?;
    let rule = SimplexRule::build(a.d, p.kappa(), a.simplex_order.unwrap_or_else(|| default_order(a.n)))?;
    let projection = repro_kernel_axis(a.n, a.ell, &x, &p, &rule)?;
    let mut result = BTreeMap::new();
    result.insert("x", json!(x));
    result.insert("projection", json!(projection));
    let mut outcome = Outcome::Passed;
    if a.basis {
        let sphere = build_sphere_rule(a.d, default_sphere_order(a.n, &p), Some(p.kappa_f64()))?;
        let basis = hharmonic_basis(a.n, &p, &sphere)?;
        let mut e = vec![0.0; a.d];
        e[a.ell - 1] = 1.0;
        let b = repro_kernel_basis(&x, &e, &basis);
        let dev = (b - projection).abs();
        result.insert("basis_projection", json!(b));
        result.insert("deviation", json!(dev));
        if !(dev <= a.tol) {
            outcome = Outcome::Failed(format!("routes differ by {dev:e}"));
        }
    }
    if let Some(dl) = a.delta {
        let k = cesaro_kernel_axis(a.n, CesaroOrder::new(dl)?, a.ell, &x, &p, &rule)?;
        result.insert("cesaro", json!(k));
    }
    emit("kernel", a, a.common.out.as_deref(), &result)?;
    Ok(outcome)
}

#[derive(Serialize)]
struct ComplexValue {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

fn bessel(a: &BesselArgs) -> CmdResult {
    check_format(&a.common, "bessel")?;
    let p = KappaParams::parse(a.d, &a.kappa)?;
    let y = &a.y.0;
    if y.len() != a.d {
        return Err(CliError::usage(format!("y has {} coordinates, d = {}", y.len(), a.d)));
    }
    let want = |path: BesselPath| a.path == BesselPath::All || a.path == path;
    let zero = vec![0.0; a.d];
    // (name, K(x, iy), K(x, 0))
    let mut values: Vec<(&str, Complex64, Complex64)> = Vec::new();
    let mut extra = BTreeMap::new();
    if a.d == 2 {
        let x = match &a.x {
            Some(v) if v.0.len() == 2 => v.0.clone(),
            Some(v) => return Err(CliError::usage(format!("x has {} coordinates, d = 2", v.0.len()))),
            None => vec![1.0, 0.0],
        };
        if a.path == BesselPath::Recursive {
            return Err(CliError::usage("the recursion in the dimension needs d >= 3"));
        }
        if want(BesselPath::Direct) {
            let rule = SimplexRule::build(2, p.kappa(), a.simplex_order)?;
            values.push((
                "direct",
                bessel_k2_direct(&p, &x, y, &rule)?,
                bessel_k2_direct(&p, &x, &zero, &rule)?,
            ));
        }
        if want(BesselPath::Closed) {
            let c = bessel_k2_closed(&p, &x, y)?;
            let c0 = bessel_k2_closed(&p, &x, &zero)?;
            values.push(("closed", c.reconciled, c0.reconciled));
            extra.insert("closed_printed_constant", json!(ComplexValue::from(c.printed)));
            extra.insert("printed_over_reconciled", json!(c.constant_ratio));
        }
        extra.insert("x", json!(x));
    } else {
        if let Some(v) = &a.x {
            let mut e1 = vec![0.0; a.d];
            e1[0] = 1.0;
            if v.0 != e1 {
                return Err(CliError::usage(
                    "for d >= 3 the Bessel function is available at x = e_1 only",
                ));
            }
        }
        if a.path == BesselPath::Closed {
            return Err(CliError::usage("the closed form is for d = 2"));
        }
        if want(BesselPath::Direct) {
            let rule = SimplexRule::build(a.d, p.kappa(), a.simplex_order)?;
            let k = bessel_k(y, Argument::Imaginary, &p, &rule)?;
            let k0 = bessel_k(&zero, Argument::Imaginary, &p, &rule)?;
            values.push(("direct", k.direct, k0.direct));
            values.push(("coset_average", k.coset_average, k0.coset_average));
        }
        if want(BesselPath::Recursive) {
            values.push((
                "recursive",
                bessel_recursive(&p, y, a.recursion_order)?,
                bessel_recursive(&p, &zero, a.recursion_order)?,
            ));
        }
        let mut e1 = vec![0.0; a.d];
        e1[0] = 1.0;
        extra.insert("x", json!(e1));
    }
    let mut worst: f64 = 0.0;
    let mut deviations = Vec::new();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let dev = (values[i].1 - values[j].1).norm();
            worst = worst.max(dev);
            deviations.push(json!({"a": values[i].0, "b": values[j].0, "abs": dev}));
        }
    }
    let mut at_zero = BTreeMap::new();
    for (name, _, z) in &values {
        let dev = (z - Complex64::new(1.0, 0.0)).norm();
        worst = worst.max(dev);
        at_zero.insert(*name, dev);
    }
    let result = json!({
        "values": values.iter().map(|(n, v, _)| (n.to_string(), json!(ComplexValue::from(*v)))).collect::<BTreeMap<_, _>>(),
        "deviations": deviations,
        "deviation_from_one_at_zero": at_zero,
        "max_deviation": worst,
        "passed": worst <= a.tol,
        "details": extra,
    });
    emit("bessel", a, a.common.out.as_deref(), &result)?;
    Ok(if worst <= a.tol {
        Outcome::Passed
    } else {
        Outcome::Failed(format!("routes differ by {worst:e}"))
    })
}

static CANCEL: AtomicBool = AtomicBool::new(false);

#[derive(Serialize)]
struct Row<'a> {
    d: usize,
    kappa: &'a str,
    ell: usize,
    delta: f64,
    n: usize,
    #[serde(rename = "I_n")]
    i_n: f64,
    err_est: f64,
}

impl<'a> From<&'a SweepRecord> for Row<'a> {
    fn from(r: &'a SweepRecord) -> Self {
        Row {
            d: r.d,
            kappa: &r.kappa,
            ell: r.ell,
            delta: r.delta,
            n: r.n,
            i_n: r.value,
            err_est: r.err_est,
        }
    }
}

fn fit_line(f: &GrowthFit) -> String {
    format!(
        "delta={} class={} mean={:.6} log_b={:.3e}±{:.1e} pow_p={:.4}±{:.1e} rss_bounded={:.3e} rss_log={:.3e} rss_power={:.3e}",
        f.delta,
        f.class.as_str(),
        f.mean,
        f.log_b,
        f.log_b_se,
        f.pow_p,
        f.pow_p_se,
        f.rss_bounded,
        f.rss_log,
        f.rss_power
    )
}

fn lebesgue(a: &LebesgueArgs) -> CmdResult {
    let p = KappaParams::parse(a.d, &a.kappa)?;
    let out = a.common.out.as_deref();
    let format = format_for(a.common.format, out, Format::Csv);
    let mut spec = SweepSpec::new(p.clone(), a.ell, a.delta.0.clone(), a.n_max);
    spec.quad_order = a.quad_order;
    spec.azimuth_order = a.azimuth_order;
    spec.workers = a.common.workers;
    let _ = ctrlc::set_handler(|| CANCEL.store(true, Ordering::Relaxed));

    let crit = p.critical_delta();
    let z2d = p.z2d_threshold();
    let fits = |records: &[SweepRecord]| -> Result<Vec<GrowthFit>, Error> {
        if a.n_max >= MIN_CRITICAL_N_MAX {
            fit_records(&spec.deltas, records)
        } else {
            Ok(Vec::new())
        }
    };

    let (records, cancelled) = match format {
        Format::Csv => {
            let mut w = open(out)?;
            csv_preamble(&mut *w, "lebesgue", a)?;
            writeln!(w, "# critical_delta: {crit}")?;
            writeln!(
                w,
                "# z2d_threshold: {z2d} (sign-change group Z_2^d with equal parameters, for comparison)"
            )?;
            let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
            wtr.write_record(["d", "kappa", "ell", "delta", "n", "I_n", "err_est"])?;
            wtr.flush()?;
            let mut io_err: Option<io::Error> = None;
            let res = lebesgue_sweep(
                &spec,
                &mut |r| {
                    let step = wtr
                        .serialize(Row::from(r))
                        .map_err(io::Error::other)
                        .and_then(|_| wtr.flush());
                    step.map_err(|e| {
                        io_err = Some(e);
                        Error::Cancelled
                    })
                },
                Some(&CANCEL),
            );
            if let Some(e) = io_err {
                return Err(e.into());
            }
            let mut w = wtr.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
            match res {
                Ok(records) => {
                    for f in fits(&records)? {
                        writeln!(w, "# fit {}", fit_line(&f))?;
                    }
                    w.flush()?;
                    (records, false)
                }
                Err(Error::Cancelled) => {
                    writeln!(w, "# cancelled")?;
                    w.flush()?;
                    (Vec::new(), true)
                }
                Err(e) => return Err(e.into()),
            }
        }
        Format::Json => {
            let mut done = Vec::new();
            let res = lebesgue_sweep(
                &spec,
                &mut |r| {
                    done.push(r.clone());
                    Ok(())
                },
                Some(&CANCEL),
            );
            let (records, cancelled) = match res {
                Ok(r) => (r, false),
                Err(Error::Cancelled) => (done, true),
                Err(e) => return Err(e.into()),
            };
            let fit_list = if cancelled { Vec::new() } else { fits(&records)? };
            let result = json!({
                "critical_delta": crit,
                "z2d_threshold": z2d,
                "complete": !cancelled,
                "records": records.iter().map(Row::from).collect::<Vec<_>>(),
                "fits": fit_list,
            });
            emit("lebesgue", a, out, &result)?;
            (records, cancelled)
        }
    };
    if cancelled {
        return Ok(Outcome::Failed("sweep cancelled; completed rows were written".into()));
    }
    eprintln!("critical_delta = {crit}; z2d_threshold = {z2d} (Z_2^d comparison)");
    if out.is_some() {
        for f in fits(&records)? {
            eprintln!("{}", fit_line(&f));
        }
    }
    Ok(Outcome::Passed)
}

fn bound_result(check: Check, fit: &BoundFit, extra: Value) -> Value {
    let mut v = json!({
        "check": check,
        "fitted_c": fit.fitted_c,
        "half_c": fit.half_c,
        "doubling_factor": fit.doubling_factor,
        "stable": fit.stable,
        "ratio_series": fit.ratio_series,
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn bounds(a: &BoundsArgs) -> CmdResult {
    check_format(&a.common, "bounds")?;
    let out = a.common.out.as_deref();
    let (fit, extra, mut ok) = match a.check {
        Check::Estimate | Check::Kernel => {
            let p = KappaParams::parse(a.d, &a.kappa)?;
            let xs = random_sphere_points(a.d, a.samples, a.seed);
            if a.check == Check::Estimate {
                let base = ((a.d as f64 - 1.0) * p.kappa_f64() - 0.5).max(0.0);
                let alpha = a.alpha.unwrap_or(base);
                let beta = a.beta.unwrap_or(alpha);
                let ns = a.n.clone().map(|l| l.0).unwrap_or_else(|| vec![16, 32, 64, 128]);
                let fit = estimate_sweep(&ns, &p, alpha, beta, a.ell, &xs)?;
                (fit, json!({"alpha": alpha, "beta": beta}), true)
            } else {
                let delta = a.delta.unwrap_or(p.critical_delta() + 0.1);
                let ns = a.n.clone().map(|l| l.0).unwrap_or_else(|| vec![8, 16, 32, 64]);
                let fit = kernel_bound_sweep(&ns, CesaroOrder::new(delta)?, a.ell, &p, &xs)?;
                (fit, json!({"delta": delta}), true)
            }
        }
        Check::Knd => {
            let (al, be) = (a.alpha.unwrap_or(0.0), a.beta.unwrap_or(0.0));
            let delta = a.delta.unwrap_or(al + be + 2.0);
            let r = knd_positivity_check(
                a.n_max.unwrap_or(100),
                JacobiParams::new(al, be)?,
                CesaroOrder::new(delta)?,
                a.grid.unwrap_or(1000),
            )?;
            let ok = r.nonnegative;
            let extra = json!({
                "alpha": r.alpha, "beta": r.beta, "delta": r.delta,
                "min_value": r.min_value, "min_n": r.min_n, "min_t": r.min_t, "max_value": r.max_value,
                "nonnegative": ok,
            });
            (r.fit, extra, ok)
        }
        Check::Szego => {
            let (al, be) = (a.alpha.unwrap_or(0.0), a.beta.unwrap_or(0.0));
            let fit = szego_check(
                JacobiParams::new(al, be)?,
                a.n_max.unwrap_or(400),
                a.grid.unwrap_or(2000),
            )?;
            (fit, json!({"alpha": al, "beta": be}), true)
        }
    };
    ok &= fit.stable;
    emit("bounds", a, out, &bound_result(a.check, &fit, extra))?;
    Ok(if ok {
        Outcome::Passed
    } else {
        Outcome::Failed(format!(
            "fitted constant grew by {:.3} under n-doubling",
            fit.doubling_factor
        ))
    })
}
