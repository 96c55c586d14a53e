//! Command implementations.

use core::f64::consts::LN_2;

use dixlab_core::geometry::{geometric_zeta, spectral_zeta};
use dixlab_core::matrix::triangular_weyl_instance;
use dixlab_core::numeric::special::gamma;
use dixlab_core::spectral::{BoundedSequence, ComplexEstimate, SequenceKind, SpectralSequence, Verdict, WeightFamily};
use dixlab_core::trace::{
    banach_mean_integrand, checkpoint_grid, measurability_verdict, partial_sum_ratios, trace_report, TraceConfig,
    SERIES_TOLERANCE,
};
use dixlab_core::zeta::{abel_scan, equivalence_report, residue_estimate, t_grid, Criteria, EquivalenceConfig};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::build;
use crate::config::{Command, CriterionArg, FractalOp, RunConfig};
use crate::error::CliError;
use crate::parse::{parse_modulation, parse_seq, parse_string, parse_weight, StringSpec};
use crate::report::{num, Outcome, Table};

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Trace => trace(cfg),
        Command::Zeta => zeta(cfg),
        Command::Abel => abel(cfg),
        Command::Equivalence => equivalence(cfg),
        Command::Tensor => tensor(cfg),
        Command::Fractal => fractal(cfg),
        Command::WeylFuzz => weyl_fuzz(cfg),
        Command::ZooCheck => zoo_check(cfg),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Converged => "converged",
        Verdict::DivergedRange => "diverged-range",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn verdict_exit(v: Verdict) -> u8 {
    if v == Verdict::DivergedRange {
        2
    } else {
        0
    }
}

fn sequence(cfg: &RunConfig) -> Result<SpectralSequence, CliError> {
    let spec = parse_seq(&cfg.seq).map_err(CliError::parse("--seq"))?;
    build::sequence(&spec, cfg.terms as usize)
}

fn weight(cfg: &RunConfig) -> Result<WeightFamily, CliError> {
    build::weight(parse_weight(&cfg.weight).map_err(CliError::parse("--weight"))?)
}

/// Largest m ≤ m_max whose checkpoint 2^m − 1 lies inside a finite prefix.
fn clamp_grid(seq: &SpectralSequence, m_min: u32, m_max: u32, warnings: &mut Vec<String>) -> Result<u32, CliError> {
    let Some(len) = seq.available() else { return Ok(m_max) };
    let fit = 63 - len.leading_zeros();
    if fit >= m_max {
        return Ok(m_max);
    }
    if fit < m_min {
        return Err(CliError::Usage(format!(
            "{} has {len} known terms, fewer than the 2^{m_min} the grid needs",
            seq.label()
        )));
    }
    warnings.push(format!("grid capped at 2^{fit}: only {len} terms are known"));
    Ok(fit)
}

fn estimate_rows(table: &mut Table, label: &str, est: &ComplexEstimate) {
    for (re, im) in est.re.checkpoints.iter().zip(&est.im.checkpoints) {
        table.row([label.to_string(), num(re.0), num(re.1), num(im.1)]);
    }
}

fn best(est: &ComplexEstimate) -> Value {
    let b = est.best();
    json!([b.re, b.im])
}

fn trace(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (seq, w) = (sequence(cfg)?, weight(cfg)?);
    let mut warnings = Vec::new();
    let m_max = clamp_grid(&seq, cfg.m_min, cfg.m_max, &mut warnings)?;
    let report = trace_report(&seq, w, &TraceConfig { m_min: cfg.m_min, m_max, tolerance: cfg.tolerance })?;
    let meas = measurability_verdict(&report, cfg.tolerance)?;
    let mut table = Table::new(["series", "n", "re", "im"]);
    estimate_rows(&mut table, "partial-sum", &report.partial_sum_estimate);
    let result = json!({
        "trace": to_value(&report),
        "measurability": to_value(&meas),
        "extrapolated": best(&report.partial_sum_estimate),
    });
    Ok(Outcome::new(cfg, verdict_name(report.measurable), verdict_exit(report.measurable), warnings, result, table))
}

fn modulation(cfg: &RunConfig) -> Result<dixlab_core::spectral::Modulation, CliError> {
    build::modulation(&parse_modulation(&cfg.v).map_err(CliError::parse("--v"))?)
}

fn zeta(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (seq, w) = (sequence(cfg)?, weight(cfg)?);
    let v = modulation(cfg)?;
    let v = (v.period.iter().any(|z| *z != Complex64::new(1.0, 0.0))).then_some(v);
    let grid = t_grid(cfg.m_min, cfg.m_max);
    let report = residue_estimate(&seq, v.as_ref(), w, &grid, SERIES_TOLERANCE)?;
    let pts: Vec<(f64, Complex64)> = report.samples.iter().map(|s| (s.t, s.normalized)).collect();
    let est = ComplexEstimate::from_checkpoints(&pts, |t| 1.0 / t, cfg.tolerance);
    let gamma_alpha = gamma(w.alpha() + 1.0);
    let value = est.best();
    let mut table = Table::new(["t", "re", "im", "tail_bound"]);
    for s in &report.samples {
        table.row([num(s.t), num(s.normalized.re), num(s.normalized.im), num(s.tail_bound)]);
    }
    let verdict = est.verdict();
    let result = json!({
        "samples": to_value(&report.samples),
        "estimate": to_value(&est),
        "extrapolated": [value.re, value.im],
        "gamma_alpha_plus_one": gamma_alpha,
        "over_gamma": [value.re / gamma_alpha, value.im / gamma_alpha],
    });
    Ok(Outcome::new(cfg, verdict_name(verdict), verdict_exit(verdict), vec![], result, table))
}

fn abel(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (seq, w) = (sequence(cfg)?, weight(cfg)?);
    let scan = abel_scan(&seq, w, cfg.m_min, cfg.m_max)?;
    let pts: Vec<(f64, Complex64)> = scan.samples.iter().map(|s| (s.r, s.value)).collect();
    let est = ComplexEstimate::from_checkpoints(&pts, |r| 1.0 - r, cfg.tolerance);
    let mut table = Table::new(["r", "re", "im", "tail_bound", "model_bound"]);
    for s in &scan.samples {
        table.row([num(s.r), num(s.value.re), num(s.value.im), num(s.tail_bound), num(s.model_bound)]);
    }
    let verdict = est.verdict();
    let window = [est.re.window_inf, est.re.window_sup];
    let result = json!({
        "samples": to_value(&scan.samples),
        "estimate": to_value(&est),
        "extrapolated": best(&est),
        "window_width": window[1] - window[0],
    });
    Ok(Outcome::new(cfg, verdict_name(verdict), verdict_exit(verdict), vec![], result, table))
}

fn equivalence(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mu = sequence(cfg)?;
    if mu.kind() != SequenceKind::SingularValue {
        return Err(CliError::Usage(format!("{} is not a singular-value sequence", mu.label())));
    }
    let v = modulation(cfg)?;
    let name = match cfg.criterion {
        CriterionArg::PartialSum => "partial-sum",
        CriterionArg::Abel => "abel",
        CriterionArg::Zeta => "zeta",
        CriterionArg::All => "all",
    };
    let ecfg = EquivalenceConfig {
        m_max: cfg.m_max,
        abel_m_max: cfg.abel_m_max,
        t_m_max: cfg.t_m_max,
        tolerance: cfg.tolerance,
        criteria: Criteria::only(name).expect("criterion names match"),
    };
    let report = equivalence_report(&v, &mu, cfg.k, &ecfg)?;
    let mut table = Table::new(["criterion", "parameter", "re", "im"]);
    let mut diverged = false;
    for c in [&report.partial_sum, &report.abel, &report.zeta].into_iter().flatten() {
        estimate_rows(&mut table, &c.name, &c.estimate);
        diverged |= c.verdict == Verdict::DivergedRange;
    }
    let (verdict, exit) = if report.contradictory {
        ("contradictory", 2)
    } else if diverged {
        ("diverged-range", 2)
    } else if report.consistent {
        ("consistent", 0)
    } else {
        ("inconclusive", 0)
    };
    Ok(Outcome::new(cfg, verdict, exit, vec![], to_value(&report), table))
}

fn tensor(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = parse_seq(&cfg.seq).map_err(CliError::parse("--seq"))?;
    if !matches!(spec, crate::parse::SeqSpec::Tensor(..)) {
        return Err(CliError::Usage("tensor needs --seq tensor:<s1>*<s2>".into()));
    }
    let seq = build::sequence(&spec, cfg.terms as usize)?;
    let w = weight(cfg)?;
    let mut warnings = Vec::new();
    let m_max = clamp_grid(&seq, cfg.m_min, cfg.m_max, &mut warnings)?;
    let grid = checkpoint_grid(cfg.m_min, m_max);
    let est = partial_sum_ratios(&seq, w, &grid, cfg.tolerance)?;
    let mut table = Table::new(["series", "n", "re", "im"]);
    estimate_rows(&mut table, "partial-sum", &est);
    let last = est.re.last().unwrap_or(f64::NAN);
    let verdict = est.verdict();
    let result = json!({
        "sequence": seq.label(),
        "weight": to_value(&w),
        "terms": seq.available(),
        "estimate": to_value(&est),
        "ratio_at_largest_checkpoint": last,
        "extrapolated": best(&est),
    });
    Ok(Outcome::new(cfg, verdict_name(verdict), verdict_exit(verdict), warnings, result, table))
}

fn fractal(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = parse_string(&cfg.string).map_err(CliError::parse("--string"))?;
    let s = Complex64::new(cfg.s, cfg.s_im);
    if let StringSpec::Power { d, inner } = &spec {
        if cfg.op != FractalOp::Prefix {
            return Err(CliError::Usage("power spectra only support --op prefix".into()));
        }
        let seq = build::power_spectrum(*d, inner, cfg.terms as usize)?;
        let values = seq.prefix_real(cfg.terms as usize);
        let mut table = Table::new(["index", "value"]);
        for (i, v) in values.iter().enumerate() {
            table.row([i.to_string(), num(*v)]);
        }
        let result = json!({ "sequence": seq.label(), "values": values });
        return Ok(Outcome::new(cfg, "ok", 0, vec![], result, table));
    }
    let l = build::string(&spec)?;
    let closed = l.closed_form().map(to_value);
    match cfg.op {
        FractalOp::Zeta => {
            let z = geometric_zeta(&l, s, cfg.tolerance)?;
            let mut table = Table::new(["s_re", "s_im", "re", "im", "tail_bound"]);
            table.row([num(cfg.s), num(cfg.s_im), num(z.value.re), num(z.value.im), num(z.tail_bound)]);
            let result = json!({ "string": l.label(), "s": [s.re, s.im], "zeta": to_value(&z), "closed_form": closed });
            Ok(Outcome::new(cfg, "ok", 0, vec![], result, table))
        }
        FractalOp::SpectralZeta => {
            let z = spectral_zeta(&l, s, cfg.tolerance)?;
            let mut table = Table::new(["route", "re", "im", "bound"]);
            table.row(["factorized".to_string(), num(z.factorized.re), num(z.factorized.im), String::new()]);
            table.row(["direct".to_string(), num(z.direct.re), num(z.direct.im), num(z.direct_bound)]);
            let agrees = z.agrees();
            let result = json!({ "string": l.label(), "spectral_zeta": to_value(&z), "agrees": agrees });
            let (verdict, exit) = if agrees { ("agrees", 0) } else { ("disagrees", 2) };
            Ok(Outcome::new(cfg, verdict, exit, vec![], result, table))
        }
        FractalOp::Prefix => {
            let (lengths, next) = l.prefix(cfg.terms as usize);
            let mut table = Table::new(["index", "length"]);
            for (i, v) in lengths.iter().enumerate() {
                table.row([i.to_string(), num(*v)]);
            }
            let result = json!({ "string": l.label(), "lengths": lengths, "next_bound": next });
            Ok(Outcome::new(cfg, "ok", 0, vec![], result, table))
        }
        FractalOp::Info => {
            let mut table = Table::new(["field", "value"]);
            table.row(["abscissa".to_string(), num(l.abscissa())]);
            table.row(["max_length".to_string(), num(l.max_length())]);
            table.row(["total_length".to_string(), l.total_length().map(num).unwrap_or_default()]);
            let result = json!({
                "string": l.label(),
                "abscissa": l.abscissa(),
                "max_length": l.max_length(),
                "total_length": l.total_length(),
                "closed_form": closed,
            });
            Ok(Outcome::new(cfg, "ok", 0, vec![], result, table))
        }
    }
}

#[derive(Serialize)]
struct OrderSummary {
    order: usize,
    instances: u32,
    violations: u32,
    worst_log_gap: f64,
    violating_seeds: Vec<u64>,
}

fn weyl_fuzz(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut summaries = Vec::new();
    let mut table = Table::new(["order", "instances", "violations", "worst_log_gap"]);
    for &order in &cfg.orders {
        let mut s = OrderSummary {
            order,
            instances: cfg.count,
            violations: 0,
            worst_log_gap: f64::NEG_INFINITY,
            violating_seeds: vec![],
        };
        for i in 0..cfg.count {
            let seed = cfg.seed.wrapping_add(i as u64);
            let inst = triangular_weyl_instance(seed, order)?;
            s.worst_log_gap = s.worst_log_gap.max(inst.worst_log_gap());
            if !inst.holds() {
                s.violations += 1;
                s.violating_seeds.push(seed);
            }
        }
        table.row([order.to_string(), s.instances.to_string(), s.violations.to_string(), num(s.worst_log_gap)]);
        summaries.push(s);
    }
    let total: u32 = summaries.iter().map(|s| s.violations).sum();
    let (verdict, exit) = if total == 0 { ("holds", 0) } else { ("violated", 2) };
    Ok(Outcome::new(cfg, verdict, exit, vec![], json!({ "orders": summaries, "violations": total }), table))
}

#[derive(Serialize)]
struct Check {
    check: &'static str,
    subject: String,
    value: f64,
    passes: bool,
}

fn zoo_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let tol = cfg.tolerance;
    let mut checks = Vec::new();
    let u = 20.0 * LN_2;
    for w in WeightFamily::zoo() {
        let r = w.invariant_report(u);
        let local = (r.halving - 0.5).abs().max((r.doubling - 1.0).abs());
        checks.push(Check { check: "local-regularity", subject: w.label(), value: local, passes: r.local_passes(tol) });
        let power = r.power_defects.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        checks.push(Check { check: "power-regularity", subject: w.label(), value: power, passes: r.power_passes(tol) });
    }
    let one = BoundedSequence::constant(1.0);
    for k in 0..3 {
        let w = WeightFamily::gk(k);
        let b = banach_mean_integrand(&one, w, 4096.0)?;
        let err = (b.value - 1.0).abs();
        checks.push(Check { check: "banach-normalization", subject: w.label(), value: err, passes: err <= tol });
    }
    for x in BoundedSequence::zoo() {
        for k in 0..3 {
            let w = WeightFamily::gk(k);
            let a = banach_mean_integrand(&x, w, 16384.0)?;
            let b = banach_mean_integrand(&x.shift(), w, 16384.0)?;
            let diff = (a.value - b.value).abs().max((a.value_power - b.value_power).abs());
            let subject = format!("{} / {}", x.label(), w.label());
            checks.push(Check { check: "shift-invariance", subject, value: diff, passes: diff <= tol });
        }
    }
    let mut table = Table::new(["check", "subject", "value", "passes"]);
    for c in &checks {
        table.row([c.check.to_string(), c.subject.clone(), num(c.value), c.passes.to_string()]);
    }
    let failed = checks.iter().filter(|c| !c.passes).count();
    let (verdict, exit) = if failed == 0 { ("passes", 0) } else { ("fails", 2) };
    Ok(Outcome::new(cfg, verdict, exit, vec![], json!({ "checks": checks, "failed": failed }), table))
}
