//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use dixlab_core::geometry::{
    cantor_string, counting_to_partition_check, geometric_zeta, geometric_zeta_direct, lacunary_string, spectral_zeta,
    tensor_string, LaplacianModel,
};
use dixlab_core::matrix::triangular_weyl_instance;
use dixlab_core::numeric::zeta::riemann_zeta_real;
use dixlab_core::spectral::tensor::tensor_sequences;
use dixlab_core::spectral::{
    pietsch_operator, BoundedSequence, Modulation, SequenceKind, SpectralSequence, WeightFamily,
};
use dixlab_core::trace::{banach_mean_integrand, trace_report, TraceConfig};
use dixlab_core::zeta::{
    abel_scan, default_t_grid, equivalence_report, residue_estimate, tauberian_transfer_check, zeta_value,
    EquivalenceConfig, TauberConfig,
};
use dixlab_core::Result;
use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const STIELTJES_1: f64 = -0.072_815_845_483_676_72;

type Check = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

fn harmonic_dixmier() -> Result<Outcome> {
    let start = Instant::now();
    let r = trace_report(&SpectralSequence::harmonic(), WeightFamily::gk(0), &TraceConfig::default())?;
    let secs = start.elapsed().as_secs_f64();
    let (n, raw) = *r.partial_sum_estimate.re.checkpoints.last().unwrap();
    // H_N/log N with N = 2^24 terms, from the asymptotic expansion of H_N
    let big = n + 1.0;
    let oracle = (big.ln() + EULER_GAMMA + 0.5 / big - 1.0 / (12.0 * big * big)) / big.ln();
    let value = r.value.unwrap_or_else(|| r.partial_sum_estimate.best()).re;
    let pass = (raw - 1.0).abs() <= 0.05 && (value - 1.0).abs() <= 5e-3 && (raw - oracle).abs() < 1e-9 && secs <= 30.0;
    outcome(pass, format!("S(2^24-1) = {raw:.6} (oracle {oracle:.6}), extrapolated {value:.6}, {secs:.1}s"))
}

fn harmonic_zeta_residue() -> Result<Outcome> {
    let h = SpectralSequence::harmonic();
    let t = 1024.0;
    let at = zeta_value(&h, None, WeightFamily::gk(0), t, 1e-10)?.normalized.re;
    // Laurent expansion of ζ at 1
    let oracle = 1.0 + EULER_GAMMA / t - STIELTJES_1 / (t * t);
    let ext = residue_estimate(&h, None, WeightFamily::gk(0), &default_t_grid(), 1e-8)?.estimate.re.best();
    let pass = (at - 1.0).abs() <= 1e-2 && (ext - 1.0).abs() <= 1e-3 && (at - oracle).abs() < 1e-9;
    outcome(pass, format!("t=2^10: {at:.8} (oracle {oracle:.8}), extrapolated {ext:.6}"))
}

fn special_values() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, gamma) in [(0u32, 1.0), (1, 2.0)] {
        let w = WeightFamily::gk(k);
        let one = BoundedSequence::constant(1.0);
        for (name, seq, want) in
            [("diag", SpectralSequence::weight(w), gamma), ("D_g", pietsch_operator(&one, w), gamma / LN_2)]
        {
            let got = residue_estimate(&seq, None, w, &default_t_grid(), 1e-6)?.estimate.re.best();
            pass &= close(got, want, 0.02);
            parts.push(format!("{name} g{k} {got:.4}/{want:.4}"));
        }
    }
    outcome(pass, parts.join(", "))
}

fn limit_lemma_scaling() -> Result<Outcome> {
    let w = WeightFamily::gk(1);
    let seq = SpectralSequence::weight(w);
    let r = trace_report(&seq, w, &TraceConfig::default())?;
    let partial = r.value.unwrap_or_else(|| r.partial_sum_estimate.best()).re;
    let zeta = residue_estimate(&seq, None, w, &default_t_grid(), 1e-6)?.estimate.re.best();
    outcome(close(partial, 1.0, 0.05) && close(zeta, 2.0, 0.05), format!("partial sums {partial:.4}, zeta {zeta:.4}"))
}

fn three_criteria() -> Result<Outcome> {
    let g1 = SpectralSequence::weight(WeightFamily::gk(1));
    let cases = [
        (Modulation::one(), SpectralSequence::harmonic(), 0),
        (Modulation::alternating(), SpectralSequence::harmonic(), 0),
        (Modulation::one(), g1.clone(), 1),
        (Modulation::phase(1, 3)?, g1, 1),
    ];
    let cfg = EquivalenceConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (v, mu, k) in &cases {
        let r = equivalence_report(v, mu, *k, &cfg)?;
        let vals: Vec<Complex64> =
            [&r.partial_sum, &r.abel, &r.zeta].iter().map(|c| c.as_ref().unwrap().scaled).collect();
        let scale = vals.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let spread = vals.iter().flat_map(|a| vals.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max);
        let ok = spread <= 2.0 * cfg.tolerance * scale && !r.contradictory;
        pass &= ok;
        parts.push(format!("{}/{}: spread {spread:.3}", v.label, mu.label()));
    }
    outcome(pass, parts.join(", "))
}

fn witness_lambda(n: u64) -> f64 {
    let x = n as f64;
    (1.0 + (2.0 * PI * (x + 16.0).log2().log2()).cos()) / (x + 1.0)
}

fn non_measurability_witness() -> Result<Outcome> {
    let witness = SpectralSequence::loglog_oscillation(1.0);
    let w = WeightFamily::gk(0);
    let r = trace_report(&witness, w, &TraceConfig::default())?;
    // direct partial sums at every checkpoint
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut worst = 0.0f64;
    let mut next = 0;
    for n in 0..(1u64 << 24) {
        let y = witness_lambda(n) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if n + 1 == 1u64 << (next + 4) {
            let (_, got) = r.partial_sum_estimate.re.checkpoints[next];
            worst = worst.max((got - sum / ((n + 1) as f64).ln()).abs());
            next += 1;
        }
    }
    let dixmier = r.dixmier_interval.re.width();
    let abel = abel_scan(&witness, w, 2, 14)?.estimate.re.width();
    let pass = dixmier >= 0.1 && abel >= 0.05 && worst < 1e-9;
    outcome(pass, format!("Dixmier width {dixmier:.4} (oracle gap {worst:.1e}), Abel window width {abel:.4}"))
}

fn tauberian() -> Result<Outcome> {
    let cfg = TauberConfig { cesaro_m_max: 22, growth_constant: Some(2.0), ..Default::default() };
    let n = 4_194_304.0f64;
    let cesaro_oracle = (n + 1.0) * (n + 2.0) / (2.0 * n * n);
    let mut pass = true;
    let mut parts = Vec::new();
    for c in [Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0)] {
        let x = SpectralSequence::new("c(n+1)", SequenceKind::Diagonal, move |n| c * (n as f64 + 1.0));
        let k = 2.0 * c.norm();
        let r = tauberian_transfer_check(&x, 2.0, c, &TauberConfig { growth_constant: Some(k), ..cfg })?;
        let abel_ok = (r.abel_value.re - c.re).abs() <= 1e-3 && (r.abel_value.im - c.im).abs() <= 1e-3;
        let target = c * 0.5;
        let ces_ok = (r.cesaro_value.re - target.re).abs() <= 1e-3 && (r.cesaro_value.im - target.im).abs() <= 1e-3;
        let oracle_ok = (r.cesaro_value - c * cesaro_oracle).norm() < 1e-9;
        pass &= abel_ok && ces_ok && oracle_ok && r.passes;
        parts.push(format!("c={c}: Abel {:.6}, Cesàro {:.6}", r.abel_value, r.cesaro_value));
    }
    outcome(pass, parts.join(", "))
}

/// Top `n` products 1/((a+1)(b+1)) by enumerating every pair with
/// (a+1)(b+1) ≤ cap and sorting.
fn brute_tensor(n: usize, cap: u64) -> Vec<f64> {
    let mut all = Vec::new();
    for a in 1..=cap {
        for b in 1..=cap / a {
            all.push(1.0 / (a * b) as f64);
        }
    }
    assert!(all.len() >= n);
    all.sort_by(|x, y| y.partial_cmp(x).unwrap());
    all.truncate(n);
    all
}

fn tensor_corollary() -> Result<Outcome> {
    let h = SpectralSequence::harmonic();
    let small = tensor_sequences(&h, &h, 1 << 16)?;
    let brute = brute_tensor(1 << 16, 8192);
    let agree = small.iter().zip(&brute).all(|(a, b)| (a - b).abs() <= 1e-15 * b);
    let n = 1usize << 22;
    let values = tensor_sequences(&h, &h, n)?;
    let mut sorted = values.clone();
    sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let total: f64 = values.iter().rev().sum();
    let ratio = total / WeightFamily::gk(1).primitive(n as f64);
    let pass = (ratio - 1.0).abs() <= 0.1 && agree && sorted == values;
    outcome(pass, format!("ratio at 2^22 = {ratio:.4}, brute-force 2^16 agrees: {agree}"))
}

fn weyl() -> Result<Outcome> {
    let start = Instant::now();
    let mut violations = 0;
    let mut worst_det = 0.0f64;
    for order in [4usize, 8, 16, 32] {
        for seed in 0..200u64 {
            let inst = triangular_weyl_instance(seed, order)?;
            if !inst.holds() {
                violations += 1;
            }
            let mut diag: Vec<f64> = (0..order).map(|i| inst.matrix.get(i, i).norm()).collect();
            diag.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert_eq!(diag, inst.eigen_moduli);
            // |det| = Π σ
            let det: f64 = diag.iter().map(|x| x.ln()).sum();
            let sv: f64 = inst.singular_values.iter().map(|x| x.ln()).sum();
            worst_det = worst_det.max((det - sv).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = violations == 0 && worst_det < 1e-9 && secs <= 20.0;
    outcome(pass, format!("{violations} violations in 800 instances, log|det| gap {worst_det:.1e}, {secs:.1}s"))
}

fn fractal_strings() -> Result<Outcome> {
    let two = Complex64::new(2.0, 0.0);
    let c = cantor_string();
    let l = lacunary_string(3.0)?;
    let cantor = geometric_zeta(&c, two, 1e-12)?.value.re;
    let t = tensor_string(&c, &l);
    let direct = geometric_zeta_direct(&t, two, 1e-40)?;
    // 1/7 · 9/8 from the two geometric series
    let product = (1.0 / 7.0) * (9.0 / 8.0);
    let tensor_err = (direct.value.re + direct.tail_bound - product).abs();
    let spectral = spectral_zeta(&c, two, 1e-6)?;
    let z2 = riemann_zeta_real(2.0);
    let pass = (cantor - 1.0 / 7.0).abs() <= 1e-10
        && tensor_err <= 1e-10
        && spectral.agrees()
        && (z2 - PI * PI / 6.0).abs() <= 1e-12;
    outcome(
        pass,
        format!(
            "Cantor ζ(2) - 1/7 = {:.1e}, tensor error {tensor_err:.1e}, spectral gap {:.1e} (bound {:.1e}), ζ(2) error {:.1e}",
            cantor - 1.0 / 7.0,
            (spectral.factorized - spectral.direct).norm(),
            spectral.direct_bound,
            z2 - PI * PI / 6.0
        ),
    )
}

fn banach_surrogate() -> Result<Outcome> {
    let one = BoundedSequence::constant(1.0);
    let mut norm_err = 0.0f64;
    for k in 0..3 {
        norm_err = norm_err.max((banach_mean_integrand(&one, WeightFamily::gk(k), 4096.0)?.value - 1.0).abs());
    }
    let mut shift = 0.0f64;
    for x in BoundedSequence::zoo() {
        for k in 0..3 {
            let w = WeightFamily::gk(k);
            let a = banach_mean_integrand(&x, w, 16384.0)?;
            let b = banach_mean_integrand(&x.shift(), w, 16384.0)?;
            shift = shift.max((a.value - b.value).abs());
        }
    }
    outcome(
        norm_err <= 0.01 && shift <= 0.01,
        format!("normalization error {norm_err:.2e}, shift difference {shift:.2e}"),
    )
}

fn laplacian_model() -> Result<Outcome> {
    let model = LaplacianModel::counting(2)?;
    let c2 = 1.0 / PI;
    let partition = counting_to_partition_check(&model, 10, 20)?.partition.best();
    let mu = model.inverse_sequence()?;
    let r = trace_report(&mu, WeightFamily::gk(1), &TraceConfig::default())?;
    let dixmier = r.dixmier_interval.re.midpoint();
    let pass = close(partition, c2, 0.05) && close(dixmier, c2, 0.10);
    outcome(pass, format!("partition {:.4}·C_2, Dixmier {:.4}·C_2", partition / c2, dixmier / c2))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 12] = [
        ("harmonic Dixmier value", harmonic_dixmier),
        ("harmonic zeta residue", harmonic_zeta_residue),
        ("special values", special_values),
        ("limit scaling for g_1", limit_lemma_scaling),
        ("three-criteria consistency", three_criteria),
        ("non-measurability witness", non_measurability_witness),
        ("Tauberian transfer", tauberian),
        ("tensor square of the harmonic", tensor_corollary),
        ("Weyl inequality", weyl),
        ("fractal strings", fractal_strings),
        ("Banach-limit surrogate", banach_surrogate),
        ("Laplacian model n=2", laplacian_model),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {detail}", i + 1, if pass { "PASS" } else { "FAIL" });
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
