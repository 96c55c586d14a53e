//! Turns parsed specs into core objects.

use std::path::Path;

use dixlab_core::geometry::{
    cantor_string, finite_string, interval_string, lacunary_string, string_power_spectrum, tensor_string,
    FractalString, LaplacianModel,
};
use dixlab_core::spectral::tensor::tensor_sequences;
use dixlab_core::spectral::{pietsch_operator, BoundedSequence, Modulation, SpectralSequence, TailModel, WeightFamily};
use num_complex::Complex64;

use crate::error::CliError;
use crate::parse::{BoundedSpec, Exponent, ModulationSpec, SeqSpec, StringSpec, WeightSpec};

pub fn weight(w: WeightSpec) -> Result<WeightFamily, CliError> {
    Ok(match w {
        WeightSpec::Gk(k) => WeightFamily::gk(k),
        WeightSpec::Psi(n) => WeightFamily::psi(n)?,
        WeightSpec::InvLog => WeightFamily::InvLog,
    })
}

pub fn bounded(x: &BoundedSpec) -> Result<BoundedSequence, CliError> {
    Ok(match x {
        BoundedSpec::One => BoundedSequence::constant(1.0),
        BoundedSpec::Alternating => BoundedSequence::alternating(),
        BoundedSpec::Const(c) => BoundedSequence::constant(*c),
        BoundedSpec::Indicator(k) => BoundedSequence::indicator(*k),
        BoundedSpec::Periodic(v) => BoundedSequence::periodic(v.clone())?,
    })
}

pub fn modulation(v: &ModulationSpec) -> Result<Modulation, CliError> {
    Ok(match v {
        ModulationSpec::One => Modulation::one(),
        ModulationSpec::Alternating => Modulation::alternating(),
        ModulationSpec::Phase { num, den } => Modulation::phase(*num, *den)?,
        ModulationSpec::Periodic(v) => {
            let mut m = Modulation::periodic(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())?;
            m.label = format!("periodic:{}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            m
        }
    })
}

pub fn string(s: &StringSpec) -> Result<FractalString, CliError> {
    Ok(match s {
        StringSpec::Cantor => cantor_string(),
        StringSpec::Lacunary(b) => lacunary_string(*b)?,
        StringSpec::Interval(l) => interval_string(*l)?,
        StringSpec::Finite(v) => finite_string("finite", v)?,
        StringSpec::Tensor(a, b) => tensor_string(&string(a)?, &string(b)?),
        StringSpec::Power { .. } => {
            return Err(CliError::Usage("a power spectrum is a sequence, not a string; use it with --seq".into()))
        }
    })
}

fn exponent(d: Exponent, l: &FractalString) -> f64 {
    match d {
        Exponent::Value(d) => d,
        Exponent::Dim => l.abscissa(),
    }
}

/// Power spectrum of the string, with `terms` values.
pub fn power_spectrum(d: Exponent, s: &StringSpec, terms: usize) -> Result<SpectralSequence, CliError> {
    let l = string(s)?;
    Ok(string_power_spectrum(&l, exponent(d, &l), terms)?)
}

/// `terms` caps every sequence that is only known through an enumerated
/// prefix (tensor products, power spectra, files).
pub fn sequence(spec: &SeqSpec, terms: usize) -> Result<SpectralSequence, CliError> {
    Ok(match spec {
        SeqSpec::Harmonic => SpectralSequence::harmonic(),
        SeqSpec::Weight(w) => SpectralSequence::weight(weight(*w)?),
        SeqSpec::Oscillating { amp } => SpectralSequence::loglog_oscillation(*amp),
        SeqSpec::Laplacian(n) => LaplacianModel::counting(*n)?.inverse_sequence()?,
        SeqSpec::File(path) => read_values(path)?,
        SeqSpec::Pietsch { weight: w, x } => pietsch_operator(&bounded(x)?, weight(*w)?),
        SeqSpec::Tensor(a, b) => {
            let (a, b) = (sequence(a, terms)?, sequence(b, terms)?);
            let values = tensor_sequences(&a, &b, terms)?;
            let label = format!("tensor:{}*{}", a.label(), b.label());
            SpectralSequence::from_values(label, values).with_tail(TailModel::Unknown)
        }
        SeqSpec::Power { d, string: s } => power_spectrum(*d, s, terms)?,
    })
}

/// One value per line, index implicit; the rest of the sequence is zero.
pub fn read_values(path: &Path) -> Result<SpectralSequence, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        // a trailing comma or further columns are ignored
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        let v: f64 = field.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| {
            CliError::Input(format!("{}:{}: `{field}` is not a finite number", path.display(), i + 1))
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::Input(format!("{}: no values", path.display())));
    }
    Ok(SpectralSequence::from_values(format!("file:{}", path.display()), values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_seq, parse_string};
    use std::io::Write;

    #[test]
    fn builds_every_sequence_form() {
        for s in [
            "harmonic",
            "gk:k=1",
            "psi:n=2",
            "invlog",
            "oscillating:amp=1",
            "laplacian:n=2",
            "pietsch:gk:k=1@alternating",
            "tensor:harmonic*harmonic",
            "power:d=dim:cantor",
        ] {
            let seq = sequence(&parse_seq(s).unwrap(), 1024).unwrap();
            assert!(seq.real_at(0).is_finite(), "{s}");
        }
        let t = sequence(&parse_seq("tensor:harmonic*harmonic").unwrap(), 10).unwrap();
        assert_eq!(t.real_at(1), 0.5);
        assert_eq!(t.available(), Some(10));
    }

    #[test]
    fn power_of_unit_interval_is_harmonic_over_pi() {
        let seq = sequence(&parse_seq("power:d=0.5:interval").unwrap(), 100).unwrap();
        for n in [0u64, 9, 99] {
            let want = 1.0 / ((n + 1) as f64 * std::f64::consts::PI);
            assert!((seq.real_at(n) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn file_values() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "1.0\n0.5\n\n0.25").unwrap();
        let seq = read_values(f.path()).unwrap();
        assert_eq!((seq.real_at(2), seq.real_at(3)), (0.25, 0.0));
        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "1.0\n\nabc").unwrap();
        let e = read_values(bad.path()).unwrap_err().to_string();
        assert!(e.contains(":3:"), "{e}");
        assert!(read_values(Path::new("/nonexistent/values.csv")).is_err());
    }

    #[test]
    fn power_is_not_a_string() {
        assert!(string(&parse_string("power:d=0.5:cantor").unwrap()).is_err());
        assert_eq!(string(&parse_string("tensor:cantor*lacunary").unwrap()).unwrap().max_length(), 1.0 / 3.0);
    }
}
