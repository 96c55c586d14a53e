//! Parsers for the sequence, weight, modulation, bounded-sequence and
//! fractal-string mini-languages.
//!
//! ```text
//! seq      := harmonic | gk:k=<int> | psi:n=<int> | invlog
//!           | oscillating:amp=<real>[,scale=loglog]
//!           | laplacian:n=<int>
//!           | file:<path>
//!           | pietsch:<weight>[@<bounded>]
//!           | tensor:<seq>*<seq>
//!           | power:d=<real|dim>:<string>
//! weight   := gk:k=<int> | psi:n=<int> | invlog
//! bounded  := one | alternating | const:c=<real> | indicator:k=<int> | periodic:<real>,...
//! v        := one | alternating | phase:num=<int>,den=<int> | periodic:<real>,...
//! string   := cantor | lacunary[:b=<real>] | interval[:l=<real>] | finite:<real>,...
//!           | tensor:<string>*<string> | power:d=<real|dim>:<string>
//! ```

use std::fmt;
use std::path::PathBuf;

/// Spec string error with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let col = self.input[..self.position.min(self.input.len())].chars().count();
        write!(f, "{} at position {}\n  {}\n  {}^", self.message, col, self.input, " ".repeat(col))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    Gk(u32),
    Psi(u32),
    InvLog,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundedSpec {
    One,
    Alternating,
    Const(f64),
    Indicator(u64),
    Periodic(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModulationSpec {
    One,
    Alternating,
    Phase { num: i64, den: u32 },
    Periodic(Vec<f64>),
}

/// Exponent of a power spectrum; `Dim` is the abscissa of the string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Value(f64),
    Dim,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StringSpec {
    Cantor,
    Lacunary(f64),
    Interval(f64),
    Finite(Vec<f64>),
    Tensor(Box<StringSpec>, Box<StringSpec>),
    Power { d: Exponent, inner: Box<StringSpec> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeqSpec {
    Harmonic,
    Weight(WeightSpec),
    Oscillating { amp: f64 },
    Laplacian(u32),
    File(PathBuf),
    Pietsch { weight: WeightSpec, x: BoundedSpec },
    Tensor(Box<SeqSpec>, Box<SeqSpec>),
    Power { d: Exponent, string: Box<StringSpec> },
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err<T>(&self, at: usize, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { input: self.src.to_string(), position: at, message: message.into() })
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> PResult<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.err(self.pos, format!("expected `{lit}`"))
        }
    }

    fn ident(&mut self) -> &'a str {
        let r = self.rest();
        let len = r.find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_')).unwrap_or(r.len());
        self.pos += len;
        &r[..len]
    }

    fn token(&mut self) -> (usize, &'a str) {
        let start = self.pos;
        let r = self.rest();
        let len = r.find([',', '*', ':', '@']).unwrap_or(r.len());
        self.pos += len;
        (start, &r[..len])
    }

    fn real(&mut self) -> PResult<f64> {
        let (at, tok) = self.token();
        match tok.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => self.err(at, format!("expected a finite number, found `{tok}`")),
        }
    }

    fn int<T: std::str::FromStr>(&mut self) -> PResult<T> {
        let (at, tok) = self.token();
        tok.parse::<T>().or_else(|_| self.err(at, format!("expected an integer, found `{tok}`")))
    }

    fn reals(&mut self) -> PResult<Vec<f64>> {
        let mut v = vec![self.real()?];
        while self.eat(",") {
            v.push(self.real()?);
        }
        Ok(v)
    }

    fn exponent(&mut self) -> PResult<Exponent> {
        if self.eat("dim") {
            Ok(Exponent::Dim)
        } else {
            Ok(Exponent::Value(self.real()?))
        }
    }

    fn finish<T>(&self, value: T) -> PResult<T> {
        if self.pos == self.src.len() {
            Ok(value)
        } else {
            self.err(self.pos, "unexpected trailing input")
        }
    }

    fn weight(&mut self) -> PResult<WeightSpec> {
        let at = self.pos;
        match self.ident() {
            "gk" => {
                self.expect(":k=")?;
                Ok(WeightSpec::Gk(self.int()?))
            }
            "psi" => {
                self.expect(":n=")?;
                let n_at = self.pos;
                let n: u32 = self.int()?;
                if !(1..=3).contains(&n) {
                    return self.err(n_at, "psi needs n in 1..=3");
                }
                Ok(WeightSpec::Psi(n))
            }
            "invlog" => Ok(WeightSpec::InvLog),
            other => self.err(at, format!("unknown weight `{other}`")),
        }
    }

    fn bounded(&mut self) -> PResult<BoundedSpec> {
        let at = self.pos;
        match self.ident() {
            "one" => Ok(BoundedSpec::One),
            "alternating" => Ok(BoundedSpec::Alternating),
            "const" => {
                self.expect(":c=")?;
                Ok(BoundedSpec::Const(self.real()?))
            }
            "indicator" => {
                self.expect(":k=")?;
                Ok(BoundedSpec::Indicator(self.int()?))
            }
            "periodic" => {
                self.expect(":")?;
                Ok(BoundedSpec::Periodic(self.reals()?))
            }
            other => self.err(at, format!("unknown bounded sequence `{other}`")),
        }
    }

    fn modulation(&mut self) -> PResult<ModulationSpec> {
        let at = self.pos;
        match self.ident() {
            "one" => Ok(ModulationSpec::One),
            "alternating" => Ok(ModulationSpec::Alternating),
            "phase" => {
                self.expect(":num=")?;
                let num = self.int()?;
                self.expect(",den=")?;
                let den_at = self.pos;
                let den: u32 = self.int()?;
                if den == 0 {
                    return self.err(den_at, "den must be positive");
                }
                Ok(ModulationSpec::Phase { num, den })
            }
            "periodic" => {
                self.expect(":")?;
                Ok(ModulationSpec::Periodic(self.reals()?))
            }
            other => self.err(at, format!("unknown modulation `{other}`")),
        }
    }

    fn string(&mut self) -> PResult<StringSpec> {
        let at = self.pos;
        match self.ident() {
            "cantor" => Ok(StringSpec::Cantor),
            "lacunary" => {
                let b = if self.eat(":b=") { self.positive()? } else { 3.0 };
                Ok(StringSpec::Lacunary(b))
            }
            "interval" => {
                let l = if self.eat(":l=") { self.positive()? } else { 1.0 };
                Ok(StringSpec::Interval(l))
            }
            "finite" => {
                self.expect(":")?;
                Ok(StringSpec::Finite(self.reals()?))
            }
            "tensor" => {
                self.expect(":")?;
                let a = self.string()?;
                self.expect("*")?;
                let b = self.string()?;
                Ok(StringSpec::Tensor(Box::new(a), Box::new(b)))
            }
            "power" => {
                self.expect(":d=")?;
                let d = self.exponent()?;
                self.expect(":")?;
                Ok(StringSpec::Power { d, inner: Box::new(self.string()?) })
            }
            other => self.err(at, format!("unknown string `{other}`")),
        }
    }

    fn positive(&mut self) -> PResult<f64> {
        let at = self.pos;
        let x = self.real()?;
        if x > 0.0 {
            Ok(x)
        } else {
            self.err(at, "expected a positive number")
        }
    }

    fn seq(&mut self) -> PResult<SeqSpec> {
        let at = self.pos;
        match self.ident() {
            "harmonic" => Ok(SeqSpec::Harmonic),
            "gk" | "psi" | "invlog" => {
                self.pos = at;
                Ok(SeqSpec::Weight(self.weight()?))
            }
            "oscillating" => {
                self.expect(":")?;
                let mut amp = None;
                loop {
                    let key_at = self.pos;
                    match self.ident() {
                        "amp" => {
                            self.expect("=")?;
                            amp = Some(self.real()?);
                        }
                        "scale" => {
                            self.expect("=")?;
                            let s_at = self.pos;
                            if self.ident() != "loglog" {
                                return self.err(s_at, "only scale=loglog is supported");
                            }
                        }
                        other => return self.err(key_at, format!("unknown key `{other}`")),
                    }
                    if !self.eat(",") {
                        break;
                    }
                }
                match amp {
                    Some(amp) => Ok(SeqSpec::Oscillating { amp }),
                    None => self.err(self.pos, "oscillating needs amp=<real>"),
                }
            }
            "laplacian" => {
                self.expect(":n=")?;
                Ok(SeqSpec::Laplacian(self.int()?))
            }
            "file" => {
                self.expect(":")?;
                let r = self.rest();
                let len = r.find('*').unwrap_or(r.len());
                if len == 0 {
                    return self.err(self.pos, "expected a file path");
                }
                self.pos += len;
                Ok(SeqSpec::File(PathBuf::from(&r[..len])))
            }
            "pietsch" => {
                self.expect(":")?;
                let weight = self.weight()?;
                let x = if self.eat("@") { self.bounded()? } else { BoundedSpec::One };
                Ok(SeqSpec::Pietsch { weight, x })
            }
            "tensor" => {
                self.expect(":")?;
                let a = self.seq()?;
                self.expect("*")?;
                let b = self.seq()?;
                Ok(SeqSpec::Tensor(Box::new(a), Box::new(b)))
            }
            "power" => {
                self.expect(":d=")?;
                let d = self.exponent()?;
                self.expect(":")?;
                Ok(SeqSpec::Power { d, string: Box::new(self.string()?) })
            }
            other => self.err(at, format!("unknown sequence `{other}`")),
        }
    }
}

pub fn parse_seq(s: &str) -> Result<SeqSpec, ParseError> {
    let mut c = Cursor::new(s);
    let v = c.seq()?;
    c.finish(v)
}

pub fn parse_weight(s: &str) -> Result<WeightSpec, ParseError> {
    let mut c = Cursor::new(s);
    let v = c.weight()?;
    c.finish(v)
}

pub fn parse_bounded(s: &str) -> Result<BoundedSpec, ParseError> {
    let mut c = Cursor::new(s);
    let v = c.bounded()?;
    c.finish(v)
}

pub fn parse_modulation(s: &str) -> Result<ModulationSpec, ParseError> {
    let mut c = Cursor::new(s);
    let v = c.modulation()?;
    c.finish(v)
}

pub fn parse_string(s: &str) -> Result<StringSpec, ParseError> {
    let mut c = Cursor::new(s);
    let v = c.string()?;
    c.finish(v)
}
