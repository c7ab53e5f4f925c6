//! Digit-growth functions `psi`, their finite-horizon growth constants, and
//! the closed-form dimension predictions they feed.

pub mod expr;
mod growth;

pub use expr::{parse_expr, Expr};
pub use growth::{
    log_regime_dimension, Window,
    equivalence_diagnostic, growth_constants, predict_dimensions, xi, xi_from_logs, DimValue,
    DimensionPrediction, Equivalence, Estimate, GrowthOptions, GrowthReport, LimitShape, Prediction,
    Regime, SetId, XiReport,
};

use std::fmt;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::numeric::{ln_rational, parse_decimal};

/// A finite table `psi(1), ..., psi(L)` of exact, strictly positive values.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    values: Vec<BigRational>,
    source: Option<String>,
}

impl Table {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_positive()) {
            return Err(Error::invalid(format!("table value at n = {} is not positive", i + 1)));
        }
        if values.is_empty() {
            return Err(Error::invalid("table is empty"));
        }
        Ok(Table { values, source: None })
    }

    pub fn from_integers(values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    /// Reads `n,value` rows; `n` must run 1, 2, 3, ... A header row is
    /// allowed.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut values = Vec::new();
        for (row, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
            if rec.len() != 2 {
                return Err(Error::invalid(format!("table row {} must be `n,value`", row + 1)));
            }
            let Ok(n) = rec[0].parse::<usize>() else {
                if row == 0 {
                    continue;
                }
                return Err(Error::invalid(format!("bad index {:?} on table row {}", &rec[0], row + 1)));
            };
            if n != values.len() + 1 {
                return Err(Error::invalid(format!("table rows must be consecutive from n = 1; got n = {n}")));
            }
            let v = parse_decimal(&rec[1])
                .ok_or_else(|| Error::invalid(format!("bad table value {:?}", &rec[1])))?;
            values.push(v);
        }
        let mut t = Table::new(values)?;
        t.source = Some(path.display().to_string());
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    fn get(&self, n: u64) -> Result<&BigRational> {
        if n == 0 || n as usize > self.values.len() {
            return Err(Error::TableIndex { n, len: self.values.len() });
        }
        Ok(&self.values[n as usize - 1])
    }
}

/// A digit-growth function.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiSpec {
    /// `alpha * log n`; zero at `n = 1`.
    AlphaLog(f64),
    /// `n^beta`.
    Power(f64),
    /// `b^n`.
    Expo(f64),
    Table(Table),
    Expr(Expr),
}

impl PsiSpec {
    /// Parses the shorthand `alog:<a>`, `pow:<b>`, `exp:<b>`, `table:<path>`
    /// or `expr:<expression>`. Anything else is read as an expression.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let positive = |s: &str, what: &str| -> Result<f64> {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{what} expects a number, got {s:?}")))?;
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::invalid(format!("{what} parameter must be a positive literal, got {s:?}")))
            }
        };
        if let Some((head, rest)) = text.split_once(':') {
            match head.trim() {
                "alog" => return Ok(PsiSpec::AlphaLog(positive(rest, "alog")?)),
                "pow" => return Ok(PsiSpec::Power(positive(rest, "pow")?)),
                "exp" => return Ok(PsiSpec::Expo(positive(rest, "exp")?)),
                "table" => return Ok(PsiSpec::Table(Table::from_csv_path(Path::new(rest.trim()))?)),
                "expr" => return Ok(PsiSpec::Expr(parse_expr(rest)?)),
                _ => {}
            }
        }
        Ok(PsiSpec::Expr(parse_expr(text)?))
    }

    /// `psi(n)`. Negative or non-finite values are domain errors.
    pub fn eval(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain { n, reason: "psi is defined for n >= 1".into() });
        }
        let nf = n as f64;
        let v = match self {
            PsiSpec::AlphaLog(a) => a * nf.ln(),
            PsiSpec::Power(b) => nf.powf(*b),
            PsiSpec::Expo(b) => b.powf(nf),
            PsiSpec::Table(t) => t.get(n)?.to_f64().unwrap_or(f64::INFINITY),
            PsiSpec::Expr(e) => e.eval(n)?,
        };
        if !v.is_finite() {
            return Err(Error::Domain { n, reason: format!("psi({n}) overflows f64; use the log form") });
        }
        if v < 0.0 {
            return Err(Error::Domain { n, reason: format!("psi({n}) = {v} is negative") });
        }
        Ok(v)
    }

    /// `log psi(n)`, in closed form for the builtin families so it never
    /// overflows. `-inf` where `psi(n) = 0`.
    pub fn ln_eval(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain { n, reason: "psi is defined for n >= 1".into() });
        }
        let nf = n as f64;
        Ok(match self {
            PsiSpec::AlphaLog(a) => (a * nf.ln()).ln(),
            PsiSpec::Power(b) => b * nf.ln(),
            PsiSpec::Expo(b) => nf * b.ln(),
            PsiSpec::Table(t) => ln_rational(t.get(n)?),
            PsiSpec::Expr(e) => {
                let v = e.eval(n)?;
                if v < 0.0 {
                    return Err(Error::Domain { n, reason: format!("psi({n}) = {v} is negative") });
                }
                v.ln()
            }
        })
    }

    /// `log psi(n) / n`; exactly `log b` for `b^n`.
    pub fn log_rate(&self, n: u64) -> Result<f64> {
        match self {
            PsiSpec::Expo(b) => Ok(b.ln()),
            _ => Ok(self.ln_eval(n)? / n as f64),
        }
    }

    /// `psi(n) / log n` for `n >= 2`; exactly `alpha` for `alpha log n`.
    pub fn ratio_to_log(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return Err(Error::Domain { n, reason: "log n vanishes at n = 1".into() });
        }
        match self {
            PsiSpec::AlphaLog(a) => Ok(*a),
            _ => Ok((self.ln_eval(n)? - (n as f64).ln().ln()).exp()),
        }
    }

    /// `psi(n) / n`.
    pub fn ratio_to_n(&self, n: u64) -> Result<f64> {
        Ok((self.ln_eval(n)? - (n as f64).ln()).exp())
    }

    /// Known monotonicity of the builtin families; `None` for tables and
    /// expressions, which can only be checked on a finite window.
    pub fn known_nondecreasing(&self) -> Option<bool> {
        match self {
            PsiSpec::AlphaLog(_) | PsiSpec::Power(_) => Some(true),
            PsiSpec::Expo(b) => Some(*b >= 1.0),
            PsiSpec::Table(_) | PsiSpec::Expr(_) => None,
        }
    }

    /// Largest `n` at which the spec can be evaluated, if bounded.
    pub fn max_n(&self) -> Option<u64> {
        match self {
            PsiSpec::Table(t) => Some(t.len() as u64),
            _ => None,
        }
    }

    /// `log psi(1), ..., log psi(n)`.
    pub fn ln_values(&self, n: u64) -> Result<Vec<f64>> {
        (1..=n).map(|k| self.ln_eval(k)).collect()
    }
}

impl fmt::Display for PsiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiSpec::AlphaLog(a) => write!(f, "alog:{a}"),
            PsiSpec::Power(b) => write!(f, "pow:{b}"),
            PsiSpec::Expo(b) => write!(f, "exp:{b}"),
            PsiSpec::Table(t) => match &t.source {
                Some(p) => write!(f, "table:{p}"),
                None => write!(f, "table:<{} values>", t.len()),
            },
            PsiSpec::Expr(e) => write!(f, "expr:{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn shorthand_parsing() {
        assert_eq!(PsiSpec::parse("alog:2").unwrap(), PsiSpec::AlphaLog(2.0));
        assert_eq!(PsiSpec::parse("exp:3").unwrap(), PsiSpec::Expo(3.0));
        assert_eq!(PsiSpec::parse("pow:1.5").unwrap(), PsiSpec::Power(1.5));
        assert!(matches!(PsiSpec::parse("n^1.5 + log(n)").unwrap(), PsiSpec::Expr(_)));
        assert!(matches!(PsiSpec::parse("expr:2*n").unwrap(), PsiSpec::Expr(_)));
        assert!(PsiSpec::parse("alog:0").is_err());
        assert!(PsiSpec::parse("pow:-1").is_err());
        assert!(PsiSpec::parse("exp:x").is_err());
        assert!(matches!(PsiSpec::parse("m + 1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn builtin_evaluation() {
        assert!((PsiSpec::AlphaLog(2.0).eval(3).unwrap() - 2.0 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(PsiSpec::Expo(3.0).eval(4).unwrap(), 81.0);
        assert_eq!(PsiSpec::Power(0.5).eval(9).unwrap(), 3.0);
        assert_eq!(PsiSpec::AlphaLog(2.0).eval(1).unwrap(), 0.0);
        assert_eq!(PsiSpec::AlphaLog(2.0).ratio_to_log(1000).unwrap(), 2.0);
        assert_eq!(PsiSpec::Expo(3.0).log_rate(17).unwrap(), 3f64.ln());
        assert!(PsiSpec::Expo(3.0).eval(2000).is_err());
        assert!((PsiSpec::Expo(3.0).ln_eval(2000).unwrap() - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert!(PsiSpec::Power(1.0).eval(0).is_err());
    }

    #[test]
    fn table_from_csv() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "n,value").unwrap();
        writeln!(f, "1,0.5").unwrap();
        writeln!(f, "2, 3").unwrap();
        writeln!(f, "3,1e2").unwrap();
        let spec = PsiSpec::parse(&format!("table:{}", f.path().display())).unwrap();
        assert_eq!(spec.eval(1).unwrap(), 0.5);
        assert_eq!(spec.eval(3).unwrap(), 100.0);
        assert!(matches!(spec.eval(4), Err(Error::TableIndex { n: 4, len: 3 })));

        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "1,1").unwrap();
        writeln!(bad, "3,1").unwrap();
        assert!(PsiSpec::parse(&format!("table:{}", bad.path().display())).is_err());
        let mut neg = tempfile::NamedTempFile::new().unwrap();
        writeln!(neg, "1,-1").unwrap();
        assert!(PsiSpec::parse(&format!("table:{}", neg.path().display())).is_err());
    }
}
