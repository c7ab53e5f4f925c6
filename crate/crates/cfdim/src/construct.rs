//! Explicit points of the constructed Cantor-type subsets: words of a
//! prescribed length whose digits satisfy the defining inequalities.
//!
//! Digits grow like `exp(psi(n))`, so everything is carried as logarithms
//! until a word is materialized, and materialization draws on a bit budget.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::cf::Word;
use crate::error::{Error, Result};
use crate::numeric::{exp_bits, floor_exp, floor_pow, fmt_real, ln_biguint};
use crate::psi::{equivalence_diagnostic, Equivalence, LimitShape, PsiSpec, Window};

const LN_2: f64 = std::f64::consts::LN_2;

/// A digit that is either held exactly or, past the bit budget, only as
/// `log2` of its value.
#[derive(Debug, Clone, PartialEq)]
pub enum HugeInt {
    Exact(BigUint),
    Approx { log2: f64 },
}

impl HugeInt {
    pub fn from_u64(v: u64) -> Self {
        HugeInt::Exact(BigUint::from(v))
    }

    pub fn log2(&self) -> f64 {
        match self {
            HugeInt::Exact(v) => ln_biguint(v) / LN_2,
            HugeInt::Approx { log2 } => *log2,
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            HugeInt::Exact(v) => ln_biguint(v),
            HugeInt::Approx { log2 } => log2 * LN_2,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, HugeInt::Exact(_))
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            HugeInt::Exact(v) => Some(v),
            HugeInt::Approx { .. } => None,
        }
    }

    /// Exact comparison when both sides are exact, by logarithms otherwise.
    pub fn compare(&self, other: &HugeInt) -> Ordering {
        match (self, other) {
            (HugeInt::Exact(a), HugeInt::Exact(b)) => a.cmp(b),
            _ => self.log2().total_cmp(&other.log2()),
        }
    }
}

/// Exact digits print in decimal; approximate ones as `~m*2^e`.
impl fmt::Display for HugeInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HugeInt::Exact(v) => write!(f, "{v}"),
            HugeInt::Approx { log2 } if log2.is_finite() => {
                let e = log2.floor();
                write!(f, "~{:.15}*2^{}", (log2 - e).exp2(), e as i64)
            }
            HugeInt::Approx { log2 } => write!(f, "~2^{}", fmt_real(*log2)),
        }
    }
}

impl Serialize for HugeInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Overflow {
    /// stop with a budget error
    #[default]
    Error,
    /// keep going with `log2`-only digits
    Approximate,
}

/// Cap on the total number of bits held exactly by one construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BitBudget {
    pub bits: u64,
    pub overflow: Overflow,
}

impl Default for BitBudget {
    fn default() -> Self {
        BitBudget { bits: 1_000_000, overflow: Overflow::Error }
    }
}

impl BitBudget {
    pub fn new(bits: u64) -> Self {
        BitBudget { bits, ..Default::default() }
    }

    pub fn approximate(self) -> Self {
        BitBudget { overflow: Overflow::Approximate, ..self }
    }
}

struct Meter {
    budget: BitBudget,
    used: u64,
}

impl Meter {
    fn new(budget: BitBudget) -> Self {
        Meter { budget, used: 0 }
    }

    /// Admits a digit of about `bits` bits, built by `make` when it fits.
    fn admit(&mut self, bits: u64, log2: f64, what: impl Fn() -> String, make: impl FnOnce() -> BigUint) -> Result<HugeInt> {
        if log2.is_finite() && self.used.saturating_add(bits) <= self.budget.bits {
            let v = make();
            self.used += v.bits();
            return Ok(HugeInt::Exact(v));
        }
        match self.budget.overflow {
            Overflow::Approximate => Ok(HugeInt::Approx { log2 }),
            Overflow::Error => Err(Error::budget(format!(
                "{} needs about {} bits; {} of {} already used",
                what(),
                fmt_real(log2.ceil()),
                self.used,
                self.budget.bits
            ))),
        }
    }

    fn floor_exp(&mut self, x: f64, what: impl Fn() -> String) -> Result<HugeInt> {
        if !(x >= 0.0) {
            return Err(Error::invalid(format!("{} = exp({}) is below 1", what(), fmt_real(x))));
        }
        let log2 = x * std::f64::consts::LOG2_E;
        let bits = if x.is_finite() { exp_bits(x) } else { u64::MAX };
        self.admit(bits, log2, what, || floor_exp(x))
    }
}

/// A word whose digits may be only approximately known.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HugeWord {
    digits: Vec<HugeInt>,
}

/// One entry of the run-length form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Run {
    pub digit: HugeInt,
    pub approx: bool,
    pub count: usize,
}

impl HugeWord {
    pub fn new(digits: Vec<HugeInt>) -> Result<Self> {
        if digits.iter().any(|d| matches!(d, HugeInt::Exact(v) if v.is_zero())) {
            return Err(Error::InvalidDigit("0".into()));
        }
        Ok(HugeWord { digits })
    }

    pub fn digits(&self) -> &[HugeInt] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.digits.iter().all(HugeInt::is_exact)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.digits.windows(2).all(|p| p[0].compare(&p[1]) != Ordering::Greater)
    }

    pub fn ln_digits(&self) -> Vec<f64> {
        self.digits.iter().map(HugeInt::ln).collect()
    }

    /// The exact word, when no digit went past the budget.
    pub fn to_word(&self) -> Option<Word> {
        let digits = self.digits.iter().map(|d| d.exact().cloned()).collect::<Option<Vec<_>>>()?;
        Word::new(digits).ok()
    }

    /// Consecutive equal digits collapsed into runs.
    pub fn compact(&self) -> Vec<Run> {
        let mut out: Vec<Run> = Vec::new();
        for d in &self.digits {
            match out.last_mut() {
                Some(run) if run.digit == *d => run.count += 1,
                _ => out.push(Run { digit: d.clone(), approx: !d.is_exact(), count: 1 }),
            }
        }
        out
    }
}

impl From<&Word> for HugeWord {
    fn from(w: &Word) -> Self {
        HugeWord { digits: w.digits().iter().cloned().map(HugeInt::Exact).collect() }
    }
}

impl fmt::Display for HugeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("]")
    }
}

/// How the terms `t_n` were produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TRule {
    /// `2 floor(n^(alpha-1))`
    Power { alpha: f64 },
    /// `2 floor(d_{n+1})`
    FromD { psi: String, a: f64, epsilon: f64 },
    /// `floor(exp(psi(n) + 1))`
    FromPsi { psi: String },
    Explicit,
}

/// A materialized prefix `t_1, ..., t_N` with every `t_n >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TSequence {
    pub rule: TRule,
    terms: Vec<HugeInt>,
}

impl TSequence {
    pub fn power(alpha: f64, len: usize, budget: BitBudget) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 1.0) {
            return Err(Error::invalid(format!("power rule needs alpha >= 1, got {alpha}")));
        }
        let beta = alpha - 1.0;
        let mut meter = Meter::new(budget);
        let mut terms = Vec::with_capacity(len);
        for n in 1..=len as u64 {
            let log2 = 1.0 + beta * (n as f64).log2();
            let what = || format!("t_{n}");
            let t = if log2 < 62.0 {
                HugeInt::from_u64(2 * floor_pow(n, beta))
            } else if beta.fract() == 0.0 && beta < u32::MAX as f64 {
                meter.admit(log2.ceil() as u64, log2, what, || BigUint::from(n).pow(beta as u32) * 2u32)?
            } else {
                match meter.floor_exp(beta * (n as f64).ln(), what)? {
                    HugeInt::Exact(v) => HugeInt::Exact(v * 2u32),
                    HugeInt::Approx { log2 } => HugeInt::Approx { log2: log2 + 1.0 },
                }
            };
            terms.push(t);
        }
        Ok(TSequence { rule: TRule::Power { alpha }, terms })
    }

    pub fn from_psi(spec: &PsiSpec, len: usize, budget: BitBudget) -> Result<Self> {
        let mut meter = Meter::new(budget);
        let mut terms = Vec::with_capacity(len);
        for n in 1..=len as u64 {
            terms.push(meter.floor_exp(spec.eval(n)? + 1.0, || format!("t_{n}"))?);
        }
        let seq = TSequence { rule: TRule::FromPsi { psi: spec.to_string() }, terms };
        if spec.known_nondecreasing() == Some(true) {
            assert!(seq.is_nondecreasing(), "t_n from a non-decreasing psi must be non-decreasing");
        }
        Ok(seq)
    }

    /// `t_n = 2 floor(d_{n+1})` from the d-sequence of `spec`.
    pub fn from_d(spec: &PsiSpec, a: f64, epsilon: f64, len: usize, budget: BitBudget) -> Result<Self> {
        let d = d_sequence(spec, a, epsilon, len as u64 + 1, 1e-3)?;
        let mut meter = Meter::new(budget);
        let mut terms = Vec::with_capacity(len);
        for n in 1..=len {
            let t = match meter.floor_exp(d.ln_d[n], || format!("t_{n}"))? {
                HugeInt::Exact(v) => HugeInt::Exact(v * 2u32),
                HugeInt::Approx { log2 } => HugeInt::Approx { log2: log2 + 1.0 },
            };
            terms.push(t);
        }
        let seq = TSequence { rule: TRule::FromD { psi: spec.to_string(), a, epsilon }, terms };
        assert!(seq.is_nondecreasing(), "t_n from the d-sequence must be non-decreasing");
        Ok(seq)
    }

    pub fn explicit(values: Vec<BigUint>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| *v < BigUint::from(2u32)) {
            return Err(Error::invalid(format!("t_{} = {} violates t_n >= 2", i + 1, values[i])));
        }
        Ok(TSequence { rule: TRule::Explicit, terms: values.into_iter().map(HugeInt::Exact).collect() })
    }

    pub fn terms(&self) -> &[HugeInt] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn ln_terms(&self) -> Vec<f64> {
        self.terms.iter().map(HugeInt::ln).collect()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.terms.windows(2).all(|p| p[0].compare(&p[1]) != Ordering::Greater)
    }
}

/// Where a value of `theta` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// builtin non-decreasing family: the tail minimum is `psi(n)`
    Exact,
    /// non-decreasing on the inspected window only
    WindowMonotone,
    /// minimum over a finite window: an upper bound on the true value
    HorizonTruncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theta {
    #[serde(serialize_with = "ser_real")]
    pub value: f64,
    pub certificate: Certificate,
}

fn ser_real<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_real(*x))
}

fn ser_reals<S: Serializer>(xs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| fmt_real(*x)))
}

/// `psi(k)`, with values too large for `f64` as `+inf`.
fn psi_or_inf(spec: &PsiSpec, k: u64) -> Result<f64> {
    match spec.eval(k) {
        Ok(v) => Ok(v),
        Err(Error::Domain { .. }) if spec.ln_eval(k).is_ok_and(|l| l > 700.0) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// `min_{n <= k <= horizon} psi(k)`.
pub fn theta(spec: &PsiSpec, n: u64, horizon: u64) -> Result<Theta> {
    if n == 0 || horizon < n {
        return Err(Error::invalid(format!("theta needs 1 <= n <= N, got n = {n}, N = {horizon}")));
    }
    if spec.known_nondecreasing() == Some(true) {
        return Ok(Theta { value: psi_or_inf(spec, n)?, certificate: Certificate::Exact });
    }
    let values = (n..=horizon).map(|k| psi_or_inf(spec, k)).collect::<Result<Vec<_>>>()?;
    let monotone = values.windows(2).all(|p| p[0] <= p[1]);
    let value = values.iter().copied().fold(f64::INFINITY, f64::min);
    let certificate = if monotone { Certificate::WindowMonotone } else { Certificate::HorizonTruncated };
    Ok(Theta { value, certificate })
}

/// Which side of the minimum defined `d_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Theta,
    Product,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Wan3 {
    /// `A - 1 + epsilon`
    #[serde(serialize_with = "ser_real")]
    pub bound: f64,
    /// tail max of `log d_{n+2} / (log d_2 + ... + log d_{n+1})`
    #[serde(serialize_with = "ser_real")]
    pub tail_max: f64,
    /// max of `log d_n / (log d_1 + ... + log d_{n-1})` over product steps
    #[serde(serialize_with = "ser_real")]
    pub product_step_max: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DProperties {
    /// `d_{n+1} >= d_n` for all `n >= 2`
    pub monotone: bool,
    /// tail min of `log d_n / log n` at `N/4, N/2, N`; should diverge
    #[serde(serialize_with = "ser_reals")]
    pub dnlogn: Vec<f64>,
    pub dnlogn_shape: LimitShape,
    pub wan3: Wan3,
    /// tail max of `log d_n / psi(n)` at `N/4, N/2, N`; should tend to 1
    #[serde(serialize_with = "ser_reals")]
    pub cn: Vec<f64>,
    pub cn_shape: LimitShape,
}

/// `d_1, ..., d_N` in log form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DSequence {
    #[serde(serialize_with = "ser_real")]
    pub a: f64,
    #[serde(serialize_with = "ser_real")]
    pub epsilon: f64,
    /// `theta(1..=N)`, each taken over the window `[n, 2N]`
    #[serde(serialize_with = "ser_reals")]
    pub theta: Vec<f64>,
    pub theta_certificate: Certificate,
    /// index 0 is unused so that `ln_d[n] = log d_n`
    #[serde(serialize_with = "ser_reals")]
    pub ln_d: Vec<f64>,
    pub branch: Vec<Branch>,
    pub properties: DProperties,
}

impl DSequence {
    pub fn len(&self) -> usize {
        self.ln_d.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Runs the recursion `log d_1 = theta(1)`,
/// `log d_n = min(theta(n), (A - 1 + eps) (log d_1 + ... + log d_{n-1}))`
/// and checks its stated properties at horizon `N`. `tol` is the slack
/// allowed above `A - 1 + eps` for the tail ratio.
pub fn d_sequence(spec: &PsiSpec, a: f64, epsilon: f64, n: u64, tol: f64) -> Result<DSequence> {
    if !(a.is_finite() && a >= 1.0) {
        return Err(Error::invalid(format!("A must be >= 1, got {a}")));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if n < 3 {
        return Err(Error::invalid("d-sequence needs N >= 3"));
    }
    let horizon = spec.max_n().map_or(2 * n, |len| len.min(2 * n));
    if horizon < n {
        return Err(Error::TableIndex { n, len: horizon as usize });
    }
    let psi = (1..=horizon).map(|k| psi_or_inf(spec, k)).collect::<Result<Vec<_>>>()?;
    let (theta, certificate) = if spec.known_nondecreasing() == Some(true) {
        (psi[..n as usize].to_vec(), Certificate::Exact)
    } else {
        let mut suffix = psi.clone();
        for i in (0..suffix.len() - 1).rev() {
            suffix[i] = suffix[i].min(suffix[i + 1]);
        }
        let monotone = psi.windows(2).all(|p| p[0] <= p[1]);
        suffix.truncate(n as usize);
        (suffix, if monotone { Certificate::WindowMonotone } else { Certificate::HorizonTruncated })
    };

    let c = a - 1.0 + epsilon;
    let mut ln_d = vec![f64::NAN, theta[0]];
    let mut branch = vec![Branch::Theta];
    let mut prefix = crate::numeric::CompensatedSum::new();
    prefix.add(theta[0]);
    for k in 2..=n as usize {
        let product = c * prefix.value();
        let (v, b) = if theta[k - 1] <= product { (theta[k - 1], Branch::Theta) } else { (product, Branch::Product) };
        ln_d.push(v);
        branch.push(b);
        prefix.add(v);
    }

    let properties = d_properties(&ln_d, &branch, &psi, c, tol);
    Ok(DSequence { a, epsilon, theta, theta_certificate: certificate, ln_d, branch, properties })
}

fn d_properties(ln_d: &[f64], branch: &[Branch], psi: &[f64], c: f64, tol: f64) -> DProperties {
    let n = (ln_d.len() - 1) as u64;
    let monotone = (2..n as usize).all(|k| ln_d[k + 1] >= ln_d[k]);
    // prefix[k] = log d_1 + ... + log d_k
    let mut prefix = vec![0.0; ln_d.len()];
    for k in 1..ln_d.len() {
        prefix[k] = prefix[k - 1] + ln_d[k];
    }
    let hs = [(n / 4).max(3), (n / 2).max(3), n];
    let window = |h: u64| Window::Half.range(h);

    let dnlogn: Vec<f64> = hs
        .iter()
        .map(|&h| {
            let (lo, hi) = window(h);
            (lo..=hi).map(|k| ln_d[k as usize] / (k as f64).ln()).fold(f64::INFINITY, f64::min)
        })
        .collect();
    let cn: Vec<f64> = hs
        .iter()
        .map(|&h| {
            let (lo, hi) = window(h);
            (lo..=hi).map(|k| ln_d[k as usize] / psi[k as usize - 1]).fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();

    // log d_{m+2} / (log d_2 + ... + log d_{m+1}) for m + 2 <= N
    let paper_ratio = |m: u64| {
        let m = m as usize;
        ln_d[m + 2] / (prefix[m + 1] - prefix[1])
    };
    let (lo, hi) = window(n.saturating_sub(2).max(2));
    let tail_max = (lo..=hi.min(n - 2)).map(paper_ratio).fold(f64::NEG_INFINITY, f64::max);
    let product_step_max = (2..=n as usize)
        .filter(|&k| branch[k - 1] == Branch::Product)
        .map(|k| ln_d[k] / prefix[k - 1])
        .fold(f64::NEG_INFINITY, f64::max);
    let wan3 = Wan3 { bound: c, tail_max, product_step_max, holds: tail_max <= c + tol };

    let to3 = |v: &[f64]| [v[0], v[1], v[2]];
    DProperties {
        monotone,
        dnlogn_shape: LimitShape::classify(to3(&dnlogn), tol),
        dnlogn,
        wan3,
        cn_shape: LimitShape::classify(to3(&cn).map(|x| x - 1.0), tol),
        cn,
    }
}

/// Digit choice inside `[n t_n, (n+1) t_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PointRule {
    /// `n t_n`
    #[default]
    Low,
    /// `n t_n + floor(t_n / 2)`
    Mid,
    /// `(n+1) t_n - 1`
    HighAvoid,
}

impl std::str::FromStr for PointRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" => Ok(PointRule::Low),
            "mid" => Ok(PointRule::Mid),
            "high-avoid" | "high" => Ok(PointRule::HighAvoid),
            other => Err(Error::invalid(format!("unknown rule {other:?} (low, mid, high-avoid)"))),
        }
    }
}

/// A word with `n t_n <= a_n < (n+1) t_n` for `n = 1..=N`.
pub fn build_point(t: &TSequence, n: usize, rule: PointRule, budget: BitBudget) -> Result<HugeWord> {
    if t.len() < n {
        return Err(Error::invalid(format!("t is materialized to {} terms, need {n}", t.len())));
    }
    let mut meter = Meter::new(budget);
    let mut digits = Vec::with_capacity(n);
    for (i, tn) in t.terms()[..n].iter().enumerate() {
        let k = i as u64 + 1;
        let d = match tn {
            HugeInt::Exact(tv) => {
                let bits = tv.bits() + 64 - (k + 1).leading_zeros() as u64;
                let log2 = tn.log2() + ((k + 1) as f64).log2();
                meter.admit(bits, log2, || format!("a_{k}"), || match rule {
                    PointRule::Low => tv * k,
                    PointRule::Mid => tv * k + (tv >> 1u32),
                    PointRule::HighAvoid => tv * (k + 1) - 1u32,
                })?
            }
            HugeInt::Approx { log2 } => {
                let scale = match rule {
                    PointRule::Low => k as f64,
                    PointRule::Mid => k as f64 + 0.5,
                    PointRule::HighAvoid => (k + 1) as f64,
                };
                HugeInt::Approx { log2: log2 + scale.log2() }
            }
        };
        digits.push(d);
    }
    let word = HugeWord::new(digits)?;
    if rule == PointRule::Low && t.is_nondecreasing() && word.is_exact() {
        assert!(
            word.digits.windows(2).all(|p| p[0].compare(&p[1]) == Ordering::Less),
            "low rule on non-decreasing t must give increasing digits"
        );
    }
    Ok(word)
}

/// Checks `n t_n <= a_n < (n+1) t_n`; exact where both sides are exact.
pub fn in_bracket(word: &HugeWord, t: &TSequence) -> bool {
    word.len() <= t.len()
        && word.digits().iter().zip(t.terms()).enumerate().all(|(i, (a, tn))| {
            let k = i as u64 + 1;
            match (a, tn) {
                (HugeInt::Exact(a), HugeInt::Exact(tv)) => &(tv * k) <= a && a < &(tv * (k + 1)),
                _ => {
                    let (la, lt) = (a.log2(), tn.log2());
                    la >= lt + (k as f64).log2() - 1e-9 && la < lt + ((k + 1) as f64).log2() + 1e-9
                }
            }
        })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XTilde {
    pub word: HugeWord,
    /// running maximum of `psi`
    #[serde(serialize_with = "ser_reals")]
    pub envelope: Vec<f64>,
    /// `log a_n / psi(n)`
    #[serde(serialize_with = "ser_reals")]
    pub ratios: Vec<f64>,
    /// `None` below the diagnostic's minimum horizon
    pub equivalence: Option<Equivalence>,
}

/// `a_n = floor(exp(M(n)))` with `M` the running maximum of `psi`.
pub fn build_xtilde(spec: &PsiSpec, n: usize, budget: BitBudget) -> Result<XTilde> {
    let equivalence = if n >= 16 {
        let (verdict, _) = equivalence_diagnostic(spec, n as u64, 1e-2)?;
        if verdict == Equivalence::NotEquivalent {
            return Err(Error::NotEquivalent);
        }
        Some(verdict)
    } else {
        None
    };
    let psi = (1..=n as u64).map(|k| spec.eval(k)).collect::<Result<Vec<_>>>()?;
    let mut envelope = Vec::with_capacity(n);
    let mut run = f64::NEG_INFINITY;
    for &v in &psi {
        run = run.max(v);
        envelope.push(run);
    }
    let mut meter = Meter::new(budget);
    let digits = envelope
        .iter()
        .enumerate()
        .map(|(i, &m)| meter.floor_exp(m, || format!("a_{}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let word = HugeWord::new(digits)?;
    let ratios = word.ln_digits().iter().zip(&psi).map(|(la, p)| la / p).collect();
    Ok(XTilde { word, envelope, ratios, equivalence })
}

/// `a_n = ceil(a^(b^n))`, the smallest digits allowed in the set with
/// `a_n >= a^(b^n)`. Exact for integer `a` and `b`; otherwise the exponent
/// is rounded upward before taking the ceiling.
pub fn build_f_point(a: f64, b: f64, n: usize, budget: BitBudget) -> Result<HugeWord> {
    if !(a.is_finite() && a > 1.0 && b.is_finite() && b > 1.0) {
        return Err(Error::invalid(format!("need a > 1 and b > 1, got a = {a}, b = {b}")));
    }
    let integral = a.fract() == 0.0 && b.fract() == 0.0 && a < u64::MAX as f64 && b < u64::MAX as f64;
    let mut meter = Meter::new(budget);
    let mut digits = Vec::with_capacity(n);
    for k in 1..=n as i32 {
        let what = || format!("a_{k}");
        let bn = b.powi(k);
        let log2 = bn * a.log2();
        let d = if integral {
            let exponent = BigUint::from(b as u64).pow(k as u32).to_u32();
            match exponent {
                Some(e) if log2 < u32::MAX as f64 => {
                    meter.admit(log2.ceil() as u64 + 1, log2, what, || BigUint::from(a as u64).pow(e))?
                }
                _ => meter.admit(u64::MAX, log2, what, BigUint::one)?,
            }
        } else {
            let x = bn * a.ln();
            let x_up = x + x.abs() * 8.0 * f64::EPSILON + f64::MIN_POSITIVE;
            match meter.floor_exp(x_up, what)? {
                HugeInt::Exact(v) => HugeInt::Exact(v + 1u32),
                approx => approx,
            }
        };
        digits.push(d);
    }
    HugeWord::new(digits)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipStats {
    pub nondecreasing: bool,
    /// `log a_n / psi(n)`
    #[serde(serialize_with = "ser_reals")]
    pub ratios: Vec<f64>,
    #[serde(serialize_with = "ser_real")]
    pub tail_min: f64,
    #[serde(serialize_with = "ser_real")]
    pub tail_max: f64,
}

/// Ratios `log a_n / psi(n)` with their min and max over `[N/2, N]`.
pub fn membership_stats(w: &HugeWord, spec: &PsiSpec) -> Result<MembershipStats> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let ratios = w
        .ln_digits()
        .iter()
        .enumerate()
        .map(|(i, la)| Ok(la / spec.eval(i as u64 + 1)?))
        .collect::<Result<Vec<f64>>>()?;
    let n = w.len();
    let lo = (n / 2).max(1);
    let tail = &ratios[lo - 1..];
    Ok(MembershipStats {
        nondecreasing: w.is_nondecreasing(),
        tail_min: tail.iter().copied().fold(f64::INFINITY, f64::min),
        tail_max: tail.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::Table;
    use proptest::prelude::*;

    fn exact(w: &HugeWord) -> Vec<u64> {
        w.digits().iter().map(|d| d.exact().unwrap().to_u64().unwrap()).collect()
    }

    #[test]
    fn points_for_small_t() {
        let t = TSequence::explicit(vec![BigUint::from(2u32); 4]).unwrap();
        let w = build_point(&t, 4, PointRule::Low, BitBudget::default()).unwrap();
        assert_eq!(exact(&w), [2, 4, 6, 8]);
        assert!(in_bracket(&w, &t));

        let t = TSequence::power(3.0, 3, BitBudget::default()).unwrap();
        let w = build_point(&t, 3, PointRule::Low, BitBudget::default()).unwrap();
        assert_eq!(exact(&w), [2, 16, 54]);
        for rule in [PointRule::Mid, PointRule::HighAvoid] {
            assert!(in_bracket(&build_point(&t, 3, rule, BitBudget::default()).unwrap(), &t));
        }
        assert_eq!(
            exact(&build_point(&t, 3, PointRule::HighAvoid, BitBudget::default()).unwrap()),
            [3, 23, 71]
        );
    }

    #[test]
    fn explicit_rejects_small_terms() {
        assert!(TSequence::explicit(vec![BigUint::from(2u32), BigUint::from(1u32)]).is_err());
    }

    #[test]
    fn theta_examples() {
        let t = theta(&PsiSpec::AlphaLog(2.0), 5, 10).unwrap();
        assert_eq!(t.value, 2.0 * 5f64.ln());
        assert_eq!(t.certificate, Certificate::Exact);
        let t = theta(&PsiSpec::Expo(3.0), 4, 10).unwrap();
        assert_eq!(t.value, 81.0);
        let table = Table::from_integers(&[5, 3, 8, 4, 9]).unwrap();
        let t = theta(&PsiSpec::Table(table), 1, 5).unwrap();
        assert_eq!(t.value, 3.0);
        assert_eq!(t.certificate, Certificate::HorizonTruncated);
    }

    #[test]
    fn d_sequence_expo_three() {
        let d = d_sequence(&PsiSpec::Expo(3.0), 3.0, 0.1, 50, 1e-3).unwrap();
        assert!(d.properties.monotone);
        assert!(d.properties.wan3.holds, "{:?}", d.properties.wan3);
        assert!(d.properties.wan3.product_step_max <= 2.1 * (1.0 + 1e-12));
        // oracle: log d_1 = 3 and log d_2 = min(9, 2.1 * 3)
        assert_eq!(d.ln_d[1], 3.0);
        assert!((d.ln_d[2] - 6.3).abs() < 1e-12);
        assert_eq!(d.branch[1], Branch::Product);
    }

    #[test]
    fn d_sequence_power_two_switches_to_theta() {
        let d = d_sequence(&PsiSpec::Power(2.0), 1.0, 0.5, 60, 1e-3).unwrap();
        // hand recursion: 1, 0.5, 0.75, 1.125, ... (x1.5) until it passes n^2
        assert_eq!(d.ln_d[1], 1.0);
        assert!((d.ln_d[2] - 0.5).abs() < 1e-15);
        assert!((d.ln_d[3] - 0.75).abs() < 1e-15);
        assert!((d.ln_d[4] - 1.125).abs() < 1e-15);
        assert_eq!(d.branch[59], Branch::Theta);
        assert_eq!(d.ln_d[60], 3600.0);
        assert!(d.properties.monotone);
        assert_eq!(*d.properties.cn.last().unwrap(), 1.0);
    }

    #[test]
    fn d_sequence_rejects_bad_parameters() {
        assert!(d_sequence(&PsiSpec::Expo(3.0), 0.5, 0.1, 10, 1e-3).is_err());
        assert!(d_sequence(&PsiSpec::Expo(3.0), 2.0, 0.0, 10, 1e-3).is_err());
    }

    #[test]
    fn xtilde_examples() {
        let x = build_xtilde(&PsiSpec::parse("n").unwrap(), 10, BitBudget::default()).unwrap();
        assert_eq!(exact(&x.word)[..4], [2, 7, 20, 54]);
        assert!((x.ratios[9] - 1.0).abs() < 1e-3);

        let x = build_xtilde(&PsiSpec::AlphaLog(2.0), 30, BitBudget::default()).unwrap();
        for (i, d) in exact(&x.word).iter().enumerate() {
            let n = i as u64 + 1;
            // floor(exp(2 log n)) may land on n^2 - 1 when exp rounds below
            assert!(*d == n * n || *d == n * n - 1, "n = {n}, a_n = {d}");
        }

        let t = Table::from_integers(&[1, 3, 2, 5]).unwrap();
        let x = build_xtilde(&PsiSpec::Table(t), 4, BitBudget::default()).unwrap();
        assert_eq!(x.envelope, [1.0, 3.0, 3.0, 5.0]);
        assert_eq!(exact(&x.word), [2, 20, 20, 148]);
    }

    #[test]
    fn xtilde_rejects_non_equivalent() {
        let n = 64u64;
        let vals: Vec<u64> = (1..=n).map(|k| if k % 2 == 0 { 1 << (k / 2 + 8) } else { 1 << ((k - 1) / 4 + 1) }).collect();
        let spec = PsiSpec::Table(Table::from_integers(&vals).unwrap());
        assert_eq!(build_xtilde(&spec, 64, BitBudget::default()), Err(Error::NotEquivalent));
    }

    #[test]
    fn f_points() {
        let w = build_f_point(2.0, 2.0, 4, BitBudget::default()).unwrap();
        assert_eq!(exact(&w), [4, 16, 256, 65536]);
        let w = build_f_point(2.0, 1.5, 3, BitBudget::default()).unwrap();
        assert_eq!(exact(&w), [3, 5, 11]);
        assert!(w.is_nondecreasing());
    }

    #[test]
    fn budget_is_enforced() {
        let err = build_f_point(2.0, 2.0, 30, BitBudget::new(10_000)).unwrap_err();
        assert!(err.is_budget());
        let w = build_f_point(2.0, 2.0, 30, BitBudget::new(10_000).approximate()).unwrap();
        assert!(!w.is_exact());
        assert_eq!(w.digits()[29].log2(), 2f64.powi(30));
        assert!(w.is_nondecreasing());
        assert!(w.to_word().is_none());
        assert!(w.digits()[29].to_string().starts_with("~1.000000000000000*2^1073741824"));
    }

    #[test]
    fn membership_examples() {
        let x = build_xtilde(&PsiSpec::parse("n").unwrap(), 50, BitBudget::default()).unwrap();
        let s = membership_stats(&x.word, &PsiSpec::parse("n").unwrap()).unwrap();
        assert!(s.nondecreasing);
        assert!((s.tail_max - 1.0).abs() < 1e-6 && (s.tail_min - 1.0).abs() < 1e-6);

        let w = HugeWord::from(&Word::from_u64s(&[1, 1, 2, 1]).unwrap());
        assert!(!w.is_nondecreasing());

        let w = HugeWord::from(&Word::from_u64s(&[2, 4, 6, 8]).unwrap());
        let s = membership_stats(&w, &PsiSpec::AlphaLog(1.0)).unwrap();
        for n in 2..=4 {
            let want = (2.0 * n as f64).ln() / (n as f64).ln();
            assert!((s.ratios[n - 1] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn compact_runs() {
        let w = HugeWord::from(&Word::from_u64s(&[2, 2, 2, 5, 7, 7]).unwrap());
        let runs = w.compact();
        assert_eq!(runs.len(), 3);
        assert_eq!(runs[0].count, 3);
        assert_eq!(runs[2].digit, HugeInt::from_u64(7));
    }

    proptest! {
        #[test]
        fn low_rule_is_strictly_increasing(steps in proptest::collection::vec(0u64..50, 1..40), start in 2u64..100) {
            let mut acc = start;
            let values: Vec<BigUint> = steps.iter().map(|s| { acc += s; BigUint::from(acc) }).collect();
            let len = values.len();
            let t = TSequence::explicit(values).unwrap();
            let w = build_point(&t, len, PointRule::Low, BitBudget::default()).unwrap();
            prop_assert!(in_bracket(&w, &t));
            prop_assert!(w.digits().windows(2).all(|p| p[0].compare(&p[1]) == Ordering::Less));
        }

        #[test]
        fn d_sequence_monotone_and_wan3(a in 1.0f64..5.0, eps in 0.01f64..1.0, which in 0usize..3) {
            let spec = [PsiSpec::Expo(2.5), PsiSpec::Power(1.5), PsiSpec::AlphaLog(3.0)][which].clone();
            let d = d_sequence(&spec, a, eps, 64, 1e-3).unwrap();
            prop_assert!(d.properties.monotone);
            prop_assert!(d.properties.wan3.product_step_max <= (a - 1.0 + eps) * (1.0 + 1e-12));
        }

        #[test]
        fn xtilde_floor_error_bound(vals in proptest::collection::vec(1.0f64..40.0, 1..16)) {
            let table = Table::new(vals.iter().map(|v| num_rational::BigRational::from_float(*v).unwrap()).collect()).unwrap();
            let x = build_xtilde(&PsiSpec::Table(table), vals.len(), BitBudget::default()).unwrap();
            for (la, m) in x.word.ln_digits().iter().zip(&x.envelope) {
                let bound = -(1.0 - (-m).exp()).ln();
                prop_assert!((la - m).abs() <= bound + 1e-12 * m.max(1.0));
            }
        }
    }
}
