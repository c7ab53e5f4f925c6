//! Counting and lexicographic streaming of the word families used by the
//! covering arguments: `D(l, n)`, the `A_k` and `C_k` families, and words over
//! a fixed finite digit set.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::cf::Word;
use crate::error::{Error, Result};
use crate::numeric::{ceil_pow, floor_pow, LogValue};

/// A word family without its depth: the rule that picks admissible words of
/// any length `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum FamilyTemplate {
    /// `1 <= a_1 <= ... <= a_k <= l`.
    D { l: u64 },
    /// Non-decreasing, `a_j >= j^(alpha1 - eps)` for every `j`, `a_k <= k^(alpha2 + eps)`.
    A { alpha1: f64, alpha2: f64, eps: f64 },
    /// Non-decreasing, `a_k <= k^(alpha + eps)`.
    C { alpha: f64, eps: f64 },
    /// Every word over a finite digit set (no monotonicity).
    Bounded { digits: Vec<u64> },
}

/// A family at a fixed depth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySpec {
    pub template: FamilyTemplate,
    pub k: usize,
}

impl FamilyTemplate {
    pub fn d(l: u64) -> Result<Self> {
        let t = FamilyTemplate::D { l };
        t.validate()?;
        Ok(t)
    }

    pub fn a(alpha1: f64, alpha2: f64, eps: f64) -> Result<Self> {
        let t = FamilyTemplate::A { alpha1, alpha2, eps };
        t.validate()?;
        Ok(t)
    }

    pub fn c(alpha: f64, eps: f64) -> Result<Self> {
        let t = FamilyTemplate::C { alpha, eps };
        t.validate()?;
        Ok(t)
    }

    pub fn bounded(digits: &[u64]) -> Result<Self> {
        let mut digits = digits.to_vec();
        digits.sort_unstable();
        digits.dedup();
        let t = FamilyTemplate::Bounded { digits };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let finite_nonneg = |x: f64| x.is_finite() && x >= 0.0;
        match self {
            FamilyTemplate::D { l } if *l == 0 => Err(Error::invalid("D family needs l >= 1")),
            FamilyTemplate::A { alpha1, alpha2, eps } => {
                if !(alpha1.is_finite() && *alpha1 > 0.0 && alpha2.is_finite() && finite_nonneg(*eps)) {
                    Err(Error::invalid("A family needs alpha1, alpha2 > 0 and eps >= 0"))
                } else if alpha2 < alpha1 {
                    Err(Error::invalid("A family needs alpha2 >= alpha1"))
                } else {
                    Ok(())
                }
            }
            FamilyTemplate::C { alpha, eps } => {
                if finite_nonneg(*alpha) && finite_nonneg(*eps) {
                    Ok(())
                } else {
                    Err(Error::invalid("C family needs alpha >= 0 and eps >= 0"))
                }
            }
            FamilyTemplate::Bounded { digits } => {
                if digits.is_empty() || digits[0] == 0 {
                    Err(Error::invalid("bounded family needs a non-empty set of digits >= 1"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn at_depth(&self, k: usize) -> Result<FamilySpec> {
        if k == 0 {
            return Err(Error::invalid("depth must be >= 1"));
        }
        Ok(FamilySpec {
            template: self.clone(),
            k,
        })
    }

    pub fn is_nondecreasing(&self) -> bool {
        !matches!(self, FamilyTemplate::Bounded { .. })
    }
}

impl FamilySpec {
    pub fn d(l: u64, n: usize) -> Result<Self> {
        FamilyTemplate::d(l)?.at_depth(n)
    }

    /// Largest admissible digit at this depth, floored as `floor(k^x)`.
    pub fn ceiling(&self) -> u64 {
        let k = self.k as u64;
        match &self.template {
            FamilyTemplate::D { l } => *l,
            FamilyTemplate::A { alpha2, eps, .. } => floor_pow(k, alpha2 + eps),
            FamilyTemplate::C { alpha, eps } => floor_pow(k, alpha + eps),
            FamilyTemplate::Bounded { digits } => *digits.last().expect("validated"),
        }
    }

    /// Smallest admissible digit at 1-based position `j`.
    pub fn lower(&self, j: usize) -> u64 {
        match &self.template {
            FamilyTemplate::A { alpha1, eps, .. } => ceil_pow(j as u64, alpha1 - eps).max(1),
            FamilyTemplate::Bounded { digits } => digits[0],
            _ => 1,
        }
    }

    pub fn lower_bounds(&self) -> Vec<u64> {
        (1..=self.k).map(|j| self.lower(j)).collect()
    }

    /// Digits allowed anywhere in the word, ascending.
    pub(crate) fn alphabet(&self) -> Vec<u64> {
        match &self.template {
            FamilyTemplate::Bounded { digits } => digits.clone(),
            _ => (1..=self.ceiling()).collect(),
        }
    }

    pub fn is_empty_family(&self) -> bool {
        self.ceiling() == 0 || self.lower(self.k) > self.ceiling()
    }

    /// Membership predicate, straight from the family definition.
    pub fn contains(&self, w: &Word) -> bool {
        if w.len() != self.k {
            return false;
        }
        let Some(ds) = w.digits().iter().map(|d| d.to_u64()).collect::<Option<Vec<u64>>>() else {
            return false;
        };
        match &self.template {
            FamilyTemplate::Bounded { digits } => ds.iter().all(|d| digits.binary_search(d).is_ok()),
            _ => {
                let ceil = self.ceiling();
                w.is_nondecreasing()
                    && ds.iter().enumerate().all(|(i, &d)| d >= self.lower(i + 1) && d <= ceil)
            }
        }
    }

    /// Exact cardinality.
    pub fn count(&self) -> BigUint {
        match &self.template {
            FamilyTemplate::D { l } => count_d(*l, self.k),
            FamilyTemplate::Bounded { digits } => num_traits::pow(BigUint::from(digits.len()), self.k),
            _ => self.count_by_recursion(),
        }
    }

    /// Counts non-decreasing words with position-wise lower bounds by the
    /// prefix-sum recursion over the last digit.
    fn count_by_recursion(&self) -> BigUint {
        if self.is_empty_family() {
            return BigUint::zero();
        }
        let ceil = self.ceiling() as usize;
        let lows = self.lower_bounds();
        let mut ways: Vec<BigUint> = (1..=ceil)
            .map(|d| if d as u64 >= lows[0] { BigUint::one() } else { BigUint::zero() })
            .collect();
        for &low in &lows[1..] {
            let mut acc = BigUint::zero();
            for (i, slot) in ways.iter_mut().enumerate() {
                acc += &*slot;
                *slot = if (i + 1) as u64 >= low { acc.clone() } else { BigUint::zero() };
            }
        }
        ways.into_iter().sum()
    }

    /// Lexicographic stream of members; fails when the family holds more than
    /// `budget` words.
    pub fn enumerate(&self, budget: Option<u64>) -> Result<FamilyIter> {
        self.check_budget(budget)?;
        Ok(FamilyIter::new(self, None))
    }

    /// Members whose first digit is `first`, for partitioned consumption.
    pub fn enumerate_with_first(&self, first: u64) -> FamilyIter {
        FamilyIter::new(self, Some(first))
    }

    pub fn check_budget(&self, budget: Option<u64>) -> Result<()> {
        if let Some(b) = budget {
            let n = self.count();
            if n > BigUint::from(b) {
                return Err(Error::budget(format!("family {self} has {n} words, budget is {b}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for FamilyTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTemplate::D { l } => write!(f, "D:l={l}"),
            FamilyTemplate::A { alpha1, alpha2, eps } => {
                write!(f, "A:alpha1={alpha1},alpha2={alpha2},eps={eps}")
            }
            FamilyTemplate::C { alpha, eps } => write!(f, "C:alpha={alpha},eps={eps}"),
            FamilyTemplate::Bounded { digits } => {
                let ds: Vec<String> = digits.iter().map(u64::to_string).collect();
                write!(f, "bounded:digits={}", ds.join(","))
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let key = if matches!(self.template, FamilyTemplate::D { .. }) { "n" } else { "k" };
        write!(f, "{},{key}={}", self.template, self.k)
    }
}

/// Splits `"kind:key=v,key=v"` into the kind and key/value lists. Bare
/// tokens continue the previous key's list, so `digits=1,2,5` works.
fn parse_fields(text: &str) -> Result<(String, Vec<(String, Vec<String>)>)> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("family {text:?} needs the form kind:key=value,...")))?;
    let mut fields: Vec<(String, Vec<String>)> = Vec::new();
    for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok.split_once('=') {
            Some((k, v)) => fields.push((k.trim().to_string(), vec![v.trim().to_string()])),
            None => match fields.last_mut() {
                Some((_, vs)) => vs.push(tok.to_string()),
                None => return Err(Error::invalid(format!("dangling value {tok:?} in {text:?}"))),
            },
        }
    }
    Ok((kind.trim().to_string(), fields))
}

struct Fields {
    fields: Vec<(String, Vec<String>)>,
}

impl Fields {
    fn take(&mut self, names: &[&str]) -> Option<Vec<String>> {
        let pos = self.fields.iter().position(|(k, _)| names.contains(&k.as_str()))?;
        Some(self.fields.remove(pos).1)
    }

    fn float(&mut self, names: &[&str]) -> Result<Option<f64>> {
        match self.take(names) {
            None => Ok(None),
            Some(v) if v.len() == 1 => v[0]
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::invalid(format!("{} expects a number, got {:?}", names[0], v[0]))),
            Some(v) => Err(Error::invalid(format!("{} expects one value, got {v:?}", names[0]))),
        }
    }

    fn required_float(&mut self, names: &[&str]) -> Result<f64> {
        self.float(names)?
            .ok_or_else(|| Error::invalid(format!("missing parameter {}", names[0])))
    }

    fn int(&mut self, names: &[&str]) -> Result<Option<u64>> {
        match self.take(names) {
            None => Ok(None),
            Some(v) if v.len() == 1 => v[0]
                .parse::<u64>()
                .map(Some)
                .map_err(|_| Error::invalid(format!("{} expects an integer, got {:?}", names[0], v[0]))),
            Some(v) => Err(Error::invalid(format!("{} expects one value, got {v:?}", names[0]))),
        }
    }

    fn finish(self) -> Result<()> {
        match self.fields.first() {
            Some((k, _)) => Err(Error::invalid(format!("unknown family parameter {k:?}"))),
            None => Ok(()),
        }
    }
}

fn parse_family(text: &str) -> Result<(FamilyTemplate, Option<usize>)> {
    let (kind, fields) = parse_fields(text)?;
    let mut f = Fields { fields };
    let template = match kind.as_str() {
        "D" | "d" => {
            let l = f.int(&["l"])?.ok_or_else(|| Error::invalid("D family needs l"))?;
            FamilyTemplate::d(l)?
        }
        "A" | "a" => {
            let alpha = f.float(&["alpha"])?;
            let alpha1 = f.float(&["alpha1"])?.or(alpha);
            let alpha2 = f.float(&["alpha2"])?.or(alpha);
            let (Some(alpha1), Some(alpha2)) = (alpha1, alpha2) else {
                return Err(Error::invalid("A family needs alpha1 and alpha2 (or alpha)"));
            };
            let eps = f.required_float(&["eps"])?;
            FamilyTemplate::a(alpha1, alpha2, eps)?
        }
        "C" | "c" => {
            let alpha = f.required_float(&["alpha"])?;
            let eps = f.required_float(&["eps"])?;
            FamilyTemplate::c(alpha, eps)?
        }
        "bounded" => {
            let raw = f.take(&["digits"]).ok_or_else(|| Error::invalid("bounded family needs digits"))?;
            let digits = raw
                .iter()
                .map(|d| d.parse::<u64>().map_err(|_| Error::invalid(format!("bad digit {d:?}"))))
                .collect::<Result<Vec<_>>>()?;
            FamilyTemplate::bounded(&digits)?
        }
        other => return Err(Error::invalid(format!("unknown family kind {other:?}"))),
    };
    let depth = f.int(&["k", "n"])?.map(|k| k as usize);
    f.finish()?;
    Ok((template, depth))
}

/// Parses a template; a depth parameter, if present, is ignored.
impl FromStr for FamilyTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(parse_family(s)?.0)
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (template, depth) = parse_family(s)?;
        let k = depth.ok_or_else(|| Error::invalid(format!("family {s:?} needs a depth (k= or n=)")))?;
        template.at_depth(k)
    }
}

/// Odometer over the members of a family in lexicographic order.
#[derive(Debug, Clone)]
pub struct FamilyIter {
    alphabet: Vec<u64>,
    lows: Vec<u64>,
    nondecreasing: bool,
    /// current word as indices into `alphabet`
    idx: Vec<usize>,
    first_fixed: bool,
    done: bool,
}

impl FamilyIter {
    fn new(spec: &FamilySpec, first: Option<u64>) -> Self {
        let alphabet = spec.alphabet();
        let lows = spec.lower_bounds();
        let mut it = FamilyIter {
            alphabet,
            lows,
            nondecreasing: spec.template.is_nondecreasing(),
            idx: Vec::with_capacity(spec.k),
            first_fixed: first.is_some(),
            done: spec.is_empty_family(),
        };
        if it.done {
            return it;
        }
        let start = match first {
            Some(d) => match it.alphabet.binary_search(&d) {
                Ok(i) if d >= it.lows[0] => i,
                _ => {
                    it.done = true;
                    return it;
                }
            },
            None => match it.min_index(0, 0) {
                Some(i) => i,
                None => {
                    it.done = true;
                    return it;
                }
            },
        };
        it.idx.push(start);
        if !it.fill_from(1) {
            it.done = true;
        }
        it
    }

    /// Smallest alphabet index admissible at position `pos` given the floor
    /// index imposed by monotonicity.
    fn min_index(&self, pos: usize, floor_idx: usize) -> Option<usize> {
        let low = self.lows[pos];
        let from_low = self.alphabet.partition_point(|&d| d < low);
        let i = from_low.max(floor_idx);
        (i < self.alphabet.len()).then_some(i)
    }

    /// Fills positions `pos..` with their minimal admissible digits.
    fn fill_from(&mut self, pos: usize) -> bool {
        self.idx.truncate(pos);
        for p in pos..self.lows.len() {
            let floor = if self.nondecreasing { self.idx[p - 1] } else { 0 };
            match self.min_index(p, floor) {
                Some(i) => self.idx.push(i),
                None => return false,
            }
        }
        true
    }

    fn current(&self) -> Vec<u64> {
        self.idx.iter().map(|&i| self.alphabet[i]).collect()
    }

    fn advance(&mut self) {
        let stop = usize::from(self.first_fixed);
        let mut pos = self.idx.len();
        while pos > stop {
            pos -= 1;
            let next = self.idx[pos] + 1;
            if next < self.alphabet.len() {
                self.idx[pos] = next;
                if self.fill_from(pos + 1) {
                    return;
                }
            }
        }
        self.done = true;
    }

    /// Next member as raw digits; avoids big-integer conversion.
    pub fn next_digits(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

impl Iterator for FamilyIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        self.next_digits()
            .map(|ds| Word::from_u64s(&ds).expect("family digits are >= 1"))
    }
}

/// `#D(l, n) = (n + l - 1)! / (n! (l - 1)!)`, exactly.
pub fn count_d(l: u64, n: usize) -> BigUint {
    if l == 0 {
        return BigUint::zero();
    }
    // C(n + l - 1, n) computed incrementally; each partial product is an integer
    let mut acc = BigUint::one();
    let top = l - 1;
    for i in 1..=n as u64 {
        acc = acc * BigUint::from(top + i) / BigUint::from(i);
    }
    acc
}

/// `2^k exp((alpha2 + eps) k) (k!)^(alpha2 + eps - 1)`, the cardinality bound
/// for `A_k`.
pub fn bound_a_k(k: usize, alpha2: f64, eps: f64) -> LogValue {
    let kf = k as f64;
    let e = alpha2 + eps;
    let ln_fact = crate::numeric::ln_factorials(k)[k];
    LogValue::from_ln(kf * std::f64::consts::LN_2 + e * kf + (e - 1.0) * ln_fact)
}

/// `exp(k^(alpha + eps) (log k + 1))`, the cardinality bound for `C_k`.
pub fn bound_c_k(k: usize, alpha: f64, eps: f64) -> LogValue {
    let kf = k as f64;
    LogValue::from_ln(kf.powf(alpha + eps) * (kf.ln() + 1.0))
}

/// Stirling brackets `sqrt(2 pi) k^(k+1/2) e^-k <= k! <= e k^(k+1/2) e^-k`.
pub fn stirling_bounds(k: usize) -> (LogValue, LogValue) {
    let kf = k as f64;
    let core = (kf + 0.5) * kf.ln() - kf;
    let lo = 0.5 * (2.0 * std::f64::consts::PI).ln() + core;
    let hi = 1.0 + core;
    (LogValue::from_ln(lo), LogValue::from_ln(hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: every tuple over {1..ceil}^k filtered by a predicate.
    fn brute<F: Fn(&[u64]) -> bool>(k: usize, ceil: u64, pred: F) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut cur = vec![1u64; k];
        loop {
            if pred(&cur) {
                out.push(cur.clone());
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < ceil {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 1;
                    }
                    break;
                }
            }
        }
    }

    fn nondecreasing(w: &[u64]) -> bool {
        w.windows(2).all(|p| p[0] <= p[1])
    }

    fn digits(it: FamilyIter) -> Vec<Vec<u64>> {
        it.map(|w| w.digits().iter().map(|d| d.to_u64().unwrap()).collect())
            .collect()
    }

    #[test]
    fn count_d_examples() {
        assert_eq!(count_d(1, 5), BigUint::from(1u32));
        assert_eq!(count_d(2, 3), BigUint::from(4u32));
        assert_eq!(count_d(5, 5), BigUint::from(126u32));
        assert_eq!(brute(3, 2, nondecreasing).len(), 4);
        assert_eq!(brute(5, 5, nondecreasing).len(), 126);
    }

    #[test]
    fn enumerate_d22_and_c_equivalent() {
        let d = FamilySpec::d(2, 2).unwrap();
        let expect = vec![vec![1, 1], vec![1, 2], vec![2, 2]];
        assert_eq!(digits(d.enumerate(None).unwrap()), expect);
        let c = FamilyTemplate::c(1.0, 0.0).unwrap().at_depth(2).unwrap();
        assert_eq!(c.ceiling(), 2);
        assert_eq!(digits(c.enumerate(None).unwrap()), expect);
    }

    #[test]
    fn a_family_matches_filter_oracle() {
        let eps = 0.01;
        let spec = FamilyTemplate::a(1.0, 1.0, eps).unwrap().at_depth(3).unwrap();
        let ceil_real = 3f64.powf(1.0 + eps);
        let oracle = brute(3, 4, |w| {
            nondecreasing(w)
                && (w[2] as f64) <= ceil_real
                && w.iter().enumerate().all(|(j, &a)| a as f64 >= ((j + 1) as f64).powf(1.0 - eps))
        });
        let got = digits(spec.enumerate(None).unwrap());
        assert_eq!(got, oracle);
        assert_eq!(got.len(), 5);
        assert_eq!(spec.count(), BigUint::from(5u32));
    }

    #[test]
    fn bounded_family_is_all_words() {
        let spec: FamilySpec = "bounded:digits=1,2,k=3".parse().unwrap();
        let got = digits(spec.enumerate(None).unwrap());
        assert_eq!(got.len(), 8);
        assert_eq!(got[0], vec![1, 1, 1]);
        assert_eq!(got[7], vec![2, 2, 2]);
        assert_eq!(spec.count(), BigUint::from(8u32));
    }

    #[test]
    fn partition_by_first_digit_covers_family() {
        let spec = FamilySpec::d(4, 4).unwrap();
        let all = digits(spec.enumerate(None).unwrap());
        let mut parts = Vec::new();
        for d in 1..=4 {
            parts.extend(digits(spec.enumerate_with_first(d)));
        }
        assert_eq!(all, parts);
    }

    #[test]
    fn budget_is_enforced() {
        let spec = FamilySpec::d(5, 5).unwrap();
        assert!(spec.enumerate(Some(126)).is_ok());
        assert!(matches!(spec.enumerate(Some(125)), Err(Error::Budget(_))));
    }

    #[test]
    fn empty_family_yields_nothing() {
        // a_2 >= 2^5 = 32 but the ceiling is floor(2^1) = 2
        let spec = FamilySpec {
            template: FamilyTemplate::A { alpha1: 5.0, alpha2: 1.0, eps: 0.0 },
            k: 2,
        };
        assert!(spec.is_empty_family());
        assert_eq!(spec.enumerate(None).unwrap().count(), 0);
        assert_eq!(spec.count(), BigUint::zero());
    }

    #[test]
    fn parse_and_display() {
        let s: FamilySpec = "D:l=5,n=5".parse().unwrap();
        assert_eq!(s, FamilySpec::d(5, 5).unwrap());
        assert_eq!(s.to_string(), "D:l=5,n=5");
        let c: FamilySpec = "C:k=4,alpha=1,eps=0.2".parse().unwrap();
        assert_eq!(c.k, 4);
        assert_eq!(c.ceiling(), 5);
        let a: FamilyTemplate = "A:alpha=2,eps=0.05".parse().unwrap();
        assert_eq!(a, FamilyTemplate::A { alpha1: 2.0, alpha2: 2.0, eps: 0.05 });
        let b: FamilyTemplate = "bounded:digits=2,1".parse().unwrap();
        assert_eq!(b, FamilyTemplate::Bounded { digits: vec![1, 2] });
        assert!("D:l=0,n=2".parse::<FamilySpec>().is_err());
        assert!("D:l=2".parse::<FamilySpec>().is_err());
        assert!("Q:l=2".parse::<FamilyTemplate>().is_err());
        assert!("C:alpha=1,eps=0.2,zeta=3".parse::<FamilyTemplate>().is_err());
        assert!("A:alpha1=2,alpha2=1,eps=0.1".parse::<FamilyTemplate>().is_err());
    }

    #[test]
    fn bound_examples() {
        let b = bound_a_k(1, 2.0, 0.1);
        assert!((b.ln() - (2f64.ln() + 2.1)).abs() < 1e-12);
        let c = bound_c_k(2, 0.0, 1.0);
        assert!((c.ln() - 2.0 * (2f64.ln() + 1.0)).abs() < 1e-12);
        for (k, a2, eps) in [(5usize, 2.0, 0.1), (10, 1.0, 0.5)] {
            let spec = FamilyTemplate::a(a2, a2, eps).unwrap().at_depth(k).unwrap();
            let exact = spec.count().to_f64().unwrap();
            assert!(bound_a_k(k, a2, eps).ln() >= exact.ln());
        }
        for (k, alpha, eps) in [(4usize, 1.0, 0.2), (8, 0.5, 0.5)] {
            let spec = FamilyTemplate::c(alpha, eps).unwrap().at_depth(k).unwrap();
            let exact = spec.count().to_f64().unwrap();
            assert!(bound_c_k(k, alpha, eps).ln() >= exact.ln());
        }
    }

    #[test]
    fn stirling_examples() {
        let (lo, hi) = stirling_bounds(1);
        assert!((lo.to_f64() - (2.0 * std::f64::consts::PI).sqrt() / std::f64::consts::E).abs() < 1e-12);
        assert!((hi.to_f64() - 1.0).abs() < 1e-12);
        assert!(lo.to_f64() <= 1.0 && 1.0 <= hi.to_f64());
        let (lo, hi) = stirling_bounds(5);
        assert!(lo.to_f64() <= 120.0 && 120.0 <= hi.to_f64());
        let f20 = crate::numeric::ln_factorials(20)[20];
        let (lo, hi) = stirling_bounds(20);
        assert!(lo.ln() <= f20 && f20 <= hi.ln());
    }
}
