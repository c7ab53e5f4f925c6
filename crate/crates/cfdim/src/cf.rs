//! Exact continued-fraction arithmetic: convergents, evaluation, the Gauss-map
//! expansion of rationals, cylinder intervals and the classical length bounds.
//!
//! Every quantity here is an exact integer or rational. A [`Word`] is a finite
//! block of partial quotients `(a_1, ..., a_n)`; its cylinder is the set of
//! `x in (0,1)` whose expansion starts with that block.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite sequence of partial quotients, each `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    digits: Vec<BigUint>,
}

impl Word {
    pub fn new(digits: Vec<BigUint>) -> Result<Self> {
        if let Some(bad) = digits.iter().find(|d| d.is_zero()) {
            return Err(Error::InvalidDigit(bad.to_string()));
        }
        Ok(Self { digits })
    }

    pub fn from_u64s(digits: &[u64]) -> Result<Self> {
        Self::new(digits.iter().map(|&d| BigUint::from(d)).collect())
    }

    pub fn digits(&self) -> &[BigUint] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.digits.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn push(&mut self, digit: BigUint) -> Result<()> {
        if digit.is_zero() {
            return Err(Error::InvalidDigit(digit.to_string()));
        }
        self.digits.push(digit);
        Ok(())
    }

    pub fn extended(&self, digit: BigUint) -> Result<Word> {
        let mut w = self.clone();
        w.push(digit)?;
        Ok(w)
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyWord)
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// Accepts `[1,2,3]`, `1,2,3` or whitespace separated digits.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mut digits = Vec::new();
        for tok in inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let tok = tok.trim_matches('"');
            let d = BigUint::from_str(tok)
                .map_err(|_| Error::invalid(format!("not a positive integer: {tok:?}")))?;
            digits.push(d);
        }
        Word::new(digits)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.digits.len()))?;
        for d in &self.digits {
            let n = serde_json::Number::from_str(&d.to_string()).map_err(serde::ser::Error::custom)?;
            seq.serialize_element(&n)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<serde_json::Value> = Vec::deserialize(deserializer)?;
        let mut digits = Vec::with_capacity(raw.len());
        for v in raw {
            let text = match v {
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::String(s) => s,
                other => return Err(serde::de::Error::custom(format!("bad digit {other}"))),
            };
            let d = BigUint::from_str(&text).map_err(serde::de::Error::custom)?;
            digits.push(d);
        }
        Word::new(digits).map_err(serde::de::Error::custom)
    }
}

/// The pair `(p_n, q_n)` of a convergent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigUint,
    pub q: BigUint,
}

impl Convergent {
    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p.clone()), BigInt::from(self.q.clone()))
    }
}

impl Serialize for Convergent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Convergent", 2)?;
        st.serialize_field("p", &self.p.to_string())?;
        st.serialize_field("q", &self.q.to_string())?;
        st.end()
    }
}

/// Runs the two-term recursion and returns `(p_k, q_k)` for `k = -1..=n`.
/// Index `i` of the result holds `k = i - 1`.
fn recursion(w: &Word) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(w.len() + 2);
    out.push(Convergent {
        p: BigUint::one(),
        q: BigUint::zero(),
    });
    out.push(Convergent {
        p: BigUint::zero(),
        q: BigUint::one(),
    });
    for a in w.digits() {
        let n = out.len();
        let (prev2, prev1) = (&out[n - 2], &out[n - 1]);
        let p = a * &prev1.p + &prev2.p;
        let q = a * &prev1.q + &prev2.q;
        out.push(Convergent { p, q });
    }
    out
}

/// All convergents `(p_1, q_1), ..., (p_n, q_n)` of a non-empty word.
pub fn convergents(w: &Word) -> Result<Vec<Convergent>> {
    w.require_nonempty()?;
    Ok(recursion(w).split_off(2))
}

/// The last two convergents `((p_{n-1}, q_{n-1}), (p_n, q_n))`.
pub fn last_two(w: &Word) -> Result<(Convergent, Convergent)> {
    w.require_nonempty()?;
    let mut all = recursion(w);
    let last = all.pop().expect("non-empty");
    let prev = all.pop().expect("k = n - 1 exists");
    Ok((prev, last))
}

/// `q_n` and `q_{n-1}` only; cheaper than a full convergent list.
pub fn denominators(w: &Word) -> Result<(BigUint, BigUint)> {
    w.require_nonempty()?;
    let mut q_prev = BigUint::zero();
    let mut q = BigUint::one();
    for a in w.digits() {
        let next = a * &q + &q_prev;
        q_prev = std::mem::replace(&mut q, next);
    }
    Ok((q, q_prev))
}

/// `[a_1, ..., a_n]` as an exact rational.
pub fn evaluate(w: &Word) -> Result<BigRational> {
    let (_, last) = last_two(w)?;
    Ok(last.value())
}

fn in_unit_interval(x: &BigRational) -> bool {
    x.is_positive() && x < &BigRational::one()
}

/// Canonical expansion of a rational in `(0, 1)` by the exact Gauss map,
/// truncated to `max_n` digits. The last digit is `>= 2` whenever the
/// expansion has length at least two.
pub fn expand(x: &BigRational, max_n: usize) -> Result<Word> {
    if !in_unit_interval(x) {
        return Err(Error::OutOfUnitInterval(fmt_rational(x)));
    }
    let num = x.numer().magnitude().clone();
    let den = x.denom().magnitude().clone();
    Ok(expand_fraction(num, den, max_n))
}

/// Gauss map on the pair `num/den` (with `0 < num < den`), written as the
/// Euclidean algorithm on `(den, num)`.
pub(crate) fn expand_fraction(mut num: BigUint, mut den: BigUint, max_n: usize) -> Word {
    let mut digits = Vec::new();
    while !num.is_zero() && digits.len() < max_n {
        let (a, r) = den.div_rem(&num);
        digits.push(a);
        den = std::mem::replace(&mut num, r);
    }
    Word { digits }
}

/// A closed interval with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn length(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Interval", 3)?;
        st.serialize_field("lo", &fmt_rational(&self.lo))?;
        st.serialize_field("hi", &fmt_rational(&self.hi))?;
        st.serialize_field("len", &fmt_rational(&self.length()))?;
        st.end()
    }
}

/// Formats a rational as `p/q` (always with a denominator).
pub fn fmt_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::invalid(format!("not a rational p/q: {t:?}"));
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| bad())?;
    let q = BigInt::from_str(q).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    Ok(BigRational::new(p, q))
}

/// The cylinder of a word: endpoints `p_n/q_n` and
/// `(p_n + p_{n-1})/(q_n + q_{n-1})`, ordered.
pub fn cylinder(w: &Word) -> Result<Interval> {
    let (prev, last) = last_two(w)?;
    let a = last.value();
    let b = BigRational::new(
        BigInt::from(&last.p + &prev.p),
        BigInt::from(&last.q + &prev.q),
    );
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    Ok(Interval { lo, hi })
}

/// `|I_n(w)| = 1 / (q_n (q_n + q_{n-1}))`, from denominators alone.
pub fn cylinder_length(w: &Word) -> Result<BigRational> {
    let (q, q_prev) = denominators(w)?;
    let den = &q * (&q + &q_prev);
    Ok(BigRational::new(BigInt::one(), BigInt::from(den)))
}

/// `ln |I_n(w)|`.
pub fn ln_cylinder_length(w: &Word) -> Result<f64> {
    let (q, q_prev) = denominators(w)?;
    let s = &q + &q_prev;
    Ok(-(crate::numeric::ln_biguint(&q) + crate::numeric::ln_biguint(&s)))
}

/// Pass/fail per inequality, each decided in exact integer arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    /// `q_n >= F_n`, the Binet lower bound.
    pub fibonacci: bool,
    /// `q_n >= phi^n / (2 sqrt 5)`, decided as `20 q_n^2 >= L_{2n}`.
    pub golden: bool,
    /// `|I_n| <= 1/q_n^2`.
    pub length_vs_q: bool,
    /// `1/q_n^2 <= 20 phi^{-2n}`; the same integer test as `golden`.
    pub q_vs_golden: bool,
    /// `(2^n prod a_k)^{-2} <= |I_n|`.
    pub product_lower: bool,
    /// `|I_n| <= (prod a_k)^{-2}`.
    pub product_upper: bool,
}

impl BoundsReport {
    pub fn all_pass(&self) -> bool {
        self.fibonacci
            && self.golden
            && self.length_vs_q
            && self.q_vs_golden
            && self.product_lower
            && self.product_upper
    }
}

/// `(F_m, L_m)` by the doubling-free linear recurrence.
pub(crate) fn fibonacci_lucas(m: usize) -> (BigUint, BigUint) {
    let (mut f0, mut f1) = (BigUint::zero(), BigUint::one());
    for _ in 0..m {
        let f2 = &f0 + &f1;
        f0 = std::mem::replace(&mut f1, f2);
    }
    // L_m = F_{m-1} + F_{m+1} = 2 F_{m-1} + F_m; with f0 = F_m, f1 = F_{m+1}
    let lucas = if m == 0 {
        BigUint::from(2u32)
    } else {
        let f_prev = &f1 - &f0;
        &f_prev + &f1
    };
    (f0, lucas)
}

/// Checks the denominator growth and cylinder length inequalities exactly.
///
/// `phi^{2n} = L_{2n} - phi^{-2n}` with `0 < phi^{-2n} < 1`, so for integers
/// `20 q^2 >= phi^{2n}` holds iff `20 q^2 >= L_{2n}`.
pub fn verify_bounds(w: &Word) -> Result<BoundsReport> {
    let (q, q_prev) = denominators(w)?;
    let n = w.len();
    let q2 = &q * &q;
    let (fib_n, _) = fibonacci_lucas(n);
    let (_, lucas_2n) = fibonacci_lucas(2 * n);
    let golden = BigUint::from(20u32) * &q2 >= lucas_2n;
    // |I| = 1/(q (q + q')); compare denominators
    let len_den = &q * (&q + &q_prev);
    let prod: BigUint = w.digits().iter().product();
    let prod2 = &prod * &prod;
    let four_n = BigUint::one() << (2 * n);
    Ok(BoundsReport {
        fibonacci: q >= fib_n,
        golden,
        length_vs_q: len_den >= q2,
        q_vs_golden: golden,
        product_lower: len_den <= four_n * &prod2,
        product_upper: len_den >= prod2,
    })
}
