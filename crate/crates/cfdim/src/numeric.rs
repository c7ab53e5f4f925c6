//! Log-domain helpers shared by the estimators: compensated summation,
//! log-sum-exp accumulation, logarithms of big integers and rationals.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn scale(&mut self, factor: f64) {
        self.sum *= factor;
        self.comp *= factor;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Accumulates `log(sum_i exp(x_i))` without overflow. The terms are kept
/// relative to the running maximum and summed with compensation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSum {
    max: f64,
    scaled: CompensatedSum,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: CompensatedSum::new(),
        }
    }

    pub fn add_log(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.scaled.add((x - self.max).exp());
        } else {
            if self.max.is_finite() {
                self.scaled.scale((self.max - x).exp());
            }
            self.max = x;
            self.scaled.add(1.0);
        }
    }

    pub fn merge(&mut self, other: &LogSum) {
        if other.max == f64::NEG_INFINITY {
            return;
        }
        if self.max == f64::NEG_INFINITY {
            *self = *other;
            return;
        }
        let (hi, lo) = if self.max >= other.max {
            (*self, *other)
        } else {
            (*other, *self)
        };
        let mut out = hi;
        out.scaled.add(lo.scaled.value() * (lo.max - hi.max).exp());
        *self = out;
    }

    pub fn is_empty(&self) -> bool {
        self.max == f64::NEG_INFINITY
    }

    /// `log` of the accumulated sum; `-inf` when nothing was added.
    pub fn value(&self) -> f64 {
        if self.is_empty() {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.value().ln()
        }
    }
}

/// A positive real carried by its natural logarithm, for magnitudes that
/// overflow `f64` (cardinality bounds, factorials).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct LogValue {
    ln: f64,
}

impl LogValue {
    pub fn from_ln(ln: f64) -> Self {
        Self { ln }
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    /// The value itself; `inf` when it overflows.
    pub fn to_f64(&self) -> f64 {
        self.ln.exp()
    }
}

/// Natural logarithm of a big unsigned integer (`-inf` for zero).
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    if !x.is_positive() {
        return if x.is_zero() { f64::NEG_INFINITY } else { f64::NAN };
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

/// Prefix table `ln(0!), ln(1!), ..., ln(n!)` built from summed logarithms.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = CompensatedSum::new();
    out.push(0.0);
    for k in 1..=n {
        acc.add((k as f64).ln());
        out.push(acc.value());
    }
    out
}

/// `floor(base^exp)` for a positive integer base, with exact integer powers
/// handled without rounding. Ties at integer powers resolve downward.
pub fn floor_pow(base: u64, exp: f64) -> u64 {
    if exp == exp.trunc() && (0.0..64.0).contains(&exp) {
        if let Some(v) = base.checked_pow(exp as u32) {
            return v;
        }
    }
    let approx = (base as f64).powf(exp);
    let mut m = approx.floor() as u64;
    // correct one-off rounding by comparing logarithms
    let target = exp * (base as f64).ln();
    while m > 0 && (m as f64).ln() > target + 1e-15 * target.abs().max(1.0) {
        m -= 1;
    }
    while ((m + 1) as f64).ln() <= target - 1e-15 * target.abs().max(1.0) {
        m += 1;
    }
    m
}

/// `ceil(base^exp)`; exact for integer exponents.
pub fn ceil_pow(base: u64, exp: f64) -> u64 {
    if exp == exp.trunc() && (0.0..64.0).contains(&exp) {
        if let Some(v) = base.checked_pow(exp as u32) {
            return v;
        }
    }
    let f = floor_pow(base, exp);
    let target = exp * (base as f64).ln();
    if f > 0 && ((f as f64).ln() - target).abs() <= 1e-15 * target.abs().max(1.0) {
        f
    } else {
        f + 1
    }
}

/// Parse a decimal literal such as `12`, `-3.25` or `1.5e-3` into an exact
/// rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    use num_bigint::BigInt;
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    if neg {
        value = -value;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        BigRational::from_integer(value * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(value, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

/// Decimal text for a real, with `inf`, `-inf` and `nan` spelled out.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}

/// Splits a finite non-negative `x` into `m * 2^e` exactly.
fn decode(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    }
}

/// Bits needed for `floor(exp(x))`.
pub fn exp_bits(x: f64) -> u64 {
    (x * std::f64::consts::LOG2_E).floor() as u64 + 1
}

/// `floor(exp(x))` for the exact binary value of a finite `x >= 0`.
///
/// Fixed-point Taylor series on `x / 2^s`, squared `s` times, with guard
/// bits doubled until the fractional part is clear of the error bound. The
/// result is never an integer for `x > 0`, so the loop terminates.
pub fn floor_exp(x: f64) -> BigUint {
    assert!(x.is_finite() && x >= 0.0, "floor_exp needs a finite x >= 0, got {x}");
    if x == 0.0 {
        return BigUint::from(1u32);
    }
    let b = exp_bits(x);
    let s = (x.log2().ceil().max(0.0) as u64) + 10 + ((b as f64).sqrt() as u64) / 2;
    let (m, e) = decode(x);
    let mut extra = 64u64;
    loop {
        let f = b + s + extra;
        let shift = e + f as i64 - s as i64;
        let y = if shift >= 0 {
            BigUint::from(m) << shift as u64
        } else {
            BigUint::from(m) >> (-shift) as u64
        };
        let one = BigUint::from(1u32) << f;
        let mut sum = one.clone();
        let mut term = one;
        let mut k = 1u64;
        loop {
            term = (&term * &y) >> f;
            term /= k;
            if term.is_zero() {
                break;
            }
            sum += &term;
            k += 1;
        }
        for _ in 0..s {
            sum = (&sum * &sum) >> f;
        }
        let int = &sum >> f;
        let frac = &sum - (&int << f);
        let margin = BigUint::from(1u32) << (b + s + 4 + (64 - (k + s + 2).leading_zeros() as u64));
        let top = BigUint::from(1u32) << f;
        if frac > margin && frac + &margin < top {
            return int;
        }
        extra *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logsum_matches_direct_sum() {
        let xs = [0.1f64, 2.0, -3.0, 5.5, 1.0];
        let mut acc = LogSum::new();
        for &x in &xs {
            acc.add_log(x);
        }
        let direct: f64 = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((acc.value() - direct).abs() < 1e-14);
    }

    #[test]
    fn logsum_survives_huge_terms() {
        let mut acc = LogSum::new();
        acc.add_log(1000.0);
        acc.add_log(1000.0);
        assert!((acc.value() - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn logsum_merge_is_consistent() {
        let mut a = LogSum::new();
        let mut b = LogSum::new();
        let mut all = LogSum::new();
        for i in 0..50 {
            let x = (i as f64 * 0.37).sin() * 40.0;
            if i % 3 == 0 {
                a.add_log(x)
            } else {
                b.add_log(x)
            }
            all.add_log(x);
        }
        a.merge(&b);
        assert!((a.value() - all.value()).abs() < 1e-12);
        let mut empty = LogSum::new();
        empty.merge(&LogSum::new());
        assert!(empty.is_empty());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(1e16);
        for _ in 0..1000 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 1000.0);
    }

    #[test]
    fn ln_of_huge_integer() {
        let x = BigUint::from(1u32) << 5000u32;
        assert!((ln_biguint(&x) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(ln_biguint(&BigUint::from(1u32)), 0.0);
    }

    #[test]
    fn factorial_logs() {
        let t = ln_factorials(20);
        assert!((t[5] - 120f64.ln()).abs() < 1e-13);
        assert!((t[20] - 2432902008176640000f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn integer_powers_floor_and_ceil() {
        assert_eq!(floor_pow(3, 2.0), 9);
        assert_eq!(ceil_pow(3, 2.0), 9);
        assert_eq!(floor_pow(12, 2.05), 163);
        assert_eq!(ceil_pow(2, 0.99), 2);
        assert_eq!(floor_pow(3, 1.01), 3);
        assert_eq!(ceil_pow(12, 1.95), 128);
        assert_eq!(floor_pow(1, 7.3), 1);
    }

    #[test]
    fn decimal_parsing() {
        let r = parse_decimal("1.25").unwrap();
        assert_eq!(r, BigRational::new(5.into(), 4.into()));
        assert_eq!(parse_decimal("3e2").unwrap(), BigRational::from_integer(300.into()));
        assert_eq!(
            parse_decimal("-2.5e-1").unwrap(),
            BigRational::new((-1).into(), 4.into())
        );
        assert!(parse_decimal("abc").is_none());
        assert!(parse_decimal(".").is_none());
    }

    #[test]
    fn floor_exp_matches_small_cases() {
        assert_eq!(floor_exp(0.0), BigUint::from(1u32));
        assert_eq!(floor_exp(1.0), BigUint::from(2u32));
        let expected = [2u64, 7, 20, 54, 148, 403, 1096, 2980, 8103, 22026];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(floor_exp((i + 1) as f64), BigUint::from(e));
        }
    }

    #[test]
    fn floor_exp_against_decimal_goldens() {
        // 200-digit decimal evaluations of exp at the binary value of x
        let golden = [
            (30.5, "17619017951355"),
            (33.25, "275607811973959"),
            (36.0, "4311231547115195"),
            (40.125, "266726450991091330"),
            (100.0, "26881171418161354484126255515800135873611118"),
            (123.456, "413294435277810613583395097461046025716622844945789269"),
        ];
        for (x, want) in golden {
            assert_eq!(floor_exp(x).to_string(), want, "x = {x}");
            assert_eq!(floor_exp(x).bits(), exp_bits(x));
        }
    }
}
