//! Covering sums `sum |I_k(w)|^s` over word families, their critical
//! exponent, and a Monte Carlo look at the growth of typical digits.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cf::{self, Word};
use crate::enumeration::{bound_a_k, bound_c_k, FamilySpec, FamilyTemplate};
use crate::error::{Error, Result};
use crate::numeric::{fmt_real, ln_biguint, LogSum};

/// How a covering sum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CoverMode {
    /// every word, with its exact cylinder length
    #[default]
    Exact,
    /// cardinality bound times the largest admissible length
    BoundProduct,
    /// `sum (a_1 ... a_k)^(-2s)` by a recursion over the last digit; an
    /// upper bound on the exact sum that needs no enumeration
    DigitProduct,
}

impl std::str::FromStr for CoverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CoverMode::Exact),
            "bound" | "bound-product" => Ok(CoverMode::BoundProduct),
            "digit-product" => Ok(CoverMode::DigitProduct),
            other => Err(Error::invalid(format!(
                "unknown mode {other:?} (exact, bound-product, digit-product)"
            ))),
        }
    }
}

fn ser_family<S: Serializer>(f: &FamilySpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(f)
}

fn ser_real<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_real(*x))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverSumResult {
    #[serde(serialize_with = "ser_family")]
    pub family: FamilySpec,
    pub k: usize,
    #[serde(serialize_with = "ser_real")]
    pub s: f64,
    /// natural log of the sum
    #[serde(serialize_with = "ser_real")]
    pub log_sum: f64,
    pub mode: CoverMode,
}

/// A prepared family: everything `cover_sum` needs at any exponent.
#[derive(Debug, Clone)]
pub struct Cover {
    family: FamilySpec,
    mode: CoverMode,
    kind: CoverKind,
}

#[derive(Debug, Clone)]
enum CoverKind {
    /// `log |I_k(w)|` for every member
    Lengths(Vec<f64>),
    /// `log #family` and `log` of the largest cylinder length
    Bound { ln_count: f64, ln_max_len: f64 },
    /// non-decreasing words: admissible digit ranges per position
    Ladder { lows: Vec<u64>, ceiling: u64 },
    /// all words over a digit set
    Free { digits: Vec<u64>, k: usize },
}

const CHUNK: usize = 1 << 14;

impl Cover {
    /// Prepares `family`; exact mode enumerates it once, within
    /// `budget_words`.
    pub fn new(family: &FamilySpec, mode: CoverMode, budget_words: Option<u64>) -> Result<Self> {
        let kind = match mode {
            CoverMode::Exact => {
                family.check_budget(budget_words)?;
                CoverKind::Lengths(ln_lengths(family))
            }
            CoverMode::BoundProduct => bound_kind(family),
            CoverMode::DigitProduct => match &family.template {
                FamilyTemplate::Bounded { digits } => CoverKind::Free { digits: digits.clone(), k: family.k },
                _ => CoverKind::Ladder { lows: family.lower_bounds(), ceiling: family.ceiling() },
            },
        };
        Ok(Cover { family: family.clone(), mode, kind })
    }

    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    pub fn mode(&self) -> CoverMode {
        self.mode
    }

    /// `log sum |I_k|^s` (or its bound, per mode).
    pub fn log_sum(&self, s: f64) -> f64 {
        match &self.kind {
            CoverKind::Lengths(lens) => {
                let parts: Vec<LogSum> = lens
                    .par_chunks(CHUNK)
                    .map(|chunk| {
                        let mut acc = LogSum::new();
                        for &l in chunk {
                            acc.add_log(s * l);
                        }
                        acc
                    })
                    .collect();
                let mut total = LogSum::new();
                for p in &parts {
                    total.merge(p);
                }
                total.value()
            }
            CoverKind::Bound { ln_count, ln_max_len } => ln_count + s * ln_max_len,
            CoverKind::Ladder { lows, ceiling } => ladder_log_sum(lows, *ceiling, s),
            CoverKind::Free { digits, k } => {
                let mut one = LogSum::new();
                for &d in digits {
                    one.add_log(-2.0 * s * (d as f64).ln());
                }
                *k as f64 * one.value()
            }
        }
    }

    pub fn result(&self, s: f64) -> CoverSumResult {
        CoverSumResult {
            family: self.family.clone(),
            k: self.family.k,
            s,
            log_sum: self.log_sum(s),
            mode: self.mode,
        }
    }
}

/// `log |I_k(w)|` for every member, in enumeration order. Work is split by
/// first digit; the concatenation order does not depend on scheduling.
fn ln_lengths(family: &FamilySpec) -> Vec<f64> {
    let firsts: Vec<u64> = family.alphabet().into_iter().filter(|&d| d >= family.lower(1)).collect();
    let parts: Vec<Vec<f64>> = firsts
        .par_iter()
        .map(|&first| {
            let mut it = family.enumerate_with_first(first);
            let mut out = Vec::new();
            while let Some(ds) = it.next_digits() {
                out.push(ln_length_u64(&ds));
            }
            out
        })
        .collect();
    parts.concat()
}

/// `-log(q_n (q_n + q_{n-1}))` with `u128` arithmetic, falling back to big
/// integers on overflow.
fn ln_length_u64(ds: &[u64]) -> f64 {
    let (mut q_prev, mut q) = (0u128, 1u128);
    for &a in ds {
        match (a as u128).checked_mul(q).and_then(|x| x.checked_add(q_prev)) {
            Some(next) => {
                q_prev = q;
                q = next;
            }
            None => {
                let w = Word::from_u64s(ds).expect("family digits are >= 1");
                return cf::ln_cylinder_length(&w).expect("non-empty word");
            }
        }
    }
    match q.checked_add(q_prev).and_then(|s| s.checked_mul(q)) {
        Some(prod) => -(prod as f64).ln(),
        None => -((q as f64).ln() + ((q + q_prev) as f64).ln()),
    }
}

fn bound_kind(family: &FamilySpec) -> CoverKind {
    let k = family.k;
    let ln_count = match &family.template {
        FamilyTemplate::A { alpha2, eps, .. } => bound_a_k(k, *alpha2, *eps).ln(),
        FamilyTemplate::C { alpha, eps } => bound_c_k(k, *alpha, *eps).ln(),
        _ => ln_biguint(&family.count()),
    };
    // |I_k| <= (a_1 ... a_k)^-2 and |I_k| <= 20 phi^(-2k)
    let ln_prod: f64 = family.lower_bounds().iter().map(|&d| (d as f64).ln()).sum();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let golden = 20f64.ln() - 2.0 * k as f64 * phi.ln();
    CoverKind::Bound { ln_count, ln_max_len: (-2.0 * ln_prod).min(golden) }
}

/// `log sum (a_1 ... a_k)^(-2s)` over non-decreasing words with
/// `lows[j] <= a_j <= ceiling`.
fn ladder_log_sum(lows: &[u64], ceiling: u64, s: f64) -> f64 {
    if lows.iter().any(|&l| l > ceiling) {
        return f64::NEG_INFINITY;
    }
    let width = ceiling as usize;
    let weight: Vec<f64> = (1..=ceiling).map(|d| -2.0 * s * (d as f64).ln()).collect();
    // f[d-1] = log of the sum over prefixes ending in digit d
    let mut f: Vec<f64> = (1..=ceiling)
        .map(|d| if d >= lows[0] { weight[d as usize - 1] } else { f64::NEG_INFINITY })
        .collect();
    for &low in &lows[1..] {
        let mut prefix = LogSum::new();
        for i in 0..width {
            prefix.add_log(f[i]);
            f[i] = if (i + 1) as u64 >= low { prefix.value() + weight[i] } else { f64::NEG_INFINITY };
        }
    }
    let mut total = LogSum::new();
    for v in f {
        total.add_log(v);
    }
    total.value()
}

/// One-shot covering sum.
pub fn cover_sum(family: &FamilySpec, s: f64, mode: CoverMode, budget_words: Option<u64>) -> Result<CoverSumResult> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::invalid(format!("exponent s must lie in (0, 1], got {s}")));
    }
    Ok(Cover::new(family, mode, budget_words)?.result(s))
}

/// The exact total length of the depth-`k` cylinders of `family`.
pub fn exact_length_sum(family: &FamilySpec, budget_words: Option<u64>) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for w in family.enumerate(budget_words)? {
        total += cf::cylinder_length(&w)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalExponent {
    #[serde(serialize_with = "ser_family")]
    pub family: FamilySpec,
    pub k: usize,
    pub mode: CoverMode,
    #[serde(serialize_with = "ser_real")]
    pub s_star: f64,
    #[serde(serialize_with = "ser_bracket")]
    pub bracket: (f64, f64),
    pub iterations: u32,
}

fn ser_bracket<S: Serializer>(b: &(f64, f64), s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq([fmt_real(b.0), fmt_real(b.1)])
}

/// An initial guess for the crossing, where the family has one.
fn warm_start(template: &FamilyTemplate) -> Option<f64> {
    match template {
        FamilyTemplate::A { alpha1, alpha2, eps } if alpha1 > eps => {
            Some((alpha2 + 2.0 * eps - 1.0) / (2.0 * (alpha1 - eps)))
        }
        FamilyTemplate::C { alpha, .. } if *alpha >= 1.0 => Some((alpha - 1.0) / (2.0 * alpha)),
        _ => None,
    }
}

/// Bisects `s` in `[tol, 1]` for the crossing `log_sum(s) = 0`, to width
/// `tol`. Fails when the sum does not cross 1 in that range.
pub fn critical_exponent(cover: &Cover, tol: f64) -> Result<CriticalExponent> {
    if !(tol > 0.0 && tol < 0.5) {
        return Err(Error::invalid(format!("tolerance must lie in (0, 0.5), got {tol}")));
    }
    let family = cover.family();
    let (mut lo, mut hi) = (tol, 1.0);
    let at_hi = cover.log_sum(hi);
    if at_hi >= 0.0 {
        return Err(Error::Bracket(format!(
            "{family}: the sum is {} >= 1 at s = 1",
            fmt_real(at_hi.exp())
        )));
    }
    let at_lo = cover.log_sum(lo);
    if at_lo <= 0.0 {
        return Err(Error::Bracket(format!(
            "{family}: the sum stays below 1 for every s in [{tol}, 1]"
        )));
    }
    let mut iterations = 0;
    if let Some(g) = warm_start(&family.template).filter(|g| *g > lo && *g < hi) {
        iterations += 1;
        if cover.log_sum(g) > 0.0 {
            lo = g;
        } else {
            hi = g;
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        if cover.log_sum(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalExponent {
        family: family.clone(),
        k: family.k,
        mode: cover.mode(),
        s_star: 0.5 * (lo + hi),
        bracket: (lo, hi),
        iterations,
    })
}

/// Per-sample tail statistic `max_{N/2 <= n <= N} log a_n / log n`.
fn tail_statistic(w: &Word, n: usize) -> f64 {
    let lo = (n / 2).max(2);
    (lo..=n.min(w.len()))
        .map(|k| ln_biguint(&w.digits()[k - 1]) / (k as f64).ln())
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McStats {
    pub samples: usize,
    pub n: usize,
    pub seed: u64,
    /// draws whose expansion ended before `N` digits and were redrawn
    pub redrawn: u64,
    #[serde(serialize_with = "ser_real")]
    pub median: f64,
    #[serde(serialize_with = "ser_real")]
    pub q10: f64,
    #[serde(serialize_with = "ser_real")]
    pub q25: f64,
    #[serde(serialize_with = "ser_real")]
    pub q75: f64,
    #[serde(serialize_with = "ser_real")]
    pub q90: f64,
    #[serde(skip)]
    pub values: Vec<f64>,
}

/// Seed of the `i`-th sample's generator.
fn sample_seed(seed: u64, i: u64) -> u64 {
    seed ^ i.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let i = h.floor() as usize;
    if i + 1 >= sorted.len() {
        sorted[sorted.len() - 1]
    } else {
        sorted[i] + (h - i as f64) * (sorted[i + 1] - sorted[i])
    }
}

fn one_sample(seed: u64, i: u64, n: usize) -> (f64, u64) {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(sample_seed(seed, i));
    let bits = 4 * n;
    let den = BigUint::from(1u32) << bits;
    let mut redrawn = 0;
    loop {
        let words: Vec<u64> = (0..bits.div_ceil(64)).map(|_| rng.next_u64()).collect();
        let mut num = BigUint::from_slice(
            &words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<u32>>(),
        );
        num &= &den - 1u32;
        if num.is_zero() {
            redrawn += 1;
            continue;
        }
        let w = cf::expand_fraction(num, den.clone(), n);
        if w.len() < n {
            redrawn += 1;
            continue;
        }
        return (tail_statistic(&w, n), redrawn);
    }
}

/// Draws `samples` uniform dyadic rationals `m / 2^(4N)`, expands each to
/// `N` partial quotients and reports quantiles of the tail statistic. The
/// statistic tends to 1 only slowly in `N`. Each sample has its own
/// generator seeded from `(seed, index)`, so results do not depend on the
/// thread count.
pub fn mc_growth_law(samples: usize, n: usize, seed: u64) -> Result<McStats> {
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    if n < 100 {
        return Err(Error::invalid("mc-growth needs N >= 100"));
    }
    let draws: Vec<(f64, u64)> = (0..samples as u64).into_par_iter().map(|i| one_sample(seed, i, n)).collect();
    let redrawn = draws.iter().map(|d| d.1).sum();
    let values: Vec<f64> = draws.into_iter().map(|d| d.0).collect();
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(McStats {
        samples,
        n,
        seed,
        redrawn,
        median: quantile(&sorted, 0.5),
        q10: quantile(&sorted, 0.1),
        q25: quantile(&sorted, 0.25),
        q75: quantile(&sorted, 0.75),
        q90: quantile(&sorted, 0.9),
        values,
    })
}

/// The deterministic path: the statistic for one given rational, over the
/// digits it has.
pub fn mc_fixed(x: &BigRational, n: usize) -> Result<(Word, f64)> {
    let w = cf::expand(x, n)?;
    let stat = tail_statistic(&w, w.len());
    Ok((w, stat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn family(text: &str) -> FamilySpec {
        text.parse().unwrap()
    }

    #[test]
    fn single_word_family() {
        let f = family("bounded:digits=1,k=7");
        let w = Word::from_u64s(&[1; 7]).unwrap();
        let want = cf::ln_cylinder_length(&w).unwrap();
        for s in [0.1, 0.5, 1.0] {
            let r = cover_sum(&f, s, CoverMode::Exact, None).unwrap();
            assert!((r.log_sum - s * want).abs() < 1e-12);
        }
    }

    #[test]
    fn d_two_two_at_one_matches_rational_oracle() {
        let f = FamilySpec::d(2, 2).unwrap();
        // [1,1]: q = 2, 1 -> 1/6; [1,2]: q = 3, 1 -> 1/12; [2,2]: q = 5, 2 -> 1/35
        let oracle = BigRational::new(1.into(), 6.into())
            + BigRational::new(1.into(), 12.into())
            + BigRational::new(1.into(), 35.into());
        assert_eq!(exact_length_sum(&f, None).unwrap(), oracle);
        let r = cover_sum(&f, 1.0, CoverMode::Exact, None).unwrap();
        assert!((r.log_sum - oracle.to_f64().unwrap().ln()).abs() < 1e-14);
    }

    #[test]
    fn exact_sum_at_one_matches_rational_sum() {
        for l in 1..=5 {
            for n in 1..=5 {
                let f = FamilySpec::d(l, n).unwrap();
                let exact = exact_length_sum(&f, None).unwrap().to_f64().unwrap().ln();
                let r = cover_sum(&f, 1.0, CoverMode::Exact, None).unwrap();
                assert!((r.log_sum - exact).abs() < 1e-13, "l={l} n={n}");
            }
        }
    }

    #[test]
    fn bounds_dominate_exact() {
        let f = family("C:alpha=1,eps=0.2,k=5");
        for s in [0.2, 0.5, 0.8, 1.0] {
            let exact = cover_sum(&f, s, CoverMode::Exact, None).unwrap().log_sum;
            let bound = cover_sum(&f, s, CoverMode::BoundProduct, None).unwrap().log_sum;
            let digit = cover_sum(&f, s, CoverMode::DigitProduct, None).unwrap().log_sum;
            assert!(bound >= exact && digit >= exact, "s={s}: {exact} {bound} {digit}");
        }
    }

    #[test]
    fn digit_product_matches_enumerated_products() {
        for text in ["A:alpha=1.5,eps=0.1,k=5", "C:alpha=1.2,eps=0.1,k=6", "bounded:digits=1,3,4,k=4", "D:l=4,n=4"] {
            let f = family(text);
            for s in [0.3, 0.7] {
                let mut oracle = LogSum::new();
                let mut it = f.enumerate(None).unwrap();
                while let Some(ds) = it.next_digits() {
                    oracle.add_log(-2.0 * s * ds.iter().map(|&d| (d as f64).ln()).sum::<f64>());
                }
                let got = cover_sum(&f, s, CoverMode::DigitProduct, None).unwrap().log_sum;
                assert!((got - oracle.value()).abs() < 1e-12, "{text} s={s}");
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let f = family("bounded:digits=1,2,k=12");
        assert!(cover_sum(&f, 0.5, CoverMode::Exact, Some(100)).unwrap_err().is_budget());
    }

    #[test]
    fn all_ones_has_no_crossing() {
        let cover = Cover::new(&FamilySpec::d(1, 8).unwrap(), CoverMode::Exact, None).unwrap();
        assert!(matches!(critical_exponent(&cover, 1e-4), Err(Error::Bracket(_))));
    }

    #[test]
    fn bisection_brackets_the_crossing() {
        let cover = Cover::new(&family("bounded:digits=1,2,k=8"), CoverMode::Exact, None).unwrap();
        let c = critical_exponent(&cover, 1e-4).unwrap();
        assert!(c.bracket.1 - c.bracket.0 <= 1e-4);
        assert!(cover.log_sum(c.bracket.0) > 0.0 && cover.log_sum(c.bracket.1) <= 0.0);
    }

    #[test]
    fn fixed_debug_path() {
        let x = BigRational::new(7.into(), 10.into());
        let (w, stat) = mc_fixed(&x, 100).unwrap();
        assert_eq!(w, Word::from_u64s(&[1, 2, 3]).unwrap());
        assert_eq!(stat, 1.0);
    }

    #[test]
    fn mc_is_reproducible() {
        let a = mc_growth_law(20, 100, 7).unwrap();
        let b = mc_growth_law(20, 100, 7).unwrap();
        assert_eq!(a.values, b.values);
        assert_ne!(a.values, mc_growth_law(20, 100, 8).unwrap().values);
    }

    proptest! {
        #[test]
        fn cover_sum_decreases_in_s(l in 1u64..6, n in 1usize..6, s in 0.05f64..0.95, ds in 0.01f64..0.05) {
            let f = FamilySpec::d(l, n).unwrap();
            let cover = Cover::new(&f, CoverMode::Exact, None).unwrap();
            prop_assert!(cover.log_sum(s + ds) < cover.log_sum(s));
        }
    }
}
