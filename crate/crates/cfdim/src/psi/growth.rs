//! Finite-horizon proxies for the growth constants of `psi` and the dimension
//! formulas built from them.
//!
//! Every `liminf`/`limsup` is replaced by a min/max over a tail window
//! (by default `[h/2, h]`) and reported at three horizons `h = N/4, N/2, N`
//! so the reader can see which way the estimate is moving. Nothing here
//! decides a limit silently: each estimate carries its [`LimitShape`].

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::PsiSpec;
use crate::error::{Error, Result};
use crate::numeric::{fmt_real, ln_factorials, ln_rational, CompensatedSum, LogSum};

/// Which tail window stands in for `n -> infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Window {
    /// `[h/2, h]`
    #[default]
    Half,
    /// `[h - ceil(sqrt h), h]`, for heavily oscillating inputs
    Sqrt,
}

impl Window {
    pub(crate) fn range(self, h: u64) -> (u64, u64) {
        let lo = match self {
            Window::Half => h / 2,
            Window::Sqrt => h - ((h as f64).sqrt().ceil() as u64).min(h - 1),
        };
        (lo.max(2), h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthOptions {
    /// Regime tolerance: a trend moving by more than `10 * tol` (relative)
    /// per doubling of the horizon counts as moving.
    pub tol: f64,
    pub window: Window,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions { tol: 1e-3, window: Window::Half }
    }
}

/// How a three-point trend behaves as the horizon doubles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitShape {
    /// Last step moved by at most `10 * tol` relative.
    Settled,
    /// Shrinking geometrically toward zero, or already within `tol` of it.
    Vanishing,
    /// Growing by more than `10 * tol` relative at both steps.
    Diverging,
    Uncertain,
}

impl LimitShape {
    pub fn classify(trend: [f64; 3], tol: f64) -> LimitShape {
        let [t1, t2, t3] = trend;
        let moving = 10.0 * tol;
        if t3.is_infinite() && t3 > 0.0 {
            return LimitShape::Diverging;
        }
        if t3.abs() <= tol || (t1 > 0.0 && t2 > 0.0 && t3 > 0.0 && t2 < 0.8 * t1 && t3 < 0.8 * t2) {
            return LimitShape::Vanishing;
        }
        if t1 > 0.0 && t2 > t1 * (1.0 + moving) && t3 > t2 * (1.0 + moving) {
            return LimitShape::Diverging;
        }
        if (t3 - t2).abs() <= moving * t3.abs().max(f64::MIN_POSITIVE) {
            return LimitShape::Settled;
        }
        LimitShape::Uncertain
    }
}

/// A finite-horizon estimate: value at the full horizon, its logarithm, and
/// the values at `N/4, N/2, N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub ln: f64,
    pub trend: [f64; 3],
    pub shape: LimitShape,
}

impl Estimate {
    fn from_trend(trend: [f64; 3], shape_of: [f64; 3], tol: f64) -> Self {
        let value = trend[2];
        Estimate {
            value,
            ln: value.ln(),
            trend,
            shape: LimitShape::classify(shape_of, tol),
        }
    }

    /// Built from log-values `ln X` at the three horizons; the shape is that
    /// of `ln X` (so `Vanishing` means `X -> 1`).
    fn from_ln_trend(ln_trend: [f64; 3], tol: f64) -> Self {
        let trend = ln_trend.map(f64::exp);
        Estimate {
            value: trend[2],
            ln: ln_trend[2],
            trend,
            shape: LimitShape::classify(ln_trend, tol),
        }
    }
}

impl Serialize for Estimate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Estimate", 4)?;
        st.serialize_field("value", &fmt_real(self.value))?;
        st.serialize_field("ln", &fmt_real(self.ln))?;
        st.serialize_field("trend", &self.trend.map(fmt_real))?;
        st.serialize_field("shape", &self.shape)?;
        st.end()
    }
}

/// Growth constants of `psi` at horizon `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub horizon: u64,
    pub window: Window,
    /// median of `psi(n) / log n` over the window
    pub alpha: Estimate,
    /// `exp(min_n log psi(n) / n)`
    pub a: Estimate,
    /// `exp(max_n log psi(n) / n)`
    pub b: Estimate,
    /// `1 + max_n psi(n+1) / (psi(1) + ... + psi(n))`; its shape is that of `C - 1`
    pub c: Estimate,
    /// same proxy as `a`
    pub gamma: Estimate,
    /// median of `psi(n) / n`, for the linear-growth clause
    pub linear: Estimate,
    /// tail minimum of `log psi` at the three horizons
    pub ln_tail_min: [f64; 3],
    /// `psi(n) -> infinity` judged from the tail minimum
    pub tends_to_infinity: bool,
    /// soft check of `A <= B <= C` on the finite proxies
    pub chain_holds: bool,
}

fn horizons(n: u64) -> [u64; 3] {
    [n / 4, n / 2, n]
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len();
    if m % 2 == 1 {
        xs[m / 2]
    } else {
        0.5 * (xs[m / 2 - 1] + xs[m / 2])
    }
}

/// Computes the windowed proxies of `alpha`, `A`, `B`, `C`, `gamma` from
/// `psi(1..=N)`. `C` uses the window `[h/2, h-1]` so that `psi(n+1)` stays
/// inside the horizon.
pub fn growth_constants(spec: &PsiSpec, n: u64, opts: &GrowthOptions) -> Result<GrowthReport> {
    if n < 16 {
        return Err(Error::invalid("growth constants need a horizon N >= 16"));
    }
    if let Some(max) = spec.max_n() {
        if max < n {
            return Err(Error::TableIndex { n, len: max as usize });
        }
    }
    let tol = opts.tol;
    let idx = |k: u64| k as usize - 1;
    let ln_psi = spec.ln_values(n)?;
    let log_rate: Vec<f64> = (1..=n).map(|k| spec.log_rate(k)).collect::<Result<_>>()?;
    let ratio_log: Vec<f64> = (2..=n).map(|k| spec.ratio_to_log(k)).collect::<Result<_>>()?;
    let ratio_n: Vec<f64> = (1..=n).map(|k| spec.ratio_to_n(k)).collect::<Result<_>>()?;

    // ln of psi(n+1) / (psi(1) + ... + psi(n)) for n = 1..N-1
    let ln_sum_ratio: Vec<f64> = match spec {
        PsiSpec::Table(t) => {
            let vals = t.values();
            let mut prefix = BigRational::from_integer(0.into());
            let mut out = Vec::with_capacity(n as usize);
            for k in 1..n as usize {
                prefix += &vals[k - 1];
                out.push(ln_rational(&vals[k]) - ln_rational(&prefix));
            }
            out
        }
        _ => {
            let mut acc = LogSum::new();
            let mut out = Vec::with_capacity(n as usize);
            for k in 1..n as usize {
                acc.add_log(ln_psi[k - 1]);
                out.push(ln_psi[k] - acc.value());
            }
            out
        }
    };

    let hs = horizons(n);
    let mut alpha_t = [0.0; 3];
    let mut ln_a_t = [0.0; 3];
    let mut ln_b_t = [0.0; 3];
    let mut c_minus_one_t = [0.0; 3];
    let mut lin_t = [0.0; 3];
    let mut tail_min = [0.0; 3];
    for (i, &h) in hs.iter().enumerate() {
        let (lo, hi) = opts.window.range(h);
        alpha_t[i] = median((lo..=hi).map(|k| ratio_log[k as usize - 2]).collect());
        lin_t[i] = median((lo..=hi).map(|k| ratio_n[idx(k)]).collect());
        let rates = (lo..=hi).map(|k| log_rate[idx(k)]);
        ln_a_t[i] = rates.clone().fold(f64::INFINITY, f64::min);
        ln_b_t[i] = rates.fold(f64::NEG_INFINITY, f64::max);
        let c_max = (lo..hi)
            .map(|k| ln_sum_ratio[idx(k)])
            .fold(f64::NEG_INFINITY, f64::max);
        c_minus_one_t[i] = c_max.exp();
        tail_min[i] = (lo..=hi).map(|k| ln_psi[idx(k)]).fold(f64::INFINITY, f64::min);
    }

    let alpha = Estimate::from_trend(alpha_t, alpha_t, tol);
    let mut a = Estimate::from_ln_trend(ln_a_t, tol);
    let mut b = Estimate::from_ln_trend(ln_b_t, tol);
    if let PsiSpec::Expo(base) = spec {
        // exp(ln b) need not round-trip
        for e in [&mut a, &mut b] {
            e.value = *base;
            e.trend = [*base; 3];
        }
    }
    let c_trend = c_minus_one_t.map(|x| 1.0 + x);
    let c = Estimate::from_trend(c_trend, c_minus_one_t, tol);
    let linear = Estimate::from_trend(lin_t, lin_t, tol);
    let tends_to_infinity = tail_min[2] > tail_min[1] && tail_min[1] > tail_min[0];
    let chain_holds = a.value <= b.value && b.value <= c.value;
    Ok(GrowthReport {
        horizon: n,
        window: opts.window,
        alpha,
        a,
        b,
        gamma: a,
        c,
        linear,
        ln_tail_min: tail_min,
        tends_to_infinity,
        chain_holds,
    })
}

/// The windowed `limsup` of
/// `(2 log (n+1)! + log t_{n+1}) / (log t_1 + ... + log t_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiReport {
    pub horizon: u64,
    pub value: f64,
    pub trend: [f64; 3],
    pub shape: LimitShape,
}

impl Serialize for XiReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("XiReport", 4)?;
        st.serialize_field("horizon", &self.horizon)?;
        st.serialize_field("xi", &fmt_real(self.value))?;
        st.serialize_field("trend", &self.trend.map(fmt_real))?;
        st.serialize_field("shape", &self.shape)?;
        st.end()
    }
}

/// `xi` from integer terms `t_1, ..., t_{N+1}` (all `>= 2`).
pub fn xi(t: &[num_bigint::BigUint], n: u64) -> Result<XiReport> {
    let two = num_bigint::BigUint::from(2u32);
    if let Some(i) = t.iter().position(|x| x < &two) {
        return Err(Error::invalid(format!("t_{} = {} violates t_n >= 2", i + 1, t[i])));
    }
    let logs: Vec<f64> = t.iter().map(crate::numeric::ln_biguint).collect();
    xi_from_logs(&logs, n)
}

/// `xi` from `log t_1, ..., log t_{N+1}`, for terms too large to hold.
pub fn xi_from_logs(ln_t: &[f64], n: u64) -> Result<XiReport> {
    if n < 8 {
        return Err(Error::invalid("xi needs a horizon N >= 8"));
    }
    if (ln_t.len() as u64) < n + 1 {
        return Err(Error::invalid(format!("xi at N = {n} needs t_1..t_{}", n + 1)));
    }
    let floor = 2f64.ln() * (1.0 - 1e-12);
    if let Some(i) = ln_t.iter().position(|&x| !(x >= floor)) {
        return Err(Error::invalid(format!("t_{} violates t_n >= 2", i + 1)));
    }
    let ln_fact = ln_factorials(n as usize + 1);
    let mut prefix = Vec::with_capacity(n as usize + 1);
    let mut acc = CompensatedSum::new();
    prefix.push(0.0);
    for &x in &ln_t[..n as usize] {
        acc.add(x);
        prefix.push(acc.value());
    }
    let ratio = |k: u64| {
        let k = k as usize;
        (2.0 * ln_fact[k + 1] + ln_t[k]) / prefix[k]
    };
    let hs = horizons(n);
    let mut trend = [0.0; 3];
    for (i, &h) in hs.iter().enumerate() {
        let (lo, hi) = Window::Half.range(h);
        trend[i] = (lo.max(1)..=hi).map(ratio).fold(f64::NEG_INFINITY, f64::max);
    }
    Ok(XiReport {
        horizon: n,
        value: trend[2],
        trend,
        shape: LimitShape::classify(trend, 1e-3),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equivalence {
    MonotoneEquivalent,
    NotEquivalent,
    Inconclusive,
}

/// Compares `psi` with its running maximum `M(n)`. The deficiency at a
/// horizon is the largest `1 - psi(n)/M(n)` over the tail window.
pub fn equivalence_diagnostic(spec: &PsiSpec, n: u64, tol: f64) -> Result<(Equivalence, [f64; 3])> {
    if n < 16 {
        return Err(Error::invalid("equivalence diagnostic needs N >= 16"));
    }
    let ln_psi = spec.ln_values(n)?;
    let mut ln_gap = Vec::with_capacity(ln_psi.len());
    let mut run_max = f64::NEG_INFINITY;
    for &x in &ln_psi {
        run_max = run_max.max(x);
        // psi/M in log form; both may be -inf only when psi(1) = 0
        ln_gap.push(if x == run_max { 0.0 } else { x - run_max });
    }
    let mut deficiency = [0.0; 3];
    for (i, &h) in horizons(n).iter().enumerate() {
        let (lo, hi) = Window::Half.range(h);
        deficiency[i] = (lo..=hi)
            .map(|k| -ln_gap[k as usize - 1].exp_m1())
            .fold(0.0, f64::max);
    }
    let [d1, d2, d3] = deficiency;
    let decaying = d2 < 0.75 * d1 && d3 < 0.75 * d2;
    let verdict = if d3 <= tol || decaying {
        Equivalence::MonotoneEquivalent
    } else if d1 > tol && d2 > tol {
        Equivalence::NotEquivalent
    } else {
        Equivalence::Inconclusive
    };
    Ok((verdict, deficiency))
}

/// The sets whose dimension the closed forms describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SetId {
    #[serde(rename = "E_sup")]
    ESup,
    #[serde(rename = "E_inf")]
    EInf,
    #[serde(rename = "E")]
    E,
    #[serde(rename = "E_sup_Lambda")]
    ESupLambda,
    #[serde(rename = "E_inf_Lambda")]
    EInfLambda,
    #[serde(rename = "E_Lambda")]
    ELambda,
    #[serde(rename = "F_Lambda")]
    FLambda,
    #[serde(rename = "Lambda")]
    Lambda,
}

impl SetId {
    pub fn name(self) -> &'static str {
        match self {
            SetId::ESup => "E_sup",
            SetId::EInf => "E_inf",
            SetId::E => "E",
            SetId::ESupLambda => "E_sup_Lambda",
            SetId::EInfLambda => "E_inf_Lambda",
            SetId::ELambda => "E_Lambda",
            SetId::FLambda => "F_Lambda",
            SetId::Lambda => "Lambda",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DimValue {
    Number(f64),
    /// the set is empty
    Empty,
    /// the linear-growth case: no closed form, only the limits of a
    /// continuous function of `alpha`
    RequiresS { alpha: f64 },
}

impl DimValue {
    pub fn number(&self) -> Option<f64> {
        match self {
            DimValue::Number(x) => Some(*x),
            _ => None,
        }
    }
}

impl Serialize for DimValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DimValue::Number(x) => serializer.serialize_str(&fmt_real(*x)),
            DimValue::Empty => serializer.serialize_str("empty"),
            DimValue::RequiresS { .. } => serializer.serialize_str("requires-S(alpha)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionPrediction {
    pub set_id: SetId,
    pub value: DimValue,
    pub provenance: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Regime {
    /// `psi(n)/log n -> alpha < infinity`
    Finite { alpha: f64 },
    /// `psi(n)/log n -> infinity`
    Infinite,
    Uncertain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub regime: Regime,
    pub regime_uncertain: bool,
    pub entries: Vec<DimensionPrediction>,
    pub equivalence: Equivalence,
    pub report: GrowthReport,
}

impl Prediction {
    /// First entry for a set.
    pub fn get(&self, id: SetId) -> Option<&DimensionPrediction> {
        self.entries.iter().find(|e| e.set_id == id)
    }
}

/// `(alpha - 1) / (2 alpha)` for `alpha >= 1`, else 0.
pub fn log_regime_dimension(alpha: f64) -> f64 {
    if alpha >= 1.0 {
        (alpha - 1.0) / (2.0 * alpha)
    } else {
        0.0
    }
}

/// Limit value of a constant in `[1, inf]`, snapping to 1 when the proxy is
/// visibly converging there.
fn settled_constant(e: &Estimate) -> (f64, &'static str) {
    if e.shape == LimitShape::Vanishing {
        (1.0, "limit 1")
    } else {
        (e.value.max(1.0), "windowed proxy")
    }
}

fn reciprocal_plus_one(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / (x + 1.0)
    }
}

/// Evaluates every closed-form dimension the finite data supports.
pub fn predict_dimensions(spec: &PsiSpec, n: u64, opts: &GrowthOptions) -> Result<Prediction> {
    let report = growth_constants(spec, n, opts)?;
    let (equivalence, _) = equivalence_diagnostic(spec, n, 10.0 * opts.tol)?;
    let regime = match report.alpha.shape {
        LimitShape::Settled | LimitShape::Vanishing => Regime::Finite { alpha: report.alpha.value },
        LimitShape::Diverging => Regime::Infinite,
        LimitShape::Uncertain => Regime::Uncertain,
    };
    let mut entries = Vec::new();
    let mut push = |set_id, value, provenance: String| {
        entries.push(DimensionPrediction { set_id, value, provenance });
    };
    let (a, a_note) = settled_constant(&report.a);
    let (b, b_note) = settled_constant(&report.b);
    let c_limit = if report.c.shape == LimitShape::Vanishing { 1.0 } else { report.c.value };
    let c_note = if report.c.shape == LimitShape::Vanishing { "limit 1" } else { "windowed proxy" };
    let (gamma, g_note) = settled_constant(&report.gamma);

    let finite_clauses = matches!(regime, Regime::Finite { .. } | Regime::Uncertain);
    let infinite_clauses = matches!(regime, Regime::Infinite | Regime::Uncertain);

    if finite_clauses {
        let alpha = report.alpha.value;
        let d = log_regime_dimension(alpha);
        let why = if alpha >= 1.0 {
            format!("psi/log n -> alpha = {alpha} >= 1: (alpha-1)/(2 alpha)")
        } else {
            format!("psi/log n -> alpha = {alpha} < 1: dimension 0")
        };
        push(SetId::ESupLambda, DimValue::Number(d), why.clone());
        push(SetId::EInfLambda, DimValue::Number(d), why.clone());
        push(SetId::ELambda, DimValue::Number(d), why);
    }
    if infinite_clauses {
        push(
            SetId::ESupLambda,
            DimValue::Number(reciprocal_plus_one(a)),
            format!("psi/log n -> inf: 1/(A+1), A = {a} ({a_note})"),
        );
        push(
            SetId::EInfLambda,
            DimValue::Number(reciprocal_plus_one(b)),
            format!("psi/log n -> inf: 1/(B+1), B = {b} ({b_note})"),
        );
        let e_lambda = match equivalence {
            Equivalence::NotEquivalent => (
                DimValue::Empty,
                "psi is not equivalent to a non-decreasing function".to_string(),
            ),
            other => (
                DimValue::Number(reciprocal_plus_one(c_limit)),
                format!("psi/log n -> inf: 1/(C+1), C = {c_limit} ({c_note}); equivalence {other:?}"),
            ),
        };
        push(SetId::ELambda, e_lambda.0, e_lambda.1);
    }

    match report.linear.shape {
        LimitShape::Vanishing => push(SetId::ESup, DimValue::Number(1.0), "psi/n -> 0: full dimension".into()),
        LimitShape::Settled => push(
            SetId::ESup,
            DimValue::RequiresS { alpha: report.linear.value },
            format!("psi/n -> {} in (0, inf): no closed form", report.linear.value),
        ),
        LimitShape::Diverging => push(
            SetId::ESup,
            DimValue::Number(reciprocal_plus_one(a)),
            format!("psi/n -> inf: 1/(A+1), A = {a} ({a_note})"),
        ),
        LimitShape::Uncertain => {
            push(SetId::ESup, DimValue::Number(reciprocal_plus_one(a)), "psi/n trend uncertain: 1/(A+1)".into());
            push(
                SetId::ESup,
                DimValue::RequiresS { alpha: report.linear.value },
                "psi/n trend uncertain: linear-growth clause".into(),
            );
        }
    }
    push(SetId::EInf, DimValue::Number(reciprocal_plus_one(b)), format!("1/(B+1), B = {b} ({b_note})"));
    push(SetId::E, DimValue::Number(reciprocal_plus_one(c_limit)), format!("1/(C+1), C = {c_limit} ({c_note})"));
    push(
        SetId::FLambda,
        DimValue::Number(reciprocal_plus_one(gamma)),
        format!("1/(gamma+1), gamma = {gamma} ({g_note})"),
    );
    push(SetId::Lambda, DimValue::Number(0.5), "non-decreasing partial quotients".into());

    let regime_uncertain = regime == Regime::Uncertain || report.linear.shape == LimitShape::Uncertain;
    Ok(Prediction { regime, regime_uncertain, entries, equivalence, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::Table;

    fn opts() -> GrowthOptions {
        GrowthOptions::default()
    }

    #[test]
    fn expo_constants() {
        for b in [2.0f64, 3.0, 5.0] {
            let r = growth_constants(&PsiSpec::Expo(b), 64, &opts()).unwrap();
            assert_eq!(r.a.ln, b.ln());
            assert_eq!(r.b.ln, b.ln());
            assert_eq!(r.a.value, b);
            assert_eq!(r.b.value, b);
            // geometric prefix sums: C - b = (b-1) b / (b^{n+1} - b) at the window start
            assert!((r.c.value - b).abs() <= (b - 1.0) * b / (b.powi(32) - 1.0) + 1e-12);
            assert_eq!(r.alpha.shape, LimitShape::Diverging);
        }
    }

    #[test]
    fn alpha_log_constants() {
        let r = growth_constants(&PsiSpec::AlphaLog(2.0), 1024, &opts()).unwrap();
        assert_eq!(r.alpha.value, 2.0);
        assert_eq!(r.alpha.shape, LimitShape::Settled);
        assert!((r.a.value - 1.0).abs() < 1e-2);
        assert_eq!(r.a.shape, LimitShape::Vanishing);
        assert_eq!(r.b.shape, LimitShape::Vanishing);
        assert_eq!(r.linear.shape, LimitShape::Vanishing);
    }

    #[test]
    fn identity_table_constants() {
        let n = 1024u64;
        let table = Table::from_integers(&(1..=n).collect::<Vec<_>>()).unwrap();
        let r = growth_constants(&PsiSpec::Table(table), n, &opts()).unwrap();
        // closed form: psi(m+1)/S(m) = 2/m, largest at the window start m = 512
        assert!((r.c.value - (1.0 + 2.0 / 512.0)).abs() < 1e-12);
        assert_eq!(r.c.shape, LimitShape::Vanishing);
        assert!((r.a.value - 1.0).abs() < 1e-2);
        assert_eq!(r.linear.shape, LimitShape::Settled);
    }

    #[test]
    fn table_too_short_is_reported() {
        let t = Table::from_integers(&[1, 2, 3]).unwrap();
        assert!(matches!(
            growth_constants(&PsiSpec::Table(t), 16, &opts()),
            Err(Error::TableIndex { .. })
        ));
    }

    #[test]
    fn log_regime_map_is_monotone() {
        let mut prev = -1.0;
        for i in 0..400 {
            let alpha = 1.0 + i as f64 * 0.25;
            let d = log_regime_dimension(alpha);
            assert!(d > prev && d < 0.5);
            prev = d;
        }
        assert_eq!(log_regime_dimension(0.5), 0.0);
        assert_eq!(log_regime_dimension(2.0), 0.25);
        assert_eq!(log_regime_dimension(4.0), 0.375);
    }

    #[test]
    fn prediction_alpha_log_two() {
        let p = predict_dimensions(&PsiSpec::AlphaLog(2.0), 1024, &opts()).unwrap();
        assert_eq!(p.regime, Regime::Finite { alpha: 2.0 });
        for id in [SetId::ESupLambda, SetId::EInfLambda, SetId::ELambda] {
            assert_eq!(p.get(id).unwrap().value, DimValue::Number(0.25));
        }
        assert_eq!(p.get(SetId::ESup).unwrap().value, DimValue::Number(1.0));
        assert_eq!(p.get(SetId::EInf).unwrap().value, DimValue::Number(0.5));
        assert_eq!(p.get(SetId::E).unwrap().value, DimValue::Number(0.5));
        assert_eq!(p.get(SetId::Lambda).unwrap().value, DimValue::Number(0.5));
        assert!(!p.regime_uncertain);
    }

    #[test]
    fn prediction_alpha_log_half_is_zero() {
        let p = predict_dimensions(&PsiSpec::AlphaLog(0.5), 1024, &opts()).unwrap();
        for id in [SetId::ESupLambda, SetId::EInfLambda, SetId::ELambda] {
            assert_eq!(p.get(id).unwrap().value, DimValue::Number(0.0));
        }
    }

    #[test]
    fn prediction_expo_three() {
        let p = predict_dimensions(&PsiSpec::Expo(3.0), 64, &opts()).unwrap();
        assert_eq!(p.regime, Regime::Infinite);
        assert_eq!(p.get(SetId::ESupLambda).unwrap().value, DimValue::Number(0.25));
        assert_eq!(p.get(SetId::EInfLambda).unwrap().value, DimValue::Number(0.25));
        let e = p.get(SetId::ELambda).unwrap().value.number().unwrap();
        assert!((e - 0.25).abs() < 1e-6);
        assert_eq!(p.get(SetId::ESup).unwrap().value, DimValue::Number(0.25));
    }

    #[test]
    fn linear_growth_gives_marker() {
        let p = predict_dimensions(&PsiSpec::parse("2*n").unwrap(), 1024, &opts()).unwrap();
        assert!(matches!(p.get(SetId::ESup).unwrap().value, DimValue::RequiresS { .. }));
        assert!(p.entries.iter().filter(|e| e.set_id == SetId::ESup).all(|e| e.value.number().is_none()));
    }

    #[test]
    fn equivalence_examples() {
        let (v, _) = equivalence_diagnostic(&PsiSpec::AlphaLog(2.0), 256, 1e-2).unwrap();
        assert_eq!(v, Equivalence::MonotoneEquivalent);

        let n = 256u64;
        let alternating: Vec<BigRational> = (1..=n)
            .map(|k| {
                let e = if k % 2 == 0 { k } else { (k - 1) / 2 };
                BigRational::from_integer(num_bigint::BigInt::from(2u32).pow(e as u32))
            })
            .collect();
        let spec = PsiSpec::Table(Table::new(alternating).unwrap());
        assert_eq!(equivalence_diagnostic(&spec, n, 1e-2).unwrap().0, Equivalence::NotEquivalent);

        // n + (-1)^n, with psi(1) lifted to 1 to stay positive
        let wiggle: Vec<u64> = (1..=n).map(|k| if k == 1 { 1 } else if k % 2 == 0 { k + 1 } else { k - 1 }).collect();
        let spec = PsiSpec::Table(Table::from_integers(&wiggle).unwrap());
        assert_eq!(equivalence_diagnostic(&spec, n, 1e-2).unwrap().0, Equivalence::MonotoneEquivalent);
    }

    #[test]
    fn xi_constant_two_diverges() {
        let logs = vec![2f64.ln(); 1002];
        let r = xi_from_logs(&logs, 1000).unwrap();
        assert!(r.trend[0] < r.trend[1] && r.trend[1] < r.trend[2]);
        assert_eq!(r.shape, LimitShape::Diverging);
    }

    #[test]
    fn xi_rejects_small_terms() {
        let t: Vec<num_bigint::BigUint> = (0..20).map(|i| num_bigint::BigUint::from(if i == 5 { 1u32 } else { 2 })).collect();
        assert!(xi(&t, 16).is_err());
    }
}
