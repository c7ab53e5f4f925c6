//! The `cfdim` command line: one JSON document (or CSV rows) per call on
//! standard output, diagnostics on standard error.
//!
//! Exit codes: 0 success, 1 input error or usage, 2 budget exhausted.

use std::collections::HashMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cf::{self, parse_rational, Word};
use crate::construct::{
    build_f_point, build_point, build_xtilde, d_sequence, membership_stats, BitBudget, HugeWord, PointRule, TSequence,
};
use crate::enumeration::{FamilySpec, FamilyTemplate};
use crate::error::{Error, Result};
use crate::estimate::{critical_exponent, mc_fixed, mc_growth_law, Cover, CoverMode};
use crate::numeric::fmt_real;
use crate::psi::{growth_constants, predict_dimensions, GrowthOptions, PsiSpec, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

/// Settings shared by every subcommand, after defaults, `--config`,
/// environment and flags have been applied in that order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    /// working precision in bits; values are carried in binary64 and
    /// printed at shortest round-trip length, so this only gates input
    pub precision: u32,
    pub budget_words: u64,
    pub budget_bits: u64,
    #[serde(serialize_with = "ser_opt_real")]
    pub tol: Option<f64>,
    pub seed: u64,
    pub format: Format,
}

fn ser_opt_real<S: serde::Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&fmt_real(*v)),
        None => s.serialize_none(),
    }
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision: 128,
            budget_words: 10_000_000,
            budget_bits: 1_000_000,
            tol: None,
            seed: 0,
            format: Format::Json,
        }
    }
}

impl Config {
    fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<()> {
        let bad = |what: &str| Error::invalid(format!("{origin}: {key} = {value:?} is not {what}"));
        match key {
            "precision" => self.precision = value.parse().map_err(|_| bad("an integer"))?,
            "budget_words" | "budget-words" => self.budget_words = value.parse().map_err(|_| bad("an integer"))?,
            "budget_bits" | "budget-bits" => self.budget_bits = value.parse().map_err(|_| bad("an integer"))?,
            "tol" => self.tol = Some(value.parse().map_err(|_| bad("a number"))?),
            "seed" => self.seed = value.parse().map_err(|_| bad("an integer"))?,
            "format" => {
                self.format = Format::from_str(value, true).map_err(|_| bad("json, csv or pretty"))?;
            }
            _ => return Err(Error::invalid(format!("{origin}: unknown key {key:?}"))),
        }
        Ok(())
    }

    fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{}:{}", path.display(), i + 1);
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("{origin}: expected key=value")))?;
            self.set(k.trim(), v.trim(), &origin)?;
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.precision < 64 {
            return Err(Error::invalid(format!("precision must be at least 64 bits, got {}", self.precision)));
        }
        if self.budget_words == 0 || self.budget_bits == 0 {
            return Err(Error::invalid("budgets must be positive"));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::invalid(format!("tol must lie in (0, 1), got {t}")));
            }
        }
        Ok(())
    }

    fn bits(&self) -> BitBudget {
        BitBudget::new(self.budget_bits)
    }
}

#[derive(Debug, Parser)]
#[command(name = "cfdim", version, about = "Continued fractions, growth-rate sets and their dimensions")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// json, csv or pretty
    #[arg(long, global = true)]
    format: Option<Format>,
    /// working precision in bits (at least 64)
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// largest family a command may enumerate
    #[arg(long, global = true)]
    budget_words: Option<u64>,
    /// total bits of exact digits a construction may hold
    #[arg(long, global = true)]
    budget_bits: Option<u64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// key=value settings file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partial quotients of a rational p/q in (0, 1)
    Expand {
        x: String,
        #[arg(long, default_value_t = 10_000)]
        max_n: usize,
    },
    /// Convergents p_n/q_n of a word
    Convergents { word: String },
    /// Cylinder interval, its length and the standard bounds
    Cylinder { word: String },
    /// Exact size of a family
    Count { family: String },
    /// List the members of a family in lexicographic order
    Enumerate {
        family: String,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Growth constants and dimension predictions for psi
    Psi {
        spec: String,
        #[arg(long)]
        constants: bool,
        #[arg(long)]
        predict: bool,
        #[arg(long = "N", default_value_t = 1024)]
        n: u64,
        /// use the window [N - sqrt N, N] instead of [N/2, N]
        #[arg(long)]
        sqrt_window: bool,
    },
    /// Build explicit points
    Construct {
        #[command(subcommand)]
        what: ConstructCmd,
    },
    /// Covering sum of a family at exponent s
    CoverSum {
        family: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value = "exact")]
        mode: String,
    },
    /// Critical exponent s*(k) of a family template
    Critical {
        template: String,
        /// one depth or a comma-separated list
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, default_value = "exact")]
        mode: String,
    },
    /// Monte Carlo tail statistic of typical partial quotients
    McGrowth {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long = "N", default_value_t = 2000)]
        n: usize,
        /// expand this rational instead of sampling
        #[arg(long)]
        x: Option<String>,
    },
    /// Print the resolved settings
    Config,
}

#[derive(Debug, Subcommand)]
enum ConstructCmd {
    /// A point with n t_n <= a_n < (n+1) t_n
    Point {
        /// power:<alpha>, psi:<spec>, d:<A>,<eps>,<spec> or explicit:<t1>,<t2>,...
        #[arg(long)]
        t: String,
        #[arg(long = "N")]
        n: usize,
        /// low, mid or high-avoid
        #[arg(long, default_value = "low")]
        rule: String,
        #[command(flatten)]
        out: WordOut,
    },
    /// a_n = floor(exp(running max of psi))
    Xtilde {
        spec: String,
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        out: WordOut,
    },
    /// a_n = ceil(a^(b^n))
    Fset {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        out: WordOut,
    },
    /// The d-sequence and its properties
    Dseq {
        spec: String,
        #[arg(long = "A")]
        a: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long = "N")]
        n: u64,
    },
}

#[derive(Debug, Args)]
struct WordOut {
    /// keep going past the bit budget with approximate digits
    #[arg(long)]
    approx: bool,
    /// run-length digit list
    #[arg(long)]
    compact: bool,
    /// also report log a_n / psi(n) against this psi
    #[arg(long)]
    stats: Option<String>,
}

/// What one invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Output {
    Json(Value),
    Csv(Vec<Vec<String>>),
}

/// Runs with the process environment.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env: HashMap<String, String> = ["CFDIM_PRECISION", "CFDIM_SEED"]
        .iter()
        .filter_map(|k| std::env::var(k).ok().map(|v| (k.to_string(), v)))
        .collect();
    run_with_env(args, &env)
}

/// Runs with an explicit environment; `args` includes the program name.
pub fn run_with_env<I, T>(args: I, env: &HashMap<String, String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let result = resolve_config(&cli.global, env).and_then(|cfg| execute(cli.command, &cfg).map(|out| (cfg, out)));
    match result {
        Ok((cfg, out)) => match render(out, cfg.format) {
            Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
            Err(e) => failure(e),
        },
        Err(e) => failure(e),
    }
}

fn failure(e: Error) -> Outcome {
    Outcome {
        code: if e.is_budget() { 2 } else { 1 },
        stdout: String::new(),
        stderr: format!("cfdim: {e}\n"),
    }
}

fn resolve_config(g: &GlobalArgs, env: &HashMap<String, String>) -> Result<Config> {
    let mut cfg = Config::default();
    if let Some(path) = &g.config {
        cfg.load_file(path)?;
    }
    if let Some(v) = env.get("CFDIM_PRECISION") {
        cfg.set("precision", v, "CFDIM_PRECISION")?;
    }
    if let Some(v) = env.get("CFDIM_SEED") {
        cfg.set("seed", v, "CFDIM_SEED")?;
    }
    if let Some(v) = g.format {
        cfg.format = v;
    }
    if let Some(v) = g.precision {
        cfg.precision = v;
    }
    if let Some(v) = g.budget_words {
        cfg.budget_words = v;
    }
    if let Some(v) = g.budget_bits {
        cfg.budget_bits = v;
    }
    if let Some(v) = g.tol {
        cfg.tol = Some(v);
    }
    if let Some(v) = g.seed {
        cfg.seed = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Numbers become decimal strings, except the digits of words.
fn stringify_numbers(v: Value, key: Option<&str>) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(items) if matches!(key, Some("word" | "words")) => Value::Array(items),
        Value::Array(items) => Value::Array(items.into_iter().map(|x| stringify_numbers(x, key)).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, x)| {
                    let x = stringify_numbers(x, Some(&k));
                    (k, x)
                })
                .collect(),
        ),
        other => other,
    }
}

fn render(out: Output, format: Format) -> Result<String> {
    let out = match out {
        Output::Json(v) => Output::Json(stringify_numbers(v, None)),
        csv => csv,
    };
    match (out, format) {
        (Output::Json(v), Format::Json) => Ok(format!("{v}\n")),
        (Output::Json(v), Format::Pretty) => {
            Ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("values serialize")))
        }
        (Output::Csv(rows), Format::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
        }
        (Output::Csv(rows), _) => {
            // tabular commands still answer in JSON: header row gives the keys
            let mut it = rows.into_iter();
            let header = it.next().unwrap_or_default();
            let records: Vec<Value> = it
                .map(|r| Value::Object(header.iter().cloned().zip(r.into_iter().map(Value::String)).collect()))
                .collect();
            render(Output::Json(json!({ "rows": records })), format)
        }
        (Output::Json(_), Format::Csv) => Err(Error::invalid("this command has no CSV form; use --format json")),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn parse_word(text: &str) -> Result<Word> {
    text.parse()
}

fn parse_family(text: &str, k: Option<usize>) -> Result<FamilySpec> {
    match k {
        Some(k) => text.parse::<FamilyTemplate>()?.at_depth(k),
        None => text.parse(),
    }
}

fn default_tol(cfg: &Config, fallback: f64) -> f64 {
    cfg.tol.unwrap_or(fallback)
}

fn execute(cmd: Command, cfg: &Config) -> Result<Output> {
    match cmd {
        Command::Expand { x, max_n } => {
            let x = parse_rational(&x)?;
            let w = cf::expand(&x, max_n)?;
            Ok(Output::Json(json!({ "word": to_value(&w) })))
        }
        Command::Convergents { word } => {
            let w = parse_word(&word)?;
            let conv = cf::convergents(&w)?;
            if cfg.format == Format::Csv {
                let mut rows = vec![vec!["n".to_string(), "p".into(), "q".into()]];
                for (i, c) in conv.iter().enumerate() {
                    rows.push(vec![(i + 1).to_string(), c.p.to_string(), c.q.to_string()]);
                }
                return Ok(Output::Csv(rows));
            }
            Ok(Output::Json(json!({ "word": to_value(&w), "convergents": to_value(&conv) })))
        }
        Command::Cylinder { word } => {
            let w = parse_word(&word)?;
            Ok(Output::Json(json!({
                "word": to_value(&w),
                "cylinder": to_value(&cf::cylinder(&w)?),
                "bounds": to_value(&cf::verify_bounds(&w)?),
            })))
        }
        Command::Count { family } => {
            let f = parse_family(&family, None)?;
            Ok(Output::Json(json!({ "count": f.count().to_string() })))
        }
        Command::Enumerate { family, limit } => {
            let f = parse_family(&family, None)?;
            let it = match limit {
                Some(_) => f.enumerate(None)?,
                None => f.enumerate(Some(cfg.budget_words))?,
            };
            let words: Vec<Vec<u64>> = {
                let mut it = it;
                let mut out = Vec::new();
                while let Some(ds) = it.next_digits() {
                    if limit.is_some_and(|l| out.len() as u64 >= l) {
                        break;
                    }
                    out.push(ds);
                }
                out
            };
            if cfg.format == Format::Csv {
                let mut rows = vec![(1..=f.k).map(|j| format!("a{j}")).collect::<Vec<_>>()];
                rows.extend(words.iter().map(|w| w.iter().map(u64::to_string).collect()));
                return Ok(Output::Csv(rows));
            }
            Ok(Output::Json(json!({ "family": f.to_string(), "words": words })))
        }
        Command::Psi { spec, constants, predict, n, sqrt_window } => {
            let psi = PsiSpec::parse(&spec)?;
            let opts = GrowthOptions {
                tol: default_tol(cfg, 1e-3),
                window: if sqrt_window { Window::Sqrt } else { Window::Half },
            };
            let mut out = serde_json::Map::new();
            out.insert("psi".into(), Value::String(psi.to_string()));
            out.insert("N".into(), Value::String(n.to_string()));
            if constants || !predict {
                out.insert("constants".into(), to_value(&growth_constants(&psi, n, &opts)?));
            }
            if predict {
                let p = predict_dimensions(&psi, n, &opts)?;
                for e in &p.entries {
                    // first entry per set is the headline value
                    out.entry(e.set_id.name().to_string()).or_insert_with(|| to_value(&e.value));
                }
                out.insert("regime".into(), to_value(&p.regime));
                out.insert("regime_uncertain".into(), Value::Bool(p.regime_uncertain));
                out.insert("equivalence".into(), to_value(&p.equivalence));
                out.insert("predictions".into(), to_value(&p.entries));
            }
            Ok(Output::Json(Value::Object(out)))
        }
        Command::Construct { what } => construct(what, cfg),
        Command::CoverSum { family, k, s, mode } => {
            let f = parse_family(&family, k)?;
            let mode: CoverMode = mode.parse()?;
            let r = crate::estimate::cover_sum(&f, s, mode, Some(cfg.budget_words))?;
            Ok(Output::Json(to_value(&r)))
        }
        Command::Critical { template, k, mode } => {
            let t: FamilyTemplate = template.parse()?;
            let mode: CoverMode = mode.parse()?;
            let tol = default_tol(cfg, 1e-4);
            let mut rows = vec![vec!["k".to_string(), "s_star".into(), "s_lo".into(), "s_hi".into()]];
            let mut results = Vec::new();
            for depth in k {
                let cover = Cover::new(&t.at_depth(depth)?, mode, Some(cfg.budget_words))?;
                match critical_exponent(&cover, tol) {
                    Ok(c) => {
                        rows.push(vec![depth.to_string(), fmt_real(c.s_star), fmt_real(c.bracket.0), fmt_real(c.bracket.1)]);
                        results.push(to_value(&c));
                    }
                    Err(e @ Error::Bracket(_)) => {
                        rows.push(vec![depth.to_string(), "nan".into(), "nan".into(), "nan".into()]);
                        results.push(json!({ "k": depth, "error": e.to_string() }));
                    }
                    Err(e) => return Err(e),
                }
            }
            if cfg.format == Format::Csv {
                return Ok(Output::Csv(rows));
            }
            Ok(Output::Json(json!({ "template": t.to_string(), "tol": fmt_real(tol), "results": results })))
        }
        Command::McGrowth { samples, n, x } => match x {
            Some(x) => {
                let (w, stat) = mc_fixed(&parse_rational(&x)?, n)?;
                Ok(Output::Json(json!({ "word": to_value(&w), "statistic": fmt_real(stat) })))
            }
            None => {
                let stats = mc_growth_law(samples, n, cfg.seed)?;
                Ok(Output::Json(to_value(&stats)))
            }
        },
        Command::Config => Ok(Output::Json(to_value(cfg))),
    }
}

fn parse_t(text: &str, len: usize, budget: BitBudget) -> Result<TSequence> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("t rule {text:?} needs the form kind:params")))?;
    let num = |s: &str| -> Result<f64> {
        s.trim().parse().map_err(|_| Error::invalid(format!("expected a number, got {s:?}")))
    };
    match kind {
        "power" => TSequence::power(num(rest)?, len, budget),
        "psi" => TSequence::from_psi(&PsiSpec::parse(rest)?, len, budget),
        "d" => {
            let mut parts = rest.splitn(3, ',');
            let (a, eps, spec) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(e), Some(s)) => (num(a)?, num(e)?, s),
                _ => return Err(Error::invalid("d rule is d:<A>,<eps>,<psi spec>")),
            };
            TSequence::from_d(&PsiSpec::parse(spec)?, a, eps, len, budget)
        }
        "explicit" => {
            let values = rest
                .split(',')
                .map(|s| s.trim().parse::<BigUint>().map_err(|_| Error::invalid(format!("bad term {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            TSequence::explicit(values)
        }
        other => Err(Error::invalid(format!("unknown t rule {other:?} (power, psi, d, explicit)"))),
    }
}

fn word_json(w: &HugeWord, out: &WordOut) -> Result<serde_json::Map<String, Value>> {
    let mut m = serde_json::Map::new();
    if out.compact {
        m.insert("runs".into(), to_value(&w.compact()));
    } else {
        m.insert("word".into(), to_value(w));
    }
    m.insert("exact".into(), Value::Bool(w.is_exact()));
    m.insert("nondecreasing".into(), Value::Bool(w.is_nondecreasing()));
    if let Some(spec) = &out.stats {
        m.insert("stats".into(), to_value(&membership_stats(w, &PsiSpec::parse(spec)?)?));
    }
    Ok(m)
}

fn construct(what: ConstructCmd, cfg: &Config) -> Result<Output> {
    let budget = |approx: bool| if approx { cfg.bits().approximate() } else { cfg.bits() };
    match what {
        ConstructCmd::Point { t, n, rule, out } => {
            let rule: PointRule = rule.parse()?;
            let seq = parse_t(&t, n, budget(out.approx))?;
            let w = build_point(&seq, n, rule, budget(out.approx))?;
            let mut m = word_json(&w, &out)?;
            m.insert("t".into(), to_value(&seq));
            m.insert("in_bracket".into(), Value::Bool(crate::construct::in_bracket(&w, &seq)));
            Ok(Output::Json(Value::Object(m)))
        }
        ConstructCmd::Xtilde { spec, n, out } => {
            let psi = PsiSpec::parse(&spec)?;
            let x = build_xtilde(&psi, n, budget(out.approx))?;
            let mut m = word_json(&x.word, &out)?;
            m.insert("envelope".into(), to_value(&x.envelope.iter().map(|v| fmt_real(*v)).collect::<Vec<_>>()));
            m.insert("ratios".into(), to_value(&x.ratios.iter().map(|v| fmt_real(*v)).collect::<Vec<_>>()));
            m.insert("equivalence".into(), to_value(&x.equivalence));
            Ok(Output::Json(Value::Object(m)))
        }
        ConstructCmd::Fset { a, b, n, out } => {
            let w = build_f_point(a, b, n, budget(out.approx))?;
            Ok(Output::Json(Value::Object(word_json(&w, &out)?)))
        }
        ConstructCmd::Dseq { spec, a, eps, n } => {
            let psi = PsiSpec::parse(&spec)?;
            let d = d_sequence(&psi, a, eps, n, default_tol(cfg, 1e-9))?;
            Ok(Output::Json(to_value(&d)))
        }
    }
}
