//! Explicit points of the constructed sets: digits bracketed by a sequence
//! t_n, the monotone-envelope point for a digit-growth function, and the
//! doubly exponential point.

use cfdim::construct::{build_f_point, build_point, build_xtilde, in_bracket, membership_stats, BitBudget, PointRule, TSequence};
use cfdim::psi::PsiSpec;

fn main() -> cfdim::Result<()> {
    let t = TSequence::power(3.0, 12, BitBudget::default())?;
    for rule in [PointRule::Low, PointRule::Mid, PointRule::HighAvoid] {
        let w = build_point(&t, 12, rule, BitBudget::default())?;
        println!("{rule:?}: {w}  in bracket: {}", in_bracket(&w, &t));
    }

    let spec = PsiSpec::parse("n + sqrt(n)")?;
    let x = build_xtilde(&spec, 40, BitBudget::default())?;
    let stats = membership_stats(&x.word, &spec)?;
    println!("xtilde for {spec}: log a_n / psi(n) over the tail in [{:.4}, {:.4}]", stats.tail_min, stats.tail_max);

    // too large to hold exactly: the digits are kept as base-2 logarithms
    let f = build_f_point(3.0, 2.5, 40, BitBudget::new(4096).approximate())?;
    for run in f.compact().iter().take(6) {
        println!("  {}", serde_json::to_string(run).unwrap());
    }
    Ok(())
}
