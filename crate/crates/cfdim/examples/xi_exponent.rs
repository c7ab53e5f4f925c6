//! The exponent xi of a fast-growing sequence t_n, here t_n = 2 floor(n^(a-1)),
//! whose limit is 2/(a-1).

use cfdim::construct::{BitBudget, TSequence};
use cfdim::psi::xi_from_logs;

fn main() -> cfdim::Result<()> {
    for a in [2.0, 3.0, 5.0] {
        for n in [1_000u64, 100_000] {
            let t = TSequence::power(a, n as usize + 1, BitBudget::new(100_000_000))?;
            let r = xi_from_logs(&t.ln_terms(), n)?;
            println!("a = {a}, N = {n:>6}: xi = {:.5} (trend {:.5?}), limit {:.5}", r.value, r.trend, 2.0 / (a - 1.0));
        }
    }
    Ok(())
}
