//! Seeded Monte Carlo look at the growth law of the largest partial quotient
//! of a random number.

use cfdim::estimate::mc_growth_law;

fn main() -> cfdim::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2024);
    for n in [200, 500, 1000] {
        let s = mc_growth_law(200, n, seed)?;
        println!(
            "N = {n:>4}: median {:.4}, IQR [{:.4}, {:.4}], 10-90% [{:.4}, {:.4}]",
            s.median, s.q25, s.q75, s.q10, s.q90
        );
    }
    Ok(())
}
