//! Finite-horizon estimates of the growth constants of a few digit-growth
//! functions, with the shape each estimate's trend suggests.

use cfdim::psi::{growth_constants, GrowthOptions, PsiSpec};

fn main() -> cfdim::Result<()> {
    let opts = GrowthOptions::default();
    for text in ["alog:2", "n", "pow:2", "exp:3", "n*log(n)"] {
        let spec = PsiSpec::parse(text)?;
        let n = if matches!(spec, PsiSpec::Expo(_)) { 64 } else { 4096 };
        let r = growth_constants(&spec, n, &opts)?;
        println!("{text} at N = {n}");
        for (name, e) in [("alpha", r.alpha), ("A", r.a), ("B", r.b), ("C", r.c)] {
            println!("  {name:<5} {:>14.6}  {:?}", e.value, e.shape);
        }
    }
    Ok(())
}
