//! The cylinder of a word and the inequalities its length satisfies, all
//! decided in exact arithmetic.

use cfdim::cf::{self, Word};

fn main() -> cfdim::Result<()> {
    for digits in [vec![1u64, 2, 3], vec![1; 20], vec![7, 7, 7, 7], vec![1, 1_000_000, 2]] {
        let w = Word::from_u64s(&digits)?;
        let interval = cf::cylinder(&w)?;
        let len = cf::cylinder_length(&w)?;
        let bounds = cf::verify_bounds(&w)?;
        println!("{w}");
        println!("  interval {}", serde_json::to_string(&interval).unwrap());
        println!("  length   {} (ln {:.6})", cf::fmt_rational(&len), cf::ln_cylinder_length(&w)?);
        println!("  bounds   {}", if bounds.all_pass() { "all hold" } else { "VIOLATED" });
    }
    Ok(())
}
