//! Covering sums sum |I_k(w)|^s over a family, in each evaluation mode.

use cfdim::enumeration::FamilyTemplate;
use cfdim::estimate::{exact_length_sum, Cover, CoverMode};

fn main() -> cfdim::Result<()> {
    let fam = FamilyTemplate::bounded(&[1, 2])?.at_depth(10)?;
    let total = exact_length_sum(&fam, None)?;
    println!("{fam}: total length {:.6}", num_traits::ToPrimitive::to_f64(&total).unwrap());
    for mode in [CoverMode::Exact, CoverMode::DigitProduct, CoverMode::BoundProduct] {
        let cover = Cover::new(&fam, mode, None)?;
        let sums: Vec<String> = [0.4, 0.5, 0.6].iter().map(|&s| format!("{:.4}", cover.log_sum(s).exp())).collect();
        println!("  {mode:<12?} s = 0.4, 0.5, 0.6: {}", sums.join(", "));
    }
    Ok(())
}
