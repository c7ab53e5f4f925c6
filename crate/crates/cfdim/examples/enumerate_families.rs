//! Count and stream the word families behind the covering arguments, and
//! compare the counts with the closed-form cardinality bounds.

use cfdim::enumeration::{bound_a_k, bound_c_k, count_d, FamilySpec, FamilyTemplate};

fn main() -> cfdim::Result<()> {
    println!("#D(5, 5) = {}", count_d(5, 5));
    let d: FamilySpec = "D:l=3,n=3".parse()?;
    for w in d.enumerate(None)? {
        print!("{w} ");
    }
    println!();

    let (alpha, eps) = (1.5, 0.1);
    println!("\n k  #A_k        bound      #C_k        bound");
    for k in 2..=8 {
        let a = FamilyTemplate::a(alpha, alpha, eps)?.at_depth(k)?;
        let c = FamilyTemplate::c(alpha, eps)?.at_depth(k)?;
        println!(
            "{k:>2}  {:<10} {:<10.3e} {:<10} {:.3e}",
            a.count(),
            bound_a_k(k, alpha, eps).to_f64(),
            c.count(),
            bound_c_k(k, alpha, eps).to_f64()
        );
    }
    Ok(())
}
