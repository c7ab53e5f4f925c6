//! Critical exponents s*(k) of depth-k covers: bounded digits {1, 2}, and the
//! non-decreasing family with j^(alpha - eps) <= a_j <= k^(alpha + eps), whose
//! limit is (alpha - 1)/(2 alpha).

use cfdim::enumeration::FamilyTemplate;
use cfdim::estimate::{critical_exponent, Cover, CoverMode};

fn main() -> cfdim::Result<()> {
    let bounded = FamilyTemplate::bounded(&[1, 2])?;
    for k in [6, 9, 12, 15] {
        let cover = Cover::new(&bounded.at_depth(k)?, CoverMode::Exact, None)?;
        println!("{{1,2}}  k = {k:>2}: s* = {:.5}", critical_exponent(&cover, 1e-5)?.s_star);
    }
    let alpha = 3.0;
    let a = FamilyTemplate::a(alpha, alpha, 0.05)?;
    for k in [8, 16, 32] {
        let cover = Cover::new(&a.at_depth(k)?, CoverMode::DigitProduct, None)?;
        println!("A      k = {k:>2}: s* = {:.5}", critical_exponent(&cover, 1e-5)?.s_star);
    }
    println!("limit for alpha = {alpha}: {:.5}", (alpha - 1.0) / (2.0 * alpha));
    Ok(())
}
