//! Expand a rational into partial quotients and list its convergents.
//!
//! cargo run --example expand_convergents -- 355/113

use cfdim::cf;

fn main() -> cfdim::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "3141592653/1000000000".into());
    let x = cf::parse_rational(&text)?;
    let whole = x.floor();
    let frac = &x - &whole;
    println!("x = {} = {} + {}", cf::fmt_rational(&x), whole, cf::fmt_rational(&frac));
    if frac == num_rational::BigRational::from_integer(0.into()) {
        return Ok(());
    }
    let w = cf::expand(&frac, 64)?;
    println!("partial quotients: {w}");
    for (i, c) in cf::convergents(&w)?.iter().enumerate() {
        println!("  p_{0}/q_{0} = {1}/{2}", i + 1, c.p, c.q);
    }
    assert_eq!(cf::evaluate(&w)?, frac);
    Ok(())
}
