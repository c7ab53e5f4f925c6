//! Hausdorff dimension predictions for the exceptional sets of a
//! digit-growth function.
//!
//! cargo run --example predict_dimensions -- "exp:2"

use cfdim::psi::{predict_dimensions, GrowthOptions, PsiSpec};

fn main() -> cfdim::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "alog:3".into());
    let spec = PsiSpec::parse(&text)?;
    let n = if matches!(spec, PsiSpec::Expo(_)) { 64 } else { 1024 };
    let p = predict_dimensions(&spec, n, &GrowthOptions::default())?;
    println!("{text}: regime {:?}, equivalence {:?}", p.regime, p.equivalence);
    for e in &p.entries {
        println!("  {:<14} {:<20} {}", e.set_id.name(), serde_json::to_string(&e.value).unwrap(), e.provenance);
    }
    Ok(())
}
