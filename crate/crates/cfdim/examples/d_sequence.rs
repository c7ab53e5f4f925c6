//! The auxiliary sequence d_n for an exponentially growing psi: its branch
//! choices and the checks of its stated properties.

use cfdim::construct::d_sequence;
use cfdim::psi::PsiSpec;

fn main() -> cfdim::Result<()> {
    let (a, eps) = (3.0, 0.1);
    let d = d_sequence(&PsiSpec::Expo(3.0), a, eps, 40, 1e-3)?;
    println!("theta certificate: {:?}", d.theta_certificate);
    for n in 1..=12 {
        println!("  log d_{n:<2} = {:>14.4}  {:?}", d.ln_d[n], d.branch[n - 1]);
    }
    let p = &d.properties;
    println!("monotone: {}", p.monotone);
    println!("tail ratio {:.4} against A - 1 + eps = {:.4}: {}", p.wan3.tail_max, p.wan3.bound, p.wan3.holds);
    println!("log d_n / psi(n): {:.4?} ({:?})", p.cn, p.cn_shape);
    Ok(())
}
