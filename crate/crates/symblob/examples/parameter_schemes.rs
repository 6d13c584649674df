//! Weight parameters from a flat key=value config, and the conversion
//! between the three parameterisation rows (the six-tuple of boxed scalars
//! attached to each).

use symblob::params::{parse_config, scheme_convert, Scheme};

fn main() {
    let text = "\
# weights of the reflection hyperplanes
w1 = 1/2
w2 = 3/4
theta = 1/4
q-mode = root
ell = 3
scheme = dn
";
    let params = parse_config(text).expect("config");
    println!(
        "parsed: w1 = {}, w2 = {}, theta = {}, ell = {}, scheme = {:?}",
        params.w1,
        params.w2,
        params.theta.map(|t| t.to_string()).unwrap_or_default(),
        params.ell(),
        params.scheme
    );
    println!("supported by the path basis: {}", params.path_basis_ok());

    // The boxed parameter six-tuple in each scheme at n = 4.
    for target in [Scheme::Dn, Scheme::Gmp1, Scheme::Gmp2] {
        match scheme_convert(&params, target, 4) {
            Ok(t) => {
                println!("\n{target:?}:");
                println!("  delta    = {}", t.delta);
                println!("  delta_L  = {}", t.delta_l);
                println!("  delta_R  = {}", t.delta_r);
                println!("  kappa_L  = {}", t.kappa_l);
                println!("  kappa_R  = {}", t.kappa_r);
                println!("  kappa_LR = {}", t.kappa_lr);
            }
            Err(e) => println!("\n{target:?}: not defined here ({e})"),
        }
    }
}
