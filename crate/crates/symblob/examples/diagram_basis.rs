//! Enumerate the diagram basis of b^x_n, print the counts for small n,
//! and multiply a few elements to show the straightening rewrite in action.

use num_rational::Rational64;
use symblob::diagrams::{enumerate_basis, AlgebraElement};
use symblob::params::WeightParams;

fn main() {
    for n in 1..=5 {
        let basis = enumerate_basis(n).expect("enumeration");
        println!("|B^x_{n}| = {}", basis.len());
    }

    // A closer look at n = 2: the 19 diagrams, serialized.
    let basis = enumerate_basis(2).expect("enumeration");
    println!("\nThe diagram basis of b^x_2:");
    for d in &basis {
        println!("  {d}");
    }

    // Multiply generators symbolically: loops contribute the boxed
    // parameters delta, delta_L, delta_R, kappa_L, kappa_R, kappa_LR.
    let params = WeightParams::generic(Rational64::new(1, 5), Rational64::new(2, 5))
        .with_theta(Rational64::new(3, 10));
    let delta = params.delta_tuple(2).expect("parameter tuple");
    let e0 = AlgebraElement::generator(2, 0, &delta);
    let e1 = AlgebraElement::generator(2, 1, &delta);
    let e2 = AlgebraElement::generator(2, 2, &delta);

    println!("\nSome products at n = 2 (generic weights w1 = 1/5, w2 = 2/5):");
    for (name, prod) in [
        ("e1 * e1", e1.mul(&e1, &delta)),
        ("e0 * e1 * e0", e0.mul(&e1, &delta).and_then(|x| x.mul(&e0, &delta))),
        ("e0 * e2 * e0", e0.mul(&e2, &delta).and_then(|x| x.mul(&e0, &delta))),
        ("e2 * e0 * e2", e2.mul(&e0, &delta).and_then(|x| x.mul(&e2, &delta))),
    ] {
        let prod = prod.expect("product");
        println!("  {name}:");
        for (d, c) in prod.terms() {
            println!("    ({c}) * {d}");
        }
    }
}
