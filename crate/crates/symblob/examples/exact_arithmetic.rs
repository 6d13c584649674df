//! The exact scalar layer: Laurent rational functions in x (with q = x^D),
//! the boxed quantities [w] = (q^w - q^-w)/(q - q^-1), and their
//! specialization at rational points and at roots of unity.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use symblob::exact::{CycField, RootSpec};
use symblob::params::WeightParams;

fn main() {
    // A context for half-integral weights: D = lcm of the denominators,
    // doubled so that half-boxes exist.
    let params = WeightParams::generic(Rational64::new(1, 2), Rational64::new(3, 4));
    let ctx = params.ctx();

    for w in [
        Rational64::from_integer(2),
        Rational64::new(1, 2),
        Rational64::new(3, 4),
        Rational64::new(5, 4),
    ] {
        println!("[{w}] = {}", ctx.box_(w, 0).expect("box"));
    }

    // Field operations are exact: [2]/[1] * [1] - [2] = 0.
    let b1 = ctx.box_(Rational64::from_integer(1), 0).unwrap();
    let b2 = ctx.box_(Rational64::from_integer(2), 0).unwrap();
    let expr = &b2.div(&b1).unwrap() * &b1;
    println!("\n[2]/[1] * [1] - [2] = {}", &expr - &b2);

    // Rational specialization: substitute x = 3/2 into [2].
    let x0 = BigRational::new(BigInt::from(3), BigInt::from(2));
    println!("[2] at x = 3/2: {}", b2.eval_at(&x0).expect("evaluation"));

    // Root-of-unity specialization: q primitive 2*ell-th root. [ell]
    // vanishes there, and box_vanishes predicts it without evaluating.
    let ell = 3u32;
    let d = ctx.d();
    let field: Arc<CycField> = CycField::new(2 * ell as i64 * d);
    let b3 = ctx.box_(Rational64::from_integer(ell as i64), 0).unwrap();
    println!("\nat a primitive {}th root of unity (ell = {ell}):", 2 * ell as i64 * d);
    println!("  [3] evaluates to zero: {}", b3.eval_cyc(&field).expect("embedding").is_zero());
    println!(
        "  box_vanishes([3]) = {}, box_vanishes([2]) = {}",
        ctx.box_vanishes(Rational64::from_integer(3), &RootSpec::RootOfUnity(ell)),
        ctx.box_vanishes(Rational64::from_integer(2), &RootSpec::RootOfUnity(ell)),
    );

    // Vanishing under a root spec is decided symbolically on RatFns too.
    println!("  [3] is_zero_under ell=3: {}", b3.is_zero_under(&RootSpec::RootOfUnity(ell), d));
}
