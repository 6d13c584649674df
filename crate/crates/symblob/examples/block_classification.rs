//! Block classification of b'_n and b^x_n across the parameter regimes:
//! non-integral weights at a root of unity, one integral weight, integral
//! sum or difference, and both weights integral. Writes a weight-space SVG.

use num_rational::Rational64;
use symblob::blocks::{classify, classify_bnx, plot_weights};
use symblob::exact::RootSpec;
use symblob::params::WeightParams;

fn show(title: &str, n: usize, params: &WeightParams) {
    let part = classify(n, params).expect("classification");
    println!("{title} (n = {n}, w1 = {}, w2 = {}):", params.w1, params.w2);
    for class in &part.classes {
        let names: Vec<String> = class.iter().map(|l| l.to_string()).collect();
        println!("  {{ {} }}", names.join(", "));
    }
    println!();
}

fn main() {
    // q a root of unity, weights non-integral: congruence mod 2*ell.
    let p = WeightParams::generic(Rational64::new(1, 2), Rational64::new(3, 4))
        .with_spec(RootSpec::RootOfUnity(3));
    show("root of unity, non-integral weights", 8, &p);

    // One integral weight: reflection in a single wall.
    let p = WeightParams::generic(Rational64::from_integer(1), Rational64::new(3, 4));
    show("w1 integral", 8, &p);

    // Integral sum: a diagonal wall in weight space.
    let p = WeightParams::generic(Rational64::new(1, 4), Rational64::new(11, 4));
    show("w1 + w2 integral", 9, &p);

    // Both weights integral: nested concentric classes.
    let p = WeightParams::generic(Rational64::from_integer(3), Rational64::from_integer(1));
    show("w1 and w2 integral", 13, &p);

    // With theta given, W^n(b) joins the linkage: blocks of b^x_n.
    let p = WeightParams::generic(Rational64::new(1, 2), Rational64::new(3, 4))
        .with_theta(Rational64::new(1, 4))
        .with_spec(RootSpec::RootOfUnity(3));
    let part = classify_bnx(8, &p).expect("classification");
    println!("b^x_8 at theta = 1/4, ell = 3:");
    for class in &part.classes {
        let names: Vec<String> = class.iter().map(|l| l.to_string()).collect();
        println!("  {{ {} }}", names.join(", "));
    }
    for ((a, b), rule) in &part.provenance {
        println!("  # {a} ~ {b} by {rule}");
    }

    // Weight-space plot of the b'_13 partition.
    let p = WeightParams::generic(Rational64::from_integer(3), Rational64::from_integer(1));
    let part = classify(13, &p).expect("classification");
    let svg = plot_weights(13, &p, &part);
    let out = std::env::temp_dir().join("blocks_n13.svg");
    std::fs::write(&out, svg).expect("write svg");
    println!("\nwrote {}", out.display());
}
