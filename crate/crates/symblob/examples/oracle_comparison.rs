//! Independent verification of the block classifier: specialize the
//! parameters to an exact point, compute Hom spaces between all cell modules
//! by linear algebra, and compare the resulting linkage partition with the
//! closed-form classification.

use num_rational::Rational64;
use symblob::blocks::classify;
use symblob::oracle::{gram_rank_semisimple, hom_space, linkage_blocks, Specialization};
use symblob::params::{CellLabel, WeightParams};

fn main() {
    // A non-semisimple point: w1 integral links cells across the w1-wall.
    let params = WeightParams::generic(Rational64::from_integer(1), Rational64::new(3, 4));
    let n = 5;

    let spec = Specialization::for_params(&params, n, 12345).expect("specialization");
    let src = CellLabel::Dn { n, m: 4, e1: 1, e2: 1 };
    let tgt = CellLabel::Dn { n, m: 2, e1: -1, e2: 1 };
    let hom = hom_space(&src, &tgt, &spec).expect("hom space");
    println!("dim Hom({src}, {tgt}) = {}", hom.dimension);

    let oracle = linkage_blocks(n, &spec).expect("linkage");
    let predicted = classify(n, &params).expect("classification");
    println!("\noracle linkage partition of b'_{n}:");
    for class in &oracle.classes {
        let names: Vec<String> = class.iter().map(|l| l.to_string()).collect();
        println!("  {{ {} }}", names.join(", "));
    }
    println!("matches the closed-form classifier: {}", oracle.classes == predicted.classes);

    // Semisimplicity detection through Gram ranks.
    let generic = WeightParams::generic(Rational64::new(1, 5), Rational64::new(2, 5));
    let gen_spec = Specialization::for_params(&generic, n, 12345).expect("specialization");
    println!(
        "\nall Gram forms of full rank: generic point {}, integral point {}",
        gram_rank_semisimple(n, &gen_spec).expect("rank"),
        gram_rank_semisimple(n, &spec).expect("rank"),
    );
}
