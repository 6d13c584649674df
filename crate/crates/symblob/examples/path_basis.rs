//! The lattice-path basis of W^n(b): the Gram form is diagonal on it, each
//! path contributing a product of tile factors f(h) and g(h). At a critical
//! theta the vanishing eigenvalues cut out a proper submodule.

use num_rational::Rational64;
use symblob::gram::{path_eigenvalue, path_gram};
use symblob::params::{CellLabel, WeightParams};
use symblob::paths::{critical_theta, enumerate, submodule_basis, tile_count, PathBasis};

fn main() {
    let n = 5;
    let params = WeightParams::generic(Rational64::new(1, 5), Rational64::new(2, 5))
        .with_theta(Rational64::new(3, 10));

    // The 2^n paths in tile order, with the change of basis to half diagrams.
    let basis = PathBasis::new(n, &params).expect("path basis");
    println!("paths of length {n}, by tile count:");
    for p in basis.paths().iter().take(8) {
        println!("  ({p})  tiles = {}", tile_count(p));
    }
    println!("  ... ({} paths in total)", enumerate(n).len());

    // Diagonal Gram eigenvalues on W^n(b): 1 on the fundamental path, then
    // a product of tile factors f(h) and g(h).
    println!("\ndiagonal Gram eigenvalues on W^{n}(b):");
    for p in basis.paths().iter().take(4) {
        println!("  ({p}): {}", path_eigenvalue(p, &params).expect("eigenvalue"));
    }
    println!("  ...");

    // At the critical theta of a cell label, W^n(b) acquires a submodule
    // isomorphic to that cell module, spanned by path vectors; the Gram
    // form stays diagonal on it.
    let label = CellLabel::Dn { n: 5, m: 2, e1: -1, e2: -1 };
    let crit = critical_theta(&label, &params).expect("critical theta");
    let critical = WeightParams::generic(params.w1, params.w2).with_theta(crit);
    let sub = submodule_basis(&label, &critical).expect("submodule basis");
    println!("\nat theta = {crit}, {label} embeds in W^{n}(b) with path basis:");
    for p in &sub {
        println!("  ({p})");
    }
    let diag = path_gram(&label, &critical).expect("path gram");
    println!("relative Gram eigenvalues on the submodule:");
    for (p, val) in &diag {
        println!("  ({p}): {val}");
    }
}
