//! Compute Gram matrices of cell modules in the diagram basis, take exact
//! determinants, and compare them with the hook-style closed form (the two
//! agree up to a unit monomial in delta_L, delta_R).

use num_rational::Rational64;
use symblob::cellmod::CellModule;
use symblob::gram::{closed_form_gamma, det_ratfn, gram_matrix, unit_monomial_ratio};
use symblob::params::{dn_labels, CellLabel, WeightParams};

fn main() {
    let params = WeightParams::generic(Rational64::new(1, 5), Rational64::new(2, 5));

    // The 6-dimensional module W(5,2,--): print the full matrix.
    let label = CellLabel::Dn { n: 5, m: 2, e1: -1, e2: -1 };
    let cm = CellModule::new(&label).expect("cell module");
    let delta = params.delta_tuple(5).expect("parameter tuple");
    let g = gram_matrix(&cm, &delta);
    println!("Gram matrix of {label} (dim {}):", cm.dim());
    for row in &g {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        println!("  [ {} ]", cells.join(", "));
    }
    let det = det_ratfn(&g).expect("determinant");
    println!("\ndet = {det}");
    println!("closed form = {}", closed_form_gamma(&label, &params).expect("closed form"));

    // Cross-check every label at n = 4 against the closed form.
    println!("\nClosed-form comparison at n = 4:");
    for lbl in dn_labels(4) {
        let cm = CellModule::new(&lbl).expect("cell module");
        let delta = params.delta_tuple(4).expect("parameter tuple");
        let direct = det_ratfn(&gram_matrix(&cm, &delta)).expect("determinant");
        let closed = closed_form_gamma(&lbl, &params).expect("closed form");
        match unit_monomial_ratio(&direct, &closed, &params, 8).expect("ratio") {
            Some((a, b, sign)) => println!(
                "  {lbl}: det = {}closed * delta_L^{a} * delta_R^{b}",
                if sign < 0 { "-" } else { "" }
            ),
            None => println!("  {lbl}: MISMATCH"),
        }
    }
}
