//! Rough timing of Gram determinants (temporary benchmark).

use std::time::Instant;

use num_rational::Rational64;
use symblob::cellmod::CellModule;
use symblob::gram::gram_det;
use symblob::params::{dn_labels, WeightParams};

fn main() {
    let params = WeightParams::generic(Rational64::new(1, 2), Rational64::new(1, 4));
    for n in [6usize, 7] {
        for lbl in dn_labels(n) {
            let dim = CellModule::new(&lbl).unwrap().dim();
            let t = Instant::now();
            let d = gram_det(&lbl, &params).unwrap();
            println!("{lbl} dim {dim}: {:?} (num deg {:?})", t.elapsed(), d.num().max_exp());
        }
    }
}
