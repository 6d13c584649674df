//! End-to-end acceptance suite: one criterion per test, each printing a
//! single pass/fail line (run with `--nocapture` to see them on success).

use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symblob::blocks::{classify, classify_bnx, hom_exists, BlockPartition, FunctorMap};
use symblob::cellmod::CellModule;
use symblob::central::{alpha, alpha_quotient, same_eigenvalue, HeckeContext};
use symblob::diagrams::{
    enumerate_basis, straighten, straighten_random, AlgebraElement, Stack,
};
use symblob::exact::{RatFn, RootSpec};
use symblob::gram::{
    closed_form_gamma, det_ratfn, gram_det, gram_matrix, path_gram, unit_monomial_ratio,
};
use symblob::oracle::{gram_rank_semisimple, hom_space, linkage_blocks, Specialization};
use symblob::params::{dn_labels, CellLabel, DeltaTuple, WeightParams};
use symblob::paths::{f_of, g_of, tile_count, PathBasis};

fn check(name: &str, body: impl FnOnce() -> Result<(), String>) {
    match body() {
        Ok(()) => println!("{name}: pass"),
        Err(e) => {
            println!("{name}: fail ({e})");
            panic!("{name} failed: {e}");
        }
    }
}

fn r(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

fn dn(n: usize, m: i64, e1: i8, e2: i8) -> CellLabel {
    CellLabel::Dn { n, m, e1, e2 }
}

fn sorted_class(mut v: Vec<CellLabel>) -> Vec<CellLabel> {
    v.sort();
    v
}

fn multi_classes(p: &BlockPartition) -> Vec<Vec<CellLabel>> {
    p.classes.iter().filter(|c| c.len() > 1).cloned().sorted().collect()
}

fn err<T: std::fmt::Display>(e: T) -> String {
    e.to_string()
}

#[test]
fn criterion_1_golden_gram_matrix() {
    check("criterion 1 (golden Gram matrix of W(5,2,--))", || {
        let start = Instant::now();
        let (w1, w2) = (r(1, 5), r(2, 5));
        let params = WeightParams::generic(w1, w2);
        let d = params.delta_tuple(5).map_err(err)?;
        let cm = CellModule::new(&dn(5, 2, -1, -1)).map_err(err)?;
        let g = gram_matrix(&cm, &d);

        // Entry-for-entry: with kappa_L = kappa_R = 1, the matrix is built
        // from dl = delta_L, dr = delta_R and the bulk loop value delta.
        let (dl, dr, de) = (&d.delta_l, &d.delta_r, &d.delta);
        let p = |fs: &[&RatFn]| fs.iter().fold(RatFn::one(), |acc, f| &acc * f);
        let z = RatFn::zero();
        let expect = vec![
            vec![p(&[dl, dl, dr]), p(&[dl, dr]), p(&[dl, dl, dr]), z.clone(), z.clone(), z.clone()],
            vec![p(&[dl, dr]), p(&[dl, dr, de]), p(&[dl, dr]), z.clone(), z.clone(), z.clone()],
            vec![p(&[dl, dl, dr]), p(&[dl, dr]), p(&[dl, dr, de]), p(&[dl, dr]), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), p(&[dl, dr]), p(&[dl, dr, de]), p(&[dl, dr]), p(&[dl, dr, dr])],
            vec![z.clone(), z.clone(), z.clone(), p(&[dl, dr]), p(&[dl, dr, de]), p(&[dl, dr])],
            vec![z.clone(), z.clone(), z.clone(), p(&[dl, dr, dr]), p(&[dl, dr]), p(&[dl, dr, dr])],
        ];
        if g != expect {
            return Err("matrix differs from the printed 6x6 form".into());
        }

        // Its determinant in box form.
        let ctx = params.ctx();
        let b = |w: Rational64, a: i64| ctx.box_(w, a).unwrap();
        let lit = &(&(&b(w1, 0).pow(6).map_err(err)? * &b(w2, 0).pow(6).map_err(err)?)
            * &(&b(w1, 1).pow(-8).map_err(err)? * &b(w2, 1).pow(-8).map_err(err)?))
            * &(&(&b(w1, -1) * &b(w2, -1)) * &b(w1 + w2, 3));
        let det = det_ratfn(&g).map_err(err)?;
        if det != lit {
            return Err(format!("det = {det}, expected {lit}"));
        }
        if start.elapsed() > Duration::from_secs(1) {
            return Err(format!("took {:?}, budget 1s", start.elapsed()));
        }
        Ok(())
    });
}

#[test]
fn criterion_2_golden_path_eigenvalues() {
    check("criterion 2 (path-basis eigenvalues of W(5,2,--))", || {
        let (w1, w2) = (r(1, 5), r(2, 5));
        let params =
            WeightParams::generic(w1, w2).with_theta(Rational64::from_integer(-2) - w1 - w2);
        let pg = path_gram(&dn(5, 2, -1, -1), &params).map_err(err)?;

        let f = |h: i64| f_of(&params, h).unwrap();
        let g = |h: i64| g_of(&params, h).unwrap();
        let expect = vec![
            RatFn::one(),
            f(0),
            f(-1),
            &f(-1) * &f(-2),
            &(&f(-1) * &f(-2)) * &f(-3),
            &(&(&f(-1) * &f(-2)) * &f(-3)) * &g(-4),
        ];
        let eigs: Vec<RatFn> = pg.iter().map(|(_, l)| l.clone()).collect();
        if eigs != expect {
            return Err("eigenvalue list differs from 1, f(0), f(-1), ...".into());
        }

        // The product is the printed determinant
        // [w1]^2 [w1+1]^-4 [w2+1]^-2 [w1-1][w2-1][w1+w2+3].
        let prod = eigs.iter().fold(RatFn::one(), |acc, l| &acc * l);
        let ctx = params.ctx();
        let b = |w: Rational64, a: i64| ctx.box_(w, a).unwrap();
        let lit = &(&(&b(w1, 0).pow(2).map_err(err)? * &b(w1, 1).pow(-4).map_err(err)?)
            * &(&b(w2, 1).pow(-2).map_err(err)? * &b(w1, -1)))
            * &(&b(w2, -1) * &b(w1 + w2, 3));
        if prod != lit {
            return Err(format!("product = {prod}, expected {lit}"));
        }
        Ok(())
    });
}

#[test]
fn criterion_3_determinants_match_the_closed_form() {
    check("criterion 3 (closed-form determinants, all labels n <= 7)", || {
        let start = Instant::now();
        let params = WeightParams::generic(r(1, 2), r(1, 4));
        for n in 1..=7usize {
            for lbl in dn_labels(n) {
                let direct = gram_det(&lbl, &params).map_err(err)?;
                let closed = closed_form_gamma(&lbl, &params).map_err(err)?;
                let bound = 4 * n as i64;
                if unit_monomial_ratio(&direct, &closed, &params, bound).map_err(err)?.is_none() {
                    return Err(format!(
                        "{lbl}: direct determinant differs from the closed form beyond \
                         +-delta_L^a delta_R^b"
                    ));
                }
            }
        }
        if start.elapsed() > Duration::from_secs(600) {
            return Err(format!("took {:?}, budget 10min", start.elapsed()));
        }
        Ok(())
    });
}

#[test]
fn criterion_4_central_element_scalar_action() {
    check("criterion 4 (Z_n central, acts as alpha on each cell)", || {
        let params = WeightParams::generic(r(1, 5), r(2, 5)).with_theta(r(3, 10));
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut points = Vec::new();
        while points.len() < 3 {
            let p = rng.gen_range(2..=50i64);
            let q = rng.gen_range(1..=50i64);
            let x0 = BigRational::new(BigInt::from(if rng.gen() { p } else { -p }), BigInt::from(q));
            if x0.numer().magnitude() != x0.denom().magnitude() && !points.contains(&x0) {
                points.push(x0);
            }
        }
        for n in 1..=4usize {
            let cx = HeckeContext::new(n, &params).map_err(err)?;
            for x0 in &points {
                let cxq = cx.map(|v| v.eval_at(x0)).map_err(err)?;
                let d = cxq.delta().clone();
                let z = cxq.z_n().map_err(err)?;
                for i in 0..=n {
                    let e = AlgebraElement::generator(n, i, &d);
                    if !z.mul(&e, &d).map_err(err)?.sub(&e.mul(&z, &d).map_err(err)?).is_zero() {
                        return Err(format!("[Z_{n}, e_{i}] != 0 at x = {x0}"));
                    }
                }
                for lbl in dn_labels(n) {
                    let cm = CellModule::new(&lbl).map_err(err)?;
                    let mat = cm.matrix(&z, &d).map_err(err)?;
                    let expanded = alpha(&lbl, &params).map_err(err)?.value;
                    let a = expanded.eval_at(x0).map_err(err)?;
                    let quotient =
                        alpha_quotient(&lbl, &params).map_err(err)?.eval_at(x0).map_err(err)?;
                    if a != quotient {
                        return Err(format!("{lbl}: expanded and quotient alphas differ at {x0}"));
                    }
                    for (i, row) in mat.iter().enumerate() {
                        for (j, x) in row.iter().enumerate() {
                            let want = if i == j { a.clone() } else { BigRational::from_integer(0.into()) };
                            if *x != want {
                                return Err(format!("Z_{n} not alpha * I on {lbl} at x = {x0}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_5_block_partitions_match_the_figures() {
    check("criterion 5 (published block partitions)", || {
        let expect_multi = |n: usize,
                            p: &WeightParams,
                            expected: Vec<Vec<CellLabel>>|
         -> Result<(), String> {
            let part = classify(n, p).map_err(err)?;
            let got = multi_classes(&part);
            let want: Vec<Vec<CellLabel>> =
                expected.into_iter().map(sorted_class).sorted().collect();
            if got != want {
                return Err(format!(
                    "n = {n}, w1 = {}, w2 = {}: classes {got:?} != {want:?}",
                    p.w1, p.w2
                ));
            }
            Ok(())
        };

        // Root of unity, non-integral weights: n = 8, w1 = 1/2, w2 = 3/4,
        // l = 3.
        let p = WeightParams::generic(r(1, 2), r(3, 4)).with_spec(RootSpec::RootOfUnity(3));
        expect_multi(
            8,
            &p,
            vec![
                vec![dn(8, 7, 1, 1), dn(8, 1, 1, 1)],
                vec![dn(8, 7, 1, -1), dn(8, 1, 1, -1)],
                vec![dn(8, 7, -1, 1), dn(8, 1, -1, 1)],
            ],
        )?;

        // One integral weight, panel (i): n = 8, w1 = 1, w2 = 3/4.
        let p = WeightParams::generic(r(1, 1), r(3, 4));
        expect_multi(
            8,
            &p,
            vec![
                vec![dn(8, 1, -1, 1), dn(8, 3, 1, 1)],
                vec![dn(8, 3, -1, 1), dn(8, 5, 1, 1)],
                vec![dn(8, 5, -1, 1), dn(8, 7, 1, 1)],
                vec![dn(8, 3, -1, -1), dn(8, 5, 1, -1)],
                vec![dn(8, 5, -1, -1), dn(8, 7, 1, -1)],
            ],
        )?;

        // One integral weight, panel (ii): n = 9, w1 = -1/4, w2 = 1.
        let p = WeightParams::generic(r(-1, 4), r(1, 1));
        expect_multi(
            9,
            &p,
            vec![
                vec![dn(9, 4, 1, 1), dn(9, 2, 1, -1)],
                vec![dn(9, 6, 1, 1), dn(9, 4, 1, -1)],
                vec![dn(9, 8, 1, 1), dn(9, 6, 1, -1)],
                vec![dn(9, 4, -1, 1), dn(9, 2, -1, -1)],
                vec![dn(9, 6, -1, 1), dn(9, 4, -1, -1)],
                vec![dn(9, 8, -1, 1), dn(9, 6, -1, -1)],
            ],
        )?;

        // Integral sum, panel (i): n = 9, w1 = 1/4, w2 = 11/4.
        let p = WeightParams::generic(r(1, 4), r(11, 4));
        expect_multi(
            9,
            &p,
            vec![
                vec![dn(9, 4, 1, 1), dn(9, 2, 1, 1)],
                vec![dn(9, 6, 1, 1), dn(9, 0, 1, 1)],
            ],
        )?;

        // Integral difference, panel (ii): n = 8, w1 = 1/4, w2 = -7/4.
        let p = WeightParams::generic(r(1, 4), r(-7, 4));
        expect_multi(8, &p, vec![vec![dn(8, 3, 1, -1), dn(8, 1, 1, -1)]])?;

        // Half-integral weights (sum and difference both integral):
        // n = 8, w1 = 5/2, w2 = -1/2.
        let p = WeightParams::generic(r(5, 2), r(-1, 2));
        expect_multi(
            8,
            &p,
            vec![
                vec![dn(8, 5, 1, -1), dn(8, 1, 1, -1)],
                vec![dn(8, 3, 1, 1), dn(8, 1, 1, 1)],
            ],
        )?;

        // Both weights integral: n = 13, w1 = 3, w2 = 1, concentric squares
        // grouped by |m - e1 w1 - e2 w2|.
        let p = WeightParams::generic(r(3, 1), r(1, 1));
        let part = classify(13, &p).map_err(err)?;
        let value = |l: &CellLabel| {
            let CellLabel::Dn { m, e1, e2, .. } = *l else { unreachable!() };
            (Rational64::from_integer(m)
                - Rational64::from_integer(e1 as i64) * p.w1
                - Rational64::from_integer(e2 as i64) * p.w2)
                .abs()
        };
        for c in &part.classes {
            if !c.iter().map(value).all_equal() {
                return Err(format!("n = 13 class {c:?} mixes |weight| values"));
            }
        }
        for (a, b) in part.classes.iter().tuple_combinations() {
            if value(&a[0]) == value(&b[0]) {
                return Err("n = 13: two classes share a |weight| value".into());
            }
        }
        let four = part
            .classes
            .iter()
            .find(|c| value(&c[0]) == Rational64::from_integer(4))
            .ok_or("n = 13: missing the |value| = 4 class")?;
        let want =
            sorted_class(vec![dn(13, 0, 1, 1), dn(13, 8, 1, 1), dn(13, 2, -1, 1), dn(13, 6, 1, -1)]);
        if *four != want {
            return Err(format!("n = 13 |value| = 4 class is {four:?}"));
        }
        Ok(())
    });
}

#[test]
fn criterion_6_classifier_matches_the_hom_oracle() {
    check("criterion 6 (classifier vs Hom-space oracle)", || {
        // Theta-free points covering every weight regime, compared for all
        // n <= 6; theta-critical points compared for all n <= 5 (the
        // W^n(b) Hom systems grow too large past that).
        let regime_points: Vec<WeightParams> = vec![
            WeightParams::generic(r(1, 5), r(2, 5)),
            WeightParams::generic(r(1, 2), r(3, 4)).with_spec(RootSpec::RootOfUnity(3)),
            WeightParams::generic(r(1, 1), r(3, 4)),
            WeightParams::generic(r(-1, 4), r(1, 1)),
            WeightParams::generic(r(1, 4), r(11, 4)),
            WeightParams::generic(r(1, 4), r(-7, 4)),
            WeightParams::generic(r(5, 2), r(-1, 2)),
            WeightParams::generic(r(3, 1), r(1, 1)),
        ];
        let theta_points: Vec<WeightParams> = vec![
            WeightParams::generic(r(1, 5), r(2, 5)).with_theta(r(-2, 5)),
            WeightParams::generic(r(1, 2), r(3, 4))
                .with_spec(RootSpec::RootOfUnity(3))
                .with_theta(r(1, 4)),
        ];
        for (max_n, points) in [(6usize, &regime_points), (5, &theta_points)] {
            for p in points {
                let start = Instant::now();
                for n in 1..=max_n {
                    let predicted = if p.theta.is_some() {
                        classify_bnx(n, p).map_err(err)?
                    } else {
                        classify(n, p).map_err(err)?
                    };
                    let spec = Specialization::for_params(p, n, 7 + n as u64).map_err(err)?;
                    let oracle = linkage_blocks(n, &spec).map_err(err)?;
                    if oracle.classes != predicted.classes {
                        return Err(format!(
                            "n = {n}, w1 = {}, w2 = {}, theta = {:?}: oracle {:?} != \
                             classifier {:?}",
                            p.w1, p.w2, p.theta, oracle.classes, predicted.classes
                        ));
                    }
                }
                if start.elapsed() > Duration::from_secs(1800) {
                    return Err(format!(
                        "point w1 = {}, w2 = {} took {:?}, budget 30min",
                        p.w1,
                        p.w2,
                        start.elapsed()
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_7_generic_points_are_semisimple() {
    check("criterion 7 (semisimplicity at generic points)", || {
        let params = WeightParams::generic(r(1, 5), r(2, 5));
        let n = 5;
        for seed in 1..=5u64 {
            let spec = Specialization::for_params(&params, n, seed).map_err(err)?;
            if !gram_rank_semisimple(n, &spec).map_err(err)? {
                return Err(format!("seed {seed}: a Gram determinant vanishes"));
            }
            let part = linkage_blocks(n, &spec).map_err(err)?;
            if part.classes.iter().any(|c| c.len() != 1) {
                return Err(format!("seed {seed}: oracle partition is not all singletons"));
            }
        }
        Ok(())
    });
}

fn rat_fn(p: i64, q: i64) -> RatFn {
    RatFn::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn structural_delta() -> DeltaTuple<RatFn> {
    DeltaTuple {
        delta: rat_fn(7, 2),
        delta_l: rat_fn(5, 3),
        delta_r: rat_fn(-3, 4),
        kappa_l: rat_fn(11, 5),
        kappa_r: rat_fn(-9, 7),
        kappa_lr: rat_fn(13, 6),
    }
}

#[test]
fn criterion_8_structural_suites() {
    check("criterion 8 (structural properties)", || {
        let d = structural_delta();

        // Straightening confluence: 200 random stacks, 10 random rewrite
        // orders each, against the deterministic order.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..200 {
            let n = rng.gen_range(2..=4usize);
            let basis = enumerate_basis(n).map_err(err)?;
            let k = rng.gen_range(2..=4);
            let layers: Vec<_> =
                (0..k).map(|_| basis[rng.gen_range(0..basis.len())].clone()).collect();
            let stack = Stack::new(layers).map_err(err)?;
            let reference = straighten(&stack, &d).map_err(err)?;
            for _ in 0..10 {
                if straighten_random(&stack, &d, &mut rng).map_err(err)? != reference {
                    return Err(format!("confluence failure on trial {trial}"));
                }
            }
        }

        // Associativity on 200 random diagram triples.
        for trial in 0..200 {
            let n = rng.gen_range(2..=4usize);
            let basis = enumerate_basis(n).map_err(err)?;
            let pick = |rng: &mut ChaCha8Rng| {
                AlgebraElement::from_diagram(
                    basis[rng.gen_range(0..basis.len())].clone(),
                    RatFn::one(),
                )
            };
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let lhs = a.mul(&b, &d).map_err(err)?.mul(&c, &d).map_err(err)?;
            let rhs = a.mul(&b.mul(&c, &d).map_err(err)?, &d).map_err(err)?;
            if lhs != rhs {
                return Err(format!("associativity failure on trial {trial}"));
            }
        }

        // Contravariance of the bilinear form: <d u, v> = <u, sigma(d) v>.
        for n in 2..=3usize {
            let basis = enumerate_basis(n).map_err(err)?;
            let mut labels = dn_labels(n);
            labels.push(CellLabel::B { n });
            for lbl in labels {
                let cm = CellModule::new(&lbl).map_err(err)?;
                let g = gram_matrix(&cm, &d);
                for _ in 0..4 {
                    let a = AlgebraElement::from_diagram(
                        basis[rng.gen_range(0..basis.len())].clone(),
                        RatFn::one(),
                    );
                    let m = cm.matrix(&a, &d).map_err(err)?;
                    let ms = cm.matrix(&a.sigma(), &d).map_err(err)?;
                    let dim = cm.dim();
                    for i in 0..dim {
                        for j in 0..dim {
                            let lhs = (0..dim)
                                .fold(RatFn::zero(), |acc, k| &acc + &(&g[i][k] * &m[k][j]));
                            let rhs = (0..dim)
                                .fold(RatFn::zero(), |acc, k| &acc + &(&ms[k][i] * &g[k][j]));
                            if lhs != rhs {
                                return Err(format!("contravariance failure on {lbl}"));
                            }
                        }
                    }
                }
            }
        }

        // The path basis is a unitriangular change of basis from the half
        // diagrams (ordered through the w-bijection by tile count).
        let params = WeightParams::generic(r(1, 5), r(2, 5)).with_theta(r(3, 10));
        for n in 1..=5usize {
            let pb = PathBasis::new(n, &params).map_err(err)?;
            for p in pb.paths() {
                let (wi, ws) = pb.w_diagram(p).ok_or("missing w diagram")?;
                let v = pb.vector(p).ok_or("missing path vector")?;
                if &v[wi] != ws {
                    return Err(format!("diagonal of ({p}) is not unit (n = {n})"));
                }
                for q in pb.paths() {
                    let qi = pb.w_diagram(q).unwrap().0;
                    if qi != wi && !v[qi].is_zero() && tile_count(q) >= tile_count(p) {
                        return Err(format!("v_({p}) has a non-lower term at ({q})"));
                    }
                }
            }
        }

        // F o G = id on every label (and the primed pair likewise).
        for n in 1..=8usize {
            for lbl in dn_labels(n) {
                for (g, f) in
                    [(FunctorMap::G, FunctorMap::F), (FunctorMap::GPrime, FunctorMap::FPrime)]
                {
                    let up = g
                        .apply(&lbl)
                        .map_err(err)?
                        .ok_or_else(|| format!("globalisation annihilated {lbl}"))?;
                    if f.apply(&up).map_err(err)? != Some(lbl) {
                        return Err(format!("F(G({lbl})) != {lbl}"));
                    }
                }
            }
        }

        // The block partition refines the central-eigenvalue relation.
        let points: Vec<(usize, WeightParams)> = vec![
            (8, WeightParams::generic(r(1, 2), r(3, 4)).with_spec(RootSpec::RootOfUnity(3))),
            (8, WeightParams::generic(r(1, 1), r(3, 4))),
            (9, WeightParams::generic(r(1, 4), r(11, 4))),
            (8, WeightParams::generic(r(5, 2), r(-1, 2))),
            (10, WeightParams::generic(r(3, 1), r(1, 1))),
        ];
        for (n, p) in &points {
            let part = classify(*n, p).map_err(err)?;
            for c in &part.classes {
                for (a, b) in c.iter().tuple_combinations() {
                    if !same_eigenvalue(a, b, p).map_err(err)? {
                        return Err(format!("{a} and {b} share a block but not an eigenvalue"));
                    }
                }
            }
        }

        // Predicted homomorphisms exist in the oracle; the proved
        // no-homomorphism pair supports none in either direction.
        let p = WeightParams::generic(r(1, 1), r(3, 4));
        let spec = Specialization::for_params(&p, 5, 21).map_err(err)?;
        let labels = dn_labels(5);
        let mut seen = 0usize;
        for (a, b) in labels.iter().cartesian_product(labels.iter()) {
            if hom_exists(a, b, &p).is_some() {
                seen += 1;
                if hom_space(a, b, &spec).map_err(err)?.dimension == 0 {
                    return Err(format!("predicted hom {a} -> {b} absent in the oracle"));
                }
            }
        }
        if seen == 0 {
            return Err("no predicted homomorphisms at the test point".into());
        }
        let p = WeightParams::generic(r(1, 1), r(3, 1));
        let spec = Specialization::for_params(&p, 5, 22).map_err(err)?;
        let (a, b) = (dn(5, 2, 1, 1), dn(5, 4, -1, 1));
        if hom_exists(&a, &b, &p).is_some() || hom_exists(&b, &a, &p).is_some() {
            return Err("classifier predicts a hom for the proved no-hom pair".into());
        }
        if hom_space(&a, &b, &spec).map_err(err)?.dimension != 0
            || hom_space(&b, &a, &spec).map_err(err)?.dimension != 0
        {
            return Err("oracle finds a hom for the proved no-hom pair".into());
        }
        Ok(())
    });
}
