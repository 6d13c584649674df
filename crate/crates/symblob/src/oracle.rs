//! Brute-force ground truth: exact Hom spaces between cell modules at a
//! specialized parameter point, block partitions as connected components of
//! the Hom quiver, and Gram-rank semisimplicity checks.
//!
//! For a quasi-hereditary cellular algebra with a simple-preserving duality
//! the blocks are the connected components of the Hom quiver between the
//! standard (cell) modules. The oracle computes every `Hom(W_a, W_b)` as
//! the exact null space of the equivariance system `M rho_a(e_i) =
//! rho_b(e_i) M` over all generators, then union-finds the nonzero edges.
//! Nothing from the closed-form block theorems enters here.
//!
//! Specializations are exact: `x` (with `q = x^D`) is set either to a
//! rational of moderate height avoiding a precomputed bad set — the zeros
//! of all parameter denominators and of all candidate box factors with
//! arguments up to `2n` — or to the distinguished root of the cyclotomic
//! field `Q(zeta_{2*l*D})` when `q` is a primitive `2l`-th root of unity.
//! Rational runs are repeated at a second independent point to guard
//! against accidental collisions on the (measure-zero) bad set.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::blocks::BlockPartition;
use crate::cellmod::CellModule;
use crate::diagrams::AlgebraElement;
use crate::exact::{CycElt, CycField, ExactError, ExactResult, RootSpec, Scalar};
use crate::gram::gram_matrix;
use crate::params::{dn_labels, CellLabel, DeltaTuple, WeightParams};

/// Largest `n` for which single Hom-space systems are attempted.
pub const HOM_GUARD: usize = 7;
/// Largest `n` for which the full linkage partition is attempted.
pub const LINKAGE_GUARD: usize = 6;

/// Where `x` is sent: an exact rational point or the distinguished root of
/// a cyclotomic field.
#[derive(Clone, Debug)]
pub enum SpecPoint {
    Rational(BigRational),
    Cyclotomic(Arc<CycField>),
}

/// A fully instantiated parameter point: weights, optional `theta`, and an
/// exact value for `x`.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub params: WeightParams,
    pub point: SpecPoint,
}

/// True when `x0` avoids the bad set at size `n`: every candidate box
/// factor `[(k + a w1 + b w2 + c theta)/2^j]` with `|k| <= 2n` that is not
/// identically zero stays nonzero, and no parameter denominator vanishes.
pub fn admissible_point(params: &WeightParams, n: usize, x0: &BigRational) -> bool {
    // |x0| = 1 forces q = +-1, a root of unity.
    if x0.is_zero() || x0.numer().magnitude() == x0.denom().magnitude() {
        return false;
    }
    let ctx = params.ctx();
    let lim = 2 * n as i64;
    let mut args: BTreeSet<Rational64> = BTreeSet::new();
    let mut thetas = vec![Rational64::zero()];
    if let Some(t) = params.theta {
        thetas.push(t);
        thetas.push(-t);
    }
    for k in -lim..=lim {
        for a in [-1i64, 0, 1] {
            for b in [-1i64, 0, 1] {
                for t in &thetas {
                    let v = Rational64::from_integer(k)
                        + Rational64::from_integer(a) * params.w1
                        + Rational64::from_integer(b) * params.w2
                        + *t;
                    args.insert(v);
                    args.insert(v / Rational64::from_integer(2));
                }
            }
        }
    }
    for v in args {
        if v.is_zero() {
            continue;
        }
        // Arguments outside the q-power lattice cannot occur; skip them.
        let Ok(f) = ctx.box_(v, 0) else { continue };
        match f.eval_at(x0) {
            Ok(val) if !val.is_zero() => {}
            _ => return false,
        }
    }
    true
}

impl Specialization {
    /// Specialize at an explicit rational `x0`, validated against the bad
    /// set for size `n`.
    pub fn at_rational(params: &WeightParams, n: usize, x0: BigRational) -> ExactResult<Self> {
        if !admissible_point(params, n, &x0) {
            return Err(ExactError::Genericity(format!(
                "x0 = {x0} lies in the bad set at n = {n}"
            )));
        }
        Ok(Specialization { params: params.clone(), point: SpecPoint::Rational(x0) })
    }

    /// Specialize in the cyclotomic field of the root-of-unity parameter.
    pub fn at_root_of_unity(params: &WeightParams) -> ExactResult<Self> {
        let RootSpec::RootOfUnity(ell) = params.spec else {
            return Err(ExactError::Other(
                "cyclotomic specialization needs a root-of-unity parameter point".into(),
            ));
        };
        let field = CycField::new(2 * ell as i64 * params.ctx().d());
        Ok(Specialization { params: params.clone(), point: SpecPoint::Cyclotomic(field) })
    }

    /// A seeded random rational point of moderate height (numerator and
    /// denominator at most 50) outside the bad set for size `n`.
    pub fn random(params: &WeightParams, n: usize, seed: u64) -> ExactResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let p: i64 = rng.gen_range(2..=50);
            let q: i64 = rng.gen_range(1..=50);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let x0 = BigRational::new(BigInt::from(sign * p), BigInt::from(q));
            if x0.numer().magnitude() == x0.denom().magnitude() {
                continue;
            }
            if admissible_point(params, n, &x0) {
                return Ok(Specialization {
                    params: params.clone(),
                    point: SpecPoint::Rational(x0),
                });
            }
        }
        Err(ExactError::Genericity("no admissible rational point found".into()))
    }

    /// Dispatch on the parameter point: cyclotomic at a root of unity, the
    /// given rational at a rational point, else a seeded random point.
    pub fn for_params(params: &WeightParams, n: usize, seed: u64) -> ExactResult<Self> {
        match &params.spec {
            RootSpec::RootOfUnity(_) => Specialization::at_root_of_unity(params),
            RootSpec::RationalPoint(x0) => Specialization::at_rational(params, n, x0.clone()),
            RootSpec::Generic => Specialization::random(params, n, seed),
        }
    }

    fn delta_rational(&self, n: usize, x0: &BigRational) -> ExactResult<DeltaTuple<BigRational>> {
        self.params.delta_tuple(n)?.map(|f| f.eval_at(x0))
    }

    fn delta_cyclotomic(&self, n: usize, field: &Arc<CycField>) -> ExactResult<DeltaTuple<CycElt>> {
        self.params.delta_tuple(n)?.map(|f| f.eval_cyc(field))
    }
}

/// Basis matrices of a Hom space, over whichever field the specialization
/// lives in.
#[derive(Clone, Debug)]
pub enum HomBasis {
    Rational(Vec<Vec<Vec<BigRational>>>),
    Cyclotomic(Vec<Vec<Vec<CycElt>>>),
}

/// An exactly computed `Hom(W_source, W_target)`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: CellLabel,
    pub target: CellLabel,
    pub dimension: usize,
    pub basis: HomBasis,
}

/// Incremental exact row reduction over a field.
struct RowReducer<S: Scalar> {
    n_cols: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> RowReducer<S> {
    fn new(n_cols: usize) -> Self {
        RowReducer { n_cols, pivots: vec![], rows: vec![] }
    }

    fn push(&mut self, mut row: Vec<S>) -> ExactResult<()> {
        for (k, &p) in self.pivots.iter().enumerate() {
            if !row[p].vanishes() {
                let f = row[p].clone();
                for c in 0..self.n_cols {
                    row[c] = row[c].sub_ref(&f.mul_ref(&self.rows[k][c]));
                }
            }
        }
        let Some(p) = (0..self.n_cols).find(|&c| !row[c].vanishes()) else {
            return Ok(());
        };
        let inv = row[p].try_recip()?;
        for c in 0..self.n_cols {
            row[c] = row[c].mul_ref(&inv);
        }
        for k in 0..self.rows.len() {
            if !self.rows[k][p].vanishes() {
                let f = self.rows[k][p].clone();
                for c in 0..self.n_cols {
                    self.rows[k][c] = self.rows[k][c].sub_ref(&f.mul_ref(&row[c]));
                }
            }
        }
        self.pivots.push(p);
        self.rows.push(row);
        Ok(())
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A basis of the null space, one vector per free column.
    fn null_space(&self, one: &S) -> Vec<Vec<S>> {
        let zero = one.zero_like();
        let mut basis = vec![];
        for c in 0..self.n_cols {
            if self.pivots.contains(&c) {
                continue;
            }
            let mut v = vec![zero.clone(); self.n_cols];
            v[c] = one.clone();
            for (k, &p) in self.pivots.iter().enumerate() {
                v[p] = zero.sub_ref(&self.rows[k][c]);
            }
            basis.push(v);
        }
        basis
    }
}

/// Null-space basis of the equivariance system `M rho_src(e_i) =
/// rho_tgt(e_i) M`, reshaped into `dim(tgt) x dim(src)` matrices.
fn hom_basis<S: Scalar>(
    src_label: &CellLabel,
    tgt_label: &CellLabel,
    delta: &DeltaTuple<S>,
) -> ExactResult<Vec<Vec<Vec<S>>>> {
    let src = CellModule::new(src_label)?;
    let tgt = CellModule::new(tgt_label)?;
    let n = src.n();
    let one = delta.one();
    let zero = one.zero_like();
    let (d1, d2) = (src.dim(), tgt.dim());
    let unknowns = d1 * d2;
    let mut reducer = RowReducer::new(unknowns);
    for i in 0..=n {
        let g = AlgebraElement::generator(n, i, delta);
        let a = src.matrix(&g, delta)?;
        let b = tgt.matrix(&g, delta)?;
        for r in 0..d2 {
            for j in 0..d1 {
                // Row of the constraint (M a - b M)[r][j] = 0; the unknown
                // M[s][c] sits at index s*d1 + c.
                let mut row = vec![zero.clone(); unknowns];
                for c in 0..d1 {
                    row[r * d1 + c] = row[r * d1 + c].add_ref(&a[c][j]);
                }
                for s in 0..d2 {
                    row[s * d1 + j] = row[s * d1 + j].sub_ref(&b[r][s]);
                }
                reducer.push(row)?;
            }
        }
    }
    let basis = reducer
        .null_space(&one)
        .into_iter()
        .map(|v| v.chunks(d1).map(|chunk| chunk.to_vec()).collect())
        .collect();
    Ok(basis)
}

/// The exact Hom space between two cell modules at the specialization.
pub fn hom_space(l1: &CellLabel, l2: &CellLabel, spec: &Specialization) -> ExactResult<HomSpace> {
    let n = l1.n();
    if n != l2.n() {
        return Err(ExactError::Other(format!("size mismatch: {l1} vs {l2}")));
    }
    if n > HOM_GUARD {
        return Err(ExactError::SizeGuard(format!(
            "hom spaces require n <= {HOM_GUARD} (got {n})"
        )));
    }
    let basis = match &spec.point {
        SpecPoint::Rational(x0) => {
            let delta = spec.delta_rational(n, x0)?;
            HomBasis::Rational(hom_basis(l1, l2, &delta)?)
        }
        SpecPoint::Cyclotomic(field) => {
            let delta = spec.delta_cyclotomic(n, field)?;
            HomBasis::Cyclotomic(hom_basis(l1, l2, &delta)?)
        }
    };
    let dimension = match &basis {
        HomBasis::Rational(b) => b.len(),
        HomBasis::Cyclotomic(b) => b.len(),
    };
    Ok(HomSpace { source: *l1, target: *l2, dimension, basis })
}

fn hom_dim(l1: &CellLabel, l2: &CellLabel, spec: &Specialization) -> ExactResult<usize> {
    Ok(hom_space(l1, l2, spec)?.dimension)
}

/// Block partition as connected components of the Hom quiver, with the
/// `W^n(b)` vertex included whenever `theta` is instantiated.
pub fn linkage_blocks(n: usize, spec: &Specialization) -> ExactResult<BlockPartition> {
    linkage_blocks_guarded(n, spec, LINKAGE_GUARD)
}

pub fn linkage_blocks_guarded(
    n: usize,
    spec: &Specialization,
    guard: usize,
) -> ExactResult<BlockPartition> {
    if n > guard {
        return Err(ExactError::SizeGuard(format!(
            "linkage partitions require n <= {guard} (got {n})"
        )));
    }
    let mut labels = dn_labels(n);
    if spec.params.theta.is_some() {
        labels.push(CellLabel::B { n });
    }
    let pairs: Vec<(usize, usize)> = (0..labels.len())
        .flat_map(|i| (i + 1..labels.len()).map(move |j| (i, j)))
        .collect();
    let linked: Vec<ExactResult<Option<(usize, usize, usize)>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let fwd = hom_dim(&labels[i], &labels[j], spec)?;
            if fwd > 0 {
                return Ok(Some((i, j, fwd)));
            }
            let bwd = hom_dim(&labels[j], &labels[i], spec)?;
            Ok(if bwd > 0 { Some((j, i, bwd)) } else { None })
        })
        .collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    let mut provenance = vec![];
    for entry in linked {
        if let Some((a, b, dim)) = entry? {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi] = lo;
            }
            provenance.push(((labels[a], labels[b]), format!("oracle-hom(dim={dim})")));
        }
    }
    let mut classes: Vec<Vec<CellLabel>> = vec![];
    let mut roots: Vec<usize> = vec![];
    for i in 0..labels.len() {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => classes[k].push(labels[i]),
            None => {
                roots.push(r);
                classes.push(vec![labels[i]]);
            }
        }
    }
    for c in &mut classes {
        c.sort();
    }
    classes.sort();
    Ok(BlockPartition { n, params: spec.params.clone(), classes, provenance })
}

/// True iff every cell Gram matrix has full rank at the specialization.
pub fn gram_rank_semisimple(n: usize, spec: &Specialization) -> ExactResult<bool> {
    let mut labels = dn_labels(n);
    if spec.params.theta.is_some() {
        labels.push(CellLabel::B { n });
    }
    for label in labels {
        let cm = CellModule::new(&label)?;
        let full = match &spec.point {
            SpecPoint::Rational(x0) => {
                let delta = spec.delta_rational(n, x0)?;
                full_rank(&gram_matrix(&cm, &delta))?
            }
            SpecPoint::Cyclotomic(field) => {
                let delta = spec.delta_cyclotomic(n, field)?;
                full_rank(&gram_matrix(&cm, &delta))?
            }
        };
        if !full {
            return Ok(false);
        }
    }
    Ok(true)
}

fn full_rank<S: Scalar>(m: &[Vec<S>]) -> ExactResult<bool> {
    if m.is_empty() {
        return Ok(true);
    }
    let mut reducer = RowReducer::new(m.len());
    for row in m {
        reducer.push(row.clone())?;
    }
    Ok(reducer.rank() == m.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::classify;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn dn(n: usize, m: i64, e1: i8, e2: i8) -> CellLabel {
        CellLabel::Dn { n, m, e1, e2 }
    }

    #[test]
    fn admissible_points_avoid_the_bad_set() {
        let p = WeightParams::generic(r(1, 5), r(2, 5));
        // x^D = q with D = 10 here; x0 = 1 makes q a root of unity and
        // kills the box denominators.
        assert!(!admissible_point(&p, 3, &BigRational::one()));
        assert!(!admissible_point(&p, 3, &BigRational::zero()));
        let spec = Specialization::random(&p, 4, 7).unwrap();
        let SpecPoint::Rational(x0) = &spec.point else { panic!("rational mode") };
        assert!(admissible_point(&p, 4, x0));
    }

    #[test]
    fn hom_space_identity_and_semisimple_vanishing() {
        let p = WeightParams::generic(r(1, 5), r(2, 5));
        let spec = Specialization::random(&p, 3, 1).unwrap();
        let labels = dn_labels(3);
        for a in &labels {
            for b in &labels {
                let d = hom_dim(a, b, &spec).unwrap();
                // Endomorphisms are scalars at a semisimple point, and
                // distinct cells do not talk to each other.
                assert_eq!(d, usize::from(a == b), "Hom({a},{b})");
            }
        }
    }

    #[test]
    fn hom_space_detects_the_w1hom_map() {
        // w1 = 1, w2 = 3/4, generic q: Theorem w1hom predicts a map
        // W^{(5,4)}_{+,e} -> W^{(5,2)}_{-,e}.
        let p = WeightParams::generic(r(1, 1), r(3, 4));
        let spec = Specialization::random(&p, 5, 11).unwrap();
        for e in [1i8, -1] {
            let d = hom_dim(&dn(5, 4, 1, e), &dn(5, 2, -1, e), &spec).unwrap();
            assert!(d >= 1);
        }
        // Lemma nohom: w1 = 1, w2 = 3, m = 2: no hom either way between
        // (2,+,+) and (4,-,+) even though the eigenvalues match.
        let p = WeightParams::generic(r(1, 1), r(3, 1));
        let spec = Specialization::random(&p, 5, 13).unwrap();
        assert_eq!(hom_dim(&dn(5, 2, 1, 1), &dn(5, 4, -1, 1), &spec).unwrap(), 0);
        assert_eq!(hom_dim(&dn(5, 4, -1, 1), &dn(5, 2, 1, 1), &spec).unwrap(), 0);
    }

    #[test]
    fn linkage_matches_classify_at_sample_points() {
        // Semisimple point: all singletons.
        let p = WeightParams::generic(r(1, 5), r(2, 5));
        let spec = Specialization::random(&p, 4, 3).unwrap();
        let part = linkage_blocks(4, &spec).unwrap();
        assert!(part.classes.iter().all(|c| c.len() == 1));
        assert_eq!(part.classes, classify(4, &p).unwrap().classes);
        // One integral weight, n = 5.
        let p = WeightParams::generic(r(1, 1), r(3, 4));
        let spec = Specialization::random(&p, 5, 5).unwrap();
        let part = linkage_blocks(5, &spec).unwrap();
        assert_eq!(part.classes, classify(5, &p).unwrap().classes);
        // Repetition protocol: an independent point gives the same answer.
        let spec2 = Specialization::random(&p, 5, 1005).unwrap();
        assert_eq!(part.classes, linkage_blocks(5, &spec2).unwrap().classes);
    }

    #[test]
    fn linkage_matches_classify_at_a_root_of_unity() {
        // w1 = 1/2, w2 = 3/4, l = 2, n = 5: the qhom pair {(0,+,+),(4,+,+)}.
        let p = WeightParams::generic(r(1, 2), r(3, 4)).with_spec(RootSpec::RootOfUnity(2));
        let spec = Specialization::at_root_of_unity(&p).unwrap();
        let part = linkage_blocks(5, &spec).unwrap();
        assert_eq!(part.classes, classify(5, &p).unwrap().classes);
        assert!(part.same_class(&dn(5, 0, 1, 1), &dn(5, 4, 1, 1)));
    }

    #[test]
    fn gram_rank_detects_semisimplicity() {
        let p = WeightParams::generic(r(1, 5), r(2, 5));
        let spec = Specialization::random(&p, 5, 21).unwrap();
        assert!(gram_rank_semisimple(5, &spec).unwrap());
        // A non-semisimple point: one integral weight at n = 4.
        let p = WeightParams::generic(r(1, 1), r(3, 4));
        let spec = Specialization::random(&p, 4, 23).unwrap();
        assert!(!gram_rank_semisimple(4, &spec).unwrap());
    }

    #[test]
    fn size_guards_fire() {
        let p = WeightParams::generic(r(1, 5), r(2, 5));
        let spec = Specialization::random(&p, 2, 31).unwrap();
        assert!(matches!(
            hom_space(&dn(8, 1, 1, 1), &dn(8, 1, 1, 1), &spec),
            Err(ExactError::SizeGuard(_))
        ));
        assert!(matches!(linkage_blocks(7, &spec), Err(ExactError::SizeGuard(_))));
    }
}
