//! Block classification for `b'_n` and `b^x_n`: master congruences, the
//! hom-existence predicates, regime classifiers, globalisation/localisation
//! functors, the critical-`theta` extension, decomposition graphs, and
//! weight-space SVG plots.
//!
//! Two cell modules `W^{(n,m)}_{e1,e2}` and `W^{(n,t)}_{h1,h2}` can only lie
//! in the same block when their central-element eigenvalues agree, which
//! reduces to one of eight master congruences mod `2l` (`l = 0` encodes "q
//! not a root of unity" and turns every congruence into an equality):
//!
//! ```text
//!   m - t =  2 e1 w1 + 2 e2 w2   (w1w2neg)   m + t = 2 e1 w1 + 2 e2 w2  (w1w2pos)
//!   m - t =  2 e1 w1             (w1neg)     m + t = 2 e1 w1            (w1pos)
//!   m - t =  2 e2 w2             (w2neg)     m + t = 2 e2 w2            (w2pos)
//!   m - t =  0                   (trivial)   m + t = 0                  (impossible)
//! ```
//!
//! Sufficiency is supplied by four families of cell-module homomorphisms
//! (rules `qhom`, `w1hom`, `w2hom`, `w1w2hom`) and by the exchange functors
//! `G, G', F, F'` between `b'_n` and `b'_{n+1}`, which satisfy `F G = id`
//! and are label-neutral when composed twice. The classifier dispatches on
//! the integrality pattern of `w1, w2, w1 + w2, w1 - w2`; when both weights
//! are integral and `n` is small the blocks are obtained by localising the
//! large-`n` hom graph, i.e. by taking connected components of the
//! hom-edge graph induced on the labels that survive at level `n`.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde_json::json;

use crate::exact::{ExactError, ExactResult, RootSpec};
use crate::params::{dn_labels, weight_coords, CellLabel, WeightParams};

/// Identifiers of the eight master congruences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MasterEq {
    W1W2Neg,
    W1Neg,
    W2Neg,
    Trivial,
    W1W2Pos,
    W1Pos,
    W2Pos,
    Impossible,
}

impl fmt::Display for MasterEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MasterEq::W1W2Neg => "w1w2neg",
            MasterEq::W1Neg => "w1neg",
            MasterEq::W2Neg => "w2neg",
            MasterEq::Trivial => "trivial",
            MasterEq::W1W2Pos => "w1w2pos",
            MasterEq::W1Pos => "w1pos",
            MasterEq::W2Pos => "w2pos",
            MasterEq::Impossible => "impossible",
        };
        f.write_str(s)
    }
}

/// A satisfied master congruence for a pair of labels, with the exact
/// multiple of `2l` by which the two sides differ.
#[derive(Clone, Debug, PartialEq)]
pub struct MasterSolution {
    pub eq: MasterEq,
    pub source: (i64, i8, i8),
    pub target: (i64, i8, i8),
    pub residue: Rational64,
}

/// The four hom-existence rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomRule {
    Qhom,
    W1Hom,
    W2Hom,
    W1W2Hom,
}

impl fmt::Display for HomRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HomRule::Qhom => "qhom",
            HomRule::W1Hom => "w1hom",
            HomRule::W2Hom => "w2hom",
            HomRule::W1W2Hom => "w1w2hom",
        };
        f.write_str(s)
    }
}

/// `d ~ 0 (mod 2l)` on exact rationals; `l = 0` demands `d = 0`.
fn congruent(d: Rational64, ell: i64) -> bool {
    if ell == 0 {
        d.is_zero()
    } else {
        (d / Rational64::from_integer(2 * ell)).is_integer()
    }
}

fn rat(x: i64) -> Rational64 {
    Rational64::from_integer(x)
}

/// All master congruences satisfied by the pair `(m, e1, e2)`, `(t, h1, h2)`
/// at the weight point `(w1, w2)` with `q` a primitive `2l`-th root of unity
/// (`l = 0`: not a root of unity).
#[allow(clippy::too_many_arguments)]
pub fn master_solutions(
    m: i64,
    e1: i8,
    e2: i8,
    t: i64,
    h1: i8,
    h2: i8,
    w1: Rational64,
    w2: Rational64,
    ell: i64,
) -> Vec<MasterSolution> {
    let dm = rat(m - t);
    let sm = rat(m + t);
    let tw1 = rat(2 * e1 as i64) * w1;
    let tw2 = rat(2 * e2 as i64) * w2;
    let mut out = vec![];
    let mut push = |eq: MasterEq, lhs: Rational64, rhs: Rational64| {
        if congruent(lhs - rhs, ell) {
            out.push(MasterSolution { eq, source: (m, e1, e2), target: (t, h1, h2), residue: lhs - rhs });
        }
    };
    if e1 != h1 && e2 != h2 {
        push(MasterEq::W1W2Neg, dm, tw1 + tw2);
        push(MasterEq::Impossible, sm, Rational64::zero());
    } else if e1 != h1 {
        push(MasterEq::W1Neg, dm, tw1);
        push(MasterEq::W2Pos, sm, tw2);
    } else if e2 != h2 {
        push(MasterEq::W2Neg, dm, tw2);
        push(MasterEq::W1Pos, sm, tw1);
    } else {
        push(MasterEq::Trivial, dm, Rational64::zero());
        push(MasterEq::W1W2Pos, sm, tw1 + tw2);
    }
    out
}

fn dn_parts(label: &CellLabel) -> Option<(usize, i64, i8, i8)> {
    let dn = match label {
        CellLabel::Dn { .. } => *label,
        CellLabel::Standard { .. } => label.convert().ok()?,
        CellLabel::B { .. } => return None,
    };
    match dn {
        CellLabel::Dn { n, m, e1, e2 } => Some((n, m, e1, e2)),
        _ => None,
    }
}

/// Existence of a one-step cell-module homomorphism `source -> target`,
/// returning the rule that provides it. This is a predicate on the four
/// hom theorems only; the map itself is not constructed here.
pub fn hom_exists(source: &CellLabel, target: &CellLabel, params: &WeightParams) -> Option<HomRule> {
    if !source.is_valid() || !target.is_valid() || source == target {
        return None;
    }
    let (n, m, e1, e2) = dn_parts(source)?;
    let (tn, t, h1, h2) = dn_parts(target)?;
    if n != tn {
        return None;
    }
    let ell = params.ell();
    let (w1, w2) = (params.w1, params.w2);
    // qhom: q a primitive 2l-th root of unity, neither weight integral.
    // Target validity enforces the "m - 2l = 0 only if e1 = e2 = 1" proviso.
    if ell > 0
        && !w1.is_integer()
        && !w2.is_integer()
        && (h1, h2) == (e1, e2)
        && t == m - 2 * ell
        && t >= 0
    {
        return Some(HomRule::Qhom);
    }
    // w1hom: w1 integral, t = m - 2(e1 w1 + r l) with m > t > 0.
    if w1.is_integer()
        && (h1, h2) == (-e1, e2)
        && m > t
        && t > 0
        && congruent(rat(m - t) - rat(2 * e1 as i64) * w1, ell)
    {
        return Some(HomRule::W1Hom);
    }
    // w2hom: mirror image in the right boundary.
    if w2.is_integer()
        && (h1, h2) == (e1, -e2)
        && m > t
        && t > 0
        && congruent(rat(m - t) - rat(2 * e2 as i64) * w2, ell)
    {
        return Some(HomRule::W2Hom);
    }
    // w1w2hom: e1 w1 + e2 w2 integral, t = 2(e1 w1 + e2 w2 + r l) - m with
    // m > t >= 0 (t = 0 only for (+,+), enforced by target validity).
    let s = rat(e1 as i64) * w1 + rat(e2 as i64) * w2;
    if s.is_integer()
        && (h1, h2) == (e1, e2)
        && m > t
        && t >= 0
        && congruent(rat(m + t) - rat(2) * s, ell)
    {
        return Some(HomRule::W1W2Hom);
    }
    None
}

/// The exchange functors between `b'_n` and `b'_{n+1}` (globalisation
/// `G, G'`, localisation `F, F'`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctorMap {
    G,
    GPrime,
    F,
    FPrime,
}

impl FunctorMap {
    /// The label map; `None` means the module is annihilated (localisation
    /// of a label with no cap room: `m = n - 1` with the flipped sign `+`).
    pub fn apply(&self, label: &CellLabel) -> ExactResult<Option<CellLabel>> {
        let (n, m, e1, e2) = dn_parts(label)
            .filter(|_| label.is_valid())
            .ok_or_else(|| ExactError::Other(format!("functor undefined on {label}")))?;
        let out = match self {
            FunctorMap::G => Some(CellLabel::Dn { n: n + 1, m: m + e1 as i64, e1: -e1, e2 }),
            FunctorMap::GPrime => Some(CellLabel::Dn { n: n + 1, m: m + e2 as i64, e1, e2: -e2 }),
            FunctorMap::F => {
                if m == n as i64 - 1 && e1 == 1 {
                    None
                } else {
                    Some(CellLabel::Dn { n: n - 1, m: m + e1 as i64, e1: -e1, e2 })
                }
            }
            FunctorMap::FPrime => {
                if m == n as i64 - 1 && e2 == 1 {
                    None
                } else {
                    Some(CellLabel::Dn { n: n - 1, m: m + e2 as i64, e1, e2: -e2 })
                }
            }
        };
        Ok(out)
    }

    /// The weight change accompanying the functor: `G` and `F` apply the
    /// involution `w1 -> -w1 - 1`; the primed functors act on `w2`.
    pub fn map_params(&self, params: &WeightParams) -> WeightParams {
        let mut p = params.clone();
        match self {
            FunctorMap::G | FunctorMap::F => p.w1 = -p.w1 - 1,
            FunctorMap::GPrime | FunctorMap::FPrime => p.w2 = -p.w2 - 1,
        }
        p
    }
}

/// Convenience free function mirroring [`FunctorMap::apply`].
pub fn functor_map(which: FunctorMap, label: &CellLabel) -> ExactResult<Option<CellLabel>> {
    which.apply(label)
}

/// A block partition of the cell labels of `b'_n` (or `b^x_n` when the
/// `W^n(b)` label is included), with a per-pair rule trail.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPartition {
    pub n: usize,
    pub params: WeightParams,
    pub classes: Vec<Vec<CellLabel>>,
    pub provenance: Vec<((CellLabel, CellLabel), String)>,
}

impl BlockPartition {
    /// Index of the class containing `label`, if present.
    pub fn class_of(&self, label: &CellLabel) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(label))
    }

    /// True when both labels are present and share a class.
    pub fn same_class(&self, a: &CellLabel, b: &CellLabel) -> bool {
        matches!((self.class_of(a), self.class_of(b)), (Some(i), Some(j)) if i == j)
    }

    /// The documented JSON schema `{ n, params, classes, provenance }`.
    pub fn to_json(&self) -> serde_json::Value {
        let spec = match &self.params.spec {
            RootSpec::Generic => "generic".to_string(),
            RootSpec::RationalPoint(x) => format!("q0={x}"),
            RootSpec::RootOfUnity(l) => format!("root-of-unity {l}"),
        };
        json!({
            "n": self.n,
            "params": {
                "w1": self.params.w1.to_string(),
                "w2": self.params.w2.to_string(),
                "theta": self.params.theta.map(|t| t.to_string()),
                "ell": self.params.ell(),
                "scheme": format!("{:?}", self.params.scheme).to_lowercase(),
                "spec": spec,
            },
            "classes": self.classes.iter()
                .map(|c| c.iter().map(|l| l.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "provenance": self.provenance.iter()
                .map(|((a, b), rule)| json!({ "pair": [a.to_string(), b.to_string()], "rule": rule }))
                .collect::<Vec<_>>(),
        })
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.0[ri.max(rj)] = ri.min(rj);
        }
    }
}

/// Integrality pattern of the weight pair, most specific case first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Regime {
    BothInt,
    W1Int,
    W2Int,
    HalfInt,
    SumInt,
    DiffInt,
    Generic,
}

fn regime(w1: Rational64, w2: Rational64) -> Regime {
    let (i1, i2) = (w1.is_integer(), w2.is_integer());
    let (is, id) = ((w1 + w2).is_integer(), (w1 - w2).is_integer());
    match (i1, i2, is, id) {
        (true, true, ..) => Regime::BothInt,
        (true, false, ..) => Regime::W1Int,
        (false, true, ..) => Regime::W2Int,
        (_, _, true, true) => Regime::HalfInt,
        (_, _, true, false) => Regime::SumInt,
        (_, _, false, true) => Regime::DiffInt,
        _ => Regime::Generic,
    }
}

fn weight_value(m: i64, e1: i8, e2: i8, w1: Rational64, w2: Rational64) -> Rational64 {
    rat(m) - rat(e1 as i64) * w1 - rat(e2 as i64) * w2
}

/// `|a| ~ |b| (mod 2l)`, i.e. `a ~ b` or `a ~ -b`.
fn cong_abs(a: Rational64, b: Rational64, ell: i64) -> bool {
    congruent(a - b, ell) || congruent(a + b, ell)
}

/// The iff-criterion of the closed-form regime theorems; `None` when the
/// pair is in different blocks. Not used in the both-integral small-`n`
/// case, which localises the hom graph instead.
fn same_block_rule(
    a: (i64, i8, i8),
    b: (i64, i8, i8),
    w1: Rational64,
    w2: Rational64,
    ell: i64,
    reg: Regime,
) -> Option<&'static str> {
    let (m, e1, e2) = a;
    let (t, h1, h2) = b;
    let va = weight_value(m, e1, e2, w1, w2);
    let vb = weight_value(t, h1, h2, w1, w2);
    match reg {
        Regime::Generic => {
            if ell > 0 && (e1, e2) == (h1, h2) && congruent(rat(m - t), ell) {
                Some("qrootofunity")
            } else {
                None
            }
        }
        Regime::W1Int => (e2 == h2 && cong_abs(va, vb, ell)).then_some("w1int"),
        Regime::W2Int => (e1 == h1 && cong_abs(va, vb, ell)).then_some("w1int"),
        Regime::SumInt => {
            (e1 == e2 && (h1, h2) == (e1, e2) && cong_abs(va, vb, ell)).then_some("w1+w2")
        }
        Regime::DiffInt => {
            (e1 == -e2 && (h1, h2) == (e1, e2) && cong_abs(va, vb, ell)).then_some("w1-w2")
        }
        Regime::HalfInt => {
            ((h1, h2) == (e1, e2) && cong_abs(va, vb, ell)).then_some("w1+w2andw1-w2")
        }
        // Large-n closed form: same absolute weight value, no sign condition.
        Regime::BothInt => cong_abs(va, vb, ell).then_some(if ell == 0 {
            "qnot1w1w2"
        } else {
            "qw1w2"
        }),
    }
}

/// The size bound above which the both-integral closed form applies:
/// `2|w1| + 2|w2| + (sgn w1 + sgn w2)/2`.
fn integral_threshold(w1: i64, w2: i64) -> i64 {
    2 * w1.abs() + 2 * w2.abs() + (w1.signum() + w2.signum()) / 2
}

fn collect_classes(labels: &[CellLabel], uf: &mut UnionFind) -> Vec<Vec<CellLabel>> {
    let mut classes: Vec<Vec<CellLabel>> = vec![];
    let mut roots: Vec<usize> = vec![];
    for i in 0..labels.len() {
        let r = uf.find(i);
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
    classes
}

fn check_supported(params: &WeightParams) -> ExactResult<()> {
    if !params.path_basis_ok() {
        return Err(ExactError::Other(
            "unsupported parameter point: one of [w1], [w1+1], [w2], [w2+1] vanishes".into(),
        ));
    }
    Ok(())
}

/// The block partition of `b'_n` at the given parameter point.
pub fn classify(n: usize, params: &WeightParams) -> ExactResult<BlockPartition> {
    if n == 0 {
        return Err(ExactError::Other("n must be at least 1".into()));
    }
    check_supported(params)?;
    let labels = dn_labels(n);
    let (w1, w2, ell) = (params.w1, params.w2, params.ell());
    let reg = regime(w1, w2);
    let mut uf = UnionFind::new(labels.len());
    let mut provenance: Vec<((CellLabel, CellLabel), String)> = vec![];
    let localise = reg == Regime::BothInt
        && !(ell == 0 && n as i64 >= integral_threshold(w1.to_integer(), w2.to_integer()));
    if localise {
        // Small n or root of unity with both weights integral: connected
        // components of the hom-edge graph induced on the surviving labels.
        // (Globalising twice is label- and weight-neutral, so the graph at
        // level n is exactly the localised large-n graph.)
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for i in 0..labels.len() {
            for j in 0..labels.len() {
                if i == j {
                    continue;
                }
                if let Some(rule) = hom_exists(&labels[i], &labels[j], params) {
                    uf.union(i, j);
                    edges.insert((i.min(j), i.max(j)));
                    provenance.push(((labels[i], labels[j]), rule.to_string()));
                }
            }
        }
        let chain_rule = if ell == 0 { "qnot1w1w2loc" } else { "qw1w2" };
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                if uf.find(i) == uf.find(j) && !edges.contains(&(i, j)) {
                    provenance.push(((labels[i], labels[j]), chain_rule.to_string()));
                }
            }
        }
    } else {
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                let a = dn_parts(&labels[i]).expect("dn label");
                let b = dn_parts(&labels[j]).expect("dn label");
                if let Some(rule) =
                    same_block_rule((a.1, a.2, a.3), (b.1, b.2, b.3), w1, w2, ell, reg)
                {
                    uf.union(i, j);
                    provenance.push(((labels[i], labels[j]), rule.to_string()));
                }
            }
        }
    }
    let classes = collect_classes(&labels, &mut uf);
    Ok(BlockPartition { n, params: params.clone(), classes, provenance })
}

/// Whether `theta` is critical: a witness `(m, e1, e2)` with minimal
/// admissible `m >= 0` such that `theta ~ +-(-m + e1 w1 + e2 w2) (mod 2l)`,
/// together with the `2l`-multiple separating the witness from the base
/// solution.
pub fn critical_theta(
    theta: Rational64,
    params: &WeightParams,
) -> Option<(i64, i8, i8, Rational64)> {
    let ell = params.ell();
    let mut best: Option<(i64, i8, i8, Rational64)> = None;
    for e1 in [1i8, -1] {
        for e2 in [1i8, -1] {
            for s in [1i64, -1] {
                let base = rat(e1 as i64) * params.w1 + rat(e2 as i64) * params.w2
                    - rat(s) * theta;
                if !base.is_integer() {
                    continue;
                }
                let b = base.to_integer();
                let mut m = if ell == 0 {
                    if b < 0 {
                        continue;
                    }
                    b
                } else {
                    b.rem_euclid(2 * ell)
                };
                // m = 0 only labels a module with signs (+,+).
                if m == 0 && (e1, e2) != (1, 1) {
                    if ell == 0 {
                        continue;
                    }
                    m += 2 * ell;
                }
                if best.map_or(true, |(bm, ..)| m < bm) {
                    best = Some((m, e1, e2, rat(b - m)));
                }
            }
        }
    }
    best
}

/// The block partition of `b^x_n`: the `b'_n` partition together with the
/// `W^n(b)` class. For non-critical `theta` the latter is a singleton;
/// otherwise `W^n(b)` joins the class of every label `(m, e1, e2)` at level
/// `n` whose weight exponent matches `theta` up to sign mod `2l`.
pub fn classify_bnx(n: usize, params: &WeightParams) -> ExactResult<BlockPartition> {
    let theta = params
        .theta
        .ok_or_else(|| ExactError::Other("classify_bnx requires theta".into()))?;
    let base = classify(n, params)?;
    let ell = params.ell();
    let b_label = CellLabel::B { n };
    let mut witnesses: Vec<CellLabel> = vec![];
    for lbl in dn_labels(n) {
        let (_, m, e1, e2) = dn_parts(&lbl).expect("dn label");
        let u = -rat(m) + rat(e1 as i64) * params.w1 + rat(e2 as i64) * params.w2;
        if congruent(theta - u, ell) || congruent(theta + u, ell) {
            witnesses.push(lbl);
        }
    }
    let mut classes = base.classes.clone();
    let mut provenance = base.provenance.clone();
    let hit: Vec<usize> = (0..classes.len())
        .filter(|&k| classes[k].iter().any(|l| witnesses.contains(l)))
        .collect();
    let mut merged = vec![b_label];
    for &k in hit.iter().rev() {
        merged.extend(classes.remove(k));
    }
    for w in &witnesses {
        provenance.push(((b_label, *w), "blocksbnx".to_string()));
    }
    merged.sort();
    classes.push(merged);
    classes.sort();
    Ok(BlockPartition { n, params: params.clone(), classes, provenance })
}

/// The decomposition graph: all labels of `b'_n` as vertices, hom-existence
/// arrows, and dotted (status unknown) edges between same-block labels
/// joined by no direct arrow. Dotted edges play no role in the block
/// computation.
#[derive(Clone, Debug)]
pub struct DecompGraph {
    pub vertices: Vec<CellLabel>,
    pub arrows: Vec<(usize, usize, HomRule)>,
    pub dotted: Vec<(usize, usize)>,
}

pub fn decomp_graph(n: usize, params: &WeightParams) -> ExactResult<DecompGraph> {
    let partition = classify(n, params)?;
    let vertices = dn_labels(n);
    let mut arrows = vec![];
    for i in 0..vertices.len() {
        for j in 0..vertices.len() {
            if i == j {
                continue;
            }
            if let Some(rule) = hom_exists(&vertices[i], &vertices[j], params) {
                arrows.push((i, j, rule));
            }
        }
    }
    let mut dotted = vec![];
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let linked = arrows.iter().any(|&(a, b, _)| (a, b) == (i, j) || (a, b) == (j, i));
            if !linked && partition.same_class(&vertices[i], &vertices[j]) {
                dotted.push((i, j));
            }
        }
    }
    Ok(DecompGraph { vertices, arrows, dotted })
}

const PALETTE: [&str; 8] =
    ["#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085", "#7f8c8d", "#2c3e50"];

/// A deterministic SVG plot of the weight-space picture: four labelled
/// diagonal arms, one dot per label at its weight coordinates, and dashed
/// polylines joining the dots of every non-singleton block.
pub fn plot_weights(n: usize, params: &WeightParams, partition: &BlockPartition) -> String {
    let size = 640.0_f64;
    let mid = size / 2.0;
    let labels = dn_labels(n);
    let coords: Vec<(CellLabel, f64, f64)> = labels
        .iter()
        .filter_map(|l| {
            let (x, y) = weight_coords(l, params.w1, params.w2)?;
            Some((*l, *x.numer() as f64 / *x.denom() as f64, *y.numer() as f64 / *y.denom() as f64))
        })
        .collect();
    let rmax = coords
        .iter()
        .flat_map(|&(_, x, y)| [x.abs(), y.abs()])
        .fold(1.0_f64, f64::max);
    let scale = (mid - 60.0) / rmax;
    let px = |x: f64, y: f64| (mid + x * scale, mid - y * scale);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" \
         viewBox=\"0 0 {size} {size}\">\n"
    ));
    svg.push_str(&format!(
        "  <title>b'_{n} cell modules at w1={}, w2={}, ell={}</title>\n",
        params.w1,
        params.w2,
        params.ell()
    ));
    // The four arms lie along the diagonals of weight space.
    let arm = mid - 40.0;
    for (dx, dy, name) in
        [(1.0, 1.0, "(+,+)"), (-1.0, 1.0, "(-,+)"), (1.0, -1.0, "(+,-)"), (-1.0, -1.0, "(-,-)")]
    {
        let (x, y) = (mid + dx * arm, mid - dy * arm);
        svg.push_str(&format!(
            "  <line x1=\"{mid:.1}\" y1=\"{mid:.1}\" x2=\"{x:.1}\" y2=\"{y:.1}\" \
             stroke=\"#cccccc\" stroke-width=\"1\"/>\n"
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\">{name}</text>\n",
            mid + dx * (arm + 20.0),
            mid - dy * (arm + 20.0) + 5.0,
        ));
    }
    // Dashed polylines through the members of every non-singleton class.
    for (k, class) in partition.classes.iter().enumerate() {
        let pts: Vec<(f64, f64)> = class
            .iter()
            .filter_map(|l| coords.iter().find(|(c, ..)| c == l))
            .map(|&(_, x, y)| px(x, y))
            .collect();
        if pts.len() < 2 {
            continue;
        }
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
        svg.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" \
             stroke-dasharray=\"5 4\"/>\n",
            path.join(" "),
            PALETTE[k % PALETTE.len()],
        ));
    }
    for &(label, x, y) in &coords {
        let (cx, cy) = px(x, y);
        svg.push_str(&format!(
            "  <circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"4\" fill=\"#222222\">\
             <title>{label}</title></circle>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
