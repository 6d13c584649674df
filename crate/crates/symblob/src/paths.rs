//! Lattice paths, the diagram basis `w_p` and the orthogonalised path basis
//! `v_p` of `W^n(b)`, the generator action in path coordinates, and the
//! submodules `V^{(n,m)}_{e1,e2}` at critical `theta`.
//!
//! A path is a height sequence `(h_0, ..., h_n)` with `h_0 = 0` and unit
//! steps.  Every path is reached from the fundamental path
//! `p_0 = (0,-1,0,-1,...)` by adding tiles (and half tiles at the right
//! boundary), the canonical route taking the lowest-numbered admissible
//! position first.  The operators `X_i = e_i - r(+-(w1 - h_{i-1}))` for full
//! tiles and `X_n = e_n - k(+-(w1 - h_{n-1}))` for half tiles, with
//! `r(u) = [u+1]/[u]` and
//! `k(u) = -[(u - w2 + theta)/2][(u - w2 - theta)/2] / ([u][w2+1])`,
//! turn the diagram basis into a basis orthogonal for the contravariant
//! form; the change of basis is upper-unitriangular in tile order.

use crate::cellmod::{CellModule, HalfDiagram};
use crate::diagrams::{Diagram, Edge, Word};
use crate::exact::{ExactError, ExactResult, RatFn};
use crate::params::{scheme_convert, CellLabel, DeltaTuple, Scheme, WeightParams};
use num_rational::Rational64;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

/// A lattice path `(h_0, ..., h_n)`: `h_0 = 0`, `|h_{i+1} - h_i| = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    heights: Vec<i64>,
}

impl Path {
    pub fn new(heights: Vec<i64>) -> ExactResult<Path> {
        if heights.len() < 2 || heights[0] != 0 {
            return Err(ExactError::Other(format!(
                "a path starts at height 0 and has at least one step (got {heights:?})"
            )));
        }
        if heights.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return Err(ExactError::Other(format!("path steps must be +-1 (got {heights:?})")));
        }
        Ok(Path { heights })
    }

    /// Number of steps `n`.
    pub fn n(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn h(&self, i: usize) -> i64 {
        self.heights[i]
    }

    pub fn final_height(&self) -> i64 {
        *self.heights.last().unwrap()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for h in &self.heights {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{h}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Path {
    type Err = ExactError;
    fn from_str(s: &str) -> ExactResult<Path> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let heights: Vec<i64> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| ExactError::Other(format!("bad path height '{t}': {e}")))
            })
            .collect::<ExactResult<_>>()?;
        Path::new(heights)
    }
}

/// The fundamental path `p_0 = (0, -1, 0, -1, ...)`.
pub fn fundamental(n: usize) -> Path {
    Path { heights: (0..=n as i64).map(|i| -(i % 2)).collect() }
}

/// All `2^n` paths, ordered by tile count, ties by descending heights (the
/// paper's listing order).
pub fn enumerate(n: usize) -> Vec<Path> {
    let mut out: Vec<Path> = (0..1u64 << n)
        .map(|bits| {
            let mut heights = Vec::with_capacity(n + 1);
            heights.push(0i64);
            for i in 0..n {
                let step = if bits >> i & 1 == 1 { 1 } else { -1 };
                heights.push(heights[i] + step);
            }
            Path { heights }
        })
        .collect();
    let base = fundamental(n);
    sort_in_tile_order(&mut out, &base);
    out
}

/// Sorts paths by tile distance from `base`, ties by descending heights.
fn sort_in_tile_order(paths: &mut [Path], base: &Path) {
    paths.sort_by(|a, b| {
        tile_distance(a, base)
            .cmp(&tile_distance(b, base))
            .then_with(|| b.heights.cmp(&a.heights))
    });
}

/// Number of tiles separating two paths of the same length.
pub fn tile_distance(a: &Path, b: &Path) -> usize {
    debug_assert_eq!(a.n(), b.n());
    a.heights
        .iter()
        .zip(&b.heights)
        .map(|(x, y)| ((x - y).abs() / 2) as usize)
        .sum()
}

/// Number of tiles separating a path from the fundamental path.
pub fn tile_count(p: &Path) -> usize {
    tile_distance(p, &fundamental(p.n()))
}

/// A single tile addition at position `pos` (a half tile iff `pos = n`).
/// `h_prev` is `h_{pos-1}` of the path below, which fixes the `X` scalar:
/// the tile is added from above iff `h_prev >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TileMove {
    pub pos: usize,
    pub half: bool,
    pub up: bool,
    pub h_prev: i64,
}

/// The canonical ordered tile route from `base` to `target` (lowest
/// admissible position first).
pub fn tile_sequence_between(base: &Path, target: &Path) -> ExactResult<Vec<TileMove>> {
    if base.n() != target.n() {
        return Err(ExactError::Other("tile route needs paths of equal length".into()));
    }
    let n = base.n();
    let mut c = base.heights.clone();
    let mut moves = Vec::with_capacity(tile_distance(base, target));
    while c != target.heights {
        let mut progressed = false;
        for i in 1..=n {
            if c[i] == target.heights[i] {
                continue;
            }
            let s = if target.heights[i] > c[i] { 1 } else { -1 };
            let cand = c[i] + 2 * s;
            if (cand - c[i - 1]).abs() != 1 || (i < n && (cand - c[i + 1]).abs() != 1) {
                continue;
            }
            moves.push(TileMove { pos: i, half: i == n, up: s > 0, h_prev: c[i - 1] });
            c[i] = cand;
            progressed = true;
            break;
        }
        if !progressed {
            return Err(ExactError::Other(format!(
                "no admissible tile between {:?} and {:?}",
                c, target.heights
            )));
        }
    }
    Ok(moves)
}

/// The canonical ordered set `P(p)` of tiles from the fundamental path.
pub fn tile_sequence(p: &Path) -> ExactResult<Vec<TileMove>> {
    tile_sequence_between(&fundamental(p.n()), p)
}

// ---------------------------------------------------------------------------
// The scalars r, k, f, g
// ---------------------------------------------------------------------------

fn checked_box(params: &WeightParams, w: Rational64) -> ExactResult<RatFn> {
    let ctx = params.ctx();
    if ctx.box_vanishes(w, &params.spec) {
        return Err(ExactError::Genericity(format!("the box [{w}] vanishes")));
    }
    ctx.box_(w, 0)
}

/// `r(u) = [u+1]/[u]`.
pub fn r_of(params: &WeightParams, u: Rational64) -> ExactResult<RatFn> {
    params.ctx().box_(u, 1)?.div(&checked_box(params, u)?)
}

/// `k(u) = -[(u - w2 + theta)/2][(u - w2 - theta)/2] / ([u][w2+1])`.
pub fn k_of(params: &WeightParams, u: Rational64) -> ExactResult<RatFn> {
    let theta = params
        .theta
        .ok_or_else(|| ExactError::Other("the half-tile scalar k(u) requires theta".into()))?;
    let ctx = params.ctx();
    let half = Rational64::new(1, 2);
    let n1 = ctx.box_((u - params.w2 + theta) * half, 0)?;
    let n2 = ctx.box_((u - params.w2 - theta) * half, 0)?;
    let den = &checked_box(params, u)? * &checked_box(params, params.w2 + 1)?;
    (-&(&n1 * &n2)).div(&den)
}

/// The full-tile Gram eigenvalue factor `f(h) = r(w1 - h) r(-w1 + h)`.
pub fn f_of(params: &WeightParams, h: i64) -> ExactResult<RatFn> {
    let u = params.w1 - Rational64::from_integer(h);
    Ok(&r_of(params, u)? * &r_of(params, -u)?)
}

/// The half-tile Gram eigenvalue factor `g(h) = k(w1 - h) k(-w1 + h)`.
pub fn g_of(params: &WeightParams, h: i64) -> ExactResult<RatFn> {
    let u = params.w1 - Rational64::from_integer(h);
    Ok(&k_of(params, u)? * &k_of(params, -u)?)
}

/// The scalar subtracted in the operator `X` for this move: `r` or `k` of
/// `w1 - h_prev` (tile from above, `h_prev >= 0`) or `-w1 + h_prev` (from
/// below).
pub fn move_scalar(params: &WeightParams, mv: &TileMove) -> ExactResult<RatFn> {
    let hp = Rational64::from_integer(mv.h_prev);
    let u = if mv.h_prev >= 0 { params.w1 - hp } else { -params.w1 + hp };
    if mv.half {
        k_of(params, u)
    } else {
        r_of(params, u)
    }
}

// ---------------------------------------------------------------------------
// The diagram and path bases of W^n(b)
// ---------------------------------------------------------------------------

/// The half diagram of `E'_n = d_0`: adjacent arcs decorated `L`, plus a
/// blobbed propagating line when `n` is odd.
pub fn e_prime(n: usize) -> HalfDiagram {
    let arcs = (0..n / 2).map(|j| Edge::new(2 * j, 2 * j + 1, Word::L)).collect();
    let lines = if n % 2 == 1 { vec![(n - 1, Word::L)] } else { vec![] };
    HalfDiagram { n, arcs, lines }
}

fn apply_gen_vec(
    cm: &CellModule,
    g: &Diagram,
    v: &[RatFn],
    delta: &DeltaTuple<RatFn>,
) -> ExactResult<Vec<RatFn>> {
    let mut out = vec![RatFn::zero(); v.len()];
    for (j, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if let Some((s, i)) = cm.act_on_basis(g, j, delta)? {
            out[i] = &out[i] + &(c * &s);
        }
    }
    Ok(out)
}

fn sub_scaled(v: &mut [RatFn], w: &[RatFn], c: &RatFn) {
    for (vi, wi) in v.iter_mut().zip(w) {
        if !wi.is_zero() {
            *vi = &*vi - &(wi * c);
        }
    }
}

/// `v_p` expanded over the half-diagram basis of `W^n(b)`, built along the
/// canonical tile route.
pub fn path_vector(p: &Path, params: &WeightParams) -> ExactResult<Vec<RatFn>> {
    path_vector_with_moves(p, &tile_sequence(p)?, params)
}

/// `v_p` built along an explicit tile route from the fundamental path; the
/// route is validated move by move (route independence makes the result
/// agree with `path_vector`).
pub fn path_vector_with_moves(
    p: &Path,
    moves: &[TileMove],
    params: &WeightParams,
) -> ExactResult<Vec<RatFn>> {
    let n = p.n();
    let cm = CellModule::new(&CellLabel::B { n })?;
    let delta = scheme_convert(params, Scheme::Dn, n)?;
    let mut c = fundamental(n);
    let mut v = vec![RatFn::zero(); cm.dim()];
    let start = cm
        .index_of(&e_prime(n))
        .ok_or_else(|| ExactError::BadDiagram("E'_n is not a basis half diagram".into()))?;
    v[start] = RatFn::one();
    for mv in moves {
        let i = mv.pos;
        if i == 0 || i > n || mv.half != (i == n) || c.heights[i - 1] != mv.h_prev {
            return Err(ExactError::Other(format!("invalid tile move {mv:?} on {c}")));
        }
        let cand = c.heights[i] + if mv.up { 2 } else { -2 };
        let away = (cand + i as i64 % 2).abs() > (c.heights[i] + i as i64 % 2).abs();
        if (cand - c.heights[i - 1]).abs() != 1
            || (i < n && (cand - c.heights[i + 1]).abs() != 1)
            || !away
        {
            return Err(ExactError::Other(format!("invalid tile move {mv:?} on {c}")));
        }
        let s = move_scalar(params, mv)?;
        let mut next = apply_gen_vec(&cm, &Diagram::generator(n, i), &v, &delta)?;
        sub_scaled(&mut next, &v, &s);
        v = next;
        c.heights[i] = cand;
    }
    if c != *p {
        return Err(ExactError::Other(format!("tile route ends at {c}, not {p}")));
    }
    Ok(v)
}

/// The full path basis of `W^n(b)`: every `w_p` (a scalar multiple of a
/// single half diagram) and every `v_p` in half-diagram coordinates, built
/// once by recursion over tile counts.
pub struct PathBasis {
    cm: CellModule,
    delta: DeltaTuple<RatFn>,
    paths: Vec<Path>,
    index: BTreeMap<Path, usize>,
    w: Vec<(usize, RatFn)>,
    v: Vec<Vec<RatFn>>,
}

impl PathBasis {
    pub fn new(n: usize, params: &WeightParams) -> ExactResult<PathBasis> {
        let cm = CellModule::new(&CellLabel::B { n })?;
        let delta = scheme_convert(params, Scheme::Dn, n)?;
        let paths = enumerate(n);
        let index: BTreeMap<Path, usize> =
            paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let dim = cm.dim();
        let start = cm
            .index_of(&e_prime(n))
            .ok_or_else(|| ExactError::BadDiagram("E'_n is not a basis half diagram".into()))?;
        let mut w: Vec<(usize, RatFn)> = Vec::with_capacity(dim);
        let mut v: Vec<Vec<RatFn>> = Vec::with_capacity(dim);
        for (pi, p) in paths.iter().enumerate() {
            if pi == 0 {
                let mut unit = vec![RatFn::zero(); dim];
                unit[start] = RatFn::one();
                w.push((start, RatFn::one()));
                v.push(unit);
                continue;
            }
            let moves = tile_sequence(p)?;
            let last = *moves.last().expect("a non-fundamental path needs tiles");
            let mut parent = p.clone();
            parent.heights[last.pos] -= if last.up { 2 } else { -2 };
            let pj = index[&parent];
            debug_assert!(pj < pi, "parents precede children in tile order");
            let gen = Diagram::generator(n, last.pos);
            let (pw_idx, pw_scal) = &w[pj];
            let (s, idx) = cm
                .act_on_basis(&gen, *pw_idx, &delta)?
                .expect("generators act without loss on W^n(b)");
            w.push((idx, &s * pw_scal));
            let scal = move_scalar(params, &last)?;
            let mut next = apply_gen_vec(&cm, &gen, &v[pj], &delta)?;
            sub_scaled(&mut next, &v[pj], &scal);
            v.push(next);
        }
        Ok(PathBasis { cm, delta, paths, index, w, v })
    }

    pub fn cell(&self) -> &CellModule {
        &self.cm
    }

    pub fn delta(&self) -> &DeltaTuple<RatFn> {
        &self.delta
    }

    /// Paths in tile order (the order of `vectors` and `w_diagram`).
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// `v_p` in half-diagram coordinates.
    pub fn vector(&self, p: &Path) -> Option<&[RatFn]> {
        self.index_of(p).map(|i| self.v[i].as_slice())
    }

    /// The half-diagram index and scalar of `w_p`.
    pub fn w_diagram(&self, p: &Path) -> Option<(usize, &RatFn)> {
        self.index_of(p).map(|i| (self.w[i].0, &self.w[i].1))
    }
}

// ---------------------------------------------------------------------------
// Generator action in path coordinates
// ---------------------------------------------------------------------------

/// A finite combination of path-basis vectors.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PathVector {
    pub coeffs: BTreeMap<Path, RatFn>,
}

impl PathVector {
    pub fn zero() -> PathVector {
        PathVector::default()
    }

    pub fn add(&mut self, p: Path, c: RatFn) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&p) {
            Some(v) => v + &c,
            None => c,
        };
        if sum.is_zero() {
            self.coeffs.remove(&p);
        } else {
            self.coeffs.insert(p, sum);
        }
    }
}

fn flipped_at(p: &Path, i: usize) -> Path {
    let mut heights = p.heights.clone();
    heights[i] = 2 * heights[i - 1] - heights[i];
    Path { heights }
}

/// The action of the generator `e_i` (`0 <= i <= n`) on `v_p`, expanded in
/// path coordinates per the two-by-two rules of the path-action theorem.
pub fn generator_action(i: usize, p: &Path, params: &WeightParams) -> ExactResult<PathVector> {
    let n = p.n();
    if i > n {
        return Err(ExactError::Other(format!("generator e_{i} out of range for n = {n}")));
    }
    let h = p.heights();
    let mut out = PathVector::zero();
    if i == 0 {
        // v_p is an e_0 eigenvector: [w1]/[w1+1] if h_1 = -1, else 0.
        if h[1] == -1 {
            let dl = params.ctx().box_(params.w1, 0)?.div(&checked_box(params, params.w1 + 1)?)?;
            out.add(p.clone(), dl);
        }
        return Ok(out);
    }
    if i < n && (h[i - 1] - h[i + 1]).abs() == 2 {
        // A slope at position i kills v_p.
        return Ok(out);
    }
    let hp = h[i - 1];
    let u = if hp >= 0 {
        params.w1 - Rational64::from_integer(hp)
    } else {
        -params.w1 + Rational64::from_integer(hp)
    };
    let (s_add, s_other) = if i == n {
        (k_of(params, u)?, k_of(params, -u)?)
    } else {
        (r_of(params, u)?, r_of(params, -u)?)
    };
    let q = flipped_at(p, i);
    if tile_count(&q) > tile_count(p) {
        // p is the lower path: e_i v_p = v_{p'} + s_add v_p.
        out.add(q, RatFn::one());
        out.add(p.clone(), s_add);
    } else {
        // p is the upper path: e_i v_p = s_other v_p + s_other s_add v_q.
        out.add(p.clone(), s_other.clone());
        out.add(q, &s_other * &s_add);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Submodules at critical theta and the isomorphism witness
// ---------------------------------------------------------------------------

/// The critical value `theta = -m + e1 w1 + e2 w2` of a DN label.
pub fn critical_theta(label: &CellLabel, params: &WeightParams) -> Option<Rational64> {
    let canonical = match label {
        CellLabel::Standard { .. } => label.convert().ok()?,
        _ => *label,
    };
    match canonical {
        CellLabel::Dn { m, e1, e2, .. } => Some(
            Rational64::from_integer(-m)
                + params.w1 * (e1 as i64)
                + params.w2 * (e2 as i64),
        ),
        _ => None,
    }
}

/// The path of final height `t` closest to the fundamental path.
pub fn closest_path(n: usize, t: i64) -> ExactResult<Path> {
    enumerate(n)
        .into_iter()
        .find(|p| p.final_height() == t)
        .ok_or_else(|| ExactError::Other(format!("no path of length {n} ends at height {t}")))
}

/// The path basis of the submodule `V^{(n,m)}_{e1,e2}` of `W^n(b)`: the
/// paths with `e1`-signed final height at least `m + 1`, in tile order from
/// the closest path.  Requires `theta` with
/// `[(-m + e1 w1 + e2 w2 +- theta)/2] = 0`.
pub fn submodule_basis(label: &CellLabel, params: &WeightParams) -> ExactResult<Vec<Path>> {
    let canonical = match label {
        CellLabel::Standard { .. } => label.convert()?,
        _ => *label,
    };
    let CellLabel::Dn { n, m, e1, e2 } = canonical else {
        return Err(ExactError::Other(format!("{label} does not name a submodule of W^n(b)")));
    };
    let theta = params
        .theta
        .ok_or_else(|| ExactError::Other("the submodule V^{(n,m)} requires theta".into()))?;
    let core = Rational64::from_integer(-m) + params.w1 * (e1 as i64) + params.w2 * (e2 as i64);
    let ctx = params.ctx();
    let half = Rational64::new(1, 2);
    if !ctx.box_vanishes((core + theta) * half, &params.spec)
        && !ctx.box_vanishes((core - theta) * half, &params.spec)
    {
        return Err(ExactError::Other(format!(
            "theta = {theta} is not critical for {canonical}: neither [({core} +- theta)/2] vanishes"
        )));
    }
    let mut paths: Vec<Path> = enumerate(n)
        .into_iter()
        .filter(|p| (e1 as i64) * p.final_height() >= m + 1)
        .collect();
    let base = closest_path(n, (e1 as i64) * (m + 1))?;
    sort_in_tile_order(&mut paths, &base);
    Ok(paths)
}

/// The generating half diagram `d_{+-(m+1)}` (primed for `e2 = -1`) of
/// `W^{(n,m)}_{e1,e2}`: decorated arcs at the left, the cell's fixed lines
/// at the right.
pub fn cell_generator_diagram(n: usize, m: i64, e1: i8, e2: i8) -> HalfDiagram {
    let k = (m + 1) as usize;
    let arcs = (0..(n - k) / 2).map(|j| Edge::new(2 * j, 2 * j + 1, Word::L)).collect();
    let lines = (0..k)
        .map(|j| {
            let w = if j == 0 && e1 == -1 {
                Word::L
            } else if j == k - 1 && e2 == -1 {
                Word::R
            } else {
                Word::E
            };
            (n - k + j, w)
        })
        .collect();
    HalfDiagram { n, arcs, lines }
}

/// The matrix (half-diagram coordinates of `W^n(b)` by cell basis) of the
/// isomorphism `W^{(n,m)}_{e1,e2} -> V^{(n,m)}_{e1,e2}` generated by
/// `d_{+-(m+1)} -> v_{p_{+-(m+1)}}` at `theta = -m + e1 w1 + e2 w2`.
pub fn iso_witness(label: &CellLabel, params: &WeightParams) -> ExactResult<Vec<Vec<RatFn>>> {
    let canonical = match label {
        CellLabel::Standard { .. } => label.convert()?,
        _ => *label,
    };
    let CellLabel::Dn { n, m, e1, e2 } = canonical else {
        return Err(ExactError::Other(format!("{label} does not name a DN cell module")));
    };
    let crit = critical_theta(&canonical, params).expect("DN labels have a critical theta");
    if params.theta != Some(crit) {
        return Err(ExactError::Other(format!(
            "the isomorphism witness requires theta = -m + e1 w1 + e2 w2 = {crit}"
        )));
    }
    let cell = CellModule::new(&canonical)?;
    let dim_w = cell.dim();
    let pb = PathBasis::new(n, params)?;
    let ambient = pb.cell().dim();
    let delta = pb.delta().clone();
    let g_idx = cell
        .index_of(&cell_generator_diagram(n, m, e1, e2))
        .ok_or_else(|| ExactError::BadDiagram("the cell generator is not a basis element".into()))?;
    let pc = closest_path(n, (e1 as i64) * (m + 1))?;
    let v_pc = pb.vector(&pc).expect("closest path enumerated").to_vec();

    // Gauss-Jordan records (w-part pivots) of pairs (x, phi(x)).
    struct Rec {
        w: Vec<RatFn>,
        b: Vec<RatFn>,
        pivot: usize,
    }
    let mut recs: Vec<Rec> = Vec::with_capacity(dim_w);
    let reduce_insert = |recs: &mut Vec<Rec>, mut w: Vec<RatFn>, mut b: Vec<RatFn>| -> ExactResult<bool> {
        for r in recs.iter() {
            let c = w[r.pivot].clone();
            if !c.is_zero() {
                sub_scaled(&mut w, &r.w, &c);
                sub_scaled(&mut b, &r.b, &c);
            }
        }
        let Some(pivot) = w.iter().position(|c| !c.is_zero()) else {
            return Ok(false);
        };
        let inv = w[pivot].inv()?;
        for c in w.iter_mut().chain(b.iter_mut()) {
            *c = &*c * &inv;
        }
        // Back-eliminate the new pivot from the stored records.
        for r in recs.iter_mut() {
            let c = r.w[pivot].clone();
            if !c.is_zero() {
                sub_scaled(&mut r.w, &w, &c);
                sub_scaled(&mut r.b, &b, &c);
            }
        }
        recs.push(Rec { w, b, pivot });
        Ok(true)
    };

    let mut w0 = vec![RatFn::zero(); dim_w];
    w0[g_idx] = RatFn::one();
    reduce_insert(&mut recs, w0, v_pc)?;
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(ri) = queue.pop_front() {
        if recs.len() == dim_w {
            break;
        }
        for g in 0..=n {
            let gen = Diagram::generator(n, g);
            let (wv, bv) = {
                let r = &recs[ri];
                (
                    apply_gen_vec(&cell, &gen, &r.w, &delta)?,
                    apply_gen_vec(pb.cell(), &gen, &r.b, &delta)?,
                )
            };
            if reduce_insert(&mut recs, wv, bv)? {
                queue.push_back(recs.len() - 1);
            }
        }
    }
    if recs.len() < dim_w {
        return Err(ExactError::Other(format!(
            "the generator orbit spans only {} of {} dimensions of {canonical}",
            recs.len(),
            dim_w
        )));
    }

    // After full back-elimination each record's w is the unit vector at its
    // pivot, so phi of the pivot basis element is the stored image.
    let mut matrix = vec![vec![RatFn::zero(); dim_w]; ambient];
    for r in &recs {
        for (row, bi) in r.b.iter().enumerate() {
            matrix[row][r.pivot] = bi.clone();
        }
    }
    // Bijectivity: the columns must be independent.
    let mut probe: Vec<Vec<RatFn>> = (0..dim_w).map(|j| (0..ambient).map(|i| matrix[i][j].clone()).collect()).collect();
    let mut rank = 0usize;
    for col in 0..ambient {
        let Some(r) = (rank..dim_w).find(|&r| !probe[r][col].is_zero()) else {
            continue;
        };
        probe.swap(rank, r);
        let inv = probe[rank][col].inv()?;
        let lead: Vec<RatFn> = probe[rank].iter().map(|c| c * &inv).collect();
        for row in probe.iter_mut().skip(rank + 1) {
            let c = row[col].clone();
            if !c.is_zero() {
                sub_scaled(row, &lead, &c);
            }
        }
        probe[rank] = lead;
        rank += 1;
        if rank == dim_w {
            break;
        }
    }
    if rank < dim_w {
        return Err(ExactError::Other(format!("the witness map for {canonical} is not injective")));
    }
    Ok(matrix)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellmod::dim_formula;
    use crate::params::dn_labels;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r64(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    fn generic_params() -> WeightParams {
        WeightParams::generic(r64(1, 5), r64(2, 5)).with_theta(r64(3, 10))
    }

    fn pth(hs: &[i64]) -> Path {
        Path::new(hs.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_and_fundamental() {
        assert_eq!(enumerate(3).len(), 8);
        assert_eq!(fundamental(4), pth(&[0, -1, 0, -1, 0]));
        assert_eq!(enumerate(6)[0], fundamental(6));
        // The closest path of final height 2 for n = 6.
        assert_eq!(closest_path(6, 2).unwrap(), pth(&[0, -1, 0, -1, 0, 1, 2]));
        for n in 1..=8usize {
            for lbl in dn_labels(n) {
                let CellLabel::Dn { m, .. } = lbl else { unreachable!() };
                for e1 in [1i64, -1] {
                    let count = enumerate(n)
                        .iter()
                        .filter(|p| e1 * p.final_height() >= m + 1)
                        .count() as u64;
                    assert_eq!(count, dim_formula(n, m), "{lbl} (sign {e1})");
                }
            }
        }
        assert_eq!("0,-1,0,1".parse::<Path>().unwrap(), pth(&[0, -1, 0, 1]));
        assert!("0,1,3".parse::<Path>().is_err());
    }

    #[test]
    fn canonical_tile_sequences() {
        assert!(tile_sequence(&fundamental(5)).unwrap().is_empty());
        // The lowest module path of W^{(5,2)}_{-,-}: full tiles at heights
        // -1, -2, -3 and a half tile at -4 reach the staircase to -5.
        let base = pth(&[0, -1, -2, -3, -4, -3]);
        let target = pth(&[0, -1, -2, -3, -4, -5]);
        let mv = tile_sequence_between(&base, &target).unwrap();
        assert_eq!(mv.len(), 1);
        assert!(mv[0].half && mv[0].pos == 5 && mv[0].h_prev == -4);
        let route = tile_sequence_between(
            &closest_path(5, -3).unwrap(),
            &pth(&[0, -1, -2, -3, -4, -5]),
        )
        .unwrap();
        assert_eq!(
            route.iter().map(|m| (m.pos, m.h_prev, m.half)).collect::<Vec<_>>(),
            vec![(2, -1, false), (3, -2, false), (4, -3, false), (5, -4, true)],
        );
        // Route length always equals the tile distance.
        for p in enumerate(5) {
            assert_eq!(tile_sequence(&p).unwrap().len(), tile_count(&p));
        }
    }

    #[test]
    fn route_independence() {
        let params = generic_params();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let paths = enumerate(4);
        for p in &paths {
            if tile_count(p) < 2 {
                continue;
            }
            let canonical = path_vector(p, &params).unwrap();
            for _ in 0..3 {
                // A random admissible tile order toward p.
                let mut c = fundamental(4);
                let mut moves = Vec::new();
                while c != *p {
                    let options: Vec<TileMove> = (1..=4usize)
                        .filter_map(|i| {
                            if c.h(i) == p.h(i) {
                                return None;
                            }
                            let s = if p.h(i) > c.h(i) { 1 } else { -1 };
                            let cand = c.h(i) + 2 * s;
                            let ok = (cand - c.h(i - 1)).abs() == 1
                                && (i == 4 || (cand - c.h(i + 1)).abs() == 1);
                            ok.then(|| TileMove { pos: i, half: i == 4, up: s > 0, h_prev: c.h(i - 1) })
                        })
                        .collect();
                    let mv = options[rng.gen_range(0..options.len())];
                    moves.push(mv);
                    c.heights[mv.pos] += if mv.up { 2 } else { -2 };
                }
                let alt = path_vector_with_moves(p, &moves, &params).unwrap();
                assert_eq!(alt, canonical, "route dependence on {p}");
            }
        }
    }

    #[test]
    fn unitriangular_change_of_basis() {
        let params = generic_params();
        for n in 1..=5usize {
            let pb = PathBasis::new(n, &params).unwrap();
            // w is a bijection between paths and half diagrams...
            let mut seen: Vec<usize> = pb.paths().iter().map(|p| pb.w_diagram(p).unwrap().0).collect();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), pb.cell().dim(), "w_p misses diagrams at n = {n}");
            for p in pb.paths() {
                let (wi, ws) = pb.w_diagram(p).unwrap();
                assert!(!ws.is_zero());
                let v = pb.vector(p).unwrap();
                // ... the diagonal coefficient is exactly w_p ...
                assert_eq!(&v[wi], ws, "diagonal of {p} is not unit in the w-basis");
                // ... and every other term sits strictly below in tile order.
                for (q, qv) in pb.paths().iter().zip(pb.paths().iter().map(|q| pb.w_diagram(q).unwrap().0)) {
                    if qv != wi && !v[qv].is_zero() {
                        assert!(
                            tile_count(q) < tile_count(p),
                            "v_{p} has a non-lower term at {q} (n = {n})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn generator_action_matches_the_diagram_action() {
        let params = generic_params();
        for n in 2..=4usize {
            let pb = PathBasis::new(n, &params).unwrap();
            for p in pb.paths() {
                for g in 0..=n {
                    let lhs = apply_gen_vec(
                        pb.cell(),
                        &Diagram::generator(n, g),
                        pb.vector(p).unwrap(),
                        pb.delta(),
                    )
                    .unwrap();
                    let mut rhs = vec![RatFn::zero(); pb.cell().dim()];
                    for (q, c) in &generator_action(g, p, &params).unwrap().coeffs {
                        for (i, qc) in pb.vector(q).unwrap().iter().enumerate() {
                            rhs[i] = &rhs[i] + &(qc * c);
                        }
                    }
                    assert_eq!(lhs, rhs, "e_{g} v_p differs on {p} (n = {n})");
                }
            }
        }
    }

    #[test]
    fn blob_restriction_preserves_final_height() {
        // e_0 .. e_{n-1} never change the final height: each graded span is
        // a left-blob submodule.
        let params = generic_params();
        for p in enumerate(4) {
            for g in 0..4usize {
                for q in generator_action(g, &p, &params).unwrap().coeffs.keys() {
                    assert_eq!(q.final_height(), p.final_height());
                }
            }
        }
    }

    #[test]
    fn submodule_closure_exactly_at_critical_theta() {
        let (w1, w2) = (r64(1, 5), r64(2, 5));
        for (m, e1, e2) in [(1i64, 1i8, 1i8), (1, -1, 1), (1, 1, -1), (1, -1, -1), (3, 1, 1)] {
            let lbl = CellLabel::Dn { n: 4, m, e1, e2 };
            let crit = Rational64::from_integer(-m) + w1 * (e1 as i64) + w2 * (e2 as i64);
            let params = WeightParams::generic(w1, w2).with_theta(crit);
            let paths = submodule_basis(&lbl, &params).unwrap();
            assert_eq!(paths.len() as u64, dim_formula(4, m), "{lbl}");
            assert_eq!(paths[0], closest_path(4, (e1 as i64) * (m + 1)).unwrap());
            for p in &paths {
                for g in 0..=4usize {
                    for q in generator_action(g, p, &params).unwrap().coeffs.keys() {
                        assert!(paths.contains(q), "{lbl}: e_{g} v_{p} leaks to {q}");
                    }
                }
            }
            // A perturbed theta is rejected, and the span leaks under e_n.
            let off = WeightParams::generic(w1, w2).with_theta(crit + 1);
            assert!(submodule_basis(&lbl, &off).is_err());
            let leak = paths.iter().any(|p| {
                generator_action(4, p, &off)
                    .unwrap()
                    .coeffs
                    .keys()
                    .any(|q| !paths.contains(q))
            });
            assert!(leak, "{lbl}: no leakage despite non-critical theta");
        }
    }

    #[test]
    fn iso_witness_is_equivariant_and_bijective() {
        let (w1, w2) = (r64(1, 5), r64(2, 5));
        let mut labels = vec![CellLabel::Dn { n: 3, m: 0, e1: 1, e2: 1 }];
        labels.extend(dn_labels(4));
        for lbl in labels {
            let CellLabel::Dn { n, m, e1, e2 } = lbl else { unreachable!() };
            let crit = Rational64::from_integer(-m) + w1 * (e1 as i64) + w2 * (e2 as i64);
            let params = WeightParams::generic(w1, w2).with_theta(crit);
            let phi = iso_witness(&lbl, &params).unwrap();
            let cell = CellModule::new(&lbl).unwrap();
            let pb = PathBasis::new(n, &params).unwrap();
            for g in 0..=n {
                let gen = Diagram::generator(n, g);
                for j in 0..cell.dim() {
                    // phi(e_g u_j) = e_g phi(u_j).
                    let mut unit = vec![RatFn::zero(); cell.dim()];
                    unit[j] = RatFn::one();
                    let gu = apply_gen_vec(&cell, &gen, &unit, pb.delta()).unwrap();
                    let mut lhs = vec![RatFn::zero(); pb.cell().dim()];
                    for (t, c) in gu.iter().enumerate() {
                        if !c.is_zero() {
                            for (row, m_val) in phi.iter().enumerate() {
                                lhs[row] = &lhs[row] + &(&m_val[t] * c);
                            }
                        }
                    }
                    let col: Vec<RatFn> = phi.iter().map(|row| row[j].clone()).collect();
                    let rhs = apply_gen_vec(pb.cell(), &gen, &col, pb.delta()).unwrap();
                    assert_eq!(lhs, rhs, "{lbl}: phi does not intertwine e_{g}");
                }
            }
            // The image lands in the submodule span.
            let module = submodule_basis(&lbl, &params).unwrap();
            let mut span: Vec<Vec<RatFn>> = Vec::new();
            for p in &module {
                span.push(pb.vector(p).unwrap().to_vec());
            }
            for j in 0..cell.dim() {
                let mut x: Vec<RatFn> = phi.iter().map(|row| row[j].clone()).collect();
                // Eliminate against the triangular v_p family (each has a
                // leading w-diagram coordinate).
                for p in module.iter().rev() {
                    let (wi, _) = pb.w_diagram(p).unwrap();
                    let c = x[wi].clone();
                    if !c.is_zero() {
                        let vp = pb.vector(p).unwrap();
                        let lead = vp[wi].inv().unwrap();
                        sub_scaled(&mut x, vp, &(&c * &lead));
                    }
                }
                assert!(x.iter().all(|c| c.is_zero()), "{lbl}: column {j} escapes V");
            }
        }
    }

    #[test]
    fn genericity_errors_name_the_offending_box() {
        // w1 integral makes [w1 - h] vanish for h = w1.
        let params = WeightParams::generic(r64(1, 1), r64(2, 5)).with_theta(r64(3, 10));
        let err = r_of(&params, params.w1 - Rational64::from_integer(1)).unwrap_err();
        assert!(matches!(err, ExactError::Genericity(_)), "{err}");
        let p = pth(&[0, 1, 2]);
        assert!(matches!(
            path_vector(&p, &params),
            Err(ExactError::Genericity(_)) | Ok(_)
        ));
    }
}
