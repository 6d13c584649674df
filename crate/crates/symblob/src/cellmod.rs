//! Cell (standard) modules of `b^x_n` over half-diagram bases.
//!
//! A half diagram for `W^{(n,m)}_{e1,e2}` has `n` nodes on its northern
//! boundary, `m + 1` propagating lines leaving through ordered southern
//! exits, and decorated arcs on the remaining nodes.  The leftmost line
//! carries `L` iff `e1 = -1`, the rightmost carries `R` iff `e2 = -1`; all
//! other lines are undecorated.  The `2^n`-dimensional module `W^n(b)` has no
//! exits for even `n` and a single exit for odd `n`, whose line carries `L`
//! or `RL`; its arcs may additionally span both walls (`LR`).
//!
//! The algebra acts by stacking a diagram on top of a half diagram,
//! straightening, and truncating to the cell: results with fewer propagating
//! lines, or with decorations beyond the cell's pattern, lie in lower cells
//! of the poset and are set to zero.

use crate::diagrams::{
    edge_self_ok, edges_compatible, noncrossing_matchings, reduce_loop_word, reduce_open_word,
    AlgebraElement, Diagram, Edge, Letter, Word,
};
use crate::exact::{ExactError, ExactResult, Scalar};
use crate::params::{CellLabel, DeltaTuple};
use itertools::Itertools;
use std::collections::BTreeMap;
use std::fmt;

/// Maximum `n` for cell-module construction.
pub const CELL_GUARD: usize = 8;

/// A half diagram: decorated arcs over `n` nodes plus ordered propagating
/// lines `(top position, word)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfDiagram {
    pub n: usize,
    pub arcs: Vec<Edge>,
    pub lines: Vec<(usize, Word)>,
}

impl fmt::Display for HalfDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for e in &self.arcs {
            write!(f, " {}-{}", e.a + 1, e.b + 1)?;
            if e.word != Word::E {
                write!(f, ":{:?}", e.word)?;
            }
        }
        write!(f, " |")?;
        for (t, w) in &self.lines {
            write!(f, " {}", t + 1)?;
            if *w != Word::E {
                write!(f, ":{w:?}")?;
            }
        }
        Ok(())
    }
}

impl HalfDiagram {
    /// All edges (arcs plus lines-to-exits) in the chord model used for
    /// planarity: exits are represented as southern nodes `n + j`.
    fn chord_edges(&self) -> Vec<Edge> {
        let mut es: Vec<Edge> = self.arcs.clone();
        for (j, (t, w)) in self.lines.iter().enumerate() {
            es.push(Edge { a: *t, b: self.n + j, word: *w });
        }
        es
    }

    pub fn is_valid(&self) -> bool {
        let n = self.n;
        let mut seen = vec![false; n];
        for e in &self.arcs {
            if e.b >= n || e.a >= e.b {
                return false;
            }
            for v in [e.a, e.b] {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        let mut last = None;
        for (t, _) in &self.lines {
            if *t >= n || seen[*t] || last.map_or(false, |p| p >= *t) {
                return false;
            }
            seen[*t] = true;
            last = Some(*t);
        }
        if seen.iter().any(|s| !s) {
            return false;
        }
        let es = self.chord_edges();
        es.iter().all(|e| edge_self_ok(e, n))
            && es
                .iter()
                .enumerate()
                .all(|(i, e1)| es[i + 1..].iter().all(|e2| edges_compatible(e1, e2, n)))
    }
}

/// The line-decoration pattern of a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
enum LineRule {
    /// DN cell: fixed words, left to right.
    Fixed(Vec<Word>),
    /// `W^n(b)`: zero lines (even `n`) or one line carrying `L` or `RL`.
    BModule,
}

/// A cell module with its ordered half-diagram basis.
#[derive(Clone, Debug)]
pub struct CellModule {
    label: CellLabel,
    n: usize,
    rule: LineRule,
    basis: Vec<HalfDiagram>,
    index: BTreeMap<HalfDiagram, usize>,
}

/// `dim W^{(n,m)} = sum_{h = m+1, m+3, ..., n} C(n, (n-h)/2)`.
pub fn dim_formula(n: usize, m: i64) -> u64 {
    let binom = |n: u64, k: u64| -> u64 {
        if k > n {
            0
        } else {
            (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
        }
    };
    let mut h = m + 1;
    let mut total = 0;
    while h <= n as i64 {
        total += binom(n as u64, ((n as i64 - h) / 2) as u64);
        h += 2;
    }
    total
}

impl CellModule {
    /// Builds the module for a standard, DN, or `b`-label.
    pub fn new(label: &CellLabel) -> ExactResult<CellModule> {
        if !label.is_valid() {
            return Err(ExactError::Other(format!("invalid cell label {label}")));
        }
        let canonical = match label {
            CellLabel::Standard { .. } => label.convert()?,
            _ => *label,
        };
        let n = canonical.n();
        if n == 0 || n > CELL_GUARD {
            return Err(ExactError::SizeGuard(format!(
                "cell modules require 1 <= n <= {CELL_GUARD} (got {n})"
            )));
        }
        let (k, rule) = match canonical {
            CellLabel::Dn { m, e1, e2, .. } => {
                let k = (m + 1) as usize;
                let words: Vec<Word> = (0..k)
                    .map(|j| {
                        if j == 0 && e1 == -1 {
                            Word::L
                        } else if j == k - 1 && e2 == -1 {
                            Word::R
                        } else {
                            Word::E
                        }
                    })
                    .collect();
                (k, LineRule::Fixed(words))
            }
            CellLabel::B { n } => (n % 2, LineRule::BModule),
            CellLabel::Standard { .. } => unreachable!("converted above"),
        };
        let basis = enumerate_half(n, k, &rule);
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, h)| (h, i))
            .collect();
        Ok(CellModule { label: canonical, n, rule, basis, index })
    }

    pub fn label(&self) -> &CellLabel {
        &self.label
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[HalfDiagram] {
        &self.basis
    }

    pub fn index_of(&self, h: &HalfDiagram) -> Option<usize> {
        self.index.get(h).copied()
    }

    /// Number of propagating lines of every basis half-diagram.
    pub fn propagating(&self) -> usize {
        match &self.rule {
            LineRule::Fixed(words) => words.len(),
            LineRule::BModule => self.n % 2,
        }
    }

    /// The fixed through-line words of a DN cell, or `None` for `W^n(b)`
    /// (whose line may carry `L` or `RL`).
    pub fn fixed_words(&self) -> Option<&[Word]> {
        match &self.rule {
            LineRule::Fixed(words) => Some(words),
            LineRule::BModule => None,
        }
    }

    /// Acts by a single diagram on the `i`-th basis vector.  Returns `None`
    /// when the result lies in a lower cell.
    pub fn act_on_basis<S: Scalar>(
        &self,
        g: &Diagram,
        i: usize,
        delta: &DeltaTuple<S>,
    ) -> ExactResult<Option<(S, usize)>> {
        let n = self.n;
        if g.n() != n {
            return Err(ExactError::BadDiagram("rank mismatch in action".into()));
        }
        let h = &self.basis[i];
        let k = h.lines.len();
        // Point ids: g-top 0..n, interface n..2n, exits 2n..2n+k.
        struct Seg {
            p: usize,
            q: usize,
            word: Word,
        }
        let mut segs: Vec<Seg> = Vec::new();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); 2 * n + k];
        let push = |segs: &mut Vec<Seg>, incident: &mut Vec<Vec<usize>>, s: Seg| {
            incident[s.p].push(segs.len());
            incident[s.q].push(segs.len());
            segs.push(s);
        };
        for e in g.edges() {
            push(&mut segs, &mut incident, Seg { p: e.a, q: e.b, word: e.word });
        }
        for e in &h.arcs {
            push(&mut segs, &mut incident, Seg { p: n + e.a, q: n + e.b, word: e.word });
        }
        for (j, (t, w)) in h.lines.iter().enumerate() {
            push(&mut segs, &mut incident, Seg { p: n + t, q: 2 * n + j, word: *w });
        }
        let mut used = vec![false; segs.len()];
        let mut scalar = delta.one();
        let mut arcs: Vec<Edge> = Vec::new();
        let mut lines: Vec<(usize, usize, Vec<Letter>)> = Vec::new();
        for start in (0..n).chain(2 * n..2 * n + k) {
            if incident[start].iter().all(|&si| used[si]) {
                continue;
            }
            let mut at = start;
            let mut word: Vec<Letter> = Vec::new();
            loop {
                let &si = incident[at]
                    .iter()
                    .find(|&&si| !used[si])
                    .expect("open walk continues");
                used[si] = true;
                let s = &segs[si];
                let forward = s.p == at;
                if forward {
                    word.extend_from_slice(s.word.letters());
                } else {
                    word.extend(s.word.letters().iter().rev());
                }
                at = if forward { s.q } else { s.p };
                if at < n || at >= 2 * n {
                    break;
                }
            }
            reduce_open_word(&mut word, delta, &mut scalar);
            if at < n {
                // Arc of the result (walk starts at the left endpoint).
                let w = Word::from_letters(&word).ok_or_else(|| {
                    ExactError::BadDiagram(format!("irreducible strand word {word:?}"))
                })?;
                arcs.push(Edge { a: start, b: at, word: w });
            } else if start >= 2 * n {
                // Exit-to-exit strand: the propagating number dropped.
                return Ok(None);
            } else {
                lines.push((start, at - 2 * n, word));
            }
        }
        for si0 in 0..segs.len() {
            if used[si0] {
                continue;
            }
            let mut word: Vec<Letter> = Vec::new();
            let mut at = segs[si0].p;
            while let Some(&si) = incident[at].iter().find(|&&si| !used[si]) {
                used[si] = true;
                let s = &segs[si];
                let forward = s.p == at;
                if forward {
                    word.extend_from_slice(s.word.letters());
                } else {
                    word.extend(s.word.letters().iter().rev());
                }
                at = if forward { s.q } else { s.p };
            }
            scalar = scalar.mul_ref(&reduce_loop_word(word, delta));
        }
        // Assemble and truncate to the cell's decoration pattern.
        lines.sort();
        let mut out_lines: Vec<(usize, Word)> = Vec::with_capacity(k);
        for (j, (t, exit, word)) in lines.iter().enumerate() {
            debug_assert_eq!(j, *exit, "planar action permutes no exits");
            let w = Word::from_letters(word).ok_or_else(|| {
                ExactError::BadDiagram(format!("irreducible line word {word:?}"))
            })?;
            match &self.rule {
                LineRule::Fixed(expected) => {
                    if w != expected[j] {
                        return Ok(None);
                    }
                }
                LineRule::BModule => {
                    debug_assert!(matches!(w, Word::L | Word::RL), "b-module line word {w:?}");
                }
            }
            out_lines.push((*t, w));
        }
        arcs.sort();
        let result = HalfDiagram { n, arcs, lines: out_lines };
        let idx = self.index_of(&result).ok_or_else(|| {
            ExactError::BadDiagram(format!("action left the basis: {result}"))
        })?;
        Ok(Some((scalar, idx)))
    }

    /// Applies an algebra element to a coefficient vector.
    pub fn apply<S: Scalar>(
        &self,
        a: &AlgebraElement<S>,
        v: &[S],
        delta: &DeltaTuple<S>,
    ) -> ExactResult<Vec<S>> {
        let zero = delta.one().zero_like();
        let mut out = vec![zero; self.dim()];
        for (g, c) in a.terms() {
            for (j, vj) in v.iter().enumerate() {
                if vj.vanishes() {
                    continue;
                }
                if let Some((s, i)) = self.act_on_basis(g, j, delta)? {
                    out[i] = out[i].add_ref(&c.mul_ref(vj).mul_ref(&s));
                }
            }
        }
        Ok(out)
    }

    /// The matrix of an algebra element: column `j` is the image of the
    /// `j`-th basis vector.
    pub fn matrix<S: Scalar>(
        &self,
        a: &AlgebraElement<S>,
        delta: &DeltaTuple<S>,
    ) -> ExactResult<Vec<Vec<S>>> {
        let d = self.dim();
        let zero = delta.one().zero_like();
        let mut m = vec![vec![zero; d]; d];
        for (g, c) in a.terms() {
            for j in 0..d {
                if let Some((s, i)) = self.act_on_basis(g, j, delta)? {
                    m[i][j] = m[i][j].add_ref(&c.mul_ref(&s));
                }
            }
        }
        Ok(m)
    }
}

fn enumerate_half(n: usize, k: usize, rule: &LineRule) -> Vec<HalfDiagram> {
    let mut out = Vec::new();
    let line_word_options: Vec<Vec<Word>> = match rule {
        LineRule::Fixed(words) => vec![words.clone()],
        LineRule::BModule => {
            if k == 0 {
                vec![vec![]]
            } else {
                vec![vec![Word::L], vec![Word::RL]]
            }
        }
    };
    for pos in (0..n).combinations(k) {
        let rest: Vec<usize> = (0..n).filter(|v| !pos.contains(v)).collect();
        let mut matchings = Vec::new();
        noncrossing_matchings(&[rest], &mut Vec::new(), &mut matchings);
        for words in &line_word_options {
            let line_edges: Vec<Edge> = pos
                .iter()
                .zip(words)
                .enumerate()
                .map(|(j, (&t, &w))| Edge { a: t, b: n + j, word: w })
                .collect();
            if !line_edges.iter().all(|e| edge_self_ok(e, n))
                || !line_edges.iter().enumerate().all(|(i, e1)| {
                    line_edges[i + 1..]
                        .iter()
                        .all(|e2| edges_compatible(e1, e2, n))
                })
            {
                continue;
            }
            for matching in &matchings {
                decorate_half(n, matching, &line_edges, &pos, words, &mut out);
            }
        }
    }
    out.sort();
    out
}

fn decorate_half(
    n: usize,
    matching: &[(usize, usize)],
    line_edges: &[Edge],
    pos: &[usize],
    words: &[Word],
    out: &mut Vec<HalfDiagram>,
) {
    let arcs: Vec<(usize, usize)> = matching
        .iter()
        .map(|&(p, q)| (p.min(q), p.max(q)))
        .collect();
    // Arc word candidates compatible with the fixed lines.
    let cands: Vec<Vec<Word>> = arcs
        .iter()
        .map(|&(a, b)| {
            [Word::L, Word::E, Word::R, Word::LR]
                .into_iter()
                .filter(|&w| {
                    let e = Edge { a, b, word: w };
                    edge_self_ok(&e, n)
                        && line_edges.iter().all(|le| edges_compatible(&e, le, n))
                })
                .collect()
        })
        .collect();
    let mut chosen: Vec<Word> = Vec::with_capacity(arcs.len());
    dfs_half(n, &arcs, &cands, pos, words, &mut chosen, out);
}

fn dfs_half(
    n: usize,
    arcs: &[(usize, usize)],
    cands: &[Vec<Word>],
    pos: &[usize],
    words: &[Word],
    chosen: &mut Vec<Word>,
    out: &mut Vec<HalfDiagram>,
) {
    let i = chosen.len();
    if i == arcs.len() {
        let mut es: Vec<Edge> = arcs
            .iter()
            .zip(chosen.iter())
            .map(|(&(a, b), &w)| Edge { a, b, word: w })
            .collect();
        es.sort();
        out.push(HalfDiagram {
            n,
            arcs: es,
            lines: pos.iter().copied().zip(words.iter().copied()).collect(),
        });
        return;
    }
    'next: for &w in &cands[i] {
        let e = Edge { a: arcs[i].0, b: arcs[i].1, word: w };
        for (j, &wj) in chosen.iter().enumerate() {
            let ej = Edge { a: arcs[j].0, b: arcs[j].1, word: wj };
            if !edges_compatible(&e, &ej, n) {
                continue 'next;
            }
        }
        chosen.push(w);
        dfs_half(n, arcs, cands, pos, words, chosen, out);
        chosen.pop();
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
