//! The contravariant form on cell modules, Gram matrices, and the closed
//! determinant formulas.
//!
//! The form `<u, v>` is computed by flipping `v` upside down, gluing its
//! northern nodes onto those of `u`, straightening the resulting picture, and
//! keeping the scalar when the surviving through-strands reproduce the cell's
//! line pattern; otherwise the product lands in a lower cell and the form
//! vanishes.  Determinants are taken fraction-free (Bareiss) over Laurent
//! polynomials so that the closed product formulas can be checked exactly.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Signed;

use crate::cellmod::{dim_formula, CellModule, HalfDiagram};
use crate::diagrams::{reduce_loop_word, reduce_open_word, Letter, Word};
use crate::exact::{ExactError, ExactResult, LPoly, RatFn, Scalar};
use crate::params::{CellLabel, DeltaTuple, WeightParams};
use crate::paths::{
    f_of, g_of, submodule_basis, tile_sequence, tile_sequence_between, Path, TileMove,
};

/// The contravariant form `<u, v>` of two basis half-diagrams of `cm`.
pub fn inner_product<S: Scalar>(
    cm: &CellModule,
    u: &HalfDiagram,
    v: &HalfDiagram,
    delta: &DeltaTuple<S>,
) -> S {
    let n = cm.n();
    let k = cm.propagating();
    debug_assert!(u.n == n && v.n == n);
    let zero = delta.one().zero_like();
    // Node ids in the glued picture: the flipped copy of `v` sits on top with
    // its exits at `0..k`, the glued interface occupies `k..k + n`, and the
    // exits of `u` are `k + n..k + n + k`.  Each entry stores the far end of
    // the strand segment plus its word as read from the near end.
    let total = 2 * k + n;
    let mut adj_u: Vec<Option<(usize, Word)>> = vec![None; total];
    let mut adj_v: Vec<Option<(usize, Word)>> = vec![None; total];
    for e in &u.arcs {
        adj_u[k + e.a] = Some((k + e.b, e.word));
        adj_u[k + e.b] = Some((k + e.a, e.word.reversed()));
    }
    for (j, (t, w)) in u.lines.iter().enumerate() {
        adj_u[k + t] = Some((k + n + j, *w));
        adj_u[k + n + j] = Some((k + t, w.reversed()));
    }
    for e in &v.arcs {
        adj_v[k + e.a] = Some((k + e.b, e.word));
        adj_v[k + e.b] = Some((k + e.a, e.word.reversed()));
    }
    for (j, (t, w)) in v.lines.iter().enumerate() {
        adj_v[j] = Some((k + t, w.reversed()));
        adj_v[k + t] = Some((j, *w));
    }

    let mut value = delta.one();
    let mut visited = vec![false; total];
    // Open strands, one per exit of the flipped copy of `v`.
    for j in 0..k {
        let mut letters: Vec<Letter> = Vec::new();
        let mut side_u = false;
        let mut cur = j;
        visited[j] = true;
        let end = loop {
            let (next, w) =
                (if side_u { &adj_u } else { &adj_v })[cur].expect("strands alternate layers");
            letters.extend_from_slice(w.letters());
            visited[next] = true;
            if next < k || next >= k + n {
                break next;
            }
            cur = next;
            side_u = !side_u;
        };
        if end < k {
            // An exit-to-exit arc: the product has fewer propagating lines.
            return zero;
        }
        reduce_open_word(&mut letters, delta, &mut value);
        if end - k - n != j {
            // Planar strands keep the exit order, so a shifted exit means some
            // other strand runs exit-to-exit and the product is lower-cell.
            return zero;
        }
        match cm.fixed_words() {
            Some(words) => {
                if Word::from_letters(&letters) != Some(words[j]) {
                    return zero;
                }
            }
            None => debug_assert_eq!(letters, vec![Letter::L]),
        }
    }
    // Closed loops among the interface nodes.
    for start in k..k + n {
        if visited[start] {
            continue;
        }
        let mut letters: Vec<Letter> = Vec::new();
        let mut cur = start;
        let mut side_u = true;
        loop {
            visited[cur] = true;
            let (next, w) =
                (if side_u { &adj_u } else { &adj_v })[cur].expect("loops alternate layers");
            letters.extend_from_slice(w.letters());
            cur = next;
            side_u = !side_u;
            if cur == start && side_u {
                break;
            }
        }
        value = value.mul_ref(&reduce_loop_word(letters, delta));
    }
    value
}

/// The Gram matrix of the form on the half-diagram basis of `cm`.
pub fn gram_matrix<S: Scalar>(cm: &CellModule, delta: &DeltaTuple<S>) -> Vec<Vec<S>> {
    cm.basis()
        .iter()
        .map(|u| cm.basis().iter().map(|v| inner_product(cm, u, v, delta)).collect())
        .collect()
}

/// Determinant by Gaussian elimination over any scalar with inverses.
pub fn det<S: Scalar>(m: &[Vec<S>]) -> ExactResult<S> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(ExactError::Other("determinant needs a nonempty square matrix".into()));
    }
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut acc = a[0][0].one_like();
    let mut neg = false;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].vanishes()) else {
            return Ok(a[0][0].zero_like());
        };
        if p != c {
            a.swap(p, c);
            neg = !neg;
        }
        let inv = a[c][c].try_recip()?;
        acc = acc.mul_ref(&a[c][c]);
        for r in c + 1..n {
            if a[r][c].vanishes() {
                continue;
            }
            let f = a[r][c].mul_ref(&inv);
            for j in c..n {
                let t = f.mul_ref(&a[c][j]);
                a[r][j] = a[r][j].sub_ref(&t);
            }
        }
    }
    Ok(if neg { -acc } else { acc })
}

/// Dense integer Laurent polynomial, the working scalar of the fraction-free
/// eliminations below: `c[i]` is the coefficient of `x^(lo + i)` (after the
/// global exponent-stride compression). Kept trimmed on both ends.
#[derive(Clone, Debug, PartialEq)]
struct ZPoly {
    lo: i64,
    c: Vec<BigInt>,
}

impl ZPoly {
    fn zero() -> Self {
        ZPoly { lo: 0, c: vec![] }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn trim(mut self) -> Self {
        while self.c.last().is_some_and(num_traits::Zero::is_zero) {
            self.c.pop();
        }
        let skip = self.c.iter().take_while(|x| num_traits::Zero::is_zero(*x)).count();
        if skip > 0 {
            self.c.drain(..skip);
            self.lo += skip as i64;
        }
        self
    }

    fn mul(&self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut c = vec![BigInt::from(0); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if num_traits::Zero::is_zero(a) {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        ZPoly { lo: self.lo + rhs.lo, c }.trim()
    }

    fn sub(&self, rhs: &ZPoly) -> ZPoly {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            let c = rhs.c.iter().map(|x| -x).collect();
            return ZPoly { lo: rhs.lo, c };
        }
        let lo = self.lo.min(rhs.lo);
        let hi = (self.lo + self.c.len() as i64).max(rhs.lo + rhs.c.len() as i64);
        let mut c = vec![BigInt::from(0); (hi - lo) as usize];
        for (i, a) in self.c.iter().enumerate() {
            c[(self.lo - lo) as usize + i] = a.clone();
        }
        for (i, b) in rhs.c.iter().enumerate() {
            c[(rhs.lo - lo) as usize + i] -= b;
        }
        ZPoly { lo, c }.trim()
    }

    /// Exact division; the divisions Bareiss performs stay inside the
    /// integer Laurent polynomials.
    fn exact_div(&self, rhs: &ZPoly) -> ExactResult<ZPoly> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(ZPoly::zero());
        }
        if self.c.len() < rhs.c.len() {
            return Err(ExactError::Other("inexact polynomial division".into()));
        }
        let mut rem = self.c.clone();
        let qlen = self.c.len() - rhs.c.len() + 1;
        let mut q = vec![BigInt::from(0); qlen];
        let lead = rhs.c.last().unwrap();
        for k in (0..qlen).rev() {
            let top = rem[k + rhs.c.len() - 1].clone();
            if num_traits::Zero::is_zero(&top) {
                continue;
            }
            let (d, r) = num_integer::Integer::div_rem(&top, lead);
            if !num_traits::Zero::is_zero(&r) {
                return Err(ExactError::Other("inexact polynomial division".into()));
            }
            for (i, b) in rhs.c.iter().enumerate() {
                rem[k + i] -= &d * b;
            }
            q[k] = d;
        }
        if rem.iter().any(|x| !num_traits::Zero::is_zero(x)) {
            return Err(ExactError::Other("inexact polynomial division".into()));
        }
        Ok(ZPoly { lo: self.lo - rhs.lo, c: q }.trim())
    }
}

/// Fraction-free (Bareiss) determinant for rational-function matrices.
/// Laurent and coefficient denominators are cleared row by row and the
/// common exponent stride is compressed, so the elimination runs over dense
/// integer polynomials with exact divisions throughout.
pub fn det_ratfn(m: &[Vec<RatFn>]) -> ExactResult<RatFn> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(ExactError::Other("determinant needs a nonempty square matrix".into()));
    }
    let mut den = LPoly::one();
    let mut cleared: Vec<Vec<LPoly>> = Vec::with_capacity(n);
    let mut coeff_den = BigInt::from(1);
    for row in m {
        let mut mult = LPoly::one();
        for e in row {
            let g = mult.gcd(e.den());
            mult = (&mult * e.den()).exact_div(&g)?;
        }
        let mut scaled: Vec<LPoly> = row
            .iter()
            .map(|e| Ok(e.num() * &mult.exact_div(e.den())?))
            .collect::<ExactResult<_>>()?;
        // Clear the rational coefficients of the whole row.
        let mut lcm = BigInt::from(1);
        for e in &scaled {
            for (_, c) in e.iter() {
                lcm = num_integer::Integer::lcm(&lcm, c.denom());
            }
        }
        if !num_traits::One::is_one(&lcm) {
            let f = BigRational::from_integer(lcm.clone());
            for e in &mut scaled {
                *e = e.scale(&f);
            }
            coeff_den *= &lcm;
        }
        den = &den * &mult;
        cleared.push(scaled);
    }
    // Compress the common exponent stride.
    let mut stride: i64 = 0;
    for row in &cleared {
        for e in row {
            for (exp, _) in e.iter() {
                stride = num_integer::Integer::gcd(&stride, exp);
            }
        }
    }
    let stride = stride.max(1);
    let mut a: Vec<Vec<ZPoly>> = cleared
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    if e.is_zero() {
                        return ZPoly::zero();
                    }
                    let lo = e.min_exp().unwrap() / stride;
                    let hi = e.max_exp().unwrap() / stride;
                    let mut c = vec![BigInt::from(0); (hi - lo + 1) as usize];
                    for (exp, v) in e.iter() {
                        c[(exp / stride - lo) as usize] = v.numer().clone();
                    }
                    ZPoly { lo, c }.trim()
                })
                .collect()
        })
        .collect();

    let mut prev = ZPoly { lo: 0, c: vec![BigInt::from(1)] };
    let mut neg = false;
    for c in 0..n {
        if a[c][c].is_zero() {
            let Some(p) = (c + 1..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(RatFn::zero());
            };
            a.swap(p, c);
            neg = !neg;
        }
        if c == n - 1 {
            break;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let t = a[i][j].mul(&a[c][c]).sub(&a[i][c].mul(&a[c][j]));
                a[i][j] = t.exact_div(&prev)?;
            }
            a[i][c] = ZPoly::zero();
        }
        prev = a[c][c].clone();
    }
    let z = &a[n - 1][n - 1];
    let mut top = LPoly::zero();
    let sign = if neg { -1 } else { 1 };
    for (i, v) in z.c.iter().enumerate() {
        if num_traits::Zero::is_zero(v) {
            continue;
        }
        let exp = (z.lo + i as i64) * stride;
        top = &top
            + &LPoly::monomial(exp, BigRational::new(sign * v.clone(), coeff_den.clone()));
    }
    RatFn::new(top, den)
}

/// The Gram determinant of the cell module at the given parameter point,
/// computed from the half-diagram basis.
pub fn gram_det(label: &CellLabel, params: &WeightParams) -> ExactResult<RatFn> {
    let cm = CellModule::new(label)?;
    let delta = params.delta_tuple(cm.n())?;
    det_ratfn(&gram_matrix(&cm, &delta))
}

fn eigenvalue_along(moves: &[TileMove], params: &WeightParams) -> ExactResult<RatFn> {
    let mut l = RatFn::one();
    for mv in moves {
        let factor = if mv.half { g_of(params, mv.h_prev)? } else { f_of(params, mv.h_prev)? };
        l = &l * &factor;
    }
    Ok(l)
}

/// The Gram eigenvalue `lambda_p` in the path basis of `W^n(b)`:
/// `lambda_{p_0} = 1`, a full tile added at height `h` multiplies by `f(h)`,
/// a half tile by `g(h)`.
pub fn path_eigenvalue(p: &Path, params: &WeightParams) -> ExactResult<RatFn> {
    eigenvalue_along(&tile_sequence(p)?, params)
}

/// The diagonal Gram matrix of `W^{(n,m)}_{e1,e2}` in the path basis,
/// normalised so the path closest to the fundamental path has eigenvalue 1.
/// Requires the critical `theta` that realises the cell inside `W^n(b)`.
pub fn path_gram(label: &CellLabel, params: &WeightParams) -> ExactResult<Vec<(Path, RatFn)>> {
    let paths = submodule_basis(label, params)?;
    let base = paths[0].clone();
    paths
        .into_iter()
        .map(|p| {
            let l = eigenvalue_along(&tile_sequence_between(&base, &p)?, params)?;
            Ok((p, l))
        })
        .collect()
}

/// The closed product formula for the Gram determinant of
/// `W^{(n,m)}_{e1,e2}` in the DN normalisation (`kappa_L = kappa_R = 1`,
/// `delta_L = [w1]/[w1+1]`, `delta_R = [w2]/[w2+1]`):
///
/// `Gamma = (delta_L^{(1-e1)/2} delta_R^{(1-e2)/2})^{dim W^{(n,m)}}
///    prod_{k=0}^{(n-m-3)/2} ( [(n-m-2k-1)/2] [e1 w1 + (n-m-2k-1)/2]
///      [e2 w2 + (n-m-2k-1)/2] [(n+m-2k-1)/2 - e1 w1 - e2 w2]
///      [w1+1]^{-2} [w2+1]^{-2} )^{dim W^{(n,n-1-2k)}}`.
pub fn closed_form_gamma(label: &CellLabel, params: &WeightParams) -> ExactResult<RatFn> {
    let canonical = match label {
        CellLabel::Standard { .. } => label.convert()?,
        _ => *label,
    };
    let CellLabel::Dn { n, m, e1, e2 } = canonical else {
        return Err(ExactError::Other(
            "closed form applies to W(n,m,e1,e2); use closed_form_gamma_b for W^n(b)".into(),
        ));
    };
    let ctx = params.ctx();
    let (w1, w2) = (params.w1, params.w2);
    let dim_nm = dim_formula(n, m) as i64;
    let mut g = RatFn::one();
    if e1 == -1 {
        g = &g * &ctx.box_(w1, 0)?.div(&ctx.box_(w1, 1)?)?.pow(dim_nm)?;
    }
    if e2 == -1 {
        g = &g * &ctx.box_(w2, 0)?.div(&ctx.box_(w2, 1)?)?.pow(dim_nm)?;
    }
    let nn = n as i64;
    let units = (&ctx.box_(w1, 1)? * &ctx.box_(w2, 1)?).pow(-2)?;
    let mut k = 0i64;
    while 2 * k <= nn - m - 3 {
        let c = (nn - m - 2 * k - 1) / 2;
        let f1 = RatFn::from_poly(ctx.qint(c));
        let f2 = ctx.box_(w1 * (e1 as i64) + Rational64::from_integer(c), 0)?;
        let f3 = ctx.box_(w2 * (e2 as i64) + Rational64::from_integer(c), 0)?;
        let f4 = ctx.box_(
            Rational64::from_integer((nn + m - 2 * k - 1) / 2) - w1 * (e1 as i64) - w2 * (e2 as i64),
            0,
        )?;
        let factor = &(&(&f1 * &f2) * &(&f3 * &f4)) * &units;
        let e = dim_formula(n, nn - 1 - 2 * k) as i64;
        g = &g * &factor.pow(e)?;
        k += 1;
    }
    Ok(g)
}

/// The closed form for the path-basis Gram determinant of `W^n(b)`, valid up
/// to unit factors under the standing assumptions: the product of the boxes
/// `[(c + e1 w1 + e2 w2 + e3 theta)/2]` with their multiplicities, times
/// `([w1][w2+1])^{-2 s_n}`.  Its vanishing locus (the critical values of
/// `theta`) is exact.
pub fn closed_form_gamma_b(n: usize, params: &WeightParams) -> ExactResult<RatFn> {
    let theta = params
        .theta
        .ok_or_else(|| ExactError::Other("the Gram determinant of W^n(b) requires theta".into()))?;
    let ctx = params.ctx();
    let (w1, w2) = (params.w1, params.w2);
    let nn = n as i64;
    let binom = |k: i64| -> i64 {
        if !(0..=nn).contains(&k) {
            0
        } else {
            (0..k).fold(1i64, |acc, j| acc * (nn - j) / (j + 1))
        }
    };
    let half = Rational64::new(1, 2);
    let mut g = RatFn::one();
    let term = |c: i64, eps1: &[i64], exp: i64, g: &mut RatFn| -> ExactResult<()> {
        for &e1 in eps1 {
            for e2 in [1i64, -1] {
                for e3 in [1i64, -1] {
                    let arg =
                        (Rational64::from_integer(c) + w1 * e1 + w2 * e2 + theta * e3) * half;
                    *g = &*g * &ctx.box_(arg, 0)?.pow(exp)?;
                }
            }
        }
        Ok(())
    };
    if n % 2 == 0 {
        for m in 0..=(nn - 2) / 2 {
            let exp: i64 = (1..=(nn - 2 * m) / 2).map(|i| binom((nn - 2 * m - 2 * i) / 2)).sum();
            term(1 + 2 * m, &[1, -1], exp, &mut g)?;
        }
    } else {
        term(0, &[1], 1 << (n - 1), &mut g)?;
        for m in 1..=(nn - 1) / 2 {
            let exp: i64 =
                (1..=(nn - 2 * m + 1) / 2).map(|i| binom((nn - 2 * m - 2 * i + 1) / 2)).sum();
            term(2 * m, &[1, -1], exp, &mut g)?;
        }
    }
    let s: i64 = (0..nn).map(|m| (1..=m + 1).map(|i| binom(m - i + 1)).sum::<i64>()).sum();
    let alpha = (&ctx.box_(w1, 0)? * &ctx.box_(w2, 1)?).pow(-2 * s)?;
    Ok(&g * &alpha)
}

/// Locate `(a, b, sign)` with `num = sign * den * delta_L^a * delta_R^b`,
/// searching exponents up to `bound` in absolute value. A numeric probe at
/// `x = 2` prunes the grid; the surviving candidate is confirmed
/// symbolically. `None` when no unit monomial relates the two.
pub fn unit_monomial_ratio(
    num: &RatFn,
    den: &RatFn,
    params: &WeightParams,
    bound: i64,
) -> ExactResult<Option<(i64, i64, i8)>> {
    let ratio = num.div(den)?;
    let ctx = params.ctx();
    let dl = ctx.box_(params.w1, 0)?.div(&ctx.box_(params.w1, 1)?)?;
    let dr = ctx.box_(params.w2, 0)?.div(&ctx.box_(params.w2, 1)?)?;
    let x0 = BigRational::new(BigInt::from(2), BigInt::from(1));
    let (r0, dl0, dr0) = (ratio.eval_at(&x0)?, dl.eval_at(&x0)?, dr.eval_at(&x0)?);
    for a in -bound..=bound {
        for b in -bound..=bound {
            let probe = dl0.pow(a as i32) * dr0.pow(b as i32);
            if probe.abs() != r0.abs() {
                continue;
            }
            let monomial = &dl.pow(a)? * &dr.pow(b)?;
            if ratio == monomial {
                return Ok(Some((a, b, 1)));
            }
            if ratio == -&monomial {
                return Ok(Some((a, b, -1)));
            }
        }
    }
    Ok(None)
}
