//! The Hecke surjection `pi`, the Murphy elements `J_i`, the central
//! element `Z_n`, and its cell-module eigenvalues `alpha`.
//!
//! The type-`~C_n` Hecke algebra surjects onto `b^x_n` once the boundary
//! parameters satisfy `delta = [2]`, `delta_L = [w1]/[w1+1]`,
//! `delta_R = [w2]/[w2+1]` (the DN parameterisation with `Q1 = q^{w1}`,
//! `Q2 = q^{w2}`). The generator images are
//!
//! ```text
//!   pi(g_i^{+-1}) = e_i - q^{-+1}                              (0 < i < n)
//!   pi(g_0^{+-1}) = Q1^{+-1} - (q^{+-1}Q1^{+-1} - q^{-+1}Q1^{-+1}) e_0
//!   pi(g_n^{+-1}) = Q2^{+-1} - (q^{+-1}Q2^{+-1} - q^{-+1}Q2^{-+1}) e_n
//! ```
//!
//! and no image involves `kappa_LR`. The Murphy elements
//! `J_0 = g_1^{-1}...g_{n-1}^{-1} g_n g_{n-1}...g_1 g_0`,
//! `J_i = g_i J_{i-1} g_i` commute pairwise, so
//! `Z_n = sum_i (J_i + J_i^{-1})` is central; it acts on the cell module
//! `W^{(n,m)}_{e1,e2}` by the scalar
//!
//! ```text
//!   alpha = [n] * [2(-m + e1 w1 + e2 w2)] / [-m + e1 w1 + e2 w2]
//!         = [n] * (q^{-m + e1 w1 + e2 w2} + q^{m - e1 w1 - e2 w2}),
//! ```
//!
//! where the expanded two-power form on the second line is total and is the
//! definition of record when the denominator box vanishes. Equality of
//! `alpha` values is a necessary condition for two cell modules to lie in
//! the same block.

use crate::diagrams::AlgebraElement;
use crate::exact::{ExactError, ExactResult, RatFn, Scalar};
use crate::params::{scheme_convert, CellLabel, DeltaTuple, Scheme, WeightParams};
use num_rational::Rational64;
use num_traits::One;

/// Largest `n` for which the full-algebra Murphy products are attempted.
pub const MURPHY_GUARD: usize = 6;

/// The image of a Hecke generator power under the surjection.
#[derive(Clone, Debug)]
pub struct HeckeImage {
    pub index: usize,
    pub sign: i8,
    pub value: AlgebraElement<RatFn>,
}

/// The central-element eigenvalue on a cell module, in the expanded
/// (everywhere-defined) two-power form.
#[derive(Clone, Debug)]
pub struct AlphaValue {
    pub label: CellLabel,
    pub value: RatFn,
}

/// The scalars `q^{+-1}`, `Q1^{+-1} = q^{+-w1}`, `Q2^{+-1} = q^{+-w2}`
/// together with the DN six-tuple, over any exact coefficient field. The
/// symbolic context is built from `WeightParams`; rational-point contexts
/// are obtained through [`HeckeContext::map`].
#[derive(Clone, Debug)]
pub struct HeckeContext<S: Scalar> {
    n: usize,
    delta: DeltaTuple<S>,
    q: S,
    q_inv: S,
    q1: S,
    q1_inv: S,
    q2: S,
    q2_inv: S,
}

impl HeckeContext<RatFn> {
    pub fn new(n: usize, params: &WeightParams) -> ExactResult<Self> {
        let ctx = params.ctx();
        let mono = |a: Rational64| ctx.qpow(a).map(RatFn::from_poly);
        Ok(HeckeContext {
            n,
            delta: scheme_convert(params, Scheme::Dn, n)?,
            q: mono(Rational64::one())?,
            q_inv: mono(-Rational64::one())?,
            q1: mono(params.w1)?,
            q1_inv: mono(-params.w1)?,
            q2: mono(params.w2)?,
            q2_inv: mono(-params.w2)?,
        })
    }
}

impl<S: Scalar> HeckeContext<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> &DeltaTuple<S> {
        &self.delta
    }

    /// Specializes every stored scalar (e.g. evaluation at a rational
    /// point), mirroring `DeltaTuple::map`.
    pub fn map<T: Scalar, E>(
        &self,
        mut f: impl FnMut(&S) -> Result<T, E>,
    ) -> Result<HeckeContext<T>, E> {
        Ok(HeckeContext {
            n: self.n,
            delta: self.delta.map(&mut f)?,
            q: f(&self.q)?,
            q_inv: f(&self.q_inv)?,
            q1: f(&self.q1)?,
            q1_inv: f(&self.q1_inv)?,
            q2: f(&self.q2)?,
            q2_inv: f(&self.q2_inv)?,
        })
    }

    fn q_pow(&self, sign: i8) -> &S {
        if sign >= 0 {
            &self.q
        } else {
            &self.q_inv
        }
    }

    /// `pi(g_i^{sign})` as an element of `b^x_n`.
    pub fn hecke_image(&self, i: usize, sign: i8) -> ExactResult<AlgebraElement<S>> {
        if i > self.n || !(sign == 1 || sign == -1) {
            return Err(ExactError::Other(format!(
                "hecke image g_{i}^{sign} out of range for n = {}",
                self.n
            )));
        }
        let one = AlgebraElement::identity(self.n, &self.delta);
        let gen = AlgebraElement::generator(self.n, i, &self.delta);
        if i > 0 && i < self.n {
            return Ok(gen.sub(&one.scale(self.q_pow(-sign))));
        }
        let (big_q, big_q_inv) = if i == 0 {
            (&self.q1, &self.q1_inv)
        } else {
            (&self.q2, &self.q2_inv)
        };
        let (qs, qs_inv) = if sign > 0 {
            (big_q, big_q_inv)
        } else {
            (big_q_inv, big_q)
        };
        let coeff = self
            .q_pow(sign)
            .mul_ref(qs)
            .sub_ref(&self.q_pow(-sign).mul_ref(qs_inv));
        Ok(one.scale(qs).sub(&gen.scale(&coeff)))
    }

    /// The pairs `(J_i, J_i^{-1})` for `i = 0..=upto`, computed through the
    /// recursion `J_i = pi(g_i) J_{i-1} pi(g_i)`.
    pub fn murphy_chain(
        &self,
        upto: usize,
    ) -> ExactResult<Vec<(AlgebraElement<S>, AlgebraElement<S>)>> {
        let n = self.n;
        if n > MURPHY_GUARD {
            return Err(ExactError::SizeGuard(format!(
                "murphy elements are full-algebra products; n = {n} exceeds {MURPHY_GUARD}"
            )));
        }
        if n == 0 || upto >= n {
            return Err(ExactError::Other(format!(
                "murphy element J_{upto} undefined for n = {n} (need 0 <= i <= n-1)"
            )));
        }
        let mul =
            |a: &AlgebraElement<S>, b: &AlgebraElement<S>| a.mul(b, &self.delta);
        // J_0 = g_1^{-1}...g_{n-1}^{-1} g_n g_{n-1}...g_1 g_0 and its inverse
        // J_0^{-1} = g_0^{-1} g_1^{-1}...g_{n-1}^{-1} g_n^{-1} g_{n-1}...g_1.
        let mut j = AlgebraElement::identity(n, &self.delta);
        for i in 1..n {
            j = mul(&j, &self.hecke_image(i, -1)?)?;
        }
        j = mul(&j, &self.hecke_image(n, 1)?)?;
        for i in (1..n).rev() {
            j = mul(&j, &self.hecke_image(i, 1)?)?;
        }
        j = mul(&j, &self.hecke_image(0, 1)?)?;
        let mut j_inv = self.hecke_image(0, -1)?;
        for i in 1..n {
            j_inv = mul(&j_inv, &self.hecke_image(i, -1)?)?;
        }
        j_inv = mul(&j_inv, &self.hecke_image(n, -1)?)?;
        for i in (1..n).rev() {
            j_inv = mul(&j_inv, &self.hecke_image(i, 1)?)?;
        }
        let mut out = vec![(j, j_inv)];
        for i in 1..=upto {
            let g = self.hecke_image(i, 1)?;
            let g_inv = self.hecke_image(i, -1)?;
            let (prev, prev_inv) = &out[i - 1];
            out.push((
                mul(&mul(&g, prev)?, &g)?,
                mul(&mul(&g_inv, prev_inv)?, &g_inv)?,
            ));
        }
        Ok(out)
    }

    /// The central element `Z_n = sum_{i=0}^{n-1} (J_i + J_i^{-1})`.
    pub fn z_n(&self) -> ExactResult<AlgebraElement<S>> {
        let mut z = AlgebraElement::zero(self.n);
        for (j, j_inv) in &self.murphy_chain(self.n - 1)? {
            z = z.add(j).add(j_inv);
        }
        Ok(z)
    }
}

/// `pi(g_i^{sign})` in the symbolic coefficient field.
pub fn hecke_image(
    n: usize,
    i: usize,
    sign: i8,
    params: &WeightParams,
) -> ExactResult<HeckeImage> {
    let cx = HeckeContext::new(n, params)?;
    Ok(HeckeImage { index: i, sign, value: cx.hecke_image(i, sign)? })
}

/// The Murphy element `J_i` of `b^x_n`.
pub fn murphy(n: usize, i: usize, params: &WeightParams) -> ExactResult<AlgebraElement<RatFn>> {
    let cx = HeckeContext::new(n, params)?;
    Ok(cx.murphy_chain(i)?.pop().expect("chain nonempty").0)
}

/// The central element `Z_n` of `b^x_n`.
pub fn z_n(n: usize, params: &WeightParams) -> ExactResult<AlgebraElement<RatFn>> {
    HeckeContext::new(n, params)?.z_n()
}

fn dn_parts(label: &CellLabel) -> ExactResult<(usize, i64, i8, i8)> {
    let dn = match label {
        CellLabel::Dn { .. } => *label,
        _ => label.convert()?,
    };
    match dn {
        CellLabel::Dn { n, m, e1, e2 } => Ok((n, m, e1, e2)),
        _ => Err(ExactError::Other(format!(
            "no central-element eigenvalue for the label {label}"
        ))),
    }
}

/// The `Z_n` eigenvalue on `W^{(n,m)}_{e1,e2}` in the expanded form
/// `[n] (q^u + q^{-u})`, `u = -m + e1 w1 + e2 w2`, which is defined for
/// every parameter point.
pub fn alpha(label: &CellLabel, params: &WeightParams) -> ExactResult<AlphaValue> {
    let (n, m, e1, e2) = dn_parts(label)?;
    let ctx = params.ctx();
    let u = -Rational64::from_integer(m)
        + Rational64::from_integer(e1 as i64) * params.w1
        + Rational64::from_integer(e2 as i64) * params.w2;
    let qu = ctx.qpow(u)?;
    let value = RatFn::from_poly(&ctx.qint(n as i64) * &(&qu + &qu.bar()));
    Ok(AlphaValue { label: *label, value })
}

/// The compact quotient form `[n][2u]/[u]`; errors when the denominator
/// box `[u]` is identically zero (then the expanded form of [`alpha`] is
/// the definition of record).
pub fn alpha_quotient(label: &CellLabel, params: &WeightParams) -> ExactResult<RatFn> {
    let (n, m, e1, e2) = dn_parts(label)?;
    let ctx = params.ctx();
    let u = -Rational64::from_integer(m)
        + Rational64::from_integer(e1 as i64) * params.w1
        + Rational64::from_integer(e2 as i64) * params.w2;
    let num = &RatFn::from_poly(ctx.qint(n as i64)) * &ctx.box_(u * 2, 0)?;
    num.div(&ctx.box_(u, 0)?)
}

/// Exact equality of the `Z_n` eigenvalues of two cell modules under the
/// root specification of `params` — the necessary block condition.
pub fn same_eigenvalue(
    l1: &CellLabel,
    l2: &CellLabel,
    params: &WeightParams,
) -> ExactResult<bool> {
    if l1.n() != l2.n() {
        return Err(ExactError::Other(format!(
            "labels {l1} and {l2} live in different algebras"
        )));
    }
    let a1 = alpha(l1, params)?;
    let a2 = alpha(l2, params)?;
    let diff = &a1.value - &a2.value;
    Ok(diff.is_zero_under(&params.spec, params.ctx().d()))
}
