//! Exact scalar arithmetic: Laurent polynomials and rational functions in `q`
//! (represented through `q = x^D`), quantum integers, cyclotomic predicates
//! and specializations.
//!
//! The substitution degree `D` is fixed per parameter context as
//! `lcm(2, denominators of the weights)`, so half-integer and other
//! fractional weight exponents stay exact: `q^{p/D}` is the monomial `x^p`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Errors raised by the exact-arithmetic layer.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {0} is not an integer multiple of 1/D (D = {1})")]
    NonIntegralExponent(Rational64, i64),
    #[error("denominator vanishes at the requested specialization")]
    DenominatorVanishes,
    #[error("half-integer power of q requires an even substitution degree D")]
    HalfPowerOddD,
    #[error("inexact polynomial division")]
    InexactDivision,
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("genericity failure: {0}")]
    Genericity(String),
    #[error("invalid diagram: {0}")]
    BadDiagram(String),
    #[error("{0}")]
    Other(String),
}

pub type ExactResult<T> = Result<T, ExactError>;

// ---------------------------------------------------------------------------
// Laurent polynomials
// ---------------------------------------------------------------------------

/// A Laurent polynomial in the auxiliary variable `x` with exact rational
/// coefficients. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LPoly {
    coeffs: BTreeMap<i64, BigRational>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    pub fn monomial(exp: i64, coeff: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LPoly { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.coeffs.iter()
    }

    fn insert_add(coeffs: &mut BTreeMap<i64, BigRational>, exp: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match coeffs.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LPoly {
            coeffs: self.coeffs.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        LPoly {
            coeffs: self.coeffs.iter().map(|(e, a)| (e + k, a.clone())).collect(),
        }
    }

    /// Substitute `x -> x^{-1}` (the bar involution; `q -> q^{-1}`).
    pub fn bar(&self) -> Self {
        LPoly {
            coeffs: self.coeffs.iter().map(|(e, a)| (-e, a.clone())).collect(),
        }
    }

    /// Dense coefficient vector together with the exponent of its first entry.
    pub fn to_dense(&self) -> (i64, Vec<BigRational>) {
        if self.is_zero() {
            return (0, vec![]);
        }
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        let mut v = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.coeffs {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    pub fn from_dense(lo: i64, v: &[BigRational]) -> Self {
        let mut coeffs = BTreeMap::new();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                coeffs.insert(lo + i as i64, c.clone());
            }
        }
        LPoly { coeffs }
    }

    /// The positive rational `c` such that `self / c` has coprime integer
    /// coefficients; sign-adjusted so the result's leading (highest exponent)
    /// coefficient is positive. Zero polynomial has content 1.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.coeffs.values() {
            num_gcd = num_integer::Integer::gcd(&num_gcd, &c.numer().abs());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.coeffs.values().next_back().unwrap().is_negative() {
            content = -content;
        }
        content
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, rhs: &LPoly) -> ExactResult<LPoly> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LPoly::zero());
        }
        let (alo, mut a) = self.to_dense();
        let (blo, b) = rhs.to_dense();
        if a.len() < b.len() {
            return Err(ExactError::InexactDivision);
        }
        let mut quot = vec![BigRational::zero(); a.len() - b.len() + 1];
        let lead = b.last().unwrap().clone();
        for k in (0..quot.len()).rev() {
            let c = &a[k + b.len() - 1] / &lead;
            if !c.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    let t = &a[k + j] - bj * &c;
                    a[k + j] = t;
                }
            }
            quot[k] = c;
        }
        if a.iter().any(|c| !c.is_zero()) {
            return Err(ExactError::InexactDivision);
        }
        Ok(LPoly::from_dense(alo - blo, &quot))
    }

    /// Evaluate at a nonzero rational point.
    pub fn eval(&self, x0: &BigRational) -> ExactResult<BigRational> {
        if x0.is_zero() && self.min_exp().map_or(false, |e| e < 0) {
            return Err(ExactError::DivisionByZero);
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            acc += c * pow_rational(x0, *e)?;
        }
        Ok(acc)
    }

    /// Gcd as a primitive integer polynomial with positive leading
    /// coefficient (Laurent units `x^k` are quotiented away). Small inputs
    /// use the primitive PRS; larger ones a modular (CRT) gcd, since dense
    /// remainder sequences blow up on the high-degree polynomials produced
    /// by `q = x^D` substitutions.
    pub fn gcd(&self, other: &LPoly) -> LPoly {
        if self.is_zero() {
            let c = other.content();
            return if other.is_zero() { LPoly::zero() } else { other.shift(-other.min_exp().unwrap()).scale(&c.recip()) };
        }
        if other.is_zero() {
            return self.gcd_arg_normalized();
        }
        let a = self.to_primitive_int();
        let b = other.to_primitive_int();
        let small = poly_deg(&a).unwrap().min(poly_deg(&b).unwrap()) <= GCD_PRS_CUTOFF;
        let g = if small {
            gcd_int_prs(a, b)
        } else {
            gcd_int_modular(&a, &b).unwrap_or_else(|| gcd_int_prs(a, b))
        };
        LPoly::from_dense(0, &g.iter().map(|c| BigRational::from_integer(c.clone())).collect::<Vec<_>>())
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, e: u64) -> LPoly {
        let mut acc = LPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn gcd_arg_normalized(&self) -> LPoly {
        let c = self.content();
        self.shift(-self.min_exp().unwrap()).scale(&c.recip())
    }

    fn to_primitive_int(&self) -> Vec<BigInt> {
        let c = self.content();
        let p = self.shift(-self.min_exp().unwrap()).scale(&c.recip());
        let (_, v) = p.to_dense();
        v.into_iter().map(|r| r.to_integer()).collect()
    }
}

fn pow_rational(x0: &BigRational, e: i64) -> ExactResult<BigRational> {
    if e == 0 {
        return Ok(BigRational::one());
    }
    if x0.is_zero() {
        return if e > 0 { Ok(BigRational::zero()) } else { Err(ExactError::DivisionByZero) };
    }
    let p = x0.pow(e.unsigned_abs() as i32);
    Ok(if e > 0 { p } else { p.recip() })
}

fn poly_deg(v: &[BigInt]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

/// Pseudo-remainder of integer polynomials (prem), dense low-to-high.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = poly_deg(b).expect("pseudo_rem by zero");
    let lead = b[db].clone();
    let mut r: Vec<BigInt> = a.to_vec();
    loop {
        let dr = match poly_deg(&r) {
            Some(d) if d >= db => d,
            _ => return r,
        };
        let c = r[dr].clone();
        for x in r.iter_mut() {
            *x = &*x * &lead;
        }
        for j in 0..=db {
            let t = &r[dr - db + j] - &b[j] * &c;
            r[dr - db + j] = t;
        }
        r[dr] = BigInt::zero();
    }
}

fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    let d = match poly_deg(v) {
        Some(d) => d,
        None => return vec![],
    };
    let mut g = BigInt::zero();
    for c in &v[..=d] {
        g = num_integer::Integer::gcd(&g, &c.abs());
    }
    if v[d].is_negative() {
        g = -g;
    }
    v[..=d].iter().map(|c| c / &g).collect()
}

const GCD_PRS_CUTOFF: usize = 24;

fn gcd_int_prs(mut a: Vec<BigInt>, mut b: Vec<BigInt>) -> Vec<BigInt> {
    while !b.iter().all(|c| c.is_zero()) {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive_part(&r);
    }
    primitive_part(&a)
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for `u64`.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mod_deg(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

/// Monic gcd over `GF(p)`, dense low-to-high coefficients.
fn gcd_mod_p(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    loop {
        let db = match mod_deg(&b) {
            Some(d) => d,
            None => {
                let da = mod_deg(&a).expect("both zero in gcd_mod_p");
                let inv = powmod(a[da], p - 2, p);
                let mut g: Vec<u64> = a[..=da].iter().map(|&c| mulmod(c, inv, p)).collect();
                g.truncate(da + 1);
                return g;
            }
        };
        // a <- a mod b.
        let inv = powmod(b[db], p - 2, p);
        while let Some(da) = mod_deg(&a) {
            if da < db {
                break;
            }
            let c = mulmod(a[da], inv, p);
            for j in 0..=db {
                let t = mulmod(c, b[j], p);
                a[da - db + j] = (a[da - db + j] + p - t) % p;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

fn bigint_mod_u64(c: &BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let r = c % BigInt::from(p);
    let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits in u64")
}

/// Modular gcd of primitive integer polynomials with CRT lifting and
/// trial-division verification. Returns `None` if the prime budget is
/// exhausted (caller falls back to the PRS).
fn gcd_int_modular(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let da = poly_deg(a)?;
    let db = poly_deg(b)?;
    if da == 0 || db == 0 {
        return Some(vec![BigInt::one()]);
    }
    let gamma = num_integer::Integer::gcd(&a[da], &b[db]);
    let to_lpoly = |v: &[BigInt]| {
        LPoly::from_dense(0, &v.iter().map(|c| BigRational::from_integer(c.clone())).collect::<Vec<_>>())
    };
    let (la, lb) = (to_lpoly(a), to_lpoly(b));
    let mut best_deg = usize::MAX;
    let mut modulus = BigInt::one();
    let mut lift: Vec<BigInt> = Vec::new();
    let mut prime = (1u64 << 62) - 1;
    let mut tried = 0;
    while tried < 60 {
        while !is_prime_u64(prime) {
            prime -= 2;
        }
        let p = prime;
        prime -= 2;
        if bigint_mod_u64(&a[da], p) == 0 || bigint_mod_u64(&b[db], p) == 0 {
            continue;
        }
        tried += 1;
        let ap: Vec<u64> = a[..=da].iter().map(|c| bigint_mod_u64(c, p)).collect();
        let bp: Vec<u64> = b[..=db].iter().map(|c| bigint_mod_u64(c, p)).collect();
        let gp = gcd_mod_p(ap, bp, p);
        let dg = gp.len() - 1;
        if dg == 0 {
            return Some(vec![BigInt::one()]);
        }
        if dg > best_deg {
            continue; // unlucky prime
        }
        let scale = bigint_mod_u64(&gamma, p);
        let image: Vec<BigInt> = gp.iter().map(|&c| BigInt::from(mulmod(c, scale, p))).collect();
        if dg < best_deg {
            best_deg = dg;
            modulus = BigInt::from(p);
            lift = image;
        } else {
            // CRT-combine the new residue into the lift.
            let m_inv = powmod(bigint_mod_u64(&modulus, p), p - 2, p);
            for (x, r) in lift.iter_mut().zip(&image) {
                let xr = bigint_mod_u64(&(&*r - &*x), p);
                let t = mulmod(xr, m_inv, p);
                *x += &modulus * BigInt::from(t);
            }
            modulus *= BigInt::from(p);
        }
        // Symmetric lift and verification by exact division.
        let half = &modulus / BigInt::from(2);
        let sym: Vec<BigInt> = lift
            .iter()
            .map(|c| if c > &half { c - &modulus } else { c.clone() })
            .collect();
        let cand = primitive_part(&sym);
        if cand.is_empty() {
            continue;
        }
        let g = to_lpoly(&cand);
        if la.exact_div(&g).is_ok() && lb.exact_div(&g).is_ok() {
            let mut out = cand;
            if out.last().map_or(false, |c| c.is_negative()) {
                for c in &mut out {
                    *c = -&*c;
                }
            }
            return Some(out);
        }
    }
    None
}

impl Add<&LPoly> for &LPoly {
    type Output = LPoly;
    fn add(self, rhs: &LPoly) -> LPoly {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &rhs.coeffs {
            LPoly::insert_add(&mut coeffs, *e, c.clone());
        }
        LPoly { coeffs }
    }
}

impl Sub<&LPoly> for &LPoly {
    type Output = LPoly;
    fn sub(self, rhs: &LPoly) -> LPoly {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &rhs.coeffs {
            LPoly::insert_add(&mut coeffs, *e, -c.clone());
        }
        LPoly { coeffs }
    }
}

impl Mul<&LPoly> for &LPoly {
    type Output = LPoly;
    fn mul(self, rhs: &LPoly) -> LPoly {
        if self.is_zero() || rhs.is_zero() {
            return LPoly::zero();
        }
        // Accumulate into a dense buffer: much cheaper than per-term map
        // inserts for the wide polynomials `q = x^D` substitutions produce.
        let (lo1, hi1) = (self.min_exp().unwrap(), self.max_exp().unwrap());
        let (lo2, hi2) = (rhs.min_exp().unwrap(), rhs.max_exp().unwrap());
        let lo = lo1 + lo2;
        let span = (hi1 + hi2 - lo) as usize + 1;
        let mut buf = vec![BigRational::zero(); span];
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                let t = &buf[(e1 + e2 - lo) as usize] + c1 * c2;
                buf[(e1 + e2 - lo) as usize] = t;
            }
        }
        LPoly::from_dense(lo, &buf)
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        LPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl fmt::Debug for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_mag = mag.is_one();
            if !unit_mag || *e == 0 {
                write!(f, "{mag}")?;
            }
            if *e != 0 {
                if !unit_mag {
                    write!(f, "*")?;
                }
                if *e == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{e}")?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

/// A rational function `num/den` in `x`, kept in canonical reduced form:
/// gcd(num, den) is a unit, the denominator has minimal exponent 0, coprime
/// integer coefficients and positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: LPoly,
    den: LPoly,
}

impl RatFn {
    pub fn new(num: LPoly, den: LPoly) -> ExactResult<Self> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn { num: LPoly::zero(), den: LPoly::one() });
        }
        let g = num.gcd(&den);
        let n = num.exact_div(&g).expect("gcd divides num");
        let d = den.exact_div(&g).expect("gcd divides den");
        Ok(RatFn::normalized_coprime(n, d))
    }

    /// Canonicalizes a fraction already known to be reduced: pushes Laurent
    /// units into the numerator and makes the denominator primitive integer
    /// with positive leading coefficient.
    fn normalized_coprime(mut n: LPoly, mut d: LPoly) -> Self {
        if n.is_zero() {
            return RatFn { num: LPoly::zero(), den: LPoly::one() };
        }
        let dmin = d.min_exp().unwrap();
        d = d.shift(-dmin);
        n = n.shift(-dmin);
        let c = d.content();
        d = d.scale(&c.recip());
        n = n.scale(&c.recip());
        RatFn { num: n, den: d }
    }

    pub fn from_poly(p: LPoly) -> Self {
        RatFn { num: p, den: LPoly::one() }
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(LPoly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(LPoly::from_int(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(LPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LPoly::one())
    }

    pub fn num(&self) -> &LPoly {
        &self.num
    }

    pub fn den(&self) -> &LPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn inv(&self) -> ExactResult<Self> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(RatFn::normalized_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFn) -> ExactResult<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> ExactResult<Self> {
        // num and den are coprime, so their powers are too: no gcd needed.
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(RatFn::normalized_coprime(
            base.num.pow(e.unsigned_abs()),
            base.den.pow(e.unsigned_abs()),
        ))
    }

    /// `q -> q^{-1}` (equivalently `x -> x^{-1}`).
    pub fn bar(&self) -> Self {
        RatFn::new(self.num.bar(), self.den.bar()).expect("den nonzero under bar")
    }

    /// Evaluate at a nonzero rational `x0`.
    pub fn eval_at(&self, x0: &BigRational) -> ExactResult<BigRational> {
        let d = self.den.eval(x0)?;
        if d.is_zero() {
            return Err(ExactError::DenominatorVanishes);
        }
        Ok(self.num.eval(x0)? / d)
    }

    /// Evaluate in a cyclotomic field (x maps to the distinguished root).
    pub fn eval_cyc(&self, field: &Arc<CycField>) -> ExactResult<CycElt> {
        let d = field.embed_lpoly(&self.den);
        if d.is_zero() {
            return Err(ExactError::DenominatorVanishes);
        }
        Ok(&field.embed_lpoly(&self.num) * &d.inv()?)
    }

    /// Zero test under the given root specification (with context degree D
    /// for root-of-unity mode, where `x` is a primitive `2*ell*D`-th root).
    pub fn is_zero_under(&self, spec: &RootSpec, d: i64) -> bool {
        match spec {
            RootSpec::Generic => self.is_zero(),
            RootSpec::RationalPoint(x0) => self
                .eval_at(x0)
                .map(|v| v.is_zero())
                .unwrap_or(false),
            RootSpec::RootOfUnity(ell) => {
                let field = CycField::new(2 * (*ell as i64) * d);
                field.embed_lpoly(&self.num).is_zero()
            }
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

// Both operands being canonical keeps the gcds in the sums and products
// below small: for `a/b + c/d` the only cancellable factor divides
// `gcd(b, d)`, and for products the cross-gcds `(a, d)`, `(c, b)` already
// yield a fully reduced result.
impl Add<&RatFn> for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let g = self.den.gcd(&rhs.den);
        let db = self.den.exact_div(&g).expect("gcd divides");
        let dd = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &dd) + &(&rhs.num * &db);
        let h = num.gcd(&g);
        let num = num.exact_div(&h).expect("gcd divides");
        let den = &(&self.den * &dd).exact_div(&h).expect("gcd divides");
        RatFn::normalized_coprime(num, den.clone())
    }
}

impl Sub<&RatFn> for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul<&RatFn> for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = &self.num.exact_div(&g1).expect("gcd divides")
            * &rhs.num.exact_div(&g2).expect("gcd divides");
        let den = &self.den.exact_div(&g2).expect("gcd divides")
            * &rhs.den.exact_div(&g1).expect("gcd divides");
        RatFn::normalized_coprime(num, den)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl Add for RatFn {
    type Output = RatFn;
    fn add(self, rhs: RatFn) -> RatFn {
        &self + &rhs
    }
}

impl Sub for RatFn {
    type Output = RatFn;
    fn sub(self, rhs: RatFn) -> RatFn {
        &self - &rhs
    }
}

impl Mul for RatFn {
    type Output = RatFn;
    fn mul(self, rhs: RatFn) -> RatFn {
        &self * &rhs
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Root specification and quantum-integer context
// ---------------------------------------------------------------------------

/// How `q` is specialized.
#[derive(Clone, Debug, PartialEq)]
pub enum RootSpec {
    /// `q` transcendental (symbolic); `[m] = 0` iff `m = 0`.
    Generic,
    /// `x` specialized to an exact nonzero rational (so `q = x0^D`).
    RationalPoint(BigRational),
    /// `q` a primitive `2l`-th root of unity, `l >= 1`.
    RootOfUnity(u32),
}

/// Per-context substitution degree: `q = x^D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QCtx {
    d: i64,
}

impl QCtx {
    /// `D = lcm(2, doubled denominators of the given weights)`, so that any
    /// half-integer combination of the weights is an integer power of `x`.
    pub fn for_weights(weights: &[Rational64]) -> Self {
        let mut d: i64 = 2;
        for w in weights {
            d = num_integer::Integer::lcm(&d, &(2 * w.denom()));
        }
        QCtx { d }
    }

    pub fn new(d: i64) -> Self {
        assert!(d >= 1);
        QCtx { d }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `q^a` as a monomial in `x`; errors if `a*D` is not an integer.
    pub fn qpow(&self, a: Rational64) -> ExactResult<LPoly> {
        let e = a * Rational64::from_integer(self.d);
        if !e.is_integer() {
            return Err(ExactError::NonIntegralExponent(a, self.d));
        }
        Ok(LPoly::monomial(e.to_integer(), BigRational::one()))
    }

    /// The quantum integer `[m] = q^{m-1} + q^{m-3} + ... + q^{-m+1}`,
    /// with `[0] = 0` and `[-m] = -[m]`.
    pub fn qint(&self, m: i64) -> LPoly {
        let sign = if m < 0 { -BigRational::one() } else { BigRational::one() };
        let m = m.abs();
        let mut p = LPoly::zero();
        for k in 0..m {
            p = &p + &LPoly::monomial((-m + 1 + 2 * k) * self.d, sign.clone());
        }
        p
    }

    /// `[w + a]` for rational `w` with `w*D` integral: the rational function
    /// `(q^{w+a} - q^{-w-a}) / (q - q^{-1})`.
    pub fn box_(&self, w: Rational64, a: i64) -> ExactResult<RatFn> {
        let arg = w + Rational64::from_integer(a);
        if arg.is_integer() {
            return Ok(RatFn::from_poly(self.qint(arg.to_integer())));
        }
        let hi = self.qpow(arg)?;
        let num = &hi - &hi.bar();
        let q = self.qpow(Rational64::one())?;
        let den = &q - &q.bar();
        RatFn::new(num, den)
    }

    /// `[m] = 0` under the given specialization.
    pub fn qint_vanishes(&self, m: i64, spec: &RootSpec) -> bool {
        match spec {
            RootSpec::Generic => m == 0,
            // At a primitive 2l-th root, [m] = 0 iff l | m — except l = 1
            // (q = -1), where [m] evaluates to ±m and only [0] vanishes.
            RootSpec::RootOfUnity(1) => m == 0,
            RootSpec::RootOfUnity(ell) => m.rem_euclid(*ell as i64) == 0,
            RootSpec::RationalPoint(_) => {
                RatFn::from_poly(self.qint(m)).is_zero_under(spec, self.d)
            }
        }
    }

    /// Vanishing test for a rational box argument `[w]`.
    pub fn box_vanishes(&self, w: Rational64, spec: &RootSpec) -> bool {
        match spec {
            RootSpec::Generic => w.is_zero(),
            _ => self
                .box_(w, 0)
                .map(|b| b.is_zero_under(spec, self.d))
                .unwrap_or(false),
        }
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic fields
// ---------------------------------------------------------------------------

/// The cyclotomic field `Q[x] / Phi_N(x)`; `x` is a primitive `N`-th root of
/// unity. With `N = 2*l*D`, `q = x^D` is a primitive `2l`-th root.
#[derive(Debug)]
pub struct CycField {
    order: i64,
    /// Monic modulus, dense low-to-high, length = degree + 1.
    modulus: Vec<BigRational>,
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl CycField {
    pub fn new(order: i64) -> Arc<Self> {
        assert!(order >= 1);
        let phi = cyclotomic_poly(order as u64);
        let modulus = phi.into_iter().map(BigRational::from_integer).collect();
        Arc::new(CycField { order, modulus })
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(self: &Arc<Self>, mut v: Vec<BigRational>) -> CycElt {
        let deg = self.degree();
        while v.len() > deg {
            let k = v.len() - 1;
            let c = v.pop().unwrap();
            if !c.is_zero() {
                for j in 0..deg {
                    let t = &v[k - deg + j] - &self.modulus[j] * &c;
                    v[k - deg + j] = t;
                }
            }
        }
        v.resize(deg, BigRational::zero());
        CycElt { coeffs: v, field: Arc::clone(self) }
    }

    pub fn zero(self: &Arc<Self>) -> CycElt {
        CycElt { coeffs: vec![BigRational::zero(); self.degree()], field: Arc::clone(self) }
    }

    pub fn one(self: &Arc<Self>) -> CycElt {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(self: &Arc<Self>, c: BigRational) -> CycElt {
        let mut v = vec![BigRational::zero(); self.degree()];
        if self.degree() == 0 {
            // Phi_1-degenerate; not used in practice (order >= 2).
            return CycElt { coeffs: v, field: Arc::clone(self) };
        }
        v[0] = c;
        CycElt { coeffs: v, field: Arc::clone(self) }
    }

    /// The distinguished root `x^e` (any integer exponent; `x^{-1} = x^{N-1}`).
    pub fn x_pow(self: &Arc<Self>, e: i64) -> CycElt {
        let e = e.rem_euclid(self.order) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        self.reduce(v)
    }

    /// Embed a Laurent polynomial (x maps to the distinguished root).
    pub fn embed_lpoly(self: &Arc<Self>, p: &LPoly) -> CycElt {
        let mut acc = self.zero();
        for (e, c) in p.iter() {
            acc = &acc + &self.x_pow(*e).scale(c);
        }
        acc
    }
}

/// An element of a cyclotomic field.
#[derive(Clone)]
pub struct CycElt {
    coeffs: Vec<BigRational>,
    field: Arc<CycField>,
}

impl PartialEq for CycElt {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl CycElt {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CycElt {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            field: Arc::clone(&self.field),
        }
    }

    pub fn inv(&self) -> ExactResult<Self> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        // Extended Euclid in Q[t]: track Bezout coefficients for self, so at
        // exit s0 * self = r0 (the gcd, a nonzero constant) mod modulus.
        let (mut r0, mut r1) = (self.field.modulus.clone(), trim(&self.coeffs));
        let (mut s0, mut s1) = (vec![], vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = divmod_q(&r0, &r1);
            let s = sub_q(&s0, &mul_q(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.len() != 1 {
            return Err(ExactError::Other("non-unit gcd in cyclotomic inverse".into()));
        }
        let c = r0[0].clone();
        let inv_coeffs: Vec<BigRational> = s0.iter().map(|a| a / &c).collect();
        Ok(self.field.reduce(inv_coeffs))
    }
}

impl Add<&CycElt> for &CycElt {
    type Output = CycElt;
    fn add(self, rhs: &CycElt) -> CycElt {
        debug_assert!(self.field == rhs.field);
        CycElt {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            field: Arc::clone(&self.field),
        }
    }
}

impl Sub<&CycElt> for &CycElt {
    type Output = CycElt;
    fn sub(self, rhs: &CycElt) -> CycElt {
        debug_assert!(self.field == rhs.field);
        CycElt {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            field: Arc::clone(&self.field),
        }
    }
}

impl Mul<&CycElt> for &CycElt {
    type Output = CycElt;
    fn mul(self, rhs: &CycElt) -> CycElt {
        debug_assert!(self.field == rhs.field);
        let mut v = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let t = &v[i + j] + a * b;
                    v[i + j] = t;
                }
            }
        }
        self.field.reduce(v)
    }
}

impl Neg for &CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        CycElt {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            field: Arc::clone(&self.field),
        }
    }
}

impl Add for CycElt {
    type Output = CycElt;
    fn add(self, rhs: CycElt) -> CycElt {
        &self + &rhs
    }
}

impl Sub for CycElt {
    type Output = CycElt;
    fn sub(self, rhs: CycElt) -> CycElt {
        &self - &rhs
    }
}

impl Mul for CycElt {
    type Output = CycElt;
    fn mul(self, rhs: CycElt) -> CycElt {
        &self * &rhs
    }
}

impl Neg for CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        -&self
    }
}

impl fmt::Debug for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[{}](", self.field.order)?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}*x^{i}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

fn trim(v: &[BigRational]) -> Vec<BigRational> {
    let d = v.iter().rposition(|c| !c.is_zero()).map_or(0, |d| d + 1);
    v[..d].to_vec()
}

fn divmod_q(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.iter().rposition(|c| !c.is_zero()).expect("divmod by zero");
    let mut r = a.to_vec();
    let da = r.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    if da < db {
        return (vec![], trim(&r));
    }
    let mut q = vec![BigRational::zero(); da - db + 1];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &b[db];
        if !c.is_zero() {
            for j in 0..=db {
                let t = &r[k + j] - &b[j] * &c;
                r[k + j] = t;
            }
        }
        q[k] = c;
    }
    (q, trim(&r))
}

fn mul_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = &v[i + j] + x * y;
            v[i + j] = t;
        }
    }
    trim(&v)
}

fn sub_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut v = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        v[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        let t = &v[i] - y;
        v[i] = t;
    }
    trim(&v)
}

/// The `n`-th cyclotomic polynomial as integer coefficients, low-to-high.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = div_exact_int(&num, &phi_d);
        }
    }
    num
}

fn div_exact_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = poly_deg(b).expect("division by zero poly");
    let da = poly_deg(a).expect("zero numerator");
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &b[db];
        for j in 0..=db {
            let t = &r[k + j] - &b[j] * &c;
            r[k + j] = t;
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()), "inexact cyclotomic division");
    q
}

// ---------------------------------------------------------------------------
// The scalar abstraction
// ---------------------------------------------------------------------------

/// Common interface for the exact coefficient fields: symbolic rational
/// functions, rational points, and cyclotomic elements. Arithmetic goes
/// through the by-value operator supertraits (which propagate to generic
/// code); contextful types (cyclotomic) derive zero/one from an existing
/// element.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn try_recip(&self) -> ExactResult<Self>;

    fn mul_ref(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }
}

impl Scalar for RatFn {
    fn zero_like(&self) -> Self {
        RatFn::zero()
    }
    fn one_like(&self) -> Self {
        RatFn::one()
    }
    fn vanishes(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn try_recip(&self) -> ExactResult<Self> {
        self.inv()
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_recip(&self) -> ExactResult<Self> {
        if Zero::is_zero(self) {
            Err(ExactError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

impl Scalar for CycElt {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn vanishes(&self) -> bool {
        CycElt::is_zero(self)
    }
    fn try_recip(&self) -> ExactResult<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(ctx: &QCtx) -> LPoly {
        ctx.qpow(Rational64::one()).unwrap()
    }

    #[test]
    fn qint_small_values() {
        let ctx = QCtx::new(2);
        assert!(ctx.qint(0).is_zero());
        assert_eq!(ctx.qint(1), LPoly::one());
        // [2] = q + q^{-1}
        let expect = &q(&ctx) + &q(&ctx).bar();
        assert_eq!(ctx.qint(2), expect);
        // [5] = q^4 + q^2 + 1 + q^{-2} + q^{-4}
        let mut e5 = LPoly::one();
        for k in [2i64, 4] {
            e5 = &e5 + &LPoly::monomial(k * ctx.d(), BigRational::one());
            e5 = &e5 + &LPoly::monomial(-k * ctx.d(), BigRational::one());
        }
        assert_eq!(ctx.qint(5), e5);
        assert_eq!(ctx.qint(-5), -&e5);
    }

    #[test]
    fn qint_defining_quotient() {
        // [m] * (q - q^{-1}) = q^m - q^{-m}, the defining identity.
        let ctx = QCtx::new(2);
        for m in -9i64..=9 {
            let lhs = &ctx.qint(m) * &(&q(&ctx) - &q(&ctx).bar());
            let hi = LPoly::monomial(m * ctx.d(), BigRational::one());
            let rhs = &hi - &hi.bar();
            assert_eq!(lhs, rhs, "m = {m}");
        }
    }

    #[test]
    fn two_times_m_recurrence() {
        // [2][m] = [m+1] + [m-1], |m| <= 20.
        let ctx = QCtx::new(2);
        for m in -20i64..=20 {
            let lhs = &ctx.qint(2) * &ctx.qint(m);
            let rhs = &ctx.qint(m + 1) + &ctx.qint(m - 1);
            assert_eq!(lhs, rhs, "m = {m}");
        }
    }

    #[test]
    fn box_integral_matches_qint() {
        let ctx = QCtx::new(2);
        for w in -6i64..=6 {
            for a in -3i64..=3 {
                let b = ctx.box_(Rational64::from_integer(w), a).unwrap();
                assert_eq!(b, RatFn::from_poly(ctx.qint(w + a)));
            }
        }
    }

    #[test]
    fn box_half_integer() {
        // [1/2] with D = 2: (x - x^{-1})/(x^2 - x^{-2}) = 1/(x + x^{-1}).
        let ctx = QCtx::new(2);
        let b = ctx.box_(Rational64::new(1, 2), 0).unwrap();
        let expect = RatFn::new(
            LPoly::one(),
            &LPoly::monomial(1, BigRational::one()) + &LPoly::monomial(-1, BigRational::one()),
        )
        .unwrap();
        assert_eq!(b, expect);
        // And the shift identity box(1/2, 1) = box(3/2, 0).
        assert_eq!(
            ctx.box_(Rational64::new(1, 2), 1).unwrap(),
            ctx.box_(Rational64::new(3, 2), 0).unwrap()
        );
    }

    #[test]
    fn ratfn_canonical_form_idempotent() {
        let ctx = QCtx::new(2);
        // Build ([3][4]) / ([2][4]) and check it equals [3]/[2] structurally.
        let a = RatFn::new(&ctx.qint(3) * &ctx.qint(4), &ctx.qint(2) * &ctx.qint(4)).unwrap();
        let b = RatFn::new(ctx.qint(3), ctx.qint(2)).unwrap();
        assert_eq!(a, b);
        // Re-normalizing is a no-op.
        let c = RatFn::new(a.num().clone(), a.den().clone()).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn ratfn_field_ops() {
        let ctx = QCtx::new(2);
        let b2 = RatFn::from_poly(ctx.qint(2));
        let b3 = RatFn::from_poly(ctx.qint(3));
        let b4 = RatFn::from_poly(ctx.qint(4));
        // [2][3] = [4] + [2]
        assert_eq!(&b2 * &b3, &b4 + &b2);
        assert_eq!(&(&b2 * &b3) - &b4, b2);
        assert!(RatFn::from_poly(ctx.qint(1)).inv().unwrap().is_one());
        assert!(b2.div(&b2).unwrap().is_one());
        assert!((&b2 - &b2).is_zero());
    }

    #[test]
    fn qint_vanishes_matches_cyclotomic_evaluation() {
        // Oracle: evaluate [m] in Q[x]/Phi_{2*l*D}(x) and compare with the
        // divisibility rule, for all |m| <= 4l, l <= 8.
        let ctx = QCtx::new(2);
        for ell in 1u32..=8 {
            let field = CycField::new(2 * ell as i64 * ctx.d());
            for m in -(4 * ell as i64)..=(4 * ell as i64) {
                let direct = field.embed_lpoly(&ctx.qint(m)).is_zero();
                let predicate = ctx.qint_vanishes(m, &RootSpec::RootOfUnity(ell));
                assert_eq!(direct, predicate, "ell = {ell}, m = {m}");
            }
        }
    }

    #[test]
    fn qint_vanishes_examples() {
        let ctx = QCtx::new(2);
        assert!(ctx.qint_vanishes(6, &RootSpec::RootOfUnity(3)));
        assert!(ctx.qint_vanishes(0, &RootSpec::Generic));
        assert!(!ctx.qint_vanishes(4, &RootSpec::RootOfUnity(3)));
    }

    #[test]
    fn eval_at_rational_point() {
        let ctx = QCtx::new(2);
        // x0 = 2 means q = 4; [2] = q + 1/q = 17/4.
        let x0 = BigRational::from_integer(BigInt::from(2));
        let v = RatFn::from_poly(ctx.qint(2)).eval_at(&x0).unwrap();
        assert_eq!(v, BigRational::new(BigInt::from(17), BigInt::from(4)));
    }

    #[test]
    fn cyclotomic_inverse() {
        let field = CycField::new(12);
        let a = field.x_pow(5);
        let ainv = a.inv().unwrap();
        assert_eq!(&a * &ainv, field.one());
        // [5] vanishes at q = primitive 10th root of unity (ell = 5, D = 2).
        let ctx = QCtx::new(2);
        let f20 = CycField::new(20);
        assert!(f20.embed_lpoly(&ctx.qint(5)).is_zero());
        assert!(!f20.embed_lpoly(&ctx.qint(4)).is_zero());
    }

    #[test]
    fn cyclotomic_poly_values() {
        let phi = |n: u64| -> Vec<i64> {
            cyclotomic_poly(n)
                .iter()
                .map(|c| i64::try_from(c).unwrap())
                .collect()
        };
        assert_eq!(phi(1), vec![-1, 1]);
        assert_eq!(phi(2), vec![1, 1]);
        assert_eq!(phi(4), vec![1, 0, 1]);
        assert_eq!(phi(6), vec![1, -1, 1]);
        assert_eq!(phi(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn bar_involution() {
        let ctx = QCtx::new(2);
        // Quantum integers are bar-invariant.
        for m in 0..6 {
            assert_eq!(ctx.qint(m).bar(), ctx.qint(m));
        }
        let r = RatFn::new(ctx.qint(3), ctx.qint(2)).unwrap();
        assert_eq!(r.bar().bar(), r);
    }
}
