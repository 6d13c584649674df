//! The six-tuple parameter space of `b^x_n`, the DN/GMP1/GMP2
//! reparameterisations, the `theta <-> b` change of variable, and the
//! cell-label dictionaries between the standard poset `Lambda_n` and the
//! DN labelling `W^{(n,m)}_{e1,e2}`.

use crate::exact::{ExactError, ExactResult, QCtx, RatFn, RootSpec, Scalar};
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// The six algebra parameters `(delta, delta_L, delta_R, kappa_L, kappa_R,
/// kappa_LR)`, over any exact scalar field.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaTuple<S: Scalar> {
    pub delta: S,
    pub delta_l: S,
    pub delta_r: S,
    pub kappa_l: S,
    pub kappa_r: S,
    pub kappa_lr: S,
}

impl<S: Scalar> DeltaTuple<S> {
    pub fn one(&self) -> S {
        self.delta.one_like()
    }

    pub fn map<T: Scalar, E>(&self, mut f: impl FnMut(&S) -> Result<T, E>) -> Result<DeltaTuple<T>, E> {
        Ok(DeltaTuple {
            delta: f(&self.delta)?,
            delta_l: f(&self.delta_l)?,
            delta_r: f(&self.delta_r)?,
            kappa_l: f(&self.kappa_l)?,
            kappa_r: f(&self.kappa_r)?,
            kappa_lr: f(&self.kappa_lr)?,
        })
    }
}

/// The three parameterisation rows of Table 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Dn,
    Gmp1,
    Gmp2,
}

impl FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "dn" => Ok(Scheme::Dn),
            "gmp1" => Ok(Scheme::Gmp1),
            "gmp2" => Ok(Scheme::Gmp2),
            other => Err(format!("unknown scheme '{other}' (expected dn|gmp1|gmp2)")),
        }
    }
}

/// Weight parameters `(w1, w2, theta)` plus the root specification of `q`.
/// `theta` may be absent: then `b = kappa_LR` defaults to 0, which only
/// affects `W^n(b)`-related quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightParams {
    pub w1: Rational64,
    pub w2: Rational64,
    pub theta: Option<Rational64>,
    pub spec: RootSpec,
    pub scheme: Scheme,
}

impl WeightParams {
    pub fn generic(w1: Rational64, w2: Rational64) -> Self {
        WeightParams { w1, w2, theta: None, spec: RootSpec::Generic, scheme: Scheme::Dn }
    }

    pub fn with_theta(mut self, theta: Rational64) -> Self {
        self.theta = Some(theta);
        self
    }

    pub fn with_spec(mut self, spec: RootSpec) -> Self {
        self.spec = spec;
        self
    }

    /// The substitution degree context `q = x^D`.
    pub fn ctx(&self) -> QCtx {
        let mut ws = vec![self.w1, self.w2];
        if let Some(t) = self.theta {
            ws.push(t);
        }
        QCtx::for_weights(&ws)
    }

    /// True when all of `[w1], [w1+1], [w2], [w2+1]` are nonzero under the
    /// root specification (the standing assumption of the path-basis and
    /// block sections).
    pub fn path_basis_ok(&self) -> bool {
        let ctx = self.ctx();
        ![self.w1, self.w1 + 1, self.w2, self.w2 + 1]
            .iter()
            .any(|w| ctx.box_vanishes(*w, &self.spec))
    }

    /// `ell` when `q` is a root of unity, else 0 ("q not a root of unity").
    pub fn ell(&self) -> i64 {
        match self.spec {
            RootSpec::RootOfUnity(ell) => ell as i64,
            _ => 0,
        }
    }

    /// The `W^n(b)` parameter from eq. (b); requires `theta`.
    pub fn b_value(&self, n: usize) -> ExactResult<RatFn> {
        match self.theta {
            Some(theta) => b_of_theta(n % 2 == 0, self.w1, self.w2, theta, &self.ctx()),
            None => Ok(RatFn::zero()),
        }
    }

    /// The six-tuple for this parameter point in the chosen scheme
    /// (Table 1). `n` fixes the parity entering `b`.
    pub fn delta_tuple(&self, n: usize) -> ExactResult<DeltaTuple<RatFn>> {
        scheme_convert(self, self.scheme, n)
    }
}

/// The six-tuple given by the chosen row of Table 1.
pub fn scheme_convert(p: &WeightParams, target: Scheme, n: usize) -> ExactResult<DeltaTuple<RatFn>> {
    let ctx = p.ctx();
    let b = p.b_value(n)?;
    let bx = |w: Rational64, a: i64| ctx.box_(w, a);
    match target {
        Scheme::Dn => {
            for (w, name) in [(p.w1 + 1, "[w1+1]"), (p.w2 + 1, "[w2+1]")] {
                if ctx.box_vanishes(w, &p.spec) {
                    return Err(ExactError::Other(format!(
                        "DN parameterisation undefined: {name} vanishes"
                    )));
                }
            }
            Ok(DeltaTuple {
                delta: RatFn::from_poly(ctx.qint(2)),
                delta_l: bx(p.w1, 0)?.div(&bx(p.w1, 1)?)?,
                delta_r: bx(p.w2, 0)?.div(&bx(p.w2, 1)?)?,
                kappa_l: RatFn::one(),
                kappa_r: RatFn::one(),
                // Scaling "1" divides kappa_LR by kappa_L kappa_R; eq. (b)
                // gives the GMP-normalised value.
                kappa_lr: b.div(&(&bx(p.w1, 1)? * &bx(p.w2, 1)?))?,
            })
        }
        Scheme::Gmp1 => Ok(DeltaTuple {
            delta: RatFn::from_poly(ctx.qint(2)),
            delta_l: bx(p.w1, 0)?,
            delta_r: bx(p.w2, 0)?,
            kappa_l: bx(p.w1, 1)?,
            kappa_r: bx(p.w2, 1)?,
            kappa_lr: b,
        }),
        Scheme::Gmp2 => {
            let g1 = scheme_convert(p, Scheme::Gmp1, n)?;
            Ok(DeltaTuple {
                delta: -&g1.delta,
                delta_l: -&g1.delta_l,
                delta_r: -&g1.delta_r,
                kappa_l: g1.kappa_l,
                kappa_r: g1.kappa_r,
                kappa_lr: g1.kappa_lr,
            })
        }
    }
}

/// Eq. (b): `b` in terms of `theta`.
pub fn b_of_theta(
    n_even: bool,
    w1: Rational64,
    w2: Rational64,
    theta: Rational64,
    ctx: &QCtx,
) -> ExactResult<RatFn> {
    let half = Rational64::new(1, 2);
    if n_even {
        let f1 = ctx.box_((w1 + w2 + theta + 1) * half, 0)?;
        let f2 = ctx.box_((w1 + w2 - theta + 1) * half, 0)?;
        Ok(&f1 * &f2)
    } else {
        let f1 = ctx.box_((w1 - w2 + theta) * half, 0)?;
        let f2 = ctx.box_((w1 - w2 - theta) * half, 0)?;
        Ok(-&(&f1 * &f2))
    }
}

/// A cell-module label: a point of the standard poset `Lambda_n`, a DN label
/// `W^{(n,m)}_{e1,e2}`, or the `b`-labelled module `W^n(b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellLabel {
    Standard { n: usize, l: i64 },
    Dn { n: usize, m: i64, e1: i8, e2: i8 },
    B { n: usize },
}

impl CellLabel {
    pub fn n(&self) -> usize {
        match self {
            CellLabel::Standard { n, .. } | CellLabel::Dn { n, .. } | CellLabel::B { n } => *n,
        }
    }

    /// Validity of the label for its `n`.
    pub fn is_valid(&self) -> bool {
        match *self {
            CellLabel::B { n } => n >= 1,
            CellLabel::Standard { n, l } => {
                n >= 1 && -(n as i64) <= l && l <= n as i64 - 1
            }
            CellLabel::Dn { n, m, e1, e2 } => {
                if n < 1 || !(e1 == 1 || e1 == -1) || !(e2 == 1 || e2 == -1) {
                    return false;
                }
                // m has parity opposite to n and the WbE image must be a
                // nonzero standard label reached by no smaller case.
                if m < 0 || m > n as i64 - 1 || (m + n as i64) % 2 == 0 {
                    return false;
                }
                if m == 0 && (e1, e2) != (1, 1) {
                    return false;
                }
                let l = -e1 as i64 * (2 * m + e1 as i64 + e2 as i64) / 2;
                l != 0
            }
        }
    }

    /// Round-trip conversion between the standard and DN labellings
    /// (eq. WbE); `S_n(0) <-> W^n(b)`.
    pub fn convert(&self) -> ExactResult<CellLabel> {
        if !self.is_valid() {
            return Err(ExactError::Other(format!("invalid cell label {self}")));
        }
        match *self {
            CellLabel::B { n } => Ok(CellLabel::Standard { n, l: 0 }),
            CellLabel::Standard { n, l } if l == 0 => Ok(CellLabel::B { n }),
            CellLabel::Dn { n, m, e1, e2 } => {
                let l = -e1 as i64 * (2 * m + e1 as i64 + e2 as i64) / 2;
                Ok(CellLabel::Standard { n, l })
            }
            CellLabel::Standard { n, l } => {
                for e1 in [1i8, -1] {
                    for e2 in [1i8, -1] {
                        let m = -e1 as i64 * l - (e1 as i64 + e2 as i64) / 2;
                        let cand = CellLabel::Dn { n, m, e1, e2 };
                        if cand.is_valid() && cand.convert()? == (CellLabel::Standard { n, l }) {
                            return Ok(cand);
                        }
                    }
                }
                Err(ExactError::Other(format!("no DN label for {self}")))
            }
        }
    }

    /// Number of propagating lines of the half-diagram basis (DN labels).
    pub fn propagating(&self) -> Option<i64> {
        match *self {
            CellLabel::Dn { m, .. } => Some(m + 1),
            _ => None,
        }
    }
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sgn = |e: i8| if e >= 0 { '+' } else { '-' };
        match *self {
            CellLabel::Standard { n, l } => write!(f, "S_{n}({l})"),
            CellLabel::Dn { n, m, e1, e2 } => {
                write!(f, "W({n},{m},{}{})", sgn(e1), sgn(e2))
            }
            CellLabel::B { n } => write!(f, "W^{n}(b)"),
        }
    }
}

/// All valid DN labels of `b'_n`, ordered by `(m, e1, e2)` with `+` before
/// `-`.
pub fn dn_labels(n: usize) -> Vec<CellLabel> {
    let mut out = vec![];
    let start = if n % 2 == 0 { 1 } else { 0 };
    let mut m = start;
    while m <= n as i64 - 1 {
        for e1 in [1i8, -1] {
            for e2 in [1i8, -1] {
                let lbl = CellLabel::Dn { n, m, e1, e2 };
                if lbl.is_valid() {
                    out.push(lbl);
                }
            }
        }
        m += 2;
    }
    out
}

/// All standard labels `Lambda_n = {0, ±1, ..., ±(n-1), -n}`.
pub fn standard_labels(n: usize) -> Vec<CellLabel> {
    let mut out = vec![CellLabel::Standard { n, l: 0 }];
    for a in 1..=n as i64 {
        if a <= n as i64 - 1 {
            out.push(CellLabel::Standard { n, l: a });
        }
        out.push(CellLabel::Standard { n, l: -a });
    }
    out
}

/// Comparison parities of the master equations (§8.3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaPair {
    pub eta1: i8,
    pub eta2: i8,
}

/// Weight coordinates of a DN label: `(e1*(m - e1*w1 - e2*w2),
/// e2*(m - e1*w1 - e2*w2))`.
pub fn weight_coords(label: &CellLabel, w1: Rational64, w2: Rational64) -> Option<(Rational64, Rational64)> {
    match *label {
        CellLabel::Dn { m, e1, e2, .. } => {
            let core = Rational64::from_integer(m)
                - Rational64::from_integer(e1 as i64) * w1
                - Rational64::from_integer(e2 as i64) * w2;
            Some((
                Rational64::from_integer(e1 as i64) * core,
                Rational64::from_integer(e2 as i64) * core,
            ))
        }
        _ => None,
    }
}

/// Parse a rational given as `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational64, String> {
    let s = s.trim();
    match s.split_once('/') {
        None => s
            .parse::<i64>()
            .map(Rational64::from_integer)
            .map_err(|e| format!("bad rational '{s}': {e}")),
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|e| format!("bad rational '{s}': {e}"))?;
            let q: i64 = q.trim().parse().map_err(|e| format!("bad rational '{s}': {e}"))?;
            if q == 0 {
                return Err(format!("bad rational '{s}': zero denominator"));
            }
            Ok(Rational64::new(p, q))
        }
    }
}

/// Load a parameter context from a flat `key=value` config (keys: `w1`,
/// `w2`, `theta`, `q-mode` in {generic, point, root}, `ell`, `q0`,
/// `scheme`). Lines starting with `#` are comments.
pub fn parse_config(text: &str) -> Result<WeightParams, String> {
    let mut w1 = None;
    let mut w2 = None;
    let mut theta = None;
    let mut mode = "generic".to_string();
    let mut ell: Option<u32> = None;
    let mut q0: Option<String> = None;
    let mut scheme = Scheme::Dn;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("bad config line '{line}' (expected key=value)"))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "w1" => w1 = Some(parse_rational(v)?),
            "w2" => w2 = Some(parse_rational(v)?),
            "theta" => theta = Some(parse_rational(v)?),
            "q-mode" => mode = v.to_string(),
            "ell" => ell = Some(v.parse().map_err(|e| format!("bad ell '{v}': {e}"))?),
            "q0" => q0 = Some(v.to_string()),
            "scheme" => scheme = v.parse()?,
            other => return Err(format!("unknown config key '{other}'")),
        }
    }
    let w1 = w1.ok_or("missing w1")?;
    let w2 = w2.ok_or("missing w2")?;
    let spec = match mode.as_str() {
        "generic" => RootSpec::Generic,
        "root" => RootSpec::RootOfUnity(ell.ok_or("q-mode=root requires ell")?),
        "point" => {
            let s = q0.ok_or("q-mode=point requires q0")?;
            let r = parse_rational(&s)?;
            if r.is_zero() || r.abs() == Rational64::from_integer(1) {
                return Err("q0 must be a rational other than 0, 1, -1".into());
            }
            RootSpec::RationalPoint(num_rational::BigRational::new(
                (*r.numer()).into(),
                (*r.denom()).into(),
            ))
        }
        other => return Err(format!("unknown q-mode '{other}'")),
    };
    Ok(WeightParams { w1, w2, theta, spec, scheme })
}
