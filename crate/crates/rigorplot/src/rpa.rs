//! Rigorous polynomial approximations (Taylor models).
//!
//! A [`TaylorModel`] is a polynomial with interval coefficients about a
//! center, together with an interval remainder: for every `x` in the
//! model's domain, `f(x)` lies in `p(x - c) + remainder`, where `f` is the
//! function the model was built from. Evaluating `p` over a subinterval
//! and adding the remainder encloses the range of `f` with far less
//! correlation loss than evaluating the expression interval-by-interval.
//!
//! Models are built by structural recursion over an expression: constants
//! and the variable are exact, ring operations combine polynomials and
//! fold truncated or cross terms into the remainder, and elementary
//! functions are composed by expanding their Taylor series about the
//! midpoint of the inner model's range. The series remainder uses a
//! two-term form: order n+1 with a point coefficient plus order n+2 with an
//! interval coefficient, which is what the order-(n+2) Lagrange theorem
//! gives after regrouping, and is noticeably tighter than the single-term
//! bound near centers where the next derivative vanishes.

use crate::bigfloat::BigFloat;
use crate::expr::{BinOp, Expr, UnOp};
use crate::interval::{Interval, Precision};
use num_rational::BigRational;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TmError {
    /// A constant model was requested for NAI.
    #[error("constant is not an interval")]
    InvalidConstant,
    /// An elementary function was applied to a range leaving its domain,
    /// e.g. `ln` of a range touching zero. The caller is expected to fall
    /// back to naive interval evaluation.
    #[error("{0} applied to a range outside its domain")]
    Domain(&'static str),
    /// Coefficient or remainder arithmetic overflowed to NAI.
    #[error("model arithmetic produced a non-finite value")]
    NonFinite,
}

#[derive(Clone, Debug)]
pub struct TaylorModel {
    domain: Interval,
    center: BigFloat,
    /// Coefficient k multiplies (x - center)^k; length is degree + 1.
    coeffs: Vec<Interval>,
    /// f(x) - p(x - center) for every x in the domain.
    remainder: Interval,
}

/// True for the exact point [0, 0]; used to skip remainder cross terms
/// that are identically zero so polynomial models stay exact.
fn is_exact_zero(v: &Interval) -> bool {
    !v.is_nai() && v.lo().is_zero() && v.hi().is_zero()
}

/// Range of `sum coeffs[k] u^k` over the interval `u`, sharpened two ways.
/// The quadratic term is computed by exact squaring instead of Horner's
/// correlated `u * u`, and when the derivative (bounded recursively by
/// this same function) has constant sign, the range is read off the two
/// endpoints, which removes correlation loss entirely; for pure powers the
/// recursion bottoms out at a linear polynomial and the whole cascade is
/// exact. Both candidate enclosures contain the true range, so their
/// intersection does too.
fn poly_range(coeffs: &[Interval], u: &Interval, prec: Precision) -> Interval {
    match coeffs.len() {
        0 => return Interval::zero(),
        1 => return coeffs[0].clone(),
        _ => {}
    }
    if u.is_point() {
        return horner(coeffs, u, prec);
    }
    let mut split = horner(&coeffs[2..], u, prec).mul(&u.sqr(prec), prec);
    split = split.add(&coeffs[1].mul(u, prec), prec);
    split = split.add(&coeffs[0], prec);

    let deriv: Vec<Interval> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.mul(&Interval::from_i64(k as i64), prec))
        .collect();
    let d = poly_range(&deriv, u, prec);
    if !d.is_nai() && (!d.lo().is_negative() || !d.hi().is_positive()) {
        // extra bits keep the endpoint values from rounding past the
        // Horner enclosure on near-flat polynomials
        let ep = prec.plus(32);
        let hull = horner(coeffs, &Interval::point(u.lo().clone()), ep)
            .join(&horner(coeffs, &Interval::point(u.hi().clone()), ep));
        hull.meet(&split).expect("both enclose the polynomial's range")
    } else {
        split
    }
}

fn horner(coeffs: &[Interval], u: &Interval, prec: Precision) -> Interval {
    let mut acc = Interval::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(u, prec).add(c, prec);
    }
    acc
}

impl TaylorModel {
    /// Model of a constant function over `domain`.
    pub fn constant(v: &Interval, domain: &Interval, degree: usize, prec: Precision) -> Result<TaylorModel, TmError> {
        if v.is_nai() {
            return Err(TmError::InvalidConstant);
        }
        assert!(!domain.is_nai(), "model domain must be a real interval");
        let mut coeffs = vec![Interval::zero(); degree + 1];
        coeffs[0] = v.clone();
        TaylorModel {
            domain: domain.clone(),
            center: domain.midpoint(prec),
            coeffs,
            remainder: Interval::zero(),
        }
        .finish()
    }

    /// Model of the identity function. Exact (zero remainder) for degree
    /// at least 1; at degree 0 the variation `domain - center` has to live
    /// in the remainder.
    pub fn var(domain: &Interval, degree: usize, prec: Precision) -> Result<TaylorModel, TmError> {
        assert!(!domain.is_nai(), "model domain must be a real interval");
        let center = domain.midpoint(prec);
        let mut coeffs = vec![Interval::zero(); degree + 1];
        coeffs[0] = Interval::point(center.clone());
        let remainder = if degree >= 1 {
            coeffs[1] = Interval::one();
            Interval::zero()
        } else {
            domain.sub(&Interval::point(center.clone()), prec)
        };
        TaylorModel { domain: domain.clone(), center, coeffs, remainder }.finish()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn center(&self) -> &BigFloat {
        &self.center
    }

    pub fn coeffs(&self) -> &[Interval] {
        &self.coeffs
    }

    pub fn remainder(&self) -> &Interval {
        &self.remainder
    }

    fn finish(self) -> Result<TaylorModel, TmError> {
        if self.remainder.is_nai() || self.coeffs.iter().any(Interval::is_nai) {
            return Err(TmError::NonFinite);
        }
        Ok(self)
    }

    fn check_compatible(&self, other: &TaylorModel) {
        assert_eq!(
            self.coeffs.len(),
            other.coeffs.len(),
            "mixed-degree models are a programming error"
        );
        assert!(
            self.center == other.center && self.domain == other.domain,
            "models over different domains are a programming error"
        );
    }

    /// `domain - center`: the offset range every coefficient multiplies.
    fn offsets(&self, prec: Precision) -> Interval {
        self.domain.sub(&Interval::point(self.center.clone()), prec)
    }

    pub fn neg(&self) -> TaylorModel {
        TaylorModel {
            domain: self.domain.clone(),
            center: self.center.clone(),
            coeffs: self.coeffs.iter().map(Interval::neg).collect(),
            remainder: self.remainder.neg(),
        }
    }

    pub fn add(&self, other: &TaylorModel, prec: Precision) -> Result<TaylorModel, TmError> {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b, prec))
            .collect();
        TaylorModel {
            domain: self.domain.clone(),
            center: self.center.clone(),
            coeffs,
            remainder: self.remainder.add(&other.remainder, prec),
        }
        .finish()
    }

    pub fn sub(&self, other: &TaylorModel, prec: Precision) -> Result<TaylorModel, TmError> {
        self.add(&other.neg(), prec)
    }

    /// Product truncated at `degree`. The discarded high-order part of the
    /// polynomial product is bounded over the domain offsets and folded
    /// into the remainder together with the cross terms
    /// `p1 * r2 + p2 * r1 + r1 * r2`.
    pub fn mul(&self, other: &TaylorModel, degree: usize, prec: Precision) -> Result<TaylorModel, TmError> {
        self.check_compatible(other);
        let la = self.coeffs.len();
        let lb = other.coeffs.len();
        let mut prod = vec![Interval::zero(); la + lb - 1];
        for i in 0..la {
            if is_exact_zero(&self.coeffs[i]) {
                continue;
            }
            for j in 0..lb {
                if is_exact_zero(&other.coeffs[j]) {
                    continue;
                }
                let term = self.coeffs[i].mul(&other.coeffs[j], prec);
                prod[i + j] = prod[i + j].add(&term, prec);
            }
        }
        let keep = (degree + 1).min(prod.len());
        let tail: Vec<Interval> = prod.split_off(keep);
        let mut coeffs = prod;
        coeffs.resize(degree + 1, Interval::zero());

        let mut remainder = Interval::zero();
        let u = self.offsets(prec);
        if tail.iter().any(|t| !is_exact_zero(t)) {
            let scale = u.pow_int(keep as i32, prec);
            remainder = poly_range(&tail, &u, prec).mul(&scale, prec);
        }
        if !is_exact_zero(&other.remainder) {
            let p1 = poly_range(&self.coeffs, &u, prec);
            remainder = remainder.add(&p1.mul(&other.remainder, prec), prec);
        }
        if !is_exact_zero(&self.remainder) {
            let p2 = poly_range(&other.coeffs, &u, prec);
            remainder = remainder.add(&p2.mul(&self.remainder, prec), prec);
            if !is_exact_zero(&other.remainder) {
                remainder = remainder.add(&self.remainder.mul(&other.remainder, prec), prec);
            }
        }
        TaylorModel {
            domain: self.domain.clone(),
            center: self.center.clone(),
            coeffs,
            remainder,
        }
        .finish()
    }

    /// Enclosure of the modeled function over `t`, which must be a subset
    /// of the domain. On top of the usual interval Horner form, when the
    /// polynomial's derivative has constant sign over `t` the polynomial
    /// part is evaluated at the two endpoints only, which removes the
    /// correlation loss entirely on monotone stretches; the two candidate
    /// enclosures are intersected.
    pub fn eval(&self, t: &Interval, prec: Precision) -> Interval {
        debug_assert!(t.subset(&self.domain), "evaluation outside the model domain");
        if t.is_nai() {
            return Interval::nai();
        }
        let u = t.sub(&Interval::point(self.center.clone()), prec);
        if u.is_point() {
            return horner(&self.coeffs, &u, prec).add(&self.remainder, prec);
        }
        poly_range(&self.coeffs, &u, prec).add(&self.remainder, prec)
    }

    /// Enclosure of the modeled function over the whole domain.
    pub fn bound(&self, prec: Precision) -> Interval {
        self.eval(&self.domain, prec)
    }

    /// Taylor series composition `f(inner)`. Structural cases (negation,
    /// squaring, absolute value) are handled directly; the series cases
    /// expand `f` about the midpoint of the inner model's range.
    pub fn elem(f: UnOp, inner: &TaylorModel, prec: Precision) -> Result<TaylorModel, TmError> {
        let degree = inner.degree();
        match f {
            UnOp::Neg => return Ok(inner.neg()),
            UnOp::Sqr => return inner.mul(inner, degree, prec),
            UnOp::Abs => {
                let r = inner.bound(prec);
                if r.is_nai() {
                    return Err(TmError::NonFinite);
                }
                return if !r.lo().is_negative() {
                    Ok(inner.clone())
                } else if !r.hi().is_positive() {
                    Ok(inner.neg())
                } else {
                    // sign change inside the domain: |f| is not smooth, so
                    // degrade to the constant hull of the range
                    TaylorModel::constant(&r.abs(), &inner.domain, degree, prec)
                };
            }
            UnOp::Tan => {
                let sin = TaylorModel::elem(UnOp::Sin, inner, prec)?;
                let cos = TaylorModel::elem(UnOp::Cos, inner, prec)?;
                let inv_cos = TaylorModel::elem(UnOp::Inv, &cos, prec)?;
                return sin.mul(&inv_cos, degree, prec);
            }
            _ => {}
        }

        let r = inner.bound(prec);
        if r.is_nai() {
            return Err(TmError::NonFinite);
        }
        let c = r.midpoint(prec);
        let point = Interval::point(c.clone());
        let at_c = series_coeffs(f, &point, degree + 2, prec)?;
        let over_r = series_coeffs(f, &r, degree + 3, prec)?;
        let p = r.sub(&point, prec);
        let remainder = at_c[degree + 1]
            .mul(&p.pow_int(degree as i32 + 1, prec), prec)
            .add(&over_r[degree + 2].mul(&p.pow_int(degree as i32 + 2, prec), prec), prec);

        // Horner composition of the series polynomial with (inner - c)
        let mut shifted = inner.clone();
        shifted.coeffs[0] = shifted.coeffs[0].sub(&point, prec);
        let mut acc = TaylorModel::constant(&at_c[degree], &inner.domain, degree, prec)?;
        for k in (0..degree).rev() {
            acc = acc.mul(&shifted, degree, prec)?;
            acc.coeffs[0] = acc.coeffs[0].add(&at_c[k], prec);
        }
        acc.remainder = acc.remainder.add(&remainder, prec);
        acc.finish()
    }

    /// Model of an expression over `domain`: the recursive composition of
    /// the operations above. Division goes through `mul` with a reciprocal
    /// model; integer powers use binary exponentiation.
    pub fn build(e: &Expr, domain: &Interval, degree: usize, prec: Precision) -> Result<TaylorModel, TmError> {
        match e {
            Expr::Var => TaylorModel::var(domain, degree, prec),
            Expr::Const(r) => {
                TaylorModel::constant(&Interval::from_rational(r, prec), domain, degree, prec)
            }
            Expr::Unary(op, a) => {
                let inner = TaylorModel::build(a, domain, degree, prec)?;
                TaylorModel::elem(*op, &inner, prec)
            }
            Expr::Binary(op, a, b) => {
                let ma = TaylorModel::build(a, domain, degree, prec)?;
                let mb = TaylorModel::build(b, domain, degree, prec)?;
                match op {
                    BinOp::Add => ma.add(&mb, prec),
                    BinOp::Sub => ma.sub(&mb, prec),
                    BinOp::Mul => ma.mul(&mb, degree, prec),
                    BinOp::Div => ma.mul(&TaylorModel::elem(UnOp::Inv, &mb, prec)?, degree, prec),
                }
            }
            Expr::Pow(a, n) => {
                if *n == 0 {
                    return TaylorModel::constant(&Interval::one(), domain, degree, prec);
                }
                let base = TaylorModel::build(a, domain, degree, prec)?;
                let mut k = n.unsigned_abs();
                let mut square = base;
                let mut acc: Option<TaylorModel> = None;
                loop {
                    if k & 1 == 1 {
                        acc = Some(match acc {
                            None => square.clone(),
                            Some(m) => m.mul(&square, degree, prec)?,
                        });
                    }
                    k >>= 1;
                    if k == 0 {
                        break;
                    }
                    square = square.mul(&square, degree, prec)?;
                }
                let powered = acc.expect("n != 0 sets at least one bit");
                if *n < 0 {
                    TaylorModel::elem(UnOp::Inv, &powered, prec)
                } else {
                    Ok(powered)
                }
            }
        }
    }
}

/// Taylor coefficients `t_0 .. t_{count-1}` of `f` about `v`, from the
/// standard derivative recurrences evaluated in interval arithmetic. With
/// a point `v` these are tight enclosures of the true coefficients; with
/// an interval `v` each `t_k` encloses the coefficient function's range,
/// which is what the Lagrange remainder needs.
fn series_coeffs(f: UnOp, v: &Interval, count: usize, prec: Precision) -> Result<Vec<Interval>, TmError> {
    if v.is_nai() {
        return Err(TmError::NonFinite);
    }
    let rat = |num: i64, den: i64| {
        Interval::from_rational(&BigRational::new(num.into(), den.into()), prec)
    };
    let mut t = Vec::with_capacity(count);
    match f {
        UnOp::Exp => {
            t.push(v.exp(prec));
            for k in 1..count {
                t.push(t[k - 1].div(&Interval::from_i64(k as i64), prec));
            }
        }
        UnOp::Sin | UnOp::Cos => {
            let (s, c) = (v.sin(prec), v.cos(prec));
            if f == UnOp::Sin {
                t.push(s);
                t.push(c);
            } else {
                t.push(c);
                t.push(s.neg());
            }
            for k in 2..count {
                let step = rat(-1, (k * (k - 1)) as i64);
                t.push(t[k - 2].mul(&step, prec));
            }
        }
        UnOp::Ln => {
            if !v.lo().is_positive() {
                return Err(TmError::Domain("ln"));
            }
            let iv = v.inv(prec);
            t.push(v.ln(prec));
            if count > 1 {
                t.push(iv.clone());
            }
            for k in 2..count {
                let step = rat(-((k as i64) - 1), k as i64);
                t.push(t[k - 1].mul(&iv, prec).mul(&step, prec));
            }
        }
        UnOp::Inv => {
            if v.contains_zero() {
                return Err(TmError::Domain("inv"));
            }
            let iv = v.inv(prec);
            t.push(iv.clone());
            for k in 1..count {
                t.push(t[k - 1].mul(&iv, prec).neg());
            }
        }
        UnOp::Sqrt => {
            if !v.lo().is_positive() {
                return Err(TmError::Domain("sqrt"));
            }
            let iv = v.inv(prec);
            t.push(v.sqrt(prec));
            for k in 1..count {
                let step = rat(3 - 2 * (k as i64), 2 * k as i64);
                t.push(t[k - 1].mul(&iv, prec).mul(&step, prec));
            }
        }
        UnOp::Atan => {
            // from (1 + v^2) f' = 1, differentiated k times:
            // (1+v^2)(k+1) t_{k+1} + 2vk t_k + (k-1) t_{k-1} = 0
            let w = v.sqr(prec).add(&Interval::one(), prec).inv(prec);
            t.push(v.atan(prec));
            if count > 1 {
                t.push(w.clone());
            }
            for k in 1..count.saturating_sub(1) {
                let a = t[k].mul(v, prec).mul(&Interval::from_i64(2 * k as i64), prec);
                let b = t[k - 1].mul(&Interval::from_i64(k as i64 - 1), prec);
                let num = a.add(&b, prec).neg();
                t.push(num.mul(&w, prec).div(&Interval::from_i64(k as i64 + 1), prec));
            }
        }
        UnOp::Neg | UnOp::Abs | UnOp::Sqr | UnOp::Tan => {
            unreachable!("{f:?} is handled structurally, not by series")
        }
    }
    t.truncate(count);
    if t.iter().any(Interval::is_nai) {
        return Err(TmError::NonFinite);
    }
    Ok(t)
}
