//! Closed real intervals with outward rounding and an absorbing error value.
//!
//! An interval is either a pair of finite dyadic endpoints `[lo, hi]` with
//! `lo <= hi`, or NAI ("not an interval"), which soaks up every domain
//! violation, overflow, and unknown: it behaves as an enclosure of the whole
//! real line and propagates through every operation. Code downstream never
//! needs to branch on errors; it only widens.
//!
//! Every arithmetic operation takes the precision to round at. Endpoints
//! round outward (lower bound down, upper bound up), so the result interval
//! always contains the exact set `{a op b : a in A, b in B}`.

use crate::bigfloat::{BigFloat, Round};
use num_rational::BigRational;
use std::cmp::Ordering;
use std::fmt;

/// Working precision in significant bits. At least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u32) -> Precision {
        assert!(bits >= 2, "precision must be at least 2 bits");
        Precision(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// A slightly higher precision for internal guard digits.
    pub(crate) fn plus(self, extra: u32) -> Precision {
        Precision(self.0 + extra)
    }
}

impl Default for Precision {
    fn default() -> Precision {
        Precision(53)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    // None is NAI; Some((lo, hi)) has finite ordered endpoints
    repr: Option<(BigFloat, BigFloat)>,
}

impl Interval {
    /// `[lo, hi]`. Any non-finite endpoint, or a disordered pair, gives NAI;
    /// disorder is a caller bug and trips a debug assertion first.
    pub fn new(lo: BigFloat, hi: BigFloat) -> Interval {
        if !lo.is_finite() || !hi.is_finite() {
            return Interval::nai();
        }
        match lo.partial_cmp(&hi) {
            Some(Ordering::Greater) | None => {
                debug_assert!(false, "disordered interval endpoints");
                Interval::nai()
            }
            _ => Interval { repr: Some((lo, hi)) },
        }
    }

    pub fn nai() -> Interval {
        Interval { repr: None }
    }

    pub fn point(v: BigFloat) -> Interval {
        Interval::new(v.clone(), v)
    }

    pub fn from_i64(v: i64) -> Interval {
        Interval::point(BigFloat::from_i64(v))
    }

    pub fn from_f64(v: f64) -> Interval {
        Interval::point(BigFloat::from_f64(v))
    }

    pub fn zero() -> Interval {
        Interval::point(BigFloat::zero())
    }

    pub fn one() -> Interval {
        Interval::point(BigFloat::one())
    }

    /// Tightest `prec`-bit interval containing the rational.
    pub fn from_rational(r: &BigRational, prec: Precision) -> Interval {
        Interval::new(
            BigFloat::from_rational(r, prec.bits(), Round::Down),
            BigFloat::from_rational(r, prec.bits(), Round::Up),
        )
    }

    pub fn is_nai(&self) -> bool {
        self.repr.is_none()
    }

    /// Lower endpoint; panics on NAI.
    pub fn lo(&self) -> &BigFloat {
        &self.repr.as_ref().expect("lo() on NAI").0
    }

    /// Upper endpoint; panics on NAI.
    pub fn hi(&self) -> &BigFloat {
        &self.repr.as_ref().expect("hi() on NAI").1
    }

    pub fn endpoints(&self) -> Option<(&BigFloat, &BigFloat)> {
        self.repr.as_ref().map(|(l, h)| (l, h))
    }

    pub fn is_point(&self) -> bool {
        match &self.repr {
            Some((l, h)) => l == h,
            None => false,
        }
    }

    /// NAI contains every real (that is its point); no interval contains NaN.
    pub fn contains(&self, v: &BigFloat) -> bool {
        if v.is_nan() {
            return false;
        }
        match &self.repr {
            None => true,
            Some((l, h)) => {
                l.partial_cmp(v) != Some(Ordering::Greater)
                    && h.partial_cmp(v) != Some(Ordering::Less)
            }
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigFloat::zero())
    }

    /// Set inclusion, treating NAI as the whole line.
    pub fn subset(&self, other: &Interval) -> bool {
        match (&self.repr, &other.repr) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some((al, ah)), Some((bl, bh))) => {
                bl.cmp_total(al) != Ordering::Greater && bh.cmp_total(ah) != Ordering::Less
            }
        }
    }

    /// Convex hull. NAI joined with anything is NAI.
    pub fn join(&self, other: &Interval) -> Interval {
        match (&self.repr, &other.repr) {
            (Some((al, ah)), Some((bl, bh))) => {
                Interval { repr: Some((al.min(bl), ah.max(bh))) }
            }
            _ => Interval::nai(),
        }
    }

    /// Intersection; `None` when disjoint. NAI meets anything at that thing.
    pub fn meet(&self, other: &Interval) -> Option<Interval> {
        match (&self.repr, &other.repr) {
            (None, _) => Some(other.clone()),
            (_, None) => Some(self.clone()),
            (Some((al, ah)), Some((bl, bh))) => {
                let l = al.max(bl);
                let h = ah.min(bh);
                if l.cmp_total(&h) == Ordering::Greater {
                    None
                } else {
                    Some(Interval { repr: Some((l, h)) })
                }
            }
        }
    }

    /// `hi - lo` rounded up; NAI has infinite width.
    pub fn width(&self, prec: Precision) -> BigFloat {
        match &self.repr {
            None => BigFloat::infinity(false),
            Some((l, h)) => h.sub_dir(l, prec.bits(), Round::Up),
        }
    }

    /// Approximate midpoint, clamped inside the interval; NaN for NAI.
    pub fn midpoint(&self, prec: Precision) -> BigFloat {
        match &self.repr {
            None => BigFloat::nan(),
            Some((l, h)) => {
                let m = l.add_dir(h, prec.bits(), Round::Nearest).mul_pow2(-1);
                m.max(l).min(h)
            }
        }
    }

    /// Largest absolute value of any member; NaN for NAI.
    pub fn mag(&self) -> BigFloat {
        match &self.repr {
            None => BigFloat::nan(),
            Some((l, h)) => l.abs().max(&h.abs()),
        }
    }

    /// Smallest absolute value of any member; NaN for NAI.
    pub fn mig(&self) -> BigFloat {
        match &self.repr {
            None => BigFloat::nan(),
            Some((l, h)) => {
                if self.contains_zero() {
                    BigFloat::zero()
                } else {
                    l.abs().min(&h.abs())
                }
            }
        }
    }

    /// Exact scaling by a power of two.
    pub fn mul_pow2(&self, k: i64) -> Interval {
        match &self.repr {
            None => Interval::nai(),
            Some((l, h)) => Interval::new(l.mul_pow2(k), h.mul_pow2(k)),
        }
    }

    /// Round both endpoints outward to `prec` bits.
    pub fn round_outward(&self, prec: Precision) -> Interval {
        match &self.repr {
            None => Interval::nai(),
            Some((l, h)) => Interval::new(
                l.round_to(prec.bits(), Round::Down),
                h.round_to(prec.bits(), Round::Up),
            ),
        }
    }

    // ---- arithmetic ----

    pub fn neg(&self) -> Interval {
        match &self.repr {
            None => Interval::nai(),
            Some((l, h)) => Interval { repr: Some((h.neg(), l.neg())) },
        }
    }

    pub fn abs(&self) -> Interval {
        match &self.repr {
            None => Interval::nai(),
            Some((l, h)) => {
                if !l.is_negative() {
                    self.clone()
                } else if h.is_negative() || h.is_zero() {
                    self.neg()
                } else {
                    Interval::new(BigFloat::zero(), l.abs().max(&h.abs()))
                }
            }
        }
    }

    pub fn add(&self, other: &Interval, prec: Precision) -> Interval {
        match (&self.repr, &other.repr) {
            (Some((al, ah)), Some((bl, bh))) => Interval::new(
                al.add_dir(bl, prec.bits(), Round::Down),
                ah.add_dir(bh, prec.bits(), Round::Up),
            ),
            _ => Interval::nai(),
        }
    }

    pub fn sub(&self, other: &Interval, prec: Precision) -> Interval {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Interval, prec: Precision) -> Interval {
        match (&self.repr, &other.repr) {
            (Some((al, ah)), Some((bl, bh))) => {
                // dyadic products are exact, so one outward rounding at the
                // end loses nothing
                let p1 = al.mul_exact(bl);
                let p2 = al.mul_exact(bh);
                let p3 = ah.mul_exact(bl);
                let p4 = ah.mul_exact(bh);
                let lo = p1.min(&p2).min(&p3).min(&p4);
                let hi = p1.max(&p2).max(&p3).max(&p4);
                Interval::new(
                    lo.round_to(prec.bits(), Round::Down),
                    hi.round_to(prec.bits(), Round::Up),
                )
            }
            _ => Interval::nai(),
        }
    }

    /// Division; NAI when the divisor contains zero.
    pub fn div(&self, other: &Interval, prec: Precision) -> Interval {
        match (&self.repr, &other.repr) {
            (Some((al, ah)), Some((bl, bh))) => {
                if other.contains_zero() {
                    return Interval::nai();
                }
                let p = prec.bits();
                let lo = al
                    .div_dir(bl, p, Round::Down)
                    .min(&al.div_dir(bh, p, Round::Down))
                    .min(&ah.div_dir(bl, p, Round::Down))
                    .min(&ah.div_dir(bh, p, Round::Down));
                let hi = al
                    .div_dir(bl, p, Round::Up)
                    .max(&al.div_dir(bh, p, Round::Up))
                    .max(&ah.div_dir(bl, p, Round::Up))
                    .max(&ah.div_dir(bh, p, Round::Up));
                Interval::new(lo, hi)
            }
            _ => Interval::nai(),
        }
    }

    pub fn inv(&self, prec: Precision) -> Interval {
        Interval::one().div(self, prec)
    }

    pub fn sqrt(&self, prec: Precision) -> Interval {
        match &self.repr {
            None => Interval::nai(),
            Some((l, h)) => {
                if l.is_negative() {
                    return Interval::nai();
                }
                Interval::new(
                    l.sqrt_dir(prec.bits(), Round::Down),
                    h.sqrt_dir(prec.bits(), Round::Up),
                )
            }
        }
    }

    pub fn sqr(&self, prec: Precision) -> Interval {
        self.pow_int(2, prec)
    }

    /// Integer power with exact range semantics: even powers of intervals
    /// containing zero reach down to zero, and `x^0 = [1,1]` for every `x`
    /// (including zero, matching the evaluator's convention for `x^0`).
    pub fn pow_int(&self, n: i32, prec: Precision) -> Interval {
        if self.is_nai() {
            return Interval::nai();
        }
        if n == 0 {
            return Interval::one();
        }
        if n < 0 {
            return self.pow_int(-n, prec).inv(prec);
        }
        let n = n as u32;
        let (l, h) = self.endpoints().unwrap();
        let p = prec.bits();
        if n % 2 == 1 {
            Interval::new(pow_signed(l, n, p, Round::Down), pow_signed(h, n, p, Round::Up))
        } else {
            let lo_m = self.mig();
            let hi_m = self.mag();
            Interval::new(pow_mag(&lo_m, n, p, Round::Down), pow_mag(&hi_m, n, p, Round::Up))
        }
    }
}

/// `x^n` for signed `x`, rounding the value (not the magnitude) in `dir`.
fn pow_signed(x: &BigFloat, n: u32, prec: u32, dir: Round) -> BigFloat {
    if x.is_negative() {
        // odd use only: value direction flips to magnitude direction
        pow_mag(&x.abs(), n, prec, dir.flip()).neg()
    } else {
        pow_mag(x, n, prec, dir)
    }
}

/// `x^n` for `x >= 0` with directed rounding. Small cases multiply out
/// exactly; large ones square-and-multiply with outward rounding per step.
fn pow_mag(x: &BigFloat, n: u32, prec: u32, dir: Round) -> BigFloat {
    if x.is_zero() {
        return BigFloat::zero();
    }
    if n == 1 {
        return x.round_to(prec, dir);
    }
    let exact_bits = x.mant_bits().saturating_mul(n as u64);
    if exact_bits <= 8192 {
        let mut acc = BigFloat::one();
        let mut base = x.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_exact(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_exact(&base);
            }
        }
        return acc.round_to(prec, dir);
    }
    // rounded square-and-multiply; every step rounds in the same magnitude
    // direction, so the final value brackets the true power
    let wp = prec + 32;
    let mut acc = BigFloat::one();
    let mut base = x.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul_dir(&base, wp, dir);
        }
        k >>= 1;
        if k > 0 {
            base = base.mul_dir(&base, wp, dir);
        }
    }
    acc.round_to(prec, dir)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            None => write!(f, "NAI"),
            Some((l, h)) => write!(f, "[{l}, {h}]"),
        }
    }
}
