//! Elementary function enclosures: exp, ln, sin, cos, tan, atan.
//!
//! Every function here returns an interval guaranteed to contain the exact
//! mathematical image of its input interval. The recipe is the same
//! throughout: reduce the argument into a small range using cached
//! enclosures of pi and ln 2, sum a power series with interval coefficients,
//! and bound the dropped tail by its first omitted term (the series are
//! alternating or geometric with ratio well under 1/2 after reduction).
//!
//! Odd series are summed in factored form `u * sum(c_k u^2k)` so enclosures
//! of tiny arguments stay relatively tight: `sin(1e-300)` comes back with
//! small relative width, not an absolute `2^-wp` blob.

use crate::bigfloat::{BigFloat, Round};
use crate::interval::{Interval, Precision};
use num_bigint::BigInt;
use num_integer::Integer;
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

/// Trig arguments with magnitude at or above `2^TRIG_ARG_LIMIT` are not
/// reduced (pi would be needed to absurd precision); trig falls back to
/// `[-1, 1]` and tan to the error value.
const TRIG_ARG_LIMIT: i64 = 4096;

/// Iteration guard for series loops; hit only by a bug, never by data.
const MAX_TERMS: u32 = 100_000;

// ---- cached constants ----

fn pi_cache() -> &'static RwLock<HashMap<u32, Interval>> {
    static C: OnceLock<RwLock<HashMap<u32, Interval>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

fn ln2_cache() -> &'static RwLock<HashMap<u32, Interval>> {
    static C: OnceLock<RwLock<HashMap<u32, Interval>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Enclosure of pi with width below `2^-(prec+8)`.
pub(crate) fn pi(prec: Precision) -> Interval {
    let key = prec.bits().div_ceil(64) * 64;
    if let Some(v) = pi_cache().read().unwrap().get(&key) {
        return v.clone();
    }
    // Machin: pi/4 = 4 atan(1/5) - atan(1/239)
    let q = Precision::new(key + 32);
    let a5 = atan_inv_int(5, q);
    let a239 = atan_inv_int(239, q);
    let quarter = a5.mul_pow2(2).sub(&a239, q);
    let v = quarter.mul_pow2(2);
    pi_cache().write().unwrap().insert(key, v.clone());
    v
}

/// Enclosure of ln 2 with width below `2^-(prec+8)`.
pub(crate) fn ln2(prec: Precision) -> Interval {
    let key = prec.bits().div_ceil(64) * 64;
    if let Some(v) = ln2_cache().read().unwrap().get(&key) {
        return v.clone();
    }
    // ln 2 = 2 atanh(1/3)
    let q = Precision::new(key + 32);
    let third = Interval::one().div(&Interval::from_i64(3), q);
    let v = atanh_core(&third, q).mul_pow2(1);
    ln2_cache().write().unwrap().insert(key, v.clone());
    v
}

/// `atan(1/m)` for integer `m >= 2` by the alternating Gregory series.
fn atan_inv_int(m: i64, q: Precision) -> Interval {
    let u = Interval::one().div(&Interval::from_i64(m), q);
    let neg_u2 = u.mul(&u, q).neg();
    // factored: (1/m) * sum (-1)^k (1/m^2)^k / (2k+1)
    let mut power = Interval::one();
    let mut acc = Interval::one();
    let cutoff = -(q.bits() as i64);
    for k in 1..MAX_TERMS {
        power = power.mul(&neg_u2, q);
        let term = power.div(&Interval::from_i64(2 * k as i64 + 1), q);
        acc = acc.add(&term, q);
        let m = term.mag();
        if m.is_zero() || m.msb_exp().unwrap() < cutoff {
            // alternating, decreasing: tail bounded by the next term's size
            let tau = mag_bound(&m);
            acc = acc.add(&Interval::new(tau.neg(), tau), q);
            return acc.mul(&u, q);
        }
    }
    unreachable!("series failed to converge");
}

/// `atanh(u) = u * sum u^2k / (2k+1)` for `|u| <= 1/3`; tail is geometric
/// with ratio at most 1/9, so twice the next term bounds it.
fn atanh_core(u: &Interval, q: Precision) -> Interval {
    let u2 = u.mul(u, q);
    let mut power = Interval::one();
    let mut acc = Interval::one();
    let cutoff = -(q.bits() as i64);
    for k in 1..MAX_TERMS {
        power = power.mul(&u2, q);
        let term = power.div(&Interval::from_i64(2 * k as i64 + 1), q);
        acc = acc.add(&term, q);
        let m = term.mag();
        if m.is_zero() || m.msb_exp().unwrap() < cutoff {
            let tau = mag_bound(&m).mul_pow2(1);
            acc = acc.add(&Interval::new(tau.neg(), tau), q);
            return acc.mul(u, q);
        }
    }
    unreachable!("series failed to converge");
}

/// A finite upper bound on a magnitude, rounded up to one bit.
fn mag_bound(m: &BigFloat) -> BigFloat {
    if m.is_zero() {
        BigFloat::zero()
    } else {
        m.round_to(2, Round::Up)
    }
}

// ---- point enclosures (arguments are exact BigFloats) ----

/// Enclosure of `exp(x)` for finite `x`, tight to a few ulp at `wp`.
fn exp_point(x: &BigFloat, wp: Precision) -> Interval {
    if x.is_zero() {
        return Interval::one();
    }
    // beyond 2^50 the result over- or underflows every representable scale
    if x.msb_exp().unwrap() > 50 {
        return if x.is_negative() {
            Interval::new(BigFloat::zero(), BigFloat::one().mul_pow2(-(1 << 40)))
        } else {
            Interval::nai()
        };
    }
    let wq = Precision::new(wp.bits() + 16 + x.msb_exp().unwrap().max(0) as u32);
    let l2 = ln2(wq);
    let xi = Interval::point(x.clone());
    let k = xi
        .div(&l2, wq)
        .midpoint(wq)
        .round_int()
        .to_i64()
        .expect("reduction count fits i64 below the magnitude guard");
    let r = xi.sub(&Interval::from_i64(k).mul(&l2, wq), wq);
    // sum r^j / j!, |r| <= 0.35; ratio <= |r|/(j+1) < 1/2 so the dropped
    // tail is under twice the first omitted term
    let mut term = Interval::one();
    let mut acc = Interval::one();
    let cutoff = -(wp.bits() as i64 + 8);
    let mut result = None;
    for j in 1..MAX_TERMS {
        term = term.mul(&r, wq).div(&Interval::from_i64(j as i64), wq);
        acc = acc.add(&term, wq);
        let m = term.mag();
        if m.is_zero() || m.msb_exp().unwrap() < cutoff {
            let tau = mag_bound(&m).mul_pow2(1);
            result = Some(acc.add(&Interval::new(tau.neg(), tau), wq));
            break;
        }
    }
    result.expect("series failed to converge").mul_pow2(k).round_outward(wp)
}

/// Enclosure of `ln(x)` for `x > 0`.
fn ln_point(x: &BigFloat, wp: Precision) -> Interval {
    if x.is_negative() || x.is_zero() || !x.is_finite() {
        return Interval::nai();
    }
    // x = m * 2^t with m in (2/3, 4/3]: ln x = 2 atanh((m-1)/(m+1)) + t ln 2
    let e = x.msb_exp().unwrap();
    let m0 = x.mul_pow2(1 - e); // in [1, 2)
    let (m, t) = {
        let three_m0 = m0.mul_exact(&BigFloat::from_i64(3));
        if three_m0.cmp_total(&BigFloat::from_i64(4)) == std::cmp::Ordering::Greater {
            (m0.mul_pow2(-1), e)
        } else {
            (m0, e - 1)
        }
    };
    let tbits = 64 - (t.unsigned_abs().leading_zeros() as u32);
    let wq = Precision::new(wp.bits() + 16 + tbits);
    let num = Interval::point(m.sub_exact(&BigFloat::one()));
    let den = Interval::point(m.add_exact(&BigFloat::one()));
    let u = num.div(&den, wq);
    let lnm = atanh_core(&u, wq).mul_pow2(1);
    let res = if t == 0 {
        lnm
    } else {
        lnm.add(&Interval::from_i64(t).mul(&ln2(wq), wq), wq)
    };
    res.round_outward(wp)
}

/// Quadrant-reduced sine/cosine cores: enclosures of the series on
/// `|r| <= 0.79` (a smidgen over pi/4).
fn sin_core(r: &Interval, wq: Precision) -> Interval {
    // r * sum (-1)^k r^2k / (2k+1)!
    let neg_r2 = r.mul(r, wq).neg();
    let mut term = Interval::one();
    let mut acc = Interval::one();
    let cutoff = -(wq.bits() as i64);
    for k in 1..MAX_TERMS {
        term = term
            .mul(&neg_r2, wq)
            .div(&Interval::from_i64((2 * k as i64) * (2 * k as i64 + 1)), wq);
        acc = acc.add(&term, wq);
        let m = term.mag();
        if m.is_zero() || m.msb_exp().unwrap() < cutoff {
            let tau = mag_bound(&m);
            return acc.add(&Interval::new(tau.neg(), tau), wq).mul(r, wq);
        }
    }
    unreachable!("series failed to converge");
}

fn cos_core(r: &Interval, wq: Precision) -> Interval {
    let neg_r2 = r.mul(r, wq).neg();
    let mut term = Interval::one();
    let mut acc = Interval::one();
    let cutoff = -(wq.bits() as i64);
    for k in 1..MAX_TERMS {
        term = term
            .mul(&neg_r2, wq)
            .div(&Interval::from_i64((2 * k as i64 - 1) * (2 * k as i64)), wq);
        acc = acc.add(&term, wq);
        let m = term.mag();
        if m.is_zero() || m.msb_exp().unwrap() < cutoff {
            let tau = mag_bound(&m);
            return acc.add(&Interval::new(tau.neg(), tau), wq);
        }
    }
    unreachable!("series failed to converge");
}

/// Shared argument reduction: writes `x = n * pi/2 + r` with `|r| <~ pi/4`
/// and returns `(n mod 4, enclosure of r)`. `None` when `x` is too large
/// to reduce.
fn trig_reduce(x: &BigFloat, wp: Precision) -> Option<(u8, Interval)> {
    let e = x.msb_exp().unwrap_or(0);
    if e > TRIG_ARG_LIMIT {
        return None;
    }
    let wq = Precision::new(wp.bits() + 16 + e.max(0) as u32);
    let halfpi = pi(wq).mul_pow2(-1);
    let xi = Interval::point(x.clone());
    let n = xi.div(&halfpi, wq).midpoint(wq).round_int();
    let nint = n.to_bigint().expect("rounded reduction count is an integer");
    let q = nint.mod_floor(&BigInt::from(4)).to_u32_digits().1.first().copied().unwrap_or(0) as u8;
    let r = xi.sub(&Interval::point(n).mul(&halfpi, wq), wq);
    Some((q, r))
}

/// Enclosure of `sin(x)`; `[-1, 1]` when reduction is out of reach.
fn sin_point(x: &BigFloat, wp: Precision) -> Interval {
    if x.is_zero() {
        return Interval::zero();
    }
    let wq = Precision::new(wp.bits() + 16);
    match trig_reduce(x, wp) {
        None => Interval::new(BigFloat::from_i64(-1), BigFloat::one()),
        Some((q, r)) => {
            let v = match q {
                0 => sin_core(&r, wq),
                1 => cos_core(&r, wq),
                2 => sin_core(&r, wq).neg(),
                _ => cos_core(&r, wq).neg(),
            };
            v.round_outward(wp)
        }
    }
}

fn cos_point(x: &BigFloat, wp: Precision) -> Interval {
    if x.is_zero() {
        return Interval::one();
    }
    let wq = Precision::new(wp.bits() + 16);
    match trig_reduce(x, wp) {
        None => Interval::new(BigFloat::from_i64(-1), BigFloat::one()),
        Some((q, r)) => {
            let v = match q {
                0 => cos_core(&r, wq),
                1 => sin_core(&r, wq).neg(),
                2 => cos_core(&r, wq).neg(),
                _ => sin_core(&r, wq),
            };
            v.round_outward(wp)
        }
    }
}

/// Enclosure of `atan` over an interval already confined to `|u|` small;
/// halves the argument until the series ratio is at most 1/16.
fn atan_core(u: &Interval, wq: Precision) -> Interval {
    let quarter = BigFloat::one().mul_pow2(-2);
    let mut u = u.clone();
    let mut h = 0i64;
    while u.mag().cmp_total(&quarter) == std::cmp::Ordering::Greater {
        // u <- u / (1 + sqrt(1 + u^2)) at least halves the magnitude
        let den = Interval::one().add(&Interval::one().add(&u.mul(&u, wq), wq).sqrt(wq), wq);
        u = u.div(&den, wq);
        h += 1;
        assert!(h < 128, "argument halving failed to shrink");
    }
    let neg_u2 = u.mul(&u, wq).neg();
    let mut power = Interval::one();
    let mut acc = Interval::one();
    let cutoff = -(wq.bits() as i64);
    for k in 1..MAX_TERMS {
        power = power.mul(&neg_u2, wq);
        let term = power.div(&Interval::from_i64(2 * k as i64 + 1), wq);
        acc = acc.add(&term, wq);
        let m = term.mag();
        if m.is_zero() || m.msb_exp().unwrap() < cutoff {
            let tau = mag_bound(&m);
            let s = acc.add(&Interval::new(tau.neg(), tau), wq);
            return s.mul(&u, wq).mul_pow2(h);
        }
    }
    unreachable!("series failed to converge");
}

fn atan_point(x: &BigFloat, wp: Precision) -> Interval {
    if x.is_zero() {
        return Interval::zero();
    }
    if x.is_negative() {
        return atan_point(&x.neg(), wp).neg();
    }
    let wq = Precision::new(wp.bits() + 16);
    let two = BigFloat::from_i64(2);
    let v = if x.cmp_total(&two) == std::cmp::Ordering::Greater {
        // atan x = pi/2 - atan(1/x), and 1/x < 1/2 needs at most one halving
        let inv = Interval::one().div(&Interval::point(x.clone()), wq);
        pi(wq).mul_pow2(-1).sub(&atan_core(&inv, wq), wq)
    } else {
        atan_core(&Interval::point(x.clone()), wq)
    };
    v.round_outward(wp)
}

// ---- interval-level functions ----

/// True when some integer congruent to `r` mod 4 lies in `[lo, hi]`.
fn has_residue(lo: &BigInt, hi: &BigInt, r: u32) -> bool {
    if hi < lo {
        return false;
    }
    if hi - lo >= BigInt::from(3) {
        return true;
    }
    let four = BigInt::from(4);
    let mut j = lo.clone();
    while j <= *hi {
        if j.mod_floor(&four) == BigInt::from(r) {
            return true;
        }
        j += 1;
    }
    false
}

/// Integer window `[ceil(lo(X / (pi/2))), floor(hi(X / (pi/2)))]` that is
/// guaranteed to contain `2x/pi` for every critical `x` in `X`.
fn quadrant_window(x: &Interval, wp: Precision) -> Option<(BigInt, BigInt)> {
    let (a, b) = x.endpoints()?;
    let e = a.msb_exp().unwrap_or(0).max(b.msb_exp().unwrap_or(0));
    if e > TRIG_ARG_LIMIT {
        return None;
    }
    let wq = Precision::new(wp.bits() + 16 + e.max(0) as u32);
    let halfpi = pi(wq).mul_pow2(-1);
    let j = x.div(&halfpi, wq);
    let lo = j.lo().ceil().to_bigint()?;
    let hi = j.hi().floor().to_bigint()?;
    Some((lo, hi))
}

impl Interval {
    pub fn exp(&self, prec: Precision) -> Interval {
        match self.endpoints() {
            None => Interval::nai(),
            Some((a, b)) => {
                let la = exp_point(a, prec);
                let lb = exp_point(b, prec);
                if la.is_nai() || lb.is_nai() {
                    return Interval::nai();
                }
                Interval::new(la.lo().clone(), lb.hi().clone())
            }
        }
    }

    /// Natural log; any argument touching `(-inf, 0]` gives NAI.
    pub fn ln(&self, prec: Precision) -> Interval {
        match self.endpoints() {
            None => Interval::nai(),
            Some((a, b)) => {
                if a.is_negative() || a.is_zero() {
                    return Interval::nai();
                }
                let la = ln_point(a, prec);
                let lb = ln_point(b, prec);
                if la.is_nai() || lb.is_nai() {
                    return Interval::nai();
                }
                Interval::new(la.lo().clone(), lb.hi().clone())
            }
        }
    }

    pub fn sin(&self, prec: Precision) -> Interval {
        let full = Interval::new(BigFloat::from_i64(-1), BigFloat::one());
        let Some((a, b)) = self.endpoints() else { return full };
        if self.width(prec).cmp_total(&BigFloat::from_i64(7)) == std::cmp::Ordering::Greater {
            return full;
        }
        let wp = prec.plus(8);
        let mut acc = sin_point(a, wp).join(&sin_point(b, wp));
        match quadrant_window(self, wp) {
            None => return full,
            Some((jlo, jhi)) => {
                // sin peaks at x = (4k+1) pi/2 and bottoms at (4k+3) pi/2
                if has_residue(&jlo, &jhi, 1) {
                    acc = acc.join(&Interval::one());
                }
                if has_residue(&jlo, &jhi, 3) {
                    acc = acc.join(&Interval::from_i64(-1));
                }
            }
        }
        acc.meet(&full).expect("sine range intersects [-1,1]").round_outward(prec)
    }

    pub fn cos(&self, prec: Precision) -> Interval {
        let full = Interval::new(BigFloat::from_i64(-1), BigFloat::one());
        let Some((a, b)) = self.endpoints() else { return full };
        if self.width(prec).cmp_total(&BigFloat::from_i64(7)) == std::cmp::Ordering::Greater {
            return full;
        }
        let wp = prec.plus(8);
        let mut acc = cos_point(a, wp).join(&cos_point(b, wp));
        match quadrant_window(self, wp) {
            None => return full,
            Some((jlo, jhi)) => {
                // cos peaks at x = 4k pi/2 and bottoms at (4k+2) pi/2
                if has_residue(&jlo, &jhi, 0) {
                    acc = acc.join(&Interval::one());
                }
                if has_residue(&jlo, &jhi, 2) {
                    acc = acc.join(&Interval::from_i64(-1));
                }
            }
        }
        acc.meet(&full).expect("cosine range intersects [-1,1]").round_outward(prec)
    }

    /// Tangent; NAI when the argument may touch a pole.
    pub fn tan(&self, prec: Precision) -> Interval {
        let Some((a, b)) = self.endpoints() else { return Interval::nai() };
        let wp = prec.plus(8);
        if self.cos(wp).contains_zero() {
            return Interval::nai();
        }
        // cos bounded away from zero: the interval sits inside one branch,
        // where tan is increasing, so endpoint enclosures bracket the range
        let ta = sin_point(a, wp).div(&cos_point(a, wp), wp);
        let tb = sin_point(b, wp).div(&cos_point(b, wp), wp);
        if ta.is_nai() || tb.is_nai() {
            return Interval::nai();
        }
        Interval::new(ta.lo().clone(), tb.hi().clone()).round_outward(prec)
    }

    pub fn atan(&self, prec: Precision) -> Interval {
        match self.endpoints() {
            None => Interval::nai(),
            Some((a, b)) => {
                let la = atan_point(a, prec);
                let lb = atan_point(b, prec);
                if la.is_nai() || lb.is_nai() {
                    return Interval::nai();
                }
                Interval::new(la.lo().clone(), lb.hi().clone())
            }
        }
    }
}
