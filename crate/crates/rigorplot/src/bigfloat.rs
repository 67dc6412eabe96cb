//! Arbitrary-precision binary floating point with directed rounding.
//!
//! A finite value is `±mant * 2^exp` with `mant` odd, so every
//! representable number has exactly one representation and equality is
//! structural. Precision is a per-operation argument, never global state:
//! the same value can be consumed at 53 bits by one caller and 200 by
//! another. Directed rounding (`Down`/`Up`) is what makes interval
//! endpoints sound; `Nearest` exists for midpoints and display.
//!
//! Exponents saturate at `2^44`. Saturation replaces a too-large result
//! with infinity or a sentinel finite value of the correct sign; the
//! interval layer maps non-finite endpoints to the absorbing error value,
//! which keeps saturation sound (enclosures only widen).

use crate::mant::Mant;
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero as _};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction. `Down` is toward -inf, `Up` toward +inf.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
    Nearest,
}

impl Round {
    /// The opposite directed mode; `Nearest` is its own opposite.
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
            Round::Nearest => Round::Nearest,
        }
    }
}

const EXP_LIMIT: i64 = 1 << 44;
/// Exponent gap beyond which exact addition would materialize absurdly
/// long mantissas; callers of `*_exact` stay far under this.
const EXACT_GAP_LIMIT: i64 = 1 << 25;

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Zero,
    Finite { neg: bool, mant: Mant, exp: i64 },
    Inf { neg: bool },
    Nan,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigFloat {
    repr: Repr,
}

impl BigFloat {
    pub fn zero() -> BigFloat {
        BigFloat { repr: Repr::Zero }
    }

    pub fn one() -> BigFloat {
        BigFloat::from_i64(1)
    }

    pub fn infinity(neg: bool) -> BigFloat {
        BigFloat { repr: Repr::Inf { neg } }
    }

    pub fn nan() -> BigFloat {
        BigFloat { repr: Repr::Nan }
    }

    pub fn from_i64(v: i64) -> BigFloat {
        if v == 0 {
            return BigFloat::zero();
        }
        let neg = v < 0;
        let mag = v.unsigned_abs() as u128;
        normalize(neg, Mant::from_u128(mag), 0)
    }

    pub fn from_u64(v: u64) -> BigFloat {
        if v == 0 {
            return BigFloat::zero();
        }
        normalize(false, Mant::from_u128(v as u128), 0)
    }

    pub fn from_bigint(v: &BigInt) -> BigFloat {
        if v.is_zero() {
            return BigFloat::zero();
        }
        normalize(v.sign() == Sign::Minus, Mant::from_biguint(v.magnitude().clone()), 0)
    }

    /// Exact conversion; every finite f64 is a dyadic rational.
    pub fn from_f64(v: f64) -> BigFloat {
        if v.is_nan() {
            return BigFloat::nan();
        }
        if v.is_infinite() {
            return BigFloat::infinity(v < 0.0);
        }
        if v == 0.0 {
            return BigFloat::zero();
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let be = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if be == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), be - 1075)
        };
        normalize(neg, Mant::from_u128(mant as u128), exp)
    }

    /// `num / den` rounded in `dir` at `prec` bits. `den` must be nonzero.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> BigFloat {
        if r.is_zero() {
            return BigFloat::zero();
        }
        let neg = r.is_negative();
        let num = BigFloat::from_bigint(&r.numer().abs());
        let den = BigFloat::from_bigint(&r.denom().abs());
        let mag_dir = if neg { dir.flip() } else { dir };
        let mag = num.div_dir(&den, prec, mag_dir);
        if neg {
            mag.neg()
        } else {
            mag
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.repr, Repr::Zero | Repr::Finite { .. })
    }

    pub fn is_nan(&self) -> bool {
        matches!(self.repr, Repr::Nan)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.repr, Repr::Inf { .. })
    }

    /// True for negative finite values and -inf; false for zero and NaN.
    pub fn is_negative(&self) -> bool {
        match &self.repr {
            Repr::Finite { neg, .. } | Repr::Inf { neg } => *neg,
            _ => false,
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.repr {
            Repr::Finite { neg, .. } | Repr::Inf { neg } => !*neg,
            _ => false,
        }
    }

    /// Position of the most significant bit: the value's magnitude lies in
    /// `[2^(e-1), 2^e)`. `None` for zero, infinity, NaN.
    pub fn msb_exp(&self) -> Option<i64> {
        match &self.repr {
            Repr::Finite { mant, exp, .. } => Some(exp + mant.bits() as i64),
            _ => None,
        }
    }

    /// Bit length of the odd mantissa (how many bits the value needs).
    pub fn mant_bits(&self) -> u64 {
        match &self.repr {
            Repr::Finite { mant, .. } => mant.bits(),
            _ => 0,
        }
    }

    pub fn neg(&self) -> BigFloat {
        let repr = match &self.repr {
            Repr::Zero => Repr::Zero,
            Repr::Finite { neg, mant, exp } => {
                Repr::Finite { neg: !neg, mant: mant.clone(), exp: *exp }
            }
            Repr::Inf { neg } => Repr::Inf { neg: !neg },
            Repr::Nan => Repr::Nan,
        };
        BigFloat { repr }
    }

    pub fn abs(&self) -> BigFloat {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact multiplication by a power of two (exponent shift only).
    pub fn mul_pow2(&self, k: i64) -> BigFloat {
        match &self.repr {
            Repr::Finite { neg, mant, exp } => normalize(*neg, mant.clone(), exp + k),
            _ => self.clone(),
        }
    }

    /// Round to `prec` significant bits in direction `dir`.
    pub fn round_to(&self, prec: u32, dir: Round) -> BigFloat {
        match &self.repr {
            Repr::Finite { neg, mant, exp } => {
                round_finite(*neg, mant.clone(), *exp, prec, dir)
            }
            _ => self.clone(),
        }
    }

    /// One unit in the last place at `prec` bits: `2^(msb_exp - prec)`.
    /// Zero and non-finite values have no ulp.
    pub fn ulp(&self, prec: u32) -> Option<BigFloat> {
        self.msb_exp().map(|e| BigFloat::one().mul_pow2(e - prec as i64))
    }

    // ---- exact arithmetic (dyadic: +, -, * never lose bits) ----

    pub fn add_exact(&self, other: &BigFloat) -> BigFloat {
        self.add_full(other)
    }

    pub fn sub_exact(&self, other: &BigFloat) -> BigFloat {
        self.add_full(&other.neg())
    }

    pub fn mul_exact(&self, other: &BigFloat) -> BigFloat {
        match (&self.repr, &other.repr) {
            (Repr::Nan, _) | (_, Repr::Nan) => BigFloat::nan(),
            (Repr::Zero, Repr::Inf { .. }) | (Repr::Inf { .. }, Repr::Zero) => BigFloat::nan(),
            (Repr::Zero, _) | (_, Repr::Zero) => BigFloat::zero(),
            (Repr::Inf { neg: a }, r) | (r, Repr::Inf { neg: a }) => {
                let bn = match r {
                    Repr::Finite { neg, .. } | Repr::Inf { neg } => *neg,
                    _ => unreachable!(),
                };
                BigFloat::infinity(a ^ bn)
            }
            (
                Repr::Finite { neg: na, mant: ma, exp: ea },
                Repr::Finite { neg: nb, mant: mb, exp: eb },
            ) => normalize(na ^ nb, ma.mul(mb), ea + eb),
        }
    }

    fn add_full(&self, other: &BigFloat) -> BigFloat {
        match (&self.repr, &other.repr) {
            (Repr::Nan, _) | (_, Repr::Nan) => BigFloat::nan(),
            (Repr::Inf { neg: a }, Repr::Inf { neg: b }) => {
                if a == b {
                    self.clone()
                } else {
                    BigFloat::nan()
                }
            }
            (Repr::Inf { .. }, _) => self.clone(),
            (_, Repr::Inf { .. }) => other.clone(),
            (Repr::Zero, _) => other.clone(),
            (_, Repr::Zero) => self.clone(),
            (
                Repr::Finite { neg: na, mant: ma, exp: ea },
                Repr::Finite { neg: nb, mant: mb, exp: eb },
            ) => {
                let e0 = (*ea).min(*eb);
                let da = (ea - e0) as u64;
                let db = (eb - e0) as u64;
                assert!(
                    (da as i64) < EXACT_GAP_LIMIT && (db as i64) < EXACT_GAP_LIMIT,
                    "exponent gap too large for exact addition"
                );
                let sa = ma.shl(da);
                let sb = mb.shl(db);
                if na == nb {
                    normalize(*na, sa.add(&sb), e0)
                } else {
                    match sa.cmp_mag(&sb) {
                        Ordering::Equal => BigFloat::zero(),
                        Ordering::Greater => normalize(*na, sa.sub(&sb), e0),
                        Ordering::Less => normalize(*nb, sb.sub(&sa), e0),
                    }
                }
            }
        }
    }

    // ---- rounded arithmetic ----

    pub fn add_dir(&self, other: &BigFloat, prec: u32, dir: Round) -> BigFloat {
        // When magnitudes differ by far more than prec, the small operand
        // only matters through its sign. Substitute a sign-preserving value
        // just below the rounding granularity to avoid materializing the gap.
        if let (Some(ea), Some(eb)) = (self.msb_exp(), other.msb_exp()) {
            let gap_bound = prec as i64 + 8;
            if ea >= eb.saturating_add(gap_bound) {
                let surr = surrogate(self, other, prec);
                return self.add_full(&surr).round_to(prec, dir);
            }
            if eb >= ea.saturating_add(gap_bound) {
                let surr = surrogate(other, self, prec);
                return other.add_full(&surr).round_to(prec, dir);
            }
        }
        self.add_full(other).round_to(prec, dir)
    }

    pub fn sub_dir(&self, other: &BigFloat, prec: u32, dir: Round) -> BigFloat {
        self.add_dir(&other.neg(), prec, dir)
    }

    pub fn mul_dir(&self, other: &BigFloat, prec: u32, dir: Round) -> BigFloat {
        self.mul_exact(other).round_to(prec, dir)
    }

    pub fn div_dir(&self, other: &BigFloat, prec: u32, dir: Round) -> BigFloat {
        match (&self.repr, &other.repr) {
            (Repr::Nan, _) | (_, Repr::Nan) => BigFloat::nan(),
            (_, Repr::Zero) => BigFloat::nan(),
            (Repr::Zero, _) => BigFloat::zero(),
            (Repr::Inf { .. }, Repr::Inf { .. }) => BigFloat::nan(),
            (Repr::Inf { neg }, Repr::Finite { neg: nb, .. }) => BigFloat::infinity(neg ^ nb),
            (Repr::Finite { .. }, Repr::Inf { .. }) => BigFloat::zero(),
            (
                Repr::Finite { neg: na, mant: ma, exp: ea },
                Repr::Finite { neg: nb, mant: mb, exp: eb },
            ) => {
                let neg = na ^ nb;
                // Scale the numerator so the integer quotient carries
                // prec+2 significant bits, then bump by the remainder.
                let s = prec as i64 + 2 + mb.bits() as i64 - ma.bits() as i64;
                let (num, den_shift) = if s >= 0 { (ma.shl(s as u64), 0) } else { (ma.clone(), (-s) as u64) };
                let den = mb.shl(den_shift);
                let (q, inexact) = num.div_rem(&den);
                let q = bump(q, inexact, neg, dir);
                round_finite(neg, q, ea - eb - s, prec, dir)
            }
        }
    }

    pub fn sqrt_dir(&self, prec: u32, dir: Round) -> BigFloat {
        match &self.repr {
            Repr::Nan => BigFloat::nan(),
            Repr::Zero => BigFloat::zero(),
            Repr::Inf { neg: false } => BigFloat::infinity(false),
            Repr::Inf { neg: true } => BigFloat::nan(),
            Repr::Finite { neg: true, .. } => BigFloat::nan(),
            Repr::Finite { neg: false, mant, exp } => {
                // Shift so the radicand has ~2*(prec+2) bits and an even
                // exponent; the integer root then has prec+2 bits.
                let want = 2 * (prec as i64 + 2);
                let have = mant.bits() as i64;
                let mut s = (want - have).max(0);
                if (exp - s) % 2 != 0 {
                    s += 1;
                }
                let shifted = mant.shl(s as u64);
                let (r, inexact) = shifted.sqrt_rem();
                let r = bump(r, inexact, false, dir);
                round_finite(false, r, (exp - s) / 2, prec, dir)
            }
        }
    }

    // ---- comparison ----

    /// Total order over non-NaN values; panics on NaN.
    pub fn cmp_total(&self, other: &BigFloat) -> Ordering {
        self.partial_cmp(other).expect("NaN is unordered")
    }

    pub fn min(&self, other: &BigFloat) -> BigFloat {
        if self.cmp_total(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn max(&self, other: &BigFloat) -> BigFloat {
        if self.cmp_total(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    // ---- conversions out ----

    /// Nearest f64; overflows to infinity, underflows to zero.
    pub fn to_f64(&self) -> f64 {
        match &self.repr {
            Repr::Zero => 0.0,
            Repr::Nan => f64::NAN,
            Repr::Inf { neg } => {
                if *neg {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
            Repr::Finite { .. } => {
                let r = self.round_to(53, Round::Nearest);
                match &r.repr {
                    Repr::Finite { neg, mant, exp } => {
                        let m = match mant {
                            Mant::Small(v) => *v as f64,
                            Mant::Big(_) => unreachable!("53-bit mantissa is small"),
                        };
                        let e = (*exp).clamp(-1200, 1200) as i32;
                        let v = ldexp(m, e);
                        if *neg {
                            -v
                        } else {
                            v
                        }
                    }
                    Repr::Inf { neg } => {
                        if *neg {
                            f64::NEG_INFINITY
                        } else {
                            f64::INFINITY
                        }
                    }
                    _ => 0.0,
                }
            }
        }
    }

    /// Exact rational value; `None` for non-finite.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Zero => Some(BigRational::zero()),
            Repr::Finite { neg, mant, exp } => {
                let m = BigInt::from_biguint(
                    if *neg { Sign::Minus } else { Sign::Plus },
                    mant.to_biguint(),
                );
                let r = if *exp >= 0 {
                    BigRational::from_integer(m << *exp)
                } else {
                    BigRational::new(m, BigInt::from(BigUint::from(1u8) << ((-exp) as u64)))
                };
                Some(r)
            }
            _ => None,
        }
    }

    /// Greatest integer not above the value; identity on non-finite.
    pub fn floor(&self) -> BigFloat {
        match &self.repr {
            Repr::Finite { neg, mant, exp } if *exp < 0 => {
                let (kept, top, rest) = mant.shr_round_info((-exp) as u64);
                let inexact = top || rest;
                let kept = if *neg && inexact { kept.add_one() } else { kept };
                normalize(*neg, kept, 0)
            }
            _ => self.clone(),
        }
    }

    pub fn ceil(&self) -> BigFloat {
        self.neg().floor().neg()
    }

    /// Nearest integer, ties toward +inf (any fixed choice serves argument
    /// reduction, which only needs the residual below 0.51 steps).
    pub fn round_int(&self) -> BigFloat {
        self.add_exact(&BigFloat::one().mul_pow2(-1)).floor()
    }

    /// Exact integer value; `None` when fractional or non-finite.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Zero => Some(BigInt::from(0)),
            Repr::Finite { neg, mant, exp } if *exp >= 0 => {
                let mag = mant.to_biguint() << (*exp as u64);
                Some(BigInt::from_biguint(if *neg { Sign::Minus } else { Sign::Plus }, mag))
            }
            _ => None,
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_bigint().and_then(|v| v.to_i64())
    }

    /// Lossless C99-style hex float: `-0x1.9ap-3`, `0x0p+0`, `inf`, `nan`.
    pub fn to_hex(&self) -> String {
        match &self.repr {
            Repr::Zero => "0x0p+0".to_string(),
            Repr::Nan => "nan".to_string(),
            Repr::Inf { neg } => if *neg { "-inf" } else { "inf" }.to_string(),
            Repr::Finite { neg, mant, exp } => {
                let bits = mant.bits();
                let frac_bits = bits - 1;
                let pad = (4 - frac_bits % 4) % 4;
                let padded = mant.shl(pad).to_biguint();
                let hex = padded.to_str_radix(16);
                // first hex digit is the leading 1 (padding keeps it alone)
                let (head, frac) = hex.split_at(1);
                debug_assert_eq!(head, "1");
                let frac = frac.trim_end_matches('0');
                let p = exp + bits as i64 - 1;
                let sign = if *neg { "-" } else { "" };
                if frac.is_empty() {
                    format!("{sign}0x1p{p:+}")
                } else {
                    format!("{sign}0x1.{frac}p{p:+}")
                }
            }
        }
    }

    pub fn parse_hex(s: &str) -> Result<BigFloat, String> {
        let t = s.trim();
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        match t {
            "inf" => return Ok(BigFloat::infinity(neg)),
            "nan" => return Ok(BigFloat::nan()),
            _ => {}
        }
        let t = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .ok_or_else(|| format!("expected hex float, got {s:?}"))?;
        let pidx = t
            .find(['p', 'P'])
            .ok_or_else(|| format!("missing exponent in hex float {s:?}"))?;
        let (digits, expstr) = t.split_at(pidx);
        let expstr = &expstr[1..];
        let exp10: i64 = expstr
            .parse()
            .map_err(|_| format!("bad exponent in hex float {s:?}"))?;
        let (int_part, frac_part) = match digits.find('.') {
            Some(d) => (&digits[..d], &digits[d + 1..]),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(format!("no digits in hex float {s:?}"));
        }
        let all: String = format!("{int_part}{frac_part}");
        let mag = BigUint::parse_bytes(all.as_bytes(), 16)
            .ok_or_else(|| format!("bad hex digits in {s:?}"))?;
        if mag.is_zero() {
            return Ok(BigFloat::zero());
        }
        let exp = exp10 - 4 * frac_part.len() as i64;
        Ok(normalize(neg, Mant::from_biguint(mag), exp))
    }
}

/// `m * 2^e` in steps small enough that intermediate products stay finite.
/// The last step may round into the subnormal range, which can double-round
/// against the earlier 53-bit rounding; display use tolerates that.
fn ldexp(m: f64, e: i32) -> f64 {
    let mut v = m;
    let mut e = e;
    while e > 500 {
        v *= f64::powi(2.0, 500);
        e -= 500;
    }
    while e < -500 {
        v *= f64::powi(2.0, -500);
        e += 500;
    }
    v * f64::powi(2.0, e)
}

/// Replacement for a `small` operand whose magnitude is negligible next to
/// `big` at `prec`: same sign, magnitude `2^(msb(big)-prec-10)`. Adding the
/// surrogate moves the sum strictly less than one ulp and in the same
/// direction as the true operand would, so directed rounding stays sound.
fn surrogate(big: &BigFloat, small: &BigFloat, prec: u32) -> BigFloat {
    if small.is_zero() {
        return BigFloat::zero();
    }
    let e = big.msb_exp().unwrap() - prec as i64 - 10;
    let mag = BigFloat::one().mul_pow2(e);
    if small.is_negative() {
        mag.neg()
    } else {
        mag
    }
}

/// Nudge a truncated magnitude toward the rounding direction when the
/// discarded remainder was nonzero. `Nearest` keeps the truncation and lets
/// `round_finite` see an inexact sticky via the extra guard bits instead;
/// at two guard bits the final nearest result can be off by a sub-ulp
/// amount, which the interval layer never relies on.
fn bump(q: Mant, inexact: bool, neg: bool, dir: Round) -> Mant {
    if !inexact {
        return q;
    }
    let up_mag = match dir {
        Round::Up => !neg,
        Round::Down => neg,
        Round::Nearest => false,
    };
    if up_mag {
        q.add_one()
    } else {
        q
    }
}

fn normalize(neg: bool, mant: Mant, exp: i64) -> BigFloat {
    if mant.is_zero() {
        return BigFloat::zero();
    }
    let tz = mant.trailing_zeros();
    let (mant, exp) = if tz > 0 {
        let (m, _, _) = mant.shr_round_info(tz);
        (m, exp + tz as i64)
    } else {
        (mant, exp)
    };
    let msb = exp + mant.bits() as i64;
    // Saturation must yield a non-finite value in both directions: the
    // interval layer detects non-finite endpoints and widens to the
    // absorbing error value, whereas a finite substitute could silently
    // land on the wrong side of the true result.
    if msb > EXP_LIMIT {
        return BigFloat::infinity(neg);
    }
    if msb < -EXP_LIMIT {
        return BigFloat::nan();
    }
    BigFloat { repr: Repr::Finite { neg, mant, exp } }
}

fn round_finite(neg: bool, mant: Mant, exp: i64, prec: u32, dir: Round) -> BigFloat {
    assert!(prec >= 2, "precision below 2 bits");
    if mant.is_zero() {
        return BigFloat::zero();
    }
    let bits = mant.bits();
    if bits <= prec as u64 {
        return normalize(neg, mant, exp);
    }
    let shift = bits - prec as u64;
    let (kept, top, rest) = mant.shr_round_info(shift);
    let inexact = top || rest;
    if !inexact {
        return normalize(neg, kept, exp + shift as i64);
    }
    let up_mag = match dir {
        Round::Down => neg,
        Round::Up => !neg,
        Round::Nearest => {
            let odd = kept.trailing_zeros() == 0 && !kept.is_zero();
            top && (rest || odd)
        }
    };
    let kept = if up_mag { kept.add_one() } else { kept };
    normalize(neg, kept, exp + shift as i64)
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &BigFloat) -> Option<Ordering> {
        use Repr::*;
        let sign_of = |r: &Repr| -> Option<i8> {
            match r {
                Zero => Some(0),
                Finite { neg, .. } | Inf { neg } => Some(if *neg { -1 } else { 1 }),
                Nan => None,
            }
        };
        let sa = sign_of(&self.repr)?;
        let sb = sign_of(&other.repr)?;
        if sa != sb {
            return Some(sa.cmp(&sb));
        }
        match (&self.repr, &other.repr) {
            (Zero, Zero) => Some(Ordering::Equal),
            (Inf { .. }, Inf { .. }) => Some(Ordering::Equal),
            (Inf { neg }, _) => Some(if *neg { Ordering::Less } else { Ordering::Greater }),
            (_, Inf { neg }) => Some(if *neg { Ordering::Greater } else { Ordering::Less }),
            (
                Finite { neg, mant: ma, exp: ea },
                Finite { mant: mb, exp: eb, .. },
            ) => {
                let msa = ea + ma.bits() as i64;
                let msb = eb + mb.bits() as i64;
                let mag = if msa != msb {
                    msa.cmp(&msb)
                } else {
                    let e0 = (*ea).min(*eb);
                    ma.shl((ea - e0) as u64).cmp_mag(&mb.shl((eb - e0) as u64))
                };
                Some(if *neg { mag.reverse() } else { mag })
            }
            _ => unreachable!("sign agreement filtered mixed zero cases"),
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Nan => write!(f, "nan"),
            Repr::Inf { neg } => write!(f, "{}inf", if *neg { "-" } else { "" }),
            Repr::Finite { exp, .. } => {
                let msb = self.msb_exp().unwrap();
                if msb.abs() < 1000 && exp.abs() < 1100 {
                    write!(f, "{}", self.to_f64())
                } else {
                    write!(f, "{}", self.to_hex())
                }
            }
        }
    }
}
