//! Unsigned arbitrary-length mantissas with a `u128` fast path.
//!
//! Working precisions up to 60 bits (the common case) keep every
//! intermediate product inside `u128` and never touch the heap; wider
//! precisions promote to `BigUint` transparently. The representation is
//! canonical: `Big` never holds a value that fits in 128 bits, so derived
//! equality is value equality.

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Mant {
    Small(u128),
    Big(BigUint),
}

impl Mant {
    pub fn from_u128(v: u128) -> Mant {
        Mant::Small(v)
    }

    pub fn from_biguint(v: BigUint) -> Mant {
        if v.bits() <= 128 {
            let mut x: u128 = 0;
            for (i, d) in v.to_u64_digits().iter().enumerate() {
                x |= (*d as u128) << (64 * i);
            }
            Mant::Small(x)
        } else {
            Mant::Big(v)
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match self {
            Mant::Small(v) => {
                let lo = *v as u64;
                let hi = (*v >> 64) as u64;
                if hi == 0 {
                    BigUint::from(lo)
                } else {
                    BigUint::from_slice(&[
                        lo as u32,
                        (lo >> 32) as u32,
                        hi as u32,
                        (hi >> 32) as u32,
                    ])
                }
            }
            Mant::Big(v) => v.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Mant::Small(v) => *v == 0,
            Mant::Big(v) => v.is_zero(),
        }
    }

    pub fn bits(&self) -> u64 {
        match self {
            Mant::Small(v) => (128 - v.leading_zeros()) as u64,
            Mant::Big(v) => v.bits(),
        }
    }

    pub fn trailing_zeros(&self) -> u64 {
        match self {
            Mant::Small(0) => 0,
            Mant::Small(v) => v.trailing_zeros() as u64,
            Mant::Big(v) => v.trailing_zeros().unwrap_or(0),
        }
    }

    pub fn shl(&self, k: u64) -> Mant {
        match self {
            Mant::Small(0) => Mant::Small(0),
            Mant::Small(v) if (128 - v.leading_zeros() as u64) + k <= 128 => {
                Mant::Small(v << (k as u32))
            }
            _ => Mant::from_biguint(self.to_biguint() << k),
        }
    }

    /// Shift right by `k`, reporting the top discarded bit and whether any
    /// lower discarded bit was set. `k` may exceed the bit length.
    pub fn shr_round_info(&self, k: u64) -> (Mant, bool, bool) {
        if k == 0 {
            return (self.clone(), false, false);
        }
        match self {
            Mant::Small(v) => {
                if k >= 128 {
                    let top = if k == 128 { false } else { false };
                    // entire value discarded; top bit of the discarded block
                    // is bit k-1, which is beyond the value for k > 128
                    let topbit = if k - 1 < 128 { (v >> (k - 1)) & 1 == 1 } else { false };
                    let rest = if k - 1 == 0 {
                        false
                    } else {
                        let mask = if k - 1 >= 128 { u128::MAX } else { (1u128 << (k - 1)) - 1 };
                        v & mask != 0
                    };
                    let _ = top;
                    (Mant::Small(0), topbit, rest)
                } else {
                    let kept = v >> k;
                    let topbit = (v >> (k - 1)) & 1 == 1;
                    let rest = if k == 1 { false } else { v & ((1u128 << (k - 1)) - 1) != 0 };
                    (Mant::Small(kept), topbit, rest)
                }
            }
            Mant::Big(v) => {
                let kept = v.clone() >> k;
                let topbit = v.bit(k - 1);
                let low = v.clone() & ((BigUint::one() << (k - 1)) - BigUint::one());
                (Mant::from_biguint(kept), topbit, !low.is_zero())
            }
        }
    }

    pub fn add_one(&self) -> Mant {
        match self {
            Mant::Small(v) => match v.checked_add(1) {
                Some(r) => Mant::Small(r),
                None => Mant::Big(self.to_biguint() + BigUint::one()),
            },
            Mant::Big(v) => Mant::from_biguint(v + BigUint::one()),
        }
    }

    pub fn add(&self, other: &Mant) -> Mant {
        match (self, other) {
            (Mant::Small(a), Mant::Small(b)) => match a.checked_add(*b) {
                Some(r) => Mant::Small(r),
                None => Mant::from_biguint(self.to_biguint() + other.to_biguint()),
            },
            _ => Mant::from_biguint(self.to_biguint() + other.to_biguint()),
        }
    }

    /// `self - other`; caller guarantees `self >= other`.
    pub fn sub(&self, other: &Mant) -> Mant {
        match (self, other) {
            (Mant::Small(a), Mant::Small(b)) => Mant::Small(a - b),
            _ => Mant::from_biguint(self.to_biguint() - other.to_biguint()),
        }
    }

    pub fn cmp_mag(&self, other: &Mant) -> std::cmp::Ordering {
        match (self, other) {
            (Mant::Small(a), Mant::Small(b)) => a.cmp(b),
            (Mant::Small(_), Mant::Big(_)) => std::cmp::Ordering::Less,
            (Mant::Big(_), Mant::Small(_)) => std::cmp::Ordering::Greater,
            (Mant::Big(a), Mant::Big(b)) => a.cmp(b),
        }
    }

    pub fn mul(&self, other: &Mant) -> Mant {
        if let (Mant::Small(a), Mant::Small(b)) = (self, other) {
            if self.bits() + other.bits() <= 128 {
                return Mant::Small(a * b);
            }
        }
        Mant::from_biguint(self.to_biguint() * other.to_biguint())
    }

    pub fn div_rem(&self, den: &Mant) -> (Mant, bool) {
        match (self, den) {
            (Mant::Small(a), Mant::Small(b)) => (Mant::Small(a / b), a % b != 0),
            _ => {
                use num_integer::Integer;
                let (q, r) = self.to_biguint().div_rem(&den.to_biguint());
                (Mant::from_biguint(q), !r.is_zero())
            }
        }
    }

    /// Floor square root, plus whether the input was not a perfect square.
    pub fn sqrt_rem(&self) -> (Mant, bool) {
        match self {
            Mant::Small(v) => {
                let r = isqrt_u128(*v);
                (Mant::Small(r), r * r != *v)
            }
            Mant::Big(v) => {
                let r = v.sqrt();
                let exact = &r * &r == *v;
                (Mant::from_biguint(r), !exact)
            }
        }
    }

}

fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = ((n as f64).sqrt() as u128).max(1);
    // Newton iterations converge from above once x >= sqrt(n)
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    while x.checked_mul(x).map_or(true, |s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |s| s <= n) {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_big_boundary_canonical() {
        let v = BigUint::from(u128::MAX);
        assert_eq!(Mant::from_biguint(v.clone()), Mant::Small(u128::MAX));
        let w = v + BigUint::one();
        match Mant::from_biguint(w) {
            Mant::Big(_) => {}
            _ => panic!("129-bit value must be Big"),
        }
    }

    #[test]
    fn mul_promotes() {
        let a = Mant::Small(1u128 << 100);
        let b = Mant::Small(1u128 << 100);
        let p = a.mul(&b);
        assert_eq!(p.bits(), 201);
        assert_eq!(p.to_biguint(), BigUint::one() << 200);
    }

    #[test]
    fn shr_round_info_reports_lost_bits() {
        let v = Mant::Small(0b1011_0100);
        let (kept, top, rest) = v.shr_round_info(4);
        assert_eq!(kept, Mant::Small(0b1011));
        assert!(!top); // bit 3 is 0
        assert!(rest); // bit 2 is 1
        let (kept, top, rest) = v.shr_round_info(3);
        assert_eq!(kept, Mant::Small(0b10110));
        assert!(top);
        assert!(!rest);
    }

    #[test]
    fn shr_past_end() {
        let v = Mant::Small(0b101);
        let (kept, top, rest) = v.shr_round_info(200);
        assert!(kept.is_zero());
        assert!(!top);
        assert!(rest);
    }

    #[test]
    fn isqrt_exact_and_inexact() {
        assert_eq!(isqrt_u128(0), 0);
        assert_eq!(isqrt_u128(1), 1);
        assert_eq!(isqrt_u128(15), 3);
        assert_eq!(isqrt_u128(16), 4);
        assert_eq!(isqrt_u128(u128::MAX), (1u128 << 64) - 1);
        let big = (1u128 << 80) + 12345;
        let r = isqrt_u128(big);
        assert!(r * r <= big && (r + 1) * (r + 1) > big);
    }

    #[test]
    fn sqrt_rem_matches_biguint() {
        for n in [0u128, 1, 2, 3, 4, 24, 25, 26, 1 << 90, (1 << 90) + 7] {
            let (r, inexact) = Mant::Small(n).sqrt_rem();
            let rb = BigUint::from(n).sqrt();
            assert_eq!(r.to_biguint(), rb);
            assert_eq!(inexact, &rb * &rb != BigUint::from(n));
        }
    }
}
