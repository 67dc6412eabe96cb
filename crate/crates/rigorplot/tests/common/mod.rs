//! Shared generators for the property and acceptance suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rigorplot::interval::{Interval, Precision};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Outward-rounded interval spanning two rationals (in either order).
pub fn iv(a: &BigRational, b: &BigRational, prec: Precision) -> Interval {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Interval::from_rational(lo, prec).join(&Interval::from_rational(hi, prec))
}

/// The point `a + (b - a) * k / n`, exactly.
pub fn lerp(a: &BigRational, b: &BigRational, k: i64, n: i64) -> BigRational {
    a + (b - a) * rat(k, n)
}

pub fn small_rational() -> impl Strategy<Value = BigRational> {
    (-48i64..=48, 1i64..=16).prop_map(|(n, d)| rat(n, d))
}

/// Every interval operation behind one index; unary ops ignore `v`.
#[derive(Clone, Copy, Debug)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Sqrt,
    Sqr,
    Abs,
    Neg,
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Atan,
    Cube,
}

pub const OPS: [Op; 16] = [
    Op::Add,
    Op::Sub,
    Op::Mul,
    Op::Div,
    Op::Inv,
    Op::Sqrt,
    Op::Sqr,
    Op::Abs,
    Op::Neg,
    Op::Exp,
    Op::Ln,
    Op::Sin,
    Op::Cos,
    Op::Tan,
    Op::Atan,
    Op::Cube,
];

pub fn apply(op: Op, u: &Interval, v: &Interval, p: Precision) -> Interval {
    match op {
        Op::Add => u.add(v, p),
        Op::Sub => u.sub(v, p),
        Op::Mul => u.mul(v, p),
        Op::Div => u.div(v, p),
        Op::Inv => u.inv(p),
        Op::Sqrt => u.sqrt(p),
        Op::Sqr => u.sqr(p),
        Op::Abs => u.abs(),
        Op::Neg => u.neg(),
        Op::Exp => u.exp(p),
        Op::Ln => u.ln(p),
        Op::Sin => u.sin(p),
        Op::Cos => u.cos(p),
        Op::Tan => u.tan(p),
        Op::Atan => u.atan(p),
        Op::Cube => u.pow_int(3, p),
    }
}

/// Expression sources using only operations defined on all of R, so
/// evaluation never goes undefined (though it may overflow to infinities
/// under towers of exp).
pub fn smooth_src() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        4 => Just("x".to_string()),
        1 => (-8i64..=8).prop_map(|n| n.to_string()),
        1 => (1i64..=9, 2i64..=12).prop_map(|(n, d)| format!("{n}/{d}")),
        1 => Just("0.25".to_string()),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            1 => inner.clone().prop_map(|a| format!("sin({a})")),
            1 => inner.clone().prop_map(|a| format!("cos({a})")),
            1 => inner.clone().prop_map(|a| format!("atan({a})")),
            1 => inner.clone().prop_map(|a| format!("exp({a})")),
            1 => inner.clone().prop_map(|a| format!("-({a})")),
            1 => (inner, 2i32..=3).prop_map(|(a, k)| format!("({a})^{k}")),
        ]
    })
}

/// The whole grammar, partial functions included.
pub fn wild_src() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        4 => Just("x".to_string()),
        1 => (-8i64..=8).prop_map(|n| n.to_string()),
        1 => (1i64..=9, 2i64..=12).prop_map(|(n, d)| format!("{n}/{d}")),
        1 => Just("1.5".to_string()),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            1 => (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} / {b})")),
            1 => inner.clone().prop_map(|a| format!("sin({a})")),
            1 => inner.clone().prop_map(|a| format!("cos({a})")),
            1 => inner.clone().prop_map(|a| format!("tan({a})")),
            1 => inner.clone().prop_map(|a| format!("atan({a})")),
            1 => inner.clone().prop_map(|a| format!("exp({a})")),
            1 => inner.clone().prop_map(|a| format!("ln({a})")),
            1 => inner.clone().prop_map(|a| format!("sqrt({a})")),
            1 => inner.clone().prop_map(|a| format!("-({a})")),
            1 => (inner, 2i32..=3).prop_map(|(a, k)| format!("({a})^{k}")),
        ]
    })
}
