//! Expressions in one real variable: parsing, printing, evaluation.
//!
//! The grammar is conventional infix: `+ - * /`, integer powers with `^`,
//! unary minus, parentheses, the variable `x`, decimal literals (scientific
//! notation allowed), and the functions `abs inv sqr sqrt exp ln sin cos
//! tan atan`. The named constants `pi` and `e` desugar at parse time to
//! `4 * atan(1)` and `exp(1)`, so downstream evaluation never special-cases
//! them. Literals become exact rationals; nothing is folded or rewritten,
//! and evaluation works on the tree the user wrote.

use crate::bigfloat::BigFloat;
use crate::interval::{Interval, Precision};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnOp {
    Neg,
    Abs,
    Inv,
    Sqr,
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Atan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// The free variable `x`.
    Var,
    /// An exact rational constant.
    Const(BigRational),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Integer power `base ^ n`.
    Pow(Box<Expr>, i32),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl Expr {
    pub fn parse(input: &str) -> Result<Expr, ParseError> {
        let toks = lex(input)?;
        let mut p = Parser { toks: &toks, at: 0, input_len: input.len() };
        let e = p.expr()?;
        match p.peek() {
            None => Ok(e),
            Some((_, pos)) => Err(ParseError { pos: *pos, msg: "unexpected trailing input".into() }),
        }
    }

    /// Natural interval extension: each node evaluated in interval
    /// arithmetic at `prec`. Sound for every real `x` in the input.
    pub fn eval_interval(&self, x: &Interval, prec: Precision) -> Interval {
        match self {
            Expr::Var => x.round_outward(prec),
            Expr::Const(r) => Interval::from_rational(r, prec),
            Expr::Unary(op, a) => {
                let v = a.eval_interval(x, prec);
                match op {
                    UnOp::Neg => v.neg(),
                    UnOp::Abs => v.abs(),
                    UnOp::Inv => v.inv(prec),
                    UnOp::Sqr => v.sqr(prec),
                    UnOp::Sqrt => v.sqrt(prec),
                    UnOp::Exp => v.exp(prec),
                    UnOp::Ln => v.ln(prec),
                    UnOp::Sin => v.sin(prec),
                    UnOp::Cos => v.cos(prec),
                    UnOp::Tan => v.tan(prec),
                    UnOp::Atan => v.atan(prec),
                }
            }
            Expr::Binary(op, a, b) => {
                let va = a.eval_interval(x, prec);
                let vb = b.eval_interval(x, prec);
                match op {
                    BinOp::Add => va.add(&vb, prec),
                    BinOp::Sub => va.sub(&vb, prec),
                    BinOp::Mul => va.mul(&vb, prec),
                    BinOp::Div => va.div(&vb, prec),
                }
            }
            Expr::Pow(a, n) => a.eval_interval(x, prec).pow_int(*n, prec),
        }
    }

    /// Tight enclosure of `f(x)` at an exact point. Retries at growing
    /// working precision until the enclosure is within 4 ulp at `prec`;
    /// when `f(x)` is exactly zero no relative target exists, so the loop
    /// stops at a precision cap and returns the (sound, very narrow)
    /// enclosure it has.
    pub fn eval_point(&self, x: &BigFloat, prec: Precision) -> Interval {
        let xi = Interval::point(x.clone());
        self.ziv_eval(|_| xi.clone(), prec)
    }

    /// [`Expr::eval_point`] for an exact rational abscissa: the input is
    /// re-enclosed at each working precision so the final width tracks
    /// `prec` even when `x` is not dyadic.
    pub fn eval_point_rational(&self, x: &BigRational, prec: Precision) -> Interval {
        self.ziv_eval(|wp| Interval::from_rational(x, Precision::new(wp)), prec)
    }

    fn ziv_eval(&self, input: impl Fn(u32) -> Interval, prec: Precision) -> Interval {
        let mut wp = prec.bits() + 16;
        let cap = prec.bits() * 4 + 256;
        loop {
            let v = self.eval_interval(&input(wp), Precision::new(wp));
            if v.is_nai() {
                return v;
            }
            let m = v.mag();
            if m.is_zero() {
                return v; // exactly [0, 0]
            }
            // inner width <= 2 ulp leaves <= 4 ulp after outward rounding
            let target = m.msb_exp().unwrap() - prec.bits() as i64 + 1;
            let w = v.width(Precision::new(wp));
            if w.is_zero() || w.msb_exp().unwrap() <= target || wp >= cap {
                return v.round_outward(prec);
            }
            wp = wp * 3 / 2 + 32;
        }
    }

    /// Nodes in the tree; a cheap size measure for budgets and tests.
    pub fn node_count(&self) -> usize {
        match self {
            Expr::Var | Expr::Const(_) => 1,
            Expr::Unary(_, a) | Expr::Pow(a, _) => 1 + a.node_count(),
            Expr::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }
}

/// Parse a standalone rational: an optionally signed decimal literal, or a
/// fraction `a/b` of two such literals. Used for range arguments, where
/// values like `-5/16384` must survive exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    fn signed_decimal(b: &[u8], mut i: usize) -> Result<(BigRational, usize), ParseError> {
        let mut neg = false;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            neg = b[i] == b'-';
            i += 1;
        }
        let (tok, next) = lex_number(b, i)?;
        let Tok::Num(r) = tok else { unreachable!() };
        Ok((if neg { -r } else { r }, next))
    }
    let b = text.trim().as_bytes();
    let (num, mut i) = signed_decimal(b, 0)?;
    let mut value = num;
    if i < b.len() && b[i] == b'/' {
        let (den, next) = signed_decimal(b, i + 1)?;
        if den.is_zero() {
            return Err(ParseError { pos: i + 1, msg: "zero denominator".into() });
        }
        value /= den;
        i = next;
    }
    if i != b.len() {
        return Err(ParseError { pos: i, msg: "unexpected trailing input".into() });
    }
    Ok(value)
}

// ---- lexer ----

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let (tok, next) = lex_number(b, i)?;
                out.push((tok, i));
                i = next;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(input[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character {:?}", b[i] as char),
                })
            }
        }
    }
    Ok(out)
}

/// Decimal literal, possibly with a fraction and scientific exponent. The
/// `e` is only an exponent marker when digits (or a signed digit) follow;
/// otherwise it is left for the identifier lexer (`2e` is an error, but
/// `2*e` works).
fn lex_number(b: &[u8], start: usize) -> Result<(Tok, usize), ParseError> {
    let mut i = start;
    let mut int_digits = String::new();
    let mut frac_digits = String::new();
    while i < b.len() && b[i].is_ascii_digit() {
        int_digits.push(b[i] as char);
        i += 1;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            frac_digits.push(b[i] as char);
            i += 1;
        }
        if int_digits.is_empty() && frac_digits.is_empty() {
            return Err(ParseError { pos: start, msg: "expected digits around '.'".into() });
        }
    }
    if int_digits.is_empty() && frac_digits.is_empty() {
        return Err(ParseError { pos: start, msg: "expected a number".into() });
    }
    let mut exp10: i64 = 0;
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        let mut sign = 1i64;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            if b[j] == b'-' {
                sign = -1;
            }
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            let estart = j;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            let val: i64 = std::str::from_utf8(&b[estart..j])
                .unwrap()
                .parse()
                .map_err(|_| ParseError { pos: estart, msg: "exponent too large".into() })?;
            exp10 = sign * val;
            i = j;
        }
    }
    let digits = format!("{int_digits}{frac_digits}");
    let num: BigInt = digits.parse().unwrap();
    let scale = frac_digits.len() as i64 - exp10;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::new(num, ten.pow(scale as u32))
    } else {
        BigRational::from_integer(num * ten.pow((-scale) as u32))
    };
    Ok((Tok::Num(r), i))
}

// ---- parser ----

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    at: usize,
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a (Tok, usize)> {
        self.toks.get(self.at)
    }

    fn here(&self) -> usize {
        self.peek().map(|(_, p)| *p).unwrap_or(self.input_len)
    }

    fn eat(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some((tok, _)) if tok == t => {
                self.at += 1;
                Ok(())
            }
            _ => Err(ParseError { pos: self.here(), msg: format!("expected {what}") }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                Some((Tok::Plus, _)) => BinOp::Add,
                Some((Tok::Minus, _)) => BinOp::Sub,
                _ => return Ok(acc),
            };
            self.at += 1;
            let rhs = self.term()?;
            acc = Expr::Binary(op, Box::new(acc), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let op = match self.peek() {
                Some((Tok::Star, _)) => BinOp::Mul,
                Some((Tok::Slash, _)) => BinOp::Div,
                _ => return Ok(acc),
            };
            self.at += 1;
            let rhs = self.unary()?;
            acc = Expr::Binary(op, Box::new(acc), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.at += 1;
            let inner = self.unary()?;
            return Ok(Expr::Unary(UnOp::Neg, Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if let Some((Tok::Caret, _)) = self.peek() {
            self.at += 1;
            let n = self.int_exponent()?;
            let e = Expr::Pow(Box::new(base), n);
            if let Some((Tok::Caret, pos)) = self.peek() {
                return Err(ParseError {
                    pos: *pos,
                    msg: "chained '^' needs parentheses".into(),
                });
            }
            return Ok(e);
        }
        Ok(base)
    }

    /// Exponents are integer literals (optionally negated); a general
    /// expression there would make the power non-polynomial.
    fn int_exponent(&mut self) -> Result<i32, ParseError> {
        let neg = if let Some((Tok::Minus, _)) = self.peek() {
            self.at += 1;
            true
        } else {
            false
        };
        match self.peek() {
            Some((Tok::Num(r), pos)) => {
                self.at += 1;
                if !r.is_integer() {
                    return Err(ParseError { pos: *pos, msg: "exponent must be an integer".into() });
                }
                let n: i32 = r
                    .to_integer()
                    .try_into()
                    .map_err(|_| ParseError { pos: *pos, msg: "exponent out of range".into() })?;
                Ok(if neg { -n } else { n })
            }
            _ => Err(ParseError { pos: self.here(), msg: "expected integer exponent after '^'".into() }),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some((Tok::Num(r), _)) => {
                let r = r.clone();
                self.at += 1;
                Ok(Expr::Const(r))
            }
            Some((Tok::LParen, _)) => {
                self.at += 1;
                let e = self.expr()?;
                self.eat(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Some((Tok::Ident(name), pos)) => {
                let name = name.clone();
                let pos = *pos;
                self.at += 1;
                match name.as_str() {
                    "x" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Binary(
                        BinOp::Mul,
                        Box::new(Expr::Const(BigRational::from_integer(BigInt::from(4)))),
                        Box::new(Expr::Unary(
                            UnOp::Atan,
                            Box::new(Expr::Const(BigRational::from_integer(BigInt::from(1)))),
                        )),
                    )),
                    "e" => Ok(Expr::Unary(
                        UnOp::Exp,
                        Box::new(Expr::Const(BigRational::from_integer(BigInt::from(1)))),
                    )),
                    _ => {
                        let op = match name.as_str() {
                            "abs" => UnOp::Abs,
                            "inv" => UnOp::Inv,
                            "sqr" => UnOp::Sqr,
                            "sqrt" => UnOp::Sqrt,
                            "exp" => UnOp::Exp,
                            "ln" => UnOp::Ln,
                            "sin" => UnOp::Sin,
                            "cos" => UnOp::Cos,
                            "tan" => UnOp::Tan,
                            "atan" => UnOp::Atan,
                            _ => {
                                return Err(ParseError {
                                    pos,
                                    msg: format!("unknown name {name:?}"),
                                })
                            }
                        };
                        self.eat(&Tok::LParen, "'(' after function name")?;
                        let arg = self.expr()?;
                        self.eat(&Tok::RParen, "')'")?;
                        Ok(Expr::Unary(op, Box::new(arg)))
                    }
                }
            }
            _ => Err(ParseError { pos: self.here(), msg: "expected an expression".into() }),
        }
    }
}

// ---- printing ----

impl UnOp {
    fn name(self) -> &'static str {
        match self {
            UnOp::Neg => "-",
            UnOp::Abs => "abs",
            UnOp::Inv => "inv",
            UnOp::Sqr => "sqr",
            UnOp::Sqrt => "sqrt",
            UnOp::Exp => "exp",
            UnOp::Ln => "ln",
            UnOp::Sin => "sin",
            UnOp::Cos => "cos",
            UnOp::Tan => "tan",
            UnOp::Atan => "atan",
        }
    }
}

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinOp::Add | BinOp::Sub, _, _) => 1,
        Expr::Binary(BinOp::Mul | BinOp::Div, _, _) => 2,
        Expr::Unary(UnOp::Neg, _) => 3,
        Expr::Pow(_, _) => 4,
        _ => 5,
    }
}

fn write_at(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let lv = level(e);
    if lv < min {
        write!(f, "(")?;
        write_at(e, 0, f)?;
        return write!(f, ")");
    }
    match e {
        Expr::Var => write!(f, "x"),
        Expr::Const(r) => write_const(r, f),
        Expr::Unary(UnOp::Neg, a) => {
            write!(f, "-")?;
            write_at(a, 4, f)
        }
        Expr::Unary(op, a) => {
            write!(f, "{}(", op.name())?;
            write_at(a, 0, f)?;
            write!(f, ")")
        }
        Expr::Binary(op, a, b) => {
            let (sym, lv) = match op {
                BinOp::Add => ("+", 1),
                BinOp::Sub => ("-", 1),
                BinOp::Mul => ("*", 2),
                BinOp::Div => ("/", 2),
            };
            // right operand one level up so the printed tree reparses with
            // the same shape (a - (b - c) keeps its parentheses)
            write_at(a, lv, f)?;
            write!(f, " {sym} ")?;
            write_at(b, lv + 1, f)
        }
        Expr::Pow(a, n) => {
            write_at(a, 5, f)?;
            write!(f, "^{n}")
        }
    }
}

/// Constants whose denominator is 2^a 5^b print as exact decimals (the
/// only kind the parser produces); anything else falls back to a
/// parenthesized fraction, which reparses as division of two constants.
fn write_const(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_negative() {
        // parser-produced constants are nonnegative; print value faithfully
        write!(f, "(0 - ")?;
        write_const(&-r, f)?;
        return write!(f, ")");
    }
    let mut den = r.denom().clone();
    let mut k2 = 0u32;
    let mut k5 = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        k2 += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        k5 += 1;
    }
    if den != BigInt::from(1) {
        return write!(f, "({} / {})", r.numer(), r.denom());
    }
    let k = k2.max(k5);
    let scaled = r.numer() * BigInt::from(2).pow(k - k2.min(k)) * BigInt::from(5).pow(k - k5.min(k));
    // scaled / 10^k is exact
    let digits = scaled.to_string();
    if k == 0 {
        return write!(f, "{digits}");
    }
    let k = k as usize;
    let padded = if digits.len() <= k {
        format!("{}{}", "0".repeat(k - digits.len() + 1), digits)
    } else {
        digits
    };
    let (int, frac) = padded.split_at(padded.len() - k);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        write!(f, "{int}")
    } else {
        write!(f, "{int}.{frac}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn c(n: i64) -> Expr {
        Expr::Const(BigRational::from_integer(BigInt::from(n)))
    }

    #[test]
    fn parses_polynomial() {
        let e = parse("x^2 - 2");
        assert_eq!(
            e,
            Expr::Binary(BinOp::Sub, Box::new(Expr::Pow(Box::new(Expr::Var), 2)), Box::new(c(2)))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(format!("{}", parse("1 + 2 * 3")), "1 + 2 * 3");
        assert_eq!(format!("{}", parse("(1 + 2) * 3")), "(1 + 2) * 3");
        assert_eq!(format!("{}", parse("1 - 2 - 3")), "1 - 2 - 3");
        assert_eq!(format!("{}", parse("1 - (2 - 3)")), "1 - (2 - 3)");
        assert_eq!(format!("{}", parse("-x^2")), "-x^2");
        assert_eq!(parse("-x^2"), Expr::Unary(UnOp::Neg, Box::new(Expr::Pow(Box::new(Expr::Var), 2))));
        assert_eq!(format!("{}", parse("(-x)^2")), "(-x)^2");
        assert_eq!(format!("{}", parse("2 * -x")), "2 * -x");
        assert_eq!(format!("{}", parse("x^-2")), "x^-2");
    }

    #[test]
    fn decimal_and_scientific_literals() {
        assert_eq!(parse("0.1"), Expr::Const(rat(1, 10)));
        assert_eq!(parse("2.5e-3"), Expr::Const(rat(25, 10000)));
        assert_eq!(parse("1e3"), Expr::Const(rat(1000, 1)));
        assert_eq!(parse(".5"), Expr::Const(rat(1, 2)));
        assert_eq!(parse("5."), Expr::Const(rat(5, 1)));
        // 'e' only starts an exponent when digits follow
        assert_eq!(
            parse("2 * e"),
            Expr::Binary(BinOp::Mul, Box::new(c(2)), Box::new(Expr::Unary(UnOp::Exp, Box::new(c(1)))))
        );
    }

    #[test]
    fn named_constants_desugar() {
        let pi = parse("pi");
        assert_eq!(
            pi,
            Expr::Binary(
                BinOp::Mul,
                Box::new(c(4)),
                Box::new(Expr::Unary(UnOp::Atan, Box::new(c(1))))
            )
        );
        assert_eq!(parse("e"), Expr::Unary(UnOp::Exp, Box::new(c(1))));
    }

    #[test]
    fn functions_parse() {
        let e = parse("sin(x + exp(x))");
        assert_eq!(
            e,
            Expr::Unary(
                UnOp::Sin,
                Box::new(Expr::Binary(
                    BinOp::Add,
                    Box::new(Expr::Var),
                    Box::new(Expr::Unary(UnOp::Exp, Box::new(Expr::Var)))
                ))
            )
        );
        for f in ["abs", "inv", "sqr", "sqrt", "exp", "ln", "sin", "cos", "tan", "atan"] {
            assert!(Expr::parse(&format!("{f}(x)")).is_ok(), "{f} should parse");
        }
    }

    #[test]
    fn error_positions() {
        assert_eq!(Expr::parse("2 +").unwrap_err().pos, 3);
        assert_eq!(Expr::parse("sin x").unwrap_err().pos, 4);
        assert_eq!(Expr::parse("foo(x)").unwrap_err().pos, 0);
        assert_eq!(Expr::parse("x ^ y").unwrap_err().pos, 4);
        assert_eq!(Expr::parse("x^2^3").unwrap_err().pos, 3);
        assert_eq!(Expr::parse("x^0.5").unwrap_err().pos, 2);
        assert_eq!(Expr::parse("(x + 1").unwrap_err().pos, 6);
        assert_eq!(Expr::parse("x $ 2").unwrap_err().pos, 2);
        assert_eq!(Expr::parse("").unwrap_err().pos, 0);
        assert_eq!(Expr::parse("x 2").unwrap_err().pos, 2);
    }

    #[test]
    fn format_round_trips() {
        for s in [
            "x^2 - 2",
            "sin(x + exp(x))",
            "1 - (2 - 3)",
            "-x^2 + 0.125",
            "abs(x) / (1 + sqr(x))",
            "4 * atan(1)",
            "x^-3",
            "2 * -x",
            "sqrt(abs(ln(0.5)))",
        ] {
            let e = parse(s);
            let printed = format!("{e}");
            let reparsed = parse(&printed);
            assert_eq!(e, reparsed, "{s} -> {printed} changed shape");
        }
    }

    #[test]
    fn const_formatting() {
        assert_eq!(format!("{}", Expr::Const(rat(1, 2))), "0.5");
        assert_eq!(format!("{}", Expr::Const(rat(1, 10))), "0.1");
        assert_eq!(format!("{}", Expr::Const(rat(7, 1))), "7");
        assert_eq!(format!("{}", Expr::Const(rat(1, 4))), "0.25");
        assert_eq!(format!("{}", Expr::Const(rat(1, 1000))), "0.001");
        // non-decimal denominator: explicit fraction, reparses as division
        assert_eq!(format!("{}", Expr::Const(rat(1, 3))), "(1 / 3)");
        let e = Expr::parse(&format!("{}", Expr::Const(rat(1, 3)))).unwrap();
        assert_eq!(
            e.eval_interval(&Interval::zero(), Precision::default()).is_nai(),
            false
        );
    }

    #[test]
    fn eval_interval_polynomial() {
        let e = parse("x^2 - 2");
        let x = Interval::new(BigFloat::zero(), BigFloat::from_i64(2));
        let v = e.eval_interval(&x, Precision::default());
        assert_eq!(v.lo(), &BigFloat::from_i64(-2));
        assert_eq!(v.hi(), &BigFloat::from_i64(2));
    }

    #[test]
    fn eval_interval_nai_cases() {
        let p = Precision::default();
        let x = Interval::new(BigFloat::from_i64(-1), BigFloat::one());
        assert!(parse("1 / x").eval_interval(&x, p).is_nai());
        assert!(parse("ln(x)").eval_interval(&x, p).is_nai());
        assert!(parse("sqrt(x)").eval_interval(&x, p).is_nai());
        assert!(parse("inv(x)").eval_interval(&x, p).is_nai());
        // but sound where defined
        let pos = Interval::new(BigFloat::one(), BigFloat::from_i64(4));
        let v = parse("sqrt(x)").eval_interval(&pos, p);
        assert_eq!(v.lo(), &BigFloat::one());
        assert_eq!(v.hi(), &BigFloat::from_i64(2));
    }

    #[test]
    fn eval_point_tightness() {
        let p = Precision::default();
        let e = parse("sin(x + exp(x))");
        let v = e.eval_point(&BigFloat::one(), p);
        assert!(!v.is_nai());
        // 4 ulp at the result's scale
        let target = v.mag().msb_exp().unwrap() - 53 + 2;
        let w = v.width(Precision::new(64));
        assert!(w.msb_exp().unwrap() <= target, "width {w} above 4 ulp");
    }

    #[test]
    fn eval_point_retries_through_cancellation() {
        // ln(exp(x)) - x + 2^-40 is exactly 2^-40 but every evaluation
        // cancels; the first working precision cannot see the answer
        let tiny = BigRational::new(BigInt::from(1), BigInt::from(1u128 << 40));
        let e = Expr::Binary(
            BinOp::Add,
            Box::new(parse("ln(exp(x)) - x")),
            Box::new(Expr::Const(tiny.clone())),
        );
        let v = e.eval_point(&BigFloat::one(), Precision::default());
        let truth = BigFloat::one().mul_pow2(-40);
        assert!(v.contains(&truth));
        assert_eq!(v.mag().msb_exp(), Some(-39));
        let target = -40 - 53 + 3;
        assert!(v.width(Precision::new(64)).msb_exp().unwrap() <= target);
    }

    #[test]
    fn eval_point_exact_zero_stops_at_cap() {
        let e = parse("ln(exp(x)) - x");
        let v = e.eval_point(&BigFloat::one(), Precision::default());
        assert!(!v.is_nai());
        assert!(v.contains(&BigFloat::zero()));
        // sound and extremely narrow, though no 4-ulp target exists at 0
        assert!(v.width(Precision::new(64)).msb_exp().unwrap() < -200);
    }

    #[test]
    fn eval_point_nai() {
        let e = parse("1 / x");
        assert!(e.eval_point(&BigFloat::zero(), Precision::default()).is_nai());
    }

    #[test]
    fn node_count_counts() {
        assert_eq!(parse("x^2 - 2").node_count(), 4);
        assert_eq!(parse("x").node_count(), 1);
    }

    #[test]
    fn rational_arguments_parse_exactly() {
        assert_eq!(parse_rational("-5/16384").unwrap(), rat(-5, 16384));
        assert_eq!(parse_rational("820/8192").unwrap(), rat(820, 8192));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1").unwrap(), rat(-1, 1));
        assert_eq!(parse_rational(" 2.5e-1 ").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("1/-3").unwrap(), rat(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn eval_point_rational_is_tight() {
        let p = Precision::default();
        let v = parse("x^2").eval_point_rational(&rat(3, 10), p);
        let truth = rat(9, 100);
        assert!(v.lo().to_rational().unwrap() <= truth);
        assert!(v.hi().to_rational().unwrap() >= truth);
        let target = v.mag().msb_exp().unwrap() - 53 + 2;
        assert!(v.width(Precision::new(64)).msb_exp().unwrap() <= target);
    }
}
