// Render sin(x + exp(x)) on [0, 6] as an SVG written to standard output.
//
//     cargo run --example oscillation > oscillation.svg
//
// The function oscillates faster and faster to the right; near x = 6 a
// single pixel column spans most of a period. Point sampling misses the
// peaks there and draws a band that visibly falls short of -1 and 1. The
// enclosure band does not: columns carry the function's whole range, so
// the right edge reaches both extremes.

use num_bigint::BigInt;
use num_rational::BigRational;
use rigorplot::expr::Expr;
use rigorplot::plotter::{plot, PlotConfig};
use rigorplot::render::emit_svg;

fn main() {
    let e = Expr::parse("sin(x + exp(x))").expect("valid expression");
    let cfg = PlotConfig::default();
    let x1 = BigRational::from_integer(BigInt::from(0));
    let x2 = BigRational::from_integer(BigInt::from(6));
    let p2 = plot(&e, &x1, &x2, None, &cfg).expect("plot succeeds");
    print!("{}", emit_svg(&p2, cfg.width, cfg.height));
}
