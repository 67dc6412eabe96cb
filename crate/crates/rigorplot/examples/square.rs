// Plot x^2 over [0, ~1] on a small fixed frame and print the pixel runs.
//
// The output format is one header line "ox dx oy dy w h" (hex floats, so
// the frame is reproduced exactly) followed by one "column z1 z2" line per
// column: the filled rows. Every value x^2 takes inside a column lands
// within that column's rows; that is the guarantee, not an approximation.

use num_bigint::BigInt;
use num_rational::BigRational;
use rigorplot::expr::Expr;
use rigorplot::plotter::{plot, PlotConfig};
use rigorplot::render::emit_runs;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() {
    let e = Expr::parse("x^2").expect("valid expression");
    let cfg = PlotConfig { width: 10, height: 100, ..PlotConfig::default() };

    // Exact dyadic-friendly window: x in [0, 1025/1024], y in
    // [-5/16384, 4155/4096]. Column 5 covers x in [0.5005.., 0.6007..],
    // so its run spans the pixel rows of [0.2505.., 0.3608..].
    let p2 = plot(
        &e,
        &rat(0, 1),
        &rat(1025, 1024),
        Some((&rat(-5, 16384), &rat(4155, 4096))),
        &cfg,
    )
    .expect("plot succeeds");

    print!("{}", emit_runs(&p2));
}
