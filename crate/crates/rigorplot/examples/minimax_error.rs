// Plot the error of a degree-6 polynomial approximation of exp.
//
// The polynomial below is a Chebyshev interpolant of exp on [-1/32, 1/32]
// with coefficients rounded to doubles, written as exact fractions so the
// expression means precisely those doubles. Its error stays below 1e-16,
// six orders of magnitude under double-precision plotting noise, yet the
// band resolves the equioscillation wiggle cleanly: the automatic y range
// ends up around 1.8e-16 tall with the curve alternating sign seven times.

use num_bigint::BigInt;
use num_rational::BigRational;
use rigorplot::expr::Expr;
use rigorplot::interval::Precision;
use rigorplot::plotter::{plot, PlotConfig};
use rigorplot::render::envelope;

const POLY: &str = "1 + x*(4503599627370587/4503599627370496 \
                    + x*(4503599627370519/9007199254740992 \
                    + x*(6004799497195297/36028797018963968 \
                    + x*(6004799500177993/144115188075855872 \
                    + x*(2402017537288203/288230376151711744 \
                    + x*(3202657470711551/2305843009213693952))))))";

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() {
    let src = format!("{POLY} - exp(x)");
    let e = Expr::parse(&src).expect("valid expression");
    let cfg = PlotConfig {
        prec: Precision::new(90),
        degree: 6,
        ..PlotConfig::default()
    };
    let p2 = plot(&e, &rat(-1, 32), &rat(1, 32), None, &cfg).expect("plot succeeds");

    let yf = p2.yframe();
    let height = yf.dy().to_f64() * f64::from(yf.h());
    println!("auto y window: {} .. {} (height {:.3e})",
        yf.boundary(0).to_f64(), yf.boundary(yf.h()).to_f64(), height);

    // Count the error's sign alternations from the band itself: a column
    // strictly above the zero row is a proof the error is positive there,
    // and symmetrically below.
    let env = envelope(&p2);
    let zero = rat(0, 1);
    let mut signs = Vec::new();
    for i in 0..p2.xframe().w() {
        let (z1, z2) = p2.run(i);
        let lo = yf.boundary_rational(z1);
        let hi = yf.boundary_rational(z2);
        let s = if lo > zero {
            1
        } else if hi < zero {
            -1
        } else {
            continue;
        };
        if signs.last() != Some(&s) {
            signs.push(s);
        }
    }
    println!("proven sign changes: {}", signs.len().saturating_sub(1));
    println!(
        "envelope spans {} boundaries, first low point ({:.3e}, {:.3e})",
        env.len(),
        env.xs()[0].to_f64(),
        env.low()[0].to_f64()
    );
}
