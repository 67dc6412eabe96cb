// Side by side: plain interval evaluation against the model pipeline.
//
// The function is the error of a degree-6 polynomial approximation of exp
// on [-1/32, 1/32], a curve of height about 1.8e-16. Evaluating it with
// one interval pass per column loses the correlation between the
// polynomial and the exponential: both halves are known to ~2^-90, but
// their difference inflates to the square root of nothing, about 1e-4.
// The model pipeline tracks the correlation and recovers the true scale.
// Both plots are correct; only one of them shows the curve.

use num_bigint::BigInt;
use num_rational::BigRational;
use rigorplot::expr::Expr;
use rigorplot::interval::Precision;
use rigorplot::plotter::{plot, PlotConfig, Plot2};

const POLY: &str = "1 + x*(4503599627370587/4503599627370496 \
                    + x*(4503599627370519/9007199254740992 \
                    + x*(6004799497195297/36028797018963968 \
                    + x*(6004799500177993/144115188075855872 \
                    + x*(2402017537288203/288230376151711744 \
                    + x*(3202657470711551/2305843009213693952))))))";

fn height(p2: &Plot2) -> f64 {
    p2.yframe().dy().to_f64() * f64::from(p2.yframe().h())
}

fn main() {
    let src = format!("{POLY} - exp(x)");
    let e = Expr::parse(&src).expect("valid expression");
    let x1 = BigRational::new(BigInt::from(-1), BigInt::from(32));
    let x2 = BigRational::new(BigInt::from(1), BigInt::from(32));

    let cfg = PlotConfig { prec: Precision::new(90), degree: 6, ..PlotConfig::default() };
    let tm = plot(&e, &x1, &x2, None, &cfg).expect("plot succeeds");

    // max_depth 0 skips models and subdivision: one interval evaluation
    // per column, which is what a straightforward plotter would do.
    let naive_cfg = PlotConfig { max_depth: 0, ..cfg };
    let naive = plot(&e, &x1, &x2, None, &naive_cfg).expect("plot succeeds");

    let (ht, hn) = (height(&tm), height(&naive));
    println!("model pipeline y height: {ht:.3e}");
    println!("naive interval y height: {hn:.3e}");
    println!("overestimation factor:   {:.1e}", hn / ht);
}
