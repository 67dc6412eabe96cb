// Validate a finished plot by adversarial sampling.
//
// The checker draws stratified random points in every column, evaluates
// the function there with interval arithmetic well beyond the plot's own
// precision, and compares against the stored runs in exact rational
// arithmetic. A reported violation is therefore a proof that the plot is
// wrong, and it comes with the offending x as a witness. The second pass
// measures completeness: how many pixel rows the runs waste over what the
// samples show the function actually reaches.

use num_bigint::BigInt;
use num_rational::BigRational;
use rigorplot::checker::{check_plot2, measure_completeness};
use rigorplot::expr::Expr;
use rigorplot::interval::Precision;
use rigorplot::plotter::{plot, PlotConfig};

fn main() {
    let e = Expr::parse("sin(x + exp(x))").expect("valid expression");
    let cfg = PlotConfig::default();
    let x1 = BigRational::from_integer(BigInt::from(0));
    let x2 = BigRational::from_integer(BigInt::from(6));
    let p2 = plot(&e, &x1, &x2, None, &cfg).expect("plot succeeds");

    // Oracle precision: three times the build precision is a good floor.
    let oracle = Precision::new(cfg.prec.bits() * 3);

    let report = check_plot2(&e, &p2, 100, oracle, 42);
    print!("{}", report.to_text());
    assert!(report.passed(), "the plotter broke its guarantee");

    let tightness = measure_completeness(&e, &p2, 100, oracle, 42);
    print!("{}", tightness.to_text());
}
