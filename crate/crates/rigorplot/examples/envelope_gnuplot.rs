// Produce a Gnuplot script/data pair and the vector envelope of a plot.
//
// The envelope is the pair of piecewise-linear curves hugging the band
// from below and above, one point per column boundary. It is what the
// Gnuplot data file contains (x, low, high per line), and it is exposed
// directly for callers that render with something else.
//
// Files land in the system temp directory; run gnuplot on the .gp path
// to see the band.

use num_bigint::BigInt;
use num_rational::BigRational;
use rigorplot::expr::Expr;
use rigorplot::plotter::{plot, PlotConfig};
use rigorplot::render::{emit_gnuplot, envelope};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() {
    let e = Expr::parse("sin(x)/x").expect("valid expression");
    let cfg = PlotConfig { width: 320, height: 200, ..PlotConfig::default() };
    let p2 = plot(&e, &rat(-20, 1), &rat(20, 1), None, &cfg).expect("plot succeeds");

    let env = envelope(&p2);
    println!("envelope: {} boundary points", env.len());
    // At x = 0 the band spans the whole window: the two columns touching
    // zero divide by an interval containing zero, so the engine cannot
    // rule any value out there. The removable singularity shows up as an
    // honest full-height sliver two columns wide.
    for i in [0usize, 160, 320] {
        println!(
            "  x = {:8.3}  band [{:+.4}, {:+.4}]",
            env.xs()[i].to_f64(),
            env.low()[i].to_f64(),
            env.high()[i].to_f64()
        );
    }

    let dir = std::env::temp_dir();
    let script_path = dir.join("sinc.gp");
    let data_path = dir.join("sinc.dat");
    let (script, data) = emit_gnuplot(&p2, &data_path.display().to_string());
    std::fs::write(&script_path, script).expect("write script");
    std::fs::write(&data_path, data).expect("write data");
    println!("wrote {} and {}", script_path.display(), data_path.display());
}
