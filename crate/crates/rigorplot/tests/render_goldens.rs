//! Byte-exact golden tests for the text emitters.
//!
//! Three fixed plots cover the interesting shapes: a parabola on the
//! hand-checkable 10x100 frame, a constant (every column identical), and
//! ln(x) whose left half is undefined and renders as full-height columns.
//! The goldens were frozen from reviewed output; a diff here means the
//! emitters changed behavior and the change must be deliberate.

use num_bigint::BigInt;
use num_rational::BigRational;
use rigorplot::expr::Expr;
use rigorplot::plotter::{plot, Plot2, PlotConfig};
use rigorplot::render::{emit_gnuplot, emit_json, emit_runs, emit_svg, parse_json};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn build(
    src: &str,
    x1: BigRational,
    x2: BigRational,
    y: Option<(BigRational, BigRational)>,
    w: u32,
    h: u32,
) -> Plot2 {
    let e = Expr::parse(src).unwrap();
    let cfg = PlotConfig { width: w, height: h, ..PlotConfig::default() };
    match &y {
        Some((y1, y2)) => plot(&e, &x1, &x2, Some((y1, y2)), &cfg).unwrap(),
        None => plot(&e, &x1, &x2, None, &cfg).unwrap(),
    }
}

fn square() -> Plot2 {
    build("x^2", rat(0, 1), rat(1025, 1024), Some((rat(-5, 16384), rat(4155, 4096))), 10, 100)
}

fn constant() -> Plot2 {
    build("3", rat(0, 1), rat(1, 1), Some((rat(0, 1), rat(4, 1))), 4, 6)
}

/// ln(x) on [-1, 1]. Columns 0..2 are undefined and render full height.
/// Column 3 starts at -1 + 3*dx, and dx (= 1/3 rounded up to 192 bits)
/// overshoots just enough to put that boundary a hair above zero, so the
/// column is entirely inside the domain of ln and gets an honest run whose
/// huge negative values clamp to the bottom of the frame.
fn logarithm() -> Plot2 {
    build("ln(x)", rat(-1, 1), rat(1, 1), Some((rat(-2, 1), rat(2, 1))), 6, 6)
}

#[test]
fn square_runs_text() {
    assert_eq!(emit_runs(&square()), r##"0x0p+0 0x1.9ap-4 -0x1.4p-12 0x1.4c8p-7 10 100
0 0 2
1 1 4
2 3 9
3 8 16
4 15 25
5 24 36
6 35 49
7 48 64
8 63 81
9 80 99
"##);
}

#[test]
fn square_gnuplot_script_and_data() {
    let (script, data) = emit_gnuplot(&square(), "square.dat");
    assert_eq!(script, r##"set style fill solid 1.0 noborder
set xrange [0:1.0009765625]
set yrange [-0.00030517578125:1.014404296875]
plot 'square.dat' using 1:2:3 with filledcurves fc rgb '#5b8cb8' notitle
"##);
    assert_eq!(data, r##"# x low high
0 -0.00030517578125 0.019989013671875
0.10009765625 -0.00030517578125 0.040283203125
0.2001953125 0.0098419189453125 0.0910186767578125
0.30029296875 0.0301361083984375 0.16204833984375
0.400390625 0.08087158203125 0.2533721923828125
0.50048828125 0.1519012451171875 0.364990234375
0.6005859375 0.24322509765625 0.4969024658203125
0.70068359375 0.3548431396484375 0.64910888671875
0.80078125 0.48675537109375 0.8216094970703125
0.90087890625 0.6389617919921875 1.0042572021484375
1.0009765625 0.81146240234375 1.0042572021484375
"##);
}

#[test]
fn square_svg() {
    assert_eq!(emit_svg(&square(), 120, 120), r##"<svg xmlns="http://www.w3.org/2000/svg" width="120" height="120" viewBox="0 0 10 100" preserveAspectRatio="none">
<rect x="0" y="0" width="10" height="100" fill="#ffffff"/>
<g transform="matrix(1 0 0 -1 0 100)">
<polygon fill="#5b8cb8" points="0,0 1,0 2,1 3,3 4,8 5,15 6,24 7,35 8,48 9,63 10,80 10,99 9,99 8,81 7,64 6,49 5,36 4,25 3,16 2,9 1,4 0,2"/>
</g>
<text x="2" y="98" font-size="5" fill="#333333">x: 0 .. 1.0009765625</text>
<text x="2" y="5" font-size="5" fill="#333333">y: -0.00030517578125 .. 1.014404296875</text>
</svg>
"##);
}

#[test]
fn constant_runs_text() {
    assert_eq!(emit_runs(&constant()), r##"0x0p+0 0x1p-2 0x0p+0 0x1.555555555555555555555555555555555555555555555556p-1 4 6
0 4 5
1 4 5
2 4 5
3 4 5
"##);
}

#[test]
fn constant_gnuplot_script_and_data() {
    let (script, data) = emit_gnuplot(&constant(), "constant.dat");
    assert_eq!(script, r##"set style fill solid 1.0 noborder
set xrange [0:1]
set yrange [0:4]
plot 'constant.dat' using 1:2:3 with filledcurves fc rgb '#5b8cb8' notitle
"##);
    assert_eq!(data, r##"# x low high
0 2.6666666666666665 3.3333333333333335
0.25 2.6666666666666665 3.3333333333333335
0.5 2.6666666666666665 3.3333333333333335
0.75 2.6666666666666665 3.3333333333333335
1 2.6666666666666665 3.3333333333333335
"##);
}

#[test]
fn constant_svg() {
    assert_eq!(emit_svg(&constant(), 120, 120), r##"<svg xmlns="http://www.w3.org/2000/svg" width="120" height="120" viewBox="0 0 4 6" preserveAspectRatio="none">
<rect x="0" y="0" width="4" height="6" fill="#ffffff"/>
<g transform="matrix(1 0 0 -1 0 6)">
<polygon fill="#5b8cb8" points="0,4 1,4 2,4 3,4 4,4 4,5 3,5 2,5 1,5 0,5"/>
</g>
<text x="0" y="6" font-size="1" fill="#333333">x: 0 .. 1</text>
<text x="0" y="1" font-size="1" fill="#333333">y: 0 .. 4</text>
</svg>
"##);
}

#[test]
fn logarithm_runs_text() {
    assert_eq!(emit_runs(&logarithm()), r##"-0x1p+0 0x1.555555555555555555555555555555555555555555555556p-2 -0x1p+1 0x1.555555555555555555555555555555555555555555555556p-1 6 6
0 0 6
1 0 6
2 0 6
3 0 2
4 1 3
5 2 4
"##);
}

#[test]
fn logarithm_gnuplot_script_and_data() {
    let (script, data) = emit_gnuplot(&logarithm(), "logarithm.dat");
    assert_eq!(script, r##"set style fill solid 1.0 noborder
set xrange [-1:1]
set yrange [-2:2]
plot 'logarithm.dat' using 1:2:3 with filledcurves fc rgb '#5b8cb8' notitle
"##);
    assert_eq!(data, r##"# x low high
-1 -2 2
-0.6666666666666666 -2 2
-0.3333333333333333 -2 2
7.965459555662261e-59 -2 2
0.3333333333333333 -2 1.5930919111324523e-58
0.6666666666666666 -1.3333333333333333 0.6666666666666666
1 -0.6666666666666666 0.6666666666666666
"##);
}

#[test]
fn logarithm_svg() {
    assert_eq!(emit_svg(&logarithm(), 120, 120), r##"<svg xmlns="http://www.w3.org/2000/svg" width="120" height="120" viewBox="0 0 6 6" preserveAspectRatio="none">
<rect x="0" y="0" width="6" height="6" fill="#ffffff"/>
<g transform="matrix(1 0 0 -1 0 6)">
<polygon fill="#5b8cb8" points="0,0 1,0 2,0 3,0 4,0 5,1 6,2 6,4 5,4 4,3 3,6 2,6 1,6 0,6"/>
</g>
<text x="0" y="6" font-size="1" fill="#333333">x: -1 .. 1</text>
<text x="0" y="1" font-size="1" fill="#333333">y: -2 .. 2</text>
</svg>
"##);
}

#[test]
fn json_round_trips_all_three() {
    // Runs text encodes the frame and every run exactly (hex floats), so
    // comparing it before and after a JSON round trip checks full state.
    for p2 in [square(), constant(), logarithm()] {
        let back = parse_json(&emit_json(&p2)).unwrap();
        assert_eq!(emit_runs(&back), emit_runs(&p2));
    }
}
