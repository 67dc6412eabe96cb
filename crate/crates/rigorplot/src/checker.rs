//! Statistical validation of finished plots against direct evaluation.
//!
//! A plot promises that whenever `f(x)` lands inside the y window for an
//! `x` in column `i`, the pixel row of `f(x)` lies inside that column's
//! run. [`check_plot2`] spot-checks the promise at stratified random
//! sample points: it evaluates a thin enclosure of `f(x)` and compares it
//! against the run in exact rational arithmetic, so every reported
//! violation is a proof, never a rounding artifact. [`measure_completeness`]
//! estimates how much taller the runs are than the function demands.
//!
//! Sampling cannot prove a plot correct; it can only fail to find a
//! counterexample. Both checks are deterministic given a seed: each column
//! draws from its own stream of a seeded generator, so reports do not
//! depend on how many worker threads ran.

use crate::expr::Expr;
use crate::interval::{Interval, Precision};
use crate::plotter::Plot2;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Most violation witnesses retained in a report. The count keeps going.
const WITNESS_CAP: usize = 32;

/// One proven correctness violation: at `x` (an exact rational inside
/// column `column`), the enclosure `value` of `f(x)` lies inside the y
/// window but misses the stored run entirely.
#[derive(Debug, Clone)]
pub struct Witness {
    pub column: u32,
    pub x: BigRational,
    pub value: Interval,
    pub run: (u32, u32),
}

/// Completeness measurement: how many pixel rows the runs waste beyond
/// the sampled range of the function, per column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Excess {
    pub max: u32,
    pub mean: f64,
}

/// Outcome of a validation pass. [`check_plot2`] fills the violation
/// fields and leaves `excess` as `None`; [`measure_completeness`] fills
/// `excess` and reports no violations. `skipped_columns` counts columns
/// where every sample was undecidable, which in practice means the
/// function was undefined there.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub columns: u32,
    pub samples: u64,
    pub violation_count: u64,
    pub witnesses: Vec<Witness>,
    pub excess: Option<Excess>,
    pub skipped_columns: u32,
    pub seed: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    /// Human-readable summary, one finding per line.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "seed {}: {} samples over {} columns, {} skipped\n",
            self.seed, self.samples, self.columns, self.skipped_columns
        );
        s.push_str(&format!("correctness: {} violations", self.violation_count));
        if !self.witnesses.is_empty() {
            s.push_str(&format!(" (showing {})", self.witnesses.len()));
        }
        s.push('\n');
        for w in &self.witnesses {
            s.push_str(&format!(
                "  column {}: x = {}, f(x) in [{}, {}], run rows {}..{}\n",
                w.column,
                w.x,
                w.value.lo().to_hex(),
                w.value.hi().to_hex(),
                w.run.0,
                w.run.1
            ));
        }
        match &self.excess {
            Some(e) => s.push_str(&format!(
                "completeness: max excess {} px, mean {:.2} px\n",
                e.max, e.mean
            )),
            None => s.push_str("completeness: not measured\n"),
        }
        s
    }

    /// Machine-readable summary with the same content as [`to_text`].
    ///
    /// [`to_text`]: CheckReport::to_text
    pub fn to_json(&self) -> String {
        let witnesses: Vec<_> = self
            .witnesses
            .iter()
            .map(|w| {
                json!({
                    "column": w.column,
                    "x": w.x.to_string(),
                    "low": w.value.lo().to_hex(),
                    "high": w.value.hi().to_hex(),
                    "run": [w.run.0, w.run.1],
                })
            })
            .collect();
        let excess = self
            .excess
            .map(|e| json!({ "max": e.max, "mean": e.mean }))
            .unwrap_or(serde_json::Value::Null);
        let doc = json!({
            "columns": self.columns,
            "samples": self.samples,
            "violations": { "count": self.violation_count, "witnesses": witnesses },
            "excess": excess,
            "skipped_columns": self.skipped_columns,
            "seed": self.seed,
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
        out.push('\n');
        out
    }
}

/// Evaluation tiers, cheapest first, ending at the oracle precision.
/// Most samples are decided at 24 bits; only those too close to a run or
/// window boundary, or suffering cancellation, pay for more. A verdict at
/// any tier is exact, so escalation never changes an answer, it only
/// decides samples a cheaper tier had to leave open.
fn ladder(oracle: Precision) -> Vec<Precision> {
    let mut tiers = Vec::new();
    for bits in [24, oracle.bits() / 3 + 16] {
        if bits < oracle.bits() {
            tiers.push(Precision::new(bits));
        }
    }
    tiers.push(oracle);
    tiers.dedup_by_key(|p| p.bits());
    tiers
}

/// Stratified sample abscissas for one column: the column is cut into `n`
/// equal strata and one point drawn uniformly (64-bit resolution) in each.
/// Exact rationals, so downstream evaluation owes nothing to rounding.
fn sample_points(p2: &Plot2, col: u32, n: u32, seed: u64) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(col) + 1);
    let bnd = p2.xframe().boundary_rational(col);
    let dx = p2
        .xframe()
        .dx()
        .to_rational()
        .expect("frame step is finite");
    let den: BigInt = BigInt::from(n) << 64;
    (0..n)
        .map(|k| {
            let num = (BigInt::from(k) << 64) + BigInt::from(rng.next_u64());
            &bnd + &dx * BigRational::new(num, den.clone())
        })
        .collect()
}

enum Verdict {
    Ok,
    Violation(Interval),
    Unknown,
}

/// Exact rational bounds a column's samples are judged against.
struct Bounds {
    window_lo: BigRational,
    window_hi: BigRational,
    run_lo: BigRational,
    run_hi: BigRational,
}

impl Bounds {
    fn of(p2: &Plot2, col: u32) -> Bounds {
        let yf = p2.yframe();
        let (z1, z2) = p2.run(col);
        Bounds {
            window_lo: yf.boundary_rational(0),
            window_hi: yf.boundary_rational(yf.h()),
            run_lo: yf.boundary_rational(z1),
            run_hi: yf.boundary_rational(z2),
        }
    }

    /// Judge one enclosure of `f(x)`. Every `Ok`/`Violation` answer is
    /// certain; `Unknown` means this enclosure was too wide to decide.
    fn judge(&self, v: &Interval) -> Verdict {
        if v.is_nai() {
            return Verdict::Unknown;
        }
        let lo = v.lo().to_rational();
        let hi = v.hi().to_rational();
        // Entirely outside the window: the band promises nothing here.
        if lo.as_ref().is_some_and(|l| *l > self.window_hi)
            || hi.as_ref().is_some_and(|h| *h < self.window_lo)
        {
            return Verdict::Ok;
        }
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if *l >= self.run_lo && *h <= self.run_hi {
                return Verdict::Ok;
            }
            // Certainly in the window yet disjoint from the run: f(x) is
            // provably outside the rows the plot claims cover it.
            if *l >= self.window_lo && *h <= self.window_hi && (*h < self.run_lo || *l > self.run_hi)
            {
                return Verdict::Violation(v.clone());
            }
        }
        Verdict::Unknown
    }
}

/// Thin enclosure of `f(x)` at the given tier. Cheap tiers take a single
/// interval pass; the final tier refines until the result is as tight as
/// the precision allows.
fn enclose_at(e: &Expr, x: &BigRational, prec: Precision, final_tier: bool) -> Interval {
    if final_tier {
        e.eval_point_rational(x, prec)
    } else {
        e.eval_interval(&Interval::from_rational(x, prec), prec)
    }
}

struct ColumnCheck {
    violation_count: u64,
    witnesses: Vec<Witness>,
    skipped: bool,
}

fn check_column(
    e: &Expr,
    p2: &Plot2,
    col: u32,
    n: u32,
    seed: u64,
    tiers: &[Precision],
) -> ColumnCheck {
    let bounds = Bounds::of(p2, col);
    let run = p2.run(col);
    let mut out = ColumnCheck { violation_count: 0, witnesses: Vec::new(), skipped: false };
    let mut undecided = 0u64;
    'samples: for x in sample_points(p2, col, n, seed) {
        for (ti, &prec) in tiers.iter().enumerate() {
            let v = enclose_at(e, &x, prec, ti + 1 == tiers.len());
            match bounds.judge(&v) {
                Verdict::Ok => continue 'samples,
                Verdict::Violation(value) => {
                    out.violation_count += 1;
                    if out.witnesses.len() < WITNESS_CAP {
                        out.witnesses.push(Witness { column: col, x: x.clone(), value, run });
                    }
                    continue 'samples;
                }
                Verdict::Unknown => {}
            }
        }
        undecided += 1;
    }
    out.skipped = undecided == u64::from(n);
    out
}

/// Spot-check the band promise of `p2` for expression `e`.
///
/// Per column, `n_samples` stratified points are drawn and each enclosure
/// of `f(x)` judged against the run; see the module docs for the verdict
/// rules. The report carries every violation's witness up to a cap and is
/// reproducible from `seed` alone. `oracle_prec` is the evaluation
/// ceiling; it only means something if it comfortably exceeds the
/// precision the plot was built with (three times is a good floor).
pub fn check_plot2(
    e: &Expr,
    p2: &Plot2,
    n_samples: u32,
    oracle_prec: Precision,
    seed: u64,
) -> CheckReport {
    assert!(n_samples > 0, "need at least one sample per column");
    let tiers = ladder(oracle_prec);
    let w = p2.xframe().w();
    let results = run_columns(w, |col| check_column(e, p2, col, n_samples, seed, &tiers));
    let mut report = CheckReport {
        columns: w,
        samples: u64::from(w) * u64::from(n_samples),
        violation_count: 0,
        witnesses: Vec::new(),
        excess: None,
        skipped_columns: 0,
        seed,
    };
    for col in results {
        report.violation_count += col.violation_count;
        report.skipped_columns += u32::from(col.skipped);
        for wit in col.witnesses {
            if report.witnesses.len() < WITNESS_CAP {
                report.witnesses.push(wit);
            }
        }
    }
    report
}

/// Pixel row of ordinate `v`, rounding down, clamped to the frame.
fn pixel_floor(v: &BigRational, oy: &BigRational, dy: &BigRational, h: u32) -> u32 {
    clamp_row(((v - oy) / dy).floor().to_integer(), h)
}

/// Pixel row of ordinate `v`, rounding up, clamped to the frame.
fn pixel_ceil(v: &BigRational, oy: &BigRational, dy: &BigRational, h: u32) -> u32 {
    clamp_row(((v - oy) / dy).ceil().to_integer(), h)
}

fn clamp_row(i: BigInt, h: u32) -> u32 {
    if i.sign() == Sign::Minus {
        0
    } else if i > BigInt::from(h) {
        h
    } else {
        i.to_u32().expect("clamped to frame height")
    }
}

/// Excess pixels of one column's run, or `None` when no sample produced a
/// usable value (undefined function, or enclosures never tightened).
fn measure_column(
    e: &Expr,
    p2: &Plot2,
    col: u32,
    n: u32,
    seed: u64,
    tiers: &[Precision],
    slop: &BigRational,
) -> Option<u32> {
    let yf = p2.yframe();
    let oy = yf.boundary_rational(0);
    let dy = yf
        .dy()
        .to_rational()
        .expect("frame step is finite");
    // The function's max is at least the largest enclosure low bound seen
    // and its min at most the smallest high bound, so the spread between
    // those two is height the function certainly attains.
    let mut reached_top: Option<BigRational> = None;
    let mut reached_bot: Option<BigRational> = None;
    for x in sample_points(p2, col, n, seed) {
        let mut chosen: Option<Interval> = None;
        for (ti, &prec) in tiers.iter().enumerate() {
            let v = enclose_at(e, &x, prec, ti + 1 == tiers.len());
            if v.is_nai() {
                continue;
            }
            let narrow = match (v.lo().to_rational(), v.hi().to_rational()) {
                (Some(l), Some(h)) => &h - &l <= *slop,
                _ => false,
            };
            if narrow || ti + 1 == tiers.len() {
                chosen = Some(v);
                break;
            }
        }
        let Some(v) = chosen else { continue };
        if let Some(l) = v.lo().to_rational() {
            if reached_top.as_ref().is_none_or(|b| l > *b) {
                reached_top = Some(l);
            }
        }
        if let Some(h) = v.hi().to_rational() {
            if reached_bot.as_ref().is_none_or(|b| h < *b) {
                reached_bot = Some(h);
            }
        }
    }
    let (top, bot) = (reached_top?, reached_bot?);
    let (z1, z2) = p2.run(col);
    let sampled = if top >= bot {
        pixel_ceil(&top, &oy, &dy, yf.h()).saturating_sub(pixel_floor(&bot, &oy, &dy, yf.h()))
    } else {
        // Enclosure slop exceeded the true spread; nothing certain.
        0
    };
    Some((z2 - z1).saturating_sub(sampled))
}

/// Measure how many pixel rows the runs of `p2` overshoot the sampled
/// range of `e` per column, reporting the worst and the mean. Columns
/// without a single usable sample are skipped. Excess is an estimate from
/// below of nothing: sampling under-covers the true range, so the figure
/// errs on the large side and a small number is meaningful.
pub fn measure_completeness(
    e: &Expr,
    p2: &Plot2,
    n_samples: u32,
    oracle_prec: Precision,
    seed: u64,
) -> CheckReport {
    assert!(n_samples > 0, "need at least one sample per column");
    let tiers = ladder(oracle_prec);
    let w = p2.xframe().w();
    // Enclosures wider than a quarter pixel escalate; anything narrower
    // cannot move the quantized answer by more than the slack already
    // inherent in sampling.
    let slop = p2
        .yframe()
        .dy()
        .to_rational()
        .expect("frame step is finite")
        / BigRational::from_integer(BigInt::from(4));
    let results = run_columns(w, |col| {
        measure_column(e, p2, col, n_samples, seed, &tiers, &slop)
    });
    let mut report = CheckReport {
        columns: w,
        samples: u64::from(w) * u64::from(n_samples),
        violation_count: 0,
        witnesses: Vec::new(),
        excess: Some(Excess { max: 0, mean: 0.0 }),
        skipped_columns: 0,
        seed,
    };
    let mut sum = 0u64;
    let mut measured = 0u64;
    let mut max = 0u32;
    for r in results {
        match r {
            Some(px) => {
                sum += u64::from(px);
                measured += 1;
                max = max.max(px);
            }
            None => report.skipped_columns += 1,
        }
    }
    report.excess = Some(Excess {
        max,
        mean: if measured == 0 { 0.0 } else { sum as f64 / measured as f64 },
    });
    report
}

/// Map every column through `f`, fanning out over threads. Columns are
/// independent and `f` is pure, so the merged result is identical for any
/// thread count. `RIGORPLOT_THREADS` overrides the detected parallelism.
fn run_columns<T, F>(w: u32, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u32) -> T + Sync,
{
    let detected = std::env::var("RIGORPLOT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        });
    let threads = detected.min(w.max(1) as usize);
    if threads <= 1 || w <= 1 {
        return (0..w).map(f).collect();
    }
    let chunk = w.div_ceil(threads as u32);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads as u32)
            .map(|t| {
                let lo = t * chunk;
                let hi = (lo + chunk).min(w);
                let f = &f;
                s.spawn(move || (lo..hi).map(f).collect::<Vec<T>>())
            })
            .collect();
        let mut out = Vec::with_capacity(w as usize);
        for h in handles {
            out.extend(h.join().expect("checker worker panicked"));
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plotter::{plot, Plot2, PlotConfig};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn prec(bits: u32) -> Precision {
        Precision::new(bits)
    }

    fn square_plot() -> (Expr, Plot2) {
        let e = Expr::parse("x^2").unwrap();
        let cfg = PlotConfig { width: 10, height: 100, ..PlotConfig::default() };
        let p2 = plot(
            &e,
            &rat(0, 1),
            &rat(1025, 1024),
            Some((&rat(-5, 16384), &rat(4155, 4096))),
            &cfg,
        )
        .unwrap();
        (e, p2)
    }

    #[test]
    fn ladder_ascends_to_the_oracle() {
        let tiers = ladder(prec(200));
        assert_eq!(
            tiers.iter().map(|p| p.bits()).collect::<Vec<_>>(),
            vec![24, 82, 200]
        );
        assert_eq!(ladder(prec(24)).len(), 1);
        let near = ladder(prec(27));
        assert_eq!(near.iter().map(|p| p.bits()).collect::<Vec<_>>(), vec![24, 25, 27]);
    }

    #[test]
    fn samples_are_stratified_and_inside_the_column() {
        let (_, p2) = square_plot();
        let xs = sample_points(&p2, 3, 8, 42);
        let lo = p2.xframe().boundary_rational(3);
        let hi = p2.xframe().boundary_rational(4);
        let dx = (&hi - &lo) / rat(8, 1);
        for (k, x) in xs.iter().enumerate() {
            let s_lo = &lo + &dx * rat(k as i64, 1);
            let s_hi = &lo + &dx * rat(k as i64 + 1, 1);
            assert!(*x >= s_lo && *x < s_hi, "sample {k} outside its stratum");
        }
        // Same seed reproduces, different seed varies.
        assert_eq!(xs, sample_points(&p2, 3, 8, 42));
        assert_ne!(xs, sample_points(&p2, 3, 8, 43));
    }

    #[test]
    fn correct_plot_has_no_violations() {
        let (e, p2) = square_plot();
        let r = check_plot2(&e, &p2, 200, prec(200), 7);
        assert!(r.passed());
        assert_eq!(r.violation_count, 0);
        assert_eq!(r.skipped_columns, 0);
        assert_eq!(r.samples, 2000);
    }

    #[test]
    fn corrupted_top_bound_is_detected() {
        let (e, p2) = square_plot();
        // The function peaks in the last column; clip one row off its run.
        let mut cols = p2.runs().to_vec();
        let last = cols.len() - 1;
        cols[last].1 -= 1;
        let bad = Plot2::new(p2.xframe().clone(), p2.yframe().clone(), cols);
        let r = check_plot2(&e, &bad, 1000, prec(200), 11);
        assert!(r.violation_count >= 1, "mutation not detected");
        let w = &r.witnesses[0];
        assert_eq!(w.column, last as u32);
        assert_eq!(w.run, bad.run(last as u32));
    }

    #[test]
    fn corrupted_bottom_bound_is_detected() {
        let (e, p2) = square_plot();
        // The function bottoms out near zero in the first column; raise
        // that run's floor above it.
        let mut cols = p2.runs().to_vec();
        cols[0].0 += 1;
        let bad = Plot2::new(p2.xframe().clone(), p2.yframe().clone(), cols);
        let r = check_plot2(&e, &bad, 1000, prec(200), 11);
        assert!(r.violation_count >= 1, "mutation not detected");
        assert_eq!(r.witnesses[0].column, 0);
    }

    #[test]
    fn witness_list_is_capped_but_count_is_not() {
        let (e, p2) = square_plot();
        let cols: Vec<_> = p2.runs().iter().map(|&(z1, _)| (z1, z1)).collect();
        let bad = Plot2::new(p2.xframe().clone(), p2.yframe().clone(), cols);
        let r = check_plot2(&e, &bad, 100, prec(200), 3);
        assert!(r.violation_count > WITNESS_CAP as u64);
        assert_eq!(r.witnesses.len(), WITNESS_CAP);
    }

    #[test]
    fn full_height_runs_are_vacuously_correct() {
        // Poles and all: any value inside the window is inside a
        // full-height run, and NAI samples decide nothing.
        let e = Expr::parse("tan(x)").unwrap();
        let cfg = PlotConfig { width: 8, height: 16, ..PlotConfig::default() };
        let p2 = plot(&e, &rat(0, 1), &rat(3, 1), Some((&rat(-10, 1), &rat(10, 1))), &cfg).unwrap();
        let all = Plot2::new(
            p2.xframe().clone(),
            p2.yframe().clone(),
            vec![(0, 16); 8],
        );
        let r = check_plot2(&e, &all, 100, prec(180), 5);
        assert_eq!(r.violation_count, 0);
    }

    #[test]
    fn undefined_columns_are_skipped_not_violated() {
        let e = Expr::parse("ln(x)").unwrap();
        let cfg = PlotConfig { width: 6, height: 6, ..PlotConfig::default() };
        let p2 = plot(&e, &rat(-1, 1), &rat(1, 1), Some((&rat(-2, 1), &rat(2, 1))), &cfg).unwrap();
        let r = check_plot2(&e, &p2, 50, prec(180), 9);
        assert_eq!(r.violation_count, 0);
        // ln is undefined over the three columns left of zero; the frame
        // step rounds up, so the fourth column starts a hair above zero
        // and is fully inside the domain.
        assert_eq!(r.skipped_columns, 3);
    }

    #[test]
    fn excess_is_small_for_a_monotone_function() {
        let (e, p2) = square_plot();
        let r = measure_completeness(&e, &p2, 300, prec(200), 7);
        let ex = r.excess.unwrap();
        assert!(ex.max <= 4, "excess {} px", ex.max);
        assert_eq!(r.skipped_columns, 0);
    }

    #[test]
    fn excess_of_a_constant_is_within_quantization_slack() {
        let e = Expr::parse("3").unwrap();
        let cfg = PlotConfig { width: 4, height: 6, ..PlotConfig::default() };
        let p2 = plot(&e, &rat(0, 1), &rat(1, 1), Some((&rat(0, 1), &rat(4, 1))), &cfg).unwrap();
        let r = measure_completeness(&e, &p2, 50, prec(180), 13);
        let ex = r.excess.unwrap();
        assert!(ex.max <= 4, "excess {} px", ex.max);
    }

    #[test]
    fn reports_render_as_text_and_json() {
        let (e, p2) = square_plot();
        let mut cols = p2.runs().to_vec();
        let last = cols.len() - 1;
        cols[last].1 -= 1;
        let bad = Plot2::new(p2.xframe().clone(), p2.yframe().clone(), cols);
        let r = check_plot2(&e, &bad, 500, prec(200), 21);
        assert!(r.violation_count >= 1);
        let text = r.to_text();
        assert!(text.contains("violations"));
        assert!(text.contains("column 9"));
        let parsed: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(parsed["seed"], 21);
        assert_eq!(parsed["violations"]["count"].as_u64().unwrap(), r.violation_count);
        assert_eq!(parsed["excess"], serde_json::Value::Null);
        assert!(parsed["violations"]["witnesses"][0]["x"].is_string());

        let m = measure_completeness(&e, &p2, 50, prec(200), 21);
        let parsed: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert!(parsed["excess"]["max"].is_u64());
    }
}
