//! Column-wise graph enclosure: split the x-range into pixel columns,
//! enclose the function's range over every column, and quantize the
//! enclosures to integer pixel runs.
//!
//! The engine works piece by piece over a worklist of column-aligned
//! subintervals. Each piece gets one Taylor model; each of its columns is
//! evaluated through the model and accepted only when the enclosure is
//! within a few pixels of values the function provably attains (the
//! endpoint completeness check). Pieces that fail are bisected at a column
//! boundary; single columns that fail are refined by sub-column bisection.
//! Failures to build a model degrade to plain interval evaluation, which
//! keeps every produced enclosure correct at the cost of completeness.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::bigfloat::{BigFloat, Round};
use crate::expr::Expr;
use crate::interval::{Interval, Precision};
use crate::rpa::TaylorModel;

/// Mantissa bits kept for frame origins and steps. User ranges are
/// quantized to this grid (origin rounded down, step rounded up) so that
/// frames are exact dyadic rationals: column boundaries come out exact and
/// frame parameters serialize losslessly. The covered domain always
/// contains the requested one; the overshoot is below 2^-190 relative.
const FRAME_PREC: u32 = 192;

/// Working precision for completeness-check thresholds. The check is a
/// heuristic steering subdivision, never a soundness argument, so a fixed
/// small precision suffices; rounding the slack down only means an
/// occasional extra refinement.
const CHECK_PREC: u32 = 64;

/// Cap on bisection nodes spent refining a single pixel column.
const COLUMN_BUDGET: u32 = 1024;

/// Failures `plot` can report. Anything else (undefined regions, models
/// that cannot be built) degrades to NAI columns instead of failing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlotError {
    /// A range or size argument violates its precondition.
    #[error("invalid range: {0}")]
    InvalidRange(&'static str),
    /// No sample (or no column) produced a finite value.
    #[error("cannot estimate range: {0}")]
    Estimation(&'static str),
}

fn frame_origin_step(
    lo: &BigRational,
    hi: &BigRational,
    n: u32,
) -> Result<(BigFloat, BigFloat), PlotError> {
    if n == 0 {
        return Err(PlotError::InvalidRange("frame needs at least one pixel"));
    }
    if lo >= hi {
        return Err(PlotError::InvalidRange("lower bound must be below upper bound"));
    }
    let origin = BigFloat::from_rational(lo, FRAME_PREC, Round::Down);
    let origin_q = origin.to_rational().expect("origin is finite");
    let step_q = (hi - origin_q) / BigInt::from(n);
    let step = BigFloat::from_rational(&step_q, FRAME_PREC, Round::Up);
    Ok((origin, step))
}

/// Horizontal pixel grid: `w` columns of width `dx` starting at `ox`.
/// Both parameters are exact dyadic rationals, so every column boundary
/// `ox + i dx` is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct XFrame {
    ox: BigFloat,
    dx: BigFloat,
    w: u32,
}

impl XFrame {
    /// Raw constructor; `w = 0` is tolerated for degenerate plots that
    /// exist only as serialization artifacts.
    pub fn new(ox: BigFloat, dx: BigFloat, w: u32) -> Result<XFrame, PlotError> {
        if !ox.is_finite() || !dx.is_finite() || !dx.is_positive() {
            return Err(PlotError::InvalidRange("frame parameters must be finite, dx > 0"));
        }
        Ok(XFrame { ox, dx, w })
    }

    /// Smallest dyadic frame covering `[x1, x2]` with `w` columns.
    pub fn from_range(x1: &BigRational, x2: &BigRational, w: u32) -> Result<XFrame, PlotError> {
        let (ox, dx) = frame_origin_step(x1, x2, w)?;
        XFrame::new(ox, dx, w)
    }

    pub fn ox(&self) -> &BigFloat {
        &self.ox
    }

    pub fn dx(&self) -> &BigFloat {
        &self.dx
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    /// Exact abscissa of column boundary `i` (valid for `i <= w`).
    pub fn boundary(&self, i: u32) -> BigFloat {
        self.ox.add_exact(&self.dx.mul_exact(&BigFloat::from_u64(u64::from(i))))
    }

    pub fn boundary_rational(&self, i: u32) -> BigRational {
        self.boundary(i).to_rational().expect("boundaries are finite")
    }

    /// Exact interval spanned by column `i`.
    pub fn column_interval(&self, i: u32) -> Interval {
        self.span_interval(i, i + 1)
    }

    /// Exact interval spanned by columns `a..b`.
    pub fn span_interval(&self, a: u32, b: u32) -> Interval {
        debug_assert!(a < b && b <= self.w);
        Interval::new(self.boundary(a), self.boundary(b))
    }
}

/// Vertical pixel grid: `h` rows of height `dy` starting at `oy`. Exact
/// dyadic parameters, like [`XFrame`].
#[derive(Debug, Clone, PartialEq)]
pub struct YFrame {
    oy: BigFloat,
    dy: BigFloat,
    h: u32,
}

impl YFrame {
    /// Raw constructor; `h = 0` is tolerated for degenerate plots that
    /// exist only as serialization artifacts.
    pub fn new(oy: BigFloat, dy: BigFloat, h: u32) -> Result<YFrame, PlotError> {
        if !oy.is_finite() || !dy.is_finite() || !dy.is_positive() {
            return Err(PlotError::InvalidRange("frame parameters must be finite, dy > 0"));
        }
        Ok(YFrame { oy, dy, h })
    }

    /// Smallest dyadic frame covering `[y1, y2]` with `h` rows.
    pub fn from_range(y1: &BigRational, y2: &BigRational, h: u32) -> Result<YFrame, PlotError> {
        let (oy, dy) = frame_origin_step(y1, y2, h)?;
        YFrame::new(oy, dy, h)
    }

    pub fn oy(&self) -> &BigFloat {
        &self.oy
    }

    pub fn dy(&self) -> &BigFloat {
        &self.dy
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// Exact ordinate of row boundary `i` (valid for `i <= h`).
    pub fn boundary(&self, i: u32) -> BigFloat {
        self.oy.add_exact(&self.dy.mul_exact(&BigFloat::from_u64(u64::from(i))))
    }

    pub fn boundary_rational(&self, i: u32) -> BigRational {
        self.boundary(i).to_rational().expect("boundaries are finite")
    }
}

/// Per-column range enclosures: `cols[i]` contains `f(x)` for every `x`
/// in column `i` (NAI when the function is undefined somewhere in the
/// column or no finite enclosure was obtained).
#[derive(Debug, Clone, PartialEq)]
pub struct Plot1 {
    frame: XFrame,
    cols: Vec<Interval>,
}

impl Plot1 {
    pub fn new(frame: XFrame, cols: Vec<Interval>) -> Plot1 {
        assert_eq!(cols.len(), frame.w() as usize, "one enclosure per column");
        Plot1 { frame, cols }
    }

    pub fn frame(&self) -> &XFrame {
        &self.frame
    }

    pub fn cols(&self) -> &[Interval] {
        &self.cols
    }

    /// Column enclosure, NAI beyond the stored range.
    pub fn col(&self, i: u32) -> Interval {
        self.cols.get(i as usize).cloned().unwrap_or_else(Interval::nai)
    }
}

/// Quantized plot: per column a run `(z1, z2)` of filled pixel rows, with
/// `0 <= z1 <= z2 <= h`. Row `z` spans ordinates `[oy + z dy, oy + (z+1) dy]`;
/// the run covers every in-frame value the function attains over the
/// column. `(0, h)` is the all-rows default used for unknown columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot2 {
    xframe: XFrame,
    yframe: YFrame,
    cols: Vec<(u32, u32)>,
}

impl Plot2 {
    pub fn new(xframe: XFrame, yframe: YFrame, cols: Vec<(u32, u32)>) -> Plot2 {
        assert_eq!(cols.len(), xframe.w() as usize, "one run per column");
        for &(z1, z2) in &cols {
            assert!(z1 <= z2 && z2 <= yframe.h(), "run must satisfy 0 <= z1 <= z2 <= h");
        }
        Plot2 { xframe, yframe, cols }
    }

    pub fn xframe(&self) -> &XFrame {
        &self.xframe
    }

    pub fn yframe(&self) -> &YFrame {
        &self.yframe
    }

    pub fn runs(&self) -> &[(u32, u32)] {
        &self.cols
    }

    /// Column run, the full-height `(0, h)` beyond the stored range.
    pub fn run(&self, i: u32) -> (u32, u32) {
        self.cols.get(i as usize).copied().unwrap_or((0, self.yframe.h()))
    }
}

/// Tuning knobs for [`plot`].
#[derive(Debug, Clone, PartialEq)]
pub struct PlotConfig {
    /// Working precision of all interval arithmetic.
    pub prec: Precision,
    /// Taylor model degree.
    pub degree: usize,
    /// Completeness slack in pixels (at least 1): a column enclosure is
    /// accepted when each of its bounds is within `slack` pixel heights of
    /// a value attained at a column endpoint.
    pub slack: u32,
    /// Sample count for the y-range estimate.
    pub samples: u32,
    /// Maximum subdivision depth; 0 disables models and refinement
    /// entirely (one plain interval evaluation per column).
    pub max_depth: u32,
    /// Columns.
    pub width: u32,
    /// Rows.
    pub height: u32,
}

impl Default for PlotConfig {
    fn default() -> PlotConfig {
        PlotConfig {
            prec: Precision::new(53),
            degree: 10,
            slack: 2,
            samples: 50,
            max_depth: 48,
            width: 512,
            height: 384,
        }
    }
}

/// Min/max of thin point evaluations at `cfg.samples` uniformly spaced
/// abscissas (both endpoints included). An underestimate of the true
/// range; used only to size pixels before the real enclosures exist.
/// Samples where the function is undefined or overflows are skipped;
/// failing to get any finite sample is an error.
pub fn estimate_yframe(
    e: &Expr,
    xf: &XFrame,
    cfg: &PlotConfig,
) -> Result<(BigFloat, BigFloat), PlotError> {
    let n = cfg.samples.max(2);
    let x1 = xf.boundary_rational(0);
    let span = xf.boundary_rational(xf.w()) - &x1;
    let step = span / BigInt::from(n - 1);
    let mut lo: Option<BigFloat> = None;
    let mut hi: Option<BigFloat> = None;
    for k in 0..n {
        let x = &x1 + &step * BigInt::from(k);
        let v = e.eval_point_rational(&x, cfg.prec);
        let (vlo, vhi) = match v.endpoints() {
            Some(ends) => ends,
            None => continue,
        };
        if !vlo.is_finite() || !vhi.is_finite() {
            continue;
        }
        lo = Some(match lo {
            Some(cur) => cur.min(vlo),
            None => vlo.clone(),
        });
        hi = Some(match hi {
            Some(cur) => cur.max(vhi),
            None => vhi.clone(),
        });
    }
    match (lo, hi) {
        (Some(l), Some(h)) => Ok((l, h)),
        _ => Err(PlotError::Estimation("every sample is undefined")),
    }
}

/// Pixel height hint from an estimated range: the padded range divided by
/// the pixel rows. Degenerate (zero-width) estimates are padded relative
/// to their magnitude so the hint stays positive.
fn hint_from_range(lo: &BigFloat, hi: &BigFloat, h: u32) -> BigFloat {
    let mut range = hi.sub_dir(lo, CHECK_PREC, Round::Up);
    if !range.is_positive() || !range.is_finite() {
        let floor_pad = BigFloat::one().mul_pow2(-20);
        let rel = lo.abs().max(&hi.abs()).mul_pow2(-20);
        let pad = if rel.is_finite() { rel.max(&floor_pad) } else { floor_pad };
        range = pad.mul_pow2(1);
    }
    range.div_dir(&BigFloat::from_u64(u64::from(h.max(1))), CHECK_PREC, Round::Up)
}

/// The endpoint acceptance test shared by the piece loop and the
/// refinement: each bound of `y` must be within `t` pixel heights of one
/// of the endpoint enclosures `z`, `zp` (values the function provably
/// attains, up to their own width). Thresholds are rounded against
/// acceptance, so rounding can only cause extra subdivision.
fn endpoints_accept(y: &Interval, z: &Interval, zp: &Interval, dy: &BigFloat, t: u32) -> bool {
    if y.is_nai() || z.is_nai() || zp.is_nai() {
        return false;
    }
    let slack = BigFloat::from_u64(u64::from(t)).mul_dir(dy, CHECK_PREC, Round::Down);
    let lo_gate = y.lo().add_dir(&slack, CHECK_PREC, Round::Down);
    let lo_ok = z.hi().cmp_total(&lo_gate) != Ordering::Greater
        || zp.hi().cmp_total(&lo_gate) != Ordering::Greater;
    if !lo_ok {
        return false;
    }
    let hi_gate = y.hi().sub_dir(&slack, CHECK_PREC, Round::Up);
    z.lo().cmp_total(&hi_gate) != Ordering::Less
        || zp.lo().cmp_total(&hi_gate) != Ordering::Less
}

/// True when the enclosure `y` of the model's range over column `col` is
/// tight enough to accept: both of its bounds are within `t` pixel
/// heights of the model's value at one of the column endpoints.
pub fn completeness_check(
    m: &TaylorModel,
    col: &Interval,
    y: &Interval,
    dy: &BigFloat,
    t: u32,
    prec: Precision,
) -> bool {
    let (lo, hi) = match col.endpoints() {
        Some(ends) => ends,
        None => return false,
    };
    let z = m.eval(&Interval::point(lo.clone()), prec);
    let zp = m.eval(&Interval::point(hi.clone()), prec);
    endpoints_accept(y, &z, &zp, dy, t)
}

/// Sub-column bisection for a single pixel column whose piece-level
/// enclosure failed the acceptance test. Evaluates through the inherited
/// model when its remainder is already below the acceptance scale
/// (models win when the expression cancels against itself), through plain
/// interval evaluation otherwise (tighter for everything else). Endpoint
/// enclosures are shared between siblings, so each node costs one range
/// and at most one new point evaluation.
struct Refiner<'a> {
    e: &'a Expr,
    model: Option<&'a TaylorModel>,
    dy: &'a BigFloat,
    t: u32,
    prec: Precision,
    budget: u32,
}

impl Refiner<'_> {
    fn range(&self, x: &Interval) -> Interval {
        match self.model {
            Some(m) => m.eval(x, self.prec),
            None => self.e.eval_interval(x, self.prec),
        }
    }

    fn thin(&self, x: &BigFloat) -> Interval {
        self.range(&Interval::point(x.clone()))
    }

    fn enclose(
        &mut self,
        lo: &BigFloat,
        hi: &BigFloat,
        zlo: &Interval,
        zhi: &Interval,
        depth: u32,
    ) -> Interval {
        let x = Interval::new(lo.clone(), hi.clone());
        let y = self.range(&x);
        if y.is_nai() {
            // undefined somewhere in this slice: the column can only be NAI
            return y;
        }
        if endpoints_accept(&y, zlo, zhi, self.dy, self.t) || depth == 0 || self.budget == 0 {
            return y;
        }
        self.budget -= 1;
        let mid = x.midpoint(self.prec);
        if mid.cmp_total(lo) != Ordering::Greater || mid.cmp_total(hi) != Ordering::Less {
            return y;
        }
        let zm = self.thin(&mid);
        let left = self.enclose(lo, &mid, zlo, &zm, depth - 1);
        if left.is_nai() {
            return left;
        }
        let right = self.enclose(&mid, hi, &zm, zhi, depth - 1);
        left.join(&right)
    }
}

fn refine_column(
    e: &Expr,
    xf: &XFrame,
    i: u32,
    piece_model: Option<&TaylorModel>,
    dy: &BigFloat,
    t: u32,
    prec: Precision,
    depth_left: u32,
) -> Interval {
    // inherit the piece's model only when its remainder cannot mask the
    // acceptance gate; otherwise plain evaluation is the tighter tool
    let model = piece_model.filter(|m| {
        let width = m.remainder().width(Precision::new(CHECK_PREC));
        let gate = BigFloat::from_u64(u64::from(t))
            .mul_dir(dy, CHECK_PREC, Round::Down)
            .mul_pow2(-1);
        width.is_finite() && width.cmp_total(&gate) != Ordering::Greater
    });
    let mut refiner = Refiner { e, model, dy, t, prec, budget: COLUMN_BUDGET };
    let lo = xf.boundary(i);
    let hi = xf.boundary(i + 1);
    let zlo = refiner.thin(&lo);
    let zhi = refiner.thin(&hi);
    refiner.enclose(&lo, &hi, &zlo, &zhi, depth_left)
}

/// Enclose every pixel column of `xf`. Never fails: columns that resist
/// every strategy degrade to plain interval evaluation results or NAI,
/// both of which keep the enclosure property.
pub fn enclose_columns(e: &Expr, xf: &XFrame, dy_hint: &BigFloat, cfg: &PlotConfig) -> Plot1 {
    debug_assert!(dy_hint.is_positive(), "pixel height hint must be positive");
    let prec = cfg.prec;
    let t = cfg.slack.max(1);
    let w = xf.w();
    let mut cols = vec![Interval::nai(); w as usize];
    let mut work: Vec<(u32, u32, u32)> = if w > 0 { vec![(0, w, 0)] } else { Vec::new() };
    while let Some((a, b, depth)) = work.pop() {
        if depth >= cfg.max_depth {
            for i in a..b {
                cols[i as usize] = e.eval_interval(&xf.column_interval(i), prec);
            }
            continue;
        }
        let bisect = |work: &mut Vec<(u32, u32, u32)>| {
            let mid = a + (b - a) / 2;
            work.push((mid, b, depth + 1));
            work.push((a, mid, depth + 1));
        };
        match TaylorModel::build(e, &xf.span_interval(a, b), cfg.degree, prec) {
            Ok(m) => {
                let mut vals = Vec::with_capacity((b - a) as usize);
                let mut accepted = true;
                for i in a..b {
                    let ci = xf.column_interval(i);
                    let yi = m.eval(&ci, prec);
                    if !completeness_check(&m, &ci, &yi, dy_hint, t, prec) {
                        accepted = false;
                        break;
                    }
                    vals.push(yi);
                }
                if accepted {
                    for (off, v) in vals.into_iter().enumerate() {
                        cols[a as usize + off] = v;
                    }
                } else if b - a > 1 {
                    bisect(&mut work);
                } else {
                    cols[a as usize] =
                        refine_column(e, xf, a, Some(&m), dy_hint, t, prec, cfg.max_depth - depth);
                }
            }
            Err(_) if b - a > 1 => bisect(&mut work),
            Err(_) => {
                cols[a as usize] =
                    refine_column(e, xf, a, None, dy_hint, t, prec, cfg.max_depth - depth);
            }
        }
    }
    Plot1::new(xf.clone(), cols)
}

fn clamp_pixel(z: BigInt, h: u32) -> u32 {
    if z.is_negative() {
        0
    } else {
        z.to_u32().map_or(h, |v| v.min(h))
    }
}

fn pixel_of(v: &BigFloat, yf: &YFrame, top: &BigFloat, oy_q: &BigRational, dy_q: &BigRational, up: bool) -> u32 {
    // compare against the frame bounds first: values far outside clamp
    // without materializing huge exact quotients
    if v.cmp_total(yf.oy()) != Ordering::Greater {
        return 0;
    }
    if v.cmp_total(top) != Ordering::Less {
        return yf.h();
    }
    let q = (v.to_rational().expect("finite between frame bounds") - oy_q) / dy_q;
    let z = if up { q.ceil() } else { q.floor() };
    clamp_pixel(z.to_integer(), yf.h())
}

/// Quantize column enclosures to pixel runs: `z1 = floor((lo - oy)/dy)`
/// and `z2 = ceil((hi - oy)/dy)`, both clamped to `[0, h]`, computed in
/// exact rational arithmetic. NAI columns map to the full-height run.
pub fn quantize(p1: &Plot1, yf: &YFrame) -> Plot2 {
    let top = yf.boundary(yf.h());
    let oy_q = yf.boundary_rational(0);
    let dy_q = yf.dy().to_rational().expect("frame step is finite");
    let runs = p1
        .cols()
        .iter()
        .map(|c| match c.endpoints() {
            None => (0, yf.h()),
            Some((lo, hi)) => (
                pixel_of(lo, yf, &top, &oy_q, &dy_q, false),
                pixel_of(hi, yf, &top, &oy_q, &dy_q, true),
            ),
        })
        .collect();
    Plot2::new(p1.frame().clone(), yf.clone(), runs)
}

/// Vertical frame that covers the join of all finite columns with a small
/// margin: 1/256 of the joined range on each side, or a magnitude-relative
/// pad when the range is a single point.
pub fn auto_yframe(p1: &Plot1, h: u32) -> Result<YFrame, PlotError> {
    if h == 0 {
        return Err(PlotError::InvalidRange("height must be positive"));
    }
    let mut min: Option<BigFloat> = None;
    let mut max: Option<BigFloat> = None;
    for c in p1.cols() {
        let (lo, hi) = match c.endpoints() {
            Some(ends) => ends,
            None => continue,
        };
        if !lo.is_finite() || !hi.is_finite() {
            continue;
        }
        min = Some(match min {
            Some(cur) => cur.min(lo),
            None => lo.clone(),
        });
        max = Some(match max {
            Some(cur) => cur.max(hi),
            None => hi.clone(),
        });
    }
    let (min, max) = match (min, max) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(PlotError::Estimation("no finite range")),
    };
    let pad = if min == max {
        let floor_pad = BigFloat::one().mul_pow2(-20);
        min.abs().mul_pow2(-20).max(&floor_pad)
    } else {
        max.sub_exact(&min).mul_pow2(-8)
    };
    let oy = min.sub_exact(&pad).round_to(FRAME_PREC, Round::Down);
    let target_top = max.add_exact(&pad).round_to(FRAME_PREC, Round::Up);
    // dy rounds up, so oy + dy * h still reaches the padded maximum
    let dy = target_top
        .sub_exact(&oy)
        .div_dir(&BigFloat::from_u64(u64::from(h)), FRAME_PREC, Round::Up);
    YFrame::new(oy, dy, h)
}

/// Plot `e` over `[x1, x2]`. With an explicit y-range the frame is fixed
/// up front and its pixel height drives the completeness check; without
/// one, a sampled estimate drives the check and the final frame is fitted
/// to the computed enclosures.
pub fn plot(
    e: &Expr,
    x1: &BigRational,
    x2: &BigRational,
    yrange: Option<(&BigRational, &BigRational)>,
    cfg: &PlotConfig,
) -> Result<Plot2, PlotError> {
    let xf = XFrame::from_range(x1, x2, cfg.width)?;
    let (known, dy_hint) = match yrange {
        Some((y1, y2)) => {
            let yf = YFrame::from_range(y1, y2, cfg.height)?;
            let hint = yf.dy().clone();
            (Some(yf), hint)
        }
        None => {
            let (lo, hi) = estimate_yframe(e, &xf, cfg)?;
            (None, hint_from_range(&lo, &hi, cfg.height))
        }
    };
    let p1 = enclose_columns(e, &xf, &dy_hint, cfg);
    let yf = match known {
        Some(f) => f,
        None => auto_yframe(&p1, cfg.height)?,
    };
    Ok(quantize(&p1, &yf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn small_cfg(w: u32, h: u32) -> PlotConfig {
        PlotConfig { width: w, height: h, ..PlotConfig::default() }
    }

    /// The frame from the x^2 reference instance, exactly.
    fn square_frames() -> (XFrame, YFrame) {
        let xf = XFrame::from_range(&rat(0, 1), &rat(1025, 1024), 10).unwrap();
        let yf = YFrame::from_range(&rat(-5, 16384), &rat(4155, 4096), 100).unwrap();
        (xf, yf)
    }

    #[test]
    fn dyadic_ranges_quantize_exactly() {
        let (xf, yf) = square_frames();
        assert_eq!(xf.boundary_rational(0), rat(0, 1));
        assert_eq!(xf.dx().to_rational().unwrap(), rat(820, 8192));
        assert_eq!(xf.boundary_rational(10), rat(1025, 1024));
        assert_eq!(yf.boundary_rational(0), rat(-5, 16384));
        assert_eq!(yf.dy().to_rational().unwrap(), rat(665, 65536));
        assert_eq!(yf.boundary_rational(100), rat(4155, 4096));
    }

    #[test]
    fn non_dyadic_ranges_are_covered_with_tiny_overshoot() {
        let lo = rat(1, 3);
        let hi = rat(2, 3);
        let xf = XFrame::from_range(&lo, &hi, 7).unwrap();
        let ox = xf.boundary_rational(0);
        let end = xf.boundary_rational(7);
        assert!(ox <= lo && end >= hi, "requested range must be covered");
        let eps = BigRational::new(BigInt::one(), BigInt::one() << 185);
        assert!(&lo - &ox < eps);
        assert!(&end - &hi < eps);
    }

    #[test]
    fn bad_frame_arguments_are_rejected() {
        assert!(matches!(
            XFrame::from_range(&rat(1, 1), &rat(1, 1), 4),
            Err(PlotError::InvalidRange(_))
        ));
        assert!(matches!(
            XFrame::from_range(&rat(2, 1), &rat(1, 1), 4),
            Err(PlotError::InvalidRange(_))
        ));
        assert!(matches!(
            XFrame::from_range(&rat(0, 1), &rat(1, 1), 0),
            Err(PlotError::InvalidRange(_))
        ));
        assert!(matches!(
            YFrame::from_range(&rat(0, 1), &rat(1, 1), 0),
            Err(PlotError::InvalidRange(_))
        ));
    }

    #[test]
    fn estimate_square_tracks_grid_extremes() {
        let e = Expr::parse("x^2").unwrap();
        let xf = XFrame::from_range(&rat(0, 1), &rat(1, 1), 16).unwrap();
        let cfg = small_cfg(16, 64);
        let (lo, hi) = estimate_yframe(&e, &xf, &cfg).unwrap();
        let lo = lo.to_rational().unwrap();
        let hi = hi.to_rational().unwrap();
        assert!(lo >= rat(-1, 1000) && lo <= rat(1, 1000));
        // the grid includes both endpoints, so the maximum is hit exactly
        assert!(hi >= rat(999, 1000) && hi <= rat(1001, 1000));
    }

    #[test]
    fn estimate_constant_is_thin() {
        let e = Expr::parse("3").unwrap();
        let xf = XFrame::from_range(&rat(-1, 1), &rat(1, 1), 8).unwrap();
        let (lo, hi) = estimate_yframe(&e, &xf, &small_cfg(8, 8)).unwrap();
        assert_eq!(lo.to_rational().unwrap(), rat(3, 1));
        assert_eq!(hi.to_rational().unwrap(), rat(3, 1));
    }

    #[test]
    fn estimate_fails_when_nothing_is_defined() {
        let e = Expr::parse("sqrt(x)").unwrap();
        let xf = XFrame::from_range(&rat(-2, 1), &rat(-1, 1), 8).unwrap();
        assert_eq!(
            estimate_yframe(&e, &xf, &small_cfg(8, 8)).unwrap_err(),
            PlotError::Estimation("every sample is undefined")
        );
    }

    #[test]
    fn estimate_oscillation_reaches_near_unit() {
        let e = Expr::parse("sin(x + exp(x))").unwrap();
        let xf = XFrame::from_range(&rat(0, 1), &rat(6, 1), 64).unwrap();
        let (lo, hi) = estimate_yframe(&e, &xf, &small_cfg(64, 64)).unwrap();
        assert!(lo.to_rational().unwrap() <= rat(-9, 10));
        assert!(hi.to_rational().unwrap() >= rat(9, 10));
    }

    #[test]
    fn enclose_constant_in_one_piece() {
        let e = Expr::parse("3").unwrap();
        let xf = XFrame::from_range(&rat(-1, 1), &rat(1, 1), 16).unwrap();
        let hint = BigFloat::from_rational(&rat(1, 100), CHECK_PREC, Round::Up);
        let p1 = enclose_columns(&e, &xf, &hint, &small_cfg(16, 16));
        for c in p1.cols() {
            assert!(c.contains(&BigFloat::from_i64(3)));
            assert!(c.width(Precision::new(CHECK_PREC)).to_rational().unwrap() < rat(1, 1 << 30));
        }
    }

    #[test]
    fn enclose_monotone_square_is_tight_per_column() {
        let e = Expr::parse("x^2").unwrap();
        let xf = XFrame::from_range(&rat(0, 1), &rat(1, 1), 10).unwrap();
        let hint = BigFloat::from_rational(&rat(1, 100), CHECK_PREC, Round::Up);
        let p1 = enclose_columns(&e, &xf, &hint, &small_cfg(10, 100));
        for i in 0..10u32 {
            let c = p1.col(i);
            let lo = c.lo().to_rational().unwrap();
            let hi = c.hi().to_rational().unwrap();
            let true_lo = rat(i64::from(i), 10) * rat(i64::from(i), 10);
            let true_hi = rat(i64::from(i) + 1, 10) * rat(i64::from(i) + 1, 10);
            assert!(lo <= true_lo && hi >= true_hi, "column {i} must cover the true range");
            // accepted columns sit within the slack of attained values
            assert!(&true_lo - &lo <= rat(4, 100), "column {i} lower bound too loose");
            assert!(&hi - &true_hi <= rat(4, 100), "column {i} upper bound too loose");
        }
    }

    #[test]
    fn enclose_marks_undefined_columns_nai() {
        let e = Expr::parse("ln(x)").unwrap();
        let xf = XFrame::from_range(&rat(-1, 1), &rat(1, 1), 8).unwrap();
        let hint = BigFloat::from_rational(&rat(1, 10), CHECK_PREC, Round::Up);
        let p1 = enclose_columns(&e, &xf, &hint, &small_cfg(8, 8));
        // columns [-1, 0] and the one with left boundary 0 stay undefined
        for i in 0..5u32 {
            assert!(p1.col(i).is_nai(), "column {i} touches ln's undefined region");
        }
        for i in 5..8u32 {
            assert!(!p1.col(i).is_nai(), "column {i} is safely inside the domain");
        }
    }

    #[test]
    fn out_of_range_queries_use_defaults() {
        let e = Expr::parse("x").unwrap();
        let xf = XFrame::from_range(&rat(0, 1), &rat(1, 1), 4).unwrap();
        let hint = BigFloat::from_rational(&rat(1, 4), CHECK_PREC, Round::Up);
        let p1 = enclose_columns(&e, &xf, &hint, &small_cfg(4, 4));
        assert!(p1.col(4).is_nai());
        let yf = YFrame::from_range(&rat(0, 1), &rat(1, 1), 4).unwrap();
        let p2 = quantize(&p1, &yf);
        assert_eq!(p2.run(4), (0, 4));
    }

    #[test]
    fn check_accepts_linear_and_rejects_degree_zero() {
        let dom = Interval::new(BigFloat::zero(), BigFloat::one());
        let prec = Precision::new(53);
        let e = Expr::parse("x").unwrap();
        let linear = TaylorModel::build(&e, &dom, 1, prec).unwrap();
        let col = Interval::new(BigFloat::zero(), BigFloat::from_rational(&rat(1, 10), 64, Round::Up));
        let y = linear.eval(&col, prec);
        let dy = BigFloat::from_rational(&rat(1, 100), CHECK_PREC, Round::Up);
        assert!(completeness_check(&linear, &col, &y, &dy, 2, prec));

        // a degree-0 model of x over a column 10 dy tall cannot pass with t = 2
        let flat = TaylorModel::build(&e, &dom, 0, prec).unwrap();
        let y = flat.eval(&dom, prec);
        let dy = BigFloat::from_rational(&rat(1, 10), CHECK_PREC, Round::Up);
        assert!(!completeness_check(&flat, &dom, &y, &dy, 2, prec));
    }

    #[test]
    fn quantize_matches_reference_square_runs() {
        let e = Expr::parse("x^2").unwrap();
        let (xf, yf) = square_frames();
        let p1 = enclose_columns(&e, &xf, yf.dy(), &small_cfg(10, 100));
        let p2 = quantize(&p1, &yf);
        // exact quantization of the true ranges for this frame
        let expected = [
            (0, 2),
            (1, 4),
            (3, 9),
            (8, 16),
            (15, 25),
            (24, 36),
            (35, 49),
            (48, 64),
            (63, 81),
            (80, 99),
        ];
        assert_eq!(p2.runs(), &expected);
    }

    #[test]
    fn quantize_clamps_out_of_frame_columns() {
        let xf = XFrame::from_range(&rat(0, 1), &rat(4, 1), 4).unwrap();
        let yf = YFrame::from_range(&rat(0, 1), &rat(1, 1), 10).unwrap();
        let cols = vec![
            // entirely below the frame: empty run at the bottom
            Interval::new(BigFloat::from_i64(-2), BigFloat::from_i64(-1)),
            // entirely above: empty run at the top
            Interval::new(BigFloat::from_i64(2), BigFloat::from_i64(3)),
            // straddling: clamped to the frame
            Interval::new(BigFloat::from_i64(-1), BigFloat::from_i64(2)),
            Interval::nai(),
        ];
        let p2 = quantize(&Plot1::new(xf, cols), &yf);
        assert_eq!(p2.runs(), &[(0, 0), (10, 10), (0, 10), (0, 10)]);
    }

    #[test]
    fn quantize_handles_infinite_endpoints() {
        let xf = XFrame::from_range(&rat(0, 1), &rat(1, 1), 1).unwrap();
        let yf = YFrame::from_range(&rat(0, 1), &rat(1, 1), 10).unwrap();
        let cols = vec![Interval::new(BigFloat::infinity(true), BigFloat::infinity(false))];
        let p2 = quantize(&Plot1::new(xf, cols), &yf);
        assert_eq!(p2.runs(), &[(0, 10)]);
    }

    #[test]
    fn auto_frame_covers_join_with_margin() {
        let xf = XFrame::from_range(&rat(0, 1), &rat(2, 1), 2).unwrap();
        let cols = vec![
            Interval::new(BigFloat::zero(), BigFloat::one()),
            Interval::new(BigFloat::from_i64(2), BigFloat::from_i64(5)),
        ];
        let yf = auto_yframe(&Plot1::new(xf, cols), 10).unwrap();
        let oy = yf.boundary_rational(0);
        let top = yf.boundary_rational(10);
        assert!(oy < rat(0, 1) && top > rat(5, 1), "padded frame strictly covers the join");
        assert!(oy >= rat(-1, 10) && top <= rat(51, 10), "padding stays proportionate");
    }

    #[test]
    fn auto_frame_pads_degenerate_range() {
        let xf = XFrame::from_range(&rat(0, 1), &rat(1, 1), 2).unwrap();
        let three = Interval::new(BigFloat::from_i64(3), BigFloat::from_i64(3));
        let yf = auto_yframe(&Plot1::new(xf, vec![three.clone(), three]), 4).unwrap();
        assert!(yf.dy().is_positive());
        assert!(yf.boundary_rational(0) < rat(3, 1));
        assert!(yf.boundary_rational(4) > rat(3, 1));
    }

    #[test]
    fn auto_frame_needs_one_finite_column() {
        let xf = XFrame::from_range(&rat(0, 1), &rat(1, 1), 2).unwrap();
        let p1 = Plot1::new(xf, vec![Interval::nai(), Interval::nai()]);
        assert_eq!(auto_yframe(&p1, 4).unwrap_err(), PlotError::Estimation("no finite range"));
    }

    #[test]
    fn plot_square_reproduces_reference_instance() {
        let e = Expr::parse("x^2").unwrap();
        let cfg = small_cfg(10, 100);
        let y1 = rat(-5, 16384);
        let y2 = rat(4155, 4096);
        let p2 = plot(&e, &rat(0, 1), &rat(1025, 1024), Some((&y1, &y2)), &cfg).unwrap();
        assert_eq!(p2.run(0), (0, 2));
        assert_eq!(p2.run(3), (8, 16));
        assert_eq!(p2.run(9), (80, 99));
    }

    #[test]
    fn plot_constant_zero_stays_within_slack() {
        let e = Expr::parse("0").unwrap();
        let cfg = small_cfg(16, 64);
        let p2 = plot(&e, &rat(-1, 1), &rat(1, 1), None, &cfg).unwrap();
        let oy = p2.yframe().boundary_rational(0);
        let dy = p2.yframe().dy().to_rational().unwrap();
        for (i, &(z1, z2)) in p2.runs().iter().enumerate() {
            assert!(z2 - z1 <= 2, "column {i} run too tall: ({z1}, {z2})");
            let run_lo = &oy + &dy * BigInt::from(z1);
            let run_hi = &oy + &dy * BigInt::from(z2);
            assert!(run_lo <= rat(0, 1) && run_hi >= rat(0, 1), "run must cover y = 0");
        }
    }

    #[test]
    fn plot_rejects_reversed_ranges() {
        let e = Expr::parse("x").unwrap();
        let cfg = small_cfg(4, 4);
        assert!(matches!(
            plot(&e, &rat(1, 1), &rat(0, 1), None, &cfg),
            Err(PlotError::InvalidRange(_))
        ));
        let y1 = rat(1, 1);
        let y2 = rat(0, 1);
        assert!(matches!(
            plot(&e, &rat(0, 1), &rat(1, 1), Some((&y1, &y2)), &cfg),
            Err(PlotError::InvalidRange(_))
        ));
    }

    #[test]
    fn plot_with_partial_domain_keeps_full_height_defaults() {
        let e = Expr::parse("ln(x)").unwrap();
        let cfg = small_cfg(8, 32);
        let y1 = rat(-3, 1);
        let y2 = rat(1, 1);
        let p2 = plot(&e, &rat(-1, 1), &rat(1, 1), Some((&y1, &y2)), &cfg).unwrap();
        assert_eq!(p2.run(0), (0, 32), "undefined column renders full height");
        let (z1, z2) = p2.run(7);
        assert!(z2 > z1 && z2 - z1 < 32, "defined column has a proper run");
    }

    #[test]
    fn plot_is_deterministic() {
        let e = Expr::parse("sin(x + exp(x))").unwrap();
        let cfg = small_cfg(32, 32);
        let a = plot(&e, &rat(0, 1), &rat(3, 1), None, &cfg).unwrap();
        let b = plot(&e, &rat(0, 1), &rat(3, 1), None, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn oscillation_columns_stay_near_true_ranges() {
        let e = Expr::parse("sin(x + exp(x))").unwrap();
        let xf = XFrame::from_range(&rat(0, 1), &rat(3, 1), 48).unwrap();
        let cfg = small_cfg(48, 64);
        let (lo, hi) = estimate_yframe(&e, &xf, &cfg).unwrap();
        let hint = hint_from_range(&lo, &hi, cfg.height);
        let p1 = enclose_columns(&e, &xf, &hint, &cfg);
        let hint_q = hint.to_rational().unwrap();
        let prec = Precision::new(96);
        for i in 0..48u32 {
            let c = p1.col(i);
            assert!(!c.is_nai(), "column {i} must be finite");
            // dense point sampling under-approximates the true column range
            let a = xf.boundary_rational(i);
            let step = (xf.boundary_rational(i + 1) - &a) / BigInt::from(32);
            let mut smin: Option<BigRational> = None;
            let mut smax: Option<BigRational> = None;
            for k in 0..=32 {
                let x = &a + &step * BigInt::from(k);
                let v = e.eval_point_rational(&x, prec);
                let m = v.midpoint(prec).to_rational().unwrap();
                smin = Some(smin.map_or(m.clone(), |cur| cur.min(m.clone())));
                smax = Some(smax.map_or(m.clone(), |cur| cur.max(m)));
            }
            let smin = smin.unwrap();
            let smax = smax.unwrap();
            let lo = c.lo().to_rational().unwrap();
            let hi = c.hi().to_rational().unwrap();
            assert!(lo <= smin && hi >= smax, "column {i} misses sampled values");
            let slack = &hint_q * BigInt::from(4);
            assert!(&smin - &lo <= slack, "column {i} lower bound too loose");
            assert!(&hi - &smax <= slack, "column {i} upper bound too loose");
        }
    }
}
