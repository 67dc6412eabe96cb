//! Rigorous function-graph plotting.
//!
//! Given an expression in one variable and a window, the plotter computes,
//! for every pixel column, a vertical run of pixels that is mathematically
//! guaranteed to contain the graph of the function over that column. The
//! guarantee holds for every real point of the function, not just sampled
//! ones: interval arithmetic with directed rounding accounts for all
//! rounding error, and polynomial models with rigorous remainder bounds
//! keep the enclosures tight enough to look like an ordinary plot.

mod mant;

pub mod bigfloat;
pub mod checker;
pub mod cli;
mod elem;
pub mod expr;
pub mod interval;
pub mod plotter;
pub mod render;
pub mod rpa;

pub use bigfloat::{BigFloat, Round};
pub use checker::{check_plot2, measure_completeness, CheckReport, Witness};
pub use expr::Expr;
pub use interval::{Interval, Precision};
pub use plotter::{plot, Plot1, Plot2, PlotConfig, PlotError, XFrame, YFrame};
pub use rpa::TaylorModel;
