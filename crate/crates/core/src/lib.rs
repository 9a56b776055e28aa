//! cartan-lab: a numerical laboratory for logarithmic potential theory on
//! Ahlfors-regular sets.
//!
//! The crate builds exceptional-ball covers for logarithmic potentials
//! (greedy majorant covers and the Cartan-type lower bound that follows from
//! them) and runs trace-inequality experiments for subharmonic and
//! plurisubharmonic functions restricted to fractal sets: Remez-type gaps,
//! BMO norms, reverse Hölder ratios, distribution-function decay, and
//! Bernstein-Walsh growth checks.
//!
//! Modules:
//!
//! * [`geometry`] — self-similar set generation, natural measures, and
//!   regularity certification.
//! * [`functions`] — evaluable function families (potentials, log-moduli of
//!   polynomials, log-norms of holomorphic maps) and suprema over disks and
//!   balls.
//! * [`cartan`] — majorants, the greedy exceptional cover, and post-hoc
//!   verification of the potential lower bound.
//! * [`trace`] — trace-inequality experiments on sampled regular sets.
//! * [`multidim`] — the plurisubharmonic analogues for `log|F|` with
//!   analytically known zero sets.
//! * [`runner`] — config-driven experiment execution behind the CLI.

// Validation guards use `!(x > 0.0)` deliberately: the negation also
// rejects NaN, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cartan;
pub mod functions;
pub mod geometry;
pub mod grid;
pub mod multidim;
pub mod poly;
pub mod rng;
pub mod runner;
pub mod trace;

pub use cartan::{cartan_cover, gorin_cover, tau, Ball, BallCover, CartanReport, Majorant};
pub use functions::{DiscreteMeasure, EvaluableFunction, SupEstimate};
pub use geometry::{DSet, Point, RegularityReport, Similarity};
pub use grid::GridSpec;
