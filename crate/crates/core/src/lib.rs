//! Dyadic models and sharp weighted estimates for the Bergman projection on the
//! upper half-plane.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: intervals, the shifted grids `D^0` and `D^{1/3}`, Carleson boxes.
//! * [`measure`], [`weight`], [`bekolle`]: `dA_α`, the weight catalog and Békollé constants.
//! * [`tiles`], [`function`], [`kernel`], [`operators`]: tile functions, kernels,
//!   `P_α`, `P_α^+`, the dyadic model and maximal functions.
//! * [`extrapolation`]: the iteration behind extrapolation from `p = 2`.
//! * [`sharp`], [`domination`], [`fit`]: the experiments.

pub mod bekolle;
pub mod domination;
pub mod error;
pub mod extrapolation;
pub mod fit;
pub mod function;
pub mod geometry;
pub mod kernel;
pub mod measure;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod sharp;
pub mod tiles;
pub mod weight;

pub use bekolle::{bekolle_constant, bekolle_ratio, joint_b2_constant, BoxFamily, FamilyMax};
pub use error::{Error, Result};
pub use function::{lp_norm, TestFunction};
pub use geometry::{
    common_box_interval, covering_interval, locate_tile, scale_index, BoxKind, CarlesonBox,
    DyadicInterval, GridWindow, Interval, Point, Rect, Shift,
};
pub use measure::{alpha_area, AlphaMeasure, Exponents};
pub use quadrature::{Estimate, QuadratureSpec};
pub use tiles::{TileFunction, TileGrid};
pub use weight::{dual_weight, weighted_box_integral, Weight};
