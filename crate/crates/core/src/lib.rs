//! Static-stability analysis and design-space search for small
//! differential-drive mobile manipulators with a single telescoping arm.
//!
//! The crate answers three families of questions about a robot described
//! by a handful of base and arm dimensions:
//!
//! * **Analysis** — how much payload can it hold at reach, and how hard
//!   can it pull, push, or brace backwards at a given height before a
//!   wheel lifts ([`statics`])?
//! * **Design** — given target capabilities, what is the lightest or
//!   narrowest base that achieves them ([`design`])?
//! * **Feasibility** — does a concrete robot cover a manifest of task
//!   requirements, and with what margin ([`feasibility`])?
//!
//! Alongside these sit a small Cartesian kinematics layer
//! ([`kinematics`]) and loaders for the JSON document formats the tools
//! exchange ([`io`]).
//!
//! All numerics are generic over the scalar type through [`Real`], so
//! every routine works in both `f32` and `f64`. The common case is
//! `f64`; [`RobotSpec`] and [`Configuration`] default their type
//! parameter accordingly, and the [`RobotSpec32`]/[`RobotSpec64`]
//! aliases name both widths explicitly.

pub mod design;
pub mod error;
pub mod feasibility;
pub mod format;
pub mod geom;
pub mod io;
pub mod kinematics;
pub mod robot;
pub mod statics;

mod real;

pub use error::{Error, Result};
pub use format::fmt_sig6;
pub use real::Real;
pub use robot::{Configuration, Mode, RobotSpec};
pub use statics::{Capability, LoadKind, LoadLocation};

/// Single-precision robot description.
pub type RobotSpec32 = robot::RobotSpec<f32>;
/// Double-precision robot description (the default).
pub type RobotSpec64 = robot::RobotSpec<f64>;
/// Single-precision joint configuration.
pub type Configuration32 = robot::Configuration<f32>;
/// Double-precision joint configuration (the default).
pub type Configuration64 = robot::Configuration<f64>;
