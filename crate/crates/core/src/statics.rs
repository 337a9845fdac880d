//! Static tipping analysis.
//!
//! Two layers answer the same question — how much load tips the robot:
//!
//! * Closed forms on the wheel triangle with the lumped centreline centre
//!   of mass ([`tri_max_payload`], [`tri_max_pull_push`], [`tri_backpush`])
//!   and their one-dimensional planar reductions ([`PlanarCase`]).
//! * A generalized engine ([`tip_margin`]) that sums moments about every
//!   edge of an arbitrary convex support polygon for an arbitrary centre of
//!   mass and applied load.
//!
//! The engine reproduces each closed form exactly at its tipping limit,
//! which the tests exploit as a cross-check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt_scalar;
use crate::geom::Vec3;
use crate::real::{scalar, to_f64, Real};
use crate::robot::{ComEstimate, RobotSpec, SupportPolygon};

/// A load capability that may diverge: at zero force height or zero payload
/// arm the tipping formulas have no finite limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Capability<R: Real> {
    Finite(R),
    Unbounded,
}

impl<R: Real> Capability<R> {
    pub fn is_unbounded(&self) -> bool {
        matches!(self, Capability::Unbounded)
    }

    pub fn finite(&self) -> Option<R> {
        match self {
            Capability::Finite(x) => Some(*x),
            Capability::Unbounded => None,
        }
    }

    /// The capability as a number, with unbounded mapped to +infinity.
    pub fn or_infinity(&self) -> R {
        match self {
            Capability::Finite(x) => *x,
            Capability::Unbounded => R::infinity(),
        }
    }
}

impl<R: Real> fmt::Display for Capability<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capability::Finite(x) => write!(f, "{x}"),
            Capability::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// The four load directions the tipping models cover. Pull and push act
/// sideways across the arm-side edge; backpush is the reaction to pushing
/// while driving backwards; payload is a carried mass at the tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoadKind {
    Pull,
    Push,
    Backpush,
    Payload,
}

impl LoadKind {
    pub const ALL: [LoadKind; 4] = [
        LoadKind::Pull,
        LoadKind::Push,
        LoadKind::Backpush,
        LoadKind::Payload,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            LoadKind::Pull => "pull",
            LoadKind::Push => "push",
            LoadKind::Backpush => "backpush",
            LoadKind::Payload => "payload",
        }
    }

    /// Unit of the capability value for this kind.
    pub fn unit(&self) -> &'static str {
        match self {
            LoadKind::Payload => "kg",
            _ => "N",
        }
    }

    pub fn is_force(&self) -> bool {
        !matches!(self, LoadKind::Payload)
    }
}

impl fmt::Display for LoadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LoadKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pull" => Ok(LoadKind::Pull),
            "push" => Ok(LoadKind::Push),
            "backpush" => Ok(LoadKind::Backpush),
            "payload" => Ok(LoadKind::Payload),
            other => Err(Error::InvalidArgument {
                what: "load kind",
                detail: format!("{other:?} is not one of pull, push, backpush, payload"),
            }),
        }
    }
}

/// Where a load acts: a force at a height above the floor, or a payload at
/// a reach beyond the right wheel (defaulting to the spec's full reach).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoadLocation<R: Real> {
    FullReach,
    Reach(R),
    Height(R),
}

impl<R: Real> fmt::Display for LoadLocation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadLocation::FullReach => f.write_str("full reach"),
            LoadLocation::Reach(r) => write!(f, "reach {} m", fmt_scalar(*r)),
            LoadLocation::Height(h) => write!(f, "h = {} m", fmt_scalar(*h)),
        }
    }
}

/// One-dimensional tipping model: the robot seen along its drive direction,
/// resting on a right contact (arm side) and a left contact. Distances are
/// lateral from the centre of mass to each contact; `payload_arm` is how
/// far beyond the right contact the payload hangs and `force_height` where
/// a horizontal force is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarCase<R: Real> {
    pub mass: R,
    pub gravity: R,
    pub com_to_right: R,
    pub com_to_left: R,
    pub payload_arm: R,
    pub force_height: R,
}

impl<R: Real> PlanarCase<R> {
    pub fn new(
        mass: R,
        gravity: R,
        com_to_right: R,
        com_to_left: R,
        payload_arm: R,
        force_height: R,
    ) -> Result<Self> {
        let fields = [
            ("mass", mass),
            ("gravity", gravity),
            ("com_to_right", com_to_right),
            ("com_to_left", com_to_left),
            ("payload_arm", payload_arm),
            ("force_height", force_height),
        ];
        for (what, value) in fields {
            if !value.is_finite() {
                return Err(Error::NonFinite { what });
            }
        }
        if !(mass > R::zero()) || !(gravity > R::zero()) {
            return Err(Error::InvalidArgument {
                what: "planar case",
                detail: "mass and gravity must be > 0".to_string(),
            });
        }
        if com_to_right < R::zero()
            || com_to_left < R::zero()
            || payload_arm < R::zero()
            || force_height < R::zero()
        {
            return Err(Error::InvalidArgument {
                what: "planar case",
                detail: "distances must be >= 0".to_string(),
            });
        }
        Ok(PlanarCase {
            mass,
            gravity,
            com_to_right,
            com_to_left,
            payload_arm,
            force_height,
        })
    }

    /// Planar reduction of a spec with the centre of mass on the
    /// centreline: both contacts are half the track width away.
    pub fn from_spec(spec: &RobotSpec<R>, payload_arm: R, force_height: R) -> Result<Self> {
        spec.ensure_valid()?;
        let half = spec.track_width / scalar(2.0);
        PlanarCase::new(spec.mass, spec.gravity, half, half, payload_arm, force_height)
    }
}

/// Largest payload the planar robot holds without rotating about its right
/// contact: the payload's moment arm balances the weight's.
pub fn planar_max_payload<R: Real>(case: &PlanarCase<R>) -> Capability<R> {
    if case.payload_arm == R::zero() {
        return Capability::Unbounded;
    }
    Capability::Finite(case.mass * case.com_to_right / case.payload_arm)
}

/// Largest horizontal pull (toward the right contact) the planar robot
/// resists at `force_height`.
pub fn planar_max_pull<R: Real>(case: &PlanarCase<R>) -> Capability<R> {
    if case.force_height == R::zero() {
        return Capability::Unbounded;
    }
    Capability::Finite(case.mass * case.gravity * case.com_to_right / case.force_height)
}

/// Largest horizontal push (toward the left contact) the planar robot
/// resists at `force_height`. Equals the pull limit when the centre of
/// mass is centred, and scales with whichever contact is farther.
pub fn planar_max_push<R: Real>(case: &PlanarCase<R>) -> Capability<R> {
    if case.force_height == R::zero() {
        return Capability::Unbounded;
    }
    Capability::Finite(case.mass * case.gravity * case.com_to_left / case.force_height)
}

/// Payload capability with the load `reach` metres beyond the right wheel.
/// The tipping axis is the right edge of the wheel triangle, so both the
/// payload's lever and the weight's lever are slant distances to that edge;
/// the ratio collapses to `m_r c / (t + 2 l r / w)`.
pub fn payload_at_reach<R: Real>(spec: &RobotSpec<R>, reach: R) -> Result<Capability<R>> {
    spec.ensure_valid()?;
    if !reach.is_finite() {
        return Err(Error::NonFinite { what: "reach" });
    }
    if reach < R::zero() {
        return Err(Error::InvalidArgument {
            what: "reach",
            detail: "must be >= 0".to_string(),
        });
    }
    if reach > spec.max_reach {
        return Err(Error::OutsideWorkspace {
            what: "reach",
            value: to_f64(reach),
            max: to_f64(spec.max_reach),
        });
    }
    let two = scalar::<R>(2.0);
    let denom = spec.arm_setback
        + two * spec.wheelbase * spec.effective_reach(reach) / spec.track_width;
    if denom == R::zero() {
        return Ok(Capability::Unbounded);
    }
    Ok(Capability::Finite(spec.mass * spec.com_from_rear / denom))
}

/// Worst-case payload over the whole workspace: the load at full reach.
pub fn tri_max_payload<R: Real>(spec: &RobotSpec<R>) -> Result<R> {
    spec.ensure_valid()?;
    let two = scalar::<R>(2.0);
    let denom = spec.arm_setback
        + two * spec.wheelbase * spec.effective_reach(spec.max_reach) / spec.track_width;
    Ok(spec.mass * spec.com_from_rear / denom)
}

fn checked_height<R: Real>(spec: &RobotSpec<R>, h: R) -> Result<Option<R>> {
    spec.ensure_valid()?;
    if !h.is_finite() {
        return Err(Error::NonFinite { what: "height" });
    }
    if h > spec.max_height {
        return Err(Error::OutsideWorkspace {
            what: "height",
            value: to_f64(h),
            max: to_f64(spec.max_height),
        });
    }
    if h <= R::zero() {
        return Ok(None);
    }
    Ok(Some(h))
}

/// Largest lateral pull or push the robot resists at height `h` before it
/// rotates about a side edge of the wheel triangle. With the centre of
/// mass on the centreline the two directions are symmetric:
/// `m_r g c w / (2 h l)`.
pub fn tri_max_pull_push<R: Real>(spec: &RobotSpec<R>, h: R) -> Result<Capability<R>> {
    let Some(h) = checked_height(spec, h)? else {
        return Ok(Capability::Unbounded);
    };
    let two = scalar::<R>(2.0);
    Ok(Capability::Finite(
        spec.mass * spec.gravity * spec.com_from_rear * spec.track_width
            / (two * h * spec.wheelbase),
    ))
}

/// Largest reaction force at height `h` the robot sustains while pushing
/// with its back (driving backwards) before rotating about the drive axle:
/// `m_r g (l - c) / h`.
pub fn tri_backpush<R: Real>(spec: &RobotSpec<R>, h: R) -> Result<Capability<R>> {
    let Some(h) = checked_height(spec, h)? else {
        return Ok(Capability::Unbounded);
    };
    Ok(Capability::Finite(
        spec.mass * spec.gravity * (spec.wheelbase - spec.com_from_rear) / h,
    ))
}

/// Capability of `spec` for a load of `kind` at `location`, dispatching to
/// the matching closed form. Force kinds take a height, payload a reach.
pub fn capability<R: Real>(
    spec: &RobotSpec<R>,
    kind: LoadKind,
    location: LoadLocation<R>,
) -> Result<Capability<R>> {
    match (kind, location) {
        (LoadKind::Payload, LoadLocation::FullReach) => {
            tri_max_payload(spec).map(Capability::Finite)
        }
        (LoadKind::Payload, LoadLocation::Reach(r)) => payload_at_reach(spec, r),
        (LoadKind::Pull | LoadKind::Push, LoadLocation::Height(h)) => tri_max_pull_push(spec, h),
        (LoadKind::Backpush, LoadLocation::Height(h)) => tri_backpush(spec, h),
        (kind, location) => Err(Error::InvalidArgument {
            what: "load location",
            detail: format!("{kind} cannot be evaluated at {location}"),
        }),
    }
}

/// An external load on the robot: a force applied at a point, optionally
/// with a carried mass whose weight acts at the same point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppliedLoad<R: Real> {
    pub force: Vec3<R>,
    pub point: Vec3<R>,
    pub attached_mass: R,
}

impl<R: Real> AppliedLoad<R> {
    pub fn none() -> Self {
        AppliedLoad {
            force: Vec3::zero(),
            point: Vec3::zero(),
            attached_mass: R::zero(),
        }
    }

    pub fn force_at(force: Vec3<R>, point: Vec3<R>) -> Self {
        AppliedLoad {
            force,
            point,
            attached_mass: R::zero(),
        }
    }

    pub fn mass_at(mass: R, point: Vec3<R>) -> Self {
        AppliedLoad {
            force: Vec3::zero(),
            point,
            attached_mass: mass,
        }
    }

    pub fn with_attached_mass(mut self, mass: R) -> Self {
        self.attached_mass = mass;
        self
    }
}

/// Per-edge result of [`tip_margin`]. Moments are about each polygon edge
/// line in newton-metres, positive when they press the robot back onto its
/// support. The margin is the smallest edge moment; the robot is stable
/// exactly when no edge moment is negative.
#[derive(Debug, Clone, PartialEq)]
pub struct TipAnalysis<R: Real> {
    pub edge_moments: Vec<R>,
    pub binding_edge: usize,
    pub margin: R,
    pub stable: bool,
}

/// Net restoring moment about every edge of the support polygon under
/// gravity on the centre of mass, gravity on any attached mass, and the
/// applied force.
///
/// For a counterclockwise edge with unit direction `u` through point `p`,
/// the restoring moment is `-u . sum((r_k - p) x F_k)`: a force whose
/// moment would rotate the robot outward over that edge counts negative.
/// Only the force component orthogonal to the edge produces a moment about
/// it, so slanted edges automatically see the projected force.
pub fn tip_margin<R: Real>(
    polygon: &SupportPolygon<R>,
    com: &ComEstimate<R>,
    load: &AppliedLoad<R>,
    gravity: R,
) -> Result<TipAnalysis<R>> {
    if !com.position.is_finite() || !com.mass.is_finite() {
        return Err(Error::NonFinite { what: "com" });
    }
    if !load.force.is_finite() || !load.point.is_finite() {
        return Err(Error::NonFinite { what: "load" });
    }
    if !load.attached_mass.is_finite() || load.attached_mass < R::zero() {
        return Err(Error::InvalidArgument {
            what: "attached mass",
            detail: "must be finite and >= 0".to_string(),
        });
    }
    if !gravity.is_finite() || !(gravity > R::zero()) {
        return Err(Error::InvalidArgument {
            what: "gravity",
            detail: "must be finite and > 0".to_string(),
        });
    }

    let down_com = Vec3::new(R::zero(), R::zero(), -com.mass * gravity);
    let down_attached = Vec3::new(R::zero(), R::zero(), -load.attached_mass * gravity);

    let n = polygon.len();
    let mut edge_moments = Vec::with_capacity(n);
    for i in 0..n {
        let (p0, p1) = polygon.edge(i);
        let dir = p1.sub(p0);
        let len = dir.norm();
        let u = Vec3::new(dir.x / len, dir.y / len, R::zero());
        let pivot = Vec3::new(p0.x, p0.y, R::zero());

        let mut torque = com.position.sub(pivot).cross(down_com);
        torque = torque.add(load.point.sub(pivot).cross(down_attached));
        torque = torque.add(load.point.sub(pivot).cross(load.force));

        edge_moments.push(-u.dot(torque));
    }

    let mut binding_edge = 0;
    for (i, &m) in edge_moments.iter().enumerate() {
        if m < edge_moments[binding_edge] {
            binding_edge = i;
        }
    }
    let margin = edge_moments[binding_edge];
    Ok(TipAnalysis {
        stable: margin >= R::zero(),
        margin,
        binding_edge,
        edge_moments,
    })
}

/// A sampled capability-versus-location curve for one load kind.
#[derive(Debug, Clone, PartialEq)]
pub struct CapabilityCurve<R: Real> {
    pub kind: LoadKind,
    pub grid: Vec<R>,
    pub values: Vec<Capability<R>>,
}

impl<R: Real> CapabilityCurve<R> {
    /// Column name of the independent variable.
    pub fn variable(&self) -> &'static str {
        match self.kind {
            LoadKind::Payload => "reach_m",
            _ => "h_m",
        }
    }

    /// Column name of the capability value.
    pub fn value_column(&self) -> &'static str {
        match self.kind {
            LoadKind::Payload => "payload_kg",
            _ => "force_N",
        }
    }

    /// Renders the curve as CSV with LF line endings: a header row and one
    /// row per grid point. Unbounded values render as `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(self.variable());
        out.push(',');
        out.push_str(self.value_column());
        out.push('\n');
        for (x, v) in self.grid.iter().zip(&self.values) {
            out.push_str(&fmt_scalar(*x));
            out.push(',');
            match v {
                Capability::Finite(y) => out.push_str(&fmt_scalar(*y)),
                Capability::Unbounded => out.push_str("inf"),
            }
            out.push('\n');
        }
        out
    }
}

/// Evaluates the closed form for `kind` at every grid point. The grid must
/// be non-empty, strictly increasing, and lie within `[0, H]` for forces or
/// `[0, D]` for payload; a zero grid point yields an unbounded sample.
pub fn capability_curve<R: Real>(
    spec: &RobotSpec<R>,
    kind: LoadKind,
    grid: &[R],
) -> Result<CapabilityCurve<R>> {
    spec.ensure_valid()?;
    if grid.is_empty() {
        return Err(Error::Grid {
            detail: "grid is empty".to_string(),
        });
    }
    let max = if kind.is_force() {
        spec.max_height
    } else {
        spec.max_reach
    };
    for &x in grid {
        if !x.is_finite() {
            return Err(Error::NonFinite { what: "grid point" });
        }
        if x < R::zero() || x > max {
            return Err(Error::Grid {
                detail: format!(
                    "grid point {} outside [0, {}]",
                    fmt_scalar(x),
                    fmt_scalar(max)
                ),
            });
        }
    }
    for pair in grid.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::Grid {
                detail: "grid values must be strictly increasing".to_string(),
            });
        }
    }

    let location = |x: R| match kind {
        LoadKind::Payload => LoadLocation::Reach(x),
        _ => LoadLocation::Height(x),
    };
    let values = grid
        .iter()
        .map(|&x| capability(spec, kind, location(x)))
        .collect::<Result<Vec<_>>>()?;

    Ok(CapabilityCurve {
        kind,
        grid: grid.to_vec(),
        values,
    })
}
