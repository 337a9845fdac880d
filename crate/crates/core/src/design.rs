//! Parameter sweeps and inverse design.
//!
//! Sweeps evaluate capability metrics over grids of one or two spec
//! fields. The design solver inverts the same closed forms: given an
//! objective over one or two free fields and capability constraints, it
//! finds the optimal field values by exploiting that every capability is
//! monotone in every single field — constraint boundaries are located by
//! analytic inversion where the formula permits and by bisection to 1e-9
//! relative otherwise, and two free fields are handled by coordinate
//! descent over a fixed alphabetical variable order with at most 100
//! passes.

use std::fmt;

use crate::error::{Error, Result};
use crate::format::fmt_scalar;
use crate::real::{scalar, Real};
use crate::robot::{validate_spec, RobotSpec};
use crate::statics::{capability, tri_max_payload, Capability, LoadKind, LoadLocation};

/// The scalar spec fields a sweep or design problem may vary, named here
/// by their `robotspec-v1` keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpecField {
    Mass,
    TrackWidth,
    Wheelbase,
    ComFromRear,
    ArmSetback,
    MaxReach,
    MaxHeight,
}

impl SpecField {
    pub const ALL: [SpecField; 7] = [
        SpecField::Mass,
        SpecField::TrackWidth,
        SpecField::Wheelbase,
        SpecField::ComFromRear,
        SpecField::ArmSetback,
        SpecField::MaxReach,
        SpecField::MaxHeight,
    ];

    /// The field's key in `robotspec-v1` files.
    pub fn key(&self) -> &'static str {
        match self {
            SpecField::Mass => "m_r",
            SpecField::TrackWidth => "w",
            SpecField::Wheelbase => "l",
            SpecField::ComFromRear => "c",
            SpecField::ArmSetback => "t",
            SpecField::MaxReach => "D",
            SpecField::MaxHeight => "H",
        }
    }

    pub fn from_key(key: &str) -> Result<Self> {
        SpecField::ALL
            .into_iter()
            .find(|f| f.key() == key)
            .ok_or_else(|| Error::InvalidArgument {
                what: "spec field",
                detail: format!("{key:?} is not one of m_r, w, l, c, t, D, H"),
            })
    }

    pub fn get<R: Real>(&self, spec: &RobotSpec<R>) -> R {
        match self {
            SpecField::Mass => spec.mass,
            SpecField::TrackWidth => spec.track_width,
            SpecField::Wheelbase => spec.wheelbase,
            SpecField::ComFromRear => spec.com_from_rear,
            SpecField::ArmSetback => spec.arm_setback,
            SpecField::MaxReach => spec.max_reach,
            SpecField::MaxHeight => spec.max_height,
        }
    }

    /// Writes the field. Lowering the workspace height also clamps the
    /// lift's joint limit so the spec stays structurally consistent.
    pub fn set<R: Real>(&self, spec: &mut RobotSpec<R>, value: R) {
        match self {
            SpecField::Mass => spec.mass = value,
            SpecField::TrackWidth => spec.track_width = value,
            SpecField::Wheelbase => spec.wheelbase = value,
            SpecField::ComFromRear => spec.com_from_rear = value,
            SpecField::ArmSetback => spec.arm_setback = value,
            SpecField::MaxReach => spec.max_reach = value,
            SpecField::MaxHeight => {
                spec.max_height = value;
                if spec.joint_limits.lift.max > value {
                    spec.joint_limits.lift.max = value;
                }
                if spec.joint_limits.lift.min > value {
                    spec.joint_limits.lift.min = value;
                }
            }
        }
    }
}

impl fmt::Display for SpecField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// One swept field: `steps` evenly spaced values from `min` to `max`
/// inclusive (a single step takes `min`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis<R: Real> {
    pub field: SpecField,
    pub min: R,
    pub max: R,
    pub steps: usize,
}

impl<R: Real> SweepAxis<R> {
    fn grid(&self) -> Vec<R> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let n = scalar::<R>((self.steps - 1) as f64);
        (0..self.steps)
            .map(|k| {
                let t = scalar::<R>(k as f64) / n;
                self.min * (R::one() - t) + self.max * t
            })
            .collect()
    }
}

/// A capability metric evaluated per sweep row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepMetric<R: Real> {
    pub kind: LoadKind,
    pub location: LoadLocation<R>,
}

impl<R: Real> SweepMetric<R> {
    /// CSV column name: the kind with its unit, plus the location when it
    /// is not the default full reach.
    pub fn column(&self) -> String {
        let base = format!("{}_{}", self.kind, self.kind.unit());
        match self.location {
            LoadLocation::FullReach => base,
            LoadLocation::Reach(r) => format!("{base}@{}", fmt_scalar(r)),
            LoadLocation::Height(h) => format!("{base}@{}", fmt_scalar(h)),
        }
    }
}

/// A sweep: a template spec, one or two axes, and the metrics to tabulate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest<R: Real> {
    pub template: RobotSpec<R>,
    pub axes: Vec<SweepAxis<R>>,
    pub metrics: Vec<SweepMetric<R>>,
}

/// One table cell: a finite capability, a diverging one, or a marker that
/// the grid point's spec (or the metric's location on it) was not
/// evaluable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellValue<R: Real> {
    Finite(R),
    Unbounded,
    Invalid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<R: Real> {
    pub params: Vec<R>,
    pub cells: Vec<CellValue<R>>,
}

/// Sweep output: one column per swept field (named by its spec key), one
/// per metric, rows in lexicographic grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable<R: Real> {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow<R>>,
}

impl<R: Real> SweepTable<R> {
    /// Renders the table as CSV with LF line endings. Unbounded cells
    /// render as `inf`, unevaluable ones as `invalid`.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut fields: Vec<String> = row.params.iter().map(|&p| fmt_scalar(p)).collect();
            for cell in &row.cells {
                fields.push(match cell {
                    CellValue::Finite(x) => fmt_scalar(*x),
                    CellValue::Unbounded => "inf".to_string(),
                    CellValue::Invalid => "invalid".to_string(),
                });
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Evaluates every metric at every grid point. Rows are ordered
/// lexicographically (first axis outermost) and evaluated sequentially, so
/// output is identical across runs. A grid point that makes the spec
/// invalid — or a metric that cannot be evaluated there — yields
/// [`CellValue::Invalid`] rather than dropping the row.
pub fn run_sweep<R: Real>(req: &SweepRequest<R>) -> Result<SweepTable<R>> {
    req.template.ensure_valid()?;
    if req.axes.is_empty() {
        return Err(Error::Grid {
            detail: "sweep needs at least one axis".to_string(),
        });
    }
    if req.axes.len() > 2 {
        return Err(Error::Unsupported(format!(
            "sweeps cover one or two fields, got {}",
            req.axes.len()
        )));
    }
    if req.axes.len() == 2 && req.axes[0].field == req.axes[1].field {
        return Err(Error::InvalidArgument {
            what: "sweep axes",
            detail: format!("{} swept twice", req.axes[0].field),
        });
    }
    if req.metrics.is_empty() {
        return Err(Error::InvalidArgument {
            what: "sweep metrics",
            detail: "need at least one metric".to_string(),
        });
    }
    for axis in &req.axes {
        if !axis.min.is_finite() || !axis.max.is_finite() {
            return Err(Error::NonFinite { what: "sweep axis" });
        }
        if axis.steps == 0 {
            return Err(Error::Grid {
                detail: format!("axis {} has zero steps", axis.field),
            });
        }
        if axis.min > axis.max {
            return Err(Error::Grid {
                detail: format!("axis {} has min > max", axis.field),
            });
        }
    }

    let mut columns: Vec<String> = req.axes.iter().map(|a| a.field.key().to_string()).collect();
    columns.extend(req.metrics.iter().map(|m| m.column()));

    let outer = req.axes[0].grid();
    let inner: Vec<R> = match req.axes.get(1) {
        Some(axis) => axis.grid(),
        None => Vec::new(),
    };

    let mut rows = Vec::new();
    let mut emit = |params: Vec<R>| {
        let mut spec = req.template.clone();
        for (axis, &value) in req.axes.iter().zip(&params) {
            axis.field.set(&mut spec, value);
        }
        let cells = if validate_spec(&spec).is_valid() {
            req.metrics
                .iter()
                .map(|m| match capability(&spec, m.kind, m.location) {
                    Ok(Capability::Finite(x)) => CellValue::Finite(x),
                    Ok(Capability::Unbounded) => CellValue::Unbounded,
                    Err(_) => CellValue::Invalid,
                })
                .collect()
        } else {
            vec![CellValue::Invalid; req.metrics.len()]
        };
        rows.push(SweepRow { params, cells });
    };

    for &a in &outer {
        if inner.is_empty() {
            emit(vec![a]);
        } else {
            for &b in &inner {
                emit(vec![a, b]);
            }
        }
    }

    Ok(SweepTable { columns, rows })
}

/// Extra arm extension gained by widening the base by `width_increase`:
/// each of the `n_segments` telescoping segments grows by the same
/// increase, so the full extension grows by their product.
pub fn widen_base_extension_gain<R: Real>(width_increase: R, n_segments: u32) -> Result<R> {
    if !width_increase.is_finite() {
        return Err(Error::NonFinite {
            what: "width increase",
        });
    }
    if width_increase < R::zero() {
        return Err(Error::InvalidArgument {
            what: "width increase",
            detail: "must be >= 0".to_string(),
        });
    }
    if n_segments == 0 {
        return Err(Error::InvalidArgument {
            what: "n_segments",
            detail: "must be >= 1".to_string(),
        });
    }
    Ok(scalar::<R>(n_segments as f64) * width_increase)
}

/// What the design solver optimizes. Field objectives are limited to the
/// directions that trade against capability: minimizing width, mass, or
/// wheelbase, or maximizing reach. `MaximizePayload` maximizes the
/// worst-case (full-reach) payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Minimize(SpecField),
    Maximize(SpecField),
    MaximizePayload,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Minimize(field) => write!(f, "minimize {field}"),
            Objective::Maximize(field) => write!(f, "maximize {field}"),
            Objective::MaximizePayload => f.write_str("maximize payload"),
        }
    }
}

/// Direction of a capability constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    AtLeast,
    AtMost,
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparator::AtLeast => ">=",
            Comparator::AtMost => "<=",
        })
    }
}

/// One capability requirement on the solved spec, e.g. payload at full
/// reach of at least 1.2 kg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint<R: Real> {
    pub kind: LoadKind,
    pub location: LoadLocation<R>,
    pub comparator: Comparator,
    pub value: R,
}

impl<R: Real> fmt::Display for Constraint<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} at {}",
            self.kind,
            self.comparator,
            fmt_scalar(self.value),
            self.kind.unit(),
            self.location
        )
    }
}

/// Explicit search interval for one free field, replacing the default
/// `[0.1x, 10x]` of the template value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldBounds<R: Real> {
    pub field: SpecField,
    pub min: R,
    pub max: R,
}

/// An inverse design problem: every spec field not listed in `frozen` is
/// free to vary (one or two fields may be free).
#[derive(Debug, Clone, PartialEq)]
pub struct DesignProblem<R: Real> {
    pub template: RobotSpec<R>,
    pub objective: Objective,
    pub constraints: Vec<Constraint<R>>,
    pub frozen: Vec<SpecField>,
    pub bounds: Vec<FieldBounds<R>>,
}

/// How one constraint fares on the solved spec: its achieved capability
/// and the slack in the constraint's own unit (positive = satisfied).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport<R: Real> {
    pub constraint: Constraint<R>,
    pub achieved: Capability<R>,
    pub margin: R,
}

/// The solved spec with its objective value and per-constraint margins.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSolution<R: Real> {
    pub spec: RobotSpec<R>,
    pub objective_value: R,
    pub reports: Vec<ConstraintReport<R>>,
}

/// How a capability metric responds to increasing a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Increasing,
    Decreasing,
    Flat,
}

fn payload_trend(field: SpecField) -> Trend {
    match field {
        SpecField::Mass | SpecField::ComFromRear | SpecField::TrackWidth => Trend::Increasing,
        SpecField::Wheelbase | SpecField::MaxReach | SpecField::ArmSetback => Trend::Decreasing,
        SpecField::MaxHeight => Trend::Flat,
    }
}

fn metric_trend(kind: LoadKind, field: SpecField) -> Trend {
    match kind {
        LoadKind::Payload => payload_trend(field),
        LoadKind::Pull | LoadKind::Push => match field {
            SpecField::Mass | SpecField::ComFromRear | SpecField::TrackWidth => Trend::Increasing,
            SpecField::Wheelbase => Trend::Decreasing,
            // Raising the workspace ceiling only makes more heights
            // reachable.
            SpecField::MaxHeight => Trend::Increasing,
            SpecField::ArmSetback | SpecField::MaxReach => Trend::Flat,
        },
        LoadKind::Backpush => match field {
            SpecField::Mass | SpecField::Wheelbase => Trend::Increasing,
            SpecField::ComFromRear => Trend::Decreasing,
            SpecField::MaxHeight => Trend::Increasing,
            SpecField::TrackWidth | SpecField::ArmSetback | SpecField::MaxReach => Trend::Flat,
        },
    }
}

fn describe_unmet<R: Real>(c: &Constraint<R>) -> String {
    c.to_string()
}

/// True when the spec satisfies the constraint. Unevaluable locations
/// (e.g. a constraint height above the candidate's workspace) count as
/// unmet.
fn meets<R: Real>(spec: &RobotSpec<R>, c: &Constraint<R>) -> bool {
    match capability(spec, c.kind, c.location) {
        Ok(cap) => {
            let v = cap.or_infinity();
            match c.comparator {
                Comparator::AtLeast => v >= c.value,
                Comparator::AtMost => v <= c.value,
            }
        }
        Err(_) => false,
    }
}

fn with_field<R: Real>(spec: &RobotSpec<R>, field: SpecField, value: R) -> RobotSpec<R> {
    let mut out = spec.clone();
    field.set(&mut out, value);
    out
}

/// A relative nudge of a few ulps, used to keep clipped intervals strictly
/// inside open validity bounds.
fn nudge<R: Real>(x: R) -> R {
    x.abs().max(R::one()) * R::epsilon() * scalar(8.0)
}

/// Search interval for `field`: the explicit bounds if given, otherwise
/// `[0.1x, 10x]` of the template value, clipped so every point in it
/// yields a structurally valid spec against the other fields' current
/// values.
fn search_interval<R: Real>(
    problem: &DesignProblem<R>,
    current: &RobotSpec<R>,
    field: SpecField,
) -> Result<(R, R)> {
    let (mut lo, mut hi) = match problem.bounds.iter().find(|b| b.field == field) {
        Some(b) => {
            if !b.min.is_finite() || !b.max.is_finite() || b.min > b.max {
                return Err(Error::InvalidArgument {
                    what: "field bounds",
                    detail: format!("{} bounds must be finite with min <= max", field),
                });
            }
            (b.min, b.max)
        }
        None => {
            let v = field.get(&problem.template);
            if v == R::zero() {
                return Err(Error::Unsupported(format!(
                    "free field {field} has a zero template value; give explicit bounds"
                )));
            }
            (v * scalar(0.1), v * scalar(10.0))
        }
    };

    match field {
        SpecField::Mass => {
            let floor = current.arm_mass.max(nudge(hi));
            lo = lo.max(floor);
        }
        SpecField::TrackWidth | SpecField::MaxReach | SpecField::MaxHeight => {
            lo = lo.max(nudge(hi));
        }
        SpecField::ArmSetback => {
            lo = lo.max(R::zero());
        }
        SpecField::ComFromRear => {
            let l = current.wheelbase;
            lo = lo.max(nudge(hi));
            hi = hi.min(l - nudge(l));
        }
        SpecField::Wheelbase => {
            let c = current.com_from_rear;
            lo = lo.max(c + nudge(c));
        }
    }

    if !(lo <= hi) {
        return Err(Error::Infeasible {
            constraint: format!("structural bounds of {field}"),
        });
    }
    Ok((lo, hi))
}

/// Exact value of `field` at which the constraint's capability equals its
/// target, holding every other field of `base` fixed. `None` when no
/// closed-form inversion applies (the caller bisects instead).
fn analytic_boundary<R: Real>(
    base: &RobotSpec<R>,
    field: SpecField,
    c: &Constraint<R>,
) -> Option<R> {
    let target = c.value;
    if !(target > R::zero()) {
        return None;
    }
    let two = scalar::<R>(2.0);
    let m = base.mass;
    let g = base.gravity;
    let w = base.track_width;
    let l = base.wheelbase;
    let com = base.com_from_rear;
    let t = base.arm_setback;

    let positive = |x: R| if x.is_finite() && x > R::zero() { Some(x) } else { None };

    match (c.kind, c.location) {
        (LoadKind::Payload, location) => {
            let reach = match location {
                LoadLocation::FullReach => base.max_reach,
                LoadLocation::Reach(r) => r,
                LoadLocation::Height(_) => return None,
            };
            if field == SpecField::MaxReach {
                return match location {
                    // Capability steps from unreachable to the closed form
                    // exactly when the workspace depth passes the reach.
                    LoadLocation::Reach(r) => Some(r),
                    LoadLocation::FullReach => {
                        let r = positive(m * com / target - t)? * w / (two * l);
                        positive(r - base.reach_offset)
                    }
                    LoadLocation::Height(_) => None,
                };
            }
            let r_eff = base.effective_reach(reach);
            match field {
                SpecField::Mass => {
                    let denom = t + two * l * r_eff / w;
                    positive(target * denom / com)
                }
                SpecField::ComFromRear => {
                    let denom = t + two * l * r_eff / w;
                    positive(target * denom / m)
                }
                SpecField::TrackWidth => {
                    let room = positive(m * com / target - t)?;
                    positive(two * l * r_eff / room)
                }
                SpecField::Wheelbase => {
                    let room = positive(m * com / target - t)?;
                    positive(room * w / (two * r_eff))
                }
                SpecField::ArmSetback => {
                    let x = m * com / target - two * l * r_eff / w;
                    if x.is_finite() && x >= R::zero() {
                        Some(x)
                    } else {
                        None
                    }
                }
                _ => None,
            }
        }
        (LoadKind::Pull | LoadKind::Push, LoadLocation::Height(h)) => match field {
            SpecField::Mass => positive(target * two * h * l / (g * com * w)),
            SpecField::ComFromRear => positive(target * two * h * l / (m * g * w)),
            SpecField::TrackWidth => positive(target * two * h * l / (m * g * com)),
            SpecField::Wheelbase => positive(m * g * com * w / (two * h * target)),
            SpecField::MaxHeight => Some(h),
            _ => None,
        },
        (LoadKind::Backpush, LoadLocation::Height(h)) => match field {
            SpecField::Mass => positive(target * h / (g * (l - com))),
            SpecField::Wheelbase => positive(com + target * h / (m * g)),
            SpecField::ComFromRear => {
                let x = l - target * h / (m * g);
                if x.is_finite() && x > R::zero() {
                    Some(x)
                } else {
                    None
                }
            }
            SpecField::MaxHeight => Some(h),
            _ => None,
        },
        _ => None,
    }
}

/// Locates the satisfied/unsatisfied boundary of constraint `c` in
/// `field`'s interval `[lo, hi]`, where exactly one endpoint satisfies it.
/// Returns a value on the satisfied side. Tries the analytic inversion
/// first and falls back to bisection to 1e-9 relative.
fn constraint_boundary<R: Real>(
    base: &RobotSpec<R>,
    field: SpecField,
    c: &Constraint<R>,
    lo: R,
    hi: R,
    lo_satisfied: bool,
) -> R {
    if let Some(x) = analytic_boundary(base, field, c) {
        if x > lo && x < hi {
            if meets(&with_field(base, field, x), c) {
                return x;
            }
            let stepped = if lo_satisfied { x - nudge(x) } else { x + nudge(x) };
            if stepped > lo && stepped < hi && meets(&with_field(base, field, stepped), c) {
                return stepped;
            }
        }
    }

    let tol = scalar::<R>(1e-9).max(R::epsilon() * scalar(8.0));
    let (mut sat, mut unsat) = if lo_satisfied { (lo, hi) } else { (hi, lo) };
    loop {
        let mid = (sat + unsat) / scalar(2.0);
        if mid == sat || mid == unsat {
            return sat;
        }
        if meets(&with_field(base, field, mid), c) {
            sat = mid;
        } else {
            unsat = mid;
        }
        let scale = sat.abs().max(unsat.abs()).max(R::one());
        if (sat - unsat).abs() <= tol * scale {
            return sat;
        }
    }
}

enum Feasible<R: Real> {
    Interval(R, R),
    /// Index of the first constraint unsatisfied across the whole interval.
    Empty(usize),
}

/// Intersects `[lo, hi]` with every constraint's satisfied region.
/// Capabilities are monotone in the field, so each region is an interval
/// touching one endpoint; both returned endpoints satisfy all constraints.
fn feasible_interval<R: Real>(
    problem: &DesignProblem<R>,
    current: &RobotSpec<R>,
    field: SpecField,
    lo: R,
    hi: R,
) -> Feasible<R> {
    let mut flo = lo;
    let mut fhi = hi;
    for (i, c) in problem.constraints.iter().enumerate() {
        let lo_ok = meets(&with_field(current, field, flo), c);
        let hi_ok = meets(&with_field(current, field, fhi), c);
        match (lo_ok, hi_ok) {
            (true, true) => {}
            (false, false) => return Feasible::Empty(i),
            (lo_sat, _) => {
                let x = constraint_boundary(current, field, c, flo, fhi, lo_sat);
                if lo_sat {
                    fhi = x;
                } else {
                    flo = x;
                }
            }
        }
    }
    Feasible::Interval(flo, fhi)
}

fn objective_value<R: Real>(problem: &DesignProblem<R>, spec: &RobotSpec<R>) -> Result<R> {
    match problem.objective {
        Objective::Minimize(f) | Objective::Maximize(f) => Ok(f.get(spec)),
        Objective::MaximizePayload => tri_max_payload(spec),
    }
}

fn is_better<R: Real>(problem: &DesignProblem<R>, candidate: R, incumbent: R) -> bool {
    match problem.objective {
        Objective::Minimize(_) => candidate < incumbent,
        Objective::Maximize(_) | Objective::MaximizePayload => candidate > incumbent,
    }
}

/// Optimal value for the objective's own field within its feasible
/// interval, or for a free field under `MaximizePayload`.
fn choose_direct<R: Real>(
    problem: &DesignProblem<R>,
    field: SpecField,
    flo: R,
    fhi: R,
) -> R {
    match problem.objective {
        Objective::Minimize(_) => flo,
        Objective::Maximize(_) => fhi,
        Objective::MaximizePayload => match payload_trend(field) {
            Trend::Increasing => fhi,
            Trend::Decreasing | Trend::Flat => flo,
        },
    }
}

fn solve_single<R: Real>(
    problem: &DesignProblem<R>,
    spec: &mut RobotSpec<R>,
    field: SpecField,
) -> Result<()> {
    let (lo, hi) = search_interval(problem, spec, field)?;
    match feasible_interval(problem, spec, field, lo, hi) {
        Feasible::Empty(i) => Err(Error::Infeasible {
            constraint: describe_unmet(&problem.constraints[i]),
        }),
        Feasible::Interval(flo, fhi) => {
            field.set(spec, choose_direct(problem, field, flo, fhi));
            Ok(())
        }
    }
}

/// Best objective value attainable by re-optimizing `objective_field`
/// after pinning `helper` to `value`. Used to compare the two ends of the
/// helper's feasible interval.
fn nested_value<R: Real>(
    problem: &DesignProblem<R>,
    spec: &RobotSpec<R>,
    helper: SpecField,
    value: R,
    objective_field: SpecField,
) -> Result<R> {
    let mut trial = with_field(spec, helper, value);
    solve_single(problem, &mut trial, objective_field)?;
    objective_value(problem, &trial)
}

fn solve_pair<R: Real>(
    problem: &DesignProblem<R>,
    spec: &mut RobotSpec<R>,
    fields: [SpecField; 2],
) -> Result<()> {
    let objective_field = match problem.objective {
        Objective::Minimize(f) | Objective::Maximize(f) => Some(f),
        Objective::MaximizePayload => None,
    };

    // Start from the template values clamped into their intervals.
    for &f in &fields {
        let (lo, hi) = search_interval(problem, spec, f)?;
        let v = f.get(spec).max(lo).min(hi);
        f.set(spec, v);
    }

    let tie = |a: R, b: R| {
        let scale = a.abs().max(b.abs()).max(R::one());
        (a - b).abs() <= scale * scalar(1e-12)
    };

    let mut last_unmet: Option<String> = None;
    for _ in 0..100 {
        let mut moved = false;
        let mut any_feasible = false;
        for &f in &fields {
            let (lo, hi) = search_interval(problem, spec, f)?;
            match feasible_interval(problem, spec, f, lo, hi) {
                Feasible::Empty(i) => {
                    let c = &problem.constraints[i];
                    last_unmet = Some(describe_unmet(c));
                    // This field alone cannot satisfy the constraint; park
                    // it at the end that gets closest so the other field
                    // has the most room.
                    let relax = match (metric_trend(c.kind, f), c.comparator) {
                        (Trend::Increasing, Comparator::AtLeast)
                        | (Trend::Decreasing, Comparator::AtMost) => Some(hi),
                        (Trend::Decreasing, Comparator::AtLeast)
                        | (Trend::Increasing, Comparator::AtMost) => Some(lo),
                        (Trend::Flat, _) => None,
                    };
                    if let Some(x) = relax {
                        let prev = f.get(spec);
                        f.set(spec, x);
                        if !tie(x, prev) {
                            moved = true;
                        }
                    }
                }
                Feasible::Interval(flo, fhi) => {
                    any_feasible = true;
                    let next = match objective_field {
                        Some(g) if g != f => {
                            if flo == fhi {
                                flo
                            } else {
                                let at_lo = nested_value(problem, spec, f, flo, g);
                                let at_hi = nested_value(problem, spec, f, fhi, g);
                                match (at_lo, at_hi) {
                                    (Ok(a), Ok(b)) if tie(a, b) => {
                                        // Equal objectives: prefer the
                                        // smaller width, then mass, else
                                        // the lower end.
                                        flo
                                    }
                                    (Ok(a), Ok(b)) => {
                                        if is_better(problem, a, b) {
                                            flo
                                        } else {
                                            fhi
                                        }
                                    }
                                    (Ok(_), Err(_)) => flo,
                                    (Err(_), Ok(_)) => fhi,
                                    (Err(_), Err(_)) => f.get(spec).max(flo).min(fhi),
                                }
                            }
                        }
                        _ => choose_direct(problem, f, flo, fhi),
                    };
                    let prev = f.get(spec);
                    f.set(spec, next);
                    if !tie(next, prev) {
                        moved = true;
                    }
                }
            }
        }
        if !any_feasible {
            return Err(Error::Infeasible {
                constraint: last_unmet.unwrap_or_else(|| "spec validity".to_string()),
            });
        }
        if !moved {
            break;
        }
    }

    if let Some(g) = objective_field {
        // Settle the objective field against the final helper value.
        solve_single(problem, spec, g)?;
    }
    for c in &problem.constraints {
        if !meets(spec, c) {
            return Err(Error::Infeasible {
                constraint: describe_unmet(c),
            });
        }
    }
    Ok(())
}

/// Solves an inverse design problem. See the module docs for the
/// procedure; the returned spec is structurally valid and satisfies every
/// constraint, with margins reported in each constraint's unit.
pub fn solve_design<R: Real>(problem: &DesignProblem<R>) -> Result<DesignSolution<R>> {
    problem.template.ensure_valid()?;

    let mut free: Vec<SpecField> = SpecField::ALL
        .into_iter()
        .filter(|f| !problem.frozen.contains(f))
        .collect();
    free.sort_by_key(|f| f.key().to_ascii_lowercase());
    if free.is_empty() || free.len() > 2 {
        return Err(Error::Unsupported(format!(
            "design problems take one or two free fields, got {}",
            free.len()
        )));
    }

    match problem.objective {
        Objective::Minimize(f) => {
            if !matches!(
                f,
                SpecField::TrackWidth | SpecField::Mass | SpecField::Wheelbase
            ) {
                return Err(Error::Unsupported(format!(
                    "cannot minimize {f}; supported: w, m_r, l"
                )));
            }
            if !free.contains(&f) {
                return Err(Error::Unsupported(format!("objective field {f} is frozen")));
            }
        }
        Objective::Maximize(f) => {
            if f != SpecField::MaxReach {
                return Err(Error::Unsupported(format!(
                    "cannot maximize {f}; supported: D"
                )));
            }
            if !free.contains(&f) {
                return Err(Error::Unsupported(format!("objective field {f} is frozen")));
            }
        }
        Objective::MaximizePayload => {}
    }

    for c in &problem.constraints {
        if !c.value.is_finite() || c.value < R::zero() {
            return Err(Error::InvalidArgument {
                what: "constraint value",
                detail: format!("{c} must have a finite non-negative value"),
            });
        }
        let location_ok = match c.kind {
            LoadKind::Payload => !matches!(c.location, LoadLocation::Height(_)),
            _ => matches!(c.location, LoadLocation::Height(_)),
        };
        if !location_ok {
            return Err(Error::InvalidArgument {
                what: "constraint location",
                detail: format!("{c} pairs a {} with the wrong location kind", c.kind),
            });
        }
    }

    let mut spec = problem.template.clone();
    match free.len() {
        1 => solve_single(problem, &mut spec, free[0])?,
        _ => solve_pair(problem, &mut spec, [free[0], free[1]])?,
    }

    spec.ensure_valid()?;
    let objective_value = objective_value(problem, &spec)?;
    let reports = problem
        .constraints
        .iter()
        .map(|&constraint| {
            let achieved = capability(&spec, constraint.kind, constraint.location)
                .unwrap_or(Capability::Finite(R::zero()));
            let margin = match constraint.comparator {
                Comparator::AtLeast => achieved.or_infinity() - constraint.value,
                Comparator::AtMost => constraint.value - achieved.or_infinity(),
            };
            ConstraintReport {
                constraint,
                achieved,
                margin,
            }
        })
        .collect();

    Ok(DesignSolution {
        spec,
        objective_value,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn stretch() -> RobotSpec<f64> {
        RobotSpec::stretch_re1()
    }

    fn frozen_except(fields: &[SpecField]) -> Vec<SpecField> {
        SpecField::ALL
            .into_iter()
            .filter(|f| !fields.contains(f))
            .collect()
    }

    fn payload_at_least(value: f64) -> Constraint<f64> {
        Constraint {
            kind: LoadKind::Payload,
            location: LoadLocation::FullReach,
            comparator: Comparator::AtLeast,
            value,
        }
    }

    #[test]
    fn widen_gain_examples() {
        assert_relative_eq!(
            widen_base_extension_gain(0.01, 4).unwrap(),
            0.04,
            epsilon = 1e-15
        );
        assert_eq!(widen_base_extension_gain(0.0, 4).unwrap(), 0.0);
        assert_eq!(widen_base_extension_gain(0.02, 1).unwrap(), 0.02);
        assert!(widen_base_extension_gain(-0.01, 4).is_err());
        assert!(widen_base_extension_gain::<f64>(0.01, 0).is_err());
    }

    #[test]
    fn reach_sweep_matches_closed_form_per_row() {
        let req = SweepRequest {
            template: stretch(),
            axes: vec![SweepAxis {
                field: SpecField::MaxReach,
                min: 0.5,
                max: 0.9,
                steps: 3,
            }],
            metrics: vec![SweepMetric {
                kind: LoadKind::Payload,
                location: LoadLocation::FullReach,
            }],
        };
        let table = run_sweep(&req).unwrap();
        assert_eq!(table.columns, vec!["D", "payload_kg"]);
        assert_eq!(table.rows.len(), 3);
        assert_relative_eq!(table.rows[1].params[0], 0.7, epsilon = 1e-12);

        for row in &table.rows {
            let mut spec = stretch();
            spec.max_reach = row.params[0];
            let expected = tri_max_payload(&spec).unwrap();
            match row.cells[0] {
                CellValue::Finite(x) => assert_relative_eq!(x, expected, epsilon = 1e-12),
                ref other => panic!("unexpected cell {other:?}"),
            }
        }
    }

    #[test]
    fn stretch_reach_sweep_values() {
        let req = SweepRequest {
            template: stretch(),
            axes: vec![SweepAxis {
                field: SpecField::MaxReach,
                min: 0.5,
                max: 0.6925,
                steps: 2,
            }],
            metrics: vec![SweepMetric {
                kind: LoadKind::Payload,
                location: LoadLocation::FullReach,
            }],
        };
        let table = run_sweep(&req).unwrap();
        let cell = |i: usize| match table.rows[i].cells[0] {
            CellValue::Finite(x) => x,
            ref other => panic!("unexpected cell {other:?}"),
        };
        assert_relative_eq!(cell(0), 4.798510, epsilon = 1e-5);
        assert_relative_eq!(cell(1), 3.470918, epsilon = 1e-5);
    }

    #[test]
    fn doubling_mass_doubles_payload_cells() {
        let req = SweepRequest {
            template: stretch(),
            axes: vec![SweepAxis {
                field: SpecField::Mass,
                min: 23.0,
                max: 46.0,
                steps: 2,
            }],
            metrics: vec![SweepMetric {
                kind: LoadKind::Payload,
                location: LoadLocation::FullReach,
            }],
        };
        let table = run_sweep(&req).unwrap();
        let values: Vec<f64> = table
            .rows
            .iter()
            .map(|r| match r.cells[0] {
                CellValue::Finite(x) => x,
                ref other => panic!("unexpected cell {other:?}"),
            })
            .collect();
        assert_relative_eq!(values[1], 2.0 * values[0], epsilon = 1e-12);
    }

    #[test]
    fn invalid_rows_are_flagged_not_dropped() {
        let req = SweepRequest {
            template: stretch(),
            axes: vec![SweepAxis {
                field: SpecField::Wheelbase,
                min: 0.1, // below c = 0.16: invalid spec
                max: 0.3,
                steps: 3,
            }],
            metrics: vec![SweepMetric {
                kind: LoadKind::Payload,
                location: LoadLocation::FullReach,
            }],
        };
        let table = run_sweep(&req).unwrap();
        assert_eq!(table.rows.len(), 3);
        assert_eq!(table.rows[0].cells[0], CellValue::Invalid);
        assert!(matches!(table.rows[2].cells[0], CellValue::Finite(_)));
        let csv = table.to_csv();
        assert!(csv.contains("invalid"));
    }

    #[test]
    fn two_axis_rows_are_lexicographic() {
        let req = SweepRequest {
            template: stretch(),
            axes: vec![
                SweepAxis {
                    field: SpecField::Mass,
                    min: 20.0,
                    max: 25.0,
                    steps: 2,
                },
                SweepAxis {
                    field: SpecField::TrackWidth,
                    min: 0.3,
                    max: 0.4,
                    steps: 2,
                },
            ],
            metrics: vec![SweepMetric {
                kind: LoadKind::Pull,
                location: LoadLocation::Height(0.7),
            }],
        };
        let table = run_sweep(&req).unwrap();
        assert_eq!(table.columns[..2], ["m_r".to_string(), "w".to_string()]);
        let params: Vec<(f64, f64)> = table
            .rows
            .iter()
            .map(|r| (r.params[0], r.params[1]))
            .collect();
        assert_eq!(
            params,
            vec![(20.0, 0.3), (20.0, 0.4), (25.0, 0.3), (25.0, 0.4)]
        );
    }

    #[test]
    fn sweep_request_validation() {
        let template = stretch();
        let metric = SweepMetric {
            kind: LoadKind::Payload,
            location: LoadLocation::FullReach,
        };
        let no_axes = SweepRequest {
            template: template.clone(),
            axes: vec![],
            metrics: vec![metric],
        };
        assert!(matches!(run_sweep(&no_axes), Err(Error::Grid { .. })));

        let zero_steps = SweepRequest {
            template: template.clone(),
            axes: vec![SweepAxis {
                field: SpecField::Mass,
                min: 10.0,
                max: 20.0,
                steps: 0,
            }],
            metrics: vec![metric],
        };
        assert!(matches!(run_sweep(&zero_steps), Err(Error::Grid { .. })));

        let no_metrics = SweepRequest {
            template,
            axes: vec![SweepAxis {
                field: SpecField::Mass,
                min: 10.0,
                max: 20.0,
                steps: 2,
            }],
            metrics: vec![],
        };
        assert!(run_sweep(&no_metrics).is_err());
    }

    #[test]
    fn minimum_mass_for_payload_target() {
        let problem = DesignProblem {
            template: stretch(),
            objective: Objective::Minimize(SpecField::Mass),
            constraints: vec![payload_at_least(1.2)],
            frozen: frozen_except(&[SpecField::Mass]),
            bounds: vec![],
        };
        let solution = solve_design(&problem).unwrap();

        let s = stretch();
        let denom = s.arm_setback + 2.0 * s.wheelbase * s.max_reach / s.track_width;
        let expected = 1.2 * denom / s.com_from_rear;
        assert_relative_eq!(solution.spec.mass, expected, epsilon = 1e-9);
        assert_relative_eq!(solution.objective_value, 7.9518, epsilon = 1e-4);
        assert!(solution.reports[0].margin >= -1e-6);
        assert_relative_eq!(
            solution.reports[0].achieved.finite().unwrap(),
            1.2,
            epsilon = 1e-9
        );
    }

    #[test]
    fn mass_round_trips_through_its_own_payload() {
        let target = tri_max_payload(&stretch()).unwrap();
        let problem = DesignProblem {
            template: stretch(),
            objective: Objective::Minimize(SpecField::Mass),
            constraints: vec![payload_at_least(target)],
            frozen: frozen_except(&[SpecField::Mass]),
            bounds: vec![],
        };
        let solution = solve_design(&problem).unwrap();
        assert_relative_eq!(solution.spec.mass, 23.0, epsilon = 1e-6);
    }

    #[test]
    fn vacuous_constraint_rests_at_the_search_bound() {
        let problem = DesignProblem {
            template: stretch(),
            objective: Objective::Minimize(SpecField::Mass),
            constraints: vec![payload_at_least(0.0)],
            frozen: frozen_except(&[SpecField::Mass]),
            bounds: vec![],
        };
        let solution = solve_design(&problem).unwrap();
        assert_relative_eq!(solution.spec.mass, 2.3, epsilon = 1e-9);
    }

    #[test]
    fn infeasible_problems_name_the_constraint() {
        let problem = DesignProblem {
            template: stretch(),
            objective: Objective::Minimize(SpecField::Mass),
            constraints: vec![payload_at_least(1000.0)],
            frozen: frozen_except(&[SpecField::Mass]),
            bounds: vec![],
        };
        match solve_design(&problem) {
            Err(Error::Infeasible { constraint }) => assert!(constraint.contains("payload")),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn maximize_reach_under_payload_floor() {
        let problem = DesignProblem {
            template: stretch(),
            objective: Objective::Maximize(SpecField::MaxReach),
            constraints: vec![payload_at_least(1.2)],
            frozen: frozen_except(&[SpecField::MaxReach]),
            bounds: vec![],
        };
        let solution = solve_design(&problem).unwrap();
        let s = stretch();
        let expected =
            (s.mass * s.com_from_rear / 1.2 - s.arm_setback) * s.track_width / (2.0 * s.wheelbase);
        assert_relative_eq!(solution.spec.max_reach, expected, epsilon = 1e-6);
    }

    #[test]
    fn pull_constraint_bisects_to_the_same_root_as_the_formula() {
        let problem = DesignProblem {
            template: stretch(),
            objective: Objective::Minimize(SpecField::Mass),
            constraints: vec![Constraint {
                kind: LoadKind::Pull,
                location: LoadLocation::Height(0.7),
                comparator: Comparator::AtLeast,
                value: 40.0,
            }],
            frozen: frozen_except(&[SpecField::Mass]),
            bounds: vec![],
        };
        let solution = solve_design(&problem).unwrap();
        let s = stretch();
        let expected =
            40.0 * 2.0 * 0.7 * s.wheelbase / (s.gravity * s.com_from_rear * s.track_width);
        assert_relative_eq!(solution.spec.mass, expected, epsilon = 1e-7);
    }

    #[test]
    fn two_free_fields_converge_to_the_pair_optimum() {
        let problem = DesignProblem {
            template: stretch(),
            objective: Objective::Minimize(SpecField::Mass),
            constraints: vec![payload_at_least(4.0)],
            frozen: frozen_except(&[SpecField::Mass, SpecField::TrackWidth]),
            bounds: vec![],
        };
        let solution = solve_design(&problem).unwrap();

        // Wider is strictly better for payload, so the width runs to its
        // upper bound and the mass to the analytic inverse there.
        let s = stretch();
        let w_hi = s.track_width * 10.0;
        let denom = s.arm_setback + 2.0 * s.wheelbase * s.max_reach / w_hi;
        let expected_mass = 4.0 * denom / s.com_from_rear;
        assert_relative_eq!(solution.spec.track_width, w_hi, epsilon = 1e-9);
        assert_relative_eq!(solution.spec.mass, expected_mass, epsilon = 1e-6);
        assert!(solution.reports[0].margin >= -1e-6);
    }

    #[test]
    fn unsupported_shapes_are_rejected() {
        let all_free = DesignProblem {
            template: stretch(),
            objective: Objective::Minimize(SpecField::Mass),
            constraints: vec![],
            frozen: vec![],
            bounds: vec![],
        };
        assert!(matches!(
            solve_design(&all_free),
            Err(Error::Unsupported(_))
        ));

        let bad_objective = DesignProblem {
            template: stretch(),
            objective: Objective::Maximize(SpecField::Mass),
            constraints: vec![],
            frozen: frozen_except(&[SpecField::Mass]),
            bounds: vec![],
        };
        assert!(matches!(
            solve_design(&bad_objective),
            Err(Error::Unsupported(_))
        ));

        let frozen_objective = DesignProblem {
            template: stretch(),
            objective: Objective::Minimize(SpecField::Mass),
            constraints: vec![],
            frozen: frozen_except(&[SpecField::TrackWidth]),
            bounds: vec![],
        };
        assert!(matches!(
            solve_design(&frozen_objective),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn explicit_bounds_override_the_default_interval() {
        let problem = DesignProblem {
            template: stretch(),
            objective: Objective::Minimize(SpecField::Mass),
            constraints: vec![payload_at_least(0.0)],
            frozen: frozen_except(&[SpecField::Mass]),
            bounds: vec![FieldBounds {
                field: SpecField::Mass,
                min: 10.0,
                max: 50.0,
            }],
        };
        let solution = solve_design(&problem).unwrap();
        assert_relative_eq!(solution.spec.mass, 10.0, epsilon = 1e-12);
    }

    #[test]
    fn maximize_payload_pushes_both_fields_to_their_payload_ends() {
        let problem = DesignProblem {
            template: stretch(),
            objective: Objective::MaximizePayload,
            constraints: vec![],
            frozen: frozen_except(&[SpecField::Mass, SpecField::MaxReach]),
            bounds: vec![
                FieldBounds {
                    field: SpecField::Mass,
                    min: 10.0,
                    max: 30.0,
                },
                FieldBounds {
                    field: SpecField::MaxReach,
                    min: 0.5,
                    max: 1.0,
                },
            ],
        };
        let solution = solve_design(&problem).unwrap();
        assert_relative_eq!(solution.spec.mass, 30.0, epsilon = 1e-12);
        assert_relative_eq!(solution.spec.max_reach, 0.5, epsilon = 1e-12);
        assert_relative_eq!(
            solution.objective_value,
            tri_max_payload(&solution.spec).unwrap(),
            epsilon = 1e-12
        );
    }
}
