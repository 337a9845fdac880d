//! Robot description, validation, support polygon, and mass aggregation.
//!
//! The body frame used everywhere in this crate has its origin at the rear
//! caster contact point, x pointing forward toward the drive axle, y pointing
//! toward the right drive wheel, and z up. The floor is z = 0.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::geom::{is_strictly_convex_ccw, Vec2, Vec3};
use crate::real::{scalar, to_f64, Real};

/// Inclusive travel range of a single joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointRange<R: Real> {
    pub min: R,
    pub max: R,
}

impl<R: Real> JointRange<R> {
    pub fn new(min: R, max: R) -> Self {
        JointRange { min, max }
    }

    pub fn contains(&self, x: R) -> bool {
        x >= self.min && x <= self.max
    }

    pub fn clamp(&self, x: R) -> R {
        if x < self.min {
            self.min
        } else if x > self.max {
            self.max
        } else {
            x
        }
    }
}

/// Joint travel limits. Prismatic ranges are in metres, wrist ranges in
/// radians. `stow_yaw` is the wrist yaw the tool is folded to for
/// navigation; it must lie inside `wrist_yaw`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLimits<R: Real> {
    pub arm: JointRange<R>,
    pub lift: JointRange<R>,
    pub wrist_yaw: JointRange<R>,
    pub wrist_pitch: JointRange<R>,
    pub wrist_roll: JointRange<R>,
    pub stow_yaw: R,
}

impl<R: Real> JointLimits<R> {
    /// Default limits for a robot with the given arm reach and lift height:
    /// full prismatic travel, a 330-degree wrist yaw range with the stow
    /// pose at its far end, and conservative pitch/roll ranges.
    pub fn defaults(max_reach: R, max_height: R) -> Self {
        let zero = R::zero();
        let yaw_min = scalar(-80.0 * PI / 180.0);
        let yaw_max = scalar(250.0 * PI / 180.0);
        JointLimits {
            arm: JointRange::new(zero, max_reach),
            lift: JointRange::new(zero, max_height),
            wrist_yaw: JointRange::new(yaw_min, yaw_max),
            wrist_pitch: JointRange::new(scalar(-FRAC_PI_2), scalar(FRAC_PI_4)),
            wrist_roll: JointRange::new(scalar(-PI), scalar(PI)),
            stow_yaw: yaw_max,
        }
    }
}

/// A rigid body of the mobile base with a fixed centre of mass in the body
/// frame. Used for the distributed mass model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyLink<R: Real> {
    pub mass: R,
    pub com: Vec3<R>,
}

/// Static description of a wheeled mobile manipulator: masses, support
/// geometry, and workspace extents. All lengths in metres, masses in
/// kilograms, `gravity` in m/s^2.
///
/// The support polygon is the triangle spanned by the two drive wheel
/// contacts and the rear caster contact: the drive axle lies `wheelbase`
/// ahead of the caster and the wheel contacts are `track_width` apart.
/// `com_from_rear` locates the robot's centre of mass on the centreline,
/// measured forward from the caster contact. `arm_setback` is how far
/// behind the axle line the arm leaves the body, and `max_reach` /
/// `max_height` bound the tool workspace beyond the right wheel and above
/// the floor.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotSpec<R: Real = f64> {
    pub mass: R,
    pub gravity: R,
    pub track_width: R,
    pub wheelbase: R,
    pub com_from_rear: R,
    pub arm_setback: R,
    pub max_reach: R,
    pub max_height: R,
    /// Number of telescoping arm segments.
    pub n_segments: u32,
    /// Mass of the arm assembly that rides on the lift carriage. Zero means
    /// the whole robot is treated as one lump at `com_from_rear`.
    pub arm_mass: R,
    /// Base bodies for the distributed mass model. When non-empty, their
    /// masses plus `arm_mass` must sum to `mass`.
    pub base_links: Vec<BodyLink<R>>,
    pub joint_limits: JointLimits<R>,
    /// Lateral travel of the arm's centre of mass per metre of extension.
    pub arm_com_coeff: R,
    /// Distance from the outer edge of the right wheel to its contact
    /// centre, added to commanded reach when computing tipping arms.
    pub reach_offset: R,
    /// Height of the robot's centre of mass with the arm lowered.
    pub com_height: R,
}

impl<R: Real> RobotSpec<R> {
    /// The measured Stretch RE1: 23 kg, 0.315 m track, 0.24 m wheelbase,
    /// centre of mass 0.16 m ahead of the caster, 5 mm arm setback,
    /// 0.6925 m reach beyond the right wheel, 1.125 m lift.
    pub fn stretch_re1() -> Self {
        let mut limits = JointLimits::defaults(scalar(0.6925), scalar(1.125));
        limits.arm = JointRange::new(R::zero(), scalar(0.52));
        RobotSpec {
            mass: scalar(23.0),
            gravity: scalar(9.807),
            track_width: scalar(0.315),
            wheelbase: scalar(0.24),
            com_from_rear: scalar(0.16),
            arm_setback: scalar(0.005),
            max_reach: scalar(0.6925),
            max_height: scalar(1.125),
            n_segments: 4,
            arm_mass: R::zero(),
            base_links: Vec::new(),
            joint_limits: limits,
            arm_com_coeff: scalar(0.5),
            reach_offset: R::zero(),
            com_height: R::zero(),
        }
    }

    /// Shorthand for validating and failing with [`Error::InvalidSpec`].
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate_spec(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(report))
        }
    }

    /// Reach of the arm measured from the right wheel contact centre, for a
    /// commanded reach beyond the wheel edge.
    pub(crate) fn effective_reach(&self, reach: R) -> R {
        reach + self.reach_offset
    }
}

/// Drive mode of the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Differential drive: the base translates and rotates freely, the arm
    /// is retracted and the tool stowed.
    Navigation,
    /// The base is restricted to forward/backward travel and acts as a
    /// Cartesian axis together with the lift and arm.
    Manipulation,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Navigation => f.write_str("navigation"),
            Mode::Manipulation => f.write_str("manipulation"),
        }
    }
}

/// Joint state of the robot. Prismatic values in metres, wrist angles in
/// radians. `base` is signed travel along the drive direction and is
/// unlimited.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Configuration<R: Real> {
    pub arm: R,
    pub lift: R,
    pub base: R,
    pub wrist_yaw: R,
    pub wrist_pitch: R,
    pub wrist_roll: R,
    pub mode: Mode,
}

impl<R: Real> Configuration<R> {
    /// All joints at zero, in manipulation mode.
    pub fn home() -> Self {
        Configuration {
            arm: R::zero(),
            lift: R::zero(),
            base: R::zero(),
            wrist_yaw: R::zero(),
            wrist_pitch: R::zero(),
            wrist_roll: R::zero(),
            mode: Mode::Manipulation,
        }
    }
}

/// One failed validation rule: the offending field and a human-readable
/// message such as `c must be < l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

/// Outcome of [`validate_spec`]: empty means the spec is usable by every
/// operation in this crate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    fn push(&mut self, field: &'static str, message: String) {
        self.violations.push(Violation { field, message });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            f.write_str(&v.message)?;
        }
        Ok(())
    }
}

/// Checks every structural rule a spec must satisfy and reports all
/// violations at once. Field names in messages are the names used in
/// `robotspec-v1` files.
pub fn validate_spec<R: Real>(spec: &RobotSpec<R>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let finite = [
        ("m_r", spec.mass),
        ("g", spec.gravity),
        ("w", spec.track_width),
        ("l", spec.wheelbase),
        ("c", spec.com_from_rear),
        ("t", spec.arm_setback),
        ("D", spec.max_reach),
        ("H", spec.max_height),
        ("m_arm", spec.arm_mass),
        ("arm_com_coeff", spec.arm_com_coeff),
        ("reach_offset", spec.reach_offset),
        ("com_height", spec.com_height),
    ];
    for (name, value) in finite {
        if !value.is_finite() {
            report.push(name, format!("{name} must be finite"));
        }
    }

    let zero = R::zero();
    if !(spec.mass > zero) {
        report.push("m_r", "m_r must be > 0".to_string());
    }
    if !(spec.gravity > zero) {
        report.push("g", "g must be > 0".to_string());
    }
    if !(spec.track_width > zero) {
        report.push("w", "w must be > 0".to_string());
    }
    if !(spec.wheelbase > zero) {
        report.push("l", "l must be > 0".to_string());
    }
    if !(spec.com_from_rear > zero) {
        report.push("c", "c must be > 0".to_string());
    }
    if !(spec.com_from_rear < spec.wheelbase) {
        report.push("c", "c must be < l".to_string());
    }
    if !(spec.arm_setback >= zero) {
        report.push("t", "t must be >= 0".to_string());
    }
    if !(spec.max_reach > zero) {
        report.push("D", "D must be > 0".to_string());
    }
    if !(spec.max_height > zero) {
        report.push("H", "H must be > 0".to_string());
    }
    if spec.n_segments == 0 {
        report.push("n_segments", "n_segments must be >= 1".to_string());
    }
    if !(spec.arm_mass >= zero) {
        report.push("m_arm", "m_arm must be >= 0".to_string());
    }
    if !(spec.arm_mass <= spec.mass) {
        report.push("m_arm", "m_arm must be <= m_r".to_string());
    }
    if !(spec.arm_com_coeff >= zero) {
        report.push("arm_com_coeff", "arm_com_coeff must be >= 0".to_string());
    }
    if !(spec.reach_offset >= zero) {
        report.push("reach_offset", "reach_offset must be >= 0".to_string());
    }
    if !(spec.com_height >= zero) {
        report.push("com_height", "com_height must be >= 0".to_string());
    }

    if !spec.base_links.is_empty() {
        let mut total = spec.arm_mass;
        for (i, link) in spec.base_links.iter().enumerate() {
            if !(link.mass >= zero) || !link.mass.is_finite() {
                report.push(
                    "base_links",
                    format!("base_links[{i}].mass must be >= 0 and finite"),
                );
            }
            if !link.com.is_finite() {
                report.push("base_links", format!("base_links[{i}].com must be finite"));
            }
            total = total + link.mass;
        }
        let gap = to_f64(total - spec.mass).abs();
        if !(gap <= 1e-6) {
            report.push(
                "base_links",
                "base_links masses + m_arm must sum to m_r (within 1e-6 kg)".to_string(),
            );
        }
    }

    let lim = &spec.joint_limits;
    let ranges = [
        ("q_a", lim.arm),
        ("q_l", lim.lift),
        ("wrist_yaw", lim.wrist_yaw),
        ("wrist_pitch", lim.wrist_pitch),
        ("wrist_roll", lim.wrist_roll),
    ];
    for (name, range) in ranges {
        if !range.min.is_finite() || !range.max.is_finite() || !(range.min <= range.max) {
            report.push(
                "joint_limits",
                format!("joint_limits.{name} must be a finite range with min <= max"),
            );
        }
    }
    if !(lim.arm.min >= zero) {
        report.push("joint_limits", "joint_limits.q_a min must be >= 0".to_string());
    }
    if !(lim.lift.min >= zero) {
        report.push("joint_limits", "joint_limits.q_l min must be >= 0".to_string());
    }
    if !(lim.lift.max <= spec.max_height) {
        report.push("joint_limits", "joint_limits.q_l max must be <= H".to_string());
    }
    if !lim.wrist_yaw.contains(lim.stow_yaw) {
        report.push(
            "joint_limits",
            "joint_limits.stow_yaw must lie within wrist_yaw".to_string(),
        );
    }

    report
}

/// Fails with [`Error::JointLimit`] if any joint in `config` is outside the
/// spec's limits or non-finite.
pub fn validate_config<R: Real>(spec: &RobotSpec<R>, config: &Configuration<R>) -> Result<()> {
    let lim = &spec.joint_limits;
    let joints = [
        ("q_a", config.arm, lim.arm),
        ("q_l", config.lift, lim.lift),
        ("wrist_yaw", config.wrist_yaw, lim.wrist_yaw),
        ("wrist_pitch", config.wrist_pitch, lim.wrist_pitch),
        ("wrist_roll", config.wrist_roll, lim.wrist_roll),
    ];
    for (joint, value, range) in joints {
        if !value.is_finite() || !range.contains(value) {
            return Err(Error::JointLimit {
                joint,
                value: to_f64(value),
                min: to_f64(range.min),
                max: to_f64(range.max),
            });
        }
    }
    if !config.base.is_finite() {
        return Err(Error::NonFinite { what: "q_m" });
    }
    Ok(())
}

/// A strictly convex polygon of ground contact points, counterclockwise in
/// the floor plane (seen from above). Edge `i` joins vertex `i` to vertex
/// `i + 1` (wrapping).
#[derive(Debug, Clone, PartialEq)]
pub struct SupportPolygon<R: Real> {
    vertices: Vec<Vec2<R>>,
}

impl<R: Real> SupportPolygon<R> {
    /// Builds a polygon from contact points, rejecting anything that is not
    /// strictly convex and counterclockwise.
    pub fn new(vertices: Vec<Vec2<R>>) -> Result<Self> {
        for v in &vertices {
            if !v.x.is_finite() || !v.y.is_finite() {
                return Err(Error::NonFinite {
                    what: "polygon vertex",
                });
            }
        }
        if vertices.len() < 3 {
            return Err(Error::Polygon {
                detail: format!("need at least 3 vertices, got {}", vertices.len()),
            });
        }
        if !is_strictly_convex_ccw(&vertices) {
            return Err(Error::Polygon {
                detail: "vertices must be strictly convex and counterclockwise".to_string(),
            });
        }
        Ok(SupportPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Vec2<R>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Endpoints of edge `i` in counterclockwise order.
    pub fn edge(&self, i: usize) -> (Vec2<R>, Vec2<R>) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    /// Half the apex angle at vertex 0. For the wheel triangle this is the
    /// angle between the centreline and either side edge, `atan(w / 2l)`.
    pub fn apex_half_angle(&self) -> R {
        let apex = self.vertices[0];
        let a = self.vertices[1].sub(apex);
        let b = self.vertices[self.vertices.len() - 1].sub(apex);
        let cos_full = a.dot(b) / (a.norm() * b.norm());
        let clamped = cos_full.min(R::one()).max(-R::one());
        clamped.acos() / scalar(2.0)
    }

    /// True if `p` is inside the polygon or on its boundary.
    pub fn contains(&self, p: Vec2<R>) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            if b.sub(a).cross(p.sub(a)) < R::zero() {
                return false;
            }
        }
        true
    }
}

/// Index of the rear-to-left edge of the wheel triangle (the left flank).
pub const EDGE_LEFT: usize = 0;
/// Index of the drive axle edge (the front of the triangle).
pub const EDGE_FRONT: usize = 1;
/// Index of the right-to-rear edge (the right flank, toward the arm side).
pub const EDGE_RIGHT: usize = 2;

/// Support triangle of a spec in the body frame: caster contact at the
/// origin, drive wheel contacts at x = l, y = -w/2 (left) and y = +w/2
/// (right). Vertices are ordered caster, left, right so the winding is
/// counterclockwise; [`EDGE_RIGHT`] is the edge the arm's loads tip about.
pub fn support_polygon<R: Real>(spec: &RobotSpec<R>) -> Result<SupportPolygon<R>> {
    spec.ensure_valid()?;
    let half = spec.track_width / scalar(2.0);
    SupportPolygon::new(vec![
        Vec2::new(R::zero(), R::zero()),
        Vec2::new(spec.wheelbase, -half),
        Vec2::new(spec.wheelbase, half),
    ])
}

/// Total mass and centre of mass position in the body frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComEstimate<R: Real> {
    pub mass: R,
    pub position: Vec3<R>,
}

/// Centre of mass of the whole robot in configuration `config`.
///
/// The arm lump (`m_arm`) rides the lift at height `q_l` and drifts
/// sideways by `arm_com_coeff * q_a` as the arm extends; its longitudinal
/// station is the arm axis, `l - t`. The remaining mass either sits at the
/// spec's lumped centre (`c` on the centreline at `com_height`) or, when
/// `base_links` is given, is the weighted combination of those bodies. With
/// everything retracted the aggregate reduces to the lumped centre exactly.
pub fn aggregate_com<R: Real>(spec: &RobotSpec<R>, config: &Configuration<R>) -> Result<ComEstimate<R>> {
    spec.ensure_valid()?;
    validate_config(spec, config)?;

    let arm_pos = Vec3::new(
        spec.wheelbase - spec.arm_setback,
        spec.arm_com_coeff * config.arm,
        config.lift,
    );

    let mut moment = arm_pos.scale(spec.arm_mass);
    if spec.base_links.is_empty() {
        let rest = spec.mass - spec.arm_mass;
        if rest > R::zero() {
            // Place the base lump so the retracted robot's centre of mass
            // is (c, 0, com_height) regardless of how much mass is on the
            // arm.
            let base_x = (spec.mass * spec.com_from_rear - spec.arm_mass * arm_pos.x) / rest;
            let base_z = spec.mass * spec.com_height / rest;
            moment = moment.add(Vec3::new(base_x, R::zero(), base_z).scale(rest));
        }
    } else {
        for link in &spec.base_links {
            moment = moment.add(link.com.scale(link.mass));
        }
    }

    Ok(ComEstimate {
        mass: spec.mass,
        position: moment.scale(R::one() / spec.mass),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stretch_spec_is_valid() {
        let spec = RobotSpec::<f64>::stretch_re1();
        let report = validate_spec(&spec);
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn com_ahead_of_wheelbase_is_rejected() {
        let mut spec = RobotSpec::<f64>::stretch_re1();
        spec.com_from_rear = spec.wheelbase;
        let report = validate_spec(&spec);
        assert!(!report.is_valid());
        assert!(report.violations().iter().any(|v| v.message == "c must be < l"));
    }

    #[test]
    fn nonpositive_mass_is_rejected() {
        let mut spec = RobotSpec::<f64>::stretch_re1();
        spec.mass = 0.0;
        let report = validate_spec(&spec);
        assert!(report
            .violations()
            .iter()
            .any(|v| v.message == "m_r must be > 0"));

        spec.mass = f64::NAN;
        assert!(!validate_spec(&spec).is_valid());
    }

    #[test]
    fn base_link_masses_must_sum_to_total() {
        let mut spec = RobotSpec::<f64>::stretch_re1();
        spec.arm_mass = 3.0;
        spec.base_links = vec![BodyLink {
            mass: 19.0,
            com: Vec3::new(0.1, 0.0, 0.2),
        }];
        let report = validate_spec(&spec);
        assert!(report.violations().iter().any(|v| v.field == "base_links"));

        spec.base_links[0].mass = 20.0;
        assert!(validate_spec(&spec).is_valid());
    }

    #[test]
    fn lift_limit_above_max_height_is_rejected() {
        let mut spec = RobotSpec::<f64>::stretch_re1();
        spec.joint_limits.lift.max = spec.max_height + 0.1;
        let report = validate_spec(&spec);
        assert!(report.violations().iter().any(|v| v.field == "joint_limits"));
    }

    #[test]
    fn support_polygon_matches_wheel_geometry() {
        let spec = RobotSpec::<f64>::stretch_re1();
        let poly = support_polygon(&spec).unwrap();
        assert_eq!(poly.len(), 3);
        assert_eq!(poly.vertices()[0], Vec2::new(0.0, 0.0));
        assert_eq!(poly.vertices()[1], Vec2::new(0.24, -0.1575));
        assert_eq!(poly.vertices()[2], Vec2::new(0.24, 0.1575));

        let alpha = poly.apex_half_angle();
        let expected = (0.315f64 / (2.0 * 0.24)).atan();
        assert_relative_eq!(alpha, expected, epsilon = 1e-12);
        assert_relative_eq!(alpha.to_degrees(), 33.27, epsilon = 5e-3);
    }

    #[test]
    fn support_polygon_rejects_invalid_spec() {
        let mut spec = RobotSpec::<f64>::stretch_re1();
        spec.track_width = -1.0;
        assert!(matches!(
            support_polygon(&spec),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn polygon_containment() {
        let spec = RobotSpec::<f64>::stretch_re1();
        let poly = support_polygon(&spec).unwrap();
        assert!(poly.contains(Vec2::new(0.16, 0.0)));
        assert!(poly.contains(Vec2::new(0.0, 0.0)));
        assert!(!poly.contains(Vec2::new(0.16, 0.2)));
        assert!(!poly.contains(Vec2::new(-0.01, 0.0)));
    }

    #[test]
    fn lumped_com_sits_at_spec_centre() {
        let spec = RobotSpec::<f64>::stretch_re1();
        let com = aggregate_com(&spec, &Configuration::home()).unwrap();
        assert_eq!(com.mass, 23.0);
        assert_relative_eq!(com.position.x, 0.16, epsilon = 1e-15);
        assert_eq!(com.position.y, 0.0);
        assert_eq!(com.position.z, 0.0);
    }

    #[test]
    fn arm_extension_drifts_com_sideways() {
        let mut spec = RobotSpec::<f64>::stretch_re1();
        spec.arm_mass = 2.3;

        let mut config = Configuration::home();
        config.arm = 0.4;
        config.lift = 0.6;
        let com = aggregate_com(&spec, &config).unwrap();

        // One tenth of the mass rides the arm: y = 0.1 * 0.5 * 0.4.
        assert_relative_eq!(com.position.y, 0.02, epsilon = 1e-12);
        assert_relative_eq!(com.position.z, 0.1 * 0.6, epsilon = 1e-12);
        // Retracting restores the lumped centre.
        let home = aggregate_com(&spec, &Configuration::home()).unwrap();
        assert_relative_eq!(home.position.x, 0.16, epsilon = 1e-12);
        assert_relative_eq!(home.position.y, 0.0, epsilon = 1e-15);
        assert_relative_eq!(home.position.z, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn distributed_links_average_like_point_masses() {
        let mut spec = RobotSpec::<f64>::stretch_re1();
        spec.arm_mass = 3.0;
        spec.base_links = vec![
            BodyLink {
                mass: 12.0,
                com: Vec3::new(0.10, -0.02, 0.15),
            },
            BodyLink {
                mass: 8.0,
                com: Vec3::new(0.20, 0.03, 0.30),
            },
        ];
        let mut config = Configuration::home();
        config.arm = 0.2;
        config.lift = 0.5;
        let com = aggregate_com(&spec, &config).unwrap();

        let arm = Vec3::new(0.24 - 0.005, 0.5 * 0.2, 0.5);
        let expected = Vec3::new(
            (12.0 * 0.10 + 8.0 * 0.20 + 3.0 * arm.x) / 23.0,
            (12.0 * -0.02 + 8.0 * 0.03 + 3.0 * arm.y) / 23.0,
            (12.0 * 0.15 + 8.0 * 0.30 + 3.0 * arm.z) / 23.0,
        );
        assert_relative_eq!(com.position.x, expected.x, epsilon = 1e-12);
        assert_relative_eq!(com.position.y, expected.y, epsilon = 1e-12);
        assert_relative_eq!(com.position.z, expected.z, epsilon = 1e-12);
    }

    #[test]
    fn com_requires_config_within_limits() {
        let spec = RobotSpec::<f64>::stretch_re1();
        let mut config = Configuration::home();
        config.arm = 0.7;
        let err = aggregate_com(&spec, &config).unwrap_err();
        assert!(matches!(err, Error::JointLimit { joint: "q_a", .. }), "{err}");
    }
}
