//! Loading the three document kinds the tools exchange.
//!
//! Each document is a JSON object with a `schema` marker: `robotspec-v1`
//! for robot descriptions, `taskreq-v1` for task requirement manifests,
//! and `designproblem-v1` for design problems. Unknown keys are rejected
//! so typos fail loudly. Loading is structural only — a robot spec that
//! parses may still fail [`crate::robot::validate_spec`].

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::design::{
    Comparator, Constraint, DesignProblem, FieldBounds, Objective, SpecField,
};
use crate::error::{Error, Result};
use crate::feasibility::TaskRequirement;
use crate::geom::Vec3;
use crate::robot::{BodyLink, JointLimits, JointRange, RobotSpec};
use crate::statics::{LoadKind, LoadLocation};

pub const ROBOT_SPEC_SCHEMA: &str = "robotspec-v1";
pub const TASK_REQ_SCHEMA: &str = "taskreq-v1";
pub const DESIGN_PROBLEM_SCHEMA: &str = "designproblem-v1";

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

#[derive(Deserialize)]
struct SchemaProbe {
    schema: Option<String>,
}

fn check_schema(path: &Path, text: &str, expected: &'static str) -> Result<()> {
    let probe: SchemaProbe = parse(path, text)?;
    match probe.schema {
        Some(found) if found == expected => Ok(()),
        Some(found) => Err(Error::Schema {
            path: path.display().to_string(),
            expected,
            found,
        }),
        None => Err(Error::Parse {
            path: path.display().to_string(),
            detail: "missing \"schema\" field".to_string(),
        }),
    }
}

fn bad_field(path: &Path, detail: String) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        detail,
    }
}

const fn default_gravity() -> f64 {
    9.807
}

const fn default_segments() -> u32 {
    1
}

const fn default_arm_com_coeff() -> f64 {
    0.5
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkDoc {
    mass: f64,
    com: [f64; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LimitsDoc {
    q_a: Option<[f64; 2]>,
    q_l: Option<[f64; 2]>,
    wrist_yaw: Option<[f64; 2]>,
    wrist_pitch: Option<[f64; 2]>,
    wrist_roll: Option<[f64; 2]>,
    stow_yaw: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    #[allow(dead_code)]
    schema: String,
    m_r: f64,
    #[serde(default = "default_gravity")]
    g: f64,
    w: f64,
    l: f64,
    c: f64,
    t: f64,
    #[serde(rename = "D")]
    max_reach: f64,
    #[serde(rename = "H")]
    max_height: f64,
    #[serde(default = "default_segments")]
    n_segments: u32,
    #[serde(default)]
    m_arm: f64,
    #[serde(default)]
    base_links: Vec<LinkDoc>,
    #[serde(default)]
    joint_limits: Option<LimitsDoc>,
    #[serde(default = "default_arm_com_coeff")]
    arm_com_coeff: f64,
    #[serde(default)]
    reach_offset: f64,
    #[serde(default)]
    com_height: f64,
}

fn range(pair: [f64; 2]) -> JointRange<f64> {
    JointRange::new(pair[0], pair[1])
}

/// Loads a `robotspec-v1` file. Absent optional fields fall back to
/// defaults: standard gravity, one arm segment, lumped mass, full-travel
/// joint limits with a 330-degree wrist yaw stowing at its far end.
pub fn load_robot_spec(path: &Path) -> Result<RobotSpec<f64>> {
    let text = read(path)?;
    check_schema(path, &text, ROBOT_SPEC_SCHEMA)?;
    let doc: SpecDoc = parse(path, &text)?;

    let mut limits = JointLimits::defaults(doc.max_reach, doc.max_height);
    if let Some(given) = doc.joint_limits {
        if let Some(p) = given.q_a {
            limits.arm = range(p);
        }
        if let Some(p) = given.q_l {
            limits.lift = range(p);
        }
        if let Some(p) = given.wrist_yaw {
            limits.wrist_yaw = range(p);
        }
        if let Some(p) = given.wrist_pitch {
            limits.wrist_pitch = range(p);
        }
        if let Some(p) = given.wrist_roll {
            limits.wrist_roll = range(p);
        }
        if let Some(yaw) = given.stow_yaw {
            limits.stow_yaw = yaw;
        } else if given.wrist_yaw.is_some() {
            limits.stow_yaw = limits.wrist_yaw.max;
        }
    }

    Ok(RobotSpec {
        mass: doc.m_r,
        gravity: doc.g,
        track_width: doc.w,
        wheelbase: doc.l,
        com_from_rear: doc.c,
        arm_setback: doc.t,
        max_reach: doc.max_reach,
        max_height: doc.max_height,
        n_segments: doc.n_segments,
        arm_mass: doc.m_arm,
        base_links: doc
            .base_links
            .into_iter()
            .map(|l| BodyLink {
                mass: l.mass,
                com: Vec3::new(l.com[0], l.com[1], l.com[2]),
            })
            .collect(),
        joint_limits: limits,
        arm_com_coeff: doc.arm_com_coeff,
        reach_offset: doc.reach_offset,
        com_height: doc.com_height,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReqDoc {
    name: String,
    kind: LoadKind,
    magnitude: f64,
    #[serde(default)]
    height_m: Option<f64>,
    #[serde(default)]
    reach_m: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskDoc {
    #[allow(dead_code)]
    schema: String,
    requirements: Vec<ReqDoc>,
}

/// Loads a `taskreq-v1` manifest. Force requirements must give
/// `height_m`; payload requirements may give `reach_m` and default to
/// full reach.
pub fn load_task_manifest(path: &Path) -> Result<Vec<TaskRequirement<f64>>> {
    let text = read(path)?;
    check_schema(path, &text, TASK_REQ_SCHEMA)?;
    let doc: TaskDoc = parse(path, &text)?;

    doc.requirements
        .into_iter()
        .enumerate()
        .map(|(i, req)| {
            if !req.magnitude.is_finite() || req.magnitude < 0.0 {
                return Err(bad_field(
                    path,
                    format!("requirements[{i}].magnitude must be finite and >= 0"),
                ));
            }
            let location = match (req.kind, req.height_m, req.reach_m) {
                (LoadKind::Payload, None, None) => LoadLocation::FullReach,
                (LoadKind::Payload, None, Some(r)) => LoadLocation::Reach(r),
                (LoadKind::Payload, Some(_), _) => {
                    return Err(bad_field(
                        path,
                        format!("requirements[{i}]: payload takes reach_m, not height_m"),
                    ))
                }
                (_, Some(h), None) => LoadLocation::Height(h),
                (_, None, _) => {
                    return Err(bad_field(
                        path,
                        format!("requirements[{i}]: {} needs height_m", req.kind),
                    ))
                }
                (_, Some(_), Some(_)) => {
                    return Err(bad_field(
                        path,
                        format!("requirements[{i}]: give height_m or reach_m, not both"),
                    ))
                }
            };
            Ok(TaskRequirement {
                name: req.name,
                kind: req.kind,
                magnitude: req.magnitude,
                location,
            })
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectiveDoc {
    direction: String,
    target: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintDoc {
    kind: LoadKind,
    cmp: String,
    value: f64,
    #[serde(default)]
    at_height: Option<f64>,
    #[serde(default)]
    at_reach: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignDoc {
    #[allow(dead_code)]
    schema: String,
    objective: ObjectiveDoc,
    #[serde(default)]
    constraints: Vec<ConstraintDoc>,
    #[serde(default)]
    frozen: Vec<String>,
    #[serde(default)]
    bounds: std::collections::BTreeMap<String, [f64; 2]>,
}

/// Loads a `designproblem-v1` file and attaches the given template spec.
/// The file carries objective, constraints, frozen fields, and optional
/// per-field search bounds; the template supplies every frozen value.
pub fn load_design_problem(path: &Path, template: RobotSpec<f64>) -> Result<DesignProblem<f64>> {
    let text = read(path)?;
    check_schema(path, &text, DESIGN_PROBLEM_SCHEMA)?;
    let doc: DesignDoc = parse(path, &text)?;

    let objective = match (doc.objective.direction.as_str(), doc.objective.target.as_str()) {
        ("maximize", "payload") => Objective::MaximizePayload,
        ("minimize", "payload") => {
            return Err(bad_field(
                path,
                "objective: payload can only be maximized".to_string(),
            ))
        }
        (direction, target) => {
            let field = SpecField::from_key(target)
                .map_err(|_| bad_field(path, format!("objective.target {target:?} unknown")))?;
            match direction {
                "minimize" => Objective::Minimize(field),
                "maximize" => Objective::Maximize(field),
                other => {
                    return Err(bad_field(
                        path,
                        format!("objective.direction {other:?} must be minimize or maximize"),
                    ))
                }
            }
        }
    };

    let constraints = doc
        .constraints
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let comparator = match c.cmp.as_str() {
                ">=" => Comparator::AtLeast,
                "<=" => Comparator::AtMost,
                other => {
                    return Err(bad_field(
                        path,
                        format!("constraints[{i}].cmp {other:?} must be >= or <="),
                    ))
                }
            };
            let location = match (c.kind, c.at_height, c.at_reach) {
                (LoadKind::Payload, None, None) => LoadLocation::FullReach,
                (LoadKind::Payload, None, Some(r)) => LoadLocation::Reach(r),
                (LoadKind::Payload, Some(_), _) => {
                    return Err(bad_field(
                        path,
                        format!("constraints[{i}]: payload takes at_reach, not at_height"),
                    ))
                }
                (_, Some(h), None) => LoadLocation::Height(h),
                (_, None, _) => {
                    return Err(bad_field(
                        path,
                        format!("constraints[{i}]: {} needs at_height", c.kind),
                    ))
                }
                (_, Some(_), Some(_)) => {
                    return Err(bad_field(
                        path,
                        format!("constraints[{i}]: give at_height or at_reach, not both"),
                    ))
                }
            };
            Ok(Constraint {
                kind: c.kind,
                location,
                comparator,
                value: c.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let frozen = doc
        .frozen
        .iter()
        .map(|key| {
            SpecField::from_key(key)
                .map_err(|_| bad_field(path, format!("frozen field {key:?} unknown")))
        })
        .collect::<Result<Vec<_>>>()?;

    let bounds = doc
        .bounds
        .iter()
        .map(|(key, pair)| {
            let field = SpecField::from_key(key)
                .map_err(|_| bad_field(path, format!("bounds field {key:?} unknown")))?;
            Ok(FieldBounds {
                field,
                min: pair[0],
                max: pair[1],
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(DesignProblem {
        template,
        objective,
        constraints,
        frozen,
        bounds,
    })
}

/// Default stow yaw used when a file specifies no joint limits: the far
/// end of the default 330-degree wrist yaw range.
pub fn default_stow_yaw() -> f64 {
    250.0 * PI / 180.0
}
