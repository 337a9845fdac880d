//! Cartesian kinematics of the arm/base/lift triple and mode-transition
//! sequencing.
//!
//! With the base restricted to forward/backward travel, arm extension,
//! base travel, and lift height form three orthogonal prismatic axes, so
//! the Cartesian map is the identity and the Jacobian is the identity
//! matrix. The value of the module is in the bookkeeping around that map:
//! limit checking, workspace bounds, and the choreography for switching
//! between navigation and manipulation.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::real::{scalar, to_f64, Real};
use crate::robot::{validate_config, Configuration, Mode, RobotSpec};

/// Tool position in the manipulation frame: `x` is reach out from the
/// base (arm axis), `y` lateral travel (drive axis), `z` height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndEffectorPose<R: Real> {
    pub x: R,
    pub y: R,
    pub z: R,
}

impl<R: Real> EndEffectorPose<R> {
    pub fn new(x: R, y: R, z: R) -> Self {
        EndEffectorPose { x, y, z }
    }
}

/// One Cartesian extent of the workspace box. Width is unbounded because
/// the base can drive indefinitely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extent<R: Real> {
    Bounded(R),
    Unbounded,
}

impl<R: Real> fmt::Display for Extent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Bounded(x) => write!(f, "{x}"),
            Extent::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Axis-aligned bounds of the reachable Cartesian volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkspaceBox<R: Real> {
    pub height: R,
    pub depth: R,
    pub width: Extent<R>,
}

/// Tool frame position for a configuration: `(q_a, q_m, q_l)` maps
/// identically to `(x, y, z)`.
pub fn forward_kinematics<R: Real>(
    spec: &RobotSpec<R>,
    config: &Configuration<R>,
) -> Result<EndEffectorPose<R>> {
    spec.ensure_valid()?;
    validate_config(spec, config)?;
    Ok(EndEffectorPose::new(config.arm, config.base, config.lift))
}

/// Jacobian of [`forward_kinematics`] with respect to `(q_a, q_m, q_l)`:
/// the identity matrix for every configuration.
pub fn jacobian<R: Real>(_config: &Configuration<R>) -> [[R; 3]; 3] {
    let o = R::zero();
    let i = R::one();
    [[i, o, o], [o, i, o], [o, o, i]]
}

/// The configuration reaching `pose`, i.e. the inverse of the identity
/// map, with joint limits enforced. The lateral axis is unbounded; reach
/// and height must lie within the arm and lift travel. Wrist angles are
/// set to zero (clamped into their ranges) and the mode to manipulation.
pub fn inverse_kinematics<R: Real>(
    spec: &RobotSpec<R>,
    pose: &EndEffectorPose<R>,
) -> Result<Configuration<R>> {
    spec.ensure_valid()?;
    for (axis, value) in [("x_e", pose.x), ("y_e", pose.y), ("z_e", pose.z)] {
        if !value.is_finite() {
            return Err(Error::NonFinite { what: axis });
        }
    }

    let lim = &spec.joint_limits;
    if pose.x < lim.arm.min {
        return Err(Error::PoseBelowMin {
            axis: "x_e",
            value: to_f64(pose.x),
            min: to_f64(lim.arm.min),
        });
    }
    if pose.x > lim.arm.max {
        return Err(Error::PoseAboveMax {
            axis: "x_e",
            value: to_f64(pose.x),
            max: to_f64(lim.arm.max),
            bound_name: "max extension",
        });
    }
    if pose.z < lim.lift.min {
        return Err(Error::PoseBelowMin {
            axis: "z_e",
            value: to_f64(pose.z),
            min: to_f64(lim.lift.min),
        });
    }
    if pose.z > lim.lift.max {
        let bound_name = if lim.lift.max == spec.max_height {
            "H"
        } else {
            "max lift"
        };
        return Err(Error::PoseAboveMax {
            axis: "z_e",
            value: to_f64(pose.z),
            max: to_f64(lim.lift.max),
            bound_name,
        });
    }

    Ok(Configuration {
        arm: pose.x,
        lift: pose.z,
        base: pose.y,
        wrist_yaw: lim.wrist_yaw.clamp(R::zero()),
        wrist_pitch: lim.wrist_pitch.clamp(R::zero()),
        wrist_roll: lim.wrist_roll.clamp(R::zero()),
        mode: Mode::Manipulation,
    })
}

/// Cartesian workspace bounds of a spec: height and depth from the spec,
/// width unbounded.
pub fn workspace_box<R: Real>(spec: &RobotSpec<R>) -> Result<WorkspaceBox<R>> {
    spec.ensure_valid()?;
    Ok(WorkspaceBox {
        height: spec.max_height,
        depth: spec.max_reach,
        width: Extent::Unbounded,
    })
}

/// One step of a mode transition, with the joint or tool target it moves
/// to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Action<R: Real> {
    /// Turn the base in place by the given angle, rad.
    RotateBase { angle: R },
    /// Move the lift to the given height, m.
    LiftArm { target: R },
    /// Extend the arm to the given length, m.
    ExtendArm { target: R },
    /// Retract the arm to the given length, m.
    RetractArm { target: R },
    /// Fold the tool to the given wrist yaw, rad.
    StowTool { yaw: R },
    /// Swing the tool out to the given wrist yaw, rad.
    DeployTool { yaw: R },
    /// Turn the head camera to the given pan angle, rad.
    PanHead { angle: R },
}

impl<R: Real> Action<R> {
    pub fn name(&self) -> &'static str {
        match self {
            Action::RotateBase { .. } => "rotate_base",
            Action::LiftArm { .. } => "lift_arm",
            Action::ExtendArm { .. } => "extend_arm",
            Action::RetractArm { .. } => "retract_arm",
            Action::StowTool { .. } => "stow_tool",
            Action::DeployTool { .. } => "deploy_tool",
            Action::PanHead { .. } => "pan_head",
        }
    }
}

/// Ordered action sequence switching the robot between navigation and
/// manipulation. Plans into navigation end with the arm retracted to zero
/// and the tool stowed so nothing pokes out of the base footprint; plans
/// into manipulation deploy the tool before the arm extends.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionPlan<R: Real> {
    pub actions: Vec<Action<R>>,
    pub target_mode: Mode,
}

impl<R: Real> TransitionPlan<R> {
    /// Applies the plan's joint targets to `start`, yielding the
    /// configuration after execution. Base rotation and head pan do not
    /// appear in [`Configuration`] and leave it unchanged.
    pub fn resulting_config(&self, start: &Configuration<R>) -> Configuration<R> {
        let mut config = *start;
        for action in &self.actions {
            match *action {
                Action::LiftArm { target } => config.lift = target,
                Action::ExtendArm { target } | Action::RetractArm { target } => {
                    config.arm = target
                }
                Action::StowTool { yaw } | Action::DeployTool { yaw } => config.wrist_yaw = yaw,
                Action::RotateBase { .. } | Action::PanHead { .. } => {}
            }
        }
        config.mode = self.target_mode;
        config
    }
}

/// Plans the action sequence from `config`'s mode to `target`.
///
/// Into manipulation: rotate the base so the arm faces the work, deploy
/// the tool, then lift and extend (targets keep the current joint values —
/// the caller retargets them for the task). Into navigation: retract the
/// arm fully, stow the tool at the spec's stow yaw, optionally move the
/// lift to `travel_height`, and recentre the head. Same mode: empty plan.
pub fn plan_mode_transition<R: Real>(
    spec: &RobotSpec<R>,
    config: &Configuration<R>,
    target: Mode,
    travel_height: Option<R>,
) -> Result<TransitionPlan<R>> {
    spec.ensure_valid()?;
    validate_config(spec, config)?;

    if config.mode == target {
        return Ok(TransitionPlan {
            actions: Vec::new(),
            target_mode: target,
        });
    }

    let quarter_turn = scalar::<R>(FRAC_PI_2);
    let deploy_yaw = spec.joint_limits.wrist_yaw.clamp(R::zero());
    let actions = match target {
        Mode::Manipulation => vec![
            Action::RotateBase {
                angle: quarter_turn,
            },
            Action::DeployTool { yaw: deploy_yaw },
            Action::LiftArm {
                target: config.lift,
            },
            Action::ExtendArm { target: config.arm },
            Action::PanHead {
                angle: -quarter_turn,
            },
        ],
        Mode::Navigation => {
            let mut seq = vec![
                Action::RetractArm { target: R::zero() },
                Action::StowTool {
                    yaw: spec.joint_limits.stow_yaw,
                },
            ];
            if let Some(h) = travel_height {
                if !h.is_finite() || !spec.joint_limits.lift.contains(h) {
                    return Err(Error::JointLimit {
                        joint: "q_l",
                        value: to_f64(h),
                        min: to_f64(spec.joint_limits.lift.min),
                        max: to_f64(spec.joint_limits.lift.max),
                    });
                }
                seq.push(Action::LiftArm { target: h });
            }
            seq.push(Action::PanHead { angle: R::zero() });
            seq
        }
    };

    Ok(TransitionPlan {
        actions,
        target_mode: target,
    })
}
