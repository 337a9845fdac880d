//! Task feasibility: comparing required loads against the capability
//! envelope.

use std::fmt;

use crate::error::Result;
use crate::real::Real;
use crate::robot::RobotSpec;
use crate::statics::{capability, Capability, LoadKind, LoadLocation};

/// One task load requirement: e.g. "open drawer" needs a 20 N pull at
/// 0.7 m. Payload requirements are in kilograms, forces in newtons.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskRequirement<R: Real> {
    pub name: String,
    pub kind: LoadKind,
    pub magnitude: R,
    pub location: LoadLocation<R>,
}

impl<R: Real> fmt::Display for TaskRequirement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} at {}",
            self.name,
            self.kind,
            crate::format::fmt_scalar(self.magnitude),
            self.kind.unit(),
            self.location
        )
    }
}

/// Outcome of checking one requirement: the robot's capability at the
/// requirement's location and the slack `capability - magnitude`. A
/// requirement outside the workspace fails as unreachable with zero
/// capability.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityVerdict<R: Real> {
    pub requirement: TaskRequirement<R>,
    pub capability: Capability<R>,
    pub margin: R,
    pub pass: bool,
    pub reason: Option<&'static str>,
}

/// Pass/fail counts over a manifest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FeasibilitySummary {
    pub passed: usize,
    pub failed: usize,
}

impl FeasibilitySummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Checks one requirement against the spec's closed-form capability.
/// Fails only with an invalid spec; an unreachable or unevaluable
/// requirement becomes a failed verdict, not an error.
pub fn check_task<R: Real>(
    spec: &RobotSpec<R>,
    req: &TaskRequirement<R>,
) -> Result<FeasibilityVerdict<R>> {
    spec.ensure_valid()?;
    let magnitude_ok = req.magnitude.is_finite() && req.magnitude >= R::zero();

    let (capability, pass, margin, reason) = if !magnitude_ok {
        (
            Capability::Finite(R::zero()),
            false,
            R::nan(),
            Some("invalid magnitude"),
        )
    } else {
        match capability(spec, req.kind, req.location) {
            Ok(cap) => {
                let margin = cap.or_infinity() - req.magnitude;
                (cap, margin >= R::zero(), margin, None)
            }
            Err(_) => (
                Capability::Finite(R::zero()),
                false,
                -req.magnitude,
                Some("unreachable"),
            ),
        }
    };

    Ok(FeasibilityVerdict {
        requirement: req.clone(),
        capability,
        margin,
        pass,
        reason,
    })
}

/// Checks every requirement in input order and tallies passes and fails.
pub fn check_manifest<R: Real>(
    spec: &RobotSpec<R>,
    reqs: &[TaskRequirement<R>],
) -> Result<(Vec<FeasibilityVerdict<R>>, FeasibilitySummary)> {
    let mut verdicts = Vec::with_capacity(reqs.len());
    let mut summary = FeasibilitySummary::default();
    for req in reqs {
        let verdict = check_task(spec, req)?;
        if verdict.pass {
            summary.passed += 1;
        } else {
            summary.failed += 1;
        }
        verdicts.push(verdict);
    }
    Ok((verdicts, summary))
}
