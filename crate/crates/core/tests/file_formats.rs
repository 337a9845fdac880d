//! End-to-end checks on the shipped document files: they must load, agree
//! with the built-in reference robot, and drive the analysis they were
//! written for.

use std::path::{Path, PathBuf};

use tipstat::design::{solve_design, Objective, SpecField};
use tipstat::feasibility::check_manifest;
use tipstat::io::{load_design_problem, load_robot_spec, load_task_manifest};
use tipstat::robot::RobotSpec;
use tipstat::Error;

fn repo_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(name)
}

#[test]
fn shipped_robot_file_matches_the_builtin_reference() {
    let spec = load_robot_spec(&repo_file("stretch_re1.spec.json")).unwrap();
    let builtin: RobotSpec<f64> = RobotSpec::stretch_re1();
    assert_eq!(spec.mass, builtin.mass);
    assert_eq!(spec.gravity, builtin.gravity);
    assert_eq!(spec.track_width, builtin.track_width);
    assert_eq!(spec.wheelbase, builtin.wheelbase);
    assert_eq!(spec.com_from_rear, builtin.com_from_rear);
    assert_eq!(spec.arm_setback, builtin.arm_setback);
    assert_eq!(spec.max_reach, builtin.max_reach);
    assert_eq!(spec.max_height, builtin.max_height);
    assert_eq!(spec.n_segments, builtin.n_segments);
    assert_eq!(spec.joint_limits.arm.max, builtin.joint_limits.arm.max);
    assert_eq!(spec.joint_limits.stow_yaw, builtin.joint_limits.stow_yaw);
    assert!(tipstat::robot::validate_spec(&spec).is_valid());
}

#[test]
fn shipped_task_manifest_is_fully_covered_by_the_reference_robot() {
    let spec = load_robot_spec(&repo_file("stretch_re1.spec.json")).unwrap();
    let reqs = load_task_manifest(&repo_file("assistive_tasks.req.json")).unwrap();
    assert_eq!(reqs.len(), 3);

    let (verdicts, summary) = check_manifest(&spec, &reqs).unwrap();
    assert!(summary.all_passed(), "{verdicts:?}");
    assert_eq!(summary.passed, 3);

    let drawer = &verdicts[0];
    assert_eq!(drawer.requirement.name, "open kitchen drawer");
    assert!((drawer.margin - 13.83).abs() < 0.01, "margin {}", drawer.margin);
}

#[test]
fn shipped_design_problem_solves_to_the_expected_mass() {
    let template = load_robot_spec(&repo_file("stretch_re1.spec.json")).unwrap();
    let problem = load_design_problem(&repo_file("min_mass.design.json"), template).unwrap();
    assert_eq!(problem.objective, Objective::Minimize(SpecField::Mass));

    let solution = solve_design(&problem).unwrap();
    assert!(
        (solution.objective_value - 7.9518).abs() < 1e-3,
        "mass {}",
        solution.objective_value
    );
    assert_eq!(solution.reports.len(), 1);
    assert!(solution.reports[0].margin.abs() < 1e-6);
}

#[test]
fn documents_refuse_to_load_under_the_wrong_schema() {
    let err = load_robot_spec(&repo_file("assistive_tasks.req.json")).unwrap_err();
    match err {
        Error::Schema { expected, found, .. } => {
            assert_eq!(expected, "robotspec-v1");
            assert_eq!(found, "taskreq-v1");
        }
        other => panic!("expected schema error, got {other}"),
    }
    assert!(load_task_manifest(&repo_file("stretch_re1.spec.json")).is_err());
    assert!(
        load_design_problem(&repo_file("stretch_re1.spec.json"), RobotSpec::stretch_re1())
            .is_err()
    );
}
