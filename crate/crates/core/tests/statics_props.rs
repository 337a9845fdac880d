//! Property tests for the tipping engine: the closed-form limits must sit
//! exactly on the zero-margin boundary, the general edge-moment loop must
//! agree with an independent planar decomposition, and the predictions
//! must respect the obvious monotonicities and invariances.

use proptest::prelude::*;

use tipstat::geom::{Vec2, Vec3};
use tipstat::robot::{
    aggregate_com, support_polygon, Configuration, JointLimits, RobotSpec, SupportPolygon,
    EDGE_FRONT, EDGE_RIGHT,
};
use tipstat::statics::{
    capability, payload_at_reach, planar_max_payload, planar_max_pull, planar_max_push, tip_margin,
    tri_backpush, tri_max_payload, tri_max_pull_push, AppliedLoad, PlanarCase,
};
use tipstat::{LoadKind, LoadLocation};

fn arb_spec() -> impl Strategy<Value = RobotSpec<f64>> {
    (
        2.0..60.0f64,   // total mass
        0.1..0.8f64,    // track width
        0.1..0.8f64,    // wheelbase
        0.05..0.95f64,  // fore-aft COM as a fraction of the wheelbase
        0.0..0.08f64,   // arm setback behind the axle
        0.2..1.2f64,    // max reach
        0.5..1.5f64,    // max height
    )
        .prop_map(|(m, w, l, cf, t, d, h)| {
            let mut spec = RobotSpec::stretch_re1();
            spec.mass = m;
            spec.track_width = w;
            spec.wheelbase = l;
            spec.com_from_rear = cf * l;
            spec.arm_setback = t;
            spec.max_reach = d;
            spec.max_height = h;
            spec.joint_limits = JointLimits::defaults(d, h);
            spec
        })
        .prop_filter("setback must stay behind the axle", |s| {
            s.arm_setback < s.wheelbase
        })
}

fn com(spec: &RobotSpec<f64>) -> tipstat::robot::ComEstimate<f64> {
    aggregate_com(spec, &Configuration::home()).unwrap()
}

proptest! {
    #[test]
    fn pull_limit_times_height_is_constant(spec in arb_spec(), a in 0.05..1.0f64, b in 0.05..1.0f64) {
        let h1 = a * spec.max_height;
        let h2 = b * spec.max_height;
        let f1 = tri_max_pull_push(&spec, h1).unwrap().finite().unwrap();
        let f2 = tri_max_pull_push(&spec, h2).unwrap().finite().unwrap();
        let rel = (f1 * h1 - f2 * h2).abs() / (f1 * h1);
        prop_assert!(rel < 1e-9, "f*h drifted by {rel}");
    }

    #[test]
    fn pull_limit_is_nonincreasing_in_height(spec in arb_spec(), a in 0.05..1.0f64, b in 0.05..1.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let f_lo = tri_max_pull_push(&spec, lo * spec.max_height).unwrap().finite().unwrap();
        let f_hi = tri_max_pull_push(&spec, hi * spec.max_height).unwrap().finite().unwrap();
        prop_assert!(f_lo >= f_hi);
    }

    #[test]
    fn payload_limit_is_nonincreasing_in_reach(spec in arb_spec(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let m_lo = payload_at_reach(&spec, lo * spec.max_reach).unwrap().or_infinity();
        let m_hi = payload_at_reach(&spec, hi * spec.max_reach).unwrap().or_infinity();
        prop_assert!(m_lo >= m_hi);
    }

    #[test]
    fn payload_limit_sits_on_the_tipping_boundary(spec in arb_spec(), z in 0.0..1.0f64) {
        let poly = support_polygon(&spec).unwrap();
        let m = tri_max_payload(&spec).unwrap();
        let point = Vec3::new(
            spec.wheelbase - spec.arm_setback,
            spec.track_width / 2.0 + spec.max_reach,
            z * spec.max_height,
        );
        let analysis = tip_margin(&poly, &com(&spec), &AppliedLoad::mass_at(m, point), spec.gravity).unwrap();
        prop_assert_eq!(analysis.binding_edge, EDGE_RIGHT);
        prop_assert!(analysis.margin.abs() < 1e-9, "margin {}", analysis.margin);
    }

    #[test]
    fn pull_limit_sits_on_the_tipping_boundary(spec in arb_spec(), a in 0.05..1.0f64, y in 0.0..0.5f64) {
        let poly = support_polygon(&spec).unwrap();
        let h = a * spec.max_height;
        let f = tri_max_pull_push(&spec, h).unwrap().finite().unwrap();
        let load = AppliedLoad::force_at(
            Vec3::new(0.0, f, 0.0),
            Vec3::new(spec.wheelbase - spec.arm_setback, y, h),
        );
        let analysis = tip_margin(&poly, &com(&spec), &load, spec.gravity).unwrap();
        prop_assert!(analysis.margin.abs() < 1e-9, "margin {}", analysis.margin);
    }

    #[test]
    fn backpush_limit_sits_on_the_tipping_boundary(spec in arb_spec(), a in 0.05..1.0f64) {
        let poly = support_polygon(&spec).unwrap();
        let h = a * spec.max_height;
        let f = tri_backpush(&spec, h).unwrap().finite().unwrap();
        let load = AppliedLoad::force_at(Vec3::new(f, 0.0, 0.0), Vec3::new(-0.05, 0.0, h));
        let analysis = tip_margin(&poly, &com(&spec), &load, spec.gravity).unwrap();
        prop_assert_eq!(analysis.binding_edge, EDGE_FRONT);
        prop_assert!(analysis.margin.abs() < 1e-9, "margin {}", analysis.margin);
    }

    #[test]
    fn margins_are_invariant_under_rigid_motions(
        spec in arb_spec(),
        theta in 0.0..std::f64::consts::TAU,
        tx in -5.0..5.0f64,
        ty in -5.0..5.0f64,
        fy in -40.0..40.0f64,
        h in 0.1..1.0f64,
    ) {
        let poly = support_polygon(&spec).unwrap();
        let body_com = com(&spec);
        let load = AppliedLoad::force_at(
            Vec3::new(0.0, fy, 0.0),
            Vec3::new(spec.wheelbase, 0.2, h),
        );
        let base = tip_margin(&poly, &body_com, &load, spec.gravity).unwrap();

        let (sin, cos) = theta.sin_cos();
        let rot2 = |p: Vec2<f64>| Vec2::new(cos * p.x - sin * p.y + tx, sin * p.x + cos * p.y + ty);
        let rot3 = |p: Vec3<f64>| Vec3::new(cos * p.x - sin * p.y + tx, sin * p.x + cos * p.y + ty, p.z);
        let rotv = |v: Vec3<f64>| Vec3::new(cos * v.x - sin * v.y, sin * v.x + cos * v.y, v.z);

        let moved_poly = SupportPolygon::new(
            poly.vertices().iter().copied().map(rot2).collect(),
        ).unwrap();
        let moved_com = tipstat::robot::ComEstimate {
            mass: body_com.mass,
            position: rot3(body_com.position),
        };
        let moved_load = AppliedLoad::force_at(
            rotv(Vec3::new(0.0, fy, 0.0)),
            rot3(Vec3::new(spec.wheelbase, 0.2, h)),
        );
        let moved = tip_margin(&moved_poly, &moved_com, &moved_load, spec.gravity).unwrap();

        prop_assert_eq!(moved.binding_edge, base.binding_edge);
        let scale = base.margin.abs().max(1.0);
        prop_assert!((moved.margin - base.margin).abs() / scale < 1e-9,
            "margin changed: {} vs {}", base.margin, moved.margin);
    }

    #[test]
    fn edge_moments_match_planar_decomposition(
        rx in 0.2..1.0f64,
        ry in 0.2..1.0f64,
        mass in 1.0..50.0f64,
        cx in -0.05..0.05f64,
        cy in -0.05..0.05f64,
        cz in 0.0..1.0f64,
        fx in -30.0..30.0f64,
        fy in -30.0..30.0f64,
        fz in -30.0..30.0f64,
        px in -0.5..0.5f64,
        py in -0.5..0.5f64,
        pz in 0.0..1.2f64,
        attached in 0.0..5.0f64,
    ) {
        // Four points on an ellipse, in angle order: strictly convex, CCW.
        let angles = [0.3f64, 1.8, 3.4, 5.1];
        let verts: Vec<Vec2<f64>> =
            angles.iter().map(|&a| Vec2::new(rx * a.cos(), ry * a.sin())).collect();
        let poly = SupportPolygon::new(verts.clone()).unwrap();

        let g = 9.807;
        let body = tipstat::robot::ComEstimate {
            mass,
            position: Vec3::new(cx, cy, cz),
        };
        let force = Vec3::new(fx, fy, fz);
        let point = Vec3::new(px, py, pz);
        let load = AppliedLoad::force_at(force, point).with_attached_mass(attached);

        let analysis = tip_margin(&poly, &body, &load, g).unwrap();

        // Independent oracle: split every load into a vertical component,
        // which contributes mass-like through its in-plane lever, and a
        // horizontal component, which contributes through its height.
        let cross2 = |a: Vec2<f64>, b: Vec2<f64>| a.x * b.y - a.y * b.x;
        for i in 0..4 {
            let (p0, p1) = poly.edge(i);
            let e = Vec2::new(p1.x - p0.x, p1.y - p0.y);
            let len = (e.x * e.x + e.y * e.y).sqrt();
            let u = Vec2::new(e.x / len, e.y / len);
            let lever = |p: Vec3<f64>| Vec2::new(p.x - p0.x, p.y - p0.y);

            let mut m = mass * g * cross2(u, lever(body.position));
            m += attached * g * cross2(u, lever(point));
            m += pz * cross2(u, Vec2::new(fx, fy));
            m -= fz * cross2(u, lever(point));

            let got = analysis.edge_moments[i];
            let scale = m.abs().max(1.0);
            prop_assert!((got - m).abs() / scale < 1e-9,
                "edge {i}: engine {got}, oracle {m}");
        }
    }

    #[test]
    fn planar_limits_scale_like_levers(
        mass in 1.0..60.0f64,
        d_ra in 0.02..0.5f64,
        d_rb in 0.02..0.5f64,
        d_p in 0.1..1.5f64,
        d_f in 0.1..1.5f64,
    ) {
        let case = PlanarCase::new(mass, 9.807, d_ra, d_rb, d_p, d_f).unwrap();
        let payload = planar_max_payload(&case).finite().unwrap();
        let pull = planar_max_pull(&case).finite().unwrap();
        let push = planar_max_push(&case).finite().unwrap();

        prop_assert!((payload * d_p - mass * d_ra).abs() / (mass * d_ra) < 1e-12);
        prop_assert!((pull * d_f - mass * 9.807 * d_ra).abs() / (mass * 9.807 * d_ra) < 1e-12);
        prop_assert!((push * d_f - mass * 9.807 * d_rb).abs() / (mass * 9.807 * d_rb) < 1e-12);
        // Pull and push differ only through which side of the footprint resists.
        prop_assert!((pull * d_rb - push * d_ra).abs() / (pull * d_rb) < 1e-12);
    }

    #[test]
    fn capability_dispatch_matches_direct_calls(spec in arb_spec(), a in 0.05..1.0f64) {
        let h = a * spec.max_height;
        let via_dispatch = capability(&spec, LoadKind::Pull, LoadLocation::Height(h)).unwrap();
        let direct = tri_max_pull_push(&spec, h).unwrap();
        prop_assert_eq!(via_dispatch.finite(), direct.finite());

        let m_dispatch = capability(&spec, LoadKind::Payload, LoadLocation::FullReach).unwrap();
        let m_direct = tri_max_payload(&spec).unwrap();
        prop_assert_eq!(m_dispatch.finite().unwrap(), m_direct);
    }
}
