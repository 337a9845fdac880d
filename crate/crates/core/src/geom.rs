//! Minimal planar/spatial vector helpers used by the stability engine.

use crate::real::Real;

/// 2-D point/vector in the floor plane, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2<R> {
    pub x: R,
    pub y: R,
}

impl<R: Real> Vec2<R> {
    pub fn new(x: R, y: R) -> Self {
        Self { x, y }
    }

    pub fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }

    /// Scalar (z) component of the 2-D cross product `self × rhs`.
    pub fn cross(self, rhs: Self) -> R {
        self.x * rhs.y - self.y * rhs.x
    }

    pub fn dot(self, rhs: Self) -> R {
        self.x * rhs.x + self.y * rhs.y
    }

    pub fn norm(self) -> R {
        self.dot(self).sqrt()
    }
}

/// 3-D point/vector in the robot frame, meters. Origin at the rear wheel
/// contact, x toward the drive axle, y toward the right drive wheel, z up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3<R> {
    pub x: R,
    pub y: R,
    pub z: R,
}

impl<R: Real> Vec3<R> {
    pub fn new(x: R, y: R, z: R) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(R::zero(), R::zero(), R::zero())
    }

    pub fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }

    pub fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }

    pub fn scale(self, s: R) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn cross(self, rhs: Self) -> Self {
        Self::new(
            self.y * rhs.z - self.z * rhs.y,
            self.z * rhs.x - self.x * rhs.z,
            self.x * rhs.y - self.y * rhs.x,
        )
    }

    pub fn dot(self, rhs: Self) -> R {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Floor-plane projection.
    pub fn xy(self) -> Vec2<R> {
        Vec2::new(self.x, self.y)
    }
}

/// Twice the signed area of a simple polygon (positive for counterclockwise
/// winding as seen from +z).
pub fn twice_signed_area<R: Real>(vertices: &[Vec2<R>]) -> R {
    let n = vertices.len();
    let mut acc = R::zero();
    for i in 0..n {
        acc = acc + vertices[i].cross(vertices[(i + 1) % n]);
    }
    acc
}

/// True iff the polygon is strictly convex with counterclockwise winding:
/// every consecutive edge pair turns left and no three consecutive vertices
/// are collinear.
pub fn is_strictly_convex_ccw<R: Real>(vertices: &[Vec2<R>]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let c = vertices[(i + 2) % n];
        if b.sub(a).cross(c.sub(b)) <= R::zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_products_follow_right_hand_rule() {
        let x = Vec3::new(1.0_f64, 0.0, 0.0);
        let y = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(x.cross(y), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(Vec2::new(1.0_f64, 0.0).cross(Vec2::new(0.0, 1.0)), 1.0);
    }

    #[test]
    fn convexity_check_rejects_winding_and_collinear_cases() {
        let ccw = vec![
            Vec2::new(0.0_f64, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(is_strictly_convex_ccw(&ccw));

        let cw: Vec<_> = ccw.iter().rev().copied().collect();
        assert!(!is_strictly_convex_ccw(&cw));

        let collinear = vec![
            Vec2::new(0.0_f64, 0.0),
            Vec2::new(0.5, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(!is_strictly_convex_ccw(&collinear));

        let dart = vec![
            Vec2::new(0.0_f64, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(1.0, 0.5),
            Vec2::new(1.0, 2.0),
        ];
        assert!(!is_strictly_convex_ccw(&dart));
    }
}
