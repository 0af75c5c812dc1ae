//! Minimal 2-D vector and 2x2 matrix arithmetic.
//!
//! Everything in this crate lives in the plane, so a pair of small `Copy`
//! types beats pulling in a full linear-algebra stack.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// A point or vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute component.
    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Counter-clockwise angle from the positive x-axis, in (-pi, pi].
    pub fn heading(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Componentwise clamp to the box [-bound, bound]^2.
    pub fn clamp_box(self, bound: f64) -> Vec2 {
        Vec2 {
            x: self.x.clamp(-bound, bound),
            y: self.y.clamp(-bound, bound),
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x / rhs, self.y / rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A 2x2 matrix in row-major order:
///
/// ```text
/// [ a  b ]
/// [ c  d ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn zero() -> Self {
        Mat2::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn transpose(self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn trace(self) -> f64 {
        self.a + self.d
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Matrix-vector product `M v`.
    pub fn mul_vec(self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    /// Transposed product `M^T v`; the vector-Jacobian building block.
    pub fn tr_mul_vec(self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.c * v.y, self.b * v.x + self.d * v.y)
    }

    pub fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }

    pub fn scale(self, s: f64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }

    /// `M^T M`, symmetric positive semi-definite by construction.
    pub fn gram(self) -> Mat2 {
        self.transpose().mul(self)
    }

    /// Largest eigenvalue of a symmetric matrix (uses `(a+d)/2 ± r`).
    ///
    /// Only valid when the matrix is symmetric; `b` and `c` are averaged
    /// to guard against roundoff asymmetry.
    pub fn sym_eig_max(self) -> f64 {
        let off = 0.5 * (self.b + self.c);
        let mean = 0.5 * (self.a + self.d);
        let r = (0.25 * (self.a - self.d) * (self.a - self.d) + off * off).sqrt();
        mean + r
    }

    /// Smallest eigenvalue of a symmetric matrix.
    pub fn sym_eig_min(self) -> f64 {
        let off = 0.5 * (self.b + self.c);
        let mean = 0.5 * (self.a + self.d);
        let r = (0.25 * (self.a - self.d) * (self.a - self.d) + off * off).sqrt();
        mean - r
    }

    /// A unit eigenvector for the given eigenvalue of a symmetric matrix.
    pub fn sym_eigvec(self, lambda: f64) -> Vec2 {
        let off = 0.5 * (self.b + self.c);
        // (a - l) x + off y = 0  or  off x + (d - l) y = 0; pick the better row.
        let r1 = Vec2::new(-off, self.a - lambda);
        let r2 = Vec2::new(self.d - lambda, -off);
        let v = if r1.norm_sq() >= r2.norm_sq() { r1 } else { r2 };
        let n = v.norm();
        if n == 0.0 {
            // Multiple of identity: every direction is an eigenvector.
            Vec2::new(1.0, 0.0)
        } else {
            v / n
        }
    }

    /// Largest singular value, by the closed form
    /// `sigma_1 = sqrt(E^2 + H^2) + sqrt(F^2 + G^2)` with
    /// `E = (a+d)/2`, `F = (a-d)/2`, `G = (c+b)/2`, `H = (c-b)/2`.
    ///
    /// Algebraically independent of the eigenvalue route through `M^T M`,
    /// which is what makes the cross-check in the FTLE tests meaningful.
    pub fn singular_value_max(self) -> f64 {
        let e = 0.5 * (self.a + self.d);
        let f = 0.5 * (self.a - self.d);
        let g = 0.5 * (self.c + self.b);
        let h = 0.5 * (self.c - self.b);
        (e * e + h * h).sqrt() + (f * f + g * g).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }
}
