//! Small 3-vector generic over the evaluation scalar, so the same geometry
//! code runs on plain `f64` and on jets.

use std::ops::{Add, Mul, Neg, Sub};

use crate::jet::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3<S = f64> {
    pub x: S,
    pub y: S,
    pub z: S,
}

/// Plain numeric 3-vector.
pub type V3 = Vec3<f64>;

impl<S: Scalar> Vec3<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Self) -> S {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Vec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn scale(self, c: S) -> Self {
        Vec3 {
            x: self.x * c,
            y: self.y * c,
            z: self.z * c,
        }
    }

    /// Lift an `f64` vector into the evaluation scalar.
    pub fn lift(v: V3) -> Self {
        Vec3 {
            x: S::from_f64(v.x),
            y: S::from_f64(v.y),
            z: S::from_f64(v.z),
        }
    }
}

impl<S: Scalar> Add for Vec3<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec3 {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }
}

impl<S: Scalar> Sub for Vec3<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec3 {
            x: self.x - o.x,
            y: self.y - o.y,
            z: self.z - o.z,
        }
    }
}

impl<S: Scalar> Neg for Vec3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3 {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl<S: Scalar> Mul<S> for Vec3<S> {
    type Output = Self;
    fn mul(self, c: S) -> Self {
        self.scale(c)
    }
}

impl V3 {
    pub const ZERO: V3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Index of the component with the largest magnitude (ties favor x, then y).
    pub fn argmax_abs(self) -> usize {
        let a = [self.x.abs(), self.y.abs(), self.z.abs()];
        let mut best = 0;
        for i in 1..3 {
            if a[i] > a[best] {
                best = i;
            }
        }
        best
    }

    pub fn component(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    /// Signed unit vector along coordinate axis `i`.
    pub fn axis(i: usize, sign: f64) -> V3 {
        let mut v = V3::ZERO;
        match i {
            0 => v.x = sign,
            1 => v.y = sign,
            _ => v.z = sign,
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_orthogonal() {
        let a = Vec3::new(1.0, 2.0, 3.0);
        let b = Vec3::new(-0.5, 0.25, 2.0);
        let c = a.cross(b);
        assert!(c.dot(a).abs() < 1e-14);
        assert!(c.dot(b).abs() < 1e-14);
    }

    #[test]
    fn argmax_and_axis() {
        let v = Vec3::new(-3.0, 2.0, 1.0);
        assert_eq!(v.argmax_abs(), 0);
        assert_eq!(V3::axis(0, -1.0), Vec3::new(-1.0, 0.0, 0.0));
    }
}
