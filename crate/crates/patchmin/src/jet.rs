//! Forward-mode automatic differentiation for two-parameter maps.
//!
//! [`Jet2`] carries a value together with its first and second partial
//! derivatives in `(u, v)`. Surface formulas are written once, generically
//! over [`Scalar`], and evaluated with seeded jets to obtain exact analytic
//! partials. Jets nest: `Jet2<Jet2<f64>>` differentiates expressions that
//! themselves contain derivative extractions (fourth order in total), which
//! is what the variational layer needs.

use std::ops::{Add, Mul, Neg, Sub};

/// Arithmetic closed under the operations surface formulas use.
///
/// Implemented by `f64` and by `Jet2<B>` for any scalar `B`, so evaluation
/// types can be stacked.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_f64(c: f64) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Scalar for f64 {
    fn from_f64(c: f64) -> Self {
        c
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

/// Second-order two-variable jet: value, first partials, raw second partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2<B = f64> {
    pub val: B,
    pub du: B,
    pub dv: B,
    pub duu: B,
    pub duv: B,
    pub dvv: B,
}

impl<B: Scalar> Jet2<B> {
    pub fn constant(c: B) -> Self {
        Jet2 {
            val: c,
            du: B::zero(),
            dv: B::zero(),
            duu: B::zero(),
            duv: B::zero(),
            dvv: B::zero(),
        }
    }

    /// Seed for the `u` parameter: derivative one in the `u` slot.
    pub fn var_u(u: B) -> Self {
        Jet2 {
            du: B::one(),
            ..Self::constant(u)
        }
    }

    /// Seed for the `v` parameter.
    pub fn var_v(v: B) -> Self {
        Jet2 {
            dv: B::one(),
            ..Self::constant(v)
        }
    }
}

impl<B: Scalar> Add for Jet2<B> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet2 {
            val: self.val + o.val,
            du: self.du + o.du,
            dv: self.dv + o.dv,
            duu: self.duu + o.duu,
            duv: self.duv + o.duv,
            dvv: self.dvv + o.dvv,
        }
    }
}

impl<B: Scalar> Sub for Jet2<B> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Jet2 {
            val: self.val - o.val,
            du: self.du - o.du,
            dv: self.dv - o.dv,
            duu: self.duu - o.duu,
            duv: self.duv - o.duv,
            dvv: self.dvv - o.dvv,
        }
    }
}

impl<B: Scalar> Neg for Jet2<B> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet2 {
            val: -self.val,
            du: -self.du,
            dv: -self.dv,
            duu: -self.duu,
            duv: -self.duv,
            dvv: -self.dvv,
        }
    }
}

impl<B: Scalar> Mul for Jet2<B> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Jet2 {
            val: self.val * o.val,
            du: self.du * o.val + self.val * o.du,
            dv: self.dv * o.val + self.val * o.dv,
            duu: self.duu * o.val + self.du * o.du + self.du * o.du + self.val * o.duu,
            duv: self.duv * o.val + self.du * o.dv + self.dv * o.du + self.val * o.duv,
            dvv: self.dvv * o.val + self.dv * o.dv + self.dv * o.dv + self.val * o.dvv,
        }
    }
}

impl<B: Scalar> Scalar for Jet2<B> {
    fn from_f64(c: f64) -> Self {
        Self::constant(B::from_f64(c))
    }

    // Chain rule through f(x): first order scales by f'(x.val), second order
    // adds the curvature term f''(x.val) * dx_i * dx_j.
    fn sin(self) -> Self {
        let s = self.val.sin();
        let c = self.val.cos();
        Jet2 {
            val: s,
            du: c * self.du,
            dv: c * self.dv,
            duu: c * self.duu - s * (self.du * self.du),
            duv: c * self.duv - s * (self.du * self.dv),
            dvv: c * self.dvv - s * (self.dv * self.dv),
        }
    }

    fn cos(self) -> Self {
        let s = self.val.sin();
        let c = self.val.cos();
        Jet2 {
            val: c,
            du: -(s * self.du),
            dv: -(s * self.dv),
            duu: -(s * self.duu) - c * (self.du * self.du),
            duv: -(s * self.duv) - c * (self.du * self.dv),
            dvv: -(s * self.dvv) - c * (self.dv * self.dv),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // f(u, v) = sin(u) * cos(v) + u * v^2
    fn f<S: Scalar>(u: S, v: S) -> S {
        u.sin() * v.cos() + u * v * v
    }

    #[test]
    fn jet_matches_hand_derivatives() {
        let (u, v) = (0.7, -0.3);
        let j = f(Jet2::var_u(u), Jet2::var_v(v));
        assert!((j.val - (u.sin() * v.cos() + u * v * v)).abs() < 1e-15);
        assert!((j.du - (u.cos() * v.cos() + v * v)).abs() < 1e-15);
        assert!((j.dv - (-u.sin() * v.sin() + 2.0 * u * v)).abs() < 1e-15);
        assert!((j.duu - (-u.sin() * v.cos())).abs() < 1e-15);
        assert!((j.duv - (-u.cos() * v.sin() + 2.0 * v)).abs() < 1e-15);
        assert!((j.dvv - (-u.sin() * v.cos() + 2.0 * u)).abs() < 1e-15);
    }

    #[test]
    fn jet_matches_finite_differences() {
        let (u, v) = (0.37, 0.81);
        let h = 1e-5;
        let j = f(Jet2::var_u(u), Jet2::var_v(v));
        let fd_du = (f(u + h, v) - f(u - h, v)) / (2.0 * h);
        let fd_dv = (f(u, v + h) - f(u, v - h)) / (2.0 * h);
        let fd_duu = (f(u + h, v) - 2.0 * f(u, v) + f(u - h, v)) / (h * h);
        let fd_duv =
            (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4.0 * h * h);
        assert!((j.du - fd_du).abs() < 1e-9);
        assert!((j.dv - fd_dv).abs() < 1e-9);
        assert!((j.duu - fd_duu).abs() < 1e-5);
        assert!((j.duv - fd_duv).abs() < 1e-5);
    }

    #[test]
    fn nested_jets_reach_fourth_order() {
        // sin has period-4 derivatives; the outer duu of the inner duu is d^4/du^4 = sin.
        let u = 0.7;
        let inner = Jet2::<f64>::var_u(u);
        let seed = Jet2::<Jet2<f64>> {
            du: Jet2::constant(1.0),
            ..Jet2::constant(inner)
        };
        let r = seed.sin();
        assert!((r.val.val - u.sin()).abs() < 1e-15);
        assert!((r.duu.val + u.sin()).abs() < 1e-15); // d2/du2
        assert!((r.duu.duu - u.sin()).abs() < 1e-14); // d4/du4
    }
}
