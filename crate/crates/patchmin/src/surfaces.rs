//! Parametric surface families: bilinear patches over four corners, the two
//! skew-quadrilateral corner configurations, general Coons patches, and the
//! hemiellipsoid cap.
//!
//! Every surface exposes its coordinate map generically over [`Scalar`];
//! evaluating with seeded jets yields analytic first and second partials
//! without any finite differencing in the production path.

use crate::error::{Error, Result};
use crate::jet::{Jet2, Scalar};
use crate::vec3::{Vec3, V3};

/// Rectangular parameter domain `[u_min, u_max] x [v_min, v_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Domain {
    pub const UNIT: Domain = Domain {
        u_min: 0.0,
        u_max: 1.0,
        v_min: 0.0,
        v_max: 1.0,
    };

    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Result<Self> {
        if !(u_min < u_max && v_min < v_max) {
            return Err(Error::InvalidGeometry(format!(
                "empty parameter domain [{u_min}, {u_max}] x [{v_min}, {v_max}]"
            )));
        }
        Ok(Domain {
            u_min,
            u_max,
            v_min,
            v_max,
        })
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u_min && u <= self.u_max && v >= self.v_min && v <= self.v_max
    }

    pub fn u_len(&self) -> f64 {
        self.u_max - self.u_min
    }

    pub fn v_len(&self) -> f64 {
        self.v_max - self.v_min
    }

    pub fn approx_eq(&self, o: &Domain, tol: f64) -> bool {
        (self.u_min - o.u_min).abs() <= tol
            && (self.u_max - o.u_max).abs() <= tol
            && (self.v_min - o.v_min).abs() <= tol
            && (self.v_max - o.v_max).abs() <= tol
    }
}

/// Position and all first/second partials of a surface at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct SurfacePoint {
    pub position: V3,
    pub du: V3,
    pub dv: V3,
    pub duu: V3,
    pub duv: V3,
    pub dvv: V3,
}

impl SurfacePoint {
    pub fn is_finite(&self) -> bool {
        self.position.is_finite()
            && self.du.is_finite()
            && self.dv.is_finite()
            && self.duu.is_finite()
            && self.duv.is_finite()
            && self.dvv.is_finite()
    }
}

/// A twice-differentiable map from a rectangular domain into 3-space.
pub trait ParametricSurface: Send + Sync {
    fn domain(&self) -> Domain;

    /// Coordinate map in the given evaluation scalar.
    fn coords<S: Scalar>(&self, u: S, v: S) -> Vec3<S>;

    /// Per-axis degrees when the coordinate map is polynomial in `(u, v)`.
    /// Enables exact fixed-order quadrature downstream.
    fn polynomial_degrees(&self) -> Option<(u32, u32)> {
        None
    }

    fn eval(&self, u: f64, v: f64) -> SurfacePoint {
        let p = self.coords(Jet2::var_u(u), Jet2::var_v(v));
        SurfacePoint {
            position: Vec3::new(p.x.val, p.y.val, p.z.val),
            du: Vec3::new(p.x.du, p.y.du, p.z.du),
            dv: Vec3::new(p.x.dv, p.y.dv, p.z.dv),
            duu: Vec3::new(p.x.duu, p.y.duu, p.z.duu),
            duv: Vec3::new(p.x.duv, p.y.duv, p.z.duv),
            dvv: Vec3::new(p.x.dvv, p.y.dvv, p.z.dvv),
        }
    }
}

impl<T: ParametricSurface + ?Sized> ParametricSurface for &T {
    fn domain(&self) -> Domain {
        (**self).domain()
    }
    fn coords<S: Scalar>(&self, u: S, v: S) -> Vec3<S> {
        (**self).coords(u, v)
    }
    fn polynomial_degrees(&self) -> Option<(u32, u32)> {
        (**self).polynomial_degrees()
    }
}

/// The four corner positions of a quadrilateral boundary, in the order
/// first particle, second particle, first antiparticle, second antiparticle.
#[derive(Debug, Clone, Copy)]
pub struct CornerQuad {
    pub r1: V3,
    pub r2: V3,
    pub r3bar: V3,
    pub r4bar: V3,
}

/// Bilinear interpolation of four corner points over the unit square; the
/// doubly ruled surface (a hyperbolic paraboloid when the corners are skew).
#[derive(Debug, Clone, Copy)]
pub struct BilinearPatch {
    p00: V3,
    p10: V3,
    p01: V3,
    p11: V3,
}

impl BilinearPatch {
    pub fn new(p00: V3, p10: V3, p01: V3, p11: V3) -> Self {
        BilinearPatch { p00, p10, p01, p11 }
    }
}

impl ParametricSurface for BilinearPatch {
    fn domain(&self) -> Domain {
        Domain::UNIT
    }

    fn coords<S: Scalar>(&self, u: S, v: S) -> Vec3<S> {
        let one = S::one();
        let (cu, cv) = (one - u, one - v);
        Vec3::lift(self.p00).scale(cu * cv)
            + Vec3::lift(self.p10).scale(u * cv)
            + Vec3::lift(self.p01).scale(cu * v)
            + Vec3::lift(self.p11).scale(u * v)
    }

    fn polynomial_degrees(&self) -> Option<(u32, u32)> {
        Some((1, 1))
    }
}

/// Bilinear patch through the corners of `q`: `x(0,0)=r1`, `x(1,1)=r2`,
/// `x(1,0)=r3bar`, `x(0,1)=r4bar`.
pub fn make_bilinear(q: CornerQuad) -> BilinearPatch {
    BilinearPatch::new(q.r1, q.r3bar, q.r4bar, q.r2)
}

fn check_ruled_params(r: f64, d: f64) -> Result<()> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "ruled patch needs d > 0 (got {d})"
        )));
    }
    if r < 0.0 || !r.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "ruled patch needs r >= 0 (got {r})"
        )));
    }
    Ok(())
}

/// First skew-quadrilateral configuration:
/// `x(u,v) = (r(u + v - 2uv), v d, u d)`.
pub fn make_ruled1(r: f64, d: f64) -> Result<BilinearPatch> {
    check_ruled_params(r, d)?;
    Ok(BilinearPatch::new(
        V3::ZERO,
        Vec3::new(r, 0.0, d),
        Vec3::new(r, d, 0.0),
        Vec3::new(0.0, d, d),
    ))
}

/// Second skew-quadrilateral configuration:
/// `x(u,v) = (u r, v d, u d + v d (1 - 2u))`.
pub fn make_ruled2(r: f64, d: f64) -> Result<BilinearPatch> {
    check_ruled_params(r, d)?;
    Ok(BilinearPatch::new(
        V3::ZERO,
        Vec3::new(r, 0.0, d),
        Vec3::new(0.0, d, d),
        Vec3::new(r, d, 0.0),
    ))
}

/// Half-ellipsoid cap `(sin u cos v, b sin u sin v, c cos u)` on
/// `[0, pi/2] x [0, 2pi]`; its boundary is the ellipse with semi-axes 1 and
/// `b` in the z = 0 plane.
#[derive(Debug, Clone, Copy)]
pub struct Hemiellipsoid {
    pub b: f64,
    pub c: f64,
}

pub fn make_hemiellipsoid(b: f64, c: f64) -> Result<Hemiellipsoid> {
    if !(b > 0.0) || !(c > 0.0) || !b.is_finite() || !c.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "hemiellipsoid needs b > 0 and c > 0 (got b={b}, c={c})"
        )));
    }
    Ok(Hemiellipsoid { b, c })
}

impl ParametricSurface for Hemiellipsoid {
    fn domain(&self) -> Domain {
        Domain {
            u_min: 0.0,
            u_max: std::f64::consts::FRAC_PI_2,
            v_min: 0.0,
            v_max: std::f64::consts::TAU,
        }
    }

    fn coords<S: Scalar>(&self, u: S, v: S) -> Vec3<S> {
        let su = u.sin();
        Vec3::new(
            su * v.cos(),
            su * v.sin() * S::from_f64(self.b),
            u.cos() * S::from_f64(self.c),
        )
    }
}

/// A boundary curve over `[0, 1]`, evaluable in any scalar.
pub trait Curve: Send + Sync {
    fn point<S: Scalar>(&self, s: S) -> Vec3<S>;
}

/// Straight segment between two points.
#[derive(Debug, Clone, Copy)]
pub struct Line {
    pub from: V3,
    pub to: V3,
}

impl Curve for Line {
    fn point<S: Scalar>(&self, s: S) -> Vec3<S> {
        Vec3::lift(self.from).scale(S::one() - s) + Vec3::lift(self.to).scale(s)
    }
}

/// Blending pair for each direction: `f(u) -> (f1, f2)` and `g(v) -> (g1, g2)`
/// must each sum to one, with `f1(0) = g1(0) = 1` and `f1(1) = g1(1) = 0`.
pub trait Blending: Send + Sync {
    fn f<S: Scalar>(&self, u: S) -> (S, S);
    fn g<S: Scalar>(&self, v: S) -> (S, S);
}

/// The standard linear blend `(1 - u, u)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearBlend;

impl Blending for LinearBlend {
    fn f<S: Scalar>(&self, u: S) -> (S, S) {
        (S::one() - u, u)
    }
    fn g<S: Scalar>(&self, v: S) -> (S, S) {
        (S::one() - v, v)
    }
}

/// Cubic Hermite blend `(1 - 3u^2 + 2u^3, 3u^2 - 2u^3)`; same endpoint values
/// as the linear blend but with vanishing endpoint slope.
#[derive(Debug, Clone, Copy, Default)]
pub struct HermiteBlend;

impl Blending for HermiteBlend {
    fn f<S: Scalar>(&self, u: S) -> (S, S) {
        let f2 = u * u * (S::from_f64(3.0) - (u + u));
        (S::one() - f2, f2)
    }
    fn g<S: Scalar>(&self, v: S) -> (S, S) {
        self.f(v)
    }
}

/// Check partition of unity and the corner-interpolation endpoint conditions
/// on a sample grid.
pub fn validate_blending<B: Blending>(blend: &B) -> Result<()> {
    const TOL: f64 = 1e-12;
    for i in 0..=32 {
        let s = i as f64 / 32.0;
        let (f1, f2) = blend.f(s);
        let (g1, g2) = blend.g(s);
        if (f1 + f2 - 1.0).abs() > TOL || (g1 + g2 - 1.0).abs() > TOL {
            return Err(Error::InvalidBlending);
        }
    }
    let (f1_0, _) = blend.f(0.0);
    let (f1_1, _) = blend.f(1.0);
    let (g1_0, _) = blend.g(0.0);
    let (g1_1, _) = blend.g(1.0);
    if (f1_0 - 1.0).abs() > TOL || f1_1.abs() > TOL || (g1_0 - 1.0).abs() > TOL || g1_1.abs() > TOL
    {
        return Err(Error::InvalidBlending);
    }
    Ok(())
}

/// Coons patch: interpolates four boundary curves with the given blending.
pub struct CoonsPatch<C1, C2, D1, D2, B> {
    c1: C1, // x(u, 0)
    c2: C2, // x(u, 1)
    d1: D1, // x(0, v)
    d2: D2, // x(1, v)
    blend: B,
    corners: [V3; 4], // x00, x10, x01, x11
}

/// Build a Coons patch after checking blending validity and that the four
/// curves agree at the shared corners (within 1e-9).
pub fn make_coons<C1, C2, D1, D2, B>(
    c1: C1,
    c2: C2,
    d1: D1,
    d2: D2,
    blend: B,
) -> Result<CoonsPatch<C1, C2, D1, D2, B>>
where
    C1: Curve,
    C2: Curve,
    D1: Curve,
    D2: Curve,
    B: Blending,
{
    validate_blending(&blend)?;
    const TOL: f64 = 1e-9;
    let x00 = c1.point(0.0);
    let x10 = c1.point(1.0);
    let x01 = c2.point(0.0);
    let x11 = c2.point(1.0);
    let checks: [(&'static str, V3, V3); 4] = [
        ("x(0,0)", x00, d1.point(0.0)),
        ("x(1,0)", x10, d2.point(0.0)),
        ("x(0,1)", x01, d1.point(1.0)),
        ("x(1,1)", x11, d2.point(1.0)),
    ];
    for (which, a, b) in checks {
        let gap = (a - b).norm();
        if gap > TOL {
            return Err(Error::CornerMismatch { which, gap });
        }
    }
    Ok(CoonsPatch {
        c1,
        c2,
        d1,
        d2,
        blend,
        corners: [x00, x10, x01, x11],
    })
}

impl<C1, C2, D1, D2, B> ParametricSurface for CoonsPatch<C1, C2, D1, D2, B>
where
    C1: Curve,
    C2: Curve,
    D1: Curve,
    D2: Curve,
    B: Blending,
{
    fn domain(&self) -> Domain {
        Domain::UNIT
    }

    fn coords<S: Scalar>(&self, u: S, v: S) -> Vec3<S> {
        let (f1, f2) = self.blend.f(u);
        let (g1, g2) = self.blend.g(v);
        let [x00, x10, x01, x11] = self.corners;

        let ruled_u = self.d1.point(v).scale(f1) + self.d2.point(v).scale(f2);
        let ruled_v = self.c1.point(u).scale(g1) + self.c2.point(u).scale(g2);
        let corner_term = (Vec3::lift(x00).scale(g1) + Vec3::lift(x01).scale(g2)).scale(f1)
            + (Vec3::lift(x10).scale(g1) + Vec3::lift(x11).scale(g2)).scale(f2);
        ruled_u + ruled_v - corner_term
    }
}
