//! Fundamental magnitudes, curvature, area, mean-square curvature and the
//! Dirichlet upper bound.
//!
//! Curvature convention: the second-form coefficients `e, f, g` are taken
//! against the *unnormalized* normal `x_u x x_v`. The curvature numerator
//! `h0 = e G - 2 F f + g E` then shares its zero set with the mean curvature
//! on regular patches while staying polynomial for polynomial patches.
//! Dividing by `(EG - F^2)^{3/2}` recovers the curvature sum `k1 + k2`
//! (twice the textbook mean curvature).

use crate::error::{Error, Result};
use crate::jet::{Jet2, Scalar};
use crate::quadrature::{integrate2d, QuadratureGrid};
use crate::surfaces::{ParametricSurface, SurfacePoint};
use crate::vec3::{Vec3, V3};

/// Metric determinants below this are treated as singular parameter points.
pub const W2_SINGULAR: f64 = 1e-12;

/// First- and second-form coefficients at a parameter point. `ee, ff, gg`
/// are the metric (E, F, G); `e, f, g` are the second-form coefficients
/// against the unnormalized normal `n_raw`; `w2 = E G - F^2 = |n_raw|^2`.
#[derive(Debug, Clone, Copy)]
pub struct FundamentalMagnitudes {
    pub ee: f64,
    pub ff: f64,
    pub gg: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub n_raw: V3,
    pub w2: f64,
}

impl FundamentalMagnitudes {
    pub fn from_point(p: &SurfacePoint) -> Self {
        let n_raw = p.du.cross(p.dv);
        let ee = p.du.dot(p.du);
        let ff = p.du.dot(p.dv);
        let gg = p.dv.dot(p.dv);
        FundamentalMagnitudes {
            ee,
            ff,
            gg,
            e: n_raw.dot(p.duu),
            f: n_raw.dot(p.duv),
            g: n_raw.dot(p.dvv),
            n_raw,
            w2: ee * gg - ff * ff,
        }
    }

    /// `w2` with tiny negative round-off clamped away before square roots.
    pub fn w2_clamped(&self) -> f64 {
        self.w2.max(0.0)
    }

    /// Curvature numerator `e G - 2 F f + g E`.
    pub fn curvature_numerator(&self) -> f64 {
        self.e * self.gg - 2.0 * self.ff * self.f + self.g * self.ee
    }
}

/// Curvature data at a point: the numerator `h0`, and where the metric is
/// regular, the curvature sum `h0 / w2^{3/2}` and its half, the mean
/// curvature.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureSample {
    pub h0: f64,
    pub w2: f64,
    pub h_sum: Option<f64>,
}

impl CurvatureSample {
    pub fn from_magnitudes(mg: &FundamentalMagnitudes) -> Self {
        let h0 = mg.curvature_numerator();
        let h_sum = (mg.w2 > W2_SINGULAR).then(|| h0 / mg.w2.powf(1.5));
        CurvatureSample {
            h0,
            w2: mg.w2,
            h_sum,
        }
    }

    pub fn h_mean(&self) -> Option<f64> {
        self.h_sum.map(|h| 0.5 * h)
    }

    pub fn is_singular(&self) -> bool {
        self.h_sum.is_none()
    }
}

fn check_domain<M: ParametricSurface>(s: &M, u: f64, v: f64) -> Result<()> {
    if !s.domain().contains(u, v) {
        return Err(Error::DomainError { u, v });
    }
    Ok(())
}

pub fn fundamental_magnitudes<M: ParametricSurface>(
    s: &M,
    u: f64,
    v: f64,
) -> Result<FundamentalMagnitudes> {
    check_domain(s, u, v)?;
    Ok(FundamentalMagnitudes::from_point(&s.eval(u, v)))
}

pub fn curvature_numerator<M: ParametricSurface>(s: &M, u: f64, v: f64) -> Result<CurvatureSample> {
    Ok(CurvatureSample::from_magnitudes(&fundamental_magnitudes(
        s, u, v,
    )?))
}

/// Curvature numerator as a differentiable scalar field: the whole chain
/// (partials, forms, numerator) evaluated in `S` arithmetic. With `S` a jet
/// this yields the partials of `h0` itself, which the variational ansatz
/// needs for its second fundamental form.
pub fn curvature_numerator_field<M: ParametricSurface, S: Scalar>(s: &M, u: S, v: S) -> S {
    let useed = Jet2::<S> {
        du: S::one(),
        ..Jet2::constant(u)
    };
    let vseed = Jet2::<S> {
        dv: S::one(),
        ..Jet2::constant(v)
    };
    let p = s.coords(useed, vseed);
    let xu = Vec3::new(p.x.du, p.y.du, p.z.du);
    let xv = Vec3::new(p.x.dv, p.y.dv, p.z.dv);
    let xuu = Vec3::new(p.x.duu, p.y.duu, p.z.duu);
    let xuv = Vec3::new(p.x.duv, p.y.duv, p.z.duv);
    let xvv = Vec3::new(p.x.dvv, p.y.dvv, p.z.dvv);
    let n = xu.cross(xv);
    let (ee, ff, gg) = (xu.dot(xu), xu.dot(xv), xv.dot(xv));
    let (e, f, g) = (n.dot(xuu), n.dot(xuv), n.dot(xvv));
    let ff_f = ff * f;
    e * gg - (ff_f + ff_f) + g * ee
}

/// Which of the two skew-quadrilateral corner configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuledFamily {
    Ruled1,
    Ruled2,
}

/// Closed-form curvature sum for the ruled configurations; a validation
/// oracle for the generic pipeline, derived independently of it.
pub fn mean_curvature_closed_form_ruled(
    family: RuledFamily,
    r: f64,
    d: f64,
    u: f64,
    v: f64,
) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::InvalidGeometry(format!("need d > 0 (got {d})")));
    }
    let num;
    let den;
    match family {
        RuledFamily::Ruled1 => {
            num = -4.0 * r.powi(3) * (2.0 * u - 1.0) * (2.0 * v - 1.0);
            den = d
                * (d * d + 2.0 * r * r * (2.0 * (u - 1.0) * u + 2.0 * (v - 1.0) * v + 1.0))
                    .powf(1.5);
        }
        RuledFamily::Ruled2 => {
            num = 4.0 * d * r * (2.0 * u - 1.0) * (2.0 * v - 1.0);
            den = (d * d * (1.0 - 2.0 * v).powi(2) + 2.0 * r * r * (2.0 * (u - 1.0) * u + 1.0))
                .powf(1.5);
        }
    }
    if den.abs() < 1e-300 {
        return Err(Error::SingularPoint);
    }
    Ok(num / den)
}

fn check_grid<M: ParametricSurface>(s: &M, grid: &QuadratureGrid) -> Result<()> {
    if !grid.domain.approx_eq(&s.domain(), 1e-12) {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Surface area over the surface's own domain.
pub fn area<M: ParametricSurface>(s: &M, grid: &QuadratureGrid) -> Result<f64> {
    check_grid(s, grid)?;
    integrate2d(
        |u, v| {
            FundamentalMagnitudes::from_point(&s.eval(u, v))
                .w2_clamped()
                .sqrt()
        },
        grid,
    )
}

/// Mean-square curvature numerator: integral of `h0^2` over the domain.
pub fn mu_squared<M: ParametricSurface>(s: &M, grid: &QuadratureGrid) -> Result<f64> {
    check_grid(s, grid)?;
    integrate2d(
        |u, v| {
            let h0 = FundamentalMagnitudes::from_point(&s.eval(u, v)).curvature_numerator();
            h0 * h0
        },
        grid,
    )
}

/// Dirichlet functional `1/2 * integral of (E + G)`; an upper bound for the
/// area, tight exactly on isothermal patches.
pub fn dirichlet<M: ParametricSurface>(s: &M, grid: &QuadratureGrid) -> Result<f64> {
    check_grid(s, grid)?;
    let twice = integrate2d(
        |u, v| {
            let p = s.eval(u, v);
            p.du.dot(p.du) + p.dv.dot(p.dv)
        },
        grid,
    )?;
    Ok(0.5 * twice)
}
