//! Variational area reduction for parametric surfaces spanning fixed
//! boundary curves.
//!
//! The pipeline: build a surface over a rectangular parameter domain
//! (bilinear corner patches, general Coons patches, hemiellipsoid caps),
//! perturb it along a fixed direction by `t * w(u,v) * h0(u,v)` where `w`
//! pins the boundary and `h0` is the curvature numerator, fit the
//! mean-square curvature of the family as a polynomial in `t`, minimize the
//! polynomial, and report how much area the minimizing parameter removes.
//!
//! Everything evaluates through a small forward-mode jet layer
//! ([`jet::Jet2`]), so all partials in the production path are analytic;
//! finite differences appear only in tests.

// Guards written as `!(x > 0.0)` are deliberate: they reject NaN together
// with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffgeo;
mod error;
pub mod jet;
pub mod polyalg;
pub mod quadrature;
pub mod surfaces;
pub mod varmin;
pub mod vec3;

pub use error::{Error, Result};

pub use diffgeo::{
    area, curvature_numerator, dirichlet, fundamental_magnitudes, mean_curvature_closed_form_ruled,
    mu_squared, CurvatureSample, FundamentalMagnitudes, RuledFamily,
};
pub use polyalg::{fit_from_samples, global_minimum, real_roots, RealPolynomial};
pub use quadrature::{gauss_legendre, integrate2d, integrate2d_adaptive, QuadratureGrid};
pub use surfaces::{
    make_bilinear, make_coons, make_hemiellipsoid, make_ruled1, make_ruled2, BilinearPatch,
    CornerQuad, Curve, Domain, Hemiellipsoid, Line, LinearBlend, ParametricSurface, SurfacePoint,
};
pub use varmin::{
    build_ansatz, default_direction, default_window, direct_area_minimize, minimize, minimize_with,
    mu1_squared_poly, Diagnostics, ImprovedSurface, MinimizeMode, MinimizeOptions,
    VariationalAnsatz, VariationalResult, Window,
};
pub use vec3::{Vec3, V3};
