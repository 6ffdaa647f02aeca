//! Pipeline execution: one-surface analysis and the two parameter sweeps.

use patchmin::{
    build_ansatz, make_bilinear, make_hemiellipsoid, make_ruled1, make_ruled2, minimize_with,
    CornerQuad, MinimizeMode, MinimizeOptions, ParametricSurface, QuadratureGrid,
    VariationalResult, Vec3,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{sweep_values, MinimizeChoice, RunConfig, SurfaceChoice};
use crate::CliError;

fn minimize_options(cfg: &RunConfig) -> MinimizeOptions {
    MinimizeOptions {
        quad_tol: cfg.quad_tol,
        mode: match cfg.minimize {
            MinimizeChoice::Mu2 => MinimizeMode::CurvaturePoly,
            MinimizeChoice::Area => MinimizeMode::DirectArea,
        },
    }
}

fn run_pipeline<M: ParametricSurface>(
    surface: M,
    cfg: &RunConfig,
) -> Result<VariationalResult, patchmin::Error> {
    let grid = QuadratureGrid::square(surface.domain(), cfg.quad_order)?;
    let ansatz = build_ansatz(surface, None, None)?;
    minimize_with(&ansatz, &grid, &minimize_options(cfg))
}

fn build_and_run(choice: &SurfaceChoice, cfg: &RunConfig) -> Result<VariationalResult, CliError> {
    let res = match choice {
        SurfaceChoice::Ruled1 { r, d } => run_pipeline(make_ruled1(*r, *d)?, cfg),
        SurfaceChoice::Ruled2 { r, d } => run_pipeline(make_ruled2(*r, *d)?, cfg),
        SurfaceChoice::Hemiellipsoid { b, c } => run_pipeline(make_hemiellipsoid(*b, *c)?, cfg),
        SurfaceChoice::Bilinear { corners } => {
            let v = |p: [f64; 3]| Vec3::new(p[0], p[1], p[2]);
            run_pipeline(
                make_bilinear(CornerQuad {
                    r1: v(corners[0]),
                    r2: v(corners[1]),
                    r3bar: v(corners[2]),
                    r4bar: v(corners[3]),
                }),
                cfg,
            )
        }
    };
    res.map_err(CliError::from)
}

/// JSON payload written by `analyze`.
#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub surface: String,
    pub t_min: f64,
    pub mu0_sq: f64,
    pub mu1_sq_at_tmin: f64,
    pub a0: f64,
    pub a1: f64,
    pub decrease_fraction: f64,
    pub decrease_percent: f64,
    pub poly_coeffs: Vec<f64>,
    pub area_increased: bool,
    pub quadrature_warning: bool,
}

fn surface_label(choice: &SurfaceChoice) -> String {
    match choice {
        SurfaceChoice::Ruled1 { r, d } => format!("ruled1 r={r} d={d}"),
        SurfaceChoice::Ruled2 { r, d } => format!("ruled2 r={r} d={d}"),
        SurfaceChoice::Hemiellipsoid { b, c } => format!("hemiellipsoid b={b} c={c}"),
        SurfaceChoice::Bilinear { .. } => "bilinear".into(),
    }
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<AnalysisReport, CliError> {
    if cfg.sweep.is_some() {
        return Err(CliError::Config(
            "analyze takes no sweep range; use sweep-ruled or sweep-hemi".into(),
        ));
    }
    let res = build_and_run(&cfg.surface, cfg)?;
    Ok(AnalysisReport {
        surface: surface_label(&cfg.surface),
        t_min: res.t_min,
        mu0_sq: res.mu0_sq,
        mu1_sq_at_tmin: res.mu1_sq_at_tmin,
        a0: res.a0,
        a1: res.a1,
        decrease_fraction: res.decrease_fraction,
        decrease_percent: res.decrease_percent,
        poly_coeffs: res.poly.coeffs().to_vec(),
        area_increased: res.diagnostics.area_increased,
        quadrature_warning: res.diagnostics.quadrature_warning,
    })
}

/// One sweep row; `flags` is empty when the row is healthy.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub param1: f64,
    pub param2: f64,
    pub t_min: f64,
    pub a0: f64,
    pub a1: f64,
    pub decrease_percent: f64,
    pub mu0_sq: f64,
    pub mu1_sq_tmin: f64,
    pub flags: String,
}

impl SweepRecord {
    fn from_result(p1: f64, p2: f64, res: &VariationalResult) -> Self {
        let mut flags = Vec::new();
        if res.diagnostics.area_increased {
            flags.push("area_increased");
        }
        if res.diagnostics.quadrature_warning {
            flags.push("quadrature_warning");
        }
        SweepRecord {
            param1: p1,
            param2: p2,
            t_min: res.t_min,
            a0: res.a0,
            a1: res.a1,
            decrease_percent: res.decrease_percent,
            mu0_sq: res.mu0_sq,
            mu1_sq_tmin: res.mu1_sq_at_tmin,
            flags: flags.join(";"),
        }
    }

    fn failed(p1: f64, p2: f64, err: &CliError) -> Self {
        SweepRecord {
            param1: p1,
            param2: p2,
            t_min: f64::NAN,
            a0: f64::NAN,
            a1: f64::NAN,
            decrease_percent: f64::NAN,
            mu0_sq: f64::NAN,
            mu1_sq_tmin: f64::NAN,
            flags: format!("error:{}", err.kind()),
        }
    }
}

/// Sweep the skew-quadrilateral scale `r` at fixed `d`.
pub fn cmd_sweep_ruled(cfg: &RunConfig) -> Result<Vec<SweepRecord>, CliError> {
    let spec = cfg.sweep.unwrap_or(crate::config::SweepSpec {
        start: 0.05,
        stop: 2.0,
        step: 0.05,
    });
    let (ruled2, d) = match cfg.surface {
        SurfaceChoice::Ruled1 { d, .. } => (false, d),
        SurfaceChoice::Ruled2 { d, .. } => (true, d),
        _ => {
            return Err(CliError::Config(
                "sweep-ruled works on the ruled1/ruled2 families".into(),
            ))
        }
    };
    let rows: Vec<SweepRecord> = sweep_values(&spec)
        .par_iter()
        .map(|&r| {
            let choice = if ruled2 {
                SurfaceChoice::Ruled2 { r, d }
            } else {
                SurfaceChoice::Ruled1 { r, d }
            };
            match build_and_run(&choice, cfg) {
                Ok(res) => SweepRecord::from_result(r, d, &res),
                Err(e) => SweepRecord::failed(r, d, &e),
            }
        })
        .collect();
    Ok(rows)
}

/// Sweep the half-cap semi-axes over the (b, c) grid.
pub fn cmd_sweep_hemi(cfg: &RunConfig) -> Result<Vec<SweepRecord>, CliError> {
    let mut spec = cfg.sweep.unwrap_or(crate::config::SweepSpec {
        start: 0.2,
        stop: 2.0,
        step: 0.2,
    });
    // a zero start degenerates the surface; begin at one step instead
    if spec.start <= 0.0 {
        spec.start = spec.step;
    }
    if !(spec.start <= spec.stop) {
        return Err(CliError::Config(format!(
            "degenerate sweep range [{}, {}]",
            spec.start, spec.stop
        )));
    }
    let axis = sweep_values(&spec);
    let pairs: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&b| axis.iter().map(move |&c| (b, c)))
        .collect();
    let rows: Vec<SweepRecord> = pairs
        .par_iter()
        .map(
            |&(b, c)| match build_and_run(&SurfaceChoice::Hemiellipsoid { b, c }, cfg) {
                Ok(res) => SweepRecord::from_result(b, c, &res),
                Err(e) => SweepRecord::failed(b, c, &e),
            },
        )
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{resolve, FileConfig, FlagOverrides};

    fn base_cfg(surface: &str) -> RunConfig {
        resolve(
            FileConfig::default(),
            FlagOverrides {
                surface: Some(surface.into()),
                ..Default::default()
            },
            None,
        )
        .unwrap()
    }

    #[test]
    fn analyze_ruled1_reference() {
        let cfg = base_cfg("ruled1");
        let rep = cmd_analyze(&cfg).unwrap();
        assert!((rep.mu0_sq - 16.0 / 9.0).abs() <= 1e-10 * (16.0 / 9.0));
        assert!(rep.a1 < rep.a0);
        assert!(!rep.area_increased);
    }

    #[test]
    fn analyze_hemisphere_reference() {
        let cfg = base_cfg("hemiellipsoid");
        let rep = cmd_analyze(&cfg).unwrap();
        assert!((rep.a0 - std::f64::consts::TAU).abs() < 1e-6);
        assert!(rep.decrease_percent > 0.0);
    }

    #[test]
    fn analyze_planar_bilinear_is_no_op() {
        let mut cfg = base_cfg("ruled1");
        cfg.surface = SurfaceChoice::Bilinear {
            corners: [
                [0.0, 0.0, 0.0],
                [1.0, 1.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
            ],
        };
        let rep = cmd_analyze(&cfg).unwrap();
        assert_eq!(rep.t_min, 0.0);
        assert_eq!(rep.decrease_percent, 0.0);
    }

    #[test]
    fn small_ruled_sweep_rows() {
        let mut cfg = base_cfg("ruled1");
        cfg.sweep = Some(crate::config::SweepSpec {
            start: 0.5,
            stop: 1.0,
            step: 0.25,
        });
        let rows = cmd_sweep_ruled(&cfg).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.windows(2).all(|w| w[0].param1 < w[1].param1));
        for row in &rows {
            assert!(row.flags.is_empty());
            assert!(row.decrease_percent > 0.0 && row.decrease_percent < 0.8);
        }
    }

    #[test]
    fn tiny_hemi_sweep_rows() {
        let mut cfg = base_cfg("hemiellipsoid");
        cfg.sweep = Some(crate::config::SweepSpec {
            start: 1.0,
            stop: 2.0,
            step: 1.0,
        });
        let rows = cmd_sweep_hemi(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert!(row.flags.is_empty(), "flags: {}", row.flags);
            // spanning area can never beat the boundary ellipse's disc
            assert!(row.a1 >= std::f64::consts::PI * row.param1 - 1e-9);
        }
    }
}
