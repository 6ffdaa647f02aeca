//! Run configuration: JSON config file plus flag overrides, flags winning.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

/// Surface family plus parameters, fully resolved.
#[derive(Debug, Clone)]
pub enum SurfaceChoice {
    Ruled1 { r: f64, d: f64 },
    Ruled2 { r: f64, d: f64 },
    Hemiellipsoid { b: f64, c: f64 },
    Bilinear { corners: [[f64; 3]; 4] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MinimizeChoice {
    #[default]
    Mu2,
    Area,
}

/// Sweep bounds; for the half-cap sweep the same range applies to both axes.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

/// Raw JSON config; every field optional so flags can fill the gaps.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub surface: Option<String>,
    pub r: Option<f64>,
    pub d: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub corners: Option<[[f64; 3]; 4]>,
    pub sweep: Option<SweepSpec>,
    pub quad_order: Option<usize>,
    pub quad_tol: Option<f64>,
    pub minimize: Option<String>,
    pub out: Option<PathBuf>,
    pub plot: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }
}

/// Flag values as parsed from the command line (None = not given).
#[derive(Debug, Clone, Default)]
pub struct FlagOverrides {
    pub surface: Option<String>,
    pub r: Option<f64>,
    pub d: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub corners: Option<String>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
    pub quad_order: Option<usize>,
    pub quad_tol: Option<f64>,
    pub minimize: Option<String>,
    pub out: Option<PathBuf>,
    pub plot: bool,
}

/// Fully resolved configuration for one command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub surface: SurfaceChoice,
    pub sweep: Option<SweepSpec>,
    pub quad_order: usize,
    pub quad_tol: f64,
    pub minimize: MinimizeChoice,
    pub out: Option<PathBuf>,
    pub plot: bool,
}

fn parse_corner_list(text: &str) -> Result<[[f64; 3]; 4], CliError> {
    let nums: Result<Vec<f64>, _> = text.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let nums = nums.map_err(|e| CliError::Config(format!("bad --corners value: {e}")))?;
    if nums.len() != 12 {
        return Err(CliError::Config(format!(
            "--corners needs 12 comma-separated numbers (got {})",
            nums.len()
        )));
    }
    let mut corners = [[0.0; 3]; 4];
    for i in 0..4 {
        corners[i] = [nums[3 * i], nums[3 * i + 1], nums[3 * i + 2]];
    }
    Ok(corners)
}

fn parse_minimize(text: &str) -> Result<MinimizeChoice, CliError> {
    match text {
        "mu2" => Ok(MinimizeChoice::Mu2),
        "area" => Ok(MinimizeChoice::Area),
        other => Err(CliError::Config(format!(
            "--minimize must be 'mu2' or 'area' (got '{other}')"
        ))),
    }
}

/// Merge config-file values with flag overrides (flags win) and validate.
/// `default_surface` supplies the family when neither source names one.
pub fn resolve(
    file: FileConfig,
    flags: FlagOverrides,
    default_surface: Option<&str>,
) -> Result<RunConfig, CliError> {
    let family = flags
        .surface
        .or(file.surface)
        .or_else(|| default_surface.map(str::to_owned))
        .ok_or_else(|| CliError::Config("no surface family given (use --surface)".into()))?;

    let r = flags.r.or(file.r).unwrap_or(1.0);
    let d = flags.d.or(file.d).unwrap_or(1.0);
    let b = flags.b.or(file.b).unwrap_or(1.0);
    let c = flags.c.or(file.c).unwrap_or(1.0);

    let corners = match flags.corners {
        Some(text) => Some(parse_corner_list(&text)?),
        None => file.corners,
    };

    let surface = match family.as_str() {
        "ruled1" => SurfaceChoice::Ruled1 { r, d },
        "ruled2" => SurfaceChoice::Ruled2 { r, d },
        "hemiellipsoid" => SurfaceChoice::Hemiellipsoid { b, c },
        "bilinear" => SurfaceChoice::Bilinear {
            corners: corners.ok_or_else(|| {
                CliError::Config("surface 'bilinear' needs --corners or config corners".into())
            })?,
        },
        other => {
            return Err(CliError::Config(format!(
                "unknown surface family '{other}' \
                 (expected ruled1, ruled2, hemiellipsoid or bilinear)"
            )))
        }
    };

    let sweep = match (flags.start, flags.stop, flags.step) {
        (None, None, None) => file.sweep,
        (s0, s1, st) => {
            let base = file.sweep;
            Some(SweepSpec {
                start: s0.or(base.map(|b| b.start)).unwrap_or(f64::NAN),
                stop: s1.or(base.map(|b| b.stop)).unwrap_or(f64::NAN),
                step: st.or(base.map(|b| b.step)).unwrap_or(f64::NAN),
            })
        }
    };
    if let Some(sw) = &sweep {
        if !(sw.step > 0.0) {
            return Err(CliError::Config(format!(
                "sweep step must be positive (got {})",
                sw.step
            )));
        }
        if !(sw.start <= sw.stop) {
            return Err(CliError::Config(format!(
                "sweep start must not exceed stop (got {} > {})",
                sw.start, sw.stop
            )));
        }
    }

    let minimize = match flags.minimize.or(file.minimize) {
        Some(text) => parse_minimize(&text)?,
        None => MinimizeChoice::Mu2,
    };

    let quad_order = flags.quad_order.or(file.quad_order).unwrap_or(32);
    if quad_order == 0 {
        return Err(CliError::Config("--quad-order must be at least 1".into()));
    }
    let quad_tol = flags.quad_tol.or(file.quad_tol).unwrap_or(1e-9);
    if !(quad_tol > 0.0) {
        return Err(CliError::Config(format!(
            "--quad-tol must be positive (got {quad_tol})"
        )));
    }

    Ok(RunConfig {
        surface,
        sweep,
        quad_order,
        quad_tol,
        minimize,
        out: flags.out.or(file.out),
        plot: flags.plot || file.plot.unwrap_or(false),
    })
}

/// Sweep values `start, start+step, ...` up to `stop` (inclusive within a
/// half-ulp-ish slack so `0.05 * 40` still lands on 2.0).
pub fn sweep_values(spec: &SweepSpec) -> Vec<f64> {
    let n = ((spec.stop - spec.start) / spec.step + 1e-9).floor() as usize;
    (0..=n).map(|i| spec.start + spec.step * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config_file() {
        let file = FileConfig {
            surface: Some("ruled1".into()),
            r: Some(1.0),
            quad_order: Some(16),
            ..Default::default()
        };
        let flags = FlagOverrides {
            r: Some(2.0),
            ..Default::default()
        };
        let cfg = resolve(file, flags, None).unwrap();
        match cfg.surface {
            SurfaceChoice::Ruled1 { r, d } => {
                assert_eq!(r, 2.0);
                assert_eq!(d, 1.0);
            }
            _ => panic!("wrong family"),
        }
        assert_eq!(cfg.quad_order, 16);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = serde_json::from_str::<FileConfig>(r#"{"surface":"ruled1","bogus":1}"#);
        assert!(err.is_err());
    }

    #[test]
    fn sweep_validation() {
        let file = FileConfig::default();
        let flags = FlagOverrides {
            surface: Some("ruled1".into()),
            start: Some(1.0),
            stop: Some(0.5),
            step: Some(0.1),
            ..Default::default()
        };
        assert!(matches!(
            resolve(file, flags, None),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn sweep_values_hit_both_ends() {
        let vals = sweep_values(&SweepSpec {
            start: 0.05,
            stop: 2.0,
            step: 0.05,
        });
        assert_eq!(vals.len(), 40);
        assert!((vals[0] - 0.05).abs() < 1e-15);
        assert!((vals[39] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn corner_list_parsing() {
        let c = parse_corner_list("0,0,0, 1,1,0, 1,0,0, 0,1,0").unwrap();
        assert_eq!(c[1], [1.0, 1.0, 0.0]);
        assert!(parse_corner_list("1,2,3").is_err());
    }
}
