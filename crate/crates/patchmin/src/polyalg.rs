//! Dense real univariate polynomials: exact interpolation recovery,
//! differentiation, real-root isolation and global minimization.

use crate::error::{Error, Result};

/// Trailing coefficients below this fraction of the largest magnitude are
/// trimmed away.
pub const TRIM_REL: f64 = 1e-12;

/// Real polynomial with coefficients in ascending degree order. The zero
/// polynomial is stored as a single zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    /// Build from ascending coefficients, trimming the noise tail.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let cut = TRIM_REL * max;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() <= cut) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        RealPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RealPolynomial { coeffs: vec![0.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> RealPolynomial {
        if self.coeffs.len() <= 1 {
            return RealPolynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        RealPolynomial::new(coeffs)
    }
}

/// The unique interpolating polynomial through `(ts[i], values[i])`, via
/// Newton divided differences expanded to monomial coefficients.
pub fn fit_from_samples(ts: &[f64], values: &[f64]) -> Result<RealPolynomial> {
    if ts.len() != values.len() || ts.is_empty() {
        return Err(Error::DuplicateNodes);
    }
    let n = ts.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if ts[i] == ts[j] {
                return Err(Error::DuplicateNodes);
            }
        }
    }

    // divided-difference table, in place
    let mut dd = values.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (ts[i] - ts[i - k]);
        }
    }

    // expand sum_k dd[k] * prod_{j<k} (t - ts[j])
    let mut coeffs = vec![0.0; n];
    let mut basis = vec![0.0; n];
    basis[0] = 1.0;
    let mut deg = 0;
    for k in 0..n {
        for i in 0..=deg {
            coeffs[i] += dd[k] * basis[i];
        }
        if k + 1 < n {
            // basis *= (t - ts[k])
            for i in (0..=deg).rev() {
                basis[i + 1] += basis[i];
                basis[i] *= -ts[k];
            }
            deg += 1;
        }
    }
    Ok(RealPolynomial::new(coeffs))
}

pub fn derivative(p: &RealPolynomial) -> RealPolynomial {
    p.derivative()
}

/// Clusters closer than this are reported as one root.
const ROOT_CLUSTER: f64 = 1e-8;

fn refine_root(p: &RealPolynomial, dp: &RealPolynomial, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = p.eval(lo);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        if hi - lo <= 1e-15 * x.abs().max(1.0) {
            break;
        }
        let fx = p.eval(x);
        if fx == 0.0 {
            return x;
        }
        // shrink the bracket
        if (fx > 0.0) == (flo > 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        // Newton step when it stays inside, bisection otherwise
        let d = dp.eval(x);
        let newton = if d != 0.0 { x - fx / d } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    x
}

/// All real roots in ascending order, found by sign-change bracketing over
/// `[-B, B]` (Cauchy bound) at `4 * degree` subdivisions, refined by hybrid
/// bisection/Newton. Even-multiplicity roots without a sign change are not
/// isolated; clusters merge at 1e-8.
pub fn real_roots(p: &RealPolynomial) -> Result<Vec<f64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let deg = p.degree();
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = p.coeff(deg);
    let bound = 1.0
        + p.coeffs()[..deg]
            .iter()
            .fold(0.0f64, |m, c| m.max((c / lead).abs()));
    let dp = p.derivative();

    let cells = 4 * deg;
    let step = 2.0 * bound / cells as f64;
    let mut roots: Vec<f64> = Vec::new();
    let push = |roots: &mut Vec<f64>, x: f64| {
        if roots.last().is_none_or(|&r| (x - r).abs() > ROOT_CLUSTER) {
            roots.push(x);
        }
    };

    let mut x_prev = -bound;
    let mut f_prev = p.eval(x_prev);
    if f_prev == 0.0 {
        push(&mut roots, x_prev);
    }
    for i in 1..=cells {
        let x = -bound + step * i as f64;
        let fx = p.eval(x);
        if fx == 0.0 {
            push(&mut roots, x);
        } else if f_prev != 0.0 && (fx > 0.0) != (f_prev > 0.0) {
            push(&mut roots, refine_root(p, &dp, x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    Ok(roots)
}

/// Value-equality window for the minimizer tie-break.
const TIE_REL: f64 = 1e-12;

/// Best candidate by value; ties go to the smallest magnitude, then to the
/// positive one.
pub(crate) fn argmin_with_tiebreak(p: &RealPolynomial, candidates: &mut [f64]) -> (f64, f64) {
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best_t = candidates[0];
    let mut best_v = p.eval(best_t);
    for &t in &candidates[1..] {
        let v = p.eval(t);
        let tie = TIE_REL * (1.0 + best_v.abs());
        if v < best_v - tie {
            best_t = t;
            best_v = v;
        } else if (v - best_v).abs() <= tie {
            let better_mag = t.abs() < best_t.abs() - 1e-15;
            let same_mag = (t.abs() - best_t.abs()).abs() <= 1e-15;
            if better_mag || (same_mag && t > best_t) {
                best_t = t;
                best_v = v;
            }
        }
    }
    (best_t, best_v)
}

/// Critical points of `p`, plus `t = 0` which is always a candidate.
pub(crate) fn minimizer_candidates(p: &RealPolynomial) -> Result<Vec<f64>> {
    let dp = p.derivative();
    let mut candidates = if dp.is_zero() || dp.degree() == 0 {
        Vec::new()
    } else {
        real_roots(&dp)?
    };
    candidates.push(0.0);
    Ok(candidates)
}

/// Global minimum of an upward-opening polynomial: the best critical point,
/// with `t = 0` always in the candidate set. Ties in value go to the
/// candidate of smallest magnitude, then to the positive one.
pub fn global_minimum(p: &RealPolynomial) -> Result<(f64, f64)> {
    let deg = p.degree();
    if deg == 0 {
        return Ok((0.0, p.coeff(0)));
    }
    if !deg.is_multiple_of(2) || p.coeff(deg) <= 0.0 {
        return Err(Error::Unbounded);
    }
    let mut candidates = minimizer_candidates(p)?;
    Ok(argmin_with_tiebreak(p, &mut candidates))
}
