//! Tensor-product Gauss-Legendre quadrature over rectangles, plus an
//! order-doubling adaptive wrapper for integrands with square roots.
//!
//! Sums run in a fixed v-major index order with Neumaier compensation, so
//! results are deterministic and carry only O(eps) summation error. The
//! compensation matters: the polynomial-coefficient integrals downstream are
//! differenced at the 1e-13 level.

use crate::error::{Error, Result};
use crate::surfaces::Domain;

/// Legendre P_n and P_n' at x, by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // derivative from P_n and P_{n-1}
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre nodes and weights on `[a, b]`, ascending nodes strictly
/// inside the interval. Nodes are found by Newton iteration on P_n from the
/// Chebyshev initial guess, to 1e-15; the rule is symmetrized exactly.
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if order < 1 {
        return Err(Error::InvalidOrder(order));
    }
    if !(a < b) {
        return Err(Error::InvalidInterval { a, b });
    }
    let n = order;
    let mut ref_nodes = vec![0.0; n];
    let mut ref_weights = vec![0.0; n];
    // compute the positive half and mirror
    for i in 0..n.div_ceil(2) {
        let k = n - 1 - i; // destination index, counted from the right end
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        if n % 2 == 1 && i == n / 2 {
            x = 0.0;
        }
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            if x == 0.0 && n % 2 == 1 {
                break; // exact midpoint root for odd order
            }
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                let (_, d2) = legendre_pair(n, x);
                dp = d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ref_nodes[k] = x;
        ref_weights[k] = w;
        ref_nodes[n - 1 - k] = -x;
        ref_weights[n - 1 - k] = w;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let nodes = ref_nodes.iter().map(|x| mid + half * x).collect();
    let weights = ref_weights.iter().map(|w| half * w).collect();
    Ok((nodes, weights))
}

/// Tensor-product rule over a rectangular domain.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub nodes_u: Vec<f64>,
    pub weights_u: Vec<f64>,
    pub nodes_v: Vec<f64>,
    pub weights_v: Vec<f64>,
    pub domain: Domain,
}

impl QuadratureGrid {
    pub fn new(domain: Domain, order_u: usize, order_v: usize) -> Result<Self> {
        let (nodes_u, weights_u) = gauss_legendre(order_u, domain.u_min, domain.u_max)?;
        let (nodes_v, weights_v) = gauss_legendre(order_v, domain.v_min, domain.v_max)?;
        Ok(QuadratureGrid {
            nodes_u,
            weights_u,
            nodes_v,
            weights_v,
            domain,
        })
    }

    pub fn square(domain: Domain, order: usize) -> Result<Self> {
        Self::new(domain, order, order)
    }

    pub fn order_u(&self) -> usize {
        self.nodes_u.len()
    }

    pub fn order_v(&self) -> usize {
        self.nodes_v.len()
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Integrate `f` over the grid's domain: weighted tensor sum in fixed
/// v-major order.
pub fn integrate2d<F: FnMut(f64, f64) -> f64>(mut f: F, grid: &QuadratureGrid) -> Result<f64> {
    let mut acc = Accumulator::default();
    for (j, &v) in grid.nodes_v.iter().enumerate() {
        let wv = grid.weights_v[j];
        for (i, &u) in grid.nodes_u.iter().enumerate() {
            let s = f(u, v);
            if !s.is_finite() {
                return Err(Error::NonFiniteSample { u, v });
            }
            acc.add(wv * grid.weights_u[i] * s);
        }
    }
    Ok(acc.value())
}

/// Result of order-doubling refinement.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOutcome {
    pub value: f64,
    pub converged: bool,
    pub final_order: usize,
}

pub const ADAPTIVE_START_ORDER: usize = 16;
pub const ADAPTIVE_MAX_ORDER: usize = 256;

/// Double the tensor order (16 up to 256) until successive estimates agree to
/// `rel_tol`; the best estimate is returned either way, with `converged`
/// telling whether the cap was hit first.
pub fn integrate2d_adaptive<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    domain: Domain,
    rel_tol: f64,
) -> Result<AdaptiveOutcome> {
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidTolerance(rel_tol));
    }
    let mut order = ADAPTIVE_START_ORDER;
    let grid = QuadratureGrid::square(domain, order)?;
    let mut prev = integrate2d(&mut f, &grid)?;
    loop {
        let next_order = order * 2;
        if next_order > ADAPTIVE_MAX_ORDER {
            return Ok(AdaptiveOutcome {
                value: prev,
                converged: false,
                final_order: order,
            });
        }
        let grid = QuadratureGrid::square(domain, next_order)?;
        let cur = integrate2d(&mut f, &grid)?;
        let diff = (cur - prev).abs();
        if diff <= rel_tol * cur.abs() || diff == 0.0 {
            return Ok(AdaptiveOutcome {
                value: cur,
                converged: true,
                final_order: next_order,
            });
        }
        prev = cur;
        order = next_order;
    }
}
