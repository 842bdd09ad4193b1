//! Path-ordered exponentials, parallel transport and the smooth gauge/homotopy
//! correspondence on a discretized circle, in double precision.
//!
//! Paths are sampled on uniform grids. A path with `2K + 1` samples drives `K`
//! fourth-order Runge-Kutta steps, the odd samples serving as midpoints. The
//! derivative along the circle is the periodic central difference, accurate to
//! `O(h²)`; derivatives along the homotopy parameter use fourth-order stencils.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;

pub const RESIDUAL_TOLERANCE: f64 = 1e-6;
pub const ENDPOINT_TOLERANCE: f64 = 1e-5;

/// `n×n` matrices at `m + 1` uniform points of `[0, 1]`.
#[derive(Clone, Debug)]
pub struct SampledMatrixPath {
    pub samples: Vec<Matrix>,
}

impl SampledMatrixPath {
    pub fn new(samples: Vec<Matrix>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::Invalid("a sampled path needs at least 3 points".into()));
        }
        let n = samples[0].nrows();
        for (i, s) in samples.iter().enumerate() {
            if s.nrows() != n || s.ncols() != n {
                return Err(Error::Dimension(format!("sample {i} is not {n}x{n}")));
            }
            if s.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid(format!("sample {i} has non-finite entries")));
            }
        }
        Ok(SampledMatrixPath { samples })
    }

    /// Samples `f` at `m + 1` points.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> Matrix) -> Result<Self> {
        SampledMatrixPath::new((0..=m).map(|i| f(i as f64 / m as f64)).collect())
    }

    pub fn dim(&self) -> usize {
        self.samples[0].nrows()
    }

    pub fn intervals(&self) -> usize {
        self.samples.len() - 1
    }

    /// Every `k`-th sample.
    pub fn coarsen(&self, k: usize) -> Result<Self> {
        if k == 0 || self.intervals() % k != 0 {
            return Err(Error::Invalid(format!("cannot coarsen {} intervals by {k}", self.intervals())));
        }
        SampledMatrixPath::new(self.samples.iter().step_by(k).cloned().collect())
    }

    /// Sample index of a grid-aligned parameter value that is an RK4 step boundary.
    fn step_index(&self, z: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::Invalid(format!("z = {z} outside [0, 1]")));
        }
        let m = self.intervals();
        let pos = z * m as f64;
        let i = pos.round();
        if (pos - i).abs() > 1e-9 || (i as usize) % 2 != 0 {
            return Err(Error::Invalid(format!("z = {z} is not an even grid point of {m} intervals")));
        }
        Ok(i as usize)
    }
}

fn rk4_step(y0: &Matrix, ymid: &Matrix, y1: &Matrix, h: f64, g: &Matrix) -> Matrix {
    let k1 = y0 * g;
    let k2 = ymid * (g + &k1 * (h / 2.0));
    let k3 = ymid * (g + &k2 * (h / 2.0));
    let k4 = y1 * (g + &k3 * h);
    g + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Solution of `g′ = y g` from sample `a` to sample `b` (both even), one value per step boundary.
fn integrate(y: &SampledMatrixPath, a: usize, b: usize, g0: &Matrix) -> Vec<Matrix> {
    let h = 2.0 / y.intervals() as f64;
    let mut out = vec![g0.clone()];
    let mut g = g0.clone();
    let mut i = a;
    while i < b {
        g = rk4_step(&y.samples[i], &y.samples[i + 1], &y.samples[i + 2], h, &g);
        out.push(g.clone());
        i += 2;
    }
    out
}

/// Ordered exponential with its condition number `‖g‖‖g⁻¹‖`.
#[derive(Clone, Debug)]
pub struct Pexp {
    pub matrix: Matrix,
    pub condition: f64,
}

fn condition(g: &Matrix) -> Result<f64> {
    let inv = g.clone().try_inverse().ok_or_else(|| Error::NotInvertible("ordered exponential".into()))?;
    Ok(g.norm() * inv.norm())
}

/// `P exp ∫₀^z y`, the value at `z` of `g′ = y g`, `g(0) = 1`.
pub fn pexp(y: &SampledMatrixPath, z: f64) -> Result<Pexp> {
    pexp_between(y, 0.0, z)
}

/// Transport from `a` to `b`: the solution at `b` of `g′ = y g`, `g(a) = 1`.
pub fn pexp_between(y: &SampledMatrixPath, a: f64, b: f64) -> Result<Pexp> {
    let (ia, ib) = (y.step_index(a)?, y.step_index(b)?);
    if ia > ib {
        return Err(Error::Invalid("pexp needs a ≤ b".into()));
    }
    let g = integrate(y, ia, ib, &Matrix::identity(y.dim(), y.dim())).pop().expect("nonempty");
    let condition = condition(&g)?;
    Ok(Pexp { matrix: g, condition })
}

/// Richardson estimate of the convergence order from three step counts, when the samples allow it.
pub fn order_estimate(y: &SampledMatrixPath, z: f64) -> Result<Option<f64>> {
    if y.intervals() % 8 != 0 {
        return Ok(None);
    }
    let fine = pexp(y, z)?.matrix;
    let mid = pexp(&y.coarsen(2)?, z)?.matrix;
    let coarse = pexp(&y.coarsen(4)?, z)?.matrix;
    let (e1, e2) = ((&coarse - &mid).norm(), (&mid - &fine).norm());
    if e2 == 0.0 || e1 == 0.0 {
        return Ok(None);
    }
    Ok(Some((e1 / e2).log2()))
}

/// Transport path with its interior residual `max ‖g′ − y g‖`.
#[derive(Clone, Debug)]
pub struct Transport {
    /// values at the step boundaries (every other sample)
    pub path: SampledMatrixPath,
    pub residual: f64,
    pub flagged: bool,
}

/// RK4 solution of `g′ = y g`, `g(0) = g0`; the residual uses central differences of the solution.
pub fn solve_transport(y: &SampledMatrixPath, g0: &Matrix, tolerance: f64) -> Result<Transport> {
    if y.intervals() % 2 != 0 {
        return Err(Error::Invalid("transport needs an even number of intervals".into()));
    }
    let values = integrate(y, 0, y.intervals(), g0);
    let h = 2.0 / y.intervals() as f64;
    let mut residual: f64 = 0.0;
    for k in 1..values.len() - 1 {
        let deriv = (&values[k + 1] - &values[k - 1]) / (2.0 * h);
        residual = residual.max((deriv - &y.samples[2 * k] * &values[k]).norm());
    }
    let path = SampledMatrixPath::new(values)?;
    Ok(Transport { path, residual, flagged: residual > tolerance })
}

/// A matrix valued 1-form `a(θ) dθ` sampled at `p` uniform points of the circle `[0, 2π)`.
#[derive(Clone, Debug)]
pub struct CircleForm {
    pub samples: Vec<Matrix>,
}

impl CircleForm {
    pub fn new(samples: Vec<Matrix>) -> Result<Self> {
        if samples.len() < 8 || samples.len() % 2 != 0 {
            return Err(Error::Invalid("a circle form needs an even number p ≥ 8 of samples".into()));
        }
        if samples.iter().any(|s| s.iter().any(|x| !x.is_finite())) {
            return Err(Error::Invalid("non-finite circle form".into()));
        }
        Ok(CircleForm { samples })
    }

    pub fn from_fn(p: usize, f: impl Fn(f64) -> Matrix) -> Result<Self> {
        CircleForm::new((0..p).map(|j| f(theta(j, p))).collect())
    }

    pub fn points(&self) -> usize {
        self.samples.len()
    }

    pub fn max_distance(&self, o: &CircleForm) -> f64 {
        self.samples.iter().zip(&o.samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Transport of `s′ = −a s` once around the circle.
    pub fn monodromy(&self) -> Result<Matrix> {
        // reparametrized by [0, 1]
        let mut closed: Vec<Matrix> = self.samples.iter().map(|a| a * -std::f64::consts::TAU).collect();
        closed.push(closed[0].clone());
        let scaled = SampledMatrixPath::new(closed)?;
        Ok(pexp(&scaled, 1.0)?.matrix)
    }
}

pub fn theta(j: usize, p: usize) -> f64 {
    std::f64::consts::TAU * j as f64 / p as f64
}

/// Periodic central difference.
fn d_theta(f: &[Matrix], j: usize) -> Matrix {
    let p = f.len();
    let h = std::f64::consts::TAU / p as f64;
    (&f[(j + 1) % p] - &f[(j + p - 1) % p]) / (2.0 * h)
}

/// Fourth-order derivative along a uniform grid (one-sided stencils at the ends).
fn d_grid(f: &[Matrix], i: usize, h: f64) -> Matrix {
    let m = f.len() - 1;
    let c = |w: &[(usize, f64)]| {
        let mut out = Matrix::zeros(f[0].nrows(), f[0].ncols());
        for &(k, a) in w {
            out += &f[k] * a;
        }
        out / h
    };
    if m < 4 {
        return if i == 0 {
            (&f[1] - &f[0]) / h
        } else if i == m {
            (&f[m] - &f[m - 1]) / h
        } else {
            (&f[i + 1] - &f[i - 1]) / (2.0 * h)
        };
    }
    match i {
        0 => c(&[(0, -25.0 / 12.0), (1, 4.0), (2, -3.0), (3, 4.0 / 3.0), (4, -0.25)]),
        1 => c(&[(0, -0.25), (1, -5.0 / 6.0), (2, 1.5), (3, -0.5), (4, 1.0 / 12.0)]),
        _ if i == m => c(&[(m, 25.0 / 12.0), (m - 1, -4.0), (m - 2, 3.0), (m - 3, -4.0 / 3.0), (m - 4, 0.25)]),
        _ if i == m - 1 => c(&[(m, 0.25), (m - 1, 5.0 / 6.0), (m - 2, -1.5), (m - 3, 0.5), (m - 4, -1.0 / 12.0)]),
        _ => c(&[(i - 2, 1.0 / 12.0), (i - 1, -2.0 / 3.0), (i + 1, 2.0 / 3.0), (i + 2, -1.0 / 12.0)]),
    }
}

/// `g·x = g x g⁻¹ − (∂_θ g) g⁻¹` on a sampled gauge field.
pub fn gauge_act(g: &[Matrix], x: &CircleForm) -> Result<CircleForm> {
    if g.len() != x.points() {
        return Err(Error::Dimension("gauge field and form sampled differently".into()));
    }
    let mut out = Vec::with_capacity(g.len());
    for j in 0..g.len() {
        let inv = g[j].clone().try_inverse().ok_or_else(|| Error::NotInvertible(format!("gauge field at θ_{j}")))?;
        out.push(&g[j] * &x.samples[j] * &inv - d_theta(g, j) * &inv);
    }
    CircleForm::new(out)
}

/// A smooth homotopy `X = x(z) + y(z) dz` on `S¹ × [0, 1]`, sampled.
#[derive(Clone, Debug)]
pub struct CircleHomotopy {
    /// `x(z_i)` for `i = 0..=m`
    pub x: Vec<CircleForm>,
    /// `y(z_i, θ_j)`
    pub y: Vec<Vec<Matrix>>,
}

impl CircleHomotopy {
    pub fn intervals(&self) -> usize {
        self.x.len() - 1
    }

    /// `max ‖∂_z x + ∂_θ y − [y, x]‖` over the grid.
    pub fn residual(&self) -> f64 {
        let m = self.intervals();
        let h = 1.0 / m as f64;
        let p = self.x[0].points();
        let mut worst: f64 = 0.0;
        for j in 0..p {
            let column: Vec<Matrix> = self.x.iter().map(|f| f.samples[j].clone()).collect();
            for i in 0..=m {
                let (y, x) = (&self.y[i][j], &self.x[i].samples[j]);
                let r = d_grid(&column, i, h) + d_theta(&self.y[i], j) - (y * x - x * y);
                worst = worst.max(r.norm());
            }
        }
        worst
    }
}

/// Homotopy `x(z) = g x₀ g⁻¹ − dg g⁻¹`, `y(z) = ∂_z g g⁻¹` from gauge fields `g[i][j] = g(z_i, θ_j)`.
#[derive(Clone, Debug)]
pub struct ForwardReport {
    pub homotopy: CircleHomotopy,
    pub residual: f64,
    pub start_error: f64,
}

pub fn homotopy_from_gauge_path(x0: &CircleForm, g: &[Vec<Matrix>]) -> Result<ForwardReport> {
    let m = g
        .len()
        .checked_sub(1)
        .filter(|&m| m >= 1)
        .ok_or_else(|| Error::Invalid("gauge path needs two z samples".into()))?;
    let p = x0.points();
    let n = x0.samples[0].nrows();
    let id = Matrix::identity(n, n);
    let start_error = g[0].iter().map(|a| (a - &id).norm()).fold(0.0, f64::max);
    if start_error > ENDPOINT_TOLERANCE {
        return Err(Error::Invalid("gauge path must start at the identity".into()));
    }
    let h = 1.0 / m as f64;
    let mut x = Vec::with_capacity(m + 1);
    let mut y = Vec::with_capacity(m + 1);
    for gi in g {
        if gi.len() != p {
            return Err(Error::Dimension("gauge path and form sampled differently".into()));
        }
        x.push(gauge_act(gi, x0)?);
    }
    let columns: Vec<Vec<Matrix>> = (0..p).map(|j| g.iter().map(|gi| gi[j].clone()).collect()).collect();
    for i in 0..=m {
        let mut row = Vec::with_capacity(p);
        for (j, column) in columns.iter().enumerate() {
            let inv = g[i][j].clone().try_inverse().ok_or_else(|| Error::NotInvertible(format!("g(z_{i}, θ_{j})")))?;
            row.push(d_grid(column, i, h) * inv);
        }
        y.push(row);
    }
    let homotopy = CircleHomotopy { x, y };
    let residual = homotopy.residual();
    Ok(ForwardReport { homotopy, residual, start_error })
}

/// Gauge field recovered by integrating `∂_z g = y g` pointwise on the circle.
#[derive(Clone, Debug)]
pub struct GaugeRecovery {
    /// `g(1, θ_j)`
    pub g: Vec<Matrix>,
    pub endpoint_error: f64,
}

pub fn gauge_from_homotopy(h: &CircleHomotopy, tolerance: f64) -> Result<GaugeRecovery> {
    let m = h.intervals();
    if m % 2 != 0 {
        return Err(Error::Invalid("homotopy needs an even number of z intervals".into()));
    }
    let p = h.x[0].points();
    let n = h.x[0].samples[0].nrows();
    let mut g = Vec::with_capacity(p);
    for j in 0..p {
        let path = SampledMatrixPath::new(h.y.iter().map(|row| row[j].clone()).collect())?;
        g.push(integrate(&path, 0, m, &Matrix::identity(n, n)).pop().expect("nonempty"));
    }
    let predicted = gauge_act(&g, &h.x[0])?;
    let endpoint_error = predicted.max_distance(&h.x[m]);
    if endpoint_error > tolerance {
        return Err(Error::Inconsistent(format!(
            "x(1) differs from the transported gauge of x(0) by {endpoint_error:.3e} > {tolerance:.1e}"
        )));
    }
    Ok(GaugeRecovery { g, endpoint_error })
}

/// Coefficients of the characteristic polynomial, by Faddeev-LeVerrier.
pub fn characteristic_polynomial(a: &Matrix) -> Vec<f64> {
    let n = a.nrows();
    let mut coeffs = vec![1.0];
    let mut mk = Matrix::zeros(n, n);
    let id = Matrix::identity(n, n);
    let mut c = 1.0;
    for k in 1..=n {
        mk = a * (&mk + &id * c);
        c = -mk.trace() / k as f64;
        coeffs.push(c);
    }
    coeffs
}
