//! Weak measurement with a von Neumann pointer.
//!
//! The pointer starts in the Gaussian `φ(x) ∝ exp(−x²/4σ²)` (position
//! variance `σ²`, momentum variance `1/4σ²`, `ħ = 1`). The impulsive
//! coupling `exp(−i g A⊗p)` shifts the pointer by `g·λₖ` on each eigenspace
//! `Pₖ` of `A`, so after post-selecting `|post⟩` the pointer is
//!
//! ```text
//! χ(x) = Σₖ ⟨post|Pₖ|pre⟩ φ(x − g λₖ)
//! ```
//!
//! Every branch is an exact shifted Gaussian evaluated on the grid, so
//! there is no interpolation or sampling error. For small `g`,
//! `⟨x⟩ → g Re w` and `⟨p⟩ → 2 g Var(p) Im w` with `w` the weak value.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::hilbert::{c64, Operator, StateVector, C64};

/// Post-selection probabilities below this are treated as vanished.
pub const MIN_POST_SELECTION: f64 = 1e-14;

/// Uniform position grid `x_j = −extent + j·spacing`, `j < num_points`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointerGrid {
    num_points: usize,
    extent: f64,
    sigma: f64,
}

impl PointerGrid {
    pub const MIN_POINTS: usize = 64;
    /// Default half-width in units of sigma.
    pub const DEFAULT_EXTENT_SIGMAS: f64 = 10.0;

    pub fn new(num_points: usize, extent: f64, sigma: f64) -> Result<Self> {
        if num_points < Self::MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {} points, got {num_points}",
                Self::MIN_POINTS
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidGrid(format!("sigma must be positive, got {sigma}")));
        }
        if !(extent.is_finite() && extent >= 6.0 * sigma) {
            return Err(Error::InvalidGrid(format!(
                "extent {extent} must be at least 6 sigma ({})",
                6.0 * sigma
            )));
        }
        Ok(Self {
            num_points,
            extent,
            sigma,
        })
    }

    /// Grid with the default extent of ten sigma.
    pub fn with_points(num_points: usize, sigma: f64) -> Result<Self> {
        Self::new(num_points, Self::DEFAULT_EXTENT_SIGMAS * sigma, sigma)
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.num_points as f64
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        let dx = self.spacing();
        (0..self.num_points).map(move |j| -self.extent + j as f64 * dx)
    }

    /// Momentum variance of the initial pointer, `1/(4σ²)`.
    pub fn momentum_variance(&self) -> f64 {
        0.25 / (self.sigma * self.sigma)
    }

    /// Amplitude prefactor that makes the unshifted Gaussian have unit
    /// discrete norm.
    fn normalization(&self) -> f64 {
        let dx = self.spacing();
        let s2 = self.sigma * self.sigma;
        let sum: f64 = self.positions().map(|x| (-x * x / (2.0 * s2)).exp()).sum::<f64>() * dx;
        sum.powf(-0.5)
    }

    /// Discrete norm of the initial Gaussian.
    pub fn initial_norm(&self) -> f64 {
        let dx = self.spacing();
        let n = self.normalization();
        self.positions()
            .map(|x| {
                let a = n * self.gaussian_shape(x);
                a * a
            })
            .sum::<f64>()
            * dx
    }

    fn gaussian_shape(&self, u: f64) -> f64 {
        (-u * u / (4.0 * self.sigma * self.sigma)).exp()
    }
}

impl Default for PointerGrid {
    fn default() -> Self {
        Self::with_points(1024, 1.0).expect("valid default grid")
    }
}

/// Pointer statistics after post-selection at one coupling strength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointerStats {
    pub coupling: f64,
    pub post_selection_probability: f64,
    pub mean_position: f64,
    pub mean_momentum: f64,
    /// Norm of the joint system⊗pointer state after coupling, before
    /// post-selection.
    pub joint_norm: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MomentumMethod {
    /// Closed-form derivative of each Gaussian branch.
    #[default]
    Analytic,
    /// Discrete Fourier transform of the sampled pointer amplitudes.
    Fourier,
}

struct Branches {
    shifts: Vec<f64>,
    weights: Vec<C64>,
    populations: Vec<f64>,
}

fn branches(a: &Operator, pre: &StateVector, post: &StateVector) -> Result<Branches> {
    a.require_hermitian()?;
    let spec = a.eig_hermitian()?;
    let mut out = Branches {
        shifts: Vec::with_capacity(spec.len()),
        weights: Vec::with_capacity(spec.len()),
        populations: Vec::with_capacity(spec.len()),
    };
    for (lambda, proj) in spec.iter() {
        out.shifts.push(lambda);
        out.weights.push(proj.matrix_element(post, pre)?);
        out.populations.push(proj.expectation(pre)?.re);
    }
    Ok(out)
}

pub fn simulate(
    a: &Operator,
    pre: &StateVector,
    post: &StateVector,
    g: f64,
    grid: &PointerGrid,
) -> Result<PointerStats> {
    simulate_with(a, pre, post, g, grid, MomentumMethod::Analytic)
}

pub fn simulate_with(
    a: &Operator,
    pre: &StateVector,
    post: &StateVector,
    g: f64,
    grid: &PointerGrid,
    method: MomentumMethod,
) -> Result<PointerStats> {
    let b = branches(a, pre, post)?;
    simulate_branches(&b, g, grid, method)
}

fn simulate_branches(b: &Branches, g: f64, grid: &PointerGrid, method: MomentumMethod) -> Result<PointerStats> {
    let dx = grid.spacing();
    let norm = grid.normalization();
    let inv_2s2 = 0.5 / (grid.sigma * grid.sigma);

    let mut amplitude = Vec::with_capacity(grid.num_points);
    let mut derivative = Vec::with_capacity(grid.num_points);
    let mut joint_norm = 0.0;
    for x in grid.positions() {
        let mut chi = c64(0.0, 0.0);
        let mut dchi = c64(0.0, 0.0);
        for ((&shift, &w), &pop) in b.shifts.iter().zip(&b.weights).zip(&b.populations) {
            let u = x - g * shift;
            let phi = norm * grid.gaussian_shape(u);
            chi += w * phi;
            dchi += w * (-u * inv_2s2 * phi);
            joint_norm += pop * phi * phi;
        }
        amplitude.push(chi);
        derivative.push(dchi);
    }
    joint_norm *= dx;

    let probability: f64 = amplitude.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx;
    if probability.is_nan() || probability < MIN_POST_SELECTION {
        return Err(Error::PostSelectionVanished { probability });
    }
    let mean_position = grid
        .positions()
        .zip(&amplitude)
        .map(|(x, z)| x * z.norm_sqr())
        .sum::<f64>()
        * dx
        / probability;
    let mean_momentum = match method {
        // ⟨χ|−i d/dx|χ⟩ = ∫ Im(χ* χ') dx
        MomentumMethod::Analytic => {
            amplitude
                .iter()
                .zip(&derivative)
                .map(|(c, d)| (c.conj() * d).im)
                .sum::<f64>()
                * dx
                / probability
        }
        MomentumMethod::Fourier => fourier_mean_momentum(amplitude, dx),
    };

    Ok(PointerStats {
        coupling: g,
        post_selection_probability: probability,
        mean_position,
        mean_momentum,
        joint_norm,
    })
}

fn fourier_mean_momentum(mut samples: Vec<Complex64>, dx: f64) -> f64 {
    let n = samples.len();
    let fft = FftPlanner::new().plan_fft_forward(n);
    fft.process(&mut samples);
    let dk = 2.0 * PI / (n as f64 * dx);
    let (mut num, mut den) = (0.0, 0.0);
    for (m, z) in samples.iter().enumerate() {
        let idx = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
        let w = z.norm_sqr();
        num += idx * dk * w;
        den += w;
    }
    num / den
}

/// Simulates every coupling in `couplings`, in order.
pub fn scan(
    a: &Operator,
    pre: &StateVector,
    post: &StateVector,
    couplings: &[f64],
    grid: &PointerGrid,
    exec: Execution,
) -> Result<Vec<PointerStats>> {
    let b = branches(a, pre, post)?;
    exec::try_map(exec, couplings, |&g| {
        simulate_branches(&b, g, grid, MomentumMethod::Analytic)
    })
}

/// Weak value recovered from a coupling sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakValueEstimate {
    pub estimate: C64,
    /// RMS residual of the real-part and imaginary-part fits.
    pub residual: f64,
    pub per_g: Vec<PointerStats>,
}

/// Relative residual above which an extrapolation is rejected.
pub const FIT_RELATIVE_LIMIT: f64 = 0.1;
/// Estimates smaller than this are judged against it instead of their own
/// magnitude.
pub const FIT_MAGNITUDE_FLOOR: f64 = 1e-3;

pub fn extract_weak_value(
    a: &Operator,
    pre: &StateVector,
    post: &StateVector,
    g_sweep: &[f64],
    grid: &PointerGrid,
) -> Result<WeakValueEstimate> {
    extract_weak_value_with(a, pre, post, g_sweep, grid, Execution::default())
}

/// Extrapolates `⟨x⟩/g` and `2σ²⟨p⟩/g` to `g → 0` with a least-squares
/// line in `g²` (both ratios are even in `g`).
pub fn extract_weak_value_with(
    a: &Operator,
    pre: &StateVector,
    post: &StateVector,
    g_sweep: &[f64],
    grid: &PointerGrid,
    exec: Execution,
) -> Result<WeakValueEstimate> {
    validate_sweep(g_sweep)?;
    let per_g = scan(a, pre, post, g_sweep, grid, exec)?;
    let im_scale = 1.0 / (2.0 * grid.momentum_variance());
    let sq: Vec<f64> = g_sweep.iter().map(|g| g * g).collect();
    let re_ratios: Vec<f64> = per_g.iter().map(|s| s.mean_position / s.coupling).collect();
    let im_ratios: Vec<f64> = per_g.iter().map(|s| im_scale * s.mean_momentum / s.coupling).collect();
    let (re, re_res) = intercept_fit(&sq, &re_ratios);
    let (im, im_res) = intercept_fit(&sq, &im_ratios);

    let estimate = c64(re, im);
    let residual = re_res.hypot(im_res);
    if residual > FIT_RELATIVE_LIMIT * estimate.norm().max(FIT_MAGNITUDE_FLOOR) {
        return Err(Error::FitUnstable {
            residual,
            estimate: estimate.norm(),
        });
    }
    Ok(WeakValueEstimate {
        estimate,
        residual,
        per_g,
    })
}

fn validate_sweep(g_sweep: &[f64]) -> Result<()> {
    if g_sweep.is_empty() {
        return Err(Error::InvalidSweep("empty sweep".into()));
    }
    if let Some(g) = g_sweep.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(Error::InvalidSweep(format!("coupling must be positive, got {g}")));
    }
    if g_sweep.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidSweep("couplings must be strictly decreasing".into()));
    }
    Ok(())
}

/// Least-squares `y ≈ c₀ + c₁ t`; returns `(c₀, rms residual)`. A single
/// point returns itself.
fn intercept_fit(t: &[f64], y: &[f64]) -> (f64, f64) {
    let n = t.len() as f64;
    if t.len() == 1 {
        return (y[0], 0.0);
    }
    let mt = t.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let stt: f64 = t.iter().map(|x| (x - mt) * (x - mt)).sum();
    let sty: f64 = t.iter().zip(y).map(|(x, v)| (x - mt) * (v - my)).sum();
    let slope = if stt > 0.0 { sty / stt } else { 0.0 };
    let c0 = my - slope * mt;
    let rss: f64 = t.iter().zip(y).map(|(x, v)| (v - c0 - slope * x).powi(2)).sum();
    (c0, (rss / n).sqrt())
}
