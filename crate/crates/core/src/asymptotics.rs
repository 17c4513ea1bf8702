//! Large-t behaviour of the walk: the stationary-phase saddle, approximate
//! wave functions, the oscillating PMF estimate ρ̄ with its envelopes, and
//! the stationary density of the rescaled position ε = (2ν−1)/cosθ.
//!
//! ν is shorthand for n/t throughout; ρ̄ estimates a mass on integer sites and
//! is never renormalised. Only [`StationaryDensity`] changes measure.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::model::CoinParameters;
use crate::observables::PmfSeries;
use crate::quadrature::integrate;

const DEGENERATE_COS: f64 = 1e-15;

/// ((1 − cosθ)/2, (1 + cosθ)/2)
pub fn allowed_interval(theta: f64) -> (f64, f64) {
    let c = theta.cos();
    (0.5 * (1.0 - c), 0.5 * (1.0 + c))
}

/// Guard band kept clear of the interval edges: max(2/t, 10⁻³).
pub fn default_guard(t: usize) -> f64 {
    (2.0 / t.max(1) as f64).max(1e-3)
}

/// Sites whose ν = n/t lies inside the allowed interval shrunk by `guard` on
/// both sides.
pub fn interior_sites(theta: f64, t: usize, guard: f64) -> Vec<usize> {
    let (lo, hi) = allowed_interval(theta);
    (0..=t)
        .filter(|&n| {
            let nu = n as f64 / t as f64;
            nu > lo + guard && nu < hi - guard
        })
        .collect()
}

fn check_interior(theta: f64, nu: f64) -> Result<()> {
    if theta.cos() < DEGENERATE_COS {
        return Err(WalkError::Degenerate("θ = π/2 collapses the allowed interval to ν = 1/2"));
    }
    let (lo, hi) = allowed_interval(theta);
    let inside = nu > lo && nu < hi && nu > 0.0 && nu < 1.0;
    if inside {
        Ok(())
    } else {
        Err(WalkError::OutsideAllowedInterval { nu, lo, hi })
    }
}

/// Saddle point of φ(ν,u) = π(2ν−1)u + ω_u in u at fixed ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleData {
    pub nu: f64,
    pub u0: f64,
    pub cos_pi_u0: f64,
    pub sin_pi_u0: f64,
    pub omega0: f64,
    pub sin_omega0: f64,
    pub cos_omega0: f64,
    /// φ(ν, u₀)
    pub phi0: f64,
    /// ∂²φ/∂u² at u₀
    pub phi2: f64,
}

/// Everything except the curvature, which diverges at θ = 0.
fn saddle_point(theta: f64, nu: f64) -> SaddleData {
    let (s, c) = theta.sin_cos();
    let q = nu * (1.0 - nu);
    let d = (c * c - (2.0 * nu - 1.0).powi(2)).max(0.0);
    let cos_pi_u0 = (1.0 - 2.0 * nu) / (2.0 * q.sqrt()) * theta.tan();
    let sin_pi_u0 = (d / q).sqrt() / (2.0 * c);
    let u0 = sin_pi_u0.atan2(cos_pi_u0) / PI;
    let sin_omega0 = 0.5 * (d / q).sqrt();
    let cos_omega0 = s / (2.0 * q.sqrt());
    let omega0 = sin_omega0.atan2(cos_omega0);
    SaddleData {
        nu,
        u0,
        cos_pi_u0,
        sin_pi_u0,
        omega0,
        sin_omega0,
        cos_omega0,
        phi0: PI * (2.0 * nu - 1.0) * u0 + omega0,
        phi2: -4.0 * PI * PI * q * d.sqrt() / s,
    }
}

/// Stationary point for ν strictly inside the allowed interval; θ must lie
/// in (0, π/2).
pub fn saddle(theta: f64, nu: f64) -> Result<SaddleData> {
    check_interior(theta, nu)?;
    if theta.sin() == 0.0 {
        return Err(WalkError::Degenerate("θ = 0 gives an unbounded saddle curvature"));
    }
    Ok(saddle_point(theta, nu))
}

/// Stationary-phase approximations of ψ₀(n,t) and ψ₁(n,t).
pub fn asymptotic_state(params: &CoinParameters, t: usize, n: usize) -> Result<(Complex64, Complex64)> {
    if t == 0 {
        return Err(WalkError::Degenerate("the asymptotic wave function needs t ≥ 1"));
    }
    let nu = n as f64 / t as f64;
    let sp = saddle(params.theta(), nu)?;
    let (c, s) = (params.cos_theta(), params.sin_theta());
    let d = c * c - (2.0 * nu - 1.0).powi(2);
    let amp = (2.0 * s / (PI * d.sqrt() * t as f64)).sqrt();
    let arg = sp.phi0 * t as f64 - FRAC_PI_4;
    let shift = PI * sp.u0;
    let stay = ((1.0 - nu) / nu).sqrt();
    let e = params.phase();
    let psi0 = Complex64::from(params.cos_eta() * amp * stay * arg.cos())
        + e.conj() * (params.sin_eta() * amp * (arg + shift).cos());
    let psi1 = e * (params.cos_eta() * amp * (arg - shift).cos())
        + params.sin_eta() * amp * (arg.cos() / stay);
    Ok((psi0, psi1))
}

/// The pieces of ρ̄ at one ν: prefactor, non-oscillating bracket and the
/// oscillation (|R|, Ω, φ₀).
#[derive(Debug, Clone, Copy)]
struct Envelope {
    prefactor: f64,
    bracket: f64,
    sine_coeff: f64,
    cosine_coeff: f64,
    r_signed: f64,
    big_omega: f64,
    phi0: f64,
}

impl Envelope {
    fn new(params: &CoinParameters, t: usize, nu: f64) -> Result<Self> {
        check_interior(params.theta(), nu)?;
        let (c, s) = (params.cos_theta(), params.sin_theta());
        let tan = s / c;
        let (c2e, s2e) = ((2.0 * params.eta()).cos(), (2.0 * params.eta()).sin());
        let cp = params.cos_varphi();
        let x = 2.0 * nu - 1.0;
        let d = c * c - x * x;
        let drift = c2e + s2e * tan * cp;
        let den = x / (c * c) - drift;
        let num = (1.0 - x * x / (c * c)).sqrt() * (c2e * tan - s2e * cp);
        Ok(Self {
            prefactor: s / (2.0 * PI * t as f64 * nu * (1.0 - nu) * d.sqrt()),
            bracket: 1.0 - x * drift,
            sine_coeff: x * den,
            cosine_coeff: x * num,
            r_signed: x * den.hypot(num),
            big_omega: (x * num).atan2(x * den),
            phi0: saddle_point(params.theta(), nu).phi0,
        })
    }

    fn r_abs(&self) -> f64 {
        self.r_signed.abs()
    }

    fn oscillation(&self, t: usize) -> f64 {
        (2.0 * self.phi0 * t as f64 + self.big_omega).sin()
    }

    fn rho_bar(&self, t: usize) -> f64 {
        self.prefactor * (self.bracket + self.r_abs() * self.oscillation(t))
    }

    /// The same quantity before folding the two harmonics into one sine.
    fn rho_bar_expanded(&self, t: usize) -> f64 {
        let arg = 2.0 * self.phi0 * t as f64;
        self.prefactor * (self.bracket + self.sine_coeff * arg.sin() + self.cosine_coeff * arg.cos())
    }
}

/// Asymptotic estimate ρ̄(n,t) of the PMF, oscillating term included.
pub fn rho_bar(params: &CoinParameters, t: usize, n: usize) -> Result<f64> {
    let nu = n as f64 / t as f64;
    Ok(Envelope::new(params, t, nu)?.rho_bar(t))
}

/// The unfolded form of ρ̄ with separate sin 2φ₀t and cos 2φ₀t terms.
pub fn rho_bar_expanded(params: &CoinParameters, t: usize, n: usize) -> Result<f64> {
    let nu = n as f64 / t as f64;
    Ok(Envelope::new(params, t, nu)?.rho_bar_expanded(t))
}

/// ρ̄ together with its envelopes on a grid of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticProfile {
    pub t: usize,
    pub sites: Vec<usize>,
    pub nus: Vec<f64>,
    pub rho_bar: Vec<f64>,
    pub rho_sup: Vec<f64>,
    pub rho_inf: Vec<f64>,
    pub rho_med: Vec<f64>,
    /// |R(ν)|
    pub r_mag: Vec<f64>,
    /// Ω(ν)
    pub big_omega: Vec<f64>,
}

pub fn rho_bounds(params: &CoinParameters, t: usize, grid: &[usize]) -> Result<AsymptoticProfile> {
    let mut profile = AsymptoticProfile {
        t,
        sites: grid.to_vec(),
        nus: Vec::with_capacity(grid.len()),
        rho_bar: Vec::with_capacity(grid.len()),
        rho_sup: Vec::with_capacity(grid.len()),
        rho_inf: Vec::with_capacity(grid.len()),
        rho_med: Vec::with_capacity(grid.len()),
        r_mag: Vec::with_capacity(grid.len()),
        big_omega: Vec::with_capacity(grid.len()),
    };
    for &n in grid {
        let nu = n as f64 / t as f64;
        let env = Envelope::new(params, t, nu)?;
        let sup = env.prefactor * (env.bracket + env.r_abs());
        let inf = env.prefactor * (env.bracket - env.r_abs());
        let med = env.prefactor * env.bracket;
        let mean = 0.5 * (sup + inf);
        assert!(
            (mean - med).abs() <= 1e-14 * med.abs().max(1.0),
            "median envelope mismatch at ν = {nu}: {mean} vs {med}"
        );
        profile.nus.push(nu);
        profile.rho_bar.push(env.rho_bar(t));
        profile.rho_sup.push(sup);
        profile.rho_inf.push(inf);
        profile.rho_med.push(med);
        profile.r_mag.push(env.r_abs());
        profile.big_omega.push(env.big_omega);
    }
    Ok(profile)
}

/// Weak-limit density ϱ(ε) of ε = (2ν−1)/cosθ on (−1, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryDensity {
    pub theta: f64,
    pub varphi: f64,
    pub eta: f64,
    sin_theta: f64,
    cos_theta: f64,
    skew: f64,
}

pub fn stationary_density(params: &CoinParameters) -> Result<StationaryDensity> {
    if params.sin_theta() == 0.0 {
        return Err(WalkError::Degenerate(
            "θ = 0 concentrates the walker on the two endpoints; no density exists",
        ));
    }
    let (c2e, s2e) = ((2.0 * params.eta()).cos(), (2.0 * params.eta()).sin());
    Ok(StationaryDensity {
        theta: params.theta(),
        varphi: params.varphi(),
        eta: params.eta(),
        sin_theta: params.sin_theta(),
        cos_theta: params.cos_theta(),
        skew: c2e * params.cos_theta() + s2e * params.sin_theta() * params.cos_varphi(),
    })
}

const CDF_TOLERANCE: f64 = 1e-12;

impl StationaryDensity {
    /// ϱ(ε), zero outside (−1, 1).
    pub fn density(&self, eps: f64) -> f64 {
        if eps <= -1.0 || eps >= 1.0 {
            return 0.0;
        }
        let e2 = eps * eps;
        self.sin_theta / PI / (1.0 - e2 * self.cos_theta * self.cos_theta) / (1.0 - e2).sqrt()
            * (1.0 - eps * self.skew)
    }

    /// ϱ(sin u)·cos u, smooth on [−π/2, π/2].
    fn density_in_angle(&self, u: f64) -> f64 {
        let s = u.sin();
        self.sin_theta / PI * (1.0 - s * self.skew) / (1.0 - s * s * self.cos_theta * self.cos_theta)
    }

    fn angle(eps: f64) -> f64 {
        eps.clamp(-1.0, 1.0).asin()
    }

    /// ∫_{−1}^{ε} ϱ
    pub fn cdf(&self, eps: f64) -> f64 {
        integrate(|u| self.density_in_angle(u), -FRAC_PI_2, Self::angle(eps), CDF_TOLERANCE)
    }

    /// ∫_{−1}^{1} ϱ, evaluated after the substitution ε = sin u.
    pub fn total_mass(&self) -> f64 {
        integrate(|u| self.density_in_angle(u), -FRAC_PI_2, FRAC_PI_2, CDF_TOLERANCE)
    }

    /// CDF at an increasing sequence of points, integrating piecewise.
    pub fn cdf_sorted(&self, points: &[f64]) -> Vec<f64> {
        let mut acc = 0.0;
        let mut last = -FRAC_PI_2;
        points
            .iter()
            .map(|&eps| {
                let u = Self::angle(eps);
                assert!(u >= last, "cdf_sorted needs increasing points");
                acc += integrate(|v| self.density_in_angle(v), last, u, CDF_TOLERANCE);
                last = u;
                acc
            })
            .collect()
    }

    /// ε at the cell boundary between sites n and n+1 of a time-t lattice.
    pub fn cell_edge(&self, n: usize, t: usize) -> f64 {
        ((2.0 * n as f64 + 1.0) / t as f64 - 1.0) / self.cos_theta
    }

    /// Sup-distance between the lattice CDF of `pmf` and ∫ϱ. Site n carries
    /// the cell up to ε_{n+1/2}, so the comparison points are the cell edges.
    pub fn weak_limit_distance(&self, pmf: &PmfSeries) -> Result<f64> {
        if self.cos_theta < DEGENERATE_COS {
            return Err(WalkError::Degenerate("θ = π/2 leaves ε = (2ν−1)/cosθ undefined"));
        }
        let t = pmf.t();
        let edges: Vec<f64> = (0..=t).map(|n| self.cell_edge(n, t)).collect();
        let limit = self.cdf_sorted(&edges);
        let mut lattice = 0.0;
        Ok(pmf
            .values()
            .iter()
            .zip(&limit)
            .map(|(rho, f)| {
                lattice += rho;
                (lattice - f).abs()
            })
            .fold(0.0, f64::max))
    }
}

/// ε = (2n/t − 1)/cosθ
pub fn epsilon_of(n: usize, t: usize, theta: f64) -> f64 {
    (2.0 * n as f64 / t as f64 - 1.0) / theta.cos()
}
