//! Exact solution of the walk through its discrete Fourier representation:
//! the closed-form trigonometric sums, the Fourier-domain eigen-solution
//! with an inverse transform, and the shared frequency-bin geometry.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, WalkError};
use crate::fft::{self, Algorithm};
use crate::model::{CoinParameters, WalkerState};

/// Residual allowed on the sites t+1..N−1 after an inverse transform.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// How to pick the transform size N for a time step t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformSize {
    /// N = t + 1
    Minimal,
    /// Smallest power of two exceeding t.
    PowerOfTwo,
}

impl TransformSize {
    pub fn for_time(self, t: usize) -> usize {
        match self {
            TransformSize::Minimal => t + 1,
            TransformSize::PowerOfTwo => (t + 1).next_power_of_two(),
        }
    }
}

fn check_size(t: usize, size: usize) -> Result<()> {
    if size > t {
        Ok(())
    } else {
        Err(WalkError::TransformTooSmall { size, t })
    }
}

/// π·k/N reduced into [0, 2π) before evaluation; k may be negative.
pub(crate) fn pi_fraction(k: i64, size: usize) -> f64 {
    let two_n = 2 * size as i64;
    PI * k.rem_euclid(two_n) as f64 / size as f64
}

/// Geometry of one frequency r/N: cos πx and the angle ω_x.
///
/// cos πx is evaluated as sin(π(N−2r)/2N) so that it is exactly zero at
/// 2r = N, and cos ω as √(sin²θ + cos²θ cos²πx), which is exactly zero only
/// at θ = 0 together with 2r = N.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bin {
    pub cos_pix: f64,
    pub cos_omega: f64,
    pub omega: f64,
}

impl Bin {
    pub fn new(cos_theta: f64, sin_theta: f64, r: usize, size: usize) -> Self {
        let folded = r.min(size - r);
        let sin_pix = (PI * folded as f64 / size as f64).sin();
        let cos_pix = (PI * (size as f64 - 2.0 * r as f64) / (2.0 * size as f64)).sin();
        let sin_omega = cos_theta * sin_pix;
        let cos_omega = (sin_theta * sin_theta + cos_theta * cos_theta * cos_pix * cos_pix).sqrt();
        Self {
            cos_pix,
            cos_omega,
            omega: sin_omega.atan2(cos_omega),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.cos_omega == 0.0
    }

    /// cosθ cos πx / cos ω, continued by 0 at the degenerate point.
    pub fn mixing_ratio(&self, cos_theta: f64) -> f64 {
        if self.is_degenerate() {
            0.0
        } else {
            cos_theta * self.cos_pix / self.cos_omega
        }
    }

    /// sinθ / cos ω, continued by 1 at the degenerate point.
    pub fn coupling_weight(&self, sin_theta: f64) -> f64 {
        if self.is_degenerate() {
            1.0
        } else {
            sin_theta / self.cos_omega
        }
    }
}

fn bins(params: &CoinParameters, size: usize) -> Vec<Bin> {
    (0..size)
        .map(|r| Bin::new(params.cos_theta(), params.sin_theta(), r, size))
        .collect()
}

/// ω_x = arcsin(cosθ · sin πx), the branch in [0, π/2].
pub fn omega_of(theta: f64, x: f64) -> f64 {
    let (sin_theta, cos_theta) = theta.sin_cos();
    let sin_pix = (PI * x).sin();
    let cos_pix = (PI * x).cos();
    let sin_omega = cos_theta * sin_pix;
    let cos_omega = (sin_theta * sin_theta + cos_theta * cos_theta * cos_pix * cos_pix).sqrt();
    sin_omega.atan2(cos_omega)
}

/// φ(ν, x) = π(2ν−1)x + ω_x
pub fn phase_phi(nu: f64, x: f64, theta: f64) -> f64 {
    PI * (2.0 * nu - 1.0) * x + omega_of(theta, x)
}

/// (1 ± (−1)^t)/2
fn parity_weights(t: usize) -> (f64, f64) {
    if t.is_multiple_of(2) {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    }
}

/// Evaluates the two closed-form trigonometric sums for ψ₀ and ψ₁ at every
/// site n ∈ 0..=t with transform size `size` > t.
pub fn closed_form_state(params: &CoinParameters, t: usize, size: usize) -> Result<WalkerState> {
    check_size(t, size)?;
    let (c, s) = (params.cos_theta(), params.sin_theta());
    let (even, odd) = parity_weights(t);
    let stay_offset = even + odd * c;
    let move_offset = even - odd * c;
    let table = bins(params, size);
    let e_minus = params.phase().conj();
    let e_plus = params.phase();
    let scale = 1.0 / size as f64;
    let tf = t as f64;

    let sites: Vec<(Complex64, Complex64)> = (0..=t)
        .into_par_iter()
        .map(|n| {
            let shift = 2 * n as i64 - t as i64;
            // sums multiplying cosη, e^{−iφ}sinη, e^{iφ}cosη and sinη
            let (mut a, mut b, mut d, mut e) = (stay_offset, s * odd, s * odd, move_offset);
            for (r, bin) in table.iter().enumerate().skip(1) {
                let r = r as i64;
                let wt = bin.omega * tf;
                let base = pi_fraction(shift * r, size) + wt;
                let fwd = pi_fraction((shift + 1) * r, size) + wt;
                let back = pi_fraction((shift - 1) * r, size) + wt;
                let ratio = bin.mixing_ratio(c);
                let g = bin.coupling_weight(s);
                let cos_base = base.cos();
                a += (1.0 + ratio) * cos_base;
                b += g * fwd.cos();
                d += g * back.cos();
                e += (1.0 - ratio) * cos_base;
            }
            let psi0 = (params.cos_eta() * a + e_minus * (params.sin_eta() * b)) * scale;
            let psi1 = (e_plus * (params.cos_eta() * d) + params.sin_eta() * e) * scale;
            (psi0, psi1)
        })
        .collect();
    let (amp0, amp1) = sites.into_iter().unzip();
    WalkerState::new(t, amp0, amp1)
}

/// Fourier-domain amplitudes ψ̃₀(r,t), ψ̃₁(r,t) for r ∈ 0..N.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSlice {
    t: usize,
    size: usize,
    tilde0: Vec<Complex64>,
    tilde1: Vec<Complex64>,
    degenerate_bins: Vec<usize>,
}

impl SpectralSlice {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tilde0(&self) -> &[Complex64] {
        &self.tilde0
    }

    pub fn tilde1(&self) -> &[Complex64] {
        &self.tilde1
    }

    /// Frequencies where cos ω vanished and the limit value was substituted.
    pub fn degenerate_bins(&self) -> &[usize] {
        &self.degenerate_bins
    }
}

/// The two Fourier-domain eigenvalues at frequency r/N:
/// λ₊ = e^{−i(ω−πr/N)}, λ₋ = −e^{i(ω+πr/N)}.
pub fn eigenvalues(theta: f64, r: usize, size: usize) -> (Complex64, Complex64) {
    let (s, c) = theta.sin_cos();
    let bin = Bin::new(c, s, r, size);
    let pix = pi_fraction(r as i64, size);
    (
        Complex64::from_polar(1.0, pix - bin.omega),
        -Complex64::from_polar(1.0, pix + bin.omega),
    )
}

/// Closed Fourier-domain solution at time t for every frequency r ∈ 0..N.
pub fn spectral_evolve(params: &CoinParameters, t: usize, size: usize) -> Result<SpectralSlice> {
    check_size(t, size)?;
    let (c, s) = (params.cos_theta(), params.sin_theta());
    let (ce, se) = (params.cos_eta(), params.sin_eta());
    let e_plus = params.phase();
    let e_minus = e_plus.conj();
    let sign_t = if t.is_multiple_of(2) { 1.0 } else { -1.0 };

    let mut tilde0 = Vec::with_capacity(size);
    let mut tilde1 = Vec::with_capacity(size);
    let mut degenerate_bins = Vec::new();
    if t == 0 {
        // the transformed initial state, without eigenvector round-off
        tilde0.resize(size, Complex64::new(ce, 0.0));
        tilde1.resize(size, Complex64::new(se, 0.0));
    }
    for r in (0..size).filter(|_| t > 0) {
        let bin = Bin::new(c, s, r, size);
        let pix = pi_fraction(r as i64, size);
        let t_pix = pi_fraction(t as i64 * r as i64, size);
        let t_omega = bin.omega * t as f64;
        if bin.is_degenerate() {
            // θ = 0: the coin is diagonal and each component evolves alone
            degenerate_bins.push(r);
            let advance = Complex64::from_polar(sign_t, pi_fraction(2 * t as i64 * r as i64, size));
            tilde0.push(Complex64::new(ce, 0.0));
            tilde1.push(advance * se);
            continue;
        }
        let lp = Complex64::from_polar(1.0, pix - bin.omega);
        let lm = -Complex64::from_polar(1.0, pix + bin.omega);
        let lp_t = Complex64::from_polar(1.0, t_pix - t_omega);
        let lm_t = Complex64::from_polar(sign_t, t_pix + t_omega);
        let half = 1.0 / (2.0 * bin.cos_omega);
        let back = Complex64::from_polar(half, -pix);
        let fwd = Complex64::from_polar(half, pix);
        let double_back = Complex64::from_polar(1.0, -2.0 * pix);

        let coupled = e_minus * (s * se);
        let psi0 = back * (lp_t * ((c - lm) * ce + coupled) - lm_t * ((c - lp) * ce + coupled));

        let direct = e_plus * (ce * s);
        let psi1 = fwd
            * (lp_t * (direct + se * (lp - c) * double_back)
                - lm_t * (direct - se * (c - lm) * double_back));
        tilde0.push(psi0);
        tilde1.push(psi1);
    }
    Ok(SpectralSlice {
        t,
        size,
        tilde0,
        tilde1,
        degenerate_bins,
    })
}

/// Inverse transform of a slice, choosing the radix-2 path when N is a power
/// of two.
pub fn inverse_transform(slice: &SpectralSlice) -> Result<WalkerState> {
    inverse_transform_with(slice, Algorithm::Auto)
}

/// Inverse transform with an explicit algorithm. The amplitudes on sites
/// t+1..N must vanish to within [`TAIL_TOLERANCE`].
pub fn inverse_transform_with(slice: &SpectralSlice, algorithm: Algorithm) -> Result<WalkerState> {
    let mut amp0 = fft::inverse(&slice.tilde0, algorithm);
    let mut amp1 = fft::inverse(&slice.tilde1, algorithm);
    let tail = amp0[slice.t + 1..]
        .iter()
        .chain(&amp1[slice.t + 1..])
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if tail > TAIL_TOLERANCE {
        return Err(WalkError::NonVanishingTail {
            t: slice.t,
            max: tail,
        });
    }
    amp0.truncate(slice.t + 1);
    amp1.truncate(slice.t + 1);
    WalkerState::new(slice.t, amp0, amp1)
}

/// Zero-pads a state to N sites and applies the forward transform.
pub fn forward_transform(state: &WalkerState, size: usize) -> Result<SpectralSlice> {
    check_size(state.t(), size)?;
    let pad = |amp: &[Complex64]| {
        let mut v = amp.to_vec();
        v.resize(size, Complex64::default());
        fft::forward(&v, Algorithm::Auto)
    };
    Ok(SpectralSlice {
        t: state.t(),
        size,
        tilde0: pad(state.amp0()),
        tilde1: pad(state.amp1()),
        degenerate_bins: Vec::new(),
    })
}

/// spectral_evolve followed by inverse_transform.
pub fn spectral_state(params: &CoinParameters, t: usize, size: TransformSize) -> Result<WalkerState> {
    inverse_transform(&spectral_evolve(params, t, size.for_time(t))?)
}
