//! Walk instance: coin angles, the reduced coin matrix, the walker state and
//! the mapping onto the conventional bidirectional lattice.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Result, WalkError};

/// Coin and initial-qubit angles in the reduced gauge (α = γ = 0).
///
/// Sines and cosines are evaluated once here; every inner loop reads the
/// cached values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinParameters {
    theta: f64,
    varphi: f64,
    eta: f64,
    cos_theta: f64,
    sin_theta: f64,
    cos_varphi: f64,
    sin_varphi: f64,
    cos_eta: f64,
    sin_eta: f64,
}

fn check_angle(name: &'static str, value: f64, hi: f64) -> Result<()> {
    if value.is_finite() && (0.0..=hi).contains(&value) {
        Ok(())
    } else {
        Err(WalkError::AngleOutOfRange {
            name,
            value,
            lo: 0.0,
            hi,
        })
    }
}

impl CoinParameters {
    /// θ ∈ [0, π/2], φ ∈ [0, π], η ∈ [0, π/2]; anything else is rejected.
    pub fn new(theta: f64, varphi: f64, eta: f64) -> Result<Self> {
        check_angle("theta", theta, FRAC_PI_2)?;
        check_angle("varphi", varphi, PI)?;
        check_angle("eta", eta, FRAC_PI_2)?;
        let (sin_theta, cos_theta) = theta.sin_cos();
        let (sin_varphi, cos_varphi) = varphi.sin_cos();
        let (sin_eta, cos_eta) = eta.sin_cos();
        Ok(Self {
            theta,
            varphi,
            eta,
            cos_theta,
            sin_theta,
            cos_varphi,
            sin_varphi,
            cos_eta,
            sin_eta,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn varphi(&self) -> f64 {
        self.varphi
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    pub fn sin_theta(&self) -> f64 {
        self.sin_theta
    }

    pub fn cos_varphi(&self) -> f64 {
        self.cos_varphi
    }

    pub fn sin_varphi(&self) -> f64 {
        self.sin_varphi
    }

    pub fn cos_eta(&self) -> f64 {
        self.cos_eta
    }

    pub fn sin_eta(&self) -> f64 {
        self.sin_eta
    }

    /// e^{iφ}
    pub fn phase(&self) -> Complex64 {
        Complex64::new(self.cos_varphi, self.sin_varphi)
    }

    /// ψ₀(0,1), the stay-put amplitude after the first step.
    pub fn first_step_stay(&self) -> Complex64 {
        self.cos_eta * self.cos_theta + self.phase().conj() * (self.sin_eta * self.sin_theta)
    }

    /// ψ₁(1,1), the move amplitude after the first step.
    pub fn first_step_move(&self) -> Complex64 {
        self.phase() * (self.cos_eta * self.sin_theta) - self.sin_eta * self.cos_theta
    }
}

/// The reduced 2×2 coin, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix {
    pub u00: Complex64,
    pub u01: Complex64,
    pub u10: Complex64,
    pub u11: Complex64,
}

impl CoinMatrix {
    /// sinθcosφ·σ₁ + sinθsinφ·σ₂ + cosθ·σ₃, assembled from the Pauli matrices.
    pub fn from_pauli(params: &CoinParameters) -> Self {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let (x, y, z) = (
            params.sin_theta * params.cos_varphi,
            params.sin_theta * params.sin_varphi,
            params.cos_theta,
        );
        let s1 = [[zero, one], [one, zero]];
        let s2 = [[zero, -i], [i, zero]];
        let s3 = [[one, zero], [zero, -one]];
        let entry = |r: usize, c: usize| s1[r][c] * x + s2[r][c] * y + s3[r][c] * z;
        Self {
            u00: entry(0, 0),
            u01: entry(0, 1),
            u10: entry(1, 0),
            u11: entry(1, 1),
        }
    }

    /// Applies the coin to a single-site qubit.
    pub fn apply(&self, a0: Complex64, a1: Complex64) -> (Complex64, Complex64) {
        (
            self.u00 * a0 + self.u01 * a1,
            self.u10 * a0 + self.u11 * a1,
        )
    }

    /// Largest entrywise deviation of U†U from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let m = [[self.u00, self.u01], [self.u10, self.u11]];
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let acc: Complex64 = m.iter().map(|row| row[r].conj() * row[c]).sum();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &CoinMatrix) -> f64 {
        [
            self.u00 - other.u00,
            self.u01 - other.u01,
            self.u10 - other.u10,
            self.u11 - other.u11,
        ]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
    }
}

pub fn make_coin(params: &CoinParameters) -> CoinMatrix {
    let e = params.phase();
    CoinMatrix {
        u00: Complex64::new(params.cos_theta, 0.0),
        u01: e.conj() * params.sin_theta,
        u10: e * params.sin_theta,
        u11: Complex64::new(-params.cos_theta, 0.0),
    }
}

/// Two-component wave function on the sites 0..=t at time t.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    t: usize,
    amp0: Vec<Complex64>,
    amp1: Vec<Complex64>,
}

impl WalkerState {
    /// Both components must hold exactly t+1 finite amplitudes.
    pub fn new(t: usize, amp0: Vec<Complex64>, amp1: Vec<Complex64>) -> Result<Self> {
        for len in [amp0.len(), amp1.len()] {
            if len != t + 1 {
                return Err(WalkError::ShapeMismatch {
                    t,
                    expected: t + 1,
                    got: len,
                });
            }
        }
        for (site, (a, b)) in amp0.iter().zip(&amp1).enumerate() {
            if !(a.is_finite() && b.is_finite()) {
                return Err(WalkError::NonFinite { site });
            }
        }
        Ok(Self { t, amp0, amp1 })
    }

    pub(crate) fn from_parts(t: usize, amp0: Vec<Complex64>, amp1: Vec<Complex64>) -> Self {
        debug_assert_eq!(amp0.len(), t + 1);
        debug_assert_eq!(amp1.len(), t + 1);
        Self { t, amp0, amp1 }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn amp0(&self) -> &[Complex64] {
        &self.amp0
    }

    pub fn amp1(&self) -> &[Complex64] {
        &self.amp1
    }

    /// ψ₀(n), zero outside the support.
    pub fn psi0(&self, n: i64) -> Complex64 {
        usize::try_from(n)
            .ok()
            .and_then(|k| self.amp0.get(k).copied())
            .unwrap_or_default()
    }

    /// ψ₁(n), zero outside the support.
    pub fn psi1(&self, n: i64) -> Complex64 {
        usize::try_from(n)
            .ok()
            .and_then(|k| self.amp1.get(k).copied())
            .unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0
            .iter()
            .zip(&self.amp1)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum()
    }

    /// Fails with [`WalkError::NormDrift`] when |Σρ − 1| exceeds `tolerance`.
    pub fn check_norm(&self, tolerance: f64) -> Result<()> {
        let drift = (self.norm_sqr() - 1.0).abs();
        if drift > tolerance {
            Err(WalkError::NormDrift { drift, tolerance })
        } else {
            Ok(())
        }
    }

    /// Largest componentwise modulus of the difference between two states.
    /// States at different times compare as infinitely far apart.
    pub fn max_abs_diff(&self, other: &WalkerState) -> f64 {
        if self.t != other.t {
            return f64::INFINITY;
        }
        self.amp0
            .iter()
            .zip(&other.amp0)
            .chain(self.amp1.iter().zip(&other.amp1))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub fn make_initial_state(params: &CoinParameters) -> WalkerState {
    WalkerState::from_parts(
        0,
        vec![Complex64::new(params.cos_eta, 0.0)],
        vec![Complex64::new(params.sin_eta, 0.0)],
    )
}

/// Unidirectional site n of a time-t state sits at m = 2n − t on the
/// conventional lattice.
pub fn bidirectional_site(n: usize, t: usize) -> i64 {
    2 * n as i64 - t as i64
}

pub fn to_bidirectional(state: &WalkerState) -> BTreeMap<i64, (Complex64, Complex64)> {
    state
        .amp0
        .iter()
        .zip(&state.amp1)
        .enumerate()
        .map(|(n, (a, b))| (bidirectional_site(n, state.t), (*a, *b)))
        .collect()
}
