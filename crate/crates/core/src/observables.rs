//! Quantities derived from the wave function: the PMF, probability current,
//! continuity and Ehrenfest checks, and the symmetry classification.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::evolution::evolve;
use crate::model::{CoinMatrix, CoinParameters, WalkerState};

/// Which computation produced a [`PmfSeries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    Closed,
    Spectral,
    Lambda,
    Asymptotic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Closed => "closed",
            Method::Spectral => "spectral",
            Method::Lambda => "lambda",
            Method::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Probability mass over the sites 0..=t.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfSeries {
    t: usize,
    values: Vec<f64>,
    method: Method,
}

impl PmfSeries {
    /// Values must be finite and nonnegative, one per site.
    pub fn new(t: usize, values: Vec<f64>, method: Method) -> Result<Self> {
        if values.len() != t + 1 {
            return Err(WalkError::ShapeMismatch {
                t,
                expected: t + 1,
                got: values.len(),
            });
        }
        // round-off in the decompositions can dip a hair below zero
        if let Some((n, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < -1e-14)
        {
            return Err(WalkError::InvalidPmf(format!("ρ({n}) = {v}")));
        }
        Ok(Self { t, values, method })
    }

    pub fn from_state(state: &WalkerState, method: Method) -> Self {
        let values = state
            .amp0()
            .iter()
            .zip(state.amp1())
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect();
        Self {
            t: state.t(),
            values,
            method,
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Checks Σρ = 1 within `tolerance`; asymptotic estimates are exempt.
    pub fn validate(&self, tolerance: f64) -> Result<()> {
        if self.method == Method::Asymptotic {
            return Ok(());
        }
        let drift = (self.total() - 1.0).abs();
        if drift > tolerance {
            Err(WalkError::InvalidPmf(format!(
                "{} mass sums to {} (tolerance {tolerance:e})",
                self.method,
                self.total()
            )))
        } else {
            Ok(())
        }
    }

    pub fn max_abs_diff(&self, other: &PmfSeries) -> f64 {
        if self.t != other.t {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// max_l |ρ(⌊t/2⌋−l) − ρ(⌈t/2⌉+l)|
    pub fn reflection_residual(&self) -> f64 {
        let lo = self.t / 2;
        let hi = self.t.div_ceil(2);
        (0..=lo)
            .map(|l| (self.values[lo - l] - self.values[hi + l]).abs())
            .fold(0.0, f64::max)
    }
}

/// J(n,t) = |ψ₁(n+1,t+1)|² for n ∈ 0..=t, read off the state at t+1.
pub fn probability_current(state_next: &WalkerState) -> Vec<f64> {
    state_next.amp1()[1..].iter().map(|z| z.norm_sqr()).collect()
}

/// J(n,t) = |e^{iφ}sinθ ψ₀(n,t) − cosθ ψ₁(n,t)|² from the state at t.
pub fn probability_current_local(state: &WalkerState, coin: &CoinMatrix) -> Vec<f64> {
    state
        .amp0()
        .iter()
        .zip(state.amp1())
        .map(|(a, b)| (coin.u10 * a + coin.u11 * b).norm_sqr())
        .collect()
}

/// max_n |ρ(n,t+1) − ρ(n,t) − J(n−1,t) + J(n,t)| with J(−1,t) = 0.
pub fn continuity_residual(state_t: &WalkerState, state_t1: &WalkerState) -> Result<f64> {
    if state_t1.t() != state_t.t() + 1 {
        return Err(WalkError::TimeMismatch {
            first: state_t.t(),
            second: state_t1.t(),
        });
    }
    let before = PmfSeries::from_state(state_t, Method::Oracle);
    let after = PmfSeries::from_state(state_t1, Method::Oracle);
    let current = probability_current(state_t1);
    let at = |v: &[f64], n: i64| usize::try_from(n).ok().and_then(|k| v.get(k).copied()).unwrap_or(0.0);
    Ok((0..=state_t1.t() as i64)
        .map(|n| {
            (at(after.values(), n) - at(before.values(), n) - at(&current, n - 1) + at(&current, n)).abs()
        })
        .fold(0.0, f64::max))
}

/// ⟨X⟩_t = Σ n ρ(n,t)
pub fn position_mean(pmf: &PmfSeries) -> f64 {
    pmf.values().iter().enumerate().map(|(n, v)| n as f64 * v).sum()
}

/// Δ⟨X⟩ = Σₙ |ψ₁(n,t+1)|², evaluated on the state at t+1.
pub fn ehrenfest_increment(state_t1: &WalkerState) -> f64 {
    state_t1.amp1().iter().map(|z| z.norm_sqr()).sum()
}

/// |Σₙ ψ(n)† U ψ(n)|, the modulus of the coin expectation value.
pub fn fair_coin_residual(state: &WalkerState, coin: &CoinMatrix) -> f64 {
    state
        .amp0()
        .iter()
        .zip(state.amp1())
        .map(|(a, b)| {
            let (ua, ub) = coin.apply(*a, *b);
            a.conj() * ua + b.conj() * ub
        })
        .sum::<Complex64>()
        .norm()
}

/// The η solving cot 2η = −tanθ cosφ in [0, π/2]. θ = π/2 is singular.
pub fn approximate_symmetry_eta(theta: f64, varphi: f64) -> Result<f64> {
    let (s, c) = theta.sin_cos();
    if c.abs() < 1e-15 {
        return Err(WalkError::Singular("θ = π/2 leaves cot 2η = −tanθ cosφ undefined"));
    }
    Ok(0.5 * c.atan2(-s * varphi.cos()))
}

pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryFamily {
    /// θ = 0, η = π/4
    Endpoint,
    /// φ = π/2, η = π/4
    OddCoin,
    /// θ = π/2, η = π/4
    Confined,
    /// cot 2η = −tanθ cosφ without exact symmetry
    Approximate,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryVerdict {
    pub family: SymmetryFamily,
    /// Every exact family whose defining conditions hold.
    pub exact_families: Vec<SymmetryFamily>,
    /// cos2η cos2θ + sin2η sin2θ cosφ
    pub even_condition: f64,
    /// cos2η cosθ + sin2η sinθ cosφ, also the approximate-symmetry condition
    pub odd_condition: f64,
    /// Reflection residual of the exact PMF at `t_probe`.
    pub reflection_residual: f64,
    pub t_probe: usize,
    pub tolerance: f64,
}

pub fn symmetry_conditions(params: &CoinParameters) -> (f64, f64) {
    let (c, s) = (params.cos_theta(), params.sin_theta());
    let (c2e, s2e) = ((2.0 * params.eta()).cos(), (2.0 * params.eta()).sin());
    let cp = params.cos_varphi();
    (
        c2e * (c * c - s * s) + s2e * 2.0 * s * c * cp,
        c2e * c + s2e * s * cp,
    )
}

pub fn classify_symmetry(params: &CoinParameters, t_probe: usize) -> SymmetryVerdict {
    let tol = SYMMETRY_TOLERANCE;
    let (even_condition, odd_condition) = symmetry_conditions(params);
    let balanced = (2.0 * params.eta()).cos().abs() < tol;
    let mut exact_families = Vec::new();
    if balanced {
        if params.cos_theta().abs() < tol {
            exact_families.push(SymmetryFamily::Confined);
        }
        if params.sin_theta().abs() < tol {
            exact_families.push(SymmetryFamily::Endpoint);
        }
        if params.cos_varphi().abs() < tol {
            exact_families.push(SymmetryFamily::OddCoin);
        }
    }
    let family = match exact_families.first() {
        Some(f) => *f,
        None if odd_condition.abs() < tol && params.cos_theta().abs() >= tol => SymmetryFamily::Approximate,
        None => SymmetryFamily::None,
    };
    let reflection_residual = PmfSeries::from_state(&evolve(params, t_probe), Method::Oracle).reflection_residual();
    SymmetryVerdict {
        family,
        exact_families,
        even_condition,
        odd_condition,
        reflection_residual,
        t_probe,
        tolerance: tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{pmf, step, Evolution};
    use crate::model::make_coin;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI};

    fn random_params(rng: &mut ChaCha8Rng) -> CoinParameters {
        CoinParameters::new(
            rng.gen_range(0.0..FRAC_PI_2),
            rng.gen_range(0.0..PI),
            rng.gen_range(0.0..FRAC_PI_2),
        )
        .unwrap()
    }

    #[test]
    fn pmf_rejects_negative_mass() {
        assert!(PmfSeries::new(1, vec![1.2, -0.2], Method::Closed).is_err());
        assert!(PmfSeries::new(1, vec![1.0], Method::Closed).is_err());
        let asym = PmfSeries::new(1, vec![0.3, 0.3], Method::Asymptotic).unwrap();
        assert!(asym.validate(1e-12).is_ok());
        let bad = PmfSeries::new(1, vec![0.3, 0.3], Method::Closed).unwrap();
        assert!(bad.validate(1e-12).is_err());
    }

    #[test]
    fn first_current() {
        let p = CoinParameters::new(0.8, 0.2, 0.0).unwrap();
        let j = probability_current(&evolve(&p, 1));
        assert_eq!(j.len(), 1);
        assert!((j[0] - p.sin_theta().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn compact_and_local_currents_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let p = random_params(&mut rng);
            let coin = make_coin(&p);
            let states: Vec<_> = Evolution::new(&p).take(34).collect();
            for w in states.windows(2) {
                let compact = probability_current(&w[1]);
                let local = probability_current_local(&w[0], &coin);
                for (a, b) in compact.iter().zip(&local) {
                    assert!((a - b).abs() < 1e-14);
                    assert!(*a >= 0.0);
                }
            }
        }
    }

    #[test]
    fn confined_current() {
        let p = CoinParameters::new(FRAC_PI_2, 0.0, FRAC_PI_4).unwrap();
        let coin = make_coin(&p);
        let s = evolve(&p, 6);
        // at even t the walker sits at t/2 and half of it moves on
        let j = probability_current_local(&s, &coin);
        for (n, v) in j.iter().enumerate() {
            let want = if n == 3 { 0.5 } else { 0.0 };
            assert!((v - want).abs() < 1e-14);
        }
    }

    #[test]
    fn continuity() {
        let p = CoinParameters::new(0.3, 2.0, 1.0).unwrap();
        let states: Vec<_> = Evolution::new(&p).take(60).collect();
        for w in states.windows(2) {
            assert!(continuity_residual(&w[0], &w[1]).unwrap() < 1e-13);
        }
        let endpoint = CoinParameters::new(0.0, 0.4, FRAC_PI_4).unwrap();
        let s = evolve(&endpoint, 5);
        assert_eq!(continuity_residual(&s, &step(&s, &make_coin(&endpoint))).unwrap(), 0.0);

        let other = CoinParameters::new(1.2, 0.5, 0.1).unwrap();
        let mismatch = continuity_residual(&evolve(&p, 3), &evolve(&other, 4)).unwrap();
        assert!(mismatch > 1e-2, "mismatch residual {mismatch}");
        assert!(continuity_residual(&evolve(&p, 3), &evolve(&p, 5)).is_err());
    }

    #[test]
    fn means_and_increments() {
        let p = CoinParameters::new(0.3, 0.0, 0.0).unwrap();
        assert_eq!(position_mean(&pmf(&evolve(&p, 0))), 0.0);

        let confined = CoinParameters::new(FRAC_PI_2, 1.0, FRAC_PI_4).unwrap();
        for t in [2, 10, 40] {
            assert!((position_mean(&pmf(&evolve(&confined, t))) - t as f64 / 2.0).abs() < 1e-12);
        }

        let q = CoinParameters::new(0.9, 1.7, 0.4).unwrap();
        let first = ehrenfest_increment(&evolve(&q, 1));
        assert!((first - q.first_step_move().norm_sqr()).abs() < 1e-15);

        let endpoint = CoinParameters::new(0.0, 1.0, FRAC_PI_4).unwrap();
        for t in 1..12 {
            assert!((ehrenfest_increment(&evolve(&endpoint, t)) - 0.5).abs() < 1e-15);
        }

        let states: Vec<_> = Evolution::new(&q).take(31).collect();
        let mut x = 0.0;
        for w in states.windows(2) {
            let inc = ehrenfest_increment(&w[1]);
            let diff = position_mean(&pmf(&w[1])) - position_mean(&pmf(&w[0]));
            assert!((inc - diff).abs() < 1e-13);
            x += inc;
        }
        assert!((x - position_mean(&pmf(&states[30]))).abs() < 1e-12);
    }

    #[test]
    fn approximate_eta_values() {
        assert!((approximate_symmetry_eta(FRAC_PI_4, PI).unwrap() - FRAC_PI_8).abs() < 1e-12);
        assert!((approximate_symmetry_eta(FRAC_PI_6, PI).unwrap() - FRAC_PI_6).abs() < 1e-12);
        for theta in [0.0, 0.3, 1.2] {
            assert!((approximate_symmetry_eta(theta, FRAC_PI_2).unwrap() - FRAC_PI_4).abs() < 1e-15);
        }
        assert!(matches!(approximate_symmetry_eta(FRAC_PI_2, 0.3), Err(WalkError::Singular(_))));
        for (theta, phi) in [(0.2, 0.1), (1.0, 3.0), (1.5, 2.0)] {
            let eta = approximate_symmetry_eta(theta, phi).unwrap();
            assert!((0.0..=FRAC_PI_2).contains(&eta));
            let p = CoinParameters::new(theta, phi, eta).unwrap();
            assert!(symmetry_conditions(&p).1.abs() < 1e-14);
        }
    }

    #[test]
    fn classification() {
        let odd = classify_symmetry(&CoinParameters::new(PI / 5.0, FRAC_PI_2, FRAC_PI_4).unwrap(), 40);
        assert_eq!(odd.family, SymmetryFamily::OddCoin);
        assert!(odd.reflection_residual < 1e-12);

        let approx = CoinParameters::new(FRAC_PI_6, PI, FRAC_PI_6).unwrap();
        let v = classify_symmetry(&approx, 30);
        assert_eq!(v.family, SymmetryFamily::Approximate);
        assert!(v.reflection_residual > 1e-6);
        assert!(classify_symmetry(&approx, 100).reflection_residual < v.reflection_residual);

        for phi in [0.0, 0.7, FRAC_PI_2, PI] {
            let c = classify_symmetry(&CoinParameters::new(FRAC_PI_2, phi, FRAC_PI_4).unwrap(), 21);
            assert_eq!(c.family, SymmetryFamily::Confined);
            assert!(c.reflection_residual < 1e-12);
        }
        let both = classify_symmetry(&CoinParameters::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_4).unwrap(), 4);
        assert_eq!(both.exact_families, vec![SymmetryFamily::Confined, SymmetryFamily::OddCoin]);

        let ends = classify_symmetry(&CoinParameters::new(0.0, 1.0, FRAC_PI_4).unwrap(), 9);
        assert_eq!(ends.family, SymmetryFamily::Endpoint);
        assert!(ends.reflection_residual < 1e-14);

        let none = classify_symmetry(&CoinParameters::new(0.5, 0.5, 0.5).unwrap(), 20);
        assert_eq!(none.family, SymmetryFamily::None);
    }

    #[test]
    fn fair_coin() {
        let p = CoinParameters::new(0.0, 0.0, 0.0).unwrap();
        let q = CoinParameters::new(FRAC_PI_4, 0.0, 0.0).unwrap();
        let r = fair_coin_residual(&evolve(&q, 0), &make_coin(&q));
        assert!((r - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((fair_coin_residual(&evolve(&p, 0), &make_coin(&p)) - 1.0).abs() < 1e-15);

        let theta = 0.8;
        let phi = 2.4;
        let eta = approximate_symmetry_eta(theta, phi).unwrap();
        let relaxed = CoinParameters::new(theta, phi, eta).unwrap();
        assert!(fair_coin_residual(&evolve(&relaxed, 0), &make_coin(&relaxed)) < 1e-14);

        let always = CoinParameters::new(0.7, FRAC_PI_2, FRAC_PI_4).unwrap();
        let coin = make_coin(&always);
        for s in Evolution::new(&always).take(41) {
            assert!(fair_coin_residual(&s, &coin) < 1e-12);
        }
    }
}
