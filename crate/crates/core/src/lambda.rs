//! The real kernel Λ(n,t): both wave-function components decompose over it,
//! and it obeys a single two-step recursion.

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::model::{CoinParameters, WalkerState};
use crate::observables::{Method, PmfSeries};
use crate::spectral::{pi_fraction, Bin};

/// Λ(n,t) from its cosine-sum representation with transform size N > t.
pub fn lambda_value(theta: f64, n: i64, t: usize, size: usize) -> f64 {
    assert!(size > t, "transform size {size} must exceed t = {t}");
    if n < 0 || n > t as i64 {
        return 0.0;
    }
    let (s, c) = theta.sin_cos();
    let shift = 2 * n - t as i64;
    let mut acc = if t.is_multiple_of(2) { 1.0 } else { 0.0 };
    for r in 1..size {
        let bin = Bin::new(c, s, r, size);
        if bin.is_degenerate() {
            // limit of cos[φt − ω]/cos ω as θ → 0 at r/N = 1/2
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            acc += sign * (t as f64 - 1.0);
            continue;
        }
        let arg = pi_fraction(shift * r as i64, size) + bin.omega * (t as f64 - 1.0);
        acc += arg.cos() / bin.cos_omega;
    }
    acc / size as f64
}

/// Λ(n,t) for 0 ≤ n ≤ t ≤ t_max, zero outside that triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaTable {
    rows: Vec<Vec<f64>>,
}

impl LambdaTable {
    pub fn t_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: i64, t: usize) -> f64 {
        let row = &self.rows[t];
        usize::try_from(n)
            .ok()
            .and_then(|k| row.get(k).copied())
            .unwrap_or(0.0)
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.rows[t]
    }

    /// Λ₊(n,t) = ½[Λ(n+1,t+1) + Λ(n,t+1)]
    pub fn plus(&self, n: i64, t: usize) -> f64 {
        0.5 * (self.get(n + 1, t + 1) + self.get(n, t + 1))
    }

    /// Λ₋(n,t) = ½[Λ(n+1,t+1) − Λ(n,t+1)]
    pub fn minus(&self, n: i64, t: usize) -> f64 {
        0.5 * (self.get(n + 1, t + 1) - self.get(n, t + 1))
    }

    fn require(&self, t: usize) -> Result<()> {
        if t <= self.t_max() {
            Ok(())
        } else {
            Err(WalkError::TableTooShort {
                have: self.t_max(),
                need: t,
            })
        }
    }
}

/// Builds the table from Λ(0,0)=1, Λ(0,1)=Λ(1,1)=0 and
/// Λ(n,t+2) = cosθ[Λ(n,t+1) − Λ(n−1,t+1)] + Λ(n−1,t).
pub fn lambda_table_recursive(theta: f64, t_max: usize) -> LambdaTable {
    let c = theta.cos();
    let mut table = LambdaTable {
        rows: vec![vec![1.0]],
    };
    if t_max >= 1 {
        table.rows.push(vec![0.0, 0.0]);
    }
    for t in 2..=t_max {
        let row = (0..=t as i64)
            .map(|n| c * (table.get(n, t - 1) - table.get(n - 1, t - 1)) + table.get(n - 1, t - 2))
            .collect();
        table.rows.push(row);
    }
    table
}

/// ψ₀(n,t) = ψ₀(0,0)Λ(n,t) + ψ₀(0,1)Λ(n+1,t+1) and
/// ψ₁(n,t) = ψ₁(0,0)Λ(n,t) + ψ₁(1,1)Λ(n,t+1). The table must reach t+1.
pub fn state_via_lambda(params: &CoinParameters, t: usize, table: &LambdaTable) -> Result<WalkerState> {
    table.require(t + 1)?;
    let stay = params.first_step_stay();
    let mv = params.first_step_move();
    let (ce, se) = (params.cos_eta(), params.sin_eta());
    let (amp0, amp1): (Vec<Complex64>, Vec<Complex64>) = (0..=t as i64)
        .map(|n| {
            let own = table.get(n, t);
            (
                ce * own + stay * table.get(n + 1, t + 1),
                se * own + mv * table.get(n, t + 1),
            )
        })
        .unzip();
    WalkerState::new(t, amp0, amp1)
}

/// ρ(n,t) assembled from Λ, Λ₊ and Λ₋ without forming the wave function.
pub fn pmf_via_lambda(params: &CoinParameters, t: usize, table: &LambdaTable) -> Result<PmfSeries> {
    table.require(t + 1)?;
    let (c, s) = (params.cos_theta(), params.sin_theta());
    let (c2e, s2e) = ((2.0 * params.eta()).cos(), (2.0 * params.eta()).sin());
    let (c2t, s2t) = (c * c - s * s, 2.0 * s * c);
    let cp = params.cos_varphi();
    let cross_pm = c2e * c2t + s2e * s2t * cp;
    let cross_lp = c2e * c + s2e * s * cp;
    let values = (0..=t as i64)
        .map(|n| {
            let l = table.get(n, t);
            let lp = table.plus(n, t);
            let lm = table.minus(n, t);
            l * l + lp * lp + lm * lm
                + 2.0 * c * l * lm
                + 2.0 * cross_pm * lp * lm
                + 2.0 * cross_lp * l * lp
        })
        .collect();
    PmfSeries::new(t, values, Method::Lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{evolve, pmf};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};

    #[test]
    fn initial_and_boundary_conditions() {
        let table = lambda_table_recursive(0.7, 30);
        assert_eq!(table.get(0, 0), 1.0);
        assert_eq!(table.get(0, 1), 0.0);
        assert_eq!(table.get(1, 1), 0.0);
        for t in 1..=30 {
            assert_eq!(table.get(-1, t), 0.0);
            assert_eq!(table.get(t as i64 + 1, t), 0.0);
            assert!(table.get(0, t).abs() < 1e-15);
            assert!(table.get(t as i64, t).abs() < 1e-15);
        }
        assert!((lambda_value(0.7, 0, 0, 1) - 1.0).abs() < 1e-15);
        assert!((lambda_value(0.7, 0, 0, 8) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn recursion_matches_cosine_sum() {
        for theta in [0.0, 0.2, FRAC_PI_3, 1.3, FRAC_PI_2] {
            let table = lambda_table_recursive(theta, 24);
            for t in 0..=24 {
                for n in 0..=t as i64 {
                    let closed = lambda_value(theta, n, t, t + 1);
                    assert!((table.get(n, t) - closed).abs() < 1e-10, "θ={theta} n={n} t={t}");
                    let closed_even = lambda_value(theta, n, t, 2 * t + 2);
                    assert!((closed - closed_even).abs() < 1e-10);
                }
            }
        }
        // row t = 2 at θ = π/3: only the middle site survives
        let table = lambda_table_recursive(FRAC_PI_3, 2);
        assert_eq!(table.row(2), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn special_angles() {
        for t in 0..20usize {
            for n in 0..=t as i64 {
                let confined = lambda_value(FRAC_PI_2, n, t, t + 1);
                let want = if 2 * n == t as i64 { 1.0 } else { 0.0 };
                assert!((confined - want).abs() < 1e-12);
                if n >= 1 && n < t as i64 {
                    let want = if n % 2 == 1 { 1.0 } else { -1.0 };
                    for size in [t + 1, t + 2] {
                        assert!((lambda_value(0.0, n, t, size) - want).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn reflection_symmetry() {
        let table = lambda_table_recursive(0.9, 41);
        for k in 0..=20usize {
            for l in 0..=k as i64 {
                let k = k as i64;
                let e = table.get(k - l, 2 * k as usize) - table.get(k + l, 2 * k as usize);
                assert!(e.abs() < 1e-12);
                let o = table.get(k - l, 2 * k as usize + 1) + table.get(k + l + 1, 2 * k as usize + 1);
                assert!(o.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn plus_minus_parity() {
        let table = lambda_table_recursive(0.55, 42);
        for t in 0..=40usize {
            let sign = if t.is_multiple_of(2) { 1.0 } else { -1.0 };
            let lo = (t / 2) as i64;
            let hi = t.div_ceil(2) as i64;
            for l in 0..=lo {
                let p = table.plus(lo - l, t) + sign * table.plus(hi + l, t);
                let m = table.minus(lo - l, t) - sign * table.minus(hi + l, t);
                assert!(p.abs() < 1e-12, "Λ₊ t={t} l={l}");
                assert!(m.abs() < 1e-12, "Λ₋ t={t} l={l}");
            }
        }
    }

    #[test]
    fn state_and_pmf_via_lambda() {
        let p = CoinParameters::new(FRAC_PI_6, 0.0, FRAC_PI_6).unwrap();
        let table = lambda_table_recursive(p.theta(), 31);
        let s0 = state_via_lambda(&p, 0, &table).unwrap();
        assert!(s0.max_abs_diff(&evolve(&p, 0)) < 1e-15);
        let s = state_via_lambda(&p, 30, &table).unwrap();
        let oracle = evolve(&p, 30);
        assert!(s.max_abs_diff(&oracle) < 1e-10);

        let q = CoinParameters::new(1.0, 2.2, 0.4).unwrap();
        let table = lambda_table_recursive(q.theta(), 41);
        for t in 0..=40 {
            let direct = pmf(&evolve(&q, t));
            let decomposed = pmf_via_lambda(&q, t, &table).unwrap();
            assert!(direct.max_abs_diff(&decomposed) < 1e-12);
        }
    }

    #[test]
    fn short_table_is_rejected() {
        let p = CoinParameters::new(1.0, 2.2, 0.4).unwrap();
        let table = lambda_table_recursive(p.theta(), 5);
        assert_eq!(
            state_via_lambda(&p, 5, &table),
            Err(WalkError::TableTooShort { have: 5, need: 6 })
        );
    }
}
