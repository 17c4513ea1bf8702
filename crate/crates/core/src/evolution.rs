//! Step-by-step evolution of the walker. Every other solution method in the
//! crate is checked against this one.

use num_complex::Complex64;

use crate::model::{make_coin, make_initial_state, CoinMatrix, CoinParameters, WalkerState};
use crate::observables::{Method, PmfSeries};

/// Applies one coin toss followed by the nondecreasing shift.
///
/// The stay component keeps its site, the move component lands one site to
/// the right, so the output covers 0..=t+1.
pub fn step(state: &WalkerState, coin: &CoinMatrix) -> WalkerState {
    let t = state.t();
    let (a0, a1) = (state.amp0(), state.amp1());
    let zero = Complex64::default();
    let mut next0 = vec![zero; t + 2];
    let mut next1 = vec![zero; t + 2];
    for n in 0..=t {
        let (stay, mv) = coin.apply(a0[n], a1[n]);
        next0[n] = stay;
        next1[n + 1] = mv;
    }
    WalkerState::from_parts(t + 1, next0, next1)
}

/// Iterator over the states at t = 0, 1, 2, ...
#[derive(Debug, Clone)]
pub struct Evolution {
    coin: CoinMatrix,
    current: Option<WalkerState>,
}

impl Evolution {
    pub fn new(params: &CoinParameters) -> Self {
        Self {
            coin: make_coin(params),
            current: Some(make_initial_state(params)),
        }
    }
}

impl Iterator for Evolution {
    type Item = WalkerState;

    fn next(&mut self) -> Option<WalkerState> {
        let state = self.current.take()?;
        self.current = Some(step(&state, &self.coin));
        Some(state)
    }
}

pub fn evolve(params: &CoinParameters, t: usize) -> WalkerState {
    let coin = make_coin(params);
    let mut state = make_initial_state(params);
    for _ in 0..t {
        state = step(&state, &coin);
    }
    state
}

/// The oracle PMF ρ(n) = |ψ₀(n)|² + |ψ₁(n)|².
pub fn pmf(state: &WalkerState) -> PmfSeries {
    PmfSeries::from_state(state, Method::Oracle)
}
