use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::time::Instant;

use qwalk_core::fft::Algorithm;
use qwalk_core::spectral::spectral_evolve;
use qwalk_core::{
    closed_form_state, continuity_residual, default_guard, evolve, interior_sites, inverse_transform_with,
    lambda_table_recursive, make_coin, pmf, position_mean, probability_current_local, rho_bounds,
    spectral_state, state_via_lambda, stationary_density, CoinParameters, Complex64, Evolution, Method,
    TransformSize, WalkError, WalkerState,
};
use serde::Serialize;

use crate::output::{self, Table};
use crate::{FormatArg, MethodArg, RunArgs, SizeArg};

#[derive(Debug)]
pub enum CliError {
    Param(String),
    Io(String),
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Param(_) => 2,
            CliError::Io(_) => 3,
            CliError::Verify(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Param(m) => write!(f, "invalid parameters: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Verify(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        match e {
            WalkError::AngleOutOfRange { .. }
            | WalkError::TransformTooSmall { .. }
            | WalkError::OutsideAllowedInterval { .. }
            | WalkError::Degenerate(_)
            | WalkError::Singular(_) => CliError::Param(e.to_string()),
            _ => CliError::Verify(e.to_string()),
        }
    }
}

type CliResult = Result<(), CliError>;

/// Largest component error the compare command tolerates.
const COMPARE_TOLERANCE: f64 = 1e-8;

fn size_of(arg: SizeArg) -> TransformSize {
    match arg {
        SizeArg::Minimal => TransformSize::Minimal,
        SizeArg::Pow2 => TransformSize::PowerOfTwo,
    }
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Oracle => "oracle",
        MethodArg::Closed => "closed",
        MethodArg::Spectral => "spectral",
        MethodArg::Lambda => "lambda",
        MethodArg::All => "all",
    }
}

/// Decimal inputs such as 1.5708 for π/2 may overshoot a range edge by
/// rounding; values within this distance outside the range snap onto it.
const EDGE_SNAP: f64 = 1e-5;

fn snap(value: f64, hi: f64) -> f64 {
    if value > hi && value - hi <= EDGE_SNAP {
        hi
    } else if (-EDGE_SNAP..0.0).contains(&value) {
        0.0
    } else {
        value
    }
}

fn params(a: &RunArgs) -> Result<CoinParameters, CliError> {
    Ok(CoinParameters::new(
        snap(a.theta, FRAC_PI_2),
        snap(a.phi, PI),
        snap(a.eta, FRAC_PI_2),
    )?)
}

fn metadata(command: &str, a: &RunArgs, method: &str) -> Vec<(String, String)> {
    let size = match a.transform_size {
        SizeArg::Minimal => "minimal",
        SizeArg::Pow2 => "pow2",
    };
    [
        ("command", command.to_string()),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("theta", output::format_number(snap(a.theta, FRAC_PI_2))),
        ("varphi", output::format_number(snap(a.phi, PI))),
        ("eta", output::format_number(snap(a.eta, FRAC_PI_2))),
        ("steps", a.steps.to_string()),
        ("method", method.to_string()),
        ("transform_size", size.to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

fn write(a: &RunArgs, meta: &[(String, String)], tables: &[(&str, &Table)]) -> CliResult {
    let text = match a.format {
        FormatArg::Csv => output::csv(meta, tables),
        FormatArg::Json => output::json(meta, tables),
    };
    output::emit(a.output.as_deref(), &text).map_err(|e| {
        let target = a
            .output
            .as_ref()
            .map_or("stdout".to_string(), |p| p.display().to_string());
        CliError::Io(format!("{target}: {e}"))
    })
}

fn state_by(p: &CoinParameters, t: usize, method: MethodArg, size: TransformSize) -> Result<WalkerState, CliError> {
    Ok(match method {
        MethodArg::Oracle => evolve(p, t),
        MethodArg::Closed => closed_form_state(p, t, size.for_time(t))?,
        MethodArg::Spectral => spectral_state(p, t, size)?,
        MethodArg::Lambda => state_via_lambda(p, t, &lambda_table_recursive(p.theta(), t + 1))?,
        MethodArg::All => unreachable!("resolved by the caller"),
    })
}

fn inject(state: WalkerState, delta: Option<f64>) -> Result<WalkerState, CliError> {
    let Some(delta) = delta else {
        return Ok(state);
    };
    let mut amp0 = state.amp0().to_vec();
    amp0[0] += Complex64::new(delta, 0.0);
    Ok(WalkerState::new(state.t(), amp0, state.amp1().to_vec())?)
}

pub fn simulate(a: &RunArgs) -> CliResult {
    let method = a.method.unwrap_or(MethodArg::Oracle);
    if method == MethodArg::All {
        return Err(CliError::Param("simulate needs a single method; use `compare` for all".into()));
    }
    let p = params(a)?;
    let t = a.steps;
    let state = state_by(&p, t, method, size_of(a.transform_size))?;
    let rho = pmf(&state);
    rho.validate(1e-10)?;
    let current = probability_current_local(&state, &make_coin(&p));
    // ⟨X⟩ at times 0..=t; row n carries time n
    let trajectory: Vec<f64> = Evolution::new(&p)
        .take(t + 1)
        .map(|s| position_mean(&pmf(&s)))
        .collect();

    let mut table = Table::new(vec![
        "n", "nu", "psi0_re", "psi0_im", "psi1_re", "psi1_im", "rho", "J", "x_mean",
    ])
    .with_integer(&["n"]);
    for n in 0..=t {
        let nu = if t == 0 { 0.0 } else { n as f64 / t as f64 };
        let (a0, a1) = (state.amp0()[n], state.amp1()[n]);
        table.push(vec![n as f64, nu, a0.re, a0.im, a1.re, a1.im, rho.values()[n], current[n], trajectory[n]]);
    }
    let mut meta = metadata("simulate", a, method_name(method));
    meta.push(("x_mean".into(), "position mean at time n from the step oracle".into()));
    write(a, &meta, &[("records", &table)])
}

#[derive(Serialize)]
struct MethodReport {
    method: &'static str,
    max_error: f64,
    normalization: f64,
    seconds: f64,
}

#[derive(Serialize)]
struct ComparisonReport<'a> {
    metadata: serde_json::Map<String, serde_json::Value>,
    continuity_residual: f64,
    tolerance: f64,
    methods: &'a [MethodReport],
}

pub fn compare(a: &RunArgs) -> CliResult {
    if let Some(m) = a.method.filter(|&m| m != MethodArg::All) {
        return Err(CliError::Param(format!("compare runs every method; got --method {}", method_name(m))));
    }
    let p = params(a)?;
    let t = a.steps;
    let size = size_of(a.transform_size);

    let clock = Instant::now();
    let oracle = evolve(&p, t);
    let oracle_secs = clock.elapsed().as_secs_f64();
    let continuity = continuity_residual(&oracle, &qwalk_core::step(&oracle, &make_coin(&p)))?;

    let mut methods = vec![MethodReport {
        method: "oracle",
        max_error: 0.0,
        normalization: (oracle.norm_sqr() - 1.0).abs(),
        seconds: oracle_secs,
    }];
    for m in [MethodArg::Closed, MethodArg::Spectral, MethodArg::Lambda] {
        let clock = Instant::now();
        let mut state = state_by(&p, t, m, size)?;
        let seconds = clock.elapsed().as_secs_f64();
        if m == MethodArg::Closed {
            state = inject(state, a.inject_error)?;
        }
        methods.push(MethodReport {
            method: method_name(m),
            max_error: state.max_abs_diff(&oracle),
            normalization: (state.norm_sqr() - 1.0).abs(),
            seconds,
        });
    }

    let meta = metadata("compare", a, "all");
    let text = match a.format {
        FormatArg::Json => {
            let report = ComparisonReport {
                metadata: meta
                    .iter()
                    .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                    .collect(),
                continuity_residual: continuity,
                tolerance: COMPARE_TOLERANCE,
                methods: &methods,
            };
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        FormatArg::Csv => {
            let mut text = String::new();
            for (k, v) in &meta {
                text += &format!("# {k}: {v}\n");
            }
            text += &format!("# continuity_residual: {}\n", output::format_number(continuity));
            text += &format!("# tolerance: {}\n", output::format_number(COMPARE_TOLERANCE));
            text += "method,max_error,normalization,seconds\n";
            for r in &methods {
                text += &format!(
                    "{},{},{},{}\n",
                    r.method,
                    output::format_number(r.max_error),
                    output::format_number(r.normalization),
                    output::format_number(r.seconds)
                );
            }
            text
        }
    };
    output::emit(a.output.as_deref(), &text).map_err(|e| CliError::Io(e.to_string()))?;

    let failed: Vec<String> = methods
        .iter()
        .filter(|r| r.max_error.is_nan() || r.max_error > COMPARE_TOLERANCE)
        .map(|r| format!("{} off by {:e}", r.method, r.max_error))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(failed.join(", ")))
    }
}

pub fn asymptote(a: &RunArgs) -> CliResult {
    let p = params(a)?;
    let t = a.steps;
    if t < 10 {
        return Err(CliError::Param(format!("asymptote needs at least 10 steps, got {t}")));
    }
    if p.cos_theta() < 1e-15 {
        return Err(CliError::Param(
            "θ = π/2 confines the walker; the allowed interval collapses to ν = 1/2".into(),
        ));
    }
    let density = stationary_density(&p)?;
    let guard = a.grid_guard.unwrap_or_else(|| default_guard(t));
    if !(guard.is_finite() && guard >= 0.0) {
        return Err(CliError::Param(format!("grid guard must be a nonnegative number, got {guard}")));
    }
    let grid = interior_sites(p.theta(), t, guard);
    let profile = rho_bounds(&p, t, &grid)?;
    let method = a.method.unwrap_or(MethodArg::Oracle);
    if method == MethodArg::All {
        return Err(CliError::Param("asymptote needs a single method for the exact PMF".into()));
    }
    let rho = pmf(&state_by(&p, t, method, size_of(a.transform_size))?);

    let mut overlay = Table::new(vec!["n", "nu", "rho_exact", "rho_bar", "rho_sup", "rho_inf", "rho_med"])
        .with_integer(&["n"]);
    for (i, &n) in grid.iter().enumerate() {
        overlay.push(vec![
            n as f64,
            profile.nus[i],
            rho.values()[n],
            profile.rho_bar[i],
            profile.rho_sup[i],
            profile.rho_inf[i],
            profile.rho_med[i],
        ]);
    }
    // lattice density: ρ(n) divided by the ε spacing 2/(t cosθ)
    let mut eps_table = Table::new(vec!["n", "epsilon", "density", "lattice_density"]).with_integer(&["n"]);
    for n in 0..=t {
        let eps = qwalk_core::asymptotics::epsilon_of(n, t, p.theta());
        if eps.abs() < 1.0 {
            eps_table.push(vec![
                n as f64,
                eps,
                density.density(eps),
                rho.values()[n] * t as f64 * p.cos_theta() / 2.0,
            ]);
        }
    }
    let mut meta = metadata("asymptote", a, method_name(method));
    meta.push(("grid_guard".into(), output::format_number(guard)));
    meta.push((
        "weak_limit_distance".into(),
        output::format_number(density.weak_limit_distance(&rho)?),
    ));
    write(a, &meta, &[("records", &overlay), ("density", &eps_table)])
}

fn min_seconds<F: FnMut()>(repeats: usize, mut f: F) -> f64 {
    (0..repeats.max(1))
        .map(|_| {
            let clock = Instant::now();
            f();
            clock.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn bench(a: &RunArgs) -> CliResult {
    let p = params(a)?;
    if a.steps < 256 {
        return Err(CliError::Param(format!("bench needs at least 256 steps, got {}", a.steps)));
    }
    let sizes: Vec<usize> = [256, 1024, 4096].into_iter().filter(|&t| t <= a.steps).collect();
    let mut table = Table::new(vec![
        "t", "n_direct", "n_fft", "direct_seconds", "fft_seconds", "oracle_seconds", "ratio", "max_diff",
    ])
    .with_integer(&["t", "n_direct", "n_fft"]);
    for t in sizes {
        let pow2 = TransformSize::PowerOfTwo.for_time(t);
        let run = |size: usize, alg: Algorithm| -> Result<WalkerState, CliError> {
            Ok(inverse_transform_with(&spectral_evolve(&p, t, size)?, alg)?)
        };
        let diff = run(t + 1, Algorithm::Direct)?.max_abs_diff(&run(pow2, Algorithm::Radix2)?);
        let direct = min_seconds(a.repeats, || {
            std::hint::black_box(run(t + 1, Algorithm::Direct).ok());
        });
        let fft = min_seconds(a.repeats, || {
            std::hint::black_box(run(pow2, Algorithm::Radix2).ok());
        });
        let oracle = min_seconds(a.repeats, || {
            std::hint::black_box(evolve(&p, t));
        });
        table.push(vec![
            t as f64,
            (t + 1) as f64,
            pow2 as f64,
            direct,
            fft,
            oracle,
            direct / fft,
            diff,
        ]);
    }
    let meta = metadata("bench", a, Method::Spectral.as_str());
    let text = output::json(&meta, &[("timings", &table)]);
    output::emit(a.output.as_deref(), &text).map_err(|e| CliError::Io(e.to_string()))
}
