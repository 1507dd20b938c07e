use freeplate_core::bounds::{
    kroger_eig_bound, kroger_sum_bound, plate_eig_bound, plate_sum_bound, BoundInput,
};
use freeplate_core::exact::OracleSpec;
use freeplate_core::fourier::{default_r_grid, master_inequality_check, FourierField, MasterReport};
use freeplate_core::ritz::{compute_modes, RitzSolution};
use freeplate_core::{Method, Operator, Spectrum};

use crate::config::{Check, ExperimentConfig};
use crate::CliError;

/// Magnitude below which an oracle value counts as a zero mode and is
/// compared absolutely instead of relatively.
pub const ORACLE_ZERO_FLOOR: f64 = 1e-9;

/// One row of the verification table: the computed partial sum and
/// `(m+1)`-th eigenvalue against the matching bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyRow {
    pub m: usize,
    pub sum_computed: f64,
    pub sum_bound: f64,
    pub eig_computed: Option<f64>,
    pub eig_bound: f64,
    pub slack_sum: f64,
    pub slack_eig: Option<f64>,
    pub passed: bool,
}

impl VerifyRow {
    pub fn status(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }
}

#[derive(Debug, Clone)]
pub struct Computed {
    pub spectrum: Spectrum,
    pub modes: Option<RitzSolution>,
}

pub fn compute(config: &ExperimentConfig) -> Result<Computed, CliError> {
    match config.method {
        Method::Exact => {
            let oracle = OracleSpec::new(config.domain.clone(), config.operator, config.tau)?;
            Ok(Computed {
                spectrum: oracle.spectrum(config.count)?,
                modes: None,
            })
        }
        Method::Ritz => {
            let sol = compute_modes(
                &config.domain,
                config.operator,
                config.tau,
                config.count,
                config.refine_tol(),
            )?;
            Ok(Computed {
                spectrum: sol.spectrum.clone(),
                modes: Some(sol),
            })
        }
    }
}

fn bounds_at(operator: Operator, input: &BoundInput) -> Result<(f64, f64), CliError> {
    Ok(match operator {
        Operator::Membrane => (kroger_sum_bound(input)?, kroger_eig_bound(input)),
        Operator::Plate => (plate_sum_bound(input)?, plate_eig_bound(input)?),
    })
}

/// Rows `m = 1..=m_max`. A row passes when each slack is at least
/// `-slack_tol * max(1, bound)`.
pub fn verify_rows(
    spectrum: &Spectrum,
    input: &BoundInput,
    m_max: usize,
    slack_tol: f64,
) -> Result<Vec<VerifyRow>, CliError> {
    if m_max > spectrum.len() {
        return Err(CliError::Config(format!(
            "m_max = {m_max} exceeds the {} computed values",
            spectrum.len()
        )));
    }
    let ok = |slack: f64, bound: f64| slack >= -slack_tol * bound.abs().max(1.0);
    (1..=m_max)
        .map(|m| {
            let (sum_bound, eig_bound) = bounds_at(spectrum.operator, &input.with_m(m))?;
            let sum_computed = spectrum.partial_sum(m);
            let eig_computed = spectrum.values.get(m).copied();
            let slack_sum = sum_bound - sum_computed;
            let slack_eig = eig_computed.map(|e| eig_bound - e);
            Ok(VerifyRow {
                m,
                sum_computed,
                sum_bound,
                eig_computed,
                eig_bound,
                slack_sum,
                slack_eig,
                passed: ok(slack_sum, sum_bound) && slack_eig.is_none_or(|s| ok(s, eig_bound)),
            })
        })
        .collect()
}

/// Largest deviation from the reference spectrum, relative on nonzero
/// reference values and absolute on zero modes.
pub fn oracle_deviation(spectrum: &Spectrum) -> Result<f64, CliError> {
    let oracle = OracleSpec::new(spectrum.domain.clone(), spectrum.operator, spectrum.tau)?;
    let exact = oracle.spectrum(spectrum.len())?;
    Ok(spectrum
        .values
        .iter()
        .zip(&exact.values)
        .map(|(got, want)| {
            if want.abs() > ORACLE_ZERO_FLOOR {
                (got - want).abs() / want.abs()
            } else {
                (got - want).abs()
            }
        })
        .fold(0.0, f64::max))
}

/// Runs the Fourier-side inequality for `m = 0..=m_max` on the default
/// radius grid of each `m`.
pub fn fourier_reports(
    modes: &RitzSolution,
    m_max: usize,
    points: usize,
) -> Result<Vec<MasterReport>, CliError> {
    let domain = &modes.spectrum.domain;
    let (n, volume) = (domain.dimension(), domain.volume());
    let grids = (0..=m_max)
        .map(|m| default_r_grid(n, volume, m, points))
        .collect::<Result<Vec<_>, _>>()?;
    let r_max = grids.iter().flatten().copied().fold(0.0, f64::max);
    let field = FourierField::new(modes, m_max + 1, r_max)?;
    grids
        .iter()
        .enumerate()
        .map(|(m, grid)| Ok(master_inequality_check(&field, m, grid)?))
        .collect()
}

/// Everything `verify` produced, plus the list of failed checks.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub spectrum: Spectrum,
    pub rows: Vec<VerifyRow>,
    pub oracle_deviation: Option<f64>,
    pub fourier: Vec<MasterReport>,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let computed = compute(config)?;
    let spectrum = computed.spectrum;
    let mut failures = Vec::new();
    if !spectrum.converged {
        failures.push(format!(
            "spectrum not converged at degree {}",
            spectrum.degree_used
        ));
    }

    let mut rows = Vec::new();
    if config.checks.contains(&Check::Bounds) {
        rows = verify_rows(&spectrum, &config.bound_input()?, config.m_max, config.slack_tol())?;
        for r in rows.iter().filter(|r| !r.passed) {
            failures.push(format!(
                "bounds row m = {}: slack_sum = {:e}, slack_eig = {}",
                r.m,
                r.slack_sum,
                r.slack_eig.map_or("n/a".into(), |s| format!("{s:e}"))
            ));
        }
    }

    let mut deviation = None;
    if config.checks.contains(&Check::Oracle) {
        let dev = oracle_deviation(&spectrum)?;
        if !(dev <= config.oracle_tol()) {
            failures.push(format!(
                "oracle deviation {dev:e} exceeds {:e}",
                config.oracle_tol()
            ));
        }
        deviation = Some(dev);
    }

    let mut fourier = Vec::new();
    if config.checks.contains(&Check::Fourier) {
        let modes = computed
            .modes
            .as_ref()
            .ok_or_else(|| CliError::Config("the fourier check needs Ritz eigenfunctions".into()))?;
        fourier = fourier_reports(modes, config.m_max, config.grid_points())?;
        for row in fourier.iter().flat_map(|rep| &rep.rows).filter(|r| !r.holds) {
            failures.push(format!(
                "fourier row m = {}, r = {:e}: N/D = {:e} < lambda_next = {:e}",
                row.m, row.r, row.ratio, row.lambda_next
            ));
        }
    }

    Ok(Outcome {
        spectrum,
        rows,
        oracle_deviation: deviation,
        fourier,
        failures,
    })
}
