//! Closed-form upper bounds for free-membrane and free-plate eigenvalues.
//!
//! With `V = ω_n |Ω|` and `r₀ = 2π (m / V)^(1/n)` the bounds are
//!
//! * membrane sums: `Σ_{j≤m} μ_j ≤ (2π)² n/(n+2) V^(-2/n) m^((n+2)/n)`
//! * membrane eigenvalues: `μ_{m+1} ≤ (2π)² ((n+2)/(2V))^(2/n) m^(2/n)`
//! * plate sums: `Σ_{j≤m} Λ_j ≤ (2π)⁴ n/(n+4) V^(-4/n) m^((n+4)/n) + τ · (membrane sum bound)`
//! * plate eigenvalues: `Λ_{m+1} ≤ inf_{r > r₀} F(r)` with
//!   `F(r) = n V (r^(n+4)/(n+4) + τ r^(n+2)/(n+2)) / (V rⁿ - m (2π)ⁿ)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::domains::unit_ball_volume;
use crate::error::{Error, Result};
use crate::numerics::{find_root, minimize_unimodal, Bracket, DEFAULT_MIN_TOL, DEFAULT_ROOT_TOL};

/// Relative offset above the threshold radius where minimization starts.
const THRESHOLD_OFFSET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInput {
    pub n: usize,
    pub volume: f64,
    pub tau: f64,
    pub m: usize,
}

impl BoundInput {
    pub fn new(n: usize, volume: f64, tau: f64, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if !(volume > 0.0) || !volume.is_finite() {
            return Err(Error::InvalidArgument(format!("volume must be positive, got {volume}")));
        }
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tension must be finite and nonnegative, got {tau}"
            )));
        }
        Ok(Self { n, volume, tau, m })
    }

    pub fn with_m(self, m: usize) -> Self {
        Self { m, ..self }
    }

    pub fn with_tau(self, tau: f64) -> Result<Self> {
        Self::new(self.n, self.volume, tau, self.m)
    }

    /// `ω_n |Ω|`.
    pub fn ball_volume(&self) -> f64 {
        unit_ball_volume(self.n).expect("dimension validated at construction") * self.volume
    }

    /// `r₀ = 2π (m / (ω_n |Ω|))^(1/n)`, where the denominator of `F` vanishes.
    pub fn threshold_radius(&self) -> f64 {
        2.0 * PI * (self.m as f64 / self.ball_volume()).powf(1.0 / self.n as f64)
    }

    fn dim(&self) -> f64 {
        self.n as f64
    }

    fn require_m(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidArgument("sum bounds need m >= 1".into()));
        }
        Ok(())
    }
}

pub fn kroger_sum_bound(input: &BoundInput) -> Result<f64> {
    input.require_m()?;
    Ok(membrane_sum_term(input))
}

fn membrane_sum_term(input: &BoundInput) -> f64 {
    let n = input.dim();
    (2.0 * PI).powi(2) * n / (n + 2.0)
        * input.ball_volume().powf(-2.0 / n)
        * (input.m as f64).powf((n + 2.0) / n)
}

/// Bound for `μ_{m+1}`; zero for `m = 0`.
pub fn kroger_eig_bound(input: &BoundInput) -> f64 {
    let n = input.dim();
    (2.0 * PI).powi(2)
        * ((n + 2.0) / (2.0 * input.ball_volume())).powf(2.0 / n)
        * (input.m as f64).powf(2.0 / n)
}

pub fn plate_sum_bound(input: &BoundInput) -> Result<f64> {
    input.require_m()?;
    let n = input.dim();
    let leading = (2.0 * PI).powi(4) * n / (n + 4.0)
        * input.ball_volume().powf(-4.0 / n)
        * (input.m as f64).powf((n + 4.0) / n);
    Ok(leading + input.tau * membrane_sum_term(input))
}

/// `G(r) = (n ω_n |Ω| / (2π)ⁿ) (r^(n+4)/(n+4) + τ r^(n+2)/(n+2))`; the plate
/// sum bound is `G(r₀)`.
pub fn limit_functional(input: &BoundInput, r: f64) -> f64 {
    let n = input.dim();
    n * input.ball_volume() / (2.0 * PI).powf(n) * radial_moment(input, r)
}

fn radial_moment(input: &BoundInput, r: f64) -> f64 {
    let n = input.dim();
    r.powf(n + 4.0) / (n + 4.0) + input.tau * r.powf(n + 2.0) / (n + 2.0)
}

#[allow(non_snake_case)]
pub fn F_ratio(input: &BoundInput, r: f64) -> Result<f64> {
    let threshold = input.threshold_radius();
    if !(r > threshold) || !r.is_finite() {
        return Err(Error::BelowThreshold { r, threshold });
    }
    let v = input.ball_volume();
    let shift = input.m as f64 * (2.0 * PI).powf(input.dim());
    let denominator = v * r.powf(input.dim()) - shift;
    if !(denominator > 1e-13 * shift) {
        return Err(Error::BelowThreshold { r, threshold });
    }
    Ok(input.dim() * v * radial_moment(input, r) / denominator)
}

/// A quantity with the sign of `F'(r)` for `r > r₀`; it has exactly one root.
fn ratio_slope_sign(input: &BoundInput, r: f64) -> f64 {
    let n = input.dim();
    let v = input.ball_volume();
    let tau = input.tau;
    let rn = r.powf(n);
    v * rn * (4.0 * r * r / (n + 4.0) + 2.0 * tau / (n + 2.0))
        - input.m as f64 * (2.0 * PI).powf(n) * (r * r + tau)
}

/// Closed-form minimizer of `F` without tension:
/// `r* = 2π (m (n+4) / (4 ω_n |Ω|))^(1/n)`.
pub fn closed_form_argmin(input: &BoundInput) -> f64 {
    let n = input.dim();
    2.0 * PI * (input.m as f64 * (n + 4.0) / (4.0 * input.ball_volume())).powf(1.0 / n)
}

/// Closed-form `min F` without tension: `(2π)⁴ ((n+4)/(4 ω_n |Ω|))^(4/n) m^(4/n)`.
pub fn closed_form_min(input: &BoundInput) -> f64 {
    let n = input.dim();
    (2.0 * PI).powi(4)
        * ((n + 4.0) / (4.0 * input.ball_volume())).powf(4.0 / n)
        * (input.m as f64).powf(4.0 / n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioMinimum {
    pub r: f64,
    pub value: f64,
}

fn minimization_bracket(input: &BoundInput) -> Result<Bracket> {
    let lo = input.threshold_radius() * (1.0 + THRESHOLD_OFFSET);
    let mut hi = 2.0 * lo;
    while ratio_slope_sign(input, hi) <= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::InvalidArgument("F has no minimizer".into()));
        }
    }
    Bracket::new(lo, hi)
}

/// Minimizes `F` over `r > r₀` by locating the unique zero of `F'`.
pub fn minimize_ratio(input: &BoundInput) -> Result<RatioMinimum> {
    input.require_m()?;
    let bracket = minimization_bracket(input)?;
    let r = find_root(|r| ratio_slope_sign(input, r), bracket, DEFAULT_ROOT_TOL * bracket.lo)?;
    Ok(RatioMinimum {
        r,
        value: F_ratio(input, r)?,
    })
}

/// Golden-section minimization of `F` on the same bracket, without
/// derivative information.
pub fn minimize_ratio_golden(input: &BoundInput) -> Result<RatioMinimum> {
    input.require_m()?;
    let bracket = minimization_bracket(input)?;
    let (r, value) = minimize_unimodal(
        |r| F_ratio(input, r).unwrap_or(f64::INFINITY),
        bracket,
        DEFAULT_MIN_TOL * bracket.hi,
    );
    Ok(RatioMinimum { r, value })
}

/// Bound for `Λ_{m+1}`. It is zero for `m = 0`, where `F(r) → 0` as `r → 0⁺`.
pub fn plate_eig_bound(input: &BoundInput) -> Result<f64> {
    if input.m == 0 {
        return Ok(0.0);
    }
    if input.tau == 0.0 {
        return Ok(closed_form_min(input));
    }
    Ok(minimize_ratio(input)?.value)
}

/// Checks the conclusion `c Σ_{j≤m} Λ_j ≤ a` of the lemma turning a bound on
/// `Λ_{m+1}` into a bound on the sum, where `m = cs.len()` and
/// `lambdas.len() = m + 1`.
///
/// Inputs that miss the lemma's hypotheses are rejected with
/// [`Error::PreconditionViolated`].
pub fn lemma_a1_holds(a: f64, b: f64, c: f64, cs: &[f64], lambdas: &[f64]) -> Result<bool> {
    let m = cs.len();
    if lambdas.len() != m + 1 {
        return Err(Error::InvalidArgument(format!(
            "need {} eigenvalues for {m} weights, got {}",
            m + 1,
            lambdas.len()
        )));
    }
    let violated = |what: &str| Err(Error::PreconditionViolated(what.into()));
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return violated("a, b and c must be positive");
    }
    if cs.iter().any(|&cj| !(cj > 0.0 && cj <= c)) {
        return violated("every c_j must lie in (0, c]");
    }
    if !(lambdas[0] >= 0.0) || lambdas.windows(2).any(|w| !(w[0] <= w[1])) {
        return violated("eigenvalues must be nonnegative and ascending");
    }
    if !(b > m as f64 * c) {
        return violated("b must exceed m c");
    }
    let weighted: f64 = cs.iter().zip(lambdas).map(|(cj, l)| cj * l).sum();
    let weight: f64 = cs.iter().sum();
    if !(lambdas[m] <= (a - weighted) / (b - weight)) {
        return violated("hypothesis on the (m+1)-th eigenvalue fails");
    }
    let sum: f64 = lambdas[..m].iter().sum();
    Ok(c * sum <= a + 1e-12 * a.abs())
}

/// All four bounds at one `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub m: usize,
    pub kroger_sum_bound: f64,
    pub kroger_eig_bound: f64,
    pub plate_sum_bound: f64,
    pub plate_eig_bound: f64,
}

impl BoundRow {
    pub const KINDS: [&'static str; 4] =
        ["kroger_sum_bound", "kroger_eig_bound", "plate_sum_bound", "plate_eig_bound"];

    pub fn values(&self) -> [f64; 4] {
        [
            self.kroger_sum_bound,
            self.kroger_eig_bound,
            self.plate_sum_bound,
            self.plate_eig_bound,
        ]
    }
}

/// Rows `m = 1..=m_max`.
pub fn bound_table(n: usize, volume: f64, tau: f64, m_max: usize) -> Result<Vec<BoundRow>> {
    let base = BoundInput::new(n, volume, tau, 0)?;
    (1..=m_max)
        .map(|m| {
            let input = base.with_m(m);
            Ok(BoundRow {
                m,
                kroger_sum_bound: kroger_sum_bound(&input)?,
                kroger_eig_bound: kroger_eig_bound(&input),
                plate_sum_bound: plate_sum_bound(&input)?,
                plate_eig_bound: plate_eig_bound(&input)?,
            })
        })
        .collect()
}
