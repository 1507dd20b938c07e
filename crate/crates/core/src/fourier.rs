//! Fourier transforms of computed eigenfunctions and the quantities built
//! from them when `h_z(y) = e^{iy·z}` minus its projection onto the first
//! `m` eigenfunctions is used as a trial function.
//!
//! With `V = ω_n |Ω|` and `M_j(r) = ∫_{B_r} |φ̂_j|²` the two integrated
//! Rayleigh-quotient pieces are
//!
//! * `D(r) = V rⁿ - (2π)ⁿ Σ_{j≤m} M_j(r)`
//! * `N(r) = n V (r^(n+4)/(n+4) + τ r^(n+2)/(n+2)) - (2π)ⁿ Σ_{j≤m} Λ_j M_j(r)`
//!
//! and `Λ_{m+1} ≤ N(r)/D(r)` for every `r` above the threshold radius.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::domains::{mapped_gauss, quadrature, unit_ball_volume, DomainKind, Point};
use crate::error::{Error, Result};
use crate::ritz::{Jet, RitzSolution};
use crate::spectrum::{Operator, Spectrum};

/// Minimum radial order of the frequency-ball rule.
pub const BALL_RADIAL_ORDER: usize = 24;
/// Minimum number of angular nodes of the frequency-ball rule.
pub const BALL_ANGULAR_POINTS: usize = 49;
/// Relative slack allowed in `Λ_{m+1} ≤ N/D`.
pub const INEQUALITY_REL_TOL: f64 = 1e-4;

/// Quadrature over the ball `|z| < radius` in frequency space.
#[derive(Debug, Clone, PartialEq)]
pub struct BallRule {
    pub radius: f64,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

/// Gauss-Legendre on `[-r, r]` for `n = 1`; for `n = 2`, Gauss-Legendre in
/// the radius (weighted by `ρ`) times the trapezoid rule in angle.
pub fn ball_rule(n: usize, radius: f64, radial: usize, angular: usize) -> Result<BallRule> {
    if !(radius > 0.0) || radial == 0 || angular == 0 {
        return Err(Error::InvalidArgument(
            "ball rule needs a positive radius and node counts".into(),
        ));
    }
    let (nodes, weights) = match n {
        1 => {
            let (z, w) = mapped_gauss(radial, -radius, 2.0 * radius);
            (z.into_iter().map(|z| [z, 0.0]).collect(), w)
        }
        2 => {
            let (rho, w_rho) = mapped_gauss(radial, 0.0, radius);
            let w_theta = 2.0 * PI / angular as f64;
            let mut nodes = Vec::with_capacity(radial * angular);
            let mut weights = Vec::with_capacity(radial * angular);
            for (p, wp) in rho.iter().zip(&w_rho) {
                for k in 0..angular {
                    let (s, c) = (w_theta * k as f64).sin_cos();
                    nodes.push([p * c, p * s]);
                    weights.push(wp * p * w_theta);
                }
            }
            (nodes, weights)
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "frequency balls are implemented for n = 1, 2, got {n}"
            )))
        }
    };
    Ok(BallRule {
        radius,
        nodes,
        weights,
    })
}

/// The double integrals over `B_r x Ω` that make up `D` and `N`, each
/// evaluated term by term without using orthonormality or the eigenvalue
/// equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionTerms {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
}

impl ExpansionTerms {
    pub fn denominator(&self) -> f64 {
        self.i1 + self.i2 + self.i3
    }

    pub fn numerator(&self) -> f64 {
        self.j1 + self.j2 + self.j3
    }
}

/// Computed eigenfunctions sampled on a quadrature of `Ω` fine enough to
/// resolve `e^{ix·z}` for all `|z| ≤ r_max`.
#[derive(Debug, Clone)]
pub struct FourierField {
    spectrum: Spectrum,
    n: usize,
    volume: f64,
    diameter: f64,
    r_max: f64,
    count: usize,
    nodes: Vec<Point>,
    weights: Vec<f64>,
    /// `nodes.len() x count`, row-major
    jets: Vec<Jet>,
}

impl FourierField {
    /// Samples the first `count` eigenfunctions of `solution`.
    pub fn new(solution: &RitzSolution, count: usize, r_max: f64) -> Result<Self> {
        let available = solution.spectrum.len();
        if count == 0 || count > available {
            return Err(Error::OutOfRange(format!(
                "field needs 1..={available} eigenfunctions, asked for {count}"
            )));
        }
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::InvalidArgument(format!("r_max must be positive, got {r_max}")));
        }
        let domain = solution.spectrum.domain.clone();
        let diameter = domain.diameter();
        let degree = solution.basis.degree();
        let base = match domain.kind() {
            DomainKind::Disk => 2 * degree + 2,
            _ => degree + 2,
        };
        let order = base + (0.5 * r_max * diameter).ceil() as usize + 10;
        let rule = quadrature(&domain, order)?;
        let mut jets = Vec::with_capacity(rule.len() * count);
        for x in &rule.nodes {
            jets.extend(solution.eigenfunctions_at(*x, count));
        }
        let mut spectrum = solution.spectrum.clone();
        spectrum.values.truncate(count);
        Ok(Self {
            n: domain.dimension(),
            volume: domain.volume(),
            spectrum,
            diameter,
            r_max,
            count,
            nodes: rule.nodes,
            weights: rule.weights,
            jets,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `ω_n |Ω|`.
    pub fn ball_volume(&self) -> f64 {
        unit_ball_volume(self.n).expect("dimension is 1 or 2") * self.volume
    }

    /// `2π (m / (ω_n |Ω|))^(1/n)`.
    pub fn threshold_radius(&self, m: usize) -> f64 {
        2.0 * PI * (m as f64 / self.ball_volume()).powf(1.0 / self.n as f64)
    }

    /// Largest deviation of the sampled Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let c = self.count;
        let mut worst: f64 = 0.0;
        for i in 0..c {
            for j in 0..=i {
                let g: f64 = self
                    .weights
                    .iter()
                    .enumerate()
                    .map(|(q, w)| w * self.jets[q * c + i].value * self.jets[q * c + j].value)
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    /// Frequency-ball rule for radius `r`; the default node counts grow
    /// with `r · diam(Ω)` so the oscillation of `|φ̂_j|²` stays resolved.
    pub fn ball(&self, r: f64) -> Result<BallRule> {
        self.check_radius(r)?;
        let band = r * self.diameter;
        let radial = BALL_RADIAL_ORDER.max((0.5 * band).ceil() as usize + 16);
        let angular = BALL_ANGULAR_POINTS.max(band.ceil() as usize + 24);
        ball_rule(self.n, r, radial, angular)
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
        }
        if r > self.r_max * (1.0 + 1e-12) {
            return Err(Error::RadiusMismatch {
                r,
                r_max: self.r_max,
            });
        }
        Ok(())
    }

    fn check_modes(&self, m: usize) -> Result<()> {
        if m > self.count {
            return Err(Error::OutOfRange(format!(
                "field holds {} eigenfunctions, asked for {m}",
                self.count
            )));
        }
        Ok(())
    }

    /// `∫_Ω φ_j(x) e^{ix·z} dx` for `j < m`, written into `out`.
    fn raw_transforms(&self, z: Point, m: usize, out: &mut [Complex64]) {
        out[..m].fill(Complex64::new(0.0, 0.0));
        let c = self.count;
        for (q, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let (s, co) = (x[0] * z[0] + x[1] * z[1]).sin_cos();
            let e = Complex64::new(w * co, w * s);
            for (j, acc) in out[..m].iter_mut().enumerate() {
                *acc += e * self.jets[q * c + j].value;
            }
        }
    }

    /// `φ̂_j(z) = (2π)^(-n/2) ∫_Ω φ_j(x) e^{ix·z} dx` for every sampled `j`.
    pub fn phi_hat(&self, z: Point) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.count];
        self.raw_transforms(z, self.count, &mut out);
        let scale = (2.0 * PI).powf(-0.5 * self.n as f64);
        out.iter_mut().for_each(|v| *v *= scale);
        out
    }

    /// `|Ω| - Σ_{j<m} |∫_Ω φ_j e^{ix·z}|²`, nonnegative by Bessel's
    /// inequality for the orthonormal family.
    pub fn projection_defect(&self, m: usize, z: Point) -> Result<f64> {
        self.check_modes(m)?;
        let mut t = vec![Complex64::new(0.0, 0.0); m];
        self.raw_transforms(z, m, &mut t);
        Ok(self.volume - t.iter().map(|v| v.norm_sqr()).sum::<f64>())
    }

    /// `∫_{B_r} |φ̂_j(z)|² dz` for `j < m`.
    pub fn plancherel_masses(&self, m: usize, r: f64) -> Result<Vec<f64>> {
        self.check_modes(m)?;
        let ball = self.ball(r)?;
        let scale = (2.0 * PI).powf(-(self.n as f64));
        let mut masses = vec![0.0; m];
        let mut t = vec![Complex64::new(0.0, 0.0); m];
        for (z, wz) in ball.nodes.iter().zip(&ball.weights) {
            self.raw_transforms(*z, m, &mut t);
            for (acc, v) in masses.iter_mut().zip(&t) {
                *acc += wz * scale * v.norm_sqr();
            }
        }
        Ok(masses)
    }

    pub fn plancherel_mass(&self, j: usize, r: f64) -> Result<f64> {
        Ok(self.plancherel_masses(j + 1, r)?[j])
    }

    fn tau(&self) -> f64 {
        self.spectrum.tau
    }

    /// `n ω_n |Ω| (r^(n+4)/(n+4) + τ r^(n+2)/(n+2))`.
    pub fn leading_numerator(&self, r: f64) -> f64 {
        j1_closed_form(self.n, self.volume, self.tau(), r)
    }

    /// Evaluates every `I` and `J` term by quadrature over `B_r x Ω`.
    pub fn expansion_terms(&self, m: usize, r: f64) -> Result<ExpansionTerms> {
        self.check_modes(m)?;
        let ball = self.ball(r)?;
        let tau = self.tau();
        let c = self.count;
        let mut t = vec![Complex64::new(0.0, 0.0); m];
        let mut terms = ExpansionTerms {
            i1: 0.0,
            i2: 0.0,
            i3: 0.0,
            j1: 0.0,
            j2: 0.0,
            j3: 0.0,
        };
        let i = Complex64::i();
        for (z, wz) in ball.nodes.iter().zip(&ball.weights) {
            self.raw_transforms(*z, m, &mut t);
            let z2 = z[0] * z[0] + z[1] * z[1];
            let mut acc = [0.0; 6];
            for (q, (y, wy)) in self.nodes.iter().zip(&self.weights).enumerate() {
                let (s, co) = (y[0] * z[0] + y[1] * z[1]).sin_cos();
                let h = Complex64::new(co, s);
                // (2π)^{n/2} Φ̂(z, y) and its y-derivatives
                let mut p = Complex64::new(0.0, 0.0);
                let mut pg = [Complex64::new(0.0, 0.0); 2];
                let mut ph = [Complex64::new(0.0, 0.0); 3];
                for (l, tl) in t.iter().enumerate() {
                    let jet = &self.jets[q * c + l];
                    p += tl * jet.value;
                    for (acc, g) in pg.iter_mut().zip(jet.grad) {
                        *acc += tl * g;
                    }
                    for (acc, hv) in ph.iter_mut().zip(jet.hess) {
                        *acc += tl * hv;
                    }
                }
                let hg = [i * z[0] * h, i * z[1] * h];
                let hh = [-z[0] * z[0] * h, -z[0] * z[1] * h, -z[1] * z[1] * h];
                let cross_h = 2.0 * (hh[1] * ph[1].conj()).re;
                let second = (hh[0] * ph[0].conj()).re + cross_h + (hh[2] * ph[2].conj()).re;
                let first = (hg[0] * pg[0].conj()).re + (hg[1] * pg[1].conj()).re;
                let hess_sq = ph[0].norm_sqr() + 2.0 * ph[1].norm_sqr() + ph[2].norm_sqr();
                let grad_sq = pg[0].norm_sqr() + pg[1].norm_sqr();
                acc[0] += wy * h.norm_sqr();
                acc[1] += wy * -2.0 * (h * p.conj()).re;
                acc[2] += wy * p.norm_sqr();
                acc[3] += wy * (z2 * z2 + tau * z2);
                acc[4] += wy * -2.0 * (second + tau * first);
                acc[5] += wy * (hess_sq + tau * grad_sq);
            }
            terms.i1 += wz * acc[0];
            terms.i2 += wz * acc[1];
            terms.i3 += wz * acc[2];
            terms.j1 += wz * acc[3];
            terms.j2 += wz * acc[4];
            terms.j3 += wz * acc[5];
        }
        Ok(terms)
    }

    /// `∫_{B_r} ∫_Ω (|z|⁴ + τ|z|²) dy dz` by quadrature.
    pub fn j1_quadrature(&self, r: f64) -> Result<f64> {
        let ball = self.ball(r)?;
        let tau = self.tau();
        let inner: f64 = self.weights.iter().sum();
        let outer: f64 = ball
            .nodes
            .iter()
            .zip(&ball.weights)
            .map(|(z, w)| {
                let z2 = z[0] * z[0] + z[1] * z[1];
                w * (z2 * z2 + tau * z2)
            })
            .sum();
        Ok(inner * outer)
    }
}

/// `n ω_n |Ω| (r^(n+4)/(n+4) + τ r^(n+2)/(n+2))`.
pub fn j1_closed_form(n: usize, volume: f64, tau: f64, r: f64) -> f64 {
    let d = n as f64;
    let v = unit_ball_volume(n).expect("dimension is positive") * volume;
    d * v * (r.powf(d + 4.0) / (d + 4.0) + tau * r.powf(d + 2.0) / (d + 2.0))
}

pub fn proof_denominator(field: &FourierField, m: usize, r: f64) -> Result<f64> {
    let masses = field.plancherel_masses(m, r)?;
    Ok(denominator_from(field, &masses, r))
}

fn denominator_from(field: &FourierField, masses: &[f64], r: f64) -> f64 {
    let scale = (2.0 * PI).powf(field.n as f64);
    field.ball_volume() * r.powf(field.n as f64) - scale * masses.iter().sum::<f64>()
}

fn numerator_from(field: &FourierField, masses: &[f64], r: f64) -> f64 {
    let scale = (2.0 * PI).powf(field.n as f64);
    let weighted: f64 = masses.iter().zip(&field.spectrum.values).map(|(m, l)| m * l).sum();
    field.leading_numerator(r) - scale * weighted
}

pub fn proof_numerator(field: &FourierField, m: usize, r: f64) -> Result<f64> {
    if field.spectrum.operator != Operator::Plate {
        return Err(Error::InvalidArgument("the numerator needs a plate spectrum".into()));
    }
    let masses = field.plancherel_masses(m, r)?;
    Ok(numerator_from(field, &masses, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MasterRow {
    pub m: usize,
    pub r: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
    pub lambda_next: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MasterReport {
    pub m: usize,
    pub rows: Vec<MasterRow>,
    pub min_ratio: f64,
    pub r_best: f64,
    pub lambda_next: f64,
    /// `min_ratio - Λ_{m+1}`.
    pub margin: f64,
    pub tol: f64,
}

impl MasterReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// Evaluates `N/D` on `r_grid` and checks `Λ_{m+1} ≤ N/D + tol` with
/// `tol = 1e-4 max(1, Λ_{m+1})`.
pub fn master_inequality_check(
    field: &FourierField,
    m: usize,
    r_grid: &[f64],
) -> Result<MasterReport> {
    if field.spectrum.operator != Operator::Plate {
        return Err(Error::InvalidArgument("the inequality needs a plate spectrum".into()));
    }
    if m + 1 > field.count {
        return Err(Error::OutOfRange(format!(
            "need {} eigenvalues for m = {m}, field holds {}",
            m + 1,
            field.count
        )));
    }
    if r_grid.is_empty() {
        return Err(Error::InvalidArgument("empty radius grid".into()));
    }
    let threshold = field.threshold_radius(m);
    let lambda_next = field.spectrum.values[m];
    let tol = INEQUALITY_REL_TOL * lambda_next.max(1.0);
    let mut rows = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        if !(r > threshold) {
            return Err(Error::BelowThreshold { r, threshold });
        }
        let masses = field.plancherel_masses(m, r)?;
        let numerator = numerator_from(field, &masses, r);
        let denominator = denominator_from(field, &masses, r);
        let ratio = numerator / denominator;
        rows.push(MasterRow {
            m,
            r,
            numerator,
            denominator,
            ratio,
            lambda_next,
            margin: ratio - lambda_next,
            holds: denominator > 0.0 && lambda_next <= ratio + tol,
        });
    }
    let best = rows
        .iter()
        .min_by(|a, b| a.ratio.total_cmp(&b.ratio))
        .expect("grid is nonempty");
    Ok(MasterReport {
        m,
        min_ratio: best.ratio,
        r_best: best.r,
        lambda_next,
        margin: best.ratio - lambda_next,
        tol,
        rows,
    })
}

/// `points` geometrically spaced radii from `1.05 r₀` to `3 r₀`, where
/// `r₀` is the threshold radius for `max(m, 1)`. For `m = 0` the grid
/// starts at `0.25 r₀`.
pub fn default_r_grid(n: usize, volume: f64, m: usize, points: usize) -> Result<Vec<f64>> {
    let v = unit_ball_volume(n)? * volume;
    let r0 = 2.0 * PI * (m.max(1) as f64 / v).powf(1.0 / n as f64);
    let lo = if m == 0 { 0.25 * r0 } else { 1.05 * r0 };
    let hi = 3.0 * r0;
    Ok(match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points)
            .map(|k| lo * (hi / lo).powf(k as f64 / (points - 1) as f64))
            .collect(),
    })
}
