//! Reference spectra with closed forms or scalar characteristic equations.

use std::f64::consts::PI;

use crate::domains::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::numerics::{bessel_j, find_root, Bracket, DEFAULT_ROOT_TOL};
use crate::spectrum::{Operator, Spectrum};

/// Largest number of values served by [`disk_neumann`].
pub const DISK_MAX_COUNT: usize = 30;
/// Largest number of values served by [`free_beam`].
pub const BEAM_MAX_COUNT: usize = 12;

/// Scan limit for roots of `J_m'`; every root below it has order `m < 20`.
const DISK_ROOT_SCAN: f64 = 20.0;
const DISK_SCAN_STEP: f64 = 0.05;

/// A domain/operator pair with a known reference spectrum.
///
/// Membrane oracles exist on all three shapes. The plate oracle is the free
/// beam, so it is limited to intervals without tension.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    domain: DomainSpec,
    operator: Operator,
}

impl OracleSpec {
    pub fn new(domain: DomainSpec, operator: Operator, tau: f64) -> Result<Self> {
        let supported = match operator {
            Operator::Membrane => tau == 0.0,
            Operator::Plate => domain.kind() == DomainKind::Interval && tau == 0.0,
        };
        if !supported {
            return Err(Error::UnsupportedOracle(format!(
                "no reference spectrum for {operator:?} on {:?} with tau = {tau}",
                domain.kind()
            )));
        }
        Ok(Self { domain, operator })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn operator(&self) -> Operator {
        self.operator
    }

    pub fn spectrum(&self, count: usize) -> Result<Spectrum> {
        let e = self.domain.extents();
        match (self.operator, self.domain.kind()) {
            (Operator::Membrane, DomainKind::Interval) => interval_neumann(e[0], count),
            (Operator::Membrane, DomainKind::Rectangle) => rectangle_neumann(e[0], e[1], count),
            (Operator::Membrane, DomainKind::Disk) => disk_neumann(e[0], count),
            (Operator::Plate, _) => free_beam(e[0], count),
        }
    }
}

fn check_count(count: usize, max: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    if count > max {
        return Err(Error::OutOfRange(format!("count {count} exceeds the limit {max}")));
    }
    Ok(())
}

/// Neumann Laplacian on `[0, a]`: `(jπ/a)²`, `j = 0, 1, ...`.
pub fn interval_neumann(a: f64, count: usize) -> Result<Spectrum> {
    check_count(count, usize::MAX)?;
    let domain = DomainSpec::interval(a)?;
    let values = (0..count).map(|j| (j as f64 * PI / a).powi(2)).collect();
    Ok(Spectrum::exact(Operator::Membrane, domain, values))
}

/// The `count` smallest values of `π²(j²/a² + k²/b²)`, with multiplicity.
pub fn rectangle_neumann(a: f64, b: f64, count: usize) -> Result<Spectrum> {
    check_count(count, usize::MAX)?;
    let domain = DomainSpec::rectangle(a, b)?;
    let range = count
        .checked_add(10)
        .ok_or_else(|| Error::OutOfRange(format!("count {count} is too large")))?;
    let mut values = Vec::with_capacity((range + 1) * (range + 1));
    for j in 0..=range {
        for k in 0..=range {
            let (x, y) = (j as f64 / a, k as f64 / b);
            values.push(PI * PI * (x * x + y * y));
        }
    }
    values.sort_by(f64::total_cmp);
    values.truncate(count);
    Ok(Spectrum::exact(Operator::Membrane, domain, values))
}

/// Positive roots of `J_m'` below `limit`, ascending.
pub fn bessel_derivative_roots(m: usize, limit: f64) -> Result<Vec<f64>> {
    let deriv = |x: f64| bessel_j(m, x).map(|(_, d)| d);
    let mut roots = Vec::new();
    let mut lo = DISK_SCAN_STEP;
    let mut f_lo = deriv(lo)?;
    while lo < limit {
        let hi = (lo + DISK_SCAN_STEP).min(limit);
        let f_hi = deriv(hi)?;
        if f_lo == 0.0 {
            roots.push(lo);
        } else if f_lo.signum() != f_hi.signum() && f_hi != 0.0 {
            let root = find_root(
                |x| bessel_j(m, x).map(|(_, d)| d).unwrap_or(f64::NAN),
                Bracket::new(lo, hi)?,
                DEFAULT_ROOT_TOL,
            )?;
            roots.push(root);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(roots)
}

/// Neumann Laplacian on the disk of radius `r`: the zero mode and
/// `(p/r)²` for every positive root `p` of `J_m'`, doubled for `m ≥ 1`.
pub fn disk_neumann(r: f64, count: usize) -> Result<Spectrum> {
    check_count(count, DISK_MAX_COUNT)?;
    let domain = DomainSpec::disk(r)?;
    let mut roots = vec![0.0];
    for m in 0..20 {
        for p in bessel_derivative_roots(m, DISK_ROOT_SCAN)? {
            roots.push(p);
            if m > 0 {
                roots.push(p);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    let values = roots[..count].iter().map(|p| (p / r).powi(2)).collect();
    Ok(Spectrum::exact(Operator::Membrane, domain, values))
}

/// Positive roots of `cos k cosh k = 1`, in ascending order.
pub fn free_beam_roots(count: usize) -> Result<Vec<f64>> {
    // cos k - 1/cosh k has the same roots and stays bounded
    let f = |k: f64| k.cos() - 1.0 / k.cosh();
    (1..=count)
        .map(|j| {
            let j = j as f64;
            find_root(f, Bracket::new((j + 0.4) * PI, (j + 0.6) * PI)?, DEFAULT_ROOT_TOL)
        })
        .collect()
}

/// Free-free beam of length `l` (plate without tension on an interval):
/// two zero modes, then `(k/l)⁴` over the roots of `cos k cosh k = 1`.
pub fn free_beam(l: f64, count: usize) -> Result<Spectrum> {
    check_count(count, BEAM_MAX_COUNT)?;
    let domain = DomainSpec::interval(l)?;
    let mut values = vec![0.0; count.min(2)];
    for k in free_beam_roots(count.saturating_sub(2))? {
        values.push((k / l).powi(4));
    }
    Ok(Spectrum::exact(Operator::Plate, domain, values))
}
