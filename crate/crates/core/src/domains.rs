//! Supported domain shapes, their measures, and quadrature rules over them.
//!
//! Coordinates are absolute: an interval of length `a` is `[0, a]`, a
//! rectangle is `[0, a] x [0, b]`, and a disk of radius `R` is centred at
//! the origin.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{gamma, gauss_legendre_nodes};

/// A point in the plane; one-dimensional domains leave the second slot at 0.
pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Interval,
    Rectangle,
    Disk,
}

impl DomainKind {
    pub fn dimension(self) -> usize {
        match self {
            DomainKind::Interval => 1,
            DomainKind::Rectangle | DomainKind::Disk => 2,
        }
    }

    fn extent_count(self) -> usize {
        match self {
            DomainKind::Interval | DomainKind::Disk => 1,
            DomainKind::Rectangle => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDomain", into = "RawDomain")]
pub struct DomainSpec {
    kind: DomainKind,
    extents: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawDomain {
    kind: DomainKind,
    extents: Vec<f64>,
}

impl TryFrom<RawDomain> for DomainSpec {
    type Error = Error;

    fn try_from(raw: RawDomain) -> Result<Self> {
        DomainSpec::new(raw.kind, raw.extents)
    }
}

impl From<DomainSpec> for RawDomain {
    fn from(d: DomainSpec) -> Self {
        RawDomain {
            kind: d.kind,
            extents: d.extents,
        }
    }
}

impl DomainSpec {
    pub fn new(kind: DomainKind, extents: Vec<f64>) -> Result<Self> {
        if extents.len() != kind.extent_count() {
            return Err(Error::InvalidDomain(format!(
                "{kind:?} takes {} extent(s), got {}",
                kind.extent_count(),
                extents.len()
            )));
        }
        if let Some(bad) = extents.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(Error::InvalidDomain(format!(
                "extents must be finite and positive, got {bad}"
            )));
        }
        Ok(Self { kind, extents })
    }

    pub fn interval(length: f64) -> Result<Self> {
        Self::new(DomainKind::Interval, vec![length])
    }

    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        Self::new(DomainKind::Rectangle, vec![a, b])
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Self::new(DomainKind::Disk, vec![radius])
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn dimension(&self) -> usize {
        self.kind.dimension()
    }

    pub fn volume(&self) -> f64 {
        match self.kind {
            DomainKind::Interval => self.extents[0],
            DomainKind::Rectangle => self.extents[0] * self.extents[1],
            DomainKind::Disk => PI * self.extents[0] * self.extents[0],
        }
    }

    /// Axis-aligned bounding box as `(lower corner, side lengths)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match self.kind {
            DomainKind::Interval => ([0.0, 0.0], [self.extents[0], 0.0]),
            DomainKind::Rectangle => ([0.0, 0.0], [self.extents[0], self.extents[1]]),
            DomainKind::Disk => {
                let r = self.extents[0];
                ([-r, -r], [2.0 * r, 2.0 * r])
            }
        }
    }

    /// The same shape dilated by `factor` about the coordinate origin.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.kind, self.extents.iter().map(|e| e * factor).collect())
    }

    /// Characteristic length used to size oscillatory quadratures.
    pub fn diameter(&self) -> f64 {
        let (_, len) = self.bounding_box();
        (len[0] * len[0] + len[1] * len[1]).sqrt()
    }
}

/// Volume of the unit ball in `n` dimensions, `π^(n/2) / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let half = n as f64 / 2.0;
    Ok(PI.powf(half) / gamma(half + 1.0)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub dimension: usize,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
    /// Polynomial degree integrated exactly (per axis on tensor rules,
    /// total degree on the disk rule).
    pub exact_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(Point) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

pub(crate) fn mapped_gauss(order: usize, lo: f64, len: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre_nodes(order);
    let half = 0.5 * len;
    (
        x.iter().map(|t| lo + half * (t + 1.0)).collect(),
        w.iter().map(|w| w * half).collect(),
    )
}

/// Quadrature over the domain with `order` Gauss points per axis (radial
/// direction on the disk).
pub fn quadrature(domain: &DomainSpec, order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be positive".into()));
    }
    let rule = match domain.kind {
        DomainKind::Interval => {
            let (x, w) = mapped_gauss(order, 0.0, domain.extents[0]);
            QuadratureRule {
                dimension: 1,
                nodes: x.into_iter().map(|x| [x, 0.0]).collect(),
                weights: w,
                exact_degree: 2 * order - 1,
            }
        }
        DomainKind::Rectangle => {
            let (x, wx) = mapped_gauss(order, 0.0, domain.extents[0]);
            let (y, wy) = mapped_gauss(order, 0.0, domain.extents[1]);
            let mut nodes = Vec::with_capacity(order * order);
            let mut weights = Vec::with_capacity(order * order);
            for (xi, wxi) in x.iter().zip(&wx) {
                for (yj, wyj) in y.iter().zip(&wy) {
                    nodes.push([*xi, *yj]);
                    weights.push(wxi * wyj);
                }
            }
            QuadratureRule {
                dimension: 2,
                nodes,
                weights,
                exact_degree: 2 * order - 1,
            }
        }
        DomainKind::Disk => {
            let radius = domain.extents[0];
            let (r, wr) = mapped_gauss(order, 0.0, radius);
            let n_theta = 2 * order + 1;
            let w_theta = 2.0 * PI / n_theta as f64;
            let mut nodes = Vec::with_capacity(order * n_theta);
            let mut weights = Vec::with_capacity(order * n_theta);
            for (ri, wri) in r.iter().zip(&wr) {
                for k in 0..n_theta {
                    let theta = 2.0 * PI * k as f64 / n_theta as f64;
                    nodes.push([ri * theta.cos(), ri * theta.sin()]);
                    weights.push(wri * ri * w_theta);
                }
            }
            QuadratureRule {
                dimension: 2,
                nodes,
                weights,
                exact_degree: 2 * order - 2,
            }
        }
    };
    Ok(rule)
}
