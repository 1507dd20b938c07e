use serde::{Deserialize, Serialize};

use crate::domains::DomainSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    /// `-Δu = μu` with the natural (Neumann) boundary condition.
    Membrane,
    /// `Δ²u - τΔu = Λu` with the natural free-plate boundary conditions.
    Plate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ritz,
    Exact,
}

/// Ordered eigenvalues of one operator on one domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub operator: Operator,
    pub tau: f64,
    pub domain: DomainSpec,
    pub values: Vec<f64>,
    pub method: Method,
    pub degree_used: usize,
    pub converged: bool,
    #[serde(skip)]
    pub last_refinement_delta: f64,
}

impl Spectrum {
    pub fn exact(operator: Operator, domain: DomainSpec, values: Vec<f64>) -> Self {
        Self {
            operator,
            tau: 0.0,
            domain,
            values,
            method: Method::Exact,
            degree_used: 0,
            converged: true,
            last_refinement_delta: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of the first `m` values.
    pub fn partial_sum(&self, m: usize) -> f64 {
        self.values[..m].iter().sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }
}
