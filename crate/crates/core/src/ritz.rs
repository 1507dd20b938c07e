//! Rayleigh-Ritz discretization of the free membrane and free plate.
//!
//! Trial functions are tensor products of Legendre polynomials on the
//! domain's bounding box, normalized to be orthonormal on that box. No
//! boundary constraint is imposed: the free conditions are natural for
//! both bilinear forms, so the unconstrained polynomial space is a valid
//! subspace of H²(Ω).

use ndarray::{s, Array1, Array2};

use crate::domains::{quadrature, DomainKind, DomainSpec, Point, QuadratureRule};
use crate::eigensolver::{solve_generalized, SymMatrix, DEFAULT_FILTER_TOL};
use crate::error::{Error, Result};
use crate::numerics::legendre_table;
use crate::spectrum::{Method, Operator, Spectrum};

pub const START_DEGREE: usize = 8;
pub const DEGREE_STEP: usize = 4;
pub const MAX_DEGREE: usize = 28;
pub const ZERO_MODE_FLOOR: f64 = 1e-10;
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-7;
/// Relative pivot below which a basis function is treated as dependent on
/// lower-degree ones when orthonormalizing on the domain.
pub const FRAME_DROP_TOL: f64 = 1e-10;
/// Largest admissible ratio between the bounding-box norm and the domain
/// norm of a retained orthonormal function.
pub const FRAME_GROWTH_LIMIT: f64 = 1e6;

/// Value, gradient and Hessian `[xx, xy, yy]` of one basis function.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct RitzBasis {
    domain: DomainSpec,
    degree: usize,
    origin: Point,
    lengths: Point,
    /// Per-axis Legendre degrees of each basis function.
    indices: Vec<(usize, usize)>,
}

impl RitzBasis {
    pub fn new(domain: &DomainSpec, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("basis degree must be positive".into()));
        }
        let (origin, lengths) = domain.bounding_box();
        let indices = if domain.dimension() == 1 {
            (0..=degree).map(|i| (i, 0)).collect()
        } else {
            (0..=degree)
                .flat_map(|i| (0..=degree).map(move |j| (i, j)))
                .collect()
        };
        Ok(Self {
            domain: domain.clone(),
            degree,
            origin,
            lengths,
            indices,
        })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[(usize, usize)] {
        &self.indices
    }

    /// Index of the basis function with Legendre degrees `(i, j)`.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.indices.iter().position(|&p| p == (i, j))
    }

    /// Normalized 1D Legendre values and first two derivatives along `axis`.
    fn axis_table(&self, axis: usize, x: f64) -> Vec<[f64; 3]> {
        let len = self.lengths[axis];
        if len == 0.0 {
            // unused second axis of an interval
            return vec![[1.0, 0.0, 0.0]];
        }
        let t = 2.0 * (x - self.origin[axis]) / len - 1.0;
        let d = 2.0 / len;
        legendre_table(self.degree, t)
            .into_iter()
            .enumerate()
            .map(|(k, (p, dp, ddp))| {
                let c = ((2 * k + 1) as f64 / len).sqrt();
                [c * p, c * d * dp, c * d * d * ddp]
            })
            .collect()
    }

    /// Jets of every basis function at `x`.
    pub fn eval(&self, x: Point) -> Vec<Jet> {
        let tx = self.axis_table(0, x[0]);
        let ty = self.axis_table(1, x[1]);
        self.indices
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (tx[i], ty[j]);
                Jet {
                    value: a[0] * b[0],
                    grad: [a[1] * b[0], a[0] * b[1]],
                    hess: [a[2] * b[0], a[1] * b[1], a[0] * b[2]],
                }
            })
            .collect()
    }

    /// Quadrature that integrates the products of basis functions exactly.
    pub fn quadrature(&self) -> Result<QuadratureRule> {
        let order = match self.domain.kind() {
            DomainKind::Interval | DomainKind::Rectangle => self.degree + 2,
            // products reach total degree 4·degree on the disk
            DomainKind::Disk => 2 * self.degree + 2,
        };
        quadrature(&self.domain, order)
    }

    /// Groups of basis functions sharing a reflection parity about the
    /// box centre. Every supported domain is symmetric under both axis
    /// reflections, so the bilinear forms never couple different groups.
    fn parity_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); 4];
        for (b, &(i, j)) in self.indices.iter().enumerate() {
            classes[2 * (i % 2) + (j % 2)].push(b);
        }
        classes.retain(|c| !c.is_empty());
        classes
    }
}

/// Mass, gradient and Hessian Gram matrices of a Ritz basis.
#[derive(Debug, Clone)]
pub struct RitzSystem {
    pub basis: RitzBasis,
    pub mass: SymMatrix,
    pub grad_form: SymMatrix,
    pub hess_form: SymMatrix,
}

impl RitzSystem {
    /// `grad_form` for the membrane, `hess_form + tau * grad_form` for the plate.
    pub fn stiffness(&self, operator: Operator, tau: f64) -> SymMatrix {
        match operator {
            Operator::Membrane => self.grad_form.clone(),
            Operator::Plate if tau == 0.0 => self.hess_form.clone(),
            Operator::Plate => self.hess_form.add_scaled(tau, &self.grad_form),
        }
    }
}

pub fn assemble(domain: &DomainSpec, degree: usize) -> Result<RitzSystem> {
    let basis = RitzBasis::new(domain, degree)?;
    let rule = basis.quadrature()?;
    let n = basis.len();
    let jets: Vec<Vec<Jet>> = rule.nodes.iter().map(|x| basis.eval(*x)).collect();
    let sqrt_w: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();

    let mut mass = Array2::<f64>::zeros((n, n));
    let mut grad = Array2::<f64>::zeros((n, n));
    let mut hess = Array2::<f64>::zeros((n, n));
    let nq = rule.len();
    for class in basis.parity_classes() {
        let nb = class.len();
        // rows: quadrature nodes scaled by sqrt(weight); columns: basis functions
        let sample = |f: &dyn Fn(&Jet) -> f64| {
            Array2::from_shape_fn((nq, nb), |(q, c)| sqrt_w[q] * f(&jets[q][class[c]]))
        };
        let v = sample(&|j| j.value);
        let gx = sample(&|j| j.grad[0]);
        let gy = sample(&|j| j.grad[1]);
        let hxx = sample(&|j| j.hess[0]);
        let hxy = sample(&|j| j.hess[1]);
        let hyy = sample(&|j| j.hess[2]);

        let mb = v.t().dot(&v);
        let gb = gx.t().dot(&gx) + gy.t().dot(&gy);
        let hb = hxx.t().dot(&hxx) + 2.0 * hxy.t().dot(&hxy) + hyy.t().dot(&hyy);
        for (r, &gr) in class.iter().enumerate() {
            for (c, &gc) in class.iter().enumerate() {
                mass[[gr, gc]] = mb[[r, c]];
                grad[[gr, gc]] = gb[[r, c]];
                hess[[gr, gc]] = hb[[r, c]];
            }
        }
    }
    Ok(RitzSystem {
        basis,
        mass: SymMatrix::from_array(mass)?,
        grad_form: SymMatrix::from_array(grad)?,
        hess_form: SymMatrix::from_array(hess)?,
    })
}

/// Gradient and Hessian forms expressed in an orthonormal frame of the
/// Ritz space, so the mass matrix is the identity.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub basis: RitzBasis,
    /// `N x R` coefficients of the orthonormal functions in the raw basis.
    pub frame: Array2<f64>,
    pub grad_form: SymMatrix,
    pub hess_form: SymMatrix,
}

impl ReducedSystem {
    pub fn stiffness(&self, operator: Operator, tau: f64) -> SymMatrix {
        match operator {
            Operator::Membrane => self.grad_form.clone(),
            Operator::Plate if tau == 0.0 => self.hess_form.clone(),
            Operator::Plate => self.hess_form.add_scaled(tau, &self.grad_form),
        }
    }
}

/// Orthonormalizes the basis on the domain and assembles the reduced forms.
///
/// Within each parity class the weighted value samples are orthonormalized
/// by modified Gram-Schmidt (two passes) in order of increasing total
/// degree. A function whose new component has relative norm at most
/// `drop_tol` is skipped, and so is one whose orthonormalized version has a
/// bounding-box norm above `growth_limit` (the raw basis is orthonormal on
/// the box, so this is the coefficient norm). Low-degree polynomials are
/// always kept exactly. On rectangles nothing is ever dropped.
/// The reduced forms are Gram products of transformed derivative samples
/// and hence positive semidefinite in floating point as well.
pub fn assemble_reduced(
    domain: &DomainSpec,
    degree: usize,
    drop_tol: f64,
    growth_limit: f64,
) -> Result<ReducedSystem> {
    let basis = RitzBasis::new(domain, degree)?;
    let rule = basis.quadrature()?;
    let n = basis.len();
    let nq = rule.len();
    let jets: Vec<Vec<Jet>> = rule.nodes.iter().map(|x| basis.eval(*x)).collect();
    let sqrt_w: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let idx = basis.indices().to_vec();

    let mut blocks = Vec::new();
    for mut class in basis.parity_classes() {
        class.sort_by_key(|&b| (idx[b].0 + idx[b].1, idx[b].0));
        let nb = class.len();
        let sample = |f: &dyn Fn(&Jet) -> f64| {
            Array2::from_shape_fn((nq, nb), |(q, c)| sqrt_w[q] * f(&jets[q][class[c]]))
        };
        let v = sample(&|j| j.value);
        let mut q = Array2::<f64>::zeros((nq, nb));
        let mut coef = Array2::<f64>::zeros((nb, nb));
        let mut kept = 0;
        for c in 0..nb {
            let mut u = v.column(c).to_owned();
            let mut f = Array1::<f64>::zeros(nb);
            f[c] = 1.0;
            let norm0 = u.dot(&u).sqrt();
            for _ in 0..2 {
                let qk = q.slice(s![.., ..kept]);
                let h = qk.t().dot(&u);
                u -= &qk.dot(&h);
                f -= &coef.slice(s![.., ..kept]).dot(&h);
            }
            let norm = u.dot(&u).sqrt();
            let growth = f.dot(&f).sqrt() / norm;
            if norm > drop_tol * norm0 && growth <= growth_limit {
                q.column_mut(kept).assign(&(u / norm));
                coef.column_mut(kept).assign(&(f / norm));
                kept += 1;
            }
        }
        let coef = coef.slice(s![.., ..kept]).to_owned();
        let project = |f: &dyn Fn(&Jet) -> f64| sample(f).dot(&coef);
        let gx = project(&|j| j.grad[0]);
        let gy = project(&|j| j.grad[1]);
        let hxx = project(&|j| j.hess[0]);
        let hxy = project(&|j| j.hess[1]);
        let hyy = project(&|j| j.hess[2]);
        let gb = gx.t().dot(&gx) + gy.t().dot(&gy);
        let hb = hxx.t().dot(&hxx) + 2.0 * hxy.t().dot(&hxy) + hyy.t().dot(&hyy);
        blocks.push((class, coef, gb, hb));
    }

    let r: usize = blocks.iter().map(|b| b.1.ncols()).sum();
    let mut frame = Array2::<f64>::zeros((n, r));
    let mut grad = Array2::<f64>::zeros((r, r));
    let mut hess = Array2::<f64>::zeros((r, r));
    let mut offset = 0;
    for (class, coef, gb, hb) in blocks {
        let k = coef.ncols();
        for (row, &b) in class.iter().enumerate() {
            frame.slice_mut(s![b, offset..offset + k]).assign(&coef.row(row));
        }
        grad.slice_mut(s![offset..offset + k, offset..offset + k]).assign(&gb);
        hess.slice_mut(s![offset..offset + k, offset..offset + k]).assign(&hb);
        offset += k;
    }
    Ok(ReducedSystem {
        basis,
        frame,
        grad_form: SymMatrix::from_array(grad)?,
        hess_form: SymMatrix::from_array(hess)?,
    })
}

/// Converged Ritz eigenpairs: the spectrum plus the basis coefficients of
/// the matching L²-orthonormal eigenfunctions (one column per value).
#[derive(Debug, Clone)]
pub struct RitzSolution {
    pub spectrum: Spectrum,
    pub basis: RitzBasis,
    pub coefficients: Array2<f64>,
}

impl RitzSolution {
    /// Values of the first `count` eigenfunctions at `x`.
    pub fn eigenfunctions_at(&self, x: Point, count: usize) -> Vec<Jet> {
        let jets = self.basis.eval(x);
        (0..count)
            .map(|c| {
                let mut acc = Jet::default();
                for (b, jet) in jets.iter().enumerate() {
                    let w = self.coefficients[[b, c]];
                    acc.value += w * jet.value;
                    for k in 0..2 {
                        acc.grad[k] += w * jet.grad[k];
                    }
                    for k in 0..3 {
                        acc.hess[k] += w * jet.hess[k];
                    }
                }
                acc
            })
            .collect()
    }
}

/// Ritz eigenpairs at one fixed basis degree.
pub fn solve_at_degree(
    domain: &DomainSpec,
    operator: Operator,
    tau: f64,
    degree: usize,
) -> Result<(RitzBasis, Vec<f64>, Array2<f64>)> {
    let system = assemble_reduced(domain, degree, FRAME_DROP_TOL, FRAME_GROWTH_LIMIT)?;
    let k = system.stiffness(operator, tau);
    let eig = solve_generalized(&k, &SymMatrix::identity(k.size()), DEFAULT_FILTER_TOL)?;
    Ok((system.basis, eig.values, system.frame.dot(&eig.vectors)))
}

fn check_request(operator: Operator, tau: f64, count: usize, tol: f64) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tension must be finite and nonnegative, got {tau}"
        )));
    }
    if operator == Operator::Membrane && tau != 0.0 {
        return Err(Error::InvalidArgument("the membrane takes no tension".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("target tolerance must be positive".into()));
    }
    Ok(())
}

/// Refines the basis degree (8, 12, ..., 28) until the first `count`
/// eigenvalues settle to `target_rel_tol`, and keeps the eigenvectors.
pub fn compute_modes(
    domain: &DomainSpec,
    operator: Operator,
    tau: f64,
    count: usize,
    target_rel_tol: f64,
) -> Result<RitzSolution> {
    check_request(operator, tau, count, target_rel_tol)?;
    let mut previous: Option<Vec<f64>> = None;
    let mut best: Option<RitzSolution> = None;
    let mut degree = START_DEGREE;
    while degree <= MAX_DEGREE {
        let (basis, values, vectors) = solve_at_degree(domain, operator, tau, degree)?;
        if values.len() >= count {
            let values = values[..count].to_vec();
            let coefficients = vectors.slice(ndarray::s![.., ..count]).to_owned();
            let delta = previous.as_ref().map(|prev| {
                prev.iter()
                    .zip(&values)
                    .map(|(a, b)| (a - b).abs() / b.abs().max(ZERO_MODE_FLOOR / target_rel_tol))
                    .fold(0.0, f64::max)
            });
            let converged = delta.is_some_and(|d| d <= target_rel_tol);
            let spectrum = Spectrum {
                operator,
                tau,
                domain: domain.clone(),
                values: values.clone(),
                method: Method::Ritz,
                degree_used: degree,
                converged,
                last_refinement_delta: delta.unwrap_or(f64::INFINITY),
            };
            best = Some(RitzSolution {
                spectrum,
                basis,
                coefficients,
            });
            if converged {
                return Ok(best.unwrap());
            }
            previous = Some(values);
        }
        degree += DEGREE_STEP;
    }
    match best {
        Some(sol) => Err(Error::NotConverged {
            delta: sol.spectrum.last_refinement_delta,
            best: Box::new(sol.spectrum),
        }),
        None => Err(Error::InvalidArgument(format!(
            "basis at degree {MAX_DEGREE} cannot resolve {count} eigenvalues"
        ))),
    }
}

pub fn compute_spectrum(
    domain: &DomainSpec,
    operator: Operator,
    tau: f64,
    count: usize,
    target_rel_tol: f64,
) -> Result<Spectrum> {
    compute_modes(domain, operator, tau, count, target_rel_tol).map(|s| s.spectrum)
}

/// Number of leading values at or below `threshold_rel * max(1, last value)`.
pub fn zero_mode_count(spectrum: &Spectrum, threshold_rel: f64) -> usize {
    let Some(last) = spectrum.values.last() else {
        return 0;
    };
    let cutoff = threshold_rel * last.max(1.0);
    spectrum.values.iter().take_while(|v| **v <= cutoff).count()
}
