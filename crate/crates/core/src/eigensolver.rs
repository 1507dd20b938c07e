//! Dense symmetric-definite generalized eigenproblems `K v = λ M v`.
//!
//! Both stages use cyclic Jacobi rotations. Matrices whose nonzero pattern
//! splits into independent blocks are solved block by block, which keeps
//! the symmetry-reduced Ritz systems cheap.

use ndarray::{s, Array2, ArrayView2};

use crate::error::{Error, Result};

pub const DEFAULT_FILTER_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;
// a pair (p, q) is rotated while |a_pq| > tol * sqrt(|a_pp a_qq|)
const ROTATION_REL: f64 = 1e-15;
// assembled mass matrices carry off-diagonal noise of a few hundred ulps
const MASS_ROTATION_REL: f64 = 1e-13;

/// Dense symmetric matrix with exactly mirrored entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Array2<f64>);

impl SymMatrix {
    /// Symmetrizes by averaging `a` with its transpose.
    pub fn from_array(a: Array2<f64>) -> Result<Self> {
        let (r, c) = a.dim();
        if r != c || r == 0 {
            return Err(Error::InvalidArgument(format!(
                "symmetric matrix must be square and nonempty, got {r}x{c}"
            )));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let mut m = a;
        for i in 0..r {
            for j in (i + 1)..r {
                let v = 0.5 * (m[[i, j]] + m[[j, i]]);
                m[[i, j]] = v;
                m[[j, i]] = v;
            }
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(Array2::eye(n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self(Array2::from_diag(&ndarray::arr1(d)))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.0.view()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[[i, j]]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }

    /// `self + alpha * other`
    pub fn add_scaled(&self, alpha: f64, other: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 + &(alpha * &other.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub min_retained_mass: f64,
    pub max_mass: f64,
    pub filtered: usize,
}

#[derive(Debug, Clone)]
pub struct EigResult {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column eigenvectors in the original basis, M-orthonormal.
    pub vectors: Array2<f64>,
    pub condition: ConditionReport,
}

/// Eigenvalues (ascending) and column eigenvectors of a symmetric matrix.
pub fn symmetric_eigen(a: &SymMatrix) -> Result<(Vec<f64>, Array2<f64>)> {
    let (vals, vecs) = jacobi(a.0.clone(), ROTATION_REL)?;
    Ok(sort_pairs(vals, vecs))
}

/// Solves `K v = λ M v` for symmetric `K` and positive semidefinite `M`.
///
/// `M` is diagonalized first; directions whose mass eigenvalue is at most
/// `filter_tol` times the largest are dropped, and `K` is diagonalized in
/// the whitened span of the rest.
pub fn solve_generalized(k: &SymMatrix, m: &SymMatrix, filter_tol: f64) -> Result<EigResult> {
    let n = k.size();
    if m.size() != n {
        return Err(Error::InvalidArgument(format!(
            "stiffness is {n}x{n} but mass is {0}x{0}",
            m.size()
        )));
    }
    if !(filter_tol > 0.0) {
        return Err(Error::InvalidArgument("filter_tol must be positive".into()));
    }
    let blocks = coupled_blocks(&k.0, &m.0);

    let mut mass_parts = Vec::with_capacity(blocks.len());
    for idx in &blocks {
        let mb = gather(&m.0, idx);
        mass_parts.push(jacobi(mb, MASS_ROTATION_REL)?);
    }
    let max_mass = mass_parts
        .iter()
        .flat_map(|(v, _)| v.iter().copied())
        .fold(0.0f64, f64::max);
    if !(max_mass > 0.0) {
        return Err(Error::EmptySubspace);
    }
    if let Some(neg) = mass_parts
        .iter()
        .flat_map(|(v, _)| v.iter().copied())
        .find(|v| *v < -filter_tol * max_mass)
    {
        return Err(Error::MassNotPsd { value: neg });
    }
    let cutoff = filter_tol * max_mass;

    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut filtered = 0;
    let mut min_retained = f64::INFINITY;
    for (idx, (mvals, mvecs)) in blocks.iter().zip(mass_parts) {
        let keep: Vec<usize> = (0..mvals.len()).filter(|&i| mvals[i] > cutoff).collect();
        filtered += mvals.len() - keep.len();
        if keep.is_empty() {
            continue;
        }
        let nb = idx.len();
        let mut whiten = Array2::<f64>::zeros((nb, keep.len()));
        for (c, &i) in keep.iter().enumerate() {
            min_retained = min_retained.min(mvals[i]);
            let scale = 1.0 / mvals[i].sqrt();
            for r in 0..nb {
                whiten[[r, c]] = mvecs[[r, i]] * scale;
            }
        }
        let kb = gather(&k.0, idx);
        let reduced = whiten.t().dot(&kb).dot(&whiten);
        let reduced = SymMatrix::from_array(reduced)?;
        let (vals, y) = jacobi(reduced.0, ROTATION_REL)?;
        let x = whiten.dot(&y);
        for (c, val) in vals.into_iter().enumerate() {
            let mut full = vec![0.0; n];
            for (r, &gi) in idx.iter().enumerate() {
                full[gi] = x[[r, c]];
            }
            pairs.push((val, full));
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptySubspace);
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut vectors = Array2::<f64>::zeros((n, pairs.len()));
    let mut values = Vec::with_capacity(pairs.len());
    for (c, (val, vec)) in pairs.into_iter().enumerate() {
        values.push(val);
        for (r, v) in vec.into_iter().enumerate() {
            vectors[[r, c]] = v;
        }
    }
    Ok(EigResult {
        values,
        vectors,
        condition: ConditionReport {
            min_retained_mass: min_retained,
            max_mass,
            filtered,
        },
    })
}

/// Index sets of the connected components of the joint nonzero pattern.
fn coupled_blocks(k: &Array2<f64>, m: &Array2<f64>) -> Vec<Vec<usize>> {
    let n = k.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if k[[i, j]] != 0.0 || m[[i, j]] != 0.0 {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn gather(a: &Array2<f64>, idx: &[usize]) -> Array2<f64> {
    let mut out = Array2::zeros((idx.len(), idx.len()));
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            out[[r, c]] = a[[i, j]];
        }
    }
    out
}

fn sort_pairs(vals: Vec<f64>, vecs: Array2<f64>) -> (Vec<f64>, Array2<f64>) {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut sorted = Array2::zeros(vecs.dim());
    for (c, &i) in order.iter().enumerate() {
        sorted.slice_mut(s![.., c]).assign(&vecs.slice(s![.., i]));
    }
    (order.iter().map(|&i| vals[i]).collect(), sorted)
}

// off-diagonal Frobenius norm <= 1e-14 * diagonal Frobenius norm
fn off_diagonal_small(a: &Array2<f64>) -> bool {
    let n = a.nrows();
    let mut off = 0.0;
    let mut diag = 0.0;
    for i in 0..n {
        diag += a[[i, i]] * a[[i, i]];
        for j in (i + 1)..n {
            off += 2.0 * a[[i, j]] * a[[i, j]];
        }
    }
    off.sqrt() <= 1e-14 * diag.sqrt()
}

/// Cyclic-by-rows Jacobi. Returns unsorted eigenvalues and column
/// eigenvectors. Exactly zero off-diagonal entries are never rotated, so
/// exact zero rows stay exact.
fn jacobi(mut a: Array2<f64>, pair_tol: f64) -> Result<(Vec<f64>, Array2<f64>)> {
    let n = a.nrows();
    // rows of vt are eigenvectors
    let mut vt = Array2::<f64>::eye(n);
    let mut converged = n <= 1;
    for _sweep in 0..MAX_SWEEPS {
        if converged || off_diagonal_small(&a) {
            converged = true;
            break;
        }
        let mut rotations = 0usize;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let app = a[[p, p]];
                let aqq = a[[q, q]];
                if apq.abs() <= pair_tol * (app * aqq).abs().sqrt() {
                    continue;
                }
                rotations += 1;
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                a[[p, p]] = app - t * apq;
                a[[q, q]] = aqq + t * apq;
                a[[p, q]] = 0.0;
                a[[q, p]] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[[p, k]];
                    let akq = a[[q, k]];
                    if akp == 0.0 && akq == 0.0 {
                        continue;
                    }
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    a[[p, k]] = np;
                    a[[k, p]] = np;
                    a[[q, k]] = nq;
                    a[[k, q]] = nq;
                }
                for k in 0..n {
                    let vp = vt[[p, k]];
                    let vq = vt[[q, k]];
                    vt[[p, k]] = c * vp - s * vq;
                    vt[[q, k]] = s * vp + c * vq;
                }
            }
        }
        if rotations == 0 {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let vals = (0..n).map(|i| a[[i, i]]).collect();
    Ok((vals, vt.reversed_axes()))
}
