/// Legendre polynomial `P_k(x)` with its first and second derivatives.
///
/// Uses the three-term recurrence for the values and the companion
/// recurrences `P'_{k+1} = P'_{k-1} + (2k+1) P_k` (likewise for `P''`),
/// which stay finite at `x = ±1`.
pub fn legendre_eval(k: usize, x: f64) -> (f64, f64, f64) {
    let table = legendre_table(k, x);
    table[k]
}

/// `(P_j, P'_j, P''_j)` for every degree `j = 0..=max_degree`.
pub fn legendre_table(max_degree: usize, x: f64) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(max_degree + 1);
    out.push((1.0, 0.0, 0.0));
    if max_degree == 0 {
        return out;
    }
    out.push((x, 1.0, 0.0));
    for j in 1..max_degree {
        let jf = j as f64;
        let (p, dp, _) = out[j];
        let (pm, dpm, ddpm) = out[j - 1];
        let next = ((2.0 * jf + 1.0) * x * p - jf * pm) / (jf + 1.0);
        let dnext = dpm + (2.0 * jf + 1.0) * p;
        let ddnext = ddpm + (2.0 * jf + 1.0) * dp;
        out.push((next, dnext, ddnext));
    }
    out
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre_nodes(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "Gauss-Legendre order must be positive");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d, _) = legendre_eval(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d, _) = legendre_eval(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}
