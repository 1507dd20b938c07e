use crate::error::{Error, Result};

pub const BESSEL_MAX_ORDER: usize = 20;
pub const BESSEL_MAX_ARG: f64 = 60.0;

/// `J_m(x)` and `J_m'(x)` for `m <= 20`, `0 <= x <= 60`.
pub fn bessel_j(m: usize, x: f64) -> Result<(f64, f64)> {
    check_range(m, x)?;
    let j = orders_unchecked(m + 1, x);
    let deriv = if m == 0 {
        -j[1]
    } else {
        0.5 * (j[m - 1] - j[m + 1])
    };
    Ok((j[m], deriv))
}

/// `J_0(x), ..., J_max_order(x)`.
pub fn bessel_j_orders(max_order: usize, x: f64) -> Result<Vec<f64>> {
    check_range(max_order, x)?;
    Ok(orders_unchecked(max_order, x))
}

fn check_range(m: usize, x: f64) -> Result<()> {
    if m > BESSEL_MAX_ORDER || !(0.0..=BESSEL_MAX_ARG).contains(&x) {
        return Err(Error::OutOfRange(format!(
            "bessel_j supports m <= {BESSEL_MAX_ORDER}, 0 <= x <= {BESSEL_MAX_ARG}; got m={m}, x={x}"
        )));
    }
    Ok(())
}

fn orders_unchecked(max_order: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; max_order + 1];
        out[0] = 1.0;
        return out;
    }
    if x <= 1.0 {
        return (0..=max_order).map(|m| power_series(m, x)).collect();
    }
    miller(max_order, x)
}

fn power_series(m: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / k as f64;
    }
    let mut sum = term;
    let q = -half * half;
    for k in 1..60 {
        term *= q / (k as f64 * (k + m) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

// Backward recurrence from a high starting order, normalized by
// J_0 + 2 (J_2 + J_4 + ...) = 1.
fn miller(max_order: usize, x: f64) -> Vec<f64> {
    let top = (max_order as f64).max(x);
    let mut start = (top + 30.0 + (40.0 * top).sqrt()) as usize;
    start += start % 2;
    let mut out = vec![0.0; max_order + 1];
    let mut j_next = 0.0;
    let mut j_cur = 1e-300;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let j_prev = 2.0 * k as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        let order = k - 1;
        if order <= max_order {
            out[order] = j_cur;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * j_cur;
        }
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    norm += j_cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{find_root, Bracket};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), (1.0, 0.0));
        let (v, d) = bessel_j(1, 0.0).unwrap();
        assert_eq!(v, 0.0);
        close(d, 0.5, 1e-15);
    }

    #[test]
    fn matches_reference_values() {
        // mpmath besselj, 40 digits
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6),
            (1, 1.0, 0.440_050_585_744_933_5),
            (0, 10.0, -0.245_935_764_451_348_34),
            (5, 10.0, -0.234_061_528_186_793_64),
            (3, 30.0, 0.129_211_228_759_724_98),
            (0, 60.0, -0.091_471_804_089_061_87),
        ];
        for (m, x, want) in cases {
            close(bessel_j(m, x).unwrap().0, want, 1e-12);
        }
    }

    #[test]
    fn derivative_identity_j0_prime_is_minus_j1() {
        for i in 0..200 {
            let x = 60.0 * i as f64 / 199.0;
            let (_, d0) = bessel_j(0, x).unwrap();
            let (j1, _) = bessel_j(1, x).unwrap();
            close(d0, -j1, 1e-10);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for m in [0, 1, 4, 13, 20] {
            for &x in &[0.5, 3.0, 17.5, 42.0] {
                let h = 1e-5;
                let fd = (bessel_j(m, x + h).unwrap().0 - bessel_j(m, x - h).unwrap().0) / (2.0 * h);
                close(bessel_j(m, x).unwrap().1, fd, 1e-8);
            }
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_switch() {
        for m in 0..=20 {
            let a = power_series(m, 1.0);
            let b = miller(m, 1.0)[m];
            close(a, b, 1e-14);
        }
    }

    #[test]
    fn first_root_of_j1_prime() {
        let f = |x: f64| bessel_j(1, x).unwrap().1;
        let root = find_root(f, Bracket::new(1.5, 2.5).unwrap(), 1e-13).unwrap();
        close(root, 1.841_183_781_340_659_3, 1e-11);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(bessel_j(21, 1.0).is_err());
        assert!(bessel_j(0, 61.0).is_err());
        assert!(bessel_j(0, -0.1).is_err());
    }
}
