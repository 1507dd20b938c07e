use crate::error::{Error, Result};

/// Default absolute bracket width for root finding.
pub const DEFAULT_ROOT_TOL: f64 = 1e-13;
/// Default bracket width for golden-section minimization.
pub const DEFAULT_MIN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "bracket needs finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Brent's method on a sign-changing bracket. The result always lies
/// inside the input bracket.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: Bracket, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo: a, hi: b });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic / secant step
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Ok(b)
}

/// Golden-section search. Returns `(argmin, f(argmin))`.
pub fn minimize_unimodal<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: Bracket,
    tol: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // keep the best probe; golden-section never discards it
    [(x, fx), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 < best.1 { cand } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn br(lo: f64, hi: f64) -> Bracket {
        Bracket::new(lo, hi).unwrap()
    }

    #[test]
    fn sqrt_two() {
        let x = find_root(|x| x * x - 2.0, br(1.0, 2.0), 1e-12).unwrap();
        assert_abs_diff_eq!(x, 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn free_beam_characteristic_root() {
        let x = find_root(|k| k.cos() * k.cosh() - 1.0, br(4.0, 5.0), DEFAULT_ROOT_TOL).unwrap();
        assert_abs_diff_eq!(x, 4.730_040_744_862_704, epsilon = 1e-11);
    }

    #[test]
    fn no_sign_change() {
        let err = find_root(|x| x * x + 1.0, br(-1.0, 1.0), 1e-12).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn invalid_bracket() {
        assert!(Bracket::new(2.0, 1.0).is_err());
        assert!(Bracket::new(1.0, 1.0).is_err());
        assert!(Bracket::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn root_lies_in_bracket() {
        for k in 1..50 {
            let shift = k as f64 * 0.37;
            let b = br(shift - 1.0, shift + 2.5);
            let x = find_root(|x| (x - shift).powi(3) + 0.01 * (x - shift), b, 1e-13).unwrap();
            assert!(x >= b.lo && x <= b.hi);
            assert_abs_diff_eq!(x, shift, epsilon = 1e-10);
        }
    }

    #[test]
    fn golden_section() {
        let (x, fx) = minimize_unimodal(|x| (x - 3.0).powi(2), br(0.0, 10.0), 1e-10);
        assert_abs_diff_eq!(x, 3.0, epsilon = 1e-8);
        assert_abs_diff_eq!(fx, 0.0, epsilon = 1e-15);

        let (x, fx) = minimize_unimodal(|x: f64| (x - 1.0).abs(), br(0.0, 2.0), 1e-10);
        assert_abs_diff_eq!(x, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fx, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn golden_section_on_plate_ratio() {
        // F(r) = (r^6 / 3) / (r^2 - 4): n = 2, |Ω| = π, τ = 0, m = 1
        let f = |r: f64| r.powi(6) / 3.0 / (r * r - 4.0);
        let (x, fx) = minimize_unimodal(f, br(2.01, 10.0), DEFAULT_MIN_TOL);
        assert_abs_diff_eq!(x, 6f64.sqrt(), epsilon = 1e-7);
        assert_abs_diff_eq!(fx, 36.0, epsilon = 1e-12);
    }
}
