//! Bracketing scalar root finder.

use crate::error::{Error, Result};

/// Search interval and stopping controls for [`find_root`].
#[derive(Clone, Copy, Debug)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64, tolerance: f64, max_iterations: usize) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::domain(format!("bracket requires lo < hi, got [{lo}, {hi}]")));
        }
        if !(tolerance > 0.0) {
            return Err(Error::domain("bracket tolerance must be positive"));
        }
        Ok(RootBracket {
            lo,
            hi,
            tolerance,
            max_iterations,
        })
    }
}

/// Brent-style root finding: inverse quadratic interpolation and secant steps
/// guarded by bisection, so it converges for any continuous sign-changing f.
///
/// Stops when |f(x)| ≤ tolerance or the bracket width falls at or below the
/// tolerance. Fully deterministic.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: &RootBracket) -> Result<f64> {
    let tol = bracket.tolerance;
    let mut a = bracket.lo;
    let mut b = bracket.hi;
    let mut fa = f(a);
    let mut fb = f(b);

    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoBracket);
    }

    // Keep b the best estimate: |f(b)| <= |f(a)|.
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..bracket.max_iterations {
        if fb.abs() <= tol {
            return Ok(b);
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let half = 0.5 * (c - b);
        if half.abs() <= 0.5 * tol {
            return Ok(b);
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            // Interpolation: secant when two points, inverse quadratic with three.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * half * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * half * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * half * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol {
            d
        } else if half > 0.0 {
            tol
        } else {
            -tol
        };
        fb = f(b);
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(Error::NoConvergence {
        iterations: bracket.max_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let b = RootBracket::new(1.0, 2.0, 1e-10, 100).unwrap();
        let r = find_root(|x| x * x - 2.0, &b).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-8);
    }

    #[test]
    fn log_equation_gives_e() {
        let b = RootBracket::new(1.0, 10.0, 1e-12, 100).unwrap();
        let r = find_root(|x| x.ln() - 1.0, &b).unwrap();
        assert!((r - std::f64::consts::E).abs() < 1e-10);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        let b = RootBracket::new(3.0, 4.0, 1e-10, 100).unwrap();
        match find_root(|x| x * x - 2.0, &b) {
            Err(Error::NoBracket) => {}
            other => panic!("expected NoBracket, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_across_calls() {
        let b = RootBracket::new(0.0, 4.0, 1e-12, 200).unwrap();
        let f = |x: f64| x.cos() - 0.2 * x;
        let r1 = find_root(f, &b).unwrap();
        let r2 = find_root(f, &b).unwrap();
        assert_eq!(r1.to_bits(), r2.to_bits());
    }

    #[test]
    fn endpoint_root_returned_exactly() {
        let b = RootBracket::new(0.0, 1.0, 1e-10, 50).unwrap();
        let r = find_root(|x| x, &b).unwrap();
        assert_eq!(r, 0.0);
    }
}
