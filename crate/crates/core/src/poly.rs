//! Univariate polynomial roots: companion-matrix eigenvalues with Newton
//! polishing, and the analytic cubic/quartic formulas used as a cross-check.
//!
//! Coefficient vectors are ordered highest degree first.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

fn trim(coeffs: &[f64]) -> &[f64] {
    let start = coeffs.iter().position(|&c| c != 0.0).unwrap_or(coeffs.len());
    &coeffs[start..]
}

pub fn eval(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn eval_with_derivative(coeffs: &[f64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn polish(coeffs: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        let next = z - step;
        // stop if Newton stops improving (e.g. near a multiple root)
        if eval(coeffs, next).norm() >= p.norm() {
            break;
        }
        z = next;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// All complex roots via the eigenvalues of the companion matrix.
pub fn companion_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let c = trim(coeffs);
    if c.is_empty() {
        return Err(Error::InvalidArgument("zero polynomial has no finite root set".into()));
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("non-finite polynomial coefficient".into()));
    }
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[n - i] / c[0];
    }
    let roots: Vec<Complex64> = m.complex_eigenvalues().iter().map(|&z| polish(c, z)).collect();
    #[cfg(debug_assertions)]
    if n == 3 || n == 4 {
        let analytic = if n == 3 { cubic_roots(c[0], c[1], c[2], c[3]) } else { quartic_roots(c[0], c[1], c[2], c[3], c[4]) };
        let scale = c.iter().map(|x| x.abs()).fold(0.0, f64::max) / c[0].abs();
        for z in &roots {
            let best = analytic.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            debug_assert!(
                best <= 1e-4 * (1.0 + z.norm()) * (1.0 + scale),
                "companion root {z} has no analytic counterpart in {analytic:?}"
            );
        }
    }
    Ok(roots)
}

/// Real roots, ascending; a root counts as real when its imaginary part is
/// below `imag_tol` relative to its magnitude.
pub fn real_roots(coeffs: &[f64], imag_tol: f64) -> Result<Vec<f64>> {
    let mut r: Vec<f64> = companion_roots(coeffs)?
        .into_iter()
        .filter(|z| z.im.abs() <= imag_tol * z.norm().max(1.0))
        .map(|z| z.re)
        .collect();
    r.sort_by(f64::total_cmp);
    Ok(r)
}

fn cbrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re.cbrt(), 0.0)
    } else {
        z.powf(1.0 / 3.0)
    }
}

/// Cardano's formula for `a x^3 + b x^2 + c x + d`.
pub fn cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<Complex64> {
    let shift = b / (3.0 * a);
    let p = (3.0 * a * c - b * b) / (3.0 * a * a);
    let q = (2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d) / (27.0 * a * a * a);
    let disc = Complex64::new(q * q / 4.0 + p * p * p / 27.0, 0.0).sqrt();
    let mut u = cbrt(Complex64::new(-q / 2.0, 0.0) + disc);
    if u.norm() < 1e-300 {
        u = cbrt(Complex64::new(-q / 2.0, 0.0) - disc);
    }
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut out = Vec::with_capacity(3);
    let mut uk = u;
    for _ in 0..3 {
        let t = if uk.norm() < 1e-300 { Complex64::new(0.0, 0.0) } else { uk - p / (3.0 * uk) };
        out.push(t - shift);
        uk *= omega;
    }
    out
}

/// Ferrari's method for `a x^4 + b x^3 + c x^2 + d x + e`.
pub fn quartic_roots(a: f64, b: f64, c: f64, d: f64, e: f64) -> Vec<Complex64> {
    let (b, c, d, e) = (b / a, c / a, d / a, e / a);
    let shift = b / 4.0;
    let p = c - 3.0 * b * b / 8.0;
    let q = d - b * c / 2.0 + b * b * b / 8.0;
    let r = e - b * d / 4.0 + b * b * c / 16.0 - 3.0 * b.powi(4) / 256.0;
    let ys: Vec<Complex64> = if q.abs() <= 1e-14 * (1.0 + p.abs() + r.abs()) {
        // biquadratic: y^2 = (-p +- sqrt(p^2 - 4r)) / 2
        let s = Complex64::new(p * p - 4.0 * r, 0.0).sqrt();
        let mut v = Vec::new();
        for w in [(-p + s) / 2.0, (-p - s) / 2.0] {
            let y = w.sqrt();
            v.push(y);
            v.push(-y);
        }
        v
    } else {
        // resolvent 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0; take the root of largest modulus
        let m = cubic_roots(8.0, 8.0 * p, 2.0 * p * p - 8.0 * r, -q * q)
            .into_iter()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .expect("cubic has three roots");
        let s = (2.0 * m).sqrt();
        let mut v = Vec::new();
        for s1 in [1.0, -1.0] {
            let inner = (-(2.0 * p + 2.0 * m + s1 * 2.0 * q / s)).sqrt();
            for s2 in [1.0, -1.0] {
                v.push((s1 * s + s2 * inner) / 2.0);
            }
        }
        v
    };
    ys.into_iter().map(|y| y - shift).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn has_root(roots: &[f64], x: f64) -> bool {
        roots.iter().any(|r| (r - x).abs() < 1e-10)
    }

    #[test]
    fn cubic_with_known_roots() {
        // 28x^3 - 27x^2 + 9x - 1 has x = 1/4 as a real root
        let r = real_roots(&[28.0, -27.0, 9.0, -1.0], 1e-9).unwrap();
        assert!(has_root(&r, 0.25));
    }

    #[test]
    fn quartic_with_four_real_roots() {
        // (x-1)(x-2)(x+3)(x-0.5)
        let c = [1.0, -0.5, -7.0, 9.5, -3.0];
        let r = real_roots(&c, 1e-9).unwrap();
        assert_eq!(r.len(), 4);
        for x in [1.0, 2.0, -3.0, 0.5] {
            assert!(has_root(&r, x));
        }
        let a = quartic_roots(c[0], c[1], c[2], c[3], c[4]);
        for x in [1.0, 2.0, -3.0, 0.5] {
            assert!(a.iter().any(|z| (z - Complex64::new(x, 0.0)).norm() < 1e-8));
        }
    }

    #[test]
    fn biquadratic_and_complex_pairs() {
        // x^4 - 5x^2 + 4 = (x^2-1)(x^2-4)
        let r = real_roots(&[1.0, 0.0, -5.0, 0.0, 4.0], 1e-9).unwrap();
        assert_eq!(r.len(), 4);
        // x^3 + x has one real root
        let r = real_roots(&[1.0, 0.0, 1.0, 0.0], 1e-9).unwrap();
        assert_eq!(r, vec![0.0]);
    }

    #[test]
    fn leading_zeros_are_trimmed() {
        let r = real_roots(&[0.0, 1.0, -3.0], 1e-9).unwrap();
        assert!(has_root(&r, 3.0));
        assert!(companion_roots(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn cardano_matches_companion() {
        let c = [2.0, -3.0, -11.0, 6.0];
        let a = cubic_roots(c[0], c[1], c[2], c[3]);
        for x in real_roots(&c, 1e-9).unwrap() {
            assert!(a.iter().any(|z| (z - Complex64::new(x, 0.0)).norm() < 1e-9));
        }
    }
}
