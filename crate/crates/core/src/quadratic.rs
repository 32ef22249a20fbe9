//! Exact arithmetic in the real quadratic field Q(sqrt 5).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{format_rational, int, rat, rational_to_f64, Rational, Scalar};

/// The number `a + b*sqrt(5)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSqrt5 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt5 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt5 { a, b }
    }

    pub fn sqrt5() -> Self {
        QSqrt5::new(int(0), int(1))
    }

    /// The golden ratio (1 + sqrt 5)/2.
    pub fn phi() -> Self {
        QSqrt5::new(rat(1, 2), rat(1, 2))
    }

    /// Galois conjugate `a - b*sqrt(5)`.
    pub fn conjugate(&self) -> Self {
        QSqrt5::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a^2 - 5 b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(5) * &self.b * &self.b
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * 5f64.sqrt()
    }
}

impl fmt::Display for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt(5)", format_rational(&self.a), format_rational(&self.b))
    }
}

impl Add for QSqrt5 {
    type Output = QSqrt5;
    fn add(self, rhs: QSqrt5) -> QSqrt5 {
        QSqrt5::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for QSqrt5 {
    type Output = QSqrt5;
    fn sub(self, rhs: QSqrt5) -> QSqrt5 {
        QSqrt5::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Mul for QSqrt5 {
    type Output = QSqrt5;
    fn mul(self, rhs: QSqrt5) -> QSqrt5 {
        let a = &self.a * &rhs.a + int(5) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QSqrt5::new(a, b)
    }
}

impl Div for QSqrt5 {
    type Output = QSqrt5;
    /// Panics on division by zero, like the rational type.
    fn div(self, rhs: QSqrt5) -> QSqrt5 {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt 5)");
        let num = self * rhs.conjugate();
        QSqrt5::new(num.a / &n, num.b / n)
    }
}

impl Neg for QSqrt5 {
    type Output = QSqrt5;
    fn neg(self) -> QSqrt5 {
        QSqrt5::new(-self.a, -self.b)
    }
}

impl Zero for QSqrt5 {
    fn zero() -> Self {
        QSqrt5::new(int(0), int(0))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt5 {
    fn one() -> Self {
        QSqrt5::new(int(1), int(0))
    }
}

impl Scalar for QSqrt5 {
    fn from_rational(q: &Rational) -> Self {
        QSqrt5::new(q.clone(), int(0))
    }

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.is_zero() || (tol > 0.0 && self.abs_f64() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_satisfies_its_minimal_polynomial() {
        let phi = QSqrt5::phi();
        let lhs = phi.clone() * phi.clone() - phi - QSqrt5::one();
        assert!(lhs.is_zero());
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = QSqrt5::new(rat(3, 7), rat(-2, 5));
        let y = QSqrt5::new(rat(1, 2), rat(1, 3));
        assert_eq!((x.clone() * y.clone()) / y, x);
    }

    #[test]
    fn float_image() {
        assert!((QSqrt5::phi().to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
    }
}
