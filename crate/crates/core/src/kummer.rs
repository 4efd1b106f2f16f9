//! Truncated Kummer functions.
//!
//! `F(-m, b; u) = sum_{k=0}^{m} (-m)_k / (b)_k * u^k / k!` is a polynomial of
//! degree `m` in `u`. Only this truncated case is supported; it is all the
//! solution families need.

use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Polynomial degree `m` of `F(-m, b; u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncationOrder(pub u32);

impl TruncationOrder {
    /// Builds the order from the first Kummer parameter `a = -m`.
    /// Anything but a non-positive integer is rejected.
    pub fn from_first_parameter(a: f64) -> Result<Self> {
        if !a.is_finite() || a > 0.0 || a.fract() != 0.0 || a < -(u32::MAX as f64) {
            return Err(Error::invalid(format!(
                "first Kummer parameter {a} is not a non-positive integer; only truncated series are supported"
            )));
        }
        Ok(TruncationOrder((-a) as u32))
    }

    pub fn degree(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerArgs {
    /// Second parameter; must keep `(b)_k` nonzero for `k <= m`.
    pub b: f64,
    pub u: f64,
}

/// Rising factorial `w (w+1) ... (w+k-1)`; 1 for `k = 0`.
pub fn pochhammer(w: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (w + j as f64))
}

/// Coefficients of `F(-m, b; u)` in increasing powers of `u`.
///
/// For `u > 0` the series alternates and cancels heavily (the sum of term
/// magnitudes can exceed the value by many orders), so coefficients and
/// Horner steps are carried in double-double and rounded once at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct KummerPolynomial {
    coeffs: Vec<TwoFloat>,
}

impl KummerPolynomial {
    pub fn new(m: TruncationOrder, b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::invalid(format!("Kummer parameter b = {b} is not finite")));
        }
        let m = m.0;
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut c = TwoFloat::from(1.0);
        coeffs.push(c);
        for k in 0..m {
            // Exact for the half-integer `b` the solution families use.
            let denom = b + k as f64;
            if denom == 0.0 {
                return Err(Error::invalid(format!(
                    "Pochhammer symbol ({b})_{} vanishes; b must not be 0 or a negative integer > -{m}",
                    k + 1
                )));
            }
            let kf = k as f64;
            c = c * (kf - m as f64) / (kf + 1.0) / denom;
            coeffs.push(c);
        }
        Ok(KummerPolynomial { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients rounded to `f64`.
    pub fn coefficients(&self) -> Vec<f64> {
        self.coeffs.iter().map(|&c| f64::from(c)).collect()
    }

    pub fn eval(&self, u: f64) -> f64 {
        horner(self.coeffs.iter().copied(), u)
    }

    /// First derivative in `u`.
    pub fn eval_du(&self, u: f64) -> f64 {
        self.eval_derivative(1, u)
    }

    /// `order`-th derivative in `u`, term by term on the finite sum.
    pub fn eval_derivative(&self, order: usize, u: f64) -> f64 {
        if order > self.degree() {
            return 0.0;
        }
        let derived = self.coeffs.iter().enumerate().skip(order).map(|(k, &c)| c * falling_factorial(k, order));
        horner(derived, u)
    }
}

fn falling_factorial(k: usize, order: usize) -> f64 {
    (0..order).fold(1.0, |acc, j| acc * (k - j) as f64)
}

fn horner(coeffs: impl DoubleEndedIterator<Item = TwoFloat>, u: f64) -> f64 {
    f64::from(coeffs.rev().fold(TwoFloat::from(0.0), |acc, c| acc * u + c))
}

pub fn kummer_truncated(m: TruncationOrder, args: KummerArgs) -> Result<f64> {
    Ok(KummerPolynomial::new(m, args.b)?.eval(args.u))
}

pub fn kummer_truncated_du(m: TruncationOrder, args: KummerArgs) -> Result<f64> {
    Ok(KummerPolynomial::new(m, args.b)?.eval_du(args.u))
}
