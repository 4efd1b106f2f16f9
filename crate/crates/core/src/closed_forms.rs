//! Explicit one-parameter solution families obtained by hand from the
//! symmetry groups. They do not go through the pullback code and serve as
//! reference values for it.

use crate::solutions::{BaseCombo, ModelParams, SolutionTerm};

/// Coefficients of the eight-term example combination, in the order
/// `C1[0], C1[-2], C2[0], C2[-2], C3[0], C3[-2], C4[0], C4[-2]`.
pub const EIGHT_TERM_COEFFS: [f64; 8] = [2.0, 5.0, 1.0, 3.0, 4.0, 6.0, 7.0, 9.0];

pub fn eight_term_combo() -> BaseCombo {
    let terms = EIGHT_TERM_COEFFS
        .iter()
        .enumerate()
        .map(|(i, &c)| SolutionTerm::new(1 + (i / 2) as u8, -2 * (i % 2) as i32, c).expect("valid literal term"))
        .collect();
    BaseCombo::new(terms).expect("non-empty")
}

/// `C = S` carried by `G4(eps)`:
/// `exp(r (3 sigma^2 t (e^{2rt} + eps) - eps S^2) / (sigma^2 (e^{2rt} + eps))) S / (e^{2rt} + eps)^{3/2}`.
pub fn linear_under_g4(t: f64, s: f64, eps: f64, mp: &ModelParams) -> f64 {
    let (r, sigma2) = (mp.r(), mp.sigma2());
    let d = (2.0 * r * t).exp() + eps;
    let exponent = r * (3.0 * sigma2 * t * d - eps * s * s) / (sigma2 * d);
    exponent.exp() * s / d.powf(1.5)
}

/// `C_{4,-2}` carried by `G5(eps)`, with `D = 1 + e^{2rt} eps`:
/// `exp(r (5t - S^2 / (sigma^2 D))) sqrt(e^{-2rt} + eps) (sigma^2 D - 2 r S^2) / (sigma^2 D^3)`.
pub fn class4_order2_under_g5(t: f64, s: f64, eps: f64, mp: &ModelParams) -> f64 {
    let (r, sigma2) = (mp.r(), mp.sigma2());
    let d = 1.0 + (2.0 * r * t).exp() * eps;
    let root = ((-2.0 * r * t).exp() + eps).sqrt();
    (r * (5.0 * t - s * s / (sigma2 * d))).exp() * root * (-2.0 * r * s * s + sigma2 * d) / (sigma2 * d.powi(3))
}

/// The eight-term combination carried by `G3(eps)`, term by term as
/// printed in expanded form.
pub fn eight_term_under_g3(t: f64, s: f64, eps: f64, mp: &ModelParams) -> f64 {
    let (r, sigma2) = (mp.r(), mp.sigma2());
    let ert = (r * t).exp();
    let prefactor = (eps * r * (-r * t).exp() * (eps * (-r * t).exp() + 2.0 * s) / sigma2).exp();
    let shifted = s + eps * (-r * t).exp();
    let gauss = |rate: f64| (rate * r * t - r * shifted * shifted / sigma2).exp();
    let cross = eps * r * (eps + 2.0 * ert * s);

    let first = 2.0 * (s + eps * (-r * t).exp())
        + 5.0 * (-5.0 * r * t).exp() * (eps + s * ert) * (ert * ert * (2.0 * r * s * s + 3.0 * sigma2) + 2.0 * cross)
            / (3.0 * sigma2);
    let second = ert + 3.0 * (-3.0 * r * t).exp() * (ert * ert * (2.0 * r * s * s + sigma2) + 2.0 * cross) / sigma2;
    let third = 4.0 * gauss(2.0) * (eps + ert * s)
        + 6.0 * gauss(5.0) * shifted * (1.0 - 2.0 * r * shifted * shifted / (3.0 * sigma2));
    let fourth = 7.0 * gauss(2.0) + 9.0 * gauss(4.0) * (1.0 - 2.0 * r * shifted * shifted / sigma2);
    prefactor * (first + second + third + fourth)
}
