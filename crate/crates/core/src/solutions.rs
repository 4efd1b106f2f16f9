//! The four elementary solution classes of the Bachelier PDE
//! `r S C_S + sigma^2/2 C_SS + C_t - r C = 0` and their linear combinations.
//!
//! With `u = r (S / sigma)^2`, the class `q` member of order `n` (`n = 0, -2,
//! -4, ...`, Kummer degree `m = -n/2`) is
//!
//! | q | value |
//! |---|-------|
//! | 1 | `S F(n/2, 3/2; -u) exp(n r t)` |
//! | 2 | `F(n/2, 1/2; -u) exp((n+1) r t)` |
//! | 3 | `exp(-u) S F(n/2, 3/2; u) exp(-(n-3) r t)` |
//! | 4 | `exp(-u) F(n/2, 1/2; u) exp(-(n-2) r t)` |

use crate::error::{Error, Result};
use crate::kummer::{KummerPolynomial, TruncationOrder};
use crate::numeric::{checked_exp, CompensatedSum};

/// Market constants: continuously-compounded rate `r` and absolute
/// volatility `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    r: f64,
    sigma: f64,
}

impl ModelParams {
    /// `sigma > 0`, `r != 0`. Negative rates are allowed.
    pub fn new(r: f64, sigma: f64) -> Result<Self> {
        if !r.is_finite() || r == 0.0 {
            return Err(Error::invalid(format!("rate r = {r} must be finite and nonzero")));
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::invalid(format!("volatility sigma = {sigma} must be finite and positive")));
        }
        Ok(ModelParams { r, sigma })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma * self.sigma
    }

    /// `r / sigma^2`, so that `u = k S^2`.
    fn k(&self) -> f64 {
        self.r / self.sigma2()
    }
}

/// A point `(t, S)`; `S` may be negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub t: f64,
    pub s: f64,
}

impl EvalPoint {
    pub fn new(t: f64, s: f64) -> Self {
        EvalPoint { t, s }
    }
}

/// Value and first/second partial derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Partials {
    pub value: f64,
    pub dt: f64,
    pub ds: f64,
    pub dss: f64,
}

/// Orders are bounded so the Kummer polynomial stays representable.
pub const MAX_ORDER_MAGNITUDE: i32 = 1000;

/// `coeff * C_{q,n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionTerm {
    class: u8,
    order: i32,
    coeff: f64,
}

impl SolutionTerm {
    pub fn new(class: u8, order: i32, coeff: f64) -> Result<Self> {
        if !(1..=4).contains(&class) {
            return Err(Error::invalid(format!("solution class {class} must be in 1..=4")));
        }
        if order > 0 || order % 2 != 0 {
            return Err(Error::invalid(format!("order n = {order} must be 0 or a negative even integer")));
        }
        if order < -MAX_ORDER_MAGNITUDE {
            return Err(Error::invalid(format!("order n = {order} is below -{MAX_ORDER_MAGNITUDE}")));
        }
        if !coeff.is_finite() {
            return Err(Error::invalid(format!("coefficient {coeff} is not finite")));
        }
        Ok(SolutionTerm { class, order, coeff })
    }

    /// Unit-coefficient term.
    pub fn base(class: u8, order: i32) -> Result<Self> {
        Self::new(class, order, 1.0)
    }

    pub fn class(&self) -> u8 {
        self.class
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.class, self.order, self.coeff * factor)
    }

    fn kummer_degree(&self) -> TruncationOrder {
        TruncationOrder((-self.order / 2) as u32)
    }

    fn shape(&self) -> Shape {
        let n = self.order as f64;
        match self.class {
            1 => Shape { s_prefactor: true, b: 1.5, arg_sign: -1.0, gaussian: false, time_rate: n },
            2 => Shape { s_prefactor: false, b: 0.5, arg_sign: -1.0, gaussian: false, time_rate: n + 1.0 },
            3 => Shape { s_prefactor: true, b: 1.5, arg_sign: 1.0, gaussian: true, time_rate: -(n - 3.0) },
            4 => Shape { s_prefactor: false, b: 0.5, arg_sign: 1.0, gaussian: true, time_rate: -(n - 2.0) },
            _ => unreachable!("class validated at construction"),
        }
    }
}

/// `C = A(S) * F(-m, b; sign * u) * exp(g(S) + c t)` with `A` in `{1, S}`
/// and `g` in `{0, -u}`.
struct Shape {
    s_prefactor: bool,
    b: f64,
    arg_sign: f64,
    gaussian: bool,
    /// `c / r`.
    time_rate: f64,
}

pub fn eval_term(term: &SolutionTerm, p: EvalPoint, mp: &ModelParams) -> Result<f64> {
    let shape = term.shape();
    let poly = KummerPolynomial::new(term.kummer_degree(), shape.b)?;
    let u = mp.k() * p.s * p.s;
    let exponent = shape.time_rate * mp.r() * p.t - if shape.gaussian { u } else { 0.0 };
    let prefactor = if shape.s_prefactor { p.s } else { 1.0 };
    Ok(term.coeff * prefactor * poly.eval(shape.arg_sign * u) * checked_exp(exponent)?)
}

pub fn eval_term_partials(term: &SolutionTerm, p: EvalPoint, mp: &ModelParams) -> Result<Partials> {
    let shape = term.shape();
    let poly = KummerPolynomial::new(term.kummer_degree(), shape.b)?;
    let k = mp.k();
    let s = p.s;
    let u = k * s * s;

    // Kummer factor Q(S) = P(w(S)), w = sign * k S^2.
    let w = shape.arg_sign * u;
    let w1 = 2.0 * shape.arg_sign * k * s;
    let w2 = 2.0 * shape.arg_sign * k;
    let p0 = poly.eval(w);
    let p1 = poly.eval_derivative(1, w);
    let p2 = poly.eval_derivative(2, w);
    let q0 = p0;
    let q1 = p1 * w1;
    let q2 = p2 * w1 * w1 + p1 * w2;

    // H = A Q.
    let (h0, h1, h2) = if shape.s_prefactor { (s * q0, q0 + s * q1, 2.0 * q1 + s * q2) } else { (q0, q1, q2) };

    // E = exp(g(S) + c t).
    let (g1, g2) = if shape.gaussian { (-2.0 * k * s, -2.0 * k) } else { (0.0, 0.0) };
    let c = shape.time_rate * mp.r();
    let exponent = c * p.t - if shape.gaussian { u } else { 0.0 };
    let e = term.coeff * checked_exp(exponent)?;

    let value = h0 * e;
    Ok(Partials { value, dt: c * value, ds: (h1 + h0 * g1) * e, dss: (h2 + 2.0 * h1 * g1 + h0 * (g2 + g1 * g1)) * e })
}

/// Non-empty ordered list of terms.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseCombo {
    terms: Vec<SolutionTerm>,
}

impl BaseCombo {
    pub fn new(terms: Vec<SolutionTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a combination needs at least one term"));
        }
        Ok(BaseCombo { terms })
    }

    pub fn single(term: SolutionTerm) -> Self {
        BaseCombo { terms: vec![term] }
    }

    pub fn terms(&self) -> &[SolutionTerm] {
        &self.terms
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let terms = self.terms.iter().map(|t| t.scaled(factor)).collect::<Result<_>>()?;
        Ok(BaseCombo { terms })
    }
}

pub fn eval_combo(combo: &BaseCombo, p: EvalPoint, mp: &ModelParams) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    for term in &combo.terms {
        acc.push(eval_term(term, p, mp)?);
    }
    Ok(acc.value())
}

pub fn eval_combo_partials(combo: &BaseCombo, p: EvalPoint, mp: &ModelParams) -> Result<Partials> {
    let mut sums = [CompensatedSum::default(); 4];
    for term in &combo.terms {
        let d = eval_term_partials(term, p, mp)?;
        for (acc, x) in sums.iter_mut().zip([d.value, d.dt, d.ds, d.dss]) {
            acc.push(x);
        }
    }
    Ok(Partials { value: sums[0].value(), dt: sums[1].value(), ds: sums[2].value(), dss: sums[3].value() })
}

/// Something that can be evaluated as a candidate solution `C(t, S)`.
///
/// Implementors must be callable from several threads at once; grid scans
/// evaluate points in parallel.
pub trait SolutionFn: Sync {
    fn value(&self, p: EvalPoint, mp: &ModelParams) -> Result<f64>;

    /// Closed-form partial derivatives, when available.
    fn partials(&self, _p: EvalPoint, _mp: &ModelParams) -> Option<Result<Partials>> {
        None
    }
}

impl SolutionFn for SolutionTerm {
    fn value(&self, p: EvalPoint, mp: &ModelParams) -> Result<f64> {
        eval_term(self, p, mp)
    }

    fn partials(&self, p: EvalPoint, mp: &ModelParams) -> Option<Result<Partials>> {
        Some(eval_term_partials(self, p, mp))
    }
}

impl SolutionFn for BaseCombo {
    fn value(&self, p: EvalPoint, mp: &ModelParams) -> Result<f64> {
        eval_combo(self, p, mp)
    }

    fn partials(&self, p: EvalPoint, mp: &ModelParams) -> Option<Result<Partials>> {
        Some(eval_combo_partials(self, p, mp))
    }
}

impl<T: SolutionFn + ?Sized> SolutionFn for &T {
    fn value(&self, p: EvalPoint, mp: &ModelParams) -> Result<f64> {
        (**self).value(p, mp)
    }

    fn partials(&self, p: EvalPoint, mp: &ModelParams) -> Option<Result<Partials>> {
        (**self).partials(p, mp)
    }
}

/// Adapts a closure into a [`SolutionFn`] without closed-form partials.
pub struct FnSolution<F>(pub F);

impl<F> SolutionFn for FnSolution<F>
where
    F: Fn(EvalPoint, &ModelParams) -> Result<f64> + Sync,
{
    fn value(&self, p: EvalPoint, mp: &ModelParams) -> Result<f64> {
        (self.0)(p, mp)
    }
}
