//! Lie point symmetries of the Bachelier PDE.
//!
//! The symmetry algebra (modulo the superposition part, which is plain
//! linearity) has the basis
//!
//! ```text
//! xi1 = d/dt
//! xi2 = e^{rt} d/dS
//! xi3 = e^{-rt} d/dS - 2 e^{-rt} r S C / sigma^2 d/dC
//! xi4 = -e^{-2rt}/(2r) d/dt + e^{-2rt} S/2 d/dS - e^{-2rt} (sigma^2 + r S^2) C / sigma^2 d/dC
//! xi5 = e^{2rt}/(2r) d/dt + e^{2rt} S/2 d/dS + e^{2rt} C/2 d/dC
//! xi6 = C d/dC
//! ```
//!
//! and the groups `G1..G6` below are its one-parameter flows. `G4` and `G5`
//! are parametrised so that `dG_i/d(eps)` at the identity is `-xi_i`; see
//! [`flow_orientation`].
//!
//! Every group acts linearly on `C`: `C* = M(t, S) C` with `M > 0`. A
//! solution `f` is carried to the solution `C` defined implicitly by
//! `C*(t, S, C) = f(t*, S*)`, i.e. `C(t, S) = f(t*, S*) / M(t, S)`. That is
//! [`pullback`]. The opposite construction, transporting the graph of `f`
//! forward through `G`, is [`pushforward`]; it equals the pullback with
//! `-eps`.

use crate::error::{DomainError, Error, Result};
use crate::numeric::checked_exp;
use crate::solutions::{eval_term_partials, EvalPoint, ModelParams, SolutionFn, SolutionTerm};

/// Largest normalized `xi Phi` that still counts as zero.
pub const FIXED_SURFACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    index: u8,
    epsilon: f64,
}

impl GroupElement {
    pub fn new(index: u8, epsilon: f64) -> Result<Self> {
        check_index(index)?;
        if !epsilon.is_finite() {
            return Err(Error::invalid(format!("group parameter {epsilon} is not finite")));
        }
        Ok(GroupElement { index, epsilon })
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn inverse(&self) -> Self {
        GroupElement { index: self.index, epsilon: -self.epsilon }
    }
}

fn check_index(index: u8) -> Result<()> {
    if (1..=6).contains(&index) {
        Ok(())
    } else {
        Err(Error::invalid(format!("generator index {index} must be in 1..=6")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetPoint {
    pub t: f64,
    pub s: f64,
    pub c: f64,
}

impl JetPoint {
    pub fn new(t: f64, s: f64, c: f64) -> Self {
        JetPoint { t, s, c }
    }
}

/// Components `(T, S, C)` of a generator at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorComponents {
    pub t: f64,
    pub s: f64,
    pub c: f64,
}

/// `+1` when `G_i(eps)` is the flow of `xi_i`, `-1` when it is the flow of
/// `-xi_i` (generators 4 and 5).
pub fn flow_orientation(index: u8) -> f64 {
    match index {
        4 | 5 => -1.0,
        _ => 1.0,
    }
}

/// Image of `(t, S)` and the multiplier `M` with `C* = M C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointImage {
    pub t: f64,
    pub s: f64,
    pub multiplier: f64,
}

fn domain(generator: u8, argument: &'static str, value: f64) -> Error {
    Error::Domain(DomainError { generator, argument, value, stage: None })
}

pub fn point_image(g: &GroupElement, t: f64, s: f64, mp: &ModelParams) -> Result<PointImage> {
    let (r, sigma2, eps) = (mp.r(), mp.sigma2(), g.epsilon);
    // exp/ln round trips in G4 and G5 are not exact in floating point.
    if eps == 0.0 {
        return Ok(PointImage { t, s, multiplier: 1.0 });
    }
    let image = match g.index {
        1 => PointImage { t: t + eps, s, multiplier: 1.0 },
        2 => PointImage { t, s: s + eps * (r * t).exp(), multiplier: 1.0 },
        3 => {
            let decay = (-r * t).exp();
            let exponent = -eps * r * decay * (eps * decay + 2.0 * s) / sigma2;
            PointImage { t, s: s + eps * decay, multiplier: checked_exp(exponent)? }
        }
        4 => {
            let arg = (2.0 * r * t).exp() + eps;
            if arg.is_nan() || arg <= 0.0 {
                return Err(domain(4, "exp(2rt) + eps4", arg));
            }
            let exponent = -r * (2.0 * sigma2 * t * arg - eps * s * s) / (sigma2 * arg);
            PointImage {
                t: arg.ln() / (2.0 * r),
                s: (r * t).exp() * s / arg.sqrt(),
                multiplier: checked_exp(exponent)? * arg,
            }
        }
        5 => {
            let arg = (-2.0 * r * t).exp() + eps;
            if arg.is_nan() || arg <= 0.0 {
                return Err(domain(5, "exp(-2rt) + eps5", arg));
            }
            let root = arg.sqrt();
            let decay = (-r * t).exp();
            PointImage { t: -arg.ln() / (2.0 * r), s: decay * s / root, multiplier: decay / root }
        }
        6 => PointImage { t, s, multiplier: checked_exp(eps)? },
        _ => unreachable!("index validated at construction"),
    };
    Ok(image)
}

pub fn forward_map(g: &GroupElement, jp: JetPoint, mp: &ModelParams) -> Result<JetPoint> {
    let img = point_image(g, jp.t, jp.s, mp)?;
    Ok(JetPoint { t: img.t, s: img.s, c: img.multiplier * jp.c })
}

/// The `(t0, S0)` whose image under `g` is `(target_t, target_s)`.
pub fn inverse_point_map(g: &GroupElement, target_t: f64, target_s: f64, mp: &ModelParams) -> Result<(f64, f64)> {
    let (r, eps) = (mp.r(), g.epsilon);
    let (t, s) = (target_t, target_s);
    if eps == 0.0 {
        return Ok((t, s));
    }
    let pre = match g.index {
        1 => (t - eps, s),
        2 => (t, s - eps * (r * t).exp()),
        3 => (t, s - eps * (-r * t).exp()),
        4 => {
            let arg = (2.0 * r * t).exp() - eps;
            if arg.is_nan() || arg <= 0.0 {
                return Err(domain(4, "exp(2rt) - eps4", arg));
            }
            let t0 = arg.ln() / (2.0 * r);
            (t0, s * (r * t).exp() / (r * t0).exp())
        }
        5 => {
            let arg = (-2.0 * r * t).exp() - eps;
            if arg.is_nan() || arg <= 0.0 {
                return Err(domain(5, "exp(-2rt) - eps5", arg));
            }
            let t0 = -arg.ln() / (2.0 * r);
            (t0, s * (-r * t).exp() * (r * t0).exp())
        }
        6 => (t, s),
        _ => unreachable!("index validated at construction"),
    };
    Ok(pre)
}

/// Value at `p` of the solution that `g` maps `f` to.
pub fn pullback<F: SolutionFn + ?Sized>(g: &GroupElement, f: &F, p: EvalPoint, mp: &ModelParams) -> Result<f64> {
    let img = point_image(g, p.t, p.s, mp)?;
    Ok(f.value(EvalPoint::new(img.t, img.s), mp)? / img.multiplier)
}

/// Value at `p` of the image of the graph of `f` under `g`.
pub fn pushforward<F: SolutionFn + ?Sized>(g: &GroupElement, f: &F, p: EvalPoint, mp: &ModelParams) -> Result<f64> {
    let (t0, s0) = inverse_point_map(g, p.t, p.s, mp)?;
    let c0 = f.value(EvalPoint::new(t0, s0), mp)?;
    Ok(forward_map(g, JetPoint::new(t0, s0, c0), mp)?.c)
}

/// Applies `pipeline[0]` to `f` first, then `pipeline[1]` to the result,
/// and so on. Domain errors carry the failing stage index.
pub fn pullback_chain<F: SolutionFn + ?Sized>(
    pipeline: &[GroupElement],
    f: &F,
    p: EvalPoint,
    mp: &ModelParams,
) -> Result<f64> {
    // The last stage sees the caller's point; walk the point back through
    // the pipeline and collect the multipliers on the way.
    let mut point = p;
    let mut multipliers = Vec::with_capacity(pipeline.len());
    for (stage, g) in pipeline.iter().enumerate().rev() {
        let img = point_image(g, point.t, point.s, mp).map_err(|e| e.at_stage(stage))?;
        multipliers.push(img.multiplier);
        point = EvalPoint::new(img.t, img.s);
    }
    let mut value = f.value(point, mp)?;
    for m in multipliers.iter().rev() {
        value /= m;
    }
    Ok(value)
}

/// A solution function transformed by a group pipeline.
#[derive(Debug, Clone)]
pub struct Transformed<F> {
    pub pipeline: Vec<GroupElement>,
    pub inner: F,
}

impl<F: SolutionFn> SolutionFn for Transformed<F> {
    fn value(&self, p: EvalPoint, mp: &ModelParams) -> Result<f64> {
        pullback_chain(&self.pipeline, &self.inner, p, mp)
    }
}

pub fn generator_eval(index: u8, jp: JetPoint, mp: &ModelParams) -> Result<GeneratorComponents> {
    check_index(index)?;
    let (r, sigma2) = (mp.r(), mp.sigma2());
    let JetPoint { t, s, c } = jp;
    let comps = match index {
        1 => GeneratorComponents { t: 1.0, s: 0.0, c: 0.0 },
        2 => GeneratorComponents { t: 0.0, s: (r * t).exp(), c: 0.0 },
        3 => {
            let decay = (-r * t).exp();
            GeneratorComponents { t: 0.0, s: decay, c: -2.0 * decay * r * s * c / sigma2 }
        }
        4 => {
            let decay = (-2.0 * r * t).exp();
            GeneratorComponents {
                t: -decay / (2.0 * r),
                s: decay * s / 2.0,
                c: -decay * (sigma2 + r * s * s) * c / sigma2,
            }
        }
        5 => {
            let growth = (2.0 * r * t).exp();
            GeneratorComponents { t: growth / (2.0 * r), s: growth * s / 2.0, c: growth * c / 2.0 }
        }
        6 => GeneratorComponents { t: 0.0, s: 0.0, c },
        _ => unreachable!(),
    };
    Ok(comps)
}

/// `xi_i Phi` for `Phi = C - C_{q,n}(t, S)` on the surface `Phi = 0`, and its
/// normalisation scale `max(1, |C comp|, |T C_t|, |S C_S|)`.
pub fn invariance_defect(index: u8, term: &SolutionTerm, p: EvalPoint, mp: &ModelParams) -> Result<(f64, f64)> {
    let d = eval_term_partials(term, p, mp)?;
    let xi = generator_eval(index, JetPoint::new(p.t, p.s, d.value), mp)?;
    let along_t = xi.t * d.dt;
    let along_s = xi.s * d.ds;
    let defect = xi.c - (along_t + along_s);
    let scale = 1f64.max(xi.c.abs()).max(along_t.abs()).max(along_s.abs());
    Ok((defect, scale))
}

/// True when `G_index` maps the solution surface of `term` to itself, judged
/// on the sample points only.
pub fn fixed_surface_check(index: u8, term: &SolutionTerm, sample: &[EvalPoint], mp: &ModelParams) -> Result<bool> {
    if sample.is_empty() {
        return Err(Error::invalid("fixed-surface check needs at least one sample point"));
    }
    for &p in sample {
        let (defect, scale) = invariance_defect(index, term, p, mp)?;
        if defect.abs() / scale >= FIXED_SURFACE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::FnSolution;

    fn mp() -> ModelParams {
        ModelParams::new(0.05, 0.2).unwrap()
    }

    fn g(i: u8, eps: f64) -> GroupElement {
        GroupElement::new(i, eps).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    fn identity_fn() -> FnSolution<impl Fn(EvalPoint, &ModelParams) -> Result<f64> + Sync> {
        FnSolution(|p: EvalPoint, _: &ModelParams| Ok(p.s))
    }

    #[test]
    fn element_validation() {
        assert!(GroupElement::new(0, 0.1).is_err());
        assert!(GroupElement::new(7, 0.1).is_err());
        assert!(GroupElement::new(3, f64::NAN).is_err());
        assert!(generator_eval(7, JetPoint::new(0.0, 0.0, 0.0), &mp()).is_err());
    }

    #[test]
    fn zero_parameter_is_identity() {
        let jp = JetPoint::new(0.3, -1.2, 2.5);
        for i in 1..=6 {
            assert_eq!(forward_map(&g(i, 0.0), jp, &mp()).unwrap(), jp, "G{i}");
            assert_eq!(inverse_point_map(&g(i, 0.0), 0.3, -1.2, &mp()).unwrap(), (0.3, -1.2));
        }
    }

    #[test]
    fn scaling_group() {
        let out = forward_map(&g(6, 2f64.ln()), JetPoint::new(0.1, 0.5, 3.0), &mp()).unwrap();
        assert_eq!((out.t, out.s), (0.1, 0.5));
        assert!(close(out.c, 6.0, 1e-15));
    }

    #[test]
    fn g4_hand_values() {
        let out = forward_map(&g(4, 0.5), JetPoint::new(0.0, 1.0, 1.0), &mp()).unwrap();
        assert!(close(out.t, 1.5f64.ln() / 0.1, 1e-15));
        assert!(close(out.s, 1.0 / 1.5f64.sqrt(), 1e-15));
    }

    #[test]
    fn g4_inverse_hand_value() {
        let target_t = 2f64.ln() / 0.1;
        let (t0, _) = inverse_point_map(&g(4, 0.5), target_t, 1.0, &mp()).unwrap();
        assert!(close((0.1 * t0).exp(), 1.5, 1e-14));
    }

    #[test]
    fn domain_errors_name_the_argument() {
        let e = forward_map(&g(4, -2.0), JetPoint::new(0.0, 1.0, 1.0), &mp()).unwrap_err();
        match e {
            Error::Domain(d) => {
                assert_eq!(d.generator, 4);
                assert!(d.argument.contains("eps4"));
            }
            other => panic!("{other:?}"),
        }
        assert!(forward_map(&g(5, -1.5), JetPoint::new(0.0, 1.0, 1.0), &mp()).unwrap_err().is_domain());
        assert!(inverse_point_map(&g(4, 2.0), 0.0, 1.0, &mp()).unwrap_err().is_domain());
        assert!(inverse_point_map(&g(5, 1.0), 0.0, 1.0, &mp()).unwrap_err().is_domain());
    }

    #[test]
    fn inverse_point_map_round_trips() {
        let mp = mp();
        for i in 1..=6 {
            for &eps in &[-0.3, -0.05, 0.2, 0.4] {
                for &(t, s) in &[(0.0, 1.0), (0.7, -1.4), (-0.5, 0.3)] {
                    let ge = g(i, eps);
                    let (t0, s0) = inverse_point_map(&ge, t, s, &mp).unwrap();
                    let img = forward_map(&ge, JetPoint::new(t0, s0, 1.0), &mp).unwrap();
                    assert!(close(img.t, t, 1e-13) && close(img.s, s, 1e-13), "G{i} eps={eps}");
                }
            }
        }
    }

    #[test]
    fn pullback_by_scaling() {
        let mp = mp();
        let f = SolutionTerm::base(2, -2).unwrap();
        let p = EvalPoint::new(0.4, 0.8);
        let base = f.value(p, &mp).unwrap();
        let v = pullback(&g(6, 0.7), &f, p, &mp).unwrap();
        assert!(close(v, (-0.7f64).exp() * base, 1e-15));
        let w = pushforward(&g(6, 0.7), &f, p, &mp).unwrap();
        assert!(close(w, 0.7f64.exp() * base, 1e-15));
    }

    #[test]
    fn pushforward_is_pullback_of_inverse() {
        let mp = mp();
        let f = SolutionTerm::new(3, -2, 1.3).unwrap();
        for i in 1..=6 {
            for &eps in &[-0.25, 0.15] {
                for &(t, s) in &[(0.2, 0.5), (0.9, -1.1)] {
                    let p = EvalPoint::new(t, s);
                    let a = pushforward(&g(i, eps), &f, p, &mp).unwrap();
                    let b = pullback(&g(i, -eps), &f, p, &mp).unwrap();
                    assert!(close(a, b, 1e-12), "G{i} eps={eps}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn chain_rules() {
        let mp = mp();
        let f = SolutionTerm::base(4, -4).unwrap();
        let p = EvalPoint::new(0.35, -0.6);
        let base = f.value(p, &mp).unwrap();
        assert_eq!(pullback_chain(&[], &f, p, &mp).unwrap(), base);
        let v = pullback_chain(&[g(6, 0.2), g(6, 0.5)], &f, p, &mp).unwrap();
        assert!(close(v, (-0.7f64).exp() * base, 1e-14));
        let v = pullback_chain(&[g(1, 0.3), g(1, -0.3)], &f, p, &mp).unwrap();
        assert!(close(v, base, 1e-14));
    }

    #[test]
    fn chain_order_matters_and_is_left_to_right() {
        let mp = mp();
        let f = SolutionTerm::base(1, -2).unwrap();
        let p = EvalPoint::new(0.2, 0.4);
        let first = g(2, 0.2);
        let second = g(4, 0.3);
        let inner = Transformed { pipeline: vec![first], inner: f };
        let nested = pullback(&second, &inner, p, &mp).unwrap();
        let chained = pullback_chain(&[first, second], &f, p, &mp).unwrap();
        assert!(close(nested, chained, 1e-14));
        let swapped = pullback_chain(&[second, first], &f, p, &mp).unwrap();
        assert!(!close(swapped, chained, 1e-6));
    }

    #[test]
    fn chain_reports_failing_stage() {
        let mp = mp();
        let err = pullback_chain(&[g(1, 0.1), g(4, -5.0), g(6, 1.0)], &identity_fn(), EvalPoint::new(0.0, 1.0), &mp)
            .unwrap_err();
        match err {
            Error::Domain(d) => assert_eq!(d.stage, Some(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generator_hand_values() {
        let mp = mp();
        let jp = JetPoint::new(0.8, -0.4, 1.7);
        assert_eq!(generator_eval(1, jp, &mp).unwrap(), GeneratorComponents { t: 1.0, s: 0.0, c: 0.0 });
        let z = generator_eval(6, JetPoint::new(0.3, 0.2, 0.0), &mp).unwrap();
        assert_eq!((z.t, z.s, z.c), (0.0, 0.0, 0.0));
        let x4 = generator_eval(4, JetPoint::new(0.0, 1.0, 1.0), &mp).unwrap();
        assert!(close(x4.t, -10.0, 1e-15));
        assert!(close(x4.s, 0.5, 1e-15));
        assert!(close(x4.c, -2.25, 1e-15));
    }

    #[test]
    fn fixed_surfaces() {
        let mp = mp();
        let sample: Vec<EvalPoint> =
            [(0.1, 0.5), (0.5, -1.0), (0.9, 1.5)].iter().map(|&(t, s)| EvalPoint::new(t, s)).collect();
        let linear = SolutionTerm::base(1, 0).unwrap();
        let c4 = SolutionTerm::base(4, -2).unwrap();
        assert!(!fixed_surface_check(4, &linear, &sample, &mp).unwrap());
        assert!(!fixed_surface_check(5, &c4, &sample, &mp).unwrap());
        assert!(fixed_surface_check(1, &linear, &sample, &mp).unwrap());
        assert!(fixed_surface_check(1, &linear, &[], &mp).is_err());
    }

    #[test]
    fn con1_defect_matches_closed_form() {
        let mp = mp();
        let (r, sigma2) = (0.05, 0.04);
        let linear = SolutionTerm::base(1, 0).unwrap();
        for &(t, s) in &[(0.1, 0.5), (0.7, -1.3)] {
            let (defect, _) = invariance_defect(4, &linear, EvalPoint::new(t, s), &mp).unwrap();
            let e = (-2.0f64 * r * t).exp();
            let expected = -(2.0 * e * (sigma2 + r * s * s) * s + sigma2 * e * s) / (2.0 * sigma2);
            assert!(close(defect, expected, 1e-14));
        }
    }

    #[test]
    fn con2_defect_matches_closed_form() {
        let mp = mp();
        let (r, sigma): (f64, f64) = (0.05, 0.2);
        let c4 = SolutionTerm::base(4, -2).unwrap();
        for &(t, s) in &[(0.1, 0.5), (0.7, -1.3)] {
            let (defect, _) = invariance_defect(5, &c4, EvalPoint::new(t, s), &mp).unwrap();
            let x2 = (s / sigma).powi(2);
            let c = (4.0 * r * t - r * x2).exp() * (1.0 - 2.0 * r * x2);
            let e4 = (4.0 * r * t).exp();
            let s2 = sigma * sigma;
            let expected = ((2.0 * r * t - r * x2).exp()
                * (14.0 * s2 * e4 * r * r * s * s - 4.0 * e4 * r.powi(3) * s.powi(4)
                    + s2 * s2 * (-4.0 * e4 * r + (r * x2).exp() * r * c)))
                / (2.0 * s2 * s2 * r);
            assert!(close(defect, expected, 1e-13), "{defect} vs {expected}");
        }
    }
}
