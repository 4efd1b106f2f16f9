//! Self-checks run by `bachelier verify`.
//!
//! Each check reports the measured worst case next to its threshold so the
//! output is useful even when everything passes.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closed_forms;
use crate::error::{Error, Result};
use crate::kummer::{pochhammer, KummerPolynomial, TruncationOrder};
use crate::pde_verify::{residual_scan, GridSpec, ScanMode};
use crate::solutions::{BaseCombo, EvalPoint, ModelParams, SolutionTerm};
use crate::symmetry::{
    fixed_surface_check, flow_orientation, forward_map, generator_eval, pullback, GroupElement, JetPoint, Transformed,
};
use crate::tolerances as tol;

/// Group parameters swept in the closure check.
pub const EPSILON_SWEEP: [f64; 4] = [-0.3, -0.1, 0.1, 0.3];

/// Orders exercised by the residual suites.
pub const ORDERS: [i32; 5] = [0, -2, -4, -6, -8];

const SEED: u64 = 0x5eed_ba5e;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Theorem1,
    Theorem2,
    Groups,
    Examples,
    Kummer,
    All,
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem1" => Ok(Scope::Theorem1),
            "theorem2" => Ok(Scope::Theorem2),
            "groups" => Ok(Scope::Groups),
            "examples" => Ok(Scope::Examples),
            "kummer" => Ok(Scope::Kummer),
            "all" => Ok(Scope::All),
            other => Err(Error::invalid(format!(
                "unknown scope {other:?}; expected theorem1, theorem2, groups, examples, kummer or all"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

impl CheckOutcome {
    fn below(name: impl Into<String>, measured: f64, tolerance: f64, note: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), measured, tolerance, passed: measured <= tolerance, note: note.into() }
    }

    fn flag(name: impl Into<String>, passed: bool, note: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            measured: if passed { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed,
            note: note.into(),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {:<34} max={:.3e} tol={:.1e}", self.name, self.measured, self.tolerance)?;
        if !self.note.is_empty() {
            write!(f, "  {}", self.note)?;
        }
        Ok(())
    }
}

pub fn run(scope: Scope, mp: &ModelParams) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let all = scope == Scope::All;
    if all || scope == Scope::Kummer {
        out.extend(kummer_checks());
    }
    if all || scope == Scope::Theorem1 {
        out.extend(theorem1_checks(mp)?);
    }
    if all || scope == Scope::Theorem2 {
        out.extend(theorem2_checks(mp)?);
    }
    if all || scope == Scope::Groups {
        out.extend(group_checks(mp)?);
    }
    if all || scope == Scope::Examples {
        out.extend(example_checks(mp)?);
    }
    Ok(out)
}

pub fn base_terms() -> Vec<SolutionTerm> {
    (1..=4).flat_map(|q| ORDERS.iter().map(move |&n| SolutionTerm::base(q, n).expect("valid base term"))).collect()
}

pub fn theorem1_checks(mp: &ModelParams) -> Result<Vec<CheckOutcome>> {
    let grid = GridSpec::default_verification();
    let mut worst = 0.0f64;
    let mut worst_name = String::new();
    for term in base_terms() {
        let rep = residual_scan(&term, &grid, mp, ScanMode::Analytic)?;
        if rep.max_normalized >= worst {
            worst = rep.max_normalized;
            worst_name = format!("C{}[{}]", term.class(), term.order());
        }
    }
    let combo = closed_forms::eight_term_combo();
    let rep = residual_scan(&combo, &grid, mp, ScanMode::Analytic)?;
    Ok(vec![
        CheckOutcome::below(
            "theorem1.base_residual",
            worst,
            tol::BASE_RESIDUAL,
            format!("20 families, 21x21 grid, worst {worst_name}"),
        ),
        CheckOutcome::below("theorem1.eight_term_residual", rep.max_normalized, tol::COMBO_RESIDUAL, "21x21 grid"),
    ])
}

pub fn theorem2_checks(mp: &ModelParams) -> Result<Vec<CheckOutcome>> {
    let grid = GridSpec::default_verification().interior().expect("21x21 has an interior");
    let terms = base_terms();
    let mut out = Vec::new();
    for index in 1..=6u8 {
        let mut worst = 0.0f64;
        let mut skipped = 0;
        for &eps in &EPSILON_SWEEP {
            let g = GroupElement::new(index, eps)?;
            for term in &terms {
                let f = Transformed { pipeline: vec![g], inner: *term };
                let rep = residual_scan(&f, &grid, mp, ScanMode::FiniteDifference)?;
                worst = worst.max(rep.max_normalized);
                skipped += rep.failures;
            }
        }
        out.push(CheckOutcome::below(
            format!("theorem2.G{index}_fd_residual"),
            worst,
            tol::TRANSFORMED_FD_RESIDUAL,
            format!("eps in {EPSILON_SWEEP:?}, 20 families, skipped {skipped}"),
        ));
    }
    Ok(out)
}

fn random_jet(rng: &mut ChaCha8Rng) -> JetPoint {
    JetPoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0), rng.gen_range(-3.0..3.0))
}

fn jet_distance(a: JetPoint, b: JetPoint) -> f64 {
    let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(1.0);
    rel(a.t, b.t).max(rel(a.s, b.s)).max(rel(a.c, b.c))
}

pub fn group_checks(mp: &ModelParams) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();

    let mut identity_ok = true;
    for _ in 0..100 {
        let jp = random_jet(&mut rng);
        for index in 1..=6 {
            identity_ok &= forward_map(&GroupElement::new(index, 0.0)?, jp, mp)? == jp;
        }
    }
    out.push(CheckOutcome::flag("groups.identity_exact", identity_ok, "100 points x 6 groups"));

    for index in 1..=6u8 {
        let mut worst = 0.0f64;
        let mut taken = 0;
        while taken < 100 {
            let jp = random_jet(&mut rng);
            let a = rng.gen_range(-0.3..0.3);
            let b = rng.gen_range(-0.3..0.3);
            let stepwise = forward_map(&GroupElement::new(index, a)?, jp, mp)
                .and_then(|mid| forward_map(&GroupElement::new(index, b)?, mid, mp));
            let direct = forward_map(&GroupElement::new(index, a + b)?, jp, mp);
            match (stepwise, direct) {
                (Ok(x), Ok(y)) => {
                    worst = worst.max(jet_distance(x, y));
                    taken += 1;
                }
                (Err(e), _) | (_, Err(e)) if e.is_domain() => continue,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        out.push(CheckOutcome::below(
            format!("groups.G{index}_additivity"),
            worst,
            tol::GROUP_ADDITIVITY,
            "100 samples",
        ));
    }

    for index in 1..=6u8 {
        let mut worst = 0.0f64;
        let h = tol::TANGENCY_STEP;
        for _ in 0..100 {
            let jp = random_jet(&mut rng);
            let plus = forward_map(&GroupElement::new(index, h)?, jp, mp)?;
            let minus = forward_map(&GroupElement::new(index, -h)?, jp, mp)?;
            let xi = generator_eval(index, jp, mp)?;
            let o = flow_orientation(index);
            let d = |a: f64, b: f64| (a - b) / (2.0 * h);
            let fd = JetPoint::new(d(plus.t, minus.t), d(plus.s, minus.s), d(plus.c, minus.c));
            worst = worst.max(jet_distance(fd, JetPoint::new(o * xi.t, o * xi.s, o * xi.c)));
        }
        out.push(CheckOutcome::below(
            format!("groups.G{index}_tangency"),
            worst,
            tol::TANGENCY,
            format!("orientation {:+}", flow_orientation(index)),
        ));
    }

    let sample = GridSpec::default_verification().points();
    let linear = SolutionTerm::base(1, 0)?;
    let c4 = SolutionTerm::base(4, -2)?;
    let note = "sampled on 21x21 grid; invariance holds only up to sampling";
    out.push(CheckOutcome::flag("groups.G4_moves_C1[0]", !fixed_surface_check(4, &linear, &sample, mp)?, note));
    out.push(CheckOutcome::flag("groups.G5_moves_C4[-2]", !fixed_surface_check(5, &c4, &sample, mp)?, note));
    out.push(CheckOutcome::flag("groups.G1_fixes_C1[0]", fixed_surface_check(1, &linear, &sample, mp)?, note));
    Ok(out)
}

pub fn example_checks(mp: &ModelParams) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    type Reference = fn(f64, f64, f64, &ModelParams) -> f64;
    let cases: [(&str, u8, BaseCombo, Reference); 3] = [
        ("examples.C1[0]_under_G4", 4, BaseCombo::single(SolutionTerm::base(1, 0)?), closed_forms::linear_under_g4),
        (
            "examples.C4[-2]_under_G5",
            5,
            BaseCombo::single(SolutionTerm::base(4, -2)?),
            closed_forms::class4_order2_under_g5,
        ),
        ("examples.eight_term_under_G3", 3, closed_forms::eight_term_combo(), closed_forms::eight_term_under_g3),
    ];
    let mut out = Vec::new();
    for (name, index, combo, reference) in cases {
        let mut worst = 0.0f64;
        let mut taken = 0;
        while taken < 25 {
            let t = rng.gen_range(0.0..1.0);
            let s = rng.gen_range(-2.0..2.0);
            let eps = rng.gen_range(-0.3..0.3);
            let g = GroupElement::new(index, eps)?;
            let via_pullback = match pullback(&g, &combo, EvalPoint::new(t, s), mp) {
                Ok(v) => v,
                Err(e) if e.is_domain() => continue,
                Err(e) => return Err(e),
            };
            let direct = reference(t, s, eps, mp);
            let err = (via_pullback - direct).abs() / via_pullback.abs().max(direct.abs()).max(1.0);
            worst = worst.max(err);
            taken += 1;
        }
        out.push(CheckOutcome::below(name, worst, tol::CLOSED_FORM_AGREEMENT, "25 (t, S, eps) samples"));
    }
    Ok(out)
}

pub fn kummer_checks() -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    let mut at_zero = 0.0f64;
    for m in 0..=50 {
        for b in [0.5, 1.5, 2.75] {
            let p = KummerPolynomial::new(TruncationOrder(m), b).expect("positive b");
            at_zero = at_zero.max((p.eval(0.0) - 1.0).abs());
        }
    }
    out.push(CheckOutcome::below("kummer.value_at_zero", at_zero, 0.0, "m <= 50"));

    let mut contiguous = 0.0f64;
    for m in 1..=20u32 {
        for b in [0.5, 1.5] {
            let lhs_poly = KummerPolynomial::new(TruncationOrder(m), b).expect("positive b");
            let rhs_poly = KummerPolynomial::new(TruncationOrder(m - 1), b + 1.0).expect("positive b");
            for k in -20..=20 {
                let u = k as f64 * 0.25;
                let lhs = lhs_poly.eval_du(u);
                let rhs = -(m as f64) / b * rhs_poly.eval(u);
                contiguous = contiguous.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0));
            }
        }
    }
    out.push(CheckOutcome::below(
        "kummer.contiguous_derivative",
        contiguous,
        tol::KUMMER_CONTIGUOUS,
        "m <= 20, |u| <= 5",
    ));

    let (annihilation, leading) = degree_property(10);
    out.push(CheckOutcome::below("kummer.degree_annihilation", annihilation, tol::DEGREE_ANNIHILATION, "m <= 10"));
    out.push(CheckOutcome::below("kummer.degree_leading", leading, tol::DEGREE_LEADING, "m <= 10"));
    out
}

/// Worst normalized `(m+1)`-th forward difference and worst relative error
/// of the `m`-th difference against `m! h^m (-1)^m / (b)_m`.
pub fn degree_property(max_m: u32) -> (f64, f64) {
    let h = 0.5;
    let u0 = -1.3;
    let mut annihilation = 0.0f64;
    let mut leading = 0.0f64;
    for m in 0..=max_m {
        for b in [0.5, 1.5] {
            let p = KummerPolynomial::new(TruncationOrder(m), b).expect("positive b");
            let values: Vec<f64> = (0..=m + 1).map(|j| p.eval(u0 + j as f64 * h)).collect();
            let (d_m, _) = forward_difference(&values[..=m as usize]);
            let (d_m1, scale) = forward_difference(&values);
            annihilation = annihilation.max(d_m1.abs() / scale);
            let m_fact: f64 = (1..=m).map(|j| j as f64).product();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let expected = m_fact * h.powi(m as i32) * sign / pochhammer(b, m);
            leading = leading.max((d_m - expected).abs() / expected.abs());
        }
    }
    (annihilation, leading)
}

/// Highest-order forward difference of equally spaced samples, plus the sum
/// of magnitudes of the binomially weighted samples.
fn forward_difference(values: &[f64]) -> (f64, f64) {
    let n = values.len() - 1;
    let mut binom = 1.0;
    let mut sum = 0.0;
    let mut scale = 0.0;
    for (j, &v) in values.iter().enumerate() {
        let sign = if (n - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        sum += sign * binom * v;
        scale += (binom * v).abs();
        binom = binom * (n - j) as f64 / (j + 1) as f64;
    }
    (sum, scale.max(f64::MIN_POSITIVE))
}

/// True if every outcome passed.
pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|c| c.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scope_names() {
        assert_eq!("all".parse::<Scope>().unwrap(), Scope::All);
        assert_eq!("theorem2".parse::<Scope>().unwrap(), Scope::Theorem2);
        assert!("everything".parse::<Scope>().is_err());
    }

    #[test]
    fn forward_difference_of_cubic() {
        let vals: Vec<f64> = (0..5).map(|j| (j as f64).powi(3)).collect();
        assert_eq!(forward_difference(&vals[..4]).0, 6.0);
        assert_eq!(forward_difference(&vals).0, 0.0);
    }

    #[test]
    fn kummer_suite_passes() {
        let outcomes = kummer_checks();
        assert!(all_passed(&outcomes), "{outcomes:#?}");
    }

    #[test]
    fn outcome_line_format() {
        let c = CheckOutcome::below("x", 1e-12, 1e-10, "");
        assert!(c.to_string().starts_with("PASS x"));
        let c = CheckOutcome::below("y", 1e-3, 1e-10, "note");
        assert!(c.to_string().starts_with("FAIL y"));
        assert!(c.to_string().ends_with("note"));
    }

    #[test]
    fn base_terms_enumerate_all_families() {
        let terms = base_terms();
        assert_eq!(terms.len(), 20);
        assert!(terms.iter().any(|t| t.class() == 3 && t.order() == -8));
    }
}
