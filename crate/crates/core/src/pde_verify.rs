//! Residuals of the Bachelier PDE, analytic and by finite differences.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::solutions::{EvalPoint, ModelParams, Partials, SolutionFn};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub raw: f64,
    /// `|raw| / max(1, |r S C_S|, |sigma^2/2 C_SS|, |C_t|, |r C|)`.
    pub normalized: f64,
}

pub fn residual_from_partials(d: &Partials, p: EvalPoint, mp: &ModelParams) -> Residual {
    let drift = mp.r() * p.s * d.ds;
    let diffusion = 0.5 * mp.sigma2() * d.dss;
    let discount = mp.r() * d.value;
    let raw = drift + diffusion + d.dt - discount;
    let scale = 1f64.max(drift.abs()).max(diffusion.abs()).max(d.dt.abs()).max(discount.abs());
    Residual { raw, normalized: raw.abs() / scale }
}

/// Finite-difference steps in `t` and `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Steps {
    pub t: f64,
    pub s: f64,
}

impl Steps {
    pub fn new(t: f64, s: f64) -> Result<Self> {
        if !(t > 0.0 && s > 0.0 && t.is_finite() && s.is_finite()) {
            return Err(Error::invalid(format!("steps ({t}, {s}) must be positive")));
        }
        Ok(Steps { t, s })
    }

    /// The power of two nearest `1e-3 * max(1, |coordinate|)` on each axis.
    /// Dyadic steps keep `x +- h` and `x +- h/2` exact away from binade edges.
    pub fn default_at(p: EvalPoint) -> Self {
        Steps { t: dyadic_step(p.t), s: dyadic_step(p.s) }
    }
}

fn dyadic_step(x: f64) -> f64 {
    let target = 1e-3 * x.abs().max(1.0);
    2f64.powi(target.log2().round() as i32)
}

/// Second-order central differences with one Richardson step (`h` and
/// `h/2`), on the 9-point stencil around `p`.
pub fn fd_partials<F: SolutionFn + ?Sized>(f: &F, p: EvalPoint, mp: &ModelParams, steps: Steps) -> Result<Partials> {
    let at = |t: f64, s: f64| f.value(EvalPoint::new(t, s), mp);
    let (ht, hs) = (steps.t, steps.s);
    let c = at(p.t, p.s)?;

    let t_p1 = at(p.t + ht, p.s)?;
    let t_m1 = at(p.t - ht, p.s)?;
    let t_p2 = at(p.t + ht / 2.0, p.s)?;
    let t_m2 = at(p.t - ht / 2.0, p.s)?;
    let s_p1 = at(p.t, p.s + hs)?;
    let s_m1 = at(p.t, p.s - hs)?;
    let s_p2 = at(p.t, p.s + hs / 2.0)?;
    let s_m2 = at(p.t, p.s - hs / 2.0)?;

    let richardson = |coarse: f64, fine: f64| (4.0 * fine - coarse) / 3.0;
    let dt = richardson((t_p1 - t_m1) / (2.0 * ht), (t_p2 - t_m2) / ht);
    let ds = richardson((s_p1 - s_m1) / (2.0 * hs), (s_p2 - s_m2) / hs);
    let dss = richardson((s_p1 - 2.0 * c + s_m1) / (hs * hs), (s_p2 - 2.0 * c + s_m2) / (hs * hs / 4.0));
    Ok(Partials { value: c, dt, ds, dss })
}

pub fn residual_fd<F: SolutionFn + ?Sized>(f: &F, p: EvalPoint, mp: &ModelParams, steps: Steps) -> Result<Residual> {
    Ok(residual_from_partials(&fd_partials(f, p, mp, steps)?, p, mp))
}

/// Residual from closed-form partials; errors if `f` has none.
pub fn residual_analytic<F: SolutionFn + ?Sized>(f: &F, p: EvalPoint, mp: &ModelParams) -> Result<Residual> {
    let d = f.partials(p, mp).ok_or_else(|| {
        Error::invalid("analytic residual needs closed-form partials; use the finite-difference mode")
    })??;
    Ok(residual_from_partials(&d, p, mp))
}

/// Tensor grid over `t` and `S`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    t_range: (f64, f64),
    s_range: (f64, f64),
    nt: usize,
    ns: usize,
}

impl GridSpec {
    pub fn new(t_range: (f64, f64), s_range: (f64, f64), nt: usize, ns: usize) -> Result<Self> {
        for (name, (lo, hi)) in [("t", t_range), ("S", s_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::invalid(format!("{name} range [{lo}, {hi}] must satisfy low < high")));
            }
        }
        if nt < 2 || ns < 2 {
            return Err(Error::invalid(format!("grid counts ({nt}, {ns}) must both be at least 2")));
        }
        Ok(GridSpec { t_range, s_range, nt, ns })
    }

    /// `t in [0, 1]`, `S in [-2, 2]`, 21 x 21.
    pub fn default_verification() -> Self {
        GridSpec { t_range: (0.0, 1.0), s_range: (-2.0, 2.0), nt: 21, ns: 21 }
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.t_range
    }

    pub fn s_range(&self) -> (f64, f64) {
        self.s_range
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn ns(&self) -> usize {
        self.ns
    }

    pub fn len(&self) -> usize {
        self.nt * self.ns
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_values(&self) -> Vec<f64> {
        linspace(self.t_range, self.nt)
    }

    pub fn s_values(&self) -> Vec<f64> {
        linspace(self.s_range, self.ns)
    }

    /// Row-major points, `t` outer and `S` inner.
    pub fn points(&self) -> Vec<EvalPoint> {
        let ss = self.s_values();
        self.t_values().into_iter().flat_map(|t| ss.iter().map(move |&s| EvalPoint::new(t, s))).collect()
    }

    /// The same lattice without its boundary rows and columns.
    pub fn interior(&self) -> Option<GridSpec> {
        // Needs at least two interior lines per axis.
        if self.nt < 4 || self.ns < 4 {
            return None;
        }
        let shrink = |(lo, hi): (f64, f64), n: usize| {
            let h = (hi - lo) / (n - 1) as f64;
            (lo + h, hi - h)
        };
        let t_range = shrink(self.t_range, self.nt);
        let s_range = shrink(self.s_range, self.ns);
        Some(GridSpec { t_range, s_range, nt: self.nt - 2, ns: self.ns - 2 })
    }
}

fn linspace((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * (i as f64 / last) }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResidual {
    pub point: EvalPoint,
    /// `None` when the point or its stencil left the function's domain.
    pub residual: Option<Residual>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub grid: GridSpec,
    pub max_normalized: f64,
    pub mean_normalized: f64,
    pub worst_point: Option<EvalPoint>,
    /// Points skipped because of a domain error.
    pub failures: usize,
    pub points: Vec<PointResidual>,
}

impl ResidualReport {
    pub fn evaluated(&self) -> usize {
        self.points.len() - self.failures
    }
}

pub fn residual_scan<F: SolutionFn + ?Sized>(
    f: &F,
    grid: &GridSpec,
    mp: &ModelParams,
    mode: ScanMode,
) -> Result<ResidualReport> {
    let points = grid.points();
    let results: Vec<Result<Option<Residual>>> = points
        .par_iter()
        .map(|&p| {
            let r = match mode {
                ScanMode::Analytic => residual_analytic(f, p, mp),
                ScanMode::FiniteDifference => residual_fd(f, p, mp, Steps::default_at(p)),
            };
            match r {
                Ok(res) => Ok(Some(res)),
                Err(e) if e.is_domain() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();

    let mut out = Vec::with_capacity(points.len());
    let mut max = 0.0f64;
    let mut sum = 0.0;
    let mut worst = None;
    let mut failures = 0;
    for (point, r) in points.into_iter().zip(results) {
        let residual = r?;
        match residual {
            Some(res) => {
                sum += res.normalized;
                if worst.is_none() || res.normalized > max {
                    max = res.normalized;
                    worst = Some(point);
                }
            }
            None => failures += 1,
        }
        out.push(PointResidual { point, residual });
    }
    let evaluated = out.len() - failures;
    let mean = if evaluated > 0 { sum / evaluated as f64 } else { 0.0 };
    Ok(ResidualReport {
        grid: *grid,
        max_normalized: max,
        mean_normalized: mean.min(max),
        worst_point: worst,
        failures,
        points: out,
    })
}
