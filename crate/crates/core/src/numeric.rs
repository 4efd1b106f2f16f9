use crate::error::{Error, Result};

/// Exponents above this are reported as range errors instead of `inf`.
pub const MAX_EXPONENT: f64 = 700.0;

pub fn checked_exp(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Range("exponent is NaN".into()));
    }
    if x > MAX_EXPONENT {
        return Err(Error::Range(format!("exponent {x} exceeds {MAX_EXPONENT}")));
    }
    Ok(x.exp())
}

/// Neumaier-compensated running sum; order of `push` calls is preserved.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn push(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn mixed_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Shortest decimal that parses back to the same `f64`; switches to
/// exponent notation outside `[1e-5, 1e16)`.
pub fn format_shortest(x: f64) -> String {
    let ax = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&ax) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_bits() {
        let mut s = CompensatedSum::default();
        for x in [1e16, 1.0, -1e16, 1.0] {
            s.push(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn exp_overflow_is_a_range_error() {
        assert!(checked_exp(700.5).is_err());
        assert!(checked_exp(699.0).is_ok());
        assert_eq!(checked_exp(-800.0).unwrap(), 0.0);
    }

    #[test]
    fn shortest_format_round_trips() {
        for x in [0.1, 1.25, -2.0, 1e300, -3.5e-12, 0.0, 123456.789, f64::MIN_POSITIVE] {
            let s = format_shortest(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_shortest(1.0), "1");
        assert_eq!(format_shortest(0.5), "0.5");
        assert_eq!(format_shortest(1e300), "1e300");
    }
}
