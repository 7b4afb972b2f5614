//! Shared `eps -> 0` limit driver.

use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};

/// Geometric schedule `eps_k = eps0 * ratio^k`, `k = 0..=max_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitSchedule {
    pub eps0: f64,
    pub ratio: f64,
    pub conv_tol: f64,
    pub max_steps: usize,
}

impl Default for LimitSchedule {
    fn default() -> Self {
        Self {
            eps0: defaults::EPS0,
            ratio: defaults::EPS_RATIO,
            conv_tol: defaults::CONV_TOL,
            max_steps: defaults::MAX_STEPS,
        }
    }
}

impl LimitSchedule {
    pub fn new(eps0: f64, ratio: f64, conv_tol: f64, max_steps: usize) -> Result<Self> {
        let s = Self { eps0, ratio, conv_tol, max_steps };
        s.validate()?;
        Ok(s)
    }

    /// The smallest shift must stay above machine epsilon.
    pub fn validate(&self) -> Result<()> {
        if !(self.eps0 > 0.0) || !self.eps0.is_finite() {
            return Err(Error::InvalidInput(format!("eps0 must be positive, got {}", self.eps0)));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidInput(format!("ratio must lie in (0, 1), got {}", self.ratio)));
        }
        if !(self.conv_tol > 0.0) {
            return Err(Error::InvalidInput(format!("conv_tol must be positive, got {}", self.conv_tol)));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidInput("max_steps must be at least 1".into()));
        }
        let last = self.eps0 * self.ratio.powi(self.max_steps as i32);
        if !(last > f64::EPSILON) {
            return Err(Error::InvalidInput(format!("schedule reaches eps = {last:e}, below machine epsilon")));
        }
        Ok(())
    }

    pub fn epsilons(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.max_steps).map(move |k| self.eps0 * self.ratio.powi(k as i32))
    }
}

/// Last few values of a convergence trace, kept for error reports.
pub(crate) fn tail(trace: &[f64]) -> Vec<f64> {
    trace[trace.len().saturating_sub(5)..].to_vec()
}

/// Evaluates `g(eps_k)` with Aitken extrapolation on the schedule, until two
/// successive extrapolants differ by less than `conv_tol`.
///
/// Shifted perspectives approach their limit like `eps^p` with `p` set by the
/// growth of `f` at infinity (`p = 1/2` for `sqrt t`), so the differences
/// `d_k = g_k - g_{k-1}` shrink by `rho = ratio^p`. With `rho = d_k / d_{k-1}`
/// the extrapolant is `g_k + d_k rho / (1 - rho)`; when `rho` is not in
/// `(0, 1)` the plain value `g_k` is used.
pub fn limit_by_eps(sched: &LimitSchedule, mut g: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    sched.validate()?;
    let mut trace: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for eps in sched.epsilons() {
        let v = g(eps)?;
        values.push(v);
        let extrap = match values[..] {
            [.., x0, x1, x2] => {
                let (d1, d2) = (x1 - x0, x2 - x1);
                let rho = d2 / d1;
                if rho > 0.0 && rho < 1.0 {
                    x2 + d2 * rho / (1.0 - rho)
                } else {
                    x2
                }
            }
            _ => continue,
        };
        if let Some(&last) = trace.last() {
            if (extrap - last).abs() < sched.conv_tol {
                return Ok(extrap);
            }
        }
        trace.push(extrap);
    }
    Err(Error::Convergence { steps: sched.max_steps, trace: tail(&trace) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_validation() {
        assert!(LimitSchedule::default().validate().is_ok());
        assert!(LimitSchedule::new(0.0, 0.5, 1e-7, 40).is_err());
        assert!(LimitSchedule::new(1e-2, 1.0, 1e-7, 40).is_err());
        assert!(LimitSchedule::new(1e-2, 0.5, 1e-7, 200).is_err());
    }

    #[test]
    fn linear_limit_converges() {
        let v = limit_by_eps(&LimitSchedule::default(), |e| Ok(3.0 + e)).unwrap();
        assert!((v - 3.0).abs() < 1e-7);
    }

    #[test]
    fn fractional_rates_are_extrapolated() {
        let mut calls = 0;
        let v = limit_by_eps(&LimitSchedule::default(), |e| {
            calls += 1;
            Ok(1.0 + 0.8 * e.sqrt() - 2.0 * e)
        })
        .unwrap();
        assert!((v - 1.0).abs() < 1e-7);
        assert!(calls < 25, "{calls} evaluations");
        let v = limit_by_eps(&LimitSchedule::default(), |e| Ok(-2.0 - e.powf(0.7))).unwrap();
        assert!((v + 2.0).abs() < 1e-7);
    }

    #[test]
    fn divergent_limit_reports_trace() {
        match limit_by_eps(&LimitSchedule::default(), |e| Ok(1.0 / e)) {
            Err(Error::Convergence { steps, trace }) => {
                assert_eq!(steps, 40);
                assert_eq!(trace.len(), 5);
            }
            other => panic!("{other:?}"),
        }
    }
}
