//! Operator convex functions on `[0, inf)` and their integral representation
//!
//! `f(t) = f(0) + omega(f) t - int t/(t+s) dnu_f(s)`, with
//! `h_f(t) = int t/(t+s) dnu_f(s)` the operator monotone part.

use std::fmt;
use std::sync::Arc;

use crate::defaults;
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Composite Gauss-Legendre rule in `u = ln s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub s_min: f64,
    pub s_max: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { nodes: defaults::QUAD_NODES, s_min: defaults::QUAD_S_MIN, s_max: defaults::QUAD_S_MAX }
    }
}

const GL4_NODES: [f64; 4] = [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL4_WEIGHTS: [f64; 4] = [0.347_854_845_137_453_8, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_8];

impl QuadratureSpec {
    /// `(s_k, w_k)` such that `int_{s_min}^{s_max} g(s) ds ≈ sum w_k g(s_k)`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let panels = (self.nodes / 4).max(1);
        let (lo, hi) = (self.s_min.ln(), self.s_max.ln());
        let width = (hi - lo) / panels as f64;
        let mut pts = Vec::with_capacity(panels * 4);
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * width;
            for (x, w) in GL4_NODES.iter().zip(GL4_WEIGHTS) {
                let u = mid + 0.5 * width * x;
                let s = u.exp();
                // ds = s du
                pts.push((s, 0.5 * width * w * s));
            }
        }
        pts
    }
}

/// A positive Radon measure on `(0, inf)`: point masses plus an optional density.
#[derive(Clone)]
pub struct MeasureRepresentation {
    pub atoms: Vec<(f64, f64)>,
    pub density: Option<ScalarFn>,
    pub quadrature: QuadratureSpec,
}

impl MeasureRepresentation {
    pub fn from_density(density: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { atoms: Vec::new(), density: Some(Arc::new(density)), quadrature: QuadratureSpec::default() }
    }

    pub fn from_atoms(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.iter().any(|&(s, w)| !(s > 0.0) || !(w >= 0.0) || !s.is_finite() || !w.is_finite()) {
            return Err(Error::InvalidInput("atoms need s > 0 and weight >= 0".into()));
        }
        Ok(Self { atoms, density: None, quadrature: QuadratureSpec::default() })
    }

    pub fn with_quadrature(mut self, q: QuadratureSpec) -> Self {
        self.quadrature = q;
        self
    }

    /// `int g(s) dnu(s)`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        let mut total: f64 = self.atoms.iter().map(|&(s, w)| w * g(s)).sum();
        if let Some(rho) = &self.density {
            total += self.quadrature.points().into_iter().map(|(s, w)| w * rho(s) * g(s)).sum::<f64>();
        }
        total
    }

    /// `int dnu(s) / (1 + s)`, which must be finite.
    pub fn mass_bound(&self) -> f64 {
        self.integrate(|s| 1.0 / (1.0 + s))
    }

    pub fn h(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        self.integrate(|s| t / (t + s))
    }
}

impl fmt::Debug for MeasureRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasureRepresentation")
            .field("atoms", &self.atoms)
            .field("density", &self.density.is_some())
            .field("quadrature", &self.quadrature)
            .finish()
    }
}

/// Minimum `c = f(t_star)` of a function with `f(0) = f(1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub value: f64,
    pub at: f64,
}

/// An operator convex function on `[0, inf)` with its representation data.
#[derive(Clone)]
pub struct OperatorConvexFunction {
    name: String,
    eval: ScalarFn,
    f0: f64,
    omega: ExtendedReal,
    h_closed: Option<ScalarFn>,
    measure: Option<MeasureRepresentation>,
    minimum: Option<Minimum>,
}

impl fmt::Debug for OperatorConvexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorConvexFunction")
            .field("name", &self.name)
            .field("f0", &self.f0)
            .field("omega", &self.omega)
            .field("closed_h", &self.h_closed.is_some())
            .field("measure", &self.measure)
            .field("minimum", &self.minimum)
            .finish()
    }
}

impl OperatorConvexFunction {
    /// A user-supplied function with a trusted measure. `omega` must be finite.
    pub fn from_measure(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f0: f64,
        omega: f64,
        measure: MeasureRepresentation,
    ) -> Result<Self> {
        let name = name.into();
        if !omega.is_finite() {
            return Err(Error::UnsupportedFunction { name, reason: "measure form needs finite omega".into() });
        }
        let bound = measure.mass_bound();
        if !bound.is_finite() {
            return Err(Error::InvalidInput(format!("measure of `{name}` has infinite int dnu/(1+s)")));
        }
        Ok(Self {
            name,
            eval: Arc::new(eval),
            f0,
            omega: ExtendedReal::Finite(omega),
            h_closed: None,
            measure: Some(measure),
            minimum: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn omega(&self) -> ExtendedReal {
        self.omega
    }

    pub fn measure(&self) -> Option<&MeasureRepresentation> {
        self.measure.as_ref()
    }

    pub fn minimum(&self) -> Option<Minimum> {
        self.minimum
    }

    pub fn has_closed_h(&self) -> bool {
        self.h_closed.is_some()
    }

    /// Finite `omega(f)`, or an error naming the function.
    pub fn finite_omega(&self) -> Result<f64> {
        self.omega.finite().ok_or_else(|| Error::UnsupportedFunction {
            name: self.name.clone(),
            reason: "omega(f) = lim f(t)/t is infinite".into(),
        })
    }

    /// `h_f(t) = int t/(t+s) dnu_f(s)`; closed form when available.
    pub fn h_f(&self, t: f64) -> Result<f64> {
        self.finite_omega()?;
        if t < 0.0 {
            return Err(Error::Domain(format!("h_f needs t >= 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        if let Some(h) = &self.h_closed {
            return Ok(h(t));
        }
        self.h_f_quadrature(t)
    }

    /// `h_f` through the measure, ignoring any closed form.
    pub fn h_f_quadrature(&self, t: f64) -> Result<f64> {
        self.finite_omega()?;
        let m = self.measure.as_ref().ok_or_else(|| Error::UnsupportedFunction {
            name: self.name.clone(),
            reason: "no measure representation".into(),
        })?;
        Ok(m.h(t))
    }

    /// `f(0) + omega t - h_f(t)`.
    pub fn reconstruct(&self, t: f64) -> Result<f64> {
        Ok(self.f0 + self.finite_omega()? * t - self.h_f(t)?)
    }

    /// `(f(t) - f(s)) / (t - s)`, or the derivative when `t = s`.
    pub fn divided_difference(&self, t: f64, s: f64) -> f64 {
        let scale = t.abs().max(s.abs()).max(1.0);
        if (t - s).abs() > 1e-7 * scale {
            return (self.eval(t) - self.eval(s)) / (t - s);
        }
        let m = 0.5 * (t + s);
        let h = 1e-5 * m.abs().max(1.0);
        if m - h >= 0.0 {
            (self.eval(m + h) - self.eval(m - h)) / (2.0 * h)
        } else {
            (self.eval(m + h) - self.eval(m)) / h
        }
    }

    /// The transpose `s f(1/s)`, extended by `omega(f)` at 0.
    pub fn transpose_eval(&self, s: f64) -> Result<f64> {
        if s == 0.0 {
            self.finite_omega()
        } else {
            Ok(s * self.eval(1.0 / s))
        }
    }
}

pub fn neg_sqrt() -> OperatorConvexFunction {
    OperatorConvexFunction {
        name: "neg_sqrt".into(),
        eval: Arc::new(|t: f64| -t.sqrt()),
        f0: 0.0,
        omega: ExtendedReal::Finite(0.0),
        h_closed: Some(Arc::new(f64::sqrt)),
        measure: Some(MeasureRepresentation::from_density(|s: f64| s.powf(-0.5) / std::f64::consts::PI)),
        minimum: None,
    }
}

/// `(1 - sqrt t)^2 = 1 + t - 2 sqrt t`.
pub fn hellinger() -> OperatorConvexFunction {
    OperatorConvexFunction {
        name: "hellinger".into(),
        eval: Arc::new(|t: f64| (1.0 - t.sqrt()).powi(2)),
        f0: 1.0,
        omega: ExtendedReal::Finite(1.0),
        h_closed: Some(Arc::new(|t: f64| 2.0 * t.sqrt())),
        measure: Some(MeasureRepresentation::from_density(|s: f64| 2.0 * s.powf(-0.5) / std::f64::consts::PI)),
        minimum: Some(Minimum { value: 0.0, at: 1.0 }),
    }
}

/// `2t - 2 sqrt t`: `f(0) = f(1) = 0`, minimum `-1/2` at `t = 1/4`.
pub fn min_test() -> OperatorConvexFunction {
    OperatorConvexFunction {
        name: "min_test".into(),
        eval: Arc::new(|t: f64| 2.0 * t - 2.0 * t.sqrt()),
        f0: 0.0,
        omega: ExtendedReal::Finite(2.0),
        h_closed: Some(Arc::new(|t: f64| 2.0 * t.sqrt())),
        measure: Some(MeasureRepresentation::from_density(|s: f64| 2.0 * s.powf(-0.5) / std::f64::consts::PI)),
        minimum: Some(Minimum { value: -0.5, at: 0.25 }),
    }
}

/// `sign(alpha - 1) t^alpha = -t^alpha` for `alpha` in `(0, 1)`.
pub fn power_alpha(alpha: f64) -> Result<OperatorConvexFunction> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!("power_alpha needs alpha in (0, 1), got {alpha}")));
    }
    let c = (alpha * std::f64::consts::PI).sin() / std::f64::consts::PI;
    Ok(OperatorConvexFunction {
        name: format!("alpha:{alpha}"),
        eval: Arc::new(move |t: f64| -t.powf(alpha)),
        f0: 0.0,
        omega: ExtendedReal::Finite(0.0),
        h_closed: Some(Arc::new(move |t: f64| t.powf(alpha))),
        measure: Some(MeasureRepresentation::from_density(move |s: f64| c * s.powf(alpha - 1.0))),
        minimum: None,
    })
}

/// `t log t` (0 at 0). Infinite `omega`, so usable by the standard divergence only.
pub fn eta() -> OperatorConvexFunction {
    OperatorConvexFunction {
        name: "eta".into(),
        eval: Arc::new(|t: f64| if t == 0.0 { 0.0 } else { t * t.ln() }),
        f0: 0.0,
        omega: ExtendedReal::PosInf,
        h_closed: None,
        measure: None,
        minimum: None,
    }
}

/// Looks up a catalog entry: `neg_sqrt | hellinger | alpha:<a> | eta | min_test`.
pub fn builtin(name: &str) -> Result<OperatorConvexFunction> {
    match name {
        "neg_sqrt" => Ok(neg_sqrt()),
        "hellinger" => Ok(hellinger()),
        "eta" => Ok(eta()),
        "min_test" => Ok(min_test()),
        other => {
            let rest = other.strip_prefix("alpha:").or_else(|| other.strip_prefix("power_alpha:"));
            match rest {
                Some(a) => {
                    let alpha: f64 =
                        a.parse().map_err(|_| Error::InvalidInput(format!("bad alpha in `{other}`")))?;
                    power_alpha(alpha)
                }
                None => Err(Error::UnknownFunction(other.to_string())),
            }
        }
    }
}

/// Catalog entries with finite `omega`.
pub fn finite_omega_builtins() -> Vec<OperatorConvexFunction> {
    vec![neg_sqrt(), hellinger(), min_test(), power_alpha(0.3).expect("valid alpha")]
}

/// Log-spaced grid `t in [0.01, 100]`.
pub fn standard_grid() -> Vec<f64> {
    (0..=40).map(|k| 10f64.powf(-2.0 + k as f64 * 0.1)).collect()
}
