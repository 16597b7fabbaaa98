use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::integrate;

/// Limiting Laplacian spectral measures of regular trees and lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitSpectralMeasure {
    /// `d`-regular tree, transported to the Laplacian by `lambda = d - x`.
    KestenMcKay(u32),
    /// Bi-infinite path: density `1 / (pi sqrt(lambda (4 - lambda)))` on `(0, 4)`.
    CycleLimit,
    /// The lattice `Z^dim`, `dim` in 1..=3.
    TorusLimit(u32),
}

impl LimitSpectralMeasure {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let arg = |prefix: &str| -> Option<u32> {
            s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
        };
        let m = if s == "cycle_limit" {
            Self::CycleLimit
        } else if let Some(d) = arg("kesten_mckay") {
            Self::KestenMcKay(d)
        } else if let Some(d) = arg("torus_limit") {
            Self::TorusLimit(d)
        } else {
            return Err(Error::UnsupportedMeasure(s.to_string()));
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::KestenMcKay(d) if d < 2 => Err(Error::UnsupportedMeasure(format!("kesten_mckay({d})"))),
            Self::TorusLimit(d) if !(1..=3).contains(&d) => Err(Error::UnsupportedMeasure(format!("torus_limit({d})"))),
            _ => Ok(()),
        }
    }

    /// Support of the Laplacian measure.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::KestenMcKay(d) => {
                let r = 2.0 * (d as f64 - 1.0).sqrt();
                (d as f64 - r, d as f64 + r)
            }
            Self::CycleLimit => (0.0, 4.0),
            Self::TorusLimit(dim) => (0.0, 4.0 * dim as f64),
        }
    }

    /// Laplacian CDF at `lambda`.
    pub fn cdf(&self, lambda: f64) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            Self::KestenMcKay(d) => 1.0 - kesten_mckay_adjacency_cdf(d, d as f64 - lambda),
            Self::CycleLimit => cycle_cdf(lambda),
            Self::TorusLimit(dim) => torus_cdf(dim, lambda),
        })
    }
}

fn cycle_cdf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        0.0
    } else if lambda >= 4.0 {
        1.0
    } else {
        2.0 / PI * (lambda.sqrt() / 2.0).asin()
    }
}

// Convolution with one more circle factor: F_k(l) = (1/pi) int_0^pi F_{k-1}(l - 2 + 2 cos t) dt.
fn torus_cdf(dim: u32, lambda: f64) -> f64 {
    let top = 4.0 * dim as f64;
    if lambda <= 0.0 {
        return 0.0;
    }
    if lambda >= top {
        return 1.0;
    }
    if dim == 1 {
        return cycle_cdf(lambda);
    }
    let prev_top = 4.0 * (dim - 1) as f64;
    let integrand = |t: f64| torus_cdf(dim - 1, lambda - 2.0 + 2.0 * t.cos());
    // the integrand has kinks where lambda - s(t) leaves [0, prev_top]
    let mut cuts = vec![0.0, PI];
    for edge in [lambda, lambda - prev_top] {
        let c = 1.0 - edge / 2.0;
        if c.abs() < 1.0 {
            cuts.push(c.acos());
        }
    }
    cuts.sort_by(f64::total_cmp);
    let tol = if dim == 2 { 1e-12 } else { 1e-10 };
    let total: f64 = cuts.windows(2).map(|w| integrate(integrand, w[0], w[1], tol, tol).0).sum();
    (total / PI).clamp(0.0, 1.0)
}

/// Kesten-McKay adjacency density of the `d`-regular tree.
pub fn kesten_mckay_adjacency_density(d: u32, x: f64) -> f64 {
    let d = d as f64;
    let r2 = 4.0 * (d - 1.0);
    if x * x >= r2 {
        return 0.0;
    }
    d / (2.0 * PI) * (r2 - x * x).sqrt() / (d * d - x * x)
}

/// Closed-form Kesten-McKay adjacency CDF. With `x = 2 sqrt(d-1) sin(phi)`,
/// `F = 1/2 + (d phi - (d-2) atan((d-2) tan(phi) / d)) / (2 pi)`.
pub fn kesten_mckay_adjacency_cdf(d: u32, x: f64) -> f64 {
    let df = d as f64;
    let r = 2.0 * (df - 1.0).sqrt();
    if x <= -r {
        return 0.0;
    }
    if x >= r {
        return 1.0;
    }
    let phi = (x / r).asin();
    let twisted = if d == 2 { 0.0 } else { (df - 2.0) * ((df - 2.0) * phi.tan() / df).atan() };
    (0.5 + (df * phi - twisted) / (2.0 * PI)).clamp(0.0, 1.0)
}
