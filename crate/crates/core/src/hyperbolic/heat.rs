use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::numeric::{bisect, integrate};

/// Heat-kernel evaluation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatQuery {
    pub t: f64,
    /// Dimension of hyperbolic space, 2 or 3.
    pub dim: u32,
    /// Absolute bound on the truncated tail of orbit sums.
    pub tail_tol: f64,
    /// Thin-part cutoff.
    pub epsilon: f64,
}

impl HeatQuery {
    pub fn new(t: f64, dim: u32, tail_tol: f64, epsilon: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain("t", format!("{t} must be positive")));
        }
        if dim != 2 && dim != 3 {
            return Err(domain("dim", format!("{dim} is not 2 or 3")));
        }
        if !(tail_tol > 0.0) {
            return Err(domain("tail_tol", format!("{tail_tol} must be positive")));
        }
        if !(epsilon > 0.0) {
            return Err(domain("epsilon", format!("{epsilon} must be positive")));
        }
        Ok(Self { t, dim, tail_tol, epsilon })
    }

    /// Dimension 2, tail tolerance `1e-12`, cutoff `0.5`.
    pub fn surface(t: f64) -> Result<Self> {
        Self::new(t, 2, 1e-12, 0.5)
    }
}

/// `A(t)` with `p_t(rho) <= A(t) exp(-rho^2 / 4t)` for all `rho`.
pub fn gaussian_prefactor(t: f64, dim: u32) -> f64 {
    match dim {
        2 => (-t / 4.0).exp() / (4.0 * PI * t),
        _ => (4.0 * PI * t).powf(-1.5) * (-t).exp(),
    }
}

/// Constant `c` with `p_t(rho) <= c t^{-d/2} exp(-rho^2 / 5t)` for all `t, rho`.
pub fn heat_shape_constant(dim: u32) -> f64 {
    match dim {
        2 => 1.0 / (4.0 * PI),
        _ => (4.0 * PI).powf(-1.5),
    }
}

/// Heat kernel of hyperbolic space `H^d` at distance `rho`.
pub fn heat_kernel(q: &HeatQuery, rho: f64) -> Result<f64> {
    if !(q.t > 0.0) {
        return Err(domain("t", format!("{} must be positive", q.t)));
    }
    let rho = rho.abs();
    Ok(match q.dim {
        3 => heat_kernel_3(q.t, rho),
        _ => heat_kernel_2(q.t, rho),
    })
}

fn heat_kernel_3(t: f64, rho: f64) -> f64 {
    let ratio = if rho < 1e-8 { 1.0 } else { rho / rho.sinh() };
    (4.0 * PI * t).powf(-1.5) * ratio * (-t - rho * rho / (4.0 * t)).exp()
}

// p = sqrt2 e^{-t/4} (4 pi t)^{-3/2} int_rho^inf s e^{-s^2/4t} / sqrt(cosh s - cosh rho) ds,
// with s = rho + u^2 and the factor e^{-rho^2/4t} pulled out.
fn heat_kernel_2(t: f64, rho: f64) -> f64 {
    let integrand = |u: f64| {
        let u2 = u * u;
        let s = rho + u2;
        let gap = 2.0 * (rho + u2 / 2.0).sinh() * (u2 / 2.0).sinh();
        if gap <= 0.0 {
            return 0.0;
        }
        2.0 * u * s * (-u2 * (2.0 * rho + u2) / (4.0 * t)).exp() / gap.sqrt()
    };
    // beyond u_max the Gaussian factor is below e^-60
    let u_max = (-rho + (rho * rho + 240.0 * t).sqrt()).sqrt();
    let (val, _) = integrate(integrand, 0.0, u_max, 1e-12, 0.0);
    2f64.sqrt() * (-t / 4.0).exp() * (4.0 * PI * t).powf(-1.5) * (-rho * rho / (4.0 * t)).exp() * val
}

/// Quotient of the hyperbolic plane by a translation of length `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicCylinder {
    tau: f64,
}

impl HyperbolicCylinder {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(domain("tau", format!("{tau} must be positive")));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// Distance from a point at distance `rho` from the core geodesic to its
/// image under the `n`-th power of the generator:
/// `cosh d = 1 + cosh^2(rho) (cosh(n tau) - 1)`, evaluated as
/// `sinh(d/2) = cosh(rho) sinh(|n| tau / 2)`.
pub fn cylinder_orbit_distance(c: &HyperbolicCylinder, rho: f64, n: i64) -> f64 {
    let half = (n.unsigned_abs() as f64 * c.tau / 2.0).sinh();
    2.0 * (rho.cosh() * half).asinh()
}

/// Periodized sum with its truncation data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSum {
    pub value: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

// 2 sum_{n > N} A e^{-(n tau)^2 / 4t} <= 2 A (2t / (N tau^2)) e^{-(N tau)^2 / 4t}
fn tail_bound(a: f64, t: f64, tau: f64, n: usize) -> f64 {
    let x = n as f64 * tau;
    2.0 * a * (2.0 * t / (n as f64 * tau * tau)) * (-x * x / (4.0 * t)).exp()
}

/// `f_t = sum_{n != 0} p_t(d(x, gamma^n x))`, truncated once the certified
/// tail is below `q.tail_tol`.
pub fn f_t_cylinder_sum(c: &HyperbolicCylinder, rho: f64, q: &HeatQuery) -> Result<OrbitSum> {
    let a = gaussian_prefactor(q.t, q.dim);
    let mut n = 1usize;
    while tail_bound(a, q.t, c.tau, n) > q.tail_tol {
        n += 1;
    }
    let mut value = 0.0;
    // add small terms first
    for k in (1..=n).rev() {
        value += 2.0 * heat_kernel(q, cylinder_orbit_distance(c, rho, k as i64))?;
    }
    Ok(OrbitSum { value, terms: n, tail_bound: tail_bound(a, q.t, c.tau, n) })
}

pub fn f_t_cylinder(c: &HyperbolicCylinder, rho: f64, q: &HeatQuery) -> Result<f64> {
    Ok(f_t_cylinder_sum(c, rho, q)?.value)
}

/// Thin part of a cylinder and the integral of `f_t` over it, per period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThinPartReport {
    pub tau: f64,
    pub t: f64,
    pub epsilon: f64,
    pub rho_thin: f64,
    pub vol_thin_per_period: f64,
    pub integral_f_over_thin: f64,
    pub ratio: f64,
    /// `f_t` on the core geodesic, its maximum.
    pub f_axis: f64,
}

impl ThinPartReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain record")
    }
}

/// Points displaced less than `epsilon` by the generator form the band
/// `|rho| < rho_thin`, of area `2 tau sinh(rho_thin)` per period.
pub fn thin_part_report(c: &HyperbolicCylinder, q: &HeatQuery) -> Result<ThinPartReport> {
    if c.tau >= q.epsilon {
        return Err(Error::NoThinPart { tau: c.tau, epsilon: q.epsilon });
    }
    let g = |rho: f64| cylinder_orbit_distance(c, rho, 1) - q.epsilon;
    let mut hi = 1.0;
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    let rho_thin = bisect(g, 0.0, hi, 1e-13);
    let vol = 2.0 * c.tau * rho_thin.sinh();
    // t was validated by HeatQuery, so the kernel cannot fail here
    let (half, _) = integrate(
        |rho: f64| f_t_cylinder(c, rho, q).map_or(f64::NAN, |f| f * rho.cosh()),
        0.0,
        rho_thin,
        1e-9,
        0.0,
    );
    if !half.is_finite() {
        return Err(domain("t", format!("{} must be positive", q.t)));
    }
    let integral = 2.0 * c.tau * half;
    Ok(ThinPartReport {
        tau: c.tau,
        t: q.t,
        epsilon: q.epsilon,
        rho_thin,
        vol_thin_per_period: vol,
        integral_f_over_thin: integral,
        ratio: integral / vol,
        f_axis: f_t_cylinder(c, 0.0, q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::mobius::{upper_half_plane_distance, MobiusTransform};
    use crate::numeric::integrate_to_infinity;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(t: f64, dim: u32) -> HeatQuery {
        HeatQuery::new(t, dim, 1e-13, 0.5).unwrap()
    }

    #[test]
    fn query_validation() {
        assert!(HeatQuery::new(0.0, 2, 1e-12, 0.5).is_err());
        assert!(HeatQuery::new(1.0, 4, 1e-12, 0.5).is_err());
        assert!(HeatQuery::new(1.0, 2, 0.0, 0.5).is_err());
        assert!(HyperbolicCylinder::new(0.0).is_err());
    }

    #[test]
    fn three_dim_origin_limit() {
        for t in [0.1, 1.0, 5.0] {
            let p0 = heat_kernel(&q(t, 3), 0.0).unwrap();
            assert!((p0 - (4.0 * PI * t).powf(-1.5) * (-t).exp()).abs() < 1e-15 * p0.max(1.0));
            let p_small = heat_kernel(&q(t, 3), 1e-6).unwrap();
            assert!((p_small - p0).abs() < 1e-9 * p0);
        }
    }

    #[test]
    fn normalization() {
        for t in [0.1, 1.0, 10.0] {
            let k3 = q(t, 3);
            let (m3, _) = integrate_to_infinity(
                |r| heat_kernel(&k3, r).unwrap() * 4.0 * PI * r.sinh().powi(2),
                0.0,
                1e-12,
                1e-14,
            );
            assert!((m3 - 1.0).abs() < 1e-6, "d=3 t={t}: {m3}");
            let k2 = q(t, 2);
            let (m2, _) =
                integrate_to_infinity(|r| heat_kernel(&k2, r).unwrap() * 2.0 * PI * r.sinh(), 0.0, 1e-10, 1e-13);
            assert!((m2 - 1.0).abs() < 1e-6, "d=2 t={t}: {m2}");
        }
    }

    // p_{2t}(0) = int p_t(d(o, y))^2 dy
    #[test]
    fn semigroup_in_the_plane() {
        let k = q(1.0, 2);
        let (rhs, _) =
            integrate_to_infinity(|r| heat_kernel(&k, r).unwrap().powi(2) * 2.0 * PI * r.sinh(), 0.0, 1e-10, 1e-14);
        let lhs = heat_kernel(&q(2.0, 2), 0.0).unwrap();
        assert!((lhs - rhs).abs() < 1e-4 * lhs, "{lhs} vs {rhs}");
    }

    #[test]
    fn decreasing_and_shape_bound() {
        for dim in [2, 3] {
            let c = heat_shape_constant(dim);
            for &t in &[0.1, 0.3, 1.0, 3.0, 10.0] {
                let k = q(t, dim);
                let mut prev = f64::INFINITY;
                for i in 0..=100 {
                    let r = i as f64 * 0.1;
                    let p = heat_kernel(&k, r).unwrap();
                    assert!(p > 0.0 && p < prev, "dim {dim} t {t} rho {r}");
                    prev = p;
                    assert!(p <= c * t.powf(-(dim as f64) / 2.0) * (-r * r / (5.0 * t)).exp());
                    assert!(p <= gaussian_prefactor(t, dim) * (-r * r / (4.0 * t)).exp() * (1.0 + 1e-9));
                }
            }
        }
    }

    #[test]
    fn orbit_distance_examples() {
        let c = HyperbolicCylinder::new(0.3).unwrap();
        assert_eq!(cylinder_orbit_distance(&c, 1.2, 0), 0.0);
        assert!((cylinder_orbit_distance(&c, 0.0, 4) - 1.2).abs() < 1e-14);
        assert_eq!(cylinder_orbit_distance(&c, 0.7, 3), cylinder_orbit_distance(&c, 0.7, -3));
    }

    // Independent route: z = sinh(rho) + i sits at distance rho from the imaginary axis.
    #[test]
    fn orbit_distance_matches_matrix_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut cases = vec![(0.2, 1.0, 1i32)];
        for _ in 0..200 {
            cases.push((rng.gen_range(0.01..2.0), rng.gen_range(-4.0..4.0), rng.gen_range(-6..=6)));
        }
        for (tau, rho, n) in cases {
            let c = HyperbolicCylinder::new(tau).unwrap();
            let g = MobiusTransform::translation(tau).pow(n);
            let z = Complex64::new(f64::sinh(rho), 1.0);
            let d_model = upper_half_plane_distance(z, g.apply(z));
            let d = cylinder_orbit_distance(&c, rho, n as i64);
            assert!((d - d_model).abs() < 1e-10 * d.max(1.0), "tau {tau} rho {rho} n {n}: {d} vs {d_model}");
        }
    }

    #[test]
    fn f_t_far_from_axis_is_negligible() {
        let c = HyperbolicCylinder::new(0.1).unwrap();
        let k = HeatQuery::surface(1.0).unwrap();
        // d(x, gamma x) > 20
        let rho = 14.0;
        assert!(cylinder_orbit_distance(&c, rho, 1) > 20.0);
        assert!(f_t_cylinder(&c, rho, &k).unwrap() <= 1e-15);
    }

    #[test]
    fn f_t_matches_direct_two_sided_sum() {
        for (tau, rho) in [(0.1, 0.0), (0.3, 0.5), (0.05, 1.0)] {
            let c = HyperbolicCylinder::new(tau).unwrap();
            let k = HeatQuery::new(1.0, 2, 1e-10, 0.5).unwrap();
            let s = f_t_cylinder_sum(&c, rho, &k).unwrap();
            let tight = HeatQuery::new(1.0, 2, 1e-16, 0.5).unwrap();
            let n_star = f_t_cylinder_sum(&c, rho, &tight).unwrap().terms as i64 + 50;
            let direct: f64 = (-n_star..=n_star)
                .filter(|&n| n != 0)
                .map(|n| heat_kernel(&tight, cylinder_orbit_distance(&c, rho, n)).unwrap())
                .sum();
            assert!((s.value - direct).abs() <= 1e-10, "tau {tau}: {} vs {direct}", s.value);
            assert!(s.value <= direct);
        }
    }

    #[test]
    fn f_t_nonincreasing_in_rho() {
        let k = HeatQuery::surface(1.0).unwrap();
        for tau in [0.05, 0.2, 1.0] {
            let c = HyperbolicCylinder::new(tau).unwrap();
            let mut prev = f64::INFINITY;
            for i in 0..40 {
                let f = f_t_cylinder(&c, i as f64 * 0.1, &k).unwrap();
                assert!(f <= prev);
                prev = f;
            }
        }
    }

    #[test]
    fn thin_part_geometry() {
        let k = HeatQuery::surface(1.0).unwrap();
        let c = HyperbolicCylinder::new(0.1).unwrap();
        let r = thin_part_report(&c, &k).unwrap();
        // closed form for the band edge
        let exact = ((0.25f64).sinh() / (0.05f64).sinh()).acosh();
        assert!((r.rho_thin - exact).abs() < 1e-10);
        assert!((r.vol_thin_per_period - 2.0 * 0.1 * exact.sinh()).abs() < 1e-12);
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
        assert!(r.to_json().contains("\"integral_f_over_thin\""));
        let edge = HyperbolicCylinder::new(0.5).unwrap();
        assert!(matches!(thin_part_report(&edge, &k), Err(Error::NoThinPart { .. })));
    }

    // Monte-Carlo area of {z : 1 <= |z| < e^tau, d(z, gamma z) < eps}; in polar
    // coordinates the area element is (dr / r)(dphi / sin^2 phi).
    #[test]
    fn thin_volume_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for tau in [0.05, 0.2] {
            let c = HyperbolicCylinder::new(tau).unwrap();
            let r = thin_part_report(&c, &HeatQuery::surface(1.0).unwrap()).unwrap();
            let eps: f64 = 0.5;
            let samples = 400_000;
            let mut acc = 0.0;
            for _ in 0..samples {
                let phi: f64 = rng.gen_range(0.0..PI);
                let s2 = phi.sin().powi(2);
                let cosh_d = 1.0 + (tau.exp() - 1.0).powi(2) / (2.0 * tau.exp() * s2);
                if cosh_d < eps.cosh() {
                    acc += 1.0 / s2;
                }
            }
            let area = tau * PI * acc / samples as f64;
            let rel = (area - r.vol_thin_per_period).abs() / r.vol_thin_per_period;
            assert!(rel < 0.01, "tau {tau}: {area} vs {}", r.vol_thin_per_period);
        }
    }
}
