use num_complex::Complex64;

use crate::error::{domain, Result};

/// Raw 2x2 real matrix `(a, b, c, d)`, row-major.
pub type M2 = [f64; 4];

pub const IDENTITY: M2 = [1.0, 0.0, 0.0, 1.0];

#[inline]
pub fn mul(x: &M2, y: &M2) -> M2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// Inverse of a determinant-1 matrix.
#[inline]
pub fn inv(x: &M2) -> M2 {
    [x[3], -x[1], -x[2], x[0]]
}

#[inline]
pub fn trace(x: &M2) -> f64 {
    x[0] + x[3]
}

/// `2 acosh(|tr| / 2)` for hyperbolic elements, 0 otherwise.
#[inline]
pub fn length_from_trace(tr: f64) -> f64 {
    let h = tr.abs() / 2.0;
    if h <= 1.0 {
        0.0
    } else {
        2.0 * h.acosh()
    }
}

/// `min(|A - B|, |A + B|)` in the Frobenius norm.
pub fn projective_distance(a: &M2, b: &M2) -> f64 {
    let minus: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let plus: f64 = a.iter().zip(b).map(|(x, y)| (x + y) * (x + y)).sum();
    minus.min(plus).sqrt()
}

/// Orientation-preserving isometry of the upper half-plane, as an element
/// of `SL2(R)` taken up to sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusTransform {
    m: M2,
}

impl MobiusTransform {
    pub fn new(m: M2) -> Result<Self> {
        let det = m[0] * m[3] - m[1] * m[2];
        let scale = m.iter().fold(1.0f64, |s, x| s.max(x.abs()));
        if !m.iter().all(|x| x.is_finite()) || (det - 1.0).abs() > 1e-10 * scale * scale {
            return Err(domain("matrix", format!("determinant {det} is not 1")));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_raw(m: M2) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self { m: IDENTITY }
    }

    /// Translation by `length` along the imaginary axis.
    pub fn translation(length: f64) -> Self {
        Self { m: [(length / 2.0).exp(), 0.0, 0.0, (-length / 2.0).exp()] }
    }

    pub fn matrix(&self) -> M2 {
        self.m
    }

    pub fn det(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn trace(&self) -> f64 {
        trace(&self.m)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { m: mul(&self.m, &other.m) }
    }

    pub fn inverse(&self) -> Self {
        Self { m: inv(&self.m) }
    }

    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    pub fn pow(&self, n: i32) -> Self {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| acc.mul(&base))
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let [a, b, c, d] = self.m;
        (z * a + b) / (z * c + d)
    }

    /// Attracting and repelling fixed points on the boundary line (`None`
    /// stands for infinity). Only meaningful for hyperbolic elements.
    pub fn axis(&self) -> Option<(Option<f64>, Option<f64>)> {
        if !self.is_hyperbolic() {
            return None;
        }
        let [a, b, c, d] = self.m;
        let tr = a + d;
        let disc = (tr * tr - 4.0).sqrt();
        // eigenvalues mu with |mu_att| > 1
        let sign = tr.signum();
        let mu_att = (tr + sign * disc) / 2.0;
        let mu_rep = 1.0 / mu_att;
        // eigenvector (x, y) of M for eigenvalue mu gives fixed point x / y
        let point = |mu: f64| -> Option<f64> {
            if c.abs() > 1e-300 {
                Some((mu - d) / c)
            } else if (a - mu).abs() > 1e-300 {
                // c = 0: fixed points are infinity and b / (d - a)
                if (mu - a).abs() < (mu - d).abs() {
                    None
                } else {
                    Some(b / (d - a))
                }
            } else {
                None
            }
        };
        Some((point(mu_att), point(mu_rep)))
    }
}

/// Translation length of a Möbius transformation.
pub fn translation_length(m: &MobiusTransform) -> f64 {
    length_from_trace(m.trace())
}

/// Hyperbolic distance in the upper half-plane.
pub fn upper_half_plane_distance(z: Complex64, w: Complex64) -> f64 {
    let cosh_d = 1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im);
    cosh_d.acosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sl2<R: Rng>(rng: &mut R) -> MobiusTransform {
        let a: f64 = rng.gen_range(0.3..3.0);
        let b: f64 = rng.gen_range(-2.0..2.0);
        let c: f64 = rng.gen_range(-2.0..2.0);
        MobiusTransform::new([a, b, c, (1.0 + b * c) / a]).unwrap()
    }

    #[test]
    fn examples() {
        let e = std::f64::consts::E;
        let m = MobiusTransform::new([e, 0.0, 0.0, 1.0 / e]).unwrap();
        assert!((translation_length(&m) - 2.0).abs() < 1e-15);
        let parabolic = MobiusTransform::new([1.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(translation_length(&parabolic), 0.0);
        assert!(MobiusTransform::new([2.0, 0.0, 0.0, 2.0]).is_err());
    }

    #[test]
    fn conjugation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = MobiusTransform::translation(0.6);
        for _ in 0..50 {
            let g = random_sl2(&mut rng);
            assert!((translation_length(&d.conjugate_by(&g)) - 0.6).abs() < 1e-10);
        }
    }

    #[test]
    fn axis_of_diagonal_and_conjugate() {
        let d = MobiusTransform::translation(1.0);
        assert_eq!(d.axis(), Some((None, Some(0.0))));
        let g = MobiusTransform::new([1.0, 2.0, 0.0, 1.0]).unwrap();
        let (att, rep) = d.conjugate_by(&g).axis().unwrap();
        // g moves 0 -> 2 and fixes infinity
        assert!(att.is_none());
        assert!((rep.unwrap() - 2.0).abs() < 1e-12);
        let h = MobiusTransform::new([1.0, 0.0, 1.0, 1.0]).unwrap();
        let (att, rep) = d.conjugate_by(&h).axis().unwrap();
        assert!((att.unwrap() - 1.0).abs() < 1e-12 && rep.unwrap().abs() < 1e-12);
    }

    #[test]
    fn distance_matches_translation_on_axis() {
        let d = MobiusTransform::translation(0.8);
        let z = Complex64::new(0.0, 1.3);
        assert!((upper_half_plane_distance(z, d.apply(z)) - 0.8).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn conjugation_invariance(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_sl2(&mut rng);
            let g = random_sl2(&mut rng);
            let a = translation_length(&m);
            let b = translation_length(&m.conjugate_by(&g));
            prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
        }

        #[test]
        fn powers_scale_length(l in 0.05f64..3.0, n in 1i32..=20, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = MobiusTransform::translation(l).conjugate_by(&random_sl2(&mut rng));
            let ln = translation_length(&m.pow(n));
            prop_assert!((ln - n as f64 * translation_length(&m)).abs() < 1e-9 * (n as f64 * l).max(1.0),
                "{} vs {}", ln, n as f64 * l);
        }
    }
}
