use super::{CDCoefficients, Source};
use crate::varcalc::{Lagrangian, NodePoint, SlotValues};

/// Convection-diffusion Lagrangian
///
/// ```text
/// L = f·y − ½βy² + ½v² + ½(γ × w)·w − ½(K z)·z
/// ```
///
/// whose restricted Euler-Lagrange equation at `α = 1/2` is the
/// convection-diffusion equation.
#[derive(Debug, Clone)]
pub struct CdLagrangian {
    coeffs: CDCoefficients,
}

pub fn cd_lagrangian(c: &CDCoefficients) -> CdLagrangian {
    CdLagrangian { coeffs: c.clone() }
}

impl CdLagrangian {
    pub fn coefficients(&self) -> &CDCoefficients {
        &self.coeffs
    }

    fn f(&self, p: &NodePoint<'_>) -> f64 {
        match self.coeffs.source() {
            Source::Function(f) => f(p.t, p.x),
            Source::Sampled(s) => {
                let mut idx = vec![p.time_index];
                idx.extend_from_slice(p.space_index);
                s.values()[idx.as_slice()]
            }
        }
    }

    fn kz(&self, z: &[f64], i: usize) -> f64 {
        self.coeffs.k()[i].iter().zip(z).map(|(k, z)| k * z).sum()
    }
}

impl Lagrangian for CdLagrangian {
    fn eval(&self, p: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        let c = &self.coeffs;
        let conv: f64 = c.gamma().iter().zip(s.w).map(|(g, w)| g * w * w).sum();
        let diff: f64 = (0..s.z.len()).map(|i| self.kz(s.z, i) * s.z[i]).sum();
        self.f(p) * s.y - 0.5 * c.beta() * s.y * s.y + 0.5 * s.v * s.v + 0.5 * conv - 0.5 * diff
    }

    fn dy(&self, p: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        self.f(p) - self.coeffs.beta() * s.y
    }

    fn dv(&self, _: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        s.v
    }

    fn dw(&self, _: &NodePoint<'_>, s: &SlotValues<'_>, out: &mut [f64]) {
        for ((o, g), w) in out.iter_mut().zip(self.coeffs.gamma()).zip(s.w) {
            *o = g * w;
        }
    }

    fn dz(&self, _: &NodePoint<'_>, s: &SlotValues<'_>, out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = -self.kz(s.z, i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdsolve::Initial;
    use crate::varcalc::check_partials;

    fn coeffs() -> CDCoefficients {
        CDCoefficients::new(
            vec![1.0, 2.0],
            vec![vec![0.1, 0.0], vec![0.0, 0.1]],
            0.5,
            Source::zero(),
            Initial::zero(),
        )
        .unwrap()
    }

    #[test]
    fn partial_examples() {
        let l = cd_lagrangian(&coeffs());
        let x = [0.3, 0.4];
        let p = NodePoint { t: 0.2, x: &x, time_index: 1, space_index: &[1, 1] };
        let zero = SlotValues { y: 0.0, v: 0.0, w: &[0.0, 0.0], z: &[0.0, 0.0] };
        assert_eq!(l.eval(&p, &zero), 0.0);
        assert_eq!(l.dy(&p, &zero), 0.0);
        let mut out = [0.0; 2];
        l.dw(&p, &SlotValues { w: &[1.0, 1.0], ..zero }, &mut out);
        assert_eq!(out, [1.0, 2.0]);
        l.dz(&p, &SlotValues { z: &[1.0, 0.0], ..zero }, &mut out);
        assert_eq!(out, [-0.1, 0.0]);
    }

    #[test]
    fn partials_match_finite_differences() {
        let c = CDCoefficients::new(
            vec![-0.7, 1.3],
            vec![vec![0.2, 0.05], vec![0.05, 0.1]],
            0.8,
            Source::function(|t, x| t + x[0] * x[1]),
            Initial::zero(),
        )
        .unwrap();
        assert!(check_partials(&cd_lagrangian(&c), 2, 20, 4) <= 1e-6);
    }
}
