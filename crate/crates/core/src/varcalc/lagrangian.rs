use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Location of a grid node where a Lagrangian is evaluated. Indices let
/// sampled data (such as a tabulated source) be looked up exactly.
#[derive(Debug, Clone, Copy)]
pub struct NodePoint<'a> {
    pub t: f64,
    pub x: &'a [f64],
    pub time_index: usize,
    pub space_index: &'a [usize],
}

/// Slot values `(y, v, w, z)` with `w, z ∈ ℝ^d`.
#[derive(Debug, Clone, Copy)]
pub struct SlotValues<'a> {
    pub y: f64,
    pub v: f64,
    pub w: &'a [f64],
    pub z: &'a [f64],
}

/// Generalised Lagrangian `L(t, x, y, v, w, z)` with its partial
/// derivatives in the slot variables.
pub trait Lagrangian: Sync {
    fn eval(&self, p: &NodePoint<'_>, s: &SlotValues<'_>) -> f64;
    fn dy(&self, p: &NodePoint<'_>, s: &SlotValues<'_>) -> f64;
    fn dv(&self, p: &NodePoint<'_>, s: &SlotValues<'_>) -> f64;
    /// Writes `∂_w L` into `out` (length `d`).
    fn dw(&self, p: &NodePoint<'_>, s: &SlotValues<'_>, out: &mut [f64]);
    /// Writes `∂_z L` into `out` (length `d`).
    fn dz(&self, p: &NodePoint<'_>, s: &SlotValues<'_>, out: &mut [f64]);
}

/// The zero Lagrangian.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroLagrangian;

impl Lagrangian for ZeroLagrangian {
    fn eval(&self, _: &NodePoint<'_>, _: &SlotValues<'_>) -> f64 {
        0.0
    }
    fn dy(&self, _: &NodePoint<'_>, _: &SlotValues<'_>) -> f64 {
        0.0
    }
    fn dv(&self, _: &NodePoint<'_>, _: &SlotValues<'_>) -> f64 {
        0.0
    }
    fn dw(&self, _: &NodePoint<'_>, _: &SlotValues<'_>, out: &mut [f64]) {
        out.fill(0.0);
    }
    fn dz(&self, _: &NodePoint<'_>, _: &SlotValues<'_>, out: &mut [f64]) {
        out.fill(0.0);
    }
}

/// `L = ½ sᵀ A s + bᵀ s + c` in the stacked slot vector
/// `s = (y, v, w_1..w_d, z_1..z_d)`.
#[derive(Debug, Clone)]
pub struct QuadraticLagrangian {
    a: Array2<f64>,
    b: Vec<f64>,
    c: f64,
}

impl QuadraticLagrangian {
    /// `a` is symmetrised.
    pub fn new(a: Array2<f64>, b: Vec<f64>, c: f64) -> Self {
        assert!(a.is_square() && a.nrows() == b.len() && b.len() >= 4 && b.len() % 2 == 0);
        let a = (&a + &a.t()) * 0.5;
        QuadraticLagrangian { a, b, c }
    }

    /// Entries drawn uniformly from `[−1, 1]`.
    pub fn random(d: usize, seed: u64) -> Self {
        let m = 2 + 2 * d;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Array2::from_shape_fn((m, m), |_| rng.random_range(-1.0..1.0));
        let b = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        QuadraticLagrangian::new(a, b, rng.random_range(-1.0..1.0))
    }

    fn stack(s: &SlotValues<'_>) -> Vec<f64> {
        let mut v = vec![s.y, s.v];
        v.extend_from_slice(s.w);
        v.extend_from_slice(s.z);
        v
    }

    fn grad(&self, s: &SlotValues<'_>, row: usize) -> f64 {
        let st = Self::stack(s);
        self.b[row] + self.a.row(row).iter().zip(&st).map(|(a, x)| a * x).sum::<f64>()
    }
}

impl Lagrangian for QuadraticLagrangian {
    fn eval(&self, _: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        let st = Self::stack(s);
        let quad: f64 = (0..st.len())
            .map(|i| st[i] * self.a.row(i).iter().zip(&st).map(|(a, x)| a * x).sum::<f64>())
            .sum();
        0.5 * quad + self.b.iter().zip(&st).map(|(b, x)| b * x).sum::<f64>() + self.c
    }
    fn dy(&self, _: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        self.grad(s, 0)
    }
    fn dv(&self, _: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        self.grad(s, 1)
    }
    fn dw(&self, _: &NodePoint<'_>, s: &SlotValues<'_>, out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.grad(s, 2 + i);
        }
    }
    fn dz(&self, _: &NodePoint<'_>, s: &SlotValues<'_>, out: &mut [f64]) {
        let d = s.w.len();
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.grad(s, 2 + d + i);
        }
    }
}

/// Largest relative error between the stated partial derivatives of `l`
/// and central finite differences, over `samples` random slot points in
/// dimension `d`. The error is measured as `|fd − exact| / max(1, |exact|)`.
pub fn check_partials<L: Lagrangian + ?Sized>(l: &L, d: usize, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let m = 2 + 2 * d;
    for _ in 0..samples {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0)).collect();
        let sidx = vec![1; d];
        let p = NodePoint { t: rng.random_range(0.0..1.0), x: &x, time_index: 1, space_index: &sidx };
        let base: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
        let slots = |v: &[f64]| (v[0], v[1], v[2..2 + d].to_vec(), v[2 + d..].to_vec());
        let (y, vv, w, z) = slots(&base);
        let s = SlotValues { y, v: vv, w: &w, z: &z };
        let mut dw = vec![0.0; d];
        let mut dz = vec![0.0; d];
        l.dw(&p, &s, &mut dw);
        l.dz(&p, &s, &mut dz);
        let mut exact = vec![l.dy(&p, &s), l.dv(&p, &s)];
        exact.extend(dw);
        exact.extend(dz);
        for (k, &ex) in exact.iter().enumerate() {
            let step = 1e-5 * (1.0 + base[k].abs());
            let mut plus = base.clone();
            plus[k] += step;
            let mut minus = base.clone();
            minus[k] -= step;
            let (yp, vp, wp, zp) = slots(&plus);
            let (ym, vm, wm, zm) = slots(&minus);
            let fp = l.eval(&p, &SlotValues { y: yp, v: vp, w: &wp, z: &zp });
            let fm = l.eval(&p, &SlotValues { y: ym, v: vm, w: &wm, z: &zm });
            let fd = (fp - fm) / (plus[k] - minus[k]);
            worst = worst.max((fd - ex).abs() / ex.abs().max(1.0));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_partials_consistent() {
        for d in 1..=3 {
            let l = QuadraticLagrangian::random(d, 40 + d as u64);
            assert!(check_partials(&l, d, 20, 1) <= 1e-6);
        }
        assert_eq!(check_partials(&ZeroLagrangian, 2, 5, 0), 0.0);
    }

    struct Wrong;
    impl Lagrangian for Wrong {
        fn eval(&self, _: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
            s.y * s.y + s.v
        }
        fn dy(&self, _: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
            s.y
        }
        fn dv(&self, _: &NodePoint<'_>, _: &SlotValues<'_>) -> f64 {
            1.0
        }
        fn dw(&self, _: &NodePoint<'_>, _: &SlotValues<'_>, out: &mut [f64]) {
            out.fill(0.0);
        }
        fn dz(&self, _: &NodePoint<'_>, _: &SlotValues<'_>, out: &mut [f64]) {
            out.fill(0.0);
        }
    }

    #[test]
    fn detects_wrong_partial() {
        assert!(check_partials(&Wrong, 1, 5, 2) > 0.1);
    }
}
