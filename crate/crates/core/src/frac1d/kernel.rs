use super::gamma::gamma;
use super::grid::{Direction, FracOrder, Scheme};
use super::weights::binomial_weights;

/// Toeplitz kernel of a discrete Caputo derivative on a uniform grid.
///
/// Both schemes share the form
///
/// ```text
/// (C u)_j = Σ_{m=0}^{j−1} κ_m (u_{j−m} − u_0),     (C u)_0 = 0
/// ```
///
/// with `κ_m = h^{−α} w_m` for GL and
/// `κ_m = h^{−α}/Γ(2−α) · (a_m − a_{m−1})`, `a_m = (m+1)^{1−α} − m^{1−α}`
/// (`a_{−1} = 0`) for L1. Backward operators are the forward ones
/// conjugated by reversal of the lane.
#[derive(Debug, Clone)]
pub struct CaputoKernel {
    alpha: FracOrder,
    scheme: Scheme,
    h: f64,
    kappa: Vec<f64>,
    /// prefix[j] = Σ_{m<j} κ_m
    prefix: Vec<f64>,
}

impl CaputoKernel {
    /// Kernel for lanes of up to `n + 1` nodes with spacing `h`.
    pub fn new(alpha: FracOrder, scheme: Scheme, h: f64, n: usize) -> Self {
        let a = alpha.value();
        let scale = h.powf(-a);
        let kappa: Vec<f64> = match scheme {
            Scheme::Gl => binomial_weights(a, n).into_iter().map(|w| scale * w).collect(),
            Scheme::L1 => {
                let c = scale / gamma(2.0 - a);
                let p = 1.0 - a;
                let am = |m: usize| ((m + 1) as f64).powf(p) - (m as f64).powf(p);
                (0..=n)
                    .map(|m| if m == 0 { c * am(0) } else { c * (am(m) - am(m - 1)) })
                    .collect()
            }
        };
        let mut prefix = Vec::with_capacity(n + 2);
        prefix.push(0.0);
        let mut acc = 0.0;
        for k in &kappa {
            acc += k;
            prefix.push(acc);
        }
        CaputoKernel { alpha, scheme, h, kappa, prefix }
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    /// Longest lane (in nodes) the kernel supports.
    pub fn max_len(&self) -> usize {
        self.kappa.len()
    }

    /// Caputo derivative of the lane `u`.
    pub fn caputo(&self, dir: Direction, u: &[f64], out: &mut [f64]) {
        match dir {
            Direction::Forward => self.caputo_fwd(u, out),
            Direction::Backward => with_reversed(u, out, |u, out| self.caputo_fwd(u, out)),
        }
    }

    /// Full convolution `Σ_{m=0}^{j} κ_m u_{j−m}`; for the GL kernel this is
    /// the Grünwald-Letnikov Riemann-Liouville derivative.
    pub fn convolve(&self, dir: Direction, u: &[f64], out: &mut [f64]) {
        match dir {
            Direction::Forward => self.convolve_fwd(u, out),
            Direction::Backward => with_reversed(u, out, |u, out| self.convolve_fwd(u, out)),
        }
    }

    /// Weighted adjoint of [`caputo`](Self::caputo):
    ///
    /// ```text
    /// out_k = (1/ω) Σ_j q_j g_j C_{j,k}
    /// ```
    ///
    /// where `q` are quadrature weights on the lane and `ω` the nominal
    /// interior weight. At nodes with `q_k = ω` this is the exact gradient of
    /// `Σ_j q_j g_j (C h)_j` with respect to `h_k`, divided by `q_k`.
    pub fn caputo_adjoint(&self, dir: Direction, g: &[f64], q: &[f64], nominal: f64, out: &mut [f64]) {
        let weighted: Vec<f64> = g.iter().zip(q).map(|(g, q)| g * q / nominal).collect();
        match dir {
            Direction::Forward => self.caputo_fwd_transpose(&weighted, out),
            Direction::Backward => with_reversed(&weighted, out, |g, out| self.caputo_fwd_transpose(g, out)),
        }
    }

    fn caputo_fwd(&self, u: &[f64], out: &mut [f64]) {
        let n1 = u.len();
        assert!(n1 <= self.kappa.len(), "lane of {n1} nodes exceeds kernel length {}", self.kappa.len());
        let u0 = u[0];
        out[0] = 0.0;
        for j in 1..n1 {
            let mut acc = 0.0;
            for m in 0..j {
                acc += self.kappa[m] * u[j - m];
            }
            out[j] = acc - self.prefix[j] * u0;
        }
    }

    fn convolve_fwd(&self, u: &[f64], out: &mut [f64]) {
        let n1 = u.len();
        assert!(n1 <= self.kappa.len());
        for j in 0..n1 {
            let mut acc = 0.0;
            for m in 0..=j {
                acc += self.kappa[m] * u[j - m];
            }
            out[j] = acc;
        }
    }

    /// Plain transpose of the forward Caputo matrix.
    fn caputo_fwd_transpose(&self, g: &[f64], out: &mut [f64]) {
        let n1 = g.len();
        assert!(n1 <= self.kappa.len());
        let mut first = 0.0;
        for j in 1..n1 {
            first -= self.prefix[j] * g[j];
        }
        out[0] = first;
        for k in 1..n1 {
            let mut acc = 0.0;
            for j in k..n1 {
                acc += self.kappa[j - k] * g[j];
            }
            out[k] = acc;
        }
    }
}

fn with_reversed(u: &[f64], out: &mut [f64], f: impl FnOnce(&[f64], &mut [f64])) {
    let rev: Vec<f64> = u.iter().rev().copied().collect();
    let mut tmp = vec![0.0; u.len()];
    f(&rev, &mut tmp);
    for (o, v) in out.iter_mut().zip(tmp.into_iter().rev()) {
        *o = v;
    }
}
