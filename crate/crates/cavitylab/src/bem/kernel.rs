use crate::linalg::C64;
use crate::specfun::{bessel_k01, hankel01, i0_series};
use std::f64::consts::PI;

/// Which fundamental solution: `Φ_k = (i/4) H0(k r)` or the modified
/// `Φ_{ik} = K0(k r) / 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    Helmholtz,
    Modified,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    pub family: KernelFamily,
    pub k: f64,
}

const INV_2PI: f64 = 0.5 / PI;

impl Kernel {
    pub fn new(family: KernelFamily, k: f64) -> Self {
        Kernel { family, k }
    }

    /// `κ²` in the Maue form: `k²` for Helmholtz, `(ik)² = -k²` for the
    /// modified kernel.
    pub fn kappa2(&self) -> f64 {
        match self.family {
            KernelFamily::Helmholtz => self.k * self.k,
            KernelFamily::Modified => -self.k * self.k,
        }
    }

    /// `(G(r), dG/dr)`.
    #[inline]
    pub fn eval(&self, r: f64) -> (C64, C64) {
        let x = self.k * r;
        match self.family {
            KernelFamily::Helmholtz => {
                let (h0, h1) = hankel01(x);
                (
                    C64::new(-0.25 * h0.im, 0.25 * h0.re),
                    C64::new(0.25 * self.k * h1.im, -0.25 * self.k * h1.re),
                )
            }
            KernelFamily::Modified => {
                let (k0, k1) = bessel_k01(x);
                (C64::new(INV_2PI * k0, 0.0), C64::new(-INV_2PI * self.k * k1, 0.0))
            }
        }
    }

    /// Split `G(r) = -c(r) ln(r) / 2π + R(r)` with `c`, `R` smooth in `r²`;
    /// returns `(c(r), R(r))`. `c` is `J0(kr)` or `I0(kr)`.
    #[inline]
    pub fn log_split(&self, r: f64) -> (f64, C64) {
        let x = self.k * r;
        let lr = r.ln();
        match self.family {
            KernelFamily::Helmholtz => {
                let (h0, _) = hankel01(x);
                let c = h0.re;
                let g = C64::new(-0.25 * h0.im, 0.25 * h0.re);
                (c, g + INV_2PI * c * lr)
            }
            KernelFamily::Modified => {
                let c = i0_series(x);
                let (k0, _) = bessel_k01(x);
                (c, C64::new(INV_2PI * (k0 + c * lr), 0.0))
            }
        }
    }
}
