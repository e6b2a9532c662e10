use crate::geometry::BoundaryMesh;
use crate::linalg::{CMat, C64};

/// P1 mass matrix on a closed mesh: symmetric, cyclic tridiagonal.
///
/// `off[j]` couples nodes `j` and `j + 1 (mod n)`.
#[derive(Debug, Clone)]
pub struct MassMatrix {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    factor: CyclicFactor,
}

/// Thomas factors of the Sherman–Morrison modified tridiagonal part plus
/// the correction vector.
#[derive(Debug, Clone)]
struct CyclicFactor {
    gamma: f64,
    /// Pivots of the modified tridiagonal matrix.
    piv: Vec<f64>,
    /// Elimination multipliers `off[i] / piv[i]`.
    upper: Vec<f64>,
    z: Vec<f64>,
    denom: f64,
}

impl MassMatrix {
    pub fn new(mesh: &BoundaryMesh) -> Self {
        let n = mesh.len();
        let h = &mesh.lengths;
        let diag: Vec<f64> = (0..n).map(|j| (h[(j + n - 1) % n] + h[j]) / 3.0).collect();
        let off: Vec<f64> = h.iter().map(|&l| l / 6.0).collect();
        Self::from_bands(diag, off)
    }

    fn from_bands(diag: Vec<f64>, off: Vec<f64>) -> Self {
        let n = diag.len();
        assert!(n >= 3, "cyclic mass matrix needs n >= 3");
        let corner = off[n - 1];
        let gamma = -diag[0];
        let mut d = diag.clone();
        d[0] -= gamma;
        d[n - 1] -= corner * corner / gamma;
        let mut piv = vec![0.0; n];
        let mut upper = vec![0.0; n];
        piv[0] = d[0];
        for i in 1..n {
            upper[i - 1] = off[i - 1] / piv[i - 1];
            piv[i] = d[i] - off[i - 1] * upper[i - 1];
        }
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = corner;
        let z = thomas(&piv, &upper, &off, u);
        let denom = 1.0 + z[0] + corner * z[n - 1] / gamma;
        let factor = CyclicFactor { gamma, piv, upper, z, denom };
        MassMatrix { diag, off, factor }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let (p, q) = ((i + n - 1) % n, (i + 1) % n);
                x[i] * self.diag[i] + x[p] * self.off[p] + x[q] * self.off[i]
            })
            .collect()
    }

    /// Solves `M x = b`.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let f = &self.factor;
        let n = self.len();
        let corner = self.off[n - 1];
        let mut y = thomas(&f.piv, &f.upper, &self.off, b.to_vec());
        let fact = (y[0] + y[n - 1] * (corner / f.gamma)) / f.denom;
        for (yi, zi) in y.iter_mut().zip(&f.z) {
            *yi -= fact * *zi;
        }
        y
    }

    /// `M⁻¹ A`, column by column.
    pub fn solve_matrix(&self, a: &CMat) -> CMat {
        let n = self.len();
        assert_eq!(a.nrows(), n);
        let mut out = CMat::zeros(n, a.ncols());
        let mut col = vec![C64::new(0.0, 0.0); n];
        for j in 0..a.ncols() {
            for (i, c) in col.iter_mut().enumerate() {
                *c = a[(i, j)];
            }
            let x = self.solve(&col);
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMat {
        let n = self.len();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(self.diag[i], 0.0);
            let q = (i + 1) % n;
            m[(i, q)] += C64::new(self.off[i], 0.0);
            m[(q, i)] += C64::new(self.off[i], 0.0);
        }
        m
    }

    /// Eigenvalue bounds from Gershgorin discs (the matrix is symmetric).
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..n {
            let r = self.off[i] + self.off[(i + n - 1) % n];
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }
}

fn thomas<T>(piv: &[f64], upper: &[f64], off: &[f64], mut r: Vec<T>) -> Vec<T>
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Sub<Output = T>,
{
    let n = piv.len();
    for i in 1..n {
        r[i] = r[i] - r[i - 1] * upper[i - 1];
    }
    r[n - 1] = r[n - 1] * (1.0 / piv[n - 1]);
    for i in (0..n - 1).rev() {
        r[i] = (r[i] - r[i + 1] * off[i]) * (1.0 / piv[i]);
    }
    r
}
