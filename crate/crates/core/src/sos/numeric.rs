//! Floating-point kernels for the numeric search: projection onto the psd
//! cone and alternating projections against an affine family of block
//! matrices.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// Dense symmetric matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct SymF64 {
    pub n: usize,
    pub a: Vec<f64>,
}

impl SymF64 {
    pub fn zeros(n: usize) -> SymF64 {
        SymF64 { n, a: vec![0.0; n * n] }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
        self.a[j * self.n + i] = v;
    }
}

/// Eigenvalues and column eigenvectors (`vectors[i * n + k]` is component
/// `i` of eigenvector `k`).
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        let n = self.values.len();
        (0..n).map(|i| self.vectors[i * n + k]).collect()
    }
}

/// Symmetric eigendecomposition.
pub fn symmetric_eigen(m: &SymF64) -> Eigen {
    let n = m.n;
    let eig = DMatrix::from_row_slice(n, n, &m.a).symmetric_eigen();
    let mut vectors = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            vectors[i * n + k] = eig.eigenvectors[(i, k)];
        }
    }
    Eigen { values: eig.eigenvalues.iter().copied().collect(), vectors }
}

/// Nearest matrix (Frobenius) with every eigenvalue at least `floor`.
pub fn project_psd(m: &SymF64, floor: f64) -> SymF64 {
    let n = m.n;
    let eig = symmetric_eigen(m);
    let mut out = SymF64::zeros(n);
    for k in 0..n {
        let lam = eig.values[k].max(floor);
        if lam == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = eig.vectors[i * n + k] * lam;
            for j in 0..n {
                out.a[i * n + j] += vik * eig.vectors[j * n + k];
            }
        }
    }
    out
}

pub fn min_eigenvalue(m: &SymF64) -> f64 {
    symmetric_eigen(m).values.into_iter().fold(f64::INFINITY, f64::min)
}

/// Affine family `x = x0 + Z t` of stacked upper triangles of square blocks,
/// with the Frobenius metric (off-diagonal coordinates weighted twice).
#[derive(Clone, Debug)]
pub struct AffineBlocks {
    pub sizes: Vec<usize>,
    pub x0: Vec<f64>,
    /// Columns of `Z`.
    pub dirs: Vec<Vec<f64>>,
    weights: Vec<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl AffineBlocks {
    pub fn new(sizes: Vec<usize>, x0: Vec<f64>, dirs: Vec<Vec<f64>>) -> AffineBlocks {
        let mut weights = Vec::with_capacity(x0.len());
        for &k in &sizes {
            for i in 0..k {
                for j in i..k {
                    weights.push(if i == j { 1.0 } else { 2.0 });
                }
            }
        }
        assert_eq!(weights.len(), x0.len(), "coordinate count");
        let p = dirs.len();
        let mut gram = vec![0.0; p * p];
        for a in 0..p {
            for b in a..p {
                let v: f64 = (0..x0.len()).map(|i| weights[i] * dirs[a][i] * dirs[b][i]).sum();
                gram[a * p + b] = v;
                gram[b * p + a] = v;
            }
        }
        let gram = DMatrix::from_row_slice(p, p, &gram);
        // independent directions give a positive definite Gram matrix; the
        // ridge only guards against round-off
        let chol = gram.clone().cholesky().unwrap_or_else(|| {
            let ridge = 1e-12 * gram.trace().max(1.0);
            (gram + DMatrix::identity(p, p) * ridge).cholesky().expect("ridged Gram matrix")
        });
        AffineBlocks { sizes, x0, dirs, weights, chol }
    }

    pub fn nparams(&self) -> usize {
        self.dirs.len()
    }

    pub fn point(&self, t: &[f64]) -> Vec<f64> {
        let mut x = self.x0.clone();
        for (d, &tj) in self.dirs.iter().zip(t) {
            if tj != 0.0 {
                for (xi, di) in x.iter_mut().zip(d) {
                    *xi += tj * di;
                }
            }
        }
        x
    }

    /// Parameters of the nearest point of the family to `y`.
    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        let p = self.dirs.len();
        let rhs: Vec<f64> = (0..p)
            .map(|a| (0..y.len()).map(|i| self.weights[i] * self.dirs[a][i] * (y[i] - self.x0[i])).sum())
            .collect();
        self.chol.solve(&DVector::from_vec(rhs)).iter().copied().collect()
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(y).zip(&self.weights).map(|((a, b), w)| w * (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    pub fn blocks(&self, x: &[f64]) -> Vec<SymF64> {
        let mut out = Vec::with_capacity(self.sizes.len());
        let mut off = 0;
        for &k in &self.sizes {
            let mut m = SymF64::zeros(k);
            for i in 0..k {
                for j in i..k {
                    m.set(i, j, x[off]);
                    off += 1;
                }
            }
            out.push(m);
        }
        out
    }

    pub fn flatten(&self, blocks: &[SymF64]) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.x0.len());
        for m in blocks {
            for i in 0..m.n {
                for j in i..m.n {
                    x.push(m.get(i, j));
                }
            }
        }
        x
    }

    /// Smallest eigenvalue over all blocks.
    pub fn min_eigenvalue(&self, x: &[f64]) -> f64 {
        self.blocks(x).iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min)
    }
}

/// Settings for [`alternate`].
#[derive(Clone, Copy, Debug)]
pub struct Projections {
    pub max_sweeps: usize,
    pub tolerance: f64,
    /// Eigenvalue floor used by the psd projection.
    pub floor: f64,
}

impl Default for Projections {
    fn default() -> Projections {
        Projections { max_sweeps: 5000, tolerance: 1e-9, floor: 0.0 }
    }
}

#[derive(Clone, Debug)]
pub struct ProjectionRun {
    pub t: Vec<f64>,
    pub gap: f64,
    pub sweeps: usize,
    pub converged: bool,
}

/// Alternating projections between the affine family and the psd cone,
/// starting from parameters `t`.
pub fn alternate(family: &AffineBlocks, t: Vec<f64>, opts: Projections) -> ProjectionRun {
    let mut t = t;
    let mut gap = f64::INFINITY;
    for sweep in 0..opts.max_sweeps {
        let x = family.point(&t);
        let psd: Vec<SymF64> = family.blocks(&x).iter().map(|b| project_psd(b, opts.floor)).collect();
        let y = family.flatten(&psd);
        t = family.project(&y);
        gap = family.distance(&family.point(&t), &y);
        if gap < opts.tolerance {
            return ProjectionRun { t, gap, sweeps: sweep + 1, converged: true };
        }
    }
    ProjectionRun { t, gap, sweeps: opts.max_sweeps, converged: false }
}
