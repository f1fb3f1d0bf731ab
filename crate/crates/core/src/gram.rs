//! Gram matrices, their Cholesky factors, and kernel interpolants.
//!
//! Fitting an interpolant on a set of centers is the orthogonal projection of
//! the RKHS onto the span of the kernel sections at those centers, so the same
//! factorization serves every projection onto that span.

use crate::error::{Error, Result};
use crate::geometry::closest_pair;
use crate::kernel::KernelSpec;
use crate::points::PointSet;

/// Diagonal shifts tried in order, relative to `trace(K) / n`.
pub const JITTER_LADDER: [f64; 4] = [0.0, 1e-12, 1e-10, 1e-8];

/// A Gram matrix over a set of centers together with its lower Cholesky factor.
#[derive(Debug, Clone)]
pub struct GramSystem {
    spec: KernelSpec,
    centers: PointSet,
    /// Row-major `n x n`.
    gram: Vec<f64>,
    jitter: f64,
    /// Row-major lower-triangular factor of `gram + jitter * I`.
    factor: Vec<f64>,
}

impl GramSystem {
    /// Assembles and factors the Gram matrix, escalating the diagonal shift
    /// along [`JITTER_LADDER`] until the factorization succeeds.
    pub fn new(spec: KernelSpec, centers: PointSet) -> Result<Self> {
        let n = centers.len();
        if n == 0 {
            return Err(Error::Input("gram matrix over an empty center set".into()));
        }
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            gram[i * n + i] = spec.radial(0.0);
            for j in 0..i {
                let v = spec.eval_unchecked(centers.point(i), centers.point(j));
                gram[i * n + j] = v;
                gram[j * n + i] = v;
            }
        }
        let scale = (0..n).map(|i| gram[i * n + i]).sum::<f64>() / n as f64;

        let mut last_jitter = 0.0;
        for rel in JITTER_LADDER {
            let jitter = rel * scale;
            last_jitter = jitter;
            if let Some(factor) = cholesky(&gram, n, jitter) {
                return Ok(GramSystem {
                    spec,
                    centers,
                    gram,
                    jitter,
                    factor,
                });
            }
        }
        let (first, second, separation) = closest_pair(&centers).unwrap_or((0, 0, 0.0));
        Err(Error::Factorization {
            jitter: last_jitter,
            first,
            second,
            separation,
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// The diagonal shift that made the factorization succeed.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.len() + j]
    }

    /// Row-major Gram entries.
    pub fn gram_matrix(&self) -> &[f64] {
        &self.gram
    }

    /// Row-major lower-triangular Cholesky factor.
    pub fn factor(&self) -> &[f64] {
        &self.factor
    }

    /// Relative Frobenius residual `|L L^T - (K + jitter I)| / |K + jitter I|`.
    pub fn factor_residual(&self) -> f64 {
        let n = self.len();
        let l = &self.factor;
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..n {
            for j in 0..n {
                let m = i.min(j);
                let llt: f64 = (0..=m).map(|k| l[i * n + k] * l[j * n + k]).sum();
                let a = self.gram[i * n + j] + if i == j { self.jitter } else { 0.0 };
                num += (llt - a) * (llt - a);
                den += a * a;
            }
        }
        (num / den).sqrt()
    }

    /// Solves `(K + jitter I) c = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if rhs.len() != n {
            return Err(Error::Input(format!(
                "right-hand side has length {}, gram system has {n} centers",
                rhs.len()
            )));
        }
        let l = &self.factor;
        let mut y = rhs.to_vec();
        for i in 0..n {
            let row = &l[i * n..i * n + i];
            let s: f64 = row.iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - s) / l[i * n + i];
        }
        // Back substitution with L^T, consuming rows of L so access stays contiguous.
        for i in (0..n).rev() {
            y[i] /= l[i * n + i];
            let xi = y[i];
            for (k, lik) in l[i * n..i * n + i].iter().enumerate() {
                y[k] -= lik * xi;
            }
        }
        Ok(y)
    }
}

/// Row-major Cholesky of `a + shift * I`. `None` on a non-positive or non-finite pivot.
fn cholesky(a: &[f64], n: usize, shift: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let (head, tail) = l.split_at_mut(j * n);
        let row_j = &mut tail[..n];
        for i in 0..j {
            let row_i = &head[i * n..i * n + i];
            let s: f64 = row_i.iter().zip(&row_j[..i]).map(|(x, y)| x * y).sum();
            row_j[i] = (a[j * n + i] - s) / head[i * n + i];
        }
        let s: f64 = row_j[..j].iter().map(|x| x * x).sum();
        let pivot = a[j * n + j] + shift - s;
        if !(pivot > 0.0 && pivot.is_finite()) {
            return None;
        }
        row_j[j] = pivot.sqrt();
    }
    Some(l)
}

/// Builds and factors the Gram system for `centers`.
pub fn gram(spec: &KernelSpec, centers: &PointSet) -> Result<GramSystem> {
    GramSystem::new(*spec, centers.clone())
}

/// A kernel expansion `x -> sum_j coeffs[j] * k(centers[j], x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    spec: KernelSpec,
    centers: PointSet,
    coeffs: Vec<f64>,
}

impl Interpolant {
    pub fn from_parts(spec: KernelSpec, centers: PointSet, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != centers.len() {
            return Err(Error::Input(format!(
                "{} coefficients for {} centers",
                coeffs.len(),
                centers.len()
            )));
        }
        Ok(Interpolant {
            spec,
            centers,
            coeffs,
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.centers.check_dim(x)?;
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.centers
            .iter()
            .zip(&self.coeffs)
            .map(|(c, w)| w * self.spec.eval_unchecked(c, x))
            .sum()
    }

    /// Values at every point of `points`.
    pub fn eval_all(&self, points: &PointSet) -> Result<Vec<f64>> {
        if points.dim() != self.centers.dim() {
            return Err(Error::Input(format!(
                "points have dimension {}, interpolant has {}",
                points.dim(),
                self.centers.dim()
            )));
        }
        Ok(points.iter().map(|x| self.eval_unchecked(x)).collect())
    }
}

/// The interpolant matching `values` at the system's centers.
pub fn fit_interpolant(system: &GramSystem, values: &[f64]) -> Result<Interpolant> {
    let coeffs = system.solve(values)?;
    Ok(Interpolant {
        spec: system.spec,
        centers: system.centers.clone(),
        coeffs,
    })
}

pub fn eval_interpolant(interp: &Interpolant, x: &[f64]) -> Result<f64> {
    interp.eval(x)
}
