//! The Koopman action `g -> g o f` and its two kernel approximations.
//!
//! * Projection-based: `U_f^n g = (P g) o f`, which needs the map `f` itself.
//! * Data-driven: `P((P g) o f)`, built only from recorded pairs `(xi_i, f(xi_i))`.
//!
//! Here `P` is interpolation on the sample inputs. Both fits of the data-driven
//! operator share the one Gram factorization over those inputs.
//!
//! Error guarantees for the data-driven operator assume the pullback of the
//! native space under `f` stays inside it. That cannot be checked numerically,
//! so nothing here tries.

use crate::error::{Error, Result};
use crate::geometry::dedup_indices;
use crate::gram::{fit_interpolant, GramSystem, Interpolant};
use crate::points::PointSet;

/// A real-valued function of the state.
pub trait Observable: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
}

/// A deterministic, dimension-preserving state map.
pub trait DynamicsMap: Send + Sync {
    fn dim(&self) -> usize;
    fn step(&self, x: &[f64]) -> Result<Vec<f64>>;
}

impl<T: Observable + ?Sized> Observable for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

impl<T: DynamicsMap + ?Sized> DynamicsMap for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).step(x)
    }
}

impl<T: Observable + ?Sized> Observable for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

impl<T: DynamicsMap + ?Sized> DynamicsMap for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).step(x)
    }
}

/// Wraps a closure as an [`Observable`].
#[derive(Clone)]
pub struct FnObservable<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FnObservable<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnObservable { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> Observable for FnObservable<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// Wraps a closure as a [`DynamicsMap`].
#[derive(Clone)]
pub struct FnMap<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> Vec<f64> + Send + Sync> FnMap<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnMap { dim, f }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64> + Send + Sync> DynamicsMap for FnMap<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok((self.f)(x))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityMap {
    pub dim: usize,
}

impl DynamicsMap for IdentityMap {
    fn dim(&self) -> usize {
        self.dim
    }
    fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(x.to_vec())
    }
}

fn check_dim(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Input(format!(
            "{what} has dimension {got}, expected {expected}"
        )));
    }
    Ok(())
}

/// Input/output pairs `(xi_i, y_i = f(xi_i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePairs {
    inputs: PointSet,
    outputs: PointSet,
}

impl SamplePairs {
    pub fn new(inputs: PointSet, outputs: PointSet) -> Result<Self> {
        if inputs.len() != outputs.len() {
            return Err(Error::Input(format!(
                "{} inputs but {} outputs",
                inputs.len(),
                outputs.len()
            )));
        }
        check_dim("outputs", inputs.dim(), outputs.dim())?;
        Ok(SamplePairs { inputs, outputs })
    }

    /// Consecutive states of a trajectory: inputs `states[0..n]`, outputs `states[1..=n]`.
    pub fn from_trajectory(states: &PointSet, n: usize) -> Result<Self> {
        if n == 0 || n >= states.len() {
            return Err(Error::Input(format!(
                "need 1 <= n < {} consecutive pairs, got n = {n}",
                states.len()
            )));
        }
        SamplePairs::new(states.slice(0..n), states.slice(1..n + 1))
    }

    /// Tabulates `map` on `inputs`.
    pub fn from_map(inputs: PointSet, map: &dyn DynamicsMap) -> Result<Self> {
        check_dim("inputs", map.dim(), inputs.dim())?;
        let mut outputs = PointSet::empty(inputs.dim())?;
        for x in inputs.iter() {
            outputs.push(&map.step(x)?)?;
        }
        SamplePairs::new(inputs, outputs)
    }

    /// Drops pairs whose input lies within `tol` of an earlier kept input.
    pub fn dedup(&self, tol: f64) -> SamplePairs {
        let keep = dedup_indices(&self.inputs, tol);
        SamplePairs {
            inputs: self.inputs.select(&keep),
            outputs: self.outputs.select(&keep),
        }
    }

    pub fn inputs(&self) -> &PointSet {
        &self.inputs
    }

    pub fn outputs(&self) -> &PointSet {
        &self.outputs
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

/// `g(f(x))`, the exact Koopman action. Used as the oracle for error measurements.
pub fn apply_true_koopman(g: &dyn Observable, f: &dyn DynamicsMap, x: &[f64]) -> Result<f64> {
    check_dim("state", f.dim(), x.len())?;
    check_dim("observable", f.dim(), g.dim())?;
    Ok(g.eval(&f.step(x)?))
}

/// `(P g)(f(x))` where `g_interp = P g` has already been fitted.
pub fn apply_projection_koopman(
    g_interp: &Interpolant,
    f: &dyn DynamicsMap,
    x: &[f64],
) -> Result<f64> {
    check_dim("state", f.dim(), x.len())?;
    g_interp.eval(&f.step(x)?)
}

/// Values of `g` at every point of `points`.
pub fn sample_observable(g: &dyn Observable, points: &PointSet) -> Result<Vec<f64>> {
    check_dim("observable", points.dim(), g.dim())?;
    Ok(points.iter().map(|x| g.eval(x)).collect())
}

/// The data-driven operator applied to one observable.
#[derive(Debug, Clone)]
pub struct KoopmanModel {
    model: Interpolant,
    pairs: SamplePairs,
    g_values: Vec<f64>,
    composite: Vec<f64>,
    jitter: f64,
}

impl KoopmanModel {
    /// The interpolant representing the approximated `g o f`.
    pub fn model(&self) -> &Interpolant {
        &self.model
    }

    pub fn pairs(&self) -> &SamplePairs {
        &self.pairs
    }

    pub fn g_values(&self) -> &[f64] {
        &self.g_values
    }

    /// `(P g)(y_i)` at every output, the values the outer fit interpolates.
    pub fn composite_values(&self) -> &[f64] {
        &self.composite
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.model.eval(x)
    }
}

/// Fits the data-driven operator from recorded pairs.
///
/// `system` must be the Gram system over `pairs.inputs()`. The map itself is
/// never consulted: first `P g` is fitted to `g_values`, then evaluated at each
/// recorded output, and those values are interpolated again on the inputs.
pub fn fit_data_driven_koopman(
    system: &GramSystem,
    pairs: &SamplePairs,
    g_values: &[f64],
) -> Result<KoopmanModel> {
    if system.centers() != pairs.inputs() {
        return Err(Error::Input(
            "gram system centers differ from the sample inputs".into(),
        ));
    }
    if g_values.len() != pairs.len() {
        return Err(Error::Input(format!(
            "{} observable values for {} sample pairs",
            g_values.len(),
            pairs.len()
        )));
    }
    let inner = fit_interpolant(system, g_values)?;
    let composite = inner.eval_all(pairs.outputs())?;
    let model = fit_interpolant(system, &composite)?;
    Ok(KoopmanModel {
        model,
        pairs: pairs.clone(),
        g_values: g_values.to_vec(),
        composite,
        jitter: system.jitter(),
    })
}

pub fn eval_data_driven_koopman(model: &KoopmanModel, x: &[f64]) -> Result<f64> {
    model.eval(x)
}
