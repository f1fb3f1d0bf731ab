//! Benchmark maps and trajectory generation.

use std::f64::consts::TAU;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::koopman::{DynamicsMap, Observable};
use crate::output::fmt_f64;
use crate::points::PointSet;

/// Parameters of the bouncing-ball impact map on `(phase, velocity)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolmesParams {
    alpha: f64,
    gamma: f64,
    wrap_phase: bool,
}

impl HolmesParams {
    pub fn new(alpha: f64, gamma: f64, wrap_phase: bool) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Config(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Config(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        Ok(HolmesParams {
            alpha,
            gamma,
            wrap_phase,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn wrap_phase(&self) -> bool {
        self.wrap_phase
    }

    /// Same map with the forcing term switched off. Only for checks; `new` rejects `gamma = 0`.
    #[doc(hidden)]
    pub fn unforced(alpha: f64, wrap_phase: bool) -> Self {
        HolmesParams {
            alpha,
            gamma: 0.0,
            wrap_phase,
        }
    }
}

impl Default for HolmesParams {
    fn default() -> Self {
        HolmesParams {
            alpha: 1.0,
            gamma: 0.45,
            wrap_phase: true,
        }
    }
}

/// One impact: `(phi, v) -> (phi + v, alpha v - gamma cos(phi + v))`, with the
/// new phase reduced into `[0, 2 pi)` when wrapping is on.
pub fn holmes_step(params: &HolmesParams, state: [f64; 2]) -> Result<[f64; 2]> {
    let [phi, v] = state;
    if !(phi.is_finite() && v.is_finite()) {
        return Err(Error::Input(format!("non-finite state ({phi}, {v})")));
    }
    let next_phase = phi + v;
    let next_v = params.alpha * v - params.gamma * next_phase.cos();
    let next_phase = if params.wrap_phase {
        wrap_tau(next_phase)
    } else {
        next_phase
    };
    Ok([next_phase, next_v])
}

fn wrap_tau(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl DynamicsMap for HolmesParams {
    fn dim(&self) -> usize {
        2
    }

    fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        let state: [f64; 2] = x
            .try_into()
            .map_err(|_| Error::Input(format!("holmes state must be 2-D, got {}", x.len())))?;
        Ok(holmes_step(self, state)?.to_vec())
    }
}

/// Rigid rotation of a circle about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationParams {
    omega: f64,
    radius: f64,
}

/// `2 pi (sqrt(5) - 1) / 2`: orbits equidistribute on the circle.
pub fn golden_angle() -> f64 {
    TAU * (5f64.sqrt() - 1.0) / 2.0
}

impl RotationParams {
    pub fn new(omega: f64, radius: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::Config(format!("omega must be finite, got {omega}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Config(format!(
                "radius must be positive, got {radius}"
            )));
        }
        Ok(RotationParams { omega, radius })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// The point at angle zero, `(radius, 0)`.
    pub fn start(&self) -> [f64; 2] {
        [self.radius, 0.0]
    }
}

impl Default for RotationParams {
    fn default() -> Self {
        RotationParams {
            omega: golden_angle(),
            radius: 1.0,
        }
    }
}

/// Rotates by `omega` and rescales onto the exact radius so the orbit does not drift.
/// Off-circle states are radially projected onto the circle as part of the step.
pub fn rotation_step(params: &RotationParams, state: [f64; 2]) -> Result<[f64; 2]> {
    let [x, y] = state;
    let norm = x.hypot(y);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Input(format!(
            "rotation state ({x}, {y}) has no direction"
        )));
    }
    let (s, c) = params.omega.sin_cos();
    let rx = c * x - s * y;
    let ry = s * x + c * y;
    let scale = params.radius / rx.hypot(ry);
    Ok([rx * scale, ry * scale])
}

impl DynamicsMap for RotationParams {
    fn dim(&self) -> usize {
        2
    }

    fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        let state: [f64; 2] = x
            .try_into()
            .map_err(|_| Error::Input(format!("rotation state must be 2-D, got {}", x.len())))?;
        Ok(rotation_step(self, state)?.to_vec())
    }
}

/// The benchmark systems, with their parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "lowercase")]
pub enum System {
    Holmes(HolmesParams),
    Rotation(RotationParams),
}

impl System {
    pub fn name(&self) -> &'static str {
        match self {
            System::Holmes(_) => "holmes",
            System::Rotation(_) => "rotation",
        }
    }

    pub fn as_map(&self) -> &dyn DynamicsMap {
        match self {
            System::Holmes(p) => p,
            System::Rotation(p) => p,
        }
    }
}

impl DynamicsMap for System {
    fn dim(&self) -> usize {
        self.as_map().dim()
    }

    fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.as_map().step(x)
    }
}

/// An orbit `x0, f(x0), f(f(x0)), ...` with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: PointSet,
    map_id: String,
}

impl Trajectory {
    pub fn states(&self) -> &PointSet {
        &self.states
    }

    pub fn map_id(&self) -> &str {
        &self.map_id
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// CSV with header `step,x1,...,xp` and one row per state.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let dim = self.states.dim();
        let header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
        writeln!(out, "step,{}", header.join(","))?;
        for (k, x) in self.states.iter().enumerate() {
            write!(out, "{k}")?;
            for v in x {
                write!(out, ",{}", fmt_f64(*v))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Iterates `step` from `x0` for `n_steps` steps, returning `n_steps + 1` states.
pub fn generate_trajectory(
    step: &dyn DynamicsMap,
    map_id: impl Into<String>,
    x0: &[f64],
    n_steps: usize,
) -> Result<Trajectory> {
    if n_steps == 0 {
        return Err(Error::Input("trajectory needs at least one step".into()));
    }
    if x0.len() != step.dim() {
        return Err(Error::Input(format!(
            "initial state has dimension {}, map has {}",
            x0.len(),
            step.dim()
        )));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { step: 0 });
    }
    let mut states = PointSet::empty(x0.len())?;
    states.push(x0)?;
    let mut current = x0.to_vec();
    for k in 1..=n_steps {
        let next = step.step(&current)?;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: k });
        }
        states.push(&next)?;
        current = next;
    }
    Ok(Trajectory {
        states,
        map_id: map_id.into(),
    })
}

/// Trajectory of one of the benchmark systems, tagged with its parameters.
pub fn system_trajectory(system: &System, x0: &[f64], n_steps: usize) -> Result<Trajectory> {
    let id = match system {
        System::Holmes(p) => format!(
            "holmes(alpha={},gamma={},wrap_phase={})",
            p.alpha, p.gamma, p.wrap_phase
        ),
        System::Rotation(p) => format!("rotation(omega={},radius={})", p.omega, p.radius),
    };
    generate_trajectory(system, id, x0, n_steps)
}

/// `g(phi, v) = phi + v`.
pub fn paper_observable(state: [f64; 2]) -> f64 {
    state[0] + state[1]
}

/// Sum of coordinates; on 2-D states it coincides with [`paper_observable`].
#[derive(Debug, Clone, Copy)]
pub struct CoordinateSum {
    pub dim: usize,
}

impl Observable for CoordinateSum {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        x.iter().sum()
    }
}
