//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # golden-angle rotation, five sample counts
//! system = rotation
//! kernel_nu = 5/2
//! lengthscale = 0.1
//! sample_counts = 32, 64, 128, 256, 512
//! eval_tail = 1024
//! out_dir = out/rotation
//! ```
//!
//! Recognized keys: `system` (`holmes` | `rotation`), `alpha`, `gamma`,
//! `wrap_phase` (Holmes only), `omega`, `radius` (rotation only), `x0`,
//! `steps`, `kernel_nu`, `lengthscale`, `observable` (`sum` | `first` | `zero`),
//! `sample_counts`, `eval_tail`, `dedup_tol`, `min_fit_n`, `manifold_dim`, `s`,
//! `field_n`, `grid_x`, `grid_y` (each `min, max, count`), `out_dir`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{system_trajectory, HolmesParams, RotationParams, System, Trajectory};
use crate::error::{Error, Result};
use crate::experiments::field::GridSpec;
use crate::experiments::rate::SmoothnessParams;
use crate::experiments::sweep::SweepProblem;
use crate::geometry::DEFAULT_DEDUP_TOL;
use crate::kernel::{KernelSpec, MaternNu};
use crate::koopman::{Observable, SamplePairs};

/// Padding around the sample bounding box for the default error-field grid.
pub const DEFAULT_GRID_PAD: f64 = 1.0;
pub const DEFAULT_GRID_NODES: usize = 81;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservableKind {
    /// Sum of coordinates, `phi + v` on the bouncing-ball map.
    Sum,
    First,
    Zero,
}

impl ObservableKind {
    pub fn with_dim(self, dim: usize) -> SelectedObservable {
        SelectedObservable { kind: self, dim }
    }
}

impl FromStr for ObservableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(ObservableKind::Sum),
            "first" => Ok(ObservableKind::First),
            "zero" => Ok(ObservableKind::Zero),
            other => Err(Error::Config(format!(
                "unknown observable {other:?}; expected sum, first or zero"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SelectedObservable {
    kind: ObservableKind,
    dim: usize,
}

impl Observable for SelectedObservable {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self.kind {
            ObservableKind::Sum => x.iter().sum(),
            ObservableKind::First => x[0],
            ObservableKind::Zero => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub system: System,
    pub x0: Vec<f64>,
    /// Trajectory length override; must cover the samples and the evaluation tail.
    pub steps: Option<usize>,
    pub kernel: KernelSpec,
    pub observable: ObservableKind,
    pub sample_counts: Vec<usize>,
    pub eval_tail: usize,
    pub dedup_tol: f64,
    pub min_fit_n: usize,
    pub manifold_dim: u32,
    pub s: u32,
    /// Sample count for error fields; the largest sweep count when unset.
    pub field_n: Option<usize>,
    pub grid: Option<GridSpec>,
    pub out_dir: PathBuf,
}

impl SweepConfig {
    /// Defaults for one of the benchmark systems.
    pub fn defaults(system: System) -> Self {
        let (x0, field_n) = match system {
            System::Holmes(_) => (vec![0.1, 0.0], Some(768)),
            System::Rotation(p) => (p.start().to_vec(), None),
        };
        SweepConfig {
            system,
            x0,
            steps: None,
            kernel: KernelSpec::matern(MaternNu::FiveHalves, 0.1).expect("valid default kernel"),
            observable: ObservableKind::Sum,
            sample_counts: vec![32, 64, 128, 256, 512],
            eval_tail: 1024,
            dedup_tol: DEFAULT_DEDUP_TOL,
            min_fit_n: 32,
            manifold_dim: 1,
            s: 1,
            field_n,
            grid: None,
            out_dir: PathBuf::from("out"),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        SweepConfig::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = parse_pairs(text)?;
        let mut take = |key: &str| entries.remove(key);

        let system_name = take("system").unwrap_or_else(|| "rotation".to_string());
        let system = match system_name.as_str() {
            "holmes" => {
                let d = HolmesParams::default();
                let alpha = opt(take("alpha"), "alpha")?.unwrap_or(d.alpha());
                let gamma = opt(take("gamma"), "gamma")?.unwrap_or(d.gamma());
                let wrap = opt(take("wrap_phase"), "wrap_phase")?.unwrap_or(d.wrap_phase());
                System::Holmes(HolmesParams::new(alpha, gamma, wrap)?)
            }
            "rotation" => {
                let d = RotationParams::default();
                let omega = opt(take("omega"), "omega")?.unwrap_or(d.omega());
                let radius = opt(take("radius"), "radius")?.unwrap_or(d.radius());
                System::Rotation(RotationParams::new(omega, radius)?)
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown system {other:?}; expected holmes or rotation"
                )))
            }
        };
        let mut cfg = SweepConfig::defaults(system);

        if let Some(v) = take("x0") {
            cfg.x0 = list(&v, "x0")?;
        }
        cfg.steps = opt(take("steps"), "steps")?;
        let nu = match take("kernel_nu") {
            Some(v) => v.parse::<MaternNu>()?,
            None => cfg.kernel.nu(),
        };
        let lengthscale =
            opt(take("lengthscale"), "lengthscale")?.unwrap_or(cfg.kernel.lengthscale());
        cfg.kernel =
            KernelSpec::matern(nu, lengthscale).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(v) = take("observable") {
            cfg.observable = v.parse()?;
        }
        if let Some(v) = take("sample_counts") {
            cfg.sample_counts = list(&v, "sample_counts")?;
        }
        cfg.eval_tail = opt(take("eval_tail"), "eval_tail")?.unwrap_or(cfg.eval_tail);
        cfg.dedup_tol = opt(take("dedup_tol"), "dedup_tol")?.unwrap_or(cfg.dedup_tol);
        cfg.min_fit_n = opt(take("min_fit_n"), "min_fit_n")?.unwrap_or(cfg.min_fit_n);
        cfg.manifold_dim = opt(take("manifold_dim"), "manifold_dim")?.unwrap_or(cfg.manifold_dim);
        cfg.s = opt(take("s"), "s")?.unwrap_or(cfg.s);
        if let Some(v) = opt(take("field_n"), "field_n")? {
            cfg.field_n = Some(v);
        }
        match (take("grid_x"), take("grid_y")) {
            (None, None) => {}
            (Some(x), Some(y)) => {
                cfg.grid = Some(GridSpec {
                    x: axis(&x, "grid_x")?,
                    y: axis(&y, "grid_y")?,
                })
            }
            _ => {
                return Err(Error::Config(
                    "grid_x and grid_y must be given together".into(),
                ))
            }
        }
        if let Some(v) = take("out_dir") {
            cfg.out_dir = PathBuf::from(v);
        }

        if let Some(key) = entries.keys().next() {
            return Err(Error::Config(format!(
                "key {key:?} is not recognized for system {system_name}"
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let dim = 2;
        if self.x0.len() != dim {
            return Err(Error::Config(format!(
                "x0 needs {dim} coordinates, got {}",
                self.x0.len()
            )));
        }
        if self.sample_counts.is_empty()
            || self.sample_counts[0] == 0
            || self.sample_counts.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Config(format!(
                "sample_counts must be positive and strictly increasing, got {:?}",
                self.sample_counts
            )));
        }
        if self.eval_tail == 0 {
            return Err(Error::Config("eval_tail must be positive".into()));
        }
        if self.field_n == Some(0) {
            return Err(Error::Config("field_n must be positive".into()));
        }
        if self.dedup_tol.is_nan() || self.dedup_tol < 0.0 {
            return Err(Error::Config(format!(
                "dedup_tol must be >= 0, got {}",
                self.dedup_tol
            )));
        }
        if let Some(steps) = self.steps {
            let need = self.required_steps();
            if steps < need {
                return Err(Error::Config(format!(
                    "steps = {steps} is too short; samples and evaluation tail need {need}"
                )));
            }
        }
        if let Some(grid) = &self.grid {
            grid.validate()?;
        }
        self.smoothness().validate()
    }

    pub fn max_n(&self) -> usize {
        *self.sample_counts.last().expect("validated nonempty")
    }

    fn required_steps(&self) -> usize {
        (self.max_n() + self.eval_tail).max(self.field_n() + 1)
    }

    pub fn field_n(&self) -> usize {
        self.field_n.unwrap_or_else(|| self.max_n())
    }

    pub fn trajectory_steps(&self) -> usize {
        self.steps.unwrap_or_else(|| self.required_steps())
    }

    pub fn smoothness(&self) -> SmoothnessParams {
        SmoothnessParams {
            nu: self.kernel.nu(),
            p: 2,
            d: self.manifold_dim,
            s: self.s,
        }
    }

    pub fn trajectory(&self) -> Result<Trajectory> {
        system_trajectory(&self.system, &self.x0, self.trajectory_steps())
    }

    /// The sweep over `trajectory`: centers are its leading states, and the
    /// `eval_tail` states after the largest sample count serve as both the
    /// evaluation set and the fill-distance reference.
    pub fn problem(&self, trajectory: &Trajectory) -> Result<SweepProblem> {
        let states = trajectory.states();
        let max_n = self.max_n();
        if states.len() < max_n + self.eval_tail {
            return Err(Error::Config(format!(
                "trajectory of {} states cannot hold {max_n} samples and a {}-point tail",
                states.len(),
                self.eval_tail
            )));
        }
        let pool = SamplePairs::from_trajectory(states, states.len() - 1)?;
        let tail = states.slice(max_n..max_n + self.eval_tail);
        Ok(SweepProblem {
            kernel: self.kernel,
            map: Box::new(self.system),
            observable: Box::new(self.observable.with_dim(states.dim())),
            pool,
            sample_counts: self.sample_counts.clone(),
            eval_set: tail.clone(),
            reference: tail,
            dedup_tol: self.dedup_tol,
            min_fit_n: self.min_fit_n,
            smoothness: Some(self.smoothness()),
        })
    }

    /// The configured grid, or the bounding box of the first `field_n` states
    /// padded by [`DEFAULT_GRID_PAD`] on every side.
    pub fn grid_for(&self, trajectory: &Trajectory) -> GridSpec {
        if let Some(g) = self.grid {
            return g;
        }
        let n = self.field_n().min(trajectory.len());
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for x in trajectory.states().iter().take(n) {
            for k in 0..2 {
                lo[k] = lo[k].min(x[k]);
                hi[k] = hi[k].max(x[k]);
            }
        }
        GridSpec {
            x: (
                lo[0] - DEFAULT_GRID_PAD,
                hi[0] + DEFAULT_GRID_PAD,
                DEFAULT_GRID_NODES,
            ),
            y: (
                lo[1] - DEFAULT_GRID_PAD,
                hi[1] + DEFAULT_GRID_PAD,
                DEFAULT_GRID_NODES,
            ),
        }
    }
}

fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {}: expected `key = value`, got {raw:?}",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
        }
        if out
            .insert(key.to_string(), value.trim().to_string())
            .is_some()
        {
            return Err(Error::Config(format!(
                "line {}: duplicate key {key:?}",
                lineno + 1
            )));
        }
    }
    Ok(out)
}

fn scalar<T: FromStr>(v: &str, key: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} = {v:?}")))
}

fn opt<T: FromStr>(v: Option<String>, key: &str) -> Result<Option<T>> {
    v.map(|v| scalar(&v, key)).transpose()
}

fn list<T: FromStr>(v: &str, key: &str) -> Result<Vec<T>> {
    v.split(',').map(|item| scalar(item, key)).collect()
}

fn axis(v: &str, key: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = v.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "{key} expects `min, max, count`, got {v:?}"
        )));
    }
    Ok((
        scalar(parts[0], key)?,
        scalar(parts[1], key)?,
        scalar(parts[2], key)?,
    ))
}
