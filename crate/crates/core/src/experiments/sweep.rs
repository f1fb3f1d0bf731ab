//! Convergence sweeps over growing sample sets.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::rate::{theoretical_rate, SmoothnessParams};
use crate::geometry::fill_distance;
use crate::gram::{fit_interpolant, GramSystem, Interpolant};
use crate::kernel::KernelSpec;
use crate::koopman::{
    fit_data_driven_koopman, sample_observable, DynamicsMap, KoopmanModel, Observable, SamplePairs,
};
use crate::output::fmt_f64;
use crate::points::PointSet;

/// Header of the sweep CSV.
pub const SWEEP_CSV_HEADER: &str = "n,h,err_proj,err_data,jitter_used";

/// Fewest records a slope fit will accept.
pub const MIN_SLOPE_RECORDS: usize = 3;

/// Largest absolute deviation between two evaluators over a finite set.
///
/// A NaN deviation anywhere makes the result NaN.
pub fn sup_error<A, O>(approx: A, oracle: O, eval_set: &PointSet) -> f64
where
    A: Fn(&[f64]) -> f64,
    O: Fn(&[f64]) -> f64,
{
    max_abs_diff(eval_set.iter().map(|x| approx(x) - oracle(x)))
}

fn max_abs_diff(diffs: impl Iterator<Item = f64>) -> f64 {
    let mut worst = 0.0f64;
    for d in diffs {
        if d.is_nan() {
            return f64::NAN;
        }
        worst = worst.max(d.abs());
    }
    worst
}

/// Everything a sweep needs, independent of where the data came from.
pub struct SweepProblem {
    pub kernel: KernelSpec,
    /// The true map. Used by the projection-based approximation and the oracle only.
    pub map: Box<dyn DynamicsMap>,
    pub observable: Box<dyn Observable>,
    /// Recorded pairs; a cell with sample count `n` uses the first `n`.
    pub pool: SamplePairs,
    pub sample_counts: Vec<usize>,
    pub eval_set: PointSet,
    /// Stand-in for the limiting set when computing fill distances.
    pub reference: PointSet,
    pub dedup_tol: f64,
    /// Cells with smaller `n` are left out of slope fits.
    pub min_fit_n: usize,
    pub smoothness: Option<SmoothnessParams>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub n: usize,
    /// Centers left after deduplication.
    pub centers: usize,
    pub h: f64,
    pub err_proj: f64,
    pub err_data: f64,
    pub jitter_used: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedCell {
    pub n: usize,
    pub diagnostic: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Proj,
    Data,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub slope_proj: f64,
    pub slope_data: f64,
    pub theoretical_bound: Option<f64>,
    /// Sample counts of the records entering the fits.
    pub records_used: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    /// One entry per sample count, in increasing `n`.
    pub cells: Vec<std::result::Result<ConvergenceRecord, FailedCell>>,
    pub report: Option<RateReport>,
    /// Why no report could be produced, if so.
    pub report_error: Option<String>,
}

impl SweepOutcome {
    pub fn records(&self) -> impl Iterator<Item = &ConvergenceRecord> {
        self.cells.iter().filter_map(|c| c.as_ref().ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = &FailedCell> {
        self.cells.iter().filter_map(|c| c.as_ref().err())
    }

    pub fn all_failed(&self) -> bool {
        self.cells.iter().all(|c| c.is_err())
    }

    /// The sweep CSV. Failed cells appear with NaN in every measured column.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{SWEEP_CSV_HEADER}")?;
        for cell in &self.cells {
            match cell {
                Ok(r) => writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.n,
                    fmt_f64(r.h),
                    fmt_f64(r.err_proj),
                    fmt_f64(r.err_data),
                    fmt_f64(r.jitter_used)
                )?,
                Err(f) => writeln!(out, "{},NaN,NaN,NaN,NaN", f.n)?,
            }
        }
        Ok(())
    }
}

/// Least-squares slope of `log(err)` against `log(h)`.
///
/// Records with a zero (or non-finite) error or fill distance are skipped.
pub fn fit_loglog_slope(records: &[ConvergenceRecord], which: ErrorKind) -> Result<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| {
            let e = match which {
                ErrorKind::Proj => r.err_proj,
                ErrorKind::Data => r.err_data,
            };
            (r.h, e)
        })
        .filter(|&(h, e)| h > 0.0 && e > 0.0 && h.is_finite() && e.is_finite())
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < MIN_SLOPE_RECORDS {
        return Err(Error::InsufficientData {
            usable: pts.len(),
            required: MIN_SLOPE_RECORDS,
        });
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData {
            usable: 1,
            required: MIN_SLOPE_RECORDS,
        });
    }
    Ok(sxy / sxx)
}

/// Both approximations fitted on the first `n` pairs of a problem.
pub struct FittedCell {
    pub n: usize,
    pub system: GramSystem,
    pub projection: Interpolant,
    pub data_driven: KoopmanModel,
}

impl FittedCell {
    /// Pointwise `(|U_f^n g - g o f|, |data-driven - g o f|)`.
    ///
    /// Points where the map is undefined get NaN.
    pub fn pointwise_errors(&self, problem: &SweepProblem, x: &[f64]) -> (f64, f64) {
        let Ok(fx) = problem.map.step(x) else {
            return (f64::NAN, f64::NAN);
        };
        let truth = problem.observable.eval(&fx);
        let proj = self.projection.eval_unchecked(&fx);
        let data = self.data_driven.model().eval_unchecked(x);
        ((proj - truth).abs(), (data - truth).abs())
    }
}

impl SweepProblem {
    fn validate(&self) -> Result<()> {
        let dim = self.pool.inputs().dim();
        let dims = [
            ("map", self.map.dim()),
            ("observable", self.observable.dim()),
            ("evaluation set", self.eval_set.dim()),
            ("reference set", self.reference.dim()),
        ];
        for (what, d) in dims {
            if d != dim {
                return Err(Error::Config(format!(
                    "{what} has dimension {d}, samples have {dim}"
                )));
            }
        }
        if self.sample_counts.is_empty() {
            return Err(Error::Config("no sample counts given".into()));
        }
        if self.sample_counts[0] == 0 || self.sample_counts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "sample counts must be positive and strictly increasing, got {:?}",
                self.sample_counts
            )));
        }
        let max_n = *self.sample_counts.last().unwrap();
        if max_n > self.pool.len() {
            return Err(Error::Config(format!(
                "largest sample count {max_n} exceeds the {} recorded pairs",
                self.pool.len()
            )));
        }
        if self.eval_set.is_empty() || self.reference.is_empty() {
            return Err(Error::Config(
                "evaluation and reference sets must be nonempty".into(),
            ));
        }
        Ok(())
    }

    /// Fits the Gram system and both approximations on the first `n` pairs.
    pub fn fit_cell(&self, n: usize) -> Result<FittedCell> {
        if n == 0 || n > self.pool.len() {
            return Err(Error::Input(format!(
                "sample count {n} outside 1..={}",
                self.pool.len()
            )));
        }
        let pairs = SamplePairs::new(
            self.pool.inputs().slice(0..n),
            self.pool.outputs().slice(0..n),
        )?
        .dedup(self.dedup_tol);
        let system = GramSystem::new(self.kernel, pairs.inputs().clone())?;
        let g_values = sample_observable(&*self.observable, pairs.inputs())?;
        let projection = fit_interpolant(&system, &g_values)?;
        let data_driven = fit_data_driven_koopman(&system, &pairs, &g_values)?;
        Ok(FittedCell {
            n,
            system,
            projection,
            data_driven,
        })
    }

    fn run_cell(&self, n: usize, truth: &[Option<(Vec<f64>, f64)>]) -> Result<ConvergenceRecord> {
        let cell = self.fit_cell(n)?;
        let h = fill_distance(cell.system.centers(), &self.reference)?;
        let mut proj_diffs = Vec::with_capacity(truth.len());
        let mut data_diffs = Vec::with_capacity(truth.len());
        for (x, t) in self.eval_set.iter().zip(truth) {
            let (fx, gfx) = t
                .as_ref()
                .ok_or_else(|| Error::Input(format!("map undefined at evaluation point {x:?}")))?;
            proj_diffs.push(cell.projection.eval_unchecked(fx) - gfx);
            data_diffs.push(cell.data_driven.model().eval_unchecked(x) - gfx);
        }
        Ok(ConvergenceRecord {
            n,
            centers: cell.system.len(),
            h,
            err_proj: max_abs_diff(proj_diffs.into_iter()),
            err_data: max_abs_diff(data_diffs.into_iter()),
            jitter_used: cell.system.jitter(),
        })
    }
}

/// Runs every cell (in parallel), then fits slopes over cells with `n >= min_fit_n`.
///
/// Failed cells are reported in place and excluded from the fits.
pub fn run_convergence_sweep(problem: &SweepProblem) -> Result<SweepOutcome> {
    problem.validate()?;
    if let Some(sp) = &problem.smoothness {
        sp.validate()?;
    }
    // f(x) and g(f(x)) on the evaluation set are shared by every cell.
    let truth: Vec<Option<(Vec<f64>, f64)>> = problem
        .eval_set
        .iter()
        .map(|x| {
            problem.map.step(x).ok().map(|fx| {
                let g = problem.observable.eval(&fx);
                (fx, g)
            })
        })
        .collect();

    let cells: Vec<_> = problem
        .sample_counts
        .par_iter()
        .map(|&n| {
            problem.run_cell(n, &truth).map_err(|e| FailedCell {
                n,
                diagnostic: e.to_string(),
            })
        })
        .collect();

    let fit_records: Vec<ConvergenceRecord> = cells
        .iter()
        .filter_map(|c| c.as_ref().ok())
        .filter(|r| r.n >= problem.min_fit_n)
        .copied()
        .collect();
    let theoretical_bound = problem
        .smoothness
        .as_ref()
        .map(theoretical_rate)
        .transpose()?;
    let slopes = fit_loglog_slope(&fit_records, ErrorKind::Proj)
        .and_then(|p| Ok((p, fit_loglog_slope(&fit_records, ErrorKind::Data)?)));
    let (report, report_error) = match slopes {
        Ok((slope_proj, slope_data)) => (
            Some(RateReport {
                slope_proj,
                slope_data,
                theoretical_bound,
                records_used: fit_records.iter().map(|r| r.n).collect(),
            }),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(SweepOutcome {
        cells,
        report,
        report_error,
    })
}
