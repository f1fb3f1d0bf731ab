//! Pointwise error of both approximations on a rectangular grid in the plane.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::sweep::SweepProblem;
use crate::output::fmt_f64;

pub const FIELD_CSV_HEADER: &str = "x,y,err_proj,err_data";

/// Evenly spaced nodes; each axis is `(min, max, count)` with both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: (f64, f64, usize),
    pub y: (f64, f64, usize),
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi, count)) in [("x", self.x), ("y", self.y)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(format!(
                    "grid_{name} range [{lo}, {hi}] is invalid"
                )));
            }
            if count == 0 || (count == 1 && lo != hi) {
                return Err(Error::Config(format!(
                    "grid_{name} needs at least 2 nodes for a nonempty range, got {count}"
                )));
            }
        }
        Ok(())
    }

    fn axis((lo, hi, count): (f64, f64, usize)) -> Vec<f64> {
        if count == 1 {
            return vec![lo];
        }
        let step = (hi - lo) / (count - 1) as f64;
        (0..count)
            .map(|i| {
                if i + 1 == count {
                    hi
                } else {
                    lo + step * i as f64
                }
            })
            .collect()
    }

    /// Nodes with `x` varying slowest.
    pub fn nodes(&self) -> Vec<[f64; 2]> {
        let ys = GridSpec::axis(self.y);
        GridSpec::axis(self.x)
            .into_iter()
            .flat_map(|x| ys.iter().map(move |&y| [x, y]))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldNode {
    pub x: f64,
    pub y: f64,
    pub err_proj: f64,
    pub err_data: f64,
}

/// Fits both approximations on the first `n` pairs and evaluates their
/// pointwise errors at every grid node. Nodes where the map is undefined carry NaN.
pub fn error_field(problem: &SweepProblem, n: usize, grid: &GridSpec) -> Result<Vec<FieldNode>> {
    if problem.pool.inputs().dim() != 2 {
        return Err(Error::Config(format!(
            "error fields need a planar system, got dimension {}",
            problem.pool.inputs().dim()
        )));
    }
    grid.validate()?;
    let cell = problem.fit_cell(n)?;
    Ok(grid
        .nodes()
        .par_iter()
        .map(|&[x, y]| {
            let (err_proj, err_data) = cell.pointwise_errors(problem, &[x, y]);
            FieldNode {
                x,
                y,
                err_proj,
                err_data,
            }
        })
        .collect())
}

pub fn write_field_csv<W: Write>(nodes: &[FieldNode], mut out: W) -> Result<()> {
    writeln!(out, "{FIELD_CSV_HEADER}")?;
    for node in nodes {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(node.x),
            fmt_f64(node.y),
            fmt_f64(node.err_proj),
            fmt_f64(node.err_data)
        )?;
    }
    Ok(())
}
