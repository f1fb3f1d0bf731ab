//! Sample-set geometry: fill distance, separation distance, deduplication.

use crate::error::{Error, Result};
use crate::points::{euclidean, PointSet};

/// Default tolerance used to deduplicate trajectory samples before Gram assembly.
pub const DEFAULT_DEDUP_TOL: f64 = 1e-9;

/// Largest distance from a reference point to its nearest sample.
///
/// The reference set stands in for the region the samples are meant to cover.
pub fn fill_distance(samples: &PointSet, reference: &PointSet) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Input("fill distance of an empty sample set".into()));
    }
    if reference.is_empty() {
        return Err(Error::Input(
            "fill distance over an empty reference set".into(),
        ));
    }
    if samples.dim() != reference.dim() {
        return Err(Error::Input(format!(
            "samples have dimension {}, reference has {}",
            samples.dim(),
            reference.dim()
        )));
    }
    let mut fill = 0.0f64;
    for x in reference.iter() {
        let mut nearest = f64::INFINITY;
        for xi in samples.iter() {
            let d = euclidean(x, xi);
            if d < nearest {
                nearest = d;
                // This reference point cannot raise the maximum any more.
                if nearest <= fill {
                    break;
                }
            }
        }
        if nearest > fill {
            fill = nearest;
        }
    }
    Ok(fill)
}

/// The closest pair of distinct points as `(i, j, distance)` with `i < j`.
/// `None` for fewer than two points.
pub fn closest_pair(points: &PointSet) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = euclidean(points.point(i), points.point(j));
            if best.is_none_or(|(_, _, b)| d < b) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

/// Smallest pairwise distance; infinite for fewer than two points.
pub fn separation_distance(points: &PointSet) -> f64 {
    closest_pair(points).map_or(f64::INFINITY, |(_, _, d)| d)
}

/// Indices kept by a greedy pass in original order: a point is dropped iff it
/// lies strictly closer than `tol` to an earlier kept point. Kept points are
/// therefore pairwise at least `tol` apart, and `tol = 0` keeps everything.
pub fn dedup_indices(points: &PointSet, tol: f64) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        let p = points.point(i);
        if !kept.iter().any(|&k| euclidean(points.point(k), p) < tol) {
            kept.push(i);
        }
    }
    kept
}

pub fn dedup(points: &PointSet, tol: f64) -> PointSet {
    points.select(&dedup_indices(points, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_flat(1, xs.to_vec()).unwrap()
    }

    #[test]
    fn fill_distance_of_endpoints() {
        let reference = line(&[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(fill_distance(&line(&[0.0, 1.0]), &reference).unwrap(), 0.5);
        assert_eq!(fill_distance(&reference, &reference).unwrap(), 0.0);
    }

    #[test]
    fn fill_distance_errors() {
        let empty = PointSet::empty(1).unwrap();
        let one = line(&[0.0]);
        assert!(fill_distance(&empty, &one).is_err());
        assert!(fill_distance(&one, &empty).is_err());
        let planar = PointSet::from_flat(2, vec![0.0, 0.0]).unwrap();
        assert!(fill_distance(&one, &planar).is_err());
    }

    #[test]
    fn dedup_identity_at_zero_tol() {
        let pts = line(&[0.0, 1.0, 2.0]);
        assert_eq!(dedup(&pts, 0.0), pts);
    }

    #[test]
    fn dedup_duplicate() {
        let pts = PointSet::from_flat(2, vec![1.0, 2.0, 1.0, 2.0]).unwrap();
        assert_eq!(dedup(&pts, 1e-9).len(), 1);
    }

    #[test]
    fn dedup_greedy_collinear() {
        // Spacing tol/2: the middle point is within tol of the first, the third is not.
        let tol = 0.2;
        let pts = line(&[0.0, 0.1, 0.2]);
        assert_eq!(dedup_indices(&pts, tol), vec![0, 2]);
    }

    #[test]
    fn closest_pair_found() {
        let pts = line(&[0.0, 3.0, 1.0, 3.5]);
        let (i, j, d) = closest_pair(&pts).unwrap();
        assert_eq!((i, j), (1, 3));
        assert_eq!(d, 0.5);
        assert_eq!(separation_distance(&line(&[1.0])), f64::INFINITY);
    }
}
