//! Kernel approximations of Koopman operators for discrete dynamical systems.
//!
//! Given samples `xi_1, ..., xi_n` along an orbit of a map `f`, an observable
//! `g` is interpolated in the span of Matérn kernel sections centered at the
//! samples. Two approximations of the Koopman action `g -> g o f` follow:
//!
//! * the projection-based `(P g) o f`, which needs `f` in closed form, and
//! * the data-driven `P((P g) o f)`, which needs only the recorded pairs
//!   `(xi_i, f(xi_i))`.
//!
//! Both converge as the fill distance of the samples in the orbit's limiting
//! set shrinks. The [`experiments`] module measures that rate.
//!
//! ```
//! use koopman_rkhs::{gram, fit_interpolant, KernelSpec, MaternNu, PointSet};
//!
//! let spec = KernelSpec::matern(MaternNu::FiveHalves, 0.1).unwrap();
//! let centers = PointSet::from_flat(1, vec![0.0, 0.05, 0.1, 0.15]).unwrap();
//! let system = gram(&spec, &centers).unwrap();
//! let interp = fit_interpolant(&system, &[1.0, 2.0, 0.0, -1.0]).unwrap();
//! assert!((interp.eval(&[0.05]).unwrap() - 2.0).abs() < 1e-9);
//! ```

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod gram;
pub mod kernel;
pub mod koopman;
pub mod output;
pub mod points;

pub use dynamics::{
    generate_trajectory, golden_angle, holmes_step, paper_observable, rotation_step,
    system_trajectory, CoordinateSum, HolmesParams, RotationParams, System, Trajectory,
};
pub use error::{Error, Result};
pub use geometry::{closest_pair, dedup, fill_distance, separation_distance, DEFAULT_DEDUP_TOL};
pub use gram::{eval_interpolant, fit_interpolant, gram, GramSystem, Interpolant};
pub use kernel::{eval_kernel, KernelFamily, KernelSpec, MaternNu};
pub use koopman::{
    apply_projection_koopman, apply_true_koopman, eval_data_driven_koopman,
    fit_data_driven_koopman, sample_observable, DynamicsMap, FnMap, FnObservable, IdentityMap,
    KoopmanModel, Observable, SamplePairs,
};
pub use points::PointSet;
