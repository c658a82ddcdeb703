//! Linear data fitting under interval uncertainty by the maximum
//! compatibility method, with the interval variability (IVE) of the estimate.

pub mod conditioning;
pub mod error;
pub mod fixtures;
pub mod interval;
pub mod io;
pub mod lp;
pub mod maximize;
pub mod pipeline;
pub mod solution_set;
pub mod svg;
pub mod tol;
pub mod variability;

pub use error::{Error, Result};
pub use interval::{row_image, Interval, IntervalMatrix, IntervalVector, Matrix};
pub use tol::{contract_rhs, shift_rhs, tol, tol_subgradient, Endpoint, IntervalSystem, TolValue};
pub use maximize::{
    maximize_tol, maximize_tol_exact, maximize_tol_split, AscentMethod, FitMethod, FitResult, SolverConfig,
};
pub use conditioning::{cond2, min_cond, numerical_rank, singular_values, AnnealConfig, CondResult};
pub use solution_set::{
    check_boundedness, tss_hull, tss_hull_split, tss_member, tss_polygon_2d, BoundednessStatus, BoundednessVerdict,
};
pub use variability::{b_hat, ive, VariabilityReport};
pub use io::{read_dataset, ReportFile};
pub use pipeline::{fit_report, hull_report, plot2d, sweep, RunConfig};
