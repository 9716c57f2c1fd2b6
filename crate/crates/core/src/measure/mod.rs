//! Net outer measures over cylinder and dyadic covers, their comparison,
//! and the dyadic covering-condition scanner.

pub mod compare;
pub mod cylinder;
pub mod dyadic;
pub mod oracle;
pub mod scan;
pub mod value;

pub use compare::{measure_comparison_check, ComparisonReport};
pub use cylinder::{
    cover_value, cylinder_net_measure, net_measure_below_prefix, witness_covers,
    CountWindowSet, CoverPrefix, NetMeasure,
};
pub use dyadic::{
    dyadic_outer_measure, dyadic_witness_covers, DyadicInterval, DyadicRestriction,
    MeasureBound,
};
pub use oracle::min_cover_exhaustive;
pub use scan::{falconer_condition_scan, CylinderScanRow, ScanReport, ScanRow};
pub use value::CoverValue;
