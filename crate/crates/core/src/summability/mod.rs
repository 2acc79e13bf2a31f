//! Cesàro summability of h-harmonic expansions at coordinate vectors.

pub mod bounds;
pub mod kernel;
pub mod sweep;

pub use kernel::{cesaro_kernel_axis, cesaro_mean_axis, AxisProjections, KernelRoute};
pub use sweep::{
    classify_growth, critical_sweep, lebesgue_constant, lebesgue_sweep, CriticalSweep, Growth, GrowthFit, SweepRecord,
    SweepSpec,
};
