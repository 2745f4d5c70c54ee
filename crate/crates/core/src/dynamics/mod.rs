//! The averaged resonance-zone flow: equilibria, limit cycles, separatrix
//! splitting, portrait taxonomy, and comparison runs of the full system.

pub mod cycles;
pub mod equilibria;
pub mod flow;
pub mod full;
pub mod melnikov;
pub mod model;
pub mod portrait;

pub use cycles::{find_limit_cycles, CycleLocation, LimitCycle};
pub use equilibria::{
    classify, find_equilibria, fundamental_equilibria, Equilibrium, EquilibriumKind,
};
pub use flow::{sample_path, AVERAGED_TOL};
pub use full::{
    integrate_full_system, phase_point_of, trace_full_system, FullOptions, FullSample, FullTrace,
};
pub use melnikov::{
    leading_saddle, melnikov_delta1, separatrix_gap, split_kind, LoopGap, MelnikovResult,
    SplitKind, DELTA1_TOL, SEPARATRIX_OFFSET,
};
pub use model::{averaged_rhs, AveragedModel, ModelForm};
pub use portrait::{
    classify_portrait, scan_trajectories, trace_separatrices, BranchKind, Escape, FigureTag,
    Passability, PhasePortrait, PortraitOptions, ScanCounts, ScanTrajectory, Separatrix, Taxonomy,
    GAP_TOL,
};
