//! Farey-graph walks, layered solid tori and Dehn filling.

pub mod fill;
pub mod slope;
pub mod walk;

pub use fill::{
    assemble_filled, check_fillable, fill, filled_triangulation, relabel_cycles, systems_agree, FillError,
    FillableReport, FilledSystem, Filling, Hexagon,
};
pub use slope::{intersection_number, Slope, SlopeError};
pub use walk::{farey_walk, letters, lst_ptolemy, FareyWalk, Letter, WalkError, WalkStep};

/// Filling slope of the twist knot with `2n + 1` crossings, `n ≥ 1`.
pub fn odd_twist_knot_slope(n: u32) -> Slope {
    Slope::new(1, n as i64).expect("non-zero")
}

/// Filling slope of the twist knot with `2n + 2` crossings, `n ≥ 1`.
pub fn even_twist_knot_slope(n: u32) -> Slope {
    Slope::new(-1, n as i64).expect("non-zero")
}
