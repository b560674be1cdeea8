//! Surfaces of truncated domains: signed-distance geometry, mollified
//! indicators, layer and surface measures with Richardson extrapolation, and
//! the boundary/volume identity checker.

mod domain;
mod layer;
mod mollifier;
mod stokes;

pub use domain::Domain;
pub use layer::{
    boundary_pairing, default_epsilon_schedule, layer_measure, surface_integral, surface_measure,
    BoundaryPairingReport, BoundarySelector, SurfaceEstimate, TraceRow,
};
pub use mollifier::{Mollifier, MollifierProfile};
pub use stokes::{stokes_check, IdentityRow, StokesReport};
