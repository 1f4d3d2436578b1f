//! Electromagnetic model of pinching-antenna systems (PASS) on a 2D
//! dielectric slab waveguide.
//!
//! The chain goes: solve the TE₀ mode of each slab ([`slab`]), get the
//! coupling coefficient and coupled powers of the symmetric PA pair
//! ([`coupling`]), radiate the coupled field into a far-field pattern and
//! directivity ([`farfield`]), map geometry and pattern to a channel
//! coefficient and spectral efficiency ([`link`]), and run Monte-Carlo
//! placement studies ([`sim`]). [`scenario`] and [`export`] hold the CLI's
//! configuration and file formats.

pub mod constants;
pub mod coupling;
pub mod error;
pub mod export;
pub mod farfield;
pub mod link;
pub mod numerics;
pub mod scenario;
pub mod sim;
pub mod slab;

pub use coupling::{
    coupled_powers, single_pa_coupled_power, CouplingSolution, PaSide, PassConfiguration,
};
pub use error::{ErrorCategory, PassError, Result};
pub use farfield::{
    directivity, normalized_power_pattern, oracle_radiation_integral, pa_pattern, total_pattern,
    ApertureBounds, FarFieldPattern, PatternCombination,
};
pub use link::{channel, spectral_efficiency, ChannelCoefficient, LinkScenario, RateLogBase};
pub use scenario::Scenario;
pub use sim::{run_plan, PlacementModel, PlacementStudy, Scheme, SimulationPlan, SimulationResult};
pub use slab::{width_for_v, ModeSolution, SlabGeometry};
