//! Semi-analytical seismograms for a two-layer 2D poroelastic medium.
//!
//! A line source in the upper Biot half-space radiates fast and slow
//! compressional waves. Reflected and transmitted waves at the flat
//! interface are computed with the Cagniard-de Hoop method: each phase is
//! a real-time integral along a complex slowness contour, convolved with
//! the primitive of the source wavelet.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`);
//! configuration, output and the oracles in [`validation`] use `f64`.
//!
//! ```
//! use porocdh::material::reference_layers;
//! use porocdh::source::synthesize;
//! use porocdh::{Layer, Medium, Receiver, SourceMix, SourceWavelet, TimeGrid};
//!
//! # fn main() -> porocdh::Result<()> {
//! let (top, bottom) = reference_layers::<f64>();
//! let (top, bottom) = (Layer::from_material(&top)?, Layer::from_material(&bottom)?);
//! let medium = Medium::new(top, bottom, 500.0)?;
//! let mix = SourceMix::new(-1e10, -1e10, 0.0, &medium.top)?;
//! let rec = Receiver::new(400.0, -533.0)?;
//! let grid = TimeGrid::for_frequency(15.0)?;
//! let trace = synthesize(&medium, &mix, &rec, &SourceWavelet::gauss5(15.0)?, &grid, 2000)?;
//! assert_eq!(trace.total.len(), 601);
//! # Ok(())
//! # }
//! ```

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
// Test oracles are frozen at full precision.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod cagniard;
pub mod cli_io;
pub mod complexkernel;
pub mod error;
pub mod greens;
pub mod interface;
pub mod linalg;
pub mod material;
pub mod scalar;
pub mod source;
pub mod validation;

pub use cagniard::{ContourSample, PathSpec, Regime, Saddle};
pub use cli_io::{parse_config, run_campaign, RunConfig};
pub use complexkernel::{Approach, ComplexSlowness};
pub use error::{Error, Result};
pub use greens::{Medium, PhaseArrival, Receiver, Side, SourceMix, WavePhase};
pub use interface::{CoeffSet, IncidentKind, Mode};
pub use material::{LayerDerived, PoroelasticMaterial};
pub use scalar::Real;
pub use source::{SourceWavelet, TimeGrid, Trace};

pub type Material = PoroelasticMaterial<f64>;
pub type Layer = LayerDerived<f64>;
pub type Medium64 = Medium<f64>;
pub type Receiver64 = Receiver<f64>;
pub type Mix = SourceMix<f64>;
pub type Wavelet = SourceWavelet<f64>;
pub type Grid = TimeGrid<f64>;
pub type Trace64 = Trace<f64>;
pub type Path64 = PathSpec<f64>;
