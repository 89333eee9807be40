//! Exact-arithmetic toolkit for concrete curves and arcs on compact
//! orientable surfaces.

pub mod complex;
pub mod curve;
pub mod error;
pub mod flows;
pub mod geom;
pub mod kernel;
pub mod moves;
pub mod perturb;
pub mod samples;
pub mod surface;
pub mod topology;

pub use curve::{validate_curve, CurveKind, CurvePos, Geometry, PolyCurve};
pub use error::{CurveDefect, Error, Result, SurfaceError};
pub use geom::{Point, Q};
pub use surface::{build_surface, FlatModel, Surface, SurfaceSpec};
