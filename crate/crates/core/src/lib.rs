#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod cut;
pub mod error;
pub mod fixtures;
pub mod graphs;
pub mod homology;
pub mod intersection;
pub mod mapping_class;
pub mod normal;
pub mod pants;
pub mod reference;
pub mod rigidity;
pub mod surface;
pub mod triangulation;
pub mod universe;

pub use error::{Error, Result};
pub use normal::NormalCurve;
pub use surface::SurfaceType;
pub use triangulation::{Label, Triangulation};
