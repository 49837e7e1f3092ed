//! Topological types of orientable surfaces of finite type.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Genus, puncture count and boundary-circle count of a connected orientable
/// surface.
///
/// Punctures and boundary circles are kept apart: ambient surfaces have no
/// boundary, but the pieces produced by cutting along curves do, and several
/// classifications (outer curves, peripheral pairs) depend on which holes are
/// which.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceType {
    pub genus: u32,
    pub punctures: u32,
    pub boundary: u32,
}

impl SurfaceType {
    pub const fn new(genus: u32, punctures: u32, boundary: u32) -> Self {
        Self { genus, punctures, boundary }
    }

    /// A surface without boundary.
    pub const fn punctured(genus: u32, punctures: u32) -> Self {
        Self::new(genus, punctures, 0)
    }

    /// Punctures and boundary circles together.
    pub fn holes(&self) -> u32 {
        self.punctures + self.boundary
    }

    /// `3g - 3 + n + b`: the number of curves in a pants decomposition.
    pub fn complexity(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.holes() as i64
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.holes() as i64
    }

    /// Genus zero with three holes of any kind.
    pub fn is_pair_of_pants(&self) -> bool {
        self.genus == 0 && self.holes() == 3
    }

    pub fn is_twice_punctured_disc(&self) -> bool {
        *self == Self::new(0, 2, 1)
    }

    /// Essential simple closed curves exist exactly when the complexity is positive.
    pub fn admits_essential_curves(&self) -> bool {
        self.complexity() >= 1
    }

    /// Recovers a type from its Euler characteristic and hole counts, if the
    /// numbers describe an orientable surface.
    pub fn from_euler(euler: i64, punctures: u32, boundary: u32) -> Option<Self> {
        let twice_genus = 2 - euler - (punctures + boundary) as i64;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return None;
        }
        Some(Self::new((twice_genus / 2) as u32, punctures, boundary))
    }

    /// Symbolic name such as `S1_2` (boundary shown only when present).
    pub fn name(&self) -> String {
        if self.boundary == 0 {
            format!("S{}_{}", self.genus, self.punctures)
        } else {
            format!("S{}_{}_{}", self.genus, self.punctures, self.boundary)
        }
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.genus, self.punctures, self.boundary)
    }
}
