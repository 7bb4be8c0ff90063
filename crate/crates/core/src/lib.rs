//! Exact machinery for deciding whether a simple group of type F4 acts with
//! finitely many orbits on a triple flag variety `G/P1 × G/P2 × G/P3`.
//!
//! The pipeline is: root data ([`rootspace`]) → Weyl group and double
//! cosets ([`weyl`]) → standard parabolics ([`parabolic`]) → Chevalley
//! basis ([`chevalley`]) → graded root tables per cell ([`grading`]) →
//! support-pattern reduction and rank checks ([`orbits`]) → the driver
//! ([`classify`]).

pub mod chevalley;
pub mod classify;
pub mod context;
pub mod error;
pub mod grading;
pub mod linalg;
pub mod orbits;
pub mod parabolic;
pub mod rootspace;
pub mod weyl;

pub use chevalley::{build_chevalley, LieAlgebraBasis, LieElement};
pub use classify::{ClassificationReport, Outcome};
pub use context::Context;
pub use error::{Error, Result};
pub use grading::{GammaChoice, GradedPieces, OrbitProblem};
pub use orbits::{FinitenessVerdict, Verdict};
pub use parabolic::ParabolicSubgroup;
pub use rootspace::{build_root_system, RationalVector, Root, RootId, RootSystem, RootSystemType, Q};
pub use weyl::{DoubleCosetTable, WeylElement, WeylGroup};
