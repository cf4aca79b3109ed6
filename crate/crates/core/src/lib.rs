//! Para-complex (split-complex) numbers, Lagrangian submanifolds of `Dⁿ`
//! and their para-holomorphic angle, equivariant lifts and self-similar solitons.

pub mod equivariant;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod lagrangian;
pub mod linalg;
pub mod par;
pub mod paracomplex;
pub mod soliton;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::SampledImmersion;
pub use grid::{Axis, Grid};
pub use linalg::{DMatrix, DVector, LagrangianAngle};
pub use paracomplex::{ParaComplex, PolarForm};
