//! Quower coverings of toroidal boards and short coverings of `F_q^3`.
//!
//! The crate ties two covering problems together:
//!
//! * covering the toroidal board `Z_n^2` (or the board without its main
//!   diagonal) by quowers, pieces attacking a column, a row and a diagonal;
//! * covering `F_q^3` by radius-1 extended balls, equivalently covering the
//!   projective plane `PG(2, q)` by wind roses.
//!
//! [`lifting`] converts covers of the punctured board `Z_{q-1}^2` into
//! covers of `F_q^3` and back, [`constructions`] produces explicit board
//! covers, and [`setcover`] computes exact optima for both problems.

pub mod board;
pub mod constructions;
pub mod error;
pub mod field;
pub mod lifting;
pub mod projective;
pub mod setcover;

pub use board::{BoardCover, BoardPoint, BoardVariant, CoverReport};
pub use error::{Error, Result};
pub use field::{field, FieldElement, FieldSpec};
pub use projective::{Automorphism, Plane, PointClass, ProjPoint, ShortCover, Vector3};
pub use setcover::{SetCoverInstance, SolveOptions, SolveResult, Status};
