//! Descent and Picard spectral sequences of the K(1)-local sphere.
//!
//! The crate is layered bottom-up: [`padic`] arithmetic, [`fg_module`]
//! linear algebra over `Z_p`, [`cohomology`] of the groups in play, the
//! generic page engine in [`ss`], and the concrete computations in
//! [`height_one`].

pub mod cohomology;
pub mod error;
pub mod fg_module;
pub mod height_one;
pub mod padic;
pub mod ss;

pub use error::{Error, Result};
pub use fg_module::{AbGroup, FgZpModule, GroupMap, ModuleMap};
pub use padic::{PAdic, Valuation};
pub use ss::{Bidegree, Cell, Page, Window};
