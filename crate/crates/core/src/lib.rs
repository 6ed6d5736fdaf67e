pub mod cohomology;
pub mod complex;
pub mod corpus;
pub mod covering;
pub mod etale;
pub mod error;
pub mod grouppi;
pub mod io;
pub mod plstructure;
mod lp;
mod util;

pub use complex::{DerivedComplex, FlagSimplex, RationalRealization, Simplex, SimplicialComplex};
pub use error::{Error, ErrorKind, Result};
