//! Computer algebra for purely inseparable degree-p morphisms between
//! rational double points over finite fields.

pub mod error;
pub mod classify;
pub mod coverings;
pub mod derivation;
pub mod field;
pub mod hypersurface;
pub mod ideal;
pub mod linalg;
pub mod parse;
pub mod quotient;
pub mod rdp;
pub mod selftest;
pub mod series;
pub mod tables;

pub use error::{Error, Result};
pub use field::{Elem, Embedding, FieldSpec};
pub use parse::parse_series;
pub use series::{Monomial, Ring, Series};
pub use derivation::{Derivation, FixCase};
pub use hypersurface::LocalHypersurface;
pub use rdp::{Family, RdpType};
pub use classify::{classify, Classification, DualGraph};
