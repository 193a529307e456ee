//! Barcodes, finite persistence modules, filtered complexes and the
//! bottleneck distance.

mod barcode;
mod bottleneck;
mod complex;
mod matching;
mod module;

pub use barcode::{shrink, Bar, Barcode, BarcodeEntry, Interval};
pub use bottleneck::{admits_matching, bottleneck, bottleneck_with};
pub use complex::{window_dim_from_barcode, FilteredComplex, Generator, WindowHomology};
pub use matching::BipartiteGraph;
pub use module::{barcode_by_ranks, FinitePersistenceModule};
pub(crate) use module::express_in_basis;

use thiserror::Error;

use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PersistenceError {
    #[error("interval ({left}, {right}] is empty")]
    EmptyInterval { left: String, right: String },
    #[error("cannot shrink by negative amount {0}")]
    NegativeShrink(String),
    #[error("shrinking {interval} by {c} leaves nothing")]
    OverShrink { interval: String, c: String },
    #[error("invalid persistence data: {0}")]
    Invalid(String),
    #[error("boundary of generator {from} has a component of no smaller action (generator {to})")]
    ActionIncrease { from: usize, to: usize },
    #[error("boundary does not square to zero")]
    BoundarySquare,
    #[error("window endpoint {0} is an action value")]
    SpectrumCollision(String),
    #[error("barcode JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}
