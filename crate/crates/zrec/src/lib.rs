//! Exact linear recurrences over the whole number line.
//!
//! A system of linear recurrence constraints, one per integer index, is a
//! bi-infinite lower unitriangular matrix with finitely many nonzero
//! entries per row. When the rows become periodic far enough left and
//! right, the matrix has a finite description and everything about its
//! solution space becomes computable in exact arithmetic: a unique reduced
//! form, one-sided inverses, the dimension and explicit bases of the
//! kernel, rank counts over finite windows, and the bookkeeping that
//! connects all of these to juggling patterns.
//!
//! The crate keeps two independent roads to every nontrivial quantity: the
//! structural algorithms in [`reduction`], [`kernel`], and
//! [`combinatorics`], and the dense brute-force checks in [`oracle`].

pub mod combinatorics;
pub mod frieze;
pub mod kernel;
pub mod oracle;
mod par;
pub mod recdsl;
pub mod recmat;
pub mod reduction;
pub mod samples;
pub mod scalar;
pub mod view;
pub mod window;

pub use recmat::{MatrixError, PivotMatrix, RecurrenceMatrix, RowPattern};
pub use scalar::{FieldKind, Scalar, ScalarError};
pub use view::{CpView, MatrixView, ProductView};
pub use window::{dense_window, dense_window_seq, DenseWindow};
