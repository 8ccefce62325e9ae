//! Exact symbolic engine for localized K-theoretic I-functions of
//! Grassmannians, vertex functions of their cotangent bundles, the
//! balancing operators on classes and on q-difference operators, and the
//! Bethe-Ansatz specialization.
//!
//! Every identity is decided by exact rational arithmetic. A seeded
//! modular evaluation is used only to reject unequal candidates early.

pub mod algebra;
pub mod bethe;
pub mod error;
pub mod gw;
pub mod qdiff;
pub mod quot;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
