//! Static analysis of annotation-based microservice codebases.
//!
//! The pipeline scans Java sources service by service, extracts endpoint
//! definitions, outgoing REST calls and data entities into an intermediate
//! representation, matches calls to endpoints and entities to entities, and
//! folds the matches into three dependency matrices: endpoint (EDM), data
//! (DDM) and the merged service dependency matrix (SDM).

pub mod error;
pub mod fixtures;
pub mod frontend;
pub mod ingest;
pub mod matching;
pub mod matrix;
pub mod model;
pub mod pipeline;
pub mod render;

pub use error::{Error, Result};
