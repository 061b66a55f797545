//! Local JSON HTTP service over the corrgraph analyses.
//!
//! [`api`] holds the request/response bodies and the dataset operations that
//! produce them; the CLI's `--json` output goes through the same layer, so
//! both front ends emit identical bytes.

pub mod api;
pub mod error;
pub mod server;

pub use api::Dataset;
pub use error::{ApiError, ErrorClass, ErrorCode};
pub use server::{router, run_until_signal, serve, AppState, ServeError, Server, ServiceConfig};
