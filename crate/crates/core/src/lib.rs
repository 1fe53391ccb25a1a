pub mod bitangent;
pub mod census;
pub mod divisor;
pub mod error;
pub mod hyperelliptic;
pub mod lattice;
pub mod metricgraph;
pub mod rational;
pub mod theta;
pub mod tropcurve;

pub use error::{Error, Result};
pub use rational::Q;
