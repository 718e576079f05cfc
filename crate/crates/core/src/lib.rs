pub mod clustering;
pub mod drawing;
mod embed;
pub mod error;
pub mod graph;
pub mod iqp;
mod lift;
pub mod oracle;
pub mod pipeline;
pub mod render;
mod ser;

pub use error::{Error, Result};
pub use lift::lift;
