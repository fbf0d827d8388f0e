//! Word synthesis and diameter bounds for the unipotent radical `U` of the
//! classical Chevalley groups over `Z/pZ`.

pub mod chevalley;
pub mod cli;
pub mod error;
pub mod field;
pub mod growth;
pub mod matrix;
pub mod oracle;
pub mod root_system;
pub mod synth;
pub mod word;

pub use error::{Error, Result};
