pub mod analysis;
pub mod corpus;
pub mod error;
pub mod experiment;
pub mod features;
pub mod lexicons;
pub mod models;
pub mod pipeline;
pub mod resources;
pub mod synthetic;
pub mod text;
pub mod vectorizer;

pub use error::{Error, Result};
