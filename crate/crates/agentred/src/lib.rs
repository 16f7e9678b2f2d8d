//! Text formats, seeded corpora, and the command-line driver around
//! [`agentred_core`].

pub mod cli;
pub mod corpus;
pub mod formats;
