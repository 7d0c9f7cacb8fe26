//! Library surface of the experiment harness: configuration and artifact
//! plumbing shared by the binary and its integration tests.

pub mod config;
