//! Shared by the integration tests and the acceptance suite in `vgsr`.
#![allow(dead_code)]

pub mod checks;
pub mod oracle;
