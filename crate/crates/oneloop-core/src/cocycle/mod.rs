//! Principal-face cancellation and labelled expansion identities.

pub mod cancellation;
pub mod contract;
pub mod identities;
