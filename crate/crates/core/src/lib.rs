//! Exact-arithmetic toolkit for weighted composition operators on the
//! one-circuit directed graph over `Z+`: 2-isometry checks, Cauchy duals,
//! moment-sequence tests and the parametric family whose cyclic 2-isometries
//! have non-subnormal Cauchy duals.

pub mod cli;
pub mod family;
pub mod moments;
pub mod oracle;
pub mod scalar;
pub mod wco;
