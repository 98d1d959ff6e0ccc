//! Multi-Sidon spaces over finite fields: construction, verification, the
//! linear sets and cyclic subspace codes they generate, and an operator-channel
//! decoder for those codes.

pub mod codes;
pub mod construct;
pub mod field;
pub mod fp;
pub mod io;
pub mod linset;
pub mod sidon;
pub mod subspace;
