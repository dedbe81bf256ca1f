//! Root data, Harish-Chandra cones, pseudo-Kähler potentials and
//! quantization bookkeeping for real forms of contragredient Lie
//! superalgebras.
//!
//! Exact rational arithmetic is used everywhere except in [`kahler`], whose
//! potentials and Newton solves are floating point.

pub mod cli;
pub mod cones;
pub mod kahler;
pub mod linalg;
mod par;
pub mod polyhedral;
pub mod possys;
pub mod quantize;
pub mod realform;
pub mod rootdata;
pub mod unitarity;
