//! Exact arithmetic and decision procedures for countable Archimedean ordered
//! groups, their circularly ordered cousins, and non-Archimedean divisible
//! groups with Hahn series fields over them.

pub mod symreal;
pub mod archgroup;
pub mod circular;
pub mod classify;
pub mod hahn;
pub mod reductions;
pub mod zmodule;

mod linalg;
