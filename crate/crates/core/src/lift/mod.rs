//! Lifts of plane tropical curves to Lagrangian surfaces in (ℝ²) × T².

pub mod pl;
pub mod schedule;
pub mod mesh;
pub mod verify;
pub mod export;
