pub mod cli;
pub mod coamoeba;
pub mod error;
pub mod fixtures;
pub mod lift;
pub mod pants;
pub mod polyhedral;
pub mod suites;
pub mod toric;
pub mod tropical;
