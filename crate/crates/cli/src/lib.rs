pub mod bench;
pub mod commands;
pub mod domain;
pub mod error;
pub mod fuzz;
pub mod gen;
