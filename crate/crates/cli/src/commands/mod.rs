pub mod bec;
pub mod engine_cmd;
pub mod evolve;
pub mod laser;
pub mod sweep;
pub mod table1;
