pub mod bench;
pub mod catalog;
pub mod logic;
pub mod model;
pub mod solver;
pub mod verdict;
