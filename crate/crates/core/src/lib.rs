pub mod cartesian;
pub mod catalog;
pub mod constructions;
pub mod demos;
pub mod ggraph;
pub mod oracle;
pub mod perm;
pub mod product;
pub mod report;
