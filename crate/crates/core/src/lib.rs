pub mod aggregate;
pub mod cone;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod pareto;
pub mod pooling;
pub mod povs;
pub mod profile;
pub mod rational;
