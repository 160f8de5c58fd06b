pub mod chi;
pub mod curve;
pub mod error;
pub mod linsolve;
pub mod numeric;
pub mod pair;
pub mod params;
pub mod pipeline;
pub mod poly;
pub mod qsolver;
pub mod resultant;
pub mod weyl;
