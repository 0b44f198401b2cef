pub mod cli;
pub mod derivor;
pub mod farkas;
pub mod frontend;
pub mod interp;
pub mod model;
pub mod params;
pub mod pipeline;
pub mod rational;
pub mod signature;
pub mod solver;
pub mod sorts;
pub mod term;
