pub mod decode;
pub mod flowgraph;
pub mod instance;
pub mod model;
pub mod reduce;
pub mod scalar;
pub mod solve;
