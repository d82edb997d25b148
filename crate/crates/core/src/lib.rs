pub mod assignment;
pub mod certifier;
pub mod error;
pub mod grassmannian;
pub mod linalg;
pub mod lr;
pub mod matrix;
pub mod orbitdim;
pub mod points;
pub mod series;
pub mod type_a;
