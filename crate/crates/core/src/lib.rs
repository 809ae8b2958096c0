pub mod artifact;
pub mod certify;
pub mod driver;
pub mod exactnum;
pub mod format;
pub mod forward;
pub mod gadgets;
pub mod geometry;
pub mod linalg;
pub mod preprocess;
pub mod render;
