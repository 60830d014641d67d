pub mod cli;
pub mod deformation;
pub mod linalg;
pub mod module_ext;
pub mod poly;
pub mod singularity;
pub mod standard_basis;
pub mod versal;
