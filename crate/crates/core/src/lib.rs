pub mod cli;
pub mod deform;
pub mod gamma;
pub mod hyperplane;
pub mod linalg;
pub mod rank1;
pub mod symgroup;
pub mod wreath;
