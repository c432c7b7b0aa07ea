pub mod calogero;
pub mod cli;
pub mod laxops;
pub mod polyring;
pub mod rootsys;
