//! Green correspondence for modules of finite group algebras over GF(p).

pub mod error;
pub mod ffmat;
pub mod grp;
pub mod repmod;
pub mod decomp;
pub mod adjfun;
pub mod relhom;
pub mod green;
pub mod cli;

pub use error::{Error, Result};
