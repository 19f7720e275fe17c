//! Random-forest inference where every split comparison is an integer
//! comparison on the IEEE 754 bit pattern.

pub mod bench;
pub mod codegen;
pub mod flint;
pub mod inference;
pub mod model;
pub mod oracle;
pub mod suite;
pub mod synth;
