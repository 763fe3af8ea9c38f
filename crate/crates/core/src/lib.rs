//! Exact symbolic engine for the G2 reflection equation: q-oscillator
//! operators, the quantized reflection equation, its matrix product
//! reductions and their verification.

pub mod scalar;
pub mod qboson;
pub mod lj;
pub mod modp;
pub mod tensor;
pub mod aq_g2;
pub mod quantized_re;
pub mod reduction;
pub mod golden;
pub mod verify;
pub mod geometry;
