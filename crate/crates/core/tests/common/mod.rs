pub mod naive;
pub mod replay;
