pub mod ablate_sigma;
pub mod compare;
pub mod predict;
pub mod simulate;
