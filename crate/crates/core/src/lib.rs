pub mod eaton;
pub mod geometry;
pub mod scattering;
pub mod vec2;
pub mod lift;
pub mod curves;
pub mod knot;
pub mod svg;
pub mod cli;
