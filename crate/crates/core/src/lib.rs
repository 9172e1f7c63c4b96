#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod chart;
pub mod classify;
pub mod cli;
pub mod curvature;
pub mod linalg;
pub mod linsolve;
pub mod metric;
pub mod operators;
pub mod parse;
pub mod tensor;
