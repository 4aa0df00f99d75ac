// `!(x > 0.0)` is deliberate throughout: it rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod lp;
pub mod point;
pub mod regions;
pub mod extremal;
pub mod asymptotics;
pub mod genus0;
pub mod acceptance;
pub mod cli;
