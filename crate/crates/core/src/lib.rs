// `!(x > 0.0)` is how parameter checks reject NaN along with the bad range
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aes;
pub mod cli;
pub mod sponge;
pub mod conv;
pub mod perf;
pub mod sim;
pub mod workloads;
