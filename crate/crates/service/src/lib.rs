//! Network and terminal front ends over [`miriam_core::runtime::MissionRuntime`].

pub mod http;
pub mod hub;
pub mod load;
pub mod repl;
pub mod serve;
