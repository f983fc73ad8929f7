//! Mission store, natural-language understanding, dialogue, alerting and the
//! mission simulator behind the MIRIAM operator chat.

pub mod alert;
pub mod batch;
pub mod config;
pub mod dialogue;
pub mod error;
pub mod mission;
pub mod nlu;
pub mod runtime;
pub mod sim;
