//! Reply generation from intent frames, session preferences and message types.

mod format;
mod processor;
mod templates;

pub use format::{
    format_distance, format_duration, format_speed, format_time, join_list, PreferenceChange, Preferences,
    TimeFormat, Units, KNOTS_PER_MPS, PREFERENCE_OPTIONS,
};
pub use processor::{
    describe_event, Author, ChatMessage, DialogueSession, Effect, Handled, MessageKind, Processor,
    TurnContext,
};
pub use templates::{placeholders, TemplateSet, TEMPLATE_KEYS};
