/// Case-folds and splits an utterance into tokens. Leading and trailing
/// punctuation is stripped from each token; interior `_`, `-` and `.` survive
/// so names like `auv_1` and numbers like `2.5` stay whole.
pub fn normalize(utterance: &str) -> Vec<String> {
    utterance
        .split_whitespace()
        .filter_map(|raw| {
            let lower = raw.to_lowercase();
            let trimmed = lower.trim_matches(|c: char| !(c.is_alphanumeric() || c == '_'));
            let token: String = trimmed
                .chars()
                .filter(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
                .collect();
            (!token.is_empty()).then_some(token)
        })
        .collect()
}
