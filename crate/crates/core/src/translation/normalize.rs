/// Lowercases, expands `n't` to ` not`, and splits on anything that is not
/// a letter, digit or underscore.
pub fn tokenize(text: &str) -> Vec<String> {
    let lowered = text.to_lowercase().replace("n't", " not").replace("n’t", " not");
    lowered
        .split(|c: char| !(c.is_alphanumeric() || c == '_'))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// The token string patterns are matched against.
pub fn normalize(text: &str) -> String {
    tokenize(text).join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn punctuation_and_contractions() {
        assert_eq!(normalize("If it rains, the ground is wet."), "if it rains the ground is wet");
        assert_eq!(normalize("Bob isn't  BIG!"), "bob is not big");
        assert_eq!(tokenize("bald_eagle doesn't"), vec!["bald_eagle", "does", "not"]);
    }
}
