//! Flat key-value result records: one `key = value` line per entry, in
//! insertion order, diff-friendly. Timing never goes in, so records are
//! deterministic for a given configuration.

use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    pairs: Vec<(String, String)>,
}

impl Record {
    pub fn new(command: &str) -> Self {
        let mut r = Record::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.pairs.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.pairs {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_in_insertion_order() {
        let mut r = Record::new("solve");
        r.push("winner", "A");
        r.push("value", 3);
        assert_eq!(r.to_string(), "command = solve\nwinner = A\nvalue = 3\n");
        assert_eq!(r.get("value"), Some("3"));
    }
}
