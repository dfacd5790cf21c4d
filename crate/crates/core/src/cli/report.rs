//! Text reports: free-form lines for people, then `key = value` lines for
//! scripts.

use std::fmt::Write as _;

/// Separates the human block from the machine block.
pub const MACHINE_HEADER: &str = "# machine";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub human: Vec<String>,
    pub machine: Vec<(String, String)>,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.human.push(s.into());
    }

    pub fn kv(&mut self, key: impl Into<String>, value: impl ToString) {
        self.machine.push((key.into(), value.to_string()));
    }

    /// First value stored under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.machine.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.human {
            let _ = writeln!(s, "{l}");
        }
        if !self.machine.is_empty() {
            if !self.human.is_empty() {
                s.push('\n');
            }
            let _ = writeln!(s, "{MACHINE_HEADER}");
            for (k, v) in &self.machine {
                let _ = writeln!(s, "{k} = {v}");
            }
        }
        s
    }
}

/// Parses the machine block of rendered report text.
pub fn machine_block(text: &str) -> Vec<(String, String)> {
    text.lines()
        .skip_while(|l| *l != MACHINE_HEADER)
        .skip(1)
        .filter_map(|l| l.split_once(" = ").map(|(k, v)| (k.to_string(), v.to_string())))
        .collect()
}
