use std::fmt;

use serde::Serialize;

/// Outcome of one named identity or property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// A named list of checks. A failing check carries its counterexample in `detail`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), passed: true, checks: Vec::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.passed &= passed;
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Appends the checks of `other`, prefixing their names with its title.
    pub fn absorb(&mut self, other: Report) {
        for c in other.checks {
            self.check(format!("{}: {}", other.title, c.name), c.passed, c.detail);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}]", self.title, if self.passed { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            write!(f, "  {} {}", if c.passed { "ok  " } else { "FAIL" }, c.name)?;
            if let Some(d) = &c.detail {
                write!(f, " ({d})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
