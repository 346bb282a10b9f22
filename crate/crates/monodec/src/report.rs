//! Pass/fail assertion reports shared by every verification routine.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One named check with its expected and observed values.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// An ordered list of assertions produced by one verification run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, assertion: Assertion) {
        self.assertions.push(assertion);
    }

    /// Records a comparison of two displayable values.
    pub fn check_eq<A, B>(&mut self, name: &str, expected: A, actual: B) -> bool
    where
        A: std::fmt::Display,
        B: std::fmt::Display,
    {
        let expected = expected.to_string();
        let actual = actual.to_string();
        let ok = expected == actual;
        self.assertions.push(Assertion {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            expected: Some(expected),
            actual: Some(actual),
            counterexample: None,
        });
        ok
    }

    /// Records a boolean check, attaching a counterexample on failure.
    pub fn check(&mut self, name: &str, ok: bool, counterexample: Option<String>) -> bool {
        self.assertions.push(Assertion {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            expected: None,
            actual: None,
            counterexample: if ok { None } else { counterexample },
        });
        ok
    }

    pub fn skip(&mut self, name: &str, why: &str) {
        self.assertions.push(Assertion {
            name: name.to_string(),
            status: Status::Skipped,
            expected: None,
            actual: Some(why.to_string()),
            counterexample: None,
        });
    }

    pub fn merge(&mut self, mut other: Report) {
        self.assertions.append(&mut other.assertions);
    }

    /// Prefixes every assertion name, for aggregation.
    pub fn prefixed(mut self, prefix: &str) -> Report {
        for a in &mut self.assertions {
            a.name = format!("{prefix}.{}", a.name);
        }
        self
    }

    pub fn ok(&self) -> bool {
        self.assertions.iter().all(|a| a.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions
            .iter()
            .filter(|a| a.status == Status::Fail)
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut skipped = 0;
        for a in &self.assertions {
            match a.status {
                Status::Pass => pass += 1,
                Status::Fail => fail += 1,
                Status::Skipped => skipped += 1,
            }
        }
        (pass, fail, skipped)
    }
}
