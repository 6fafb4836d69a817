use serde::Serialize;

/// One failed check, with enough context to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: String,
    pub witness: String,
    pub expected: String,
    pub actual: String,
}

impl Finding {
    pub fn new(check: &str, witness: String, expected: String, actual: String) -> Self {
        Finding {
            check: check.to_owned(),
            witness,
            expected,
            actual,
        }
    }
}
