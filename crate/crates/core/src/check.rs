use std::fmt;

/// Outcome of one named verification, with a witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: false,
            witness: Some(witness.into()),
        }
    }

    /// Passing check that still records a note, e.g. why it was skipped.
    pub fn note(name: impl Into<String>, note: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: true,
            witness: Some(note.into()),
        }
    }

    pub fn from_result(name: impl Into<String>, r: Result<(), String>) -> Self {
        match r {
            Ok(()) => Check::pass(name),
            Err(w) => Check::fail(name, w),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}",
            if self.pass { "pass" } else { "FAIL" },
            self.name
        )?;
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}
