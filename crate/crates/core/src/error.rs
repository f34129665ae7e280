use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input. `field` names the offending item.
    Input { field: String, msg: String },
    /// Text input with a line reference.
    Parse { line: usize, msg: String },
    /// A configured budget was exhausted.
    Budget { name: String, limit: usize },
    /// A numerical tolerance check failed.
    Numerical(String),
    /// An operation would read outside the guarded part of a window.
    Guard(String),
}

impl Error {
    pub fn input(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Input { field: field.into(), msg: msg.into() }
    }

    pub fn budget(name: impl Into<String>, limit: usize) -> Self {
        Error::Budget { name: name.into(), limit }
    }

    /// Process exit code used by the command line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input { .. } | Error::Parse { .. } => 1,
            Error::Budget { .. } => 2,
            Error::Numerical(_) | Error::Guard(_) => 3,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input { field, msg } => write!(f, "invalid input in `{field}`: {msg}"),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::Budget { name, limit } => write!(f, "budget `{name}` exceeded (limit {limit})"),
            Error::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            Error::Guard(msg) => write!(f, "guard violation: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
