use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or argument outside its mathematical domain.
    #[error("domain error: {name} = {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("numerical instability at step {step} (t = {time}): {detail}")]
    Instability { step: usize, time: f64, detail: String },

    #[error("classification error: {0}")]
    Classification(String),

    #[error("unknown preset `{name}`; available: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain { name, value, reason }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// True for errors caused by the numerics rather than the configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::Instability { .. })
    }
}
