use crate::parse::ParseError;

/// Anything that ends a run with exit status 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{flag}: {source}")]
    Parse {
        flag: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Core(#[from] dixlab_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn parse(flag: &'static str) -> impl FnOnce(ParseError) -> CliError {
        move |source| CliError::Parse { flag, source }
    }
}
