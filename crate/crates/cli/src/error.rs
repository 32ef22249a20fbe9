use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("malformed JSON in {path}: {message}")]
    Json { path: String, message: String },

    #[error(transparent)]
    Core(#[from] toric_mle::Error),

    #[error("{failed} of {total} checks failed")]
    SelftestFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        use toric_mle::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "malformed_json",
            CliError::SelftestFailed { .. } => "selftest_failed",
            CliError::Core(e) => match e {
                E::Dimension(_) => "dimension_mismatch",
                E::UnknownLabel(_) => "unknown_label",
                E::InvalidTree(_) | E::NotThreeValent | E::TreeTooLarge { .. } => "invalid_tree",
                E::BoundaryData(_) => "boundary_data",
                E::NotApplicable(_) | E::UnsupportedFace(_) => "not_applicable",
                E::NoAdmissibleRoot { .. } | E::MultipleAdmissibleRoots { .. } | E::ResidualTooLarge { .. } => {
                    "numerical_failure"
                }
                E::InvalidArgument(_)
                | E::Domain(_)
                | E::InvalidConfig(_)
                | E::IncompatibleMarginals(_)
                | E::Parse(_) => "invalid_input",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.code() {
            "usage" => 2,
            "io" => 3,
            "malformed_json" => 4,
            "dimension_mismatch" => 5,
            "invalid_input" => 6,
            "unknown_label" => 7,
            "invalid_tree" => 8,
            "boundary_data" => 9,
            "not_applicable" => 10,
            "numerical_failure" => 11,
            "selftest_failed" => 12,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
