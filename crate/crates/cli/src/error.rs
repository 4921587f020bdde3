use std::path::Path;

use rig_core::RigError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Core(RigError),
    Input(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }

    pub fn in_file(path: &Path, e: RigError) -> Self {
        match e {
            RigError::Schema { .. } | RigError::UnknownMove(_) | RigError::InvalidGame(_) | RigError::InvalidStrategy(_) => {
                CliError::Input(format!("{}: {e}", path.display()))
            }
            e => CliError::Core(e),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(RigError::CapExceeded { .. }) => EXIT_CAP,
            CliError::Core(RigError::NotWinning) => EXIT_FALSE,
            _ => EXIT_INPUT,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_CAP => "resource-cap",
            EXIT_FALSE => "false-verdict",
            _ => "input-error",
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(s) => f.write_str(s),
        }
    }
}

impl From<RigError> for CliError {
    fn from(e: RigError) -> Self {
        CliError::Core(e)
    }
}
