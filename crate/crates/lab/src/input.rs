//! Reading terms and settings from the command line and the environment.

use std::path::PathBuf;

use krivine_lab_core::{parse, Term};

use crate::LabError;

/// Fuel used when neither a flag nor `KRIVINE_LAB_FUEL` says otherwise.
pub const DEFAULT_FUEL: usize = 100_000;

pub const FUEL_VAR: &str = "KRIVINE_LAB_FUEL";

/// Reads a term given inline, or from a UTF-8 file when written `@path`.
pub fn read_term(arg: &str) -> Result<Term, LabError> {
    let src = match arg.strip_prefix('@') {
        Some(path) => {
            let path = PathBuf::from(path);
            std::fs::read_to_string(&path).map_err(|source| LabError::Io { path, source })?
        }
        None => arg.to_string(),
    };
    parse(src.trim()).map_err(|e| LabError::Syntax {
        input: src.trim().to_string(),
        error: e,
    })
}

/// The fuel from `KRIVINE_LAB_FUEL`, or [`DEFAULT_FUEL`].
pub fn default_fuel() -> Result<usize, LabError> {
    match std::env::var(FUEL_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| LabError::Usage(format!("{FUEL_VAR} must be a count, got {v:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_FUEL),
        Err(e) => Err(LabError::Usage(format!("{FUEL_VAR}: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_and_file() {
        let t = read_term("(\\x.(x)x)\\y.y").unwrap();
        assert_eq!(t.size(), 7);
        let dir = std::env::temp_dir().join(format!("krivine-lab-input-{}", std::process::id()));
        std::fs::write(&dir, "\\y.y\n").unwrap();
        let from_file = read_term(&format!("@{}", dir.display())).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(from_file.to_string(), "\\y.y");
    }

    #[test]
    fn syntax_errors_are_usage_errors() {
        let e = read_term("((x)").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(matches!(read_term("@/nonexistent/term"), Err(LabError::Io { .. })));
    }
}
