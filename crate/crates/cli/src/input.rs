//! Ring documents read from JSON files.

use std::path::Path;

use insep_core::{FieldSpec, LocalHypersurface};
use serde::{Deserialize, Serialize};

/// A local hypersurface `k[[vars]]/(F)` truncated at order `N`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDocument {
    pub p: u64,
    /// Degree of the coefficient field over `F_p`.
    #[serde(default = "one")]
    pub k: u32,
    #[serde(default = "xyz")]
    pub vars: Vec<String>,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "N", default = "default_order")]
    pub n: i32,
}

fn one() -> u32 {
    1
}

fn xyz() -> Vec<String> {
    ["x", "y", "z"].map(String::from).to_vec()
}

fn default_order() -> i32 {
    24
}

/// Malformed input; reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl RingDocument {
    pub fn load(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }

    /// Builds the hypersurface, with `trunc` overriding `N`.
    pub fn hypersurface(&self, trunc: Option<i32>) -> Result<LocalHypersurface, InputError> {
        let field = FieldSpec::new(self.p, self.k).map_err(|e| InputError(format!("field p/k: {e}")))?;
        let n = trunc.unwrap_or(self.n);
        if n <= 0 {
            return Err(InputError(format!("field N: truncation order must be positive, got {n}")));
        }
        LocalHypersurface::parse(field, &self.vars, &self.f, n).map_err(|e| InputError(format!("field F: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_are_rejected() {
        let err = serde_json::from_str::<RingDocument>(r#"{"p": 2, "F": "x*y", "M": 3}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field `M`"));
        let doc: RingDocument = serde_json::from_str(r#"{"p": 3, "F": "x*y + z^3"}"#).unwrap();
        assert_eq!((doc.k, doc.n, doc.vars.len()), (1, 24, 3));
        assert!(doc.hypersurface(Some(10)).is_ok());
    }
}
