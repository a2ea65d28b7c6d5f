//! JSON representation files: `{"ell": 3, "perm": [0, 1, 3, 2, 6, 7, 5, 4]}`
//! where `perm[g]` is the phenotype of the genotype whose binary value is `g`.

use std::fs;
use std::path::Path;

use binloc_core::Representation;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReprFile {
    pub ell: u32,
    pub perm: Vec<u32>,
}

impl From<&Representation> for ReprFile {
    fn from(r: &Representation) -> Self {
        ReprFile {
            ell: r.ell(),
            perm: r.perm().to_vec(),
        }
    }
}

impl TryFrom<ReprFile> for Representation {
    type Error = binloc_core::Error;

    fn try_from(f: ReprFile) -> Result<Self, Self::Error> {
        Representation::from_perm(f.ell, f.perm)
    }
}

/// Parses and validates; syntax errors carry line and column, permutation
/// errors the offending index.
pub fn parse_repr(text: &str) -> CliResult<Representation> {
    let file: ReprFile =
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("representation file: {e}")))?;
    Representation::try_from(file).map_err(|e| CliError::Validation(format!("representation file: {e}")))
}

pub fn read_repr(path: &Path) -> CliResult<Representation> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_repr(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn to_json(r: &Representation) -> String {
    serde_json::to_string(&ReprFile::from(r)).expect("plain struct serializes")
}

pub fn write_repr(path: &Path, r: &Representation) -> CliResult<()> {
    fs::write(path, to_json(r) + "\n").map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use binloc_core::representation::make_brg;

    #[test]
    fn round_trip() {
        let r = make_brg(4).unwrap();
        assert_eq!(parse_repr(&to_json(&r)).unwrap(), r);
        assert_eq!(to_json(&make_brg(2).unwrap()), r#"{"ell":2,"perm":[0,1,3,2]}"#);
    }

    #[test]
    fn errors_point_at_the_problem() {
        let e = parse_repr(r#"{"ell":2,"perm":[0,0,1,2]}"#).unwrap_err().to_string();
        assert!(e.contains("not a permutation") && e.contains("index 1"), "{e}");
        let e = parse_repr("{\"ell\":2,\n \"perm\":[0,1,2,]}").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = parse_repr(r#"{"ell":2,"perm":[0,1,2]}"#).unwrap_err().to_string();
        assert!(e.contains('3') && e.contains('4'), "{e}");
        assert!(parse_repr(r#"{"ell":2,"perm":[0,1,2,3],"extra":1}"#).is_err());
    }
}
