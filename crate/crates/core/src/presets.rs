//! Preset GCM catalog. The built-in table ships the rank-1/2 instances used
//! throughout; an external JSON catalog can replace it.

use serde::{Deserialize, Serialize};

use crate::error::{KmError, Result};
use crate::gcm::{validate_gcm, Gcm};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Catalog {
    pub presets: Vec<CatalogEntry>,
}

pub fn builtin_catalog() -> Catalog {
    let entry = |name: &str, labels: &[&str], matrix: Vec<Vec<i64>>| CatalogEntry {
        name: name.to_string(),
        labels: labels.iter().map(|s| s.to_string()).collect(),
        matrix,
    };
    Catalog {
        presets: vec![
            entry("A1", &["1"], vec![vec![2]]),
            entry("A2", &["1", "2"], vec![vec![2, -1], vec![-1, 2]]),
            entry("B2", &["1", "2"], vec![vec![2, -1], vec![-2, 2]]),
            entry("G2", &["1", "2"], vec![vec![2, -1], vec![-3, 2]]),
            // Affine A1^(1), Kac labels 0,1.
            entry("A1~1", &["0", "1"], vec![vec![2, -2], vec![-2, 2]]),
            // Twisted affine A2^(2).
            entry("A2~2", &["0", "1"], vec![vec![2, -4], vec![-1, 2]]),
            // Rank-2 hyperbolic.
            entry("HYP", &["1", "2"], vec![vec![2, -3], vec![-3, 2]]),
        ],
    }
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Catalog> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn lookup(&self, name: &str) -> Result<Gcm> {
        let target = name.to_ascii_uppercase();
        // A few spellings for the affine/twisted names.
        let target = match target.as_str() {
            "A1^(1)" | "A1(1)" | "A1AFF" => "A1~1".to_string(),
            "A2^(2)" | "A2(2)" => "A2~2".to_string(),
            t => t.to_string(),
        };
        for e in &self.presets {
            if e.name.to_ascii_uppercase() == target {
                return validate_gcm(e.matrix.clone(), e.labels.clone());
            }
        }
        Err(KmError::UnknownName(name.to_string()))
    }

    pub fn names(&self) -> Vec<String> {
        self.presets.iter().map(|e| e.name.clone()).collect()
    }
}

/// GCM input file: `{"labels": ["1","2"], "matrix": [[2,-1],[-1,2]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GcmFile {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
}

pub fn gcm_from_json(text: &str) -> Result<Gcm> {
    let f: GcmFile = serde_json::from_str(text)?;
    validate_gcm(f.matrix, f.labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_presets_validate() {
        let cat = builtin_catalog();
        for name in cat.names() {
            let g = cat.lookup(&name).unwrap();
            assert!(g.symmetrizer.is_some(), "{name} should be symmetrizable");
        }
        assert!(cat.lookup("A1^(1)").is_ok());
        assert!(cat.lookup("nope").is_err());
    }

    #[test]
    fn gcm_json_roundtrip() {
        let g = gcm_from_json(r#"{"labels": ["1","2"], "matrix": [[2,-1],[-1,2]]}"#).unwrap();
        assert_eq!(g.rank(), 2);
        assert!(gcm_from_json(r#"{"labels": ["1","2"], "matrix": [[2,1],[1,2]]}"#).is_err());
    }
}
