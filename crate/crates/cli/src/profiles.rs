//! Resolving `--profile NAME|FILE` to a [`WeightProfile`].
//!
//! Lookup order: an existing file path, a built-in profile, then
//! `<dir>/<NAME>.json` in the directory named by `FPNFR_PROFILE_PATH`.

use std::path::{Path, PathBuf};

use fpnfr_core::{ProfileError, WeightProfile};
use thiserror::Error;

pub const PROFILE_PATH_ENV: &str = "FPNFR_PROFILE_PATH";

#[derive(Debug, Error)]
pub enum ProfileResolveError {
    #[error("weight profile `{name}` not found (searched: {})", .searched.join(", "))]
    NotFound { name: String, searched: Vec<String> },
    #[error("cannot read weight profile {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("weight profile {path}: {source}")]
    Invalid {
        path: String,
        #[source]
        source: ProfileError,
    },
}

pub fn resolve_profile(spec: &str, search_dir: Option<&Path>) -> Result<WeightProfile, ProfileResolveError> {
    let as_path = Path::new(spec);
    if as_path.is_file() {
        return load_file(as_path);
    }
    if let Some(p) = WeightProfile::builtin(spec) {
        return Ok(p);
    }
    let mut searched = vec![format!("file {spec}"), "built-in profiles".to_owned()];
    if let Some(dir) = search_dir {
        let candidate = dir.join(format!("{spec}.json"));
        if candidate.is_file() {
            return load_file(&candidate);
        }
        searched.push(candidate.display().to_string());
    }
    Err(ProfileResolveError::NotFound {
        name: spec.to_owned(),
        searched,
    })
}

fn load_file(path: &Path) -> Result<WeightProfile, ProfileResolveError> {
    let text = std::fs::read_to_string(path).map_err(|source| ProfileResolveError::Io {
        path: path.to_owned(),
        source,
    })?;
    WeightProfile::from_json(&text).map_err(|source| ProfileResolveError::Invalid {
        path: path.display().to_string(),
        source,
    })
}
