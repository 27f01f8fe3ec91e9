use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;
use topoctl_core::{Instance, Model, RadiiAssignment, SCHEMA};

use crate::CliError;

/// On-disk assignment: the radii plus how they were produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    pub radii: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<u32>,
}

impl AssignmentFile {
    pub fn new(method: &str, model: Model, radii: &RadiiAssignment) -> Self {
        AssignmentFile {
            schema: SCHEMA.to_string(),
            method: Some(method.to_string()),
            model: Some(model),
            radii: radii.radii().to_vec(),
            levels: None,
            rounds: None,
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    read_json(path)
}

/// Radii and the model recorded alongside them, if any.
pub fn read_assignment(path: &Path) -> Result<(RadiiAssignment, Option<Model>), CliError> {
    #[derive(Deserialize)]
    struct Tag {
        #[serde(default)]
        model: Option<Model>,
    }
    let radii: RadiiAssignment = read_json(path)?;
    let tag: Tag = read_json(path)?;
    Ok((radii, tag.model))
}

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
    bytes.push(b'\n');
    bytes
}

/// Sends `bytes` to `out` when given, else to `stdout`.
pub(crate) fn emit(
    out: Option<&Path>,
    bytes: &[u8],
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => stdout.write_all(bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}
