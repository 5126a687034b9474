//! The standoff annotation file format: a UTF-8 JSON list of
//! `{"doc_id", "start", "end", "surface", "tag"}` objects sorted by
//! (doc_id, start). One format serves gold sets, predictions and imported
//! external NER output.

use crate::text_model::{sort_annotations, Annotation};
use std::fs;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StandoffError {
    #[error("failed to read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("failed to write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("invalid standoff JSON in {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
}

pub fn read_file(path: &Path) -> Result<Vec<Annotation>, StandoffError> {
    let raw = fs::read_to_string(path).map_err(|source| StandoffError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let mut annotations: Vec<Annotation> =
        serde_json::from_str(&raw).map_err(|source| StandoffError::Parse {
            path: path.display().to_string(),
            source,
        })?;
    sort_annotations(&mut annotations);
    Ok(annotations)
}

/// Serializes in canonical order with a trailing newline, so repeated runs
/// are byte-identical.
pub fn to_string(annotations: &[Annotation]) -> String {
    let mut sorted = annotations.to_vec();
    sort_annotations(&mut sorted);
    let mut out = serde_json::to_string_pretty(&sorted).expect("annotations serialize");
    out.push('\n');
    out
}

pub fn write_file(path: &Path, annotations: &[Annotation]) -> Result<(), StandoffError> {
    fs::write(path, to_string(annotations)).map_err(|source| StandoffError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn sample() -> Vec<Annotation> {
        vec![
            Annotation { doc_id: "b".into(), start: 0, end: 4, surface: "Jane".into(), tag: "Jane Bennet".into() },
            Annotation { doc_id: "a".into(), start: 7, end: 12, surface: "Darcy".into(), tag: "Mr. Darcy".into() },
            Annotation { doc_id: "a".into(), start: 0, end: 5, surface: "Lizzy".into(), tag: "Elizabeth Bennet".into() },
        ]
    }

    #[test]
    fn round_trip_sorts_canonically() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("ann.json");
        write_file(&path, &sample()).unwrap();
        let back = read_file(&path).unwrap();
        let ids: Vec<(&str, usize)> = back.iter().map(|a| (a.doc_id.as_str(), a.start)).collect();
        assert_eq!(ids, [("a", 0), ("a", 7), ("b", 0)]);
        // A second write of the re-read set is byte-identical.
        assert_eq!(to_string(&back), to_string(&sample()));
    }

    #[test]
    fn empty_list_round_trips() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("empty.json");
        write_file(&path, &[]).unwrap();
        assert!(read_file(&path).unwrap().is_empty());
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, "{not json").unwrap();
        assert!(matches!(read_file(&path), Err(StandoffError::Parse { .. })));
    }
}
