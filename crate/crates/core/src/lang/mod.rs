//! Parsers and serializers for the authored artifact formats, and the
//! project directory loader.
//!
//! | file             | format                         |
//! |------------------|--------------------------------|
//! | `reqs/*.req`     | requirement blocks             |
//! | `vv/*.vvm`       | one `prop` per line            |
//! | `tests/*.tm`     | test model state machine       |
//! | `stories/*.json` | scenario documents             |
//! | `claims/*.json`  | array of safety claims         |

mod error;
mod lexer;
mod requirements;
mod story;
mod test_model;
mod vv;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use error::{ParseError, ParseErrorKind, SourceSpan};
pub use requirements::{parse_requirements, parse_requirements_located, serialize_requirements};
pub use story::{
    parse_claims, parse_json, parse_scenario, parse_story, parse_story_for, serialize_claims,
    serialize_scenario, serialize_story,
};
pub use test_model::{parse_test_model, parse_test_model_located, serialize_test_model};
pub use vv::{parse_property, parse_vv, parse_vv_located, serialize_vv};

use crate::model::{Located, Project, Source};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{0}: not a project directory")]
    NotADirectory(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A project plus every per-file parse failure. Files that fail to parse
/// contribute nothing to `project`.
#[derive(Debug, Default)]
pub struct LoadedProject {
    pub project: Project,
    pub errors: Vec<ParseError>,
}

pub fn load_project(dir: &Path) -> Result<LoadedProject, LoadError> {
    if !dir.is_dir() {
        return Err(LoadError::NotADirectory(dir.to_path_buf()));
    }
    let mut out = LoadedProject::default();
    for (rel, text) in read_kind(dir, "reqs", "req")? {
        match parse_requirements_located(&text, &rel) {
            Ok(v) => out.project.requirements.extend(v),
            Err(e) => out.errors.push(e.in_file(&rel)),
        }
    }
    for (rel, text) in read_kind(dir, "vv", "vvm")? {
        match parse_vv_located(&text, &rel) {
            Ok(v) => out.project.properties.extend(v),
            Err(e) => out.errors.push(e.in_file(&rel)),
        }
    }
    for (rel, text) in read_kind(dir, "tests", "tm")? {
        match parse_test_model_located(&text, &rel) {
            Ok(v) => out.project.tests.push(v),
            Err(e) => out.errors.push(e.in_file(&rel)),
        }
    }
    for (rel, text) in read_kind(dir, "stories", "json")? {
        match parse_scenario(&text) {
            Ok(v) => out.project.scenarios.push(Located::new(v, Source { file: rel, line: 1 })),
            Err(e) => out.errors.push(e.in_file(&rel)),
        }
    }
    for (rel, text) in read_kind(dir, "claims", "json")? {
        match parse_claims(&text) {
            Ok(v) => out.project.claims.extend(
                v.into_iter()
                    .map(|c| Located::new(c, Source { file: rel.clone(), line: 1 })),
            ),
            Err(e) => out.errors.push(e.in_file(&rel)),
        }
    }
    out.project.derive_test_links();
    Ok(out)
}

/// `(relative path, contents)` of `dir/sub/*.ext`, sorted by file name.
fn read_kind(dir: &Path, sub: &str, ext: &str) -> Result<Vec<(String, String)>, LoadError> {
    let path = dir.join(sub);
    if !path.is_dir() {
        return Ok(Vec::new());
    }
    fn io(p: &Path) -> impl FnOnce(std::io::Error) -> LoadError + '_ {
        move |source| LoadError::Io {
            path: p.to_path_buf(),
            source,
        }
    }
    let mut files: Vec<PathBuf> = fs::read_dir(&path)
        .map_err(io(&path))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == ext))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).map_err(io(&p))?;
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((format!("{sub}/{name}"), text))
        })
        .collect()
}

/// Writes `project` in the directory layout [`load_project`] reads. Items
/// keep the file they were loaded from; unlocated items go to a per-kind
/// default file.
pub fn save_project(project: &Project, dir: &Path) -> Result<(), LoadError> {
    fn group<'a, T>(items: &'a [Located<T>], default: &str) -> BTreeMap<String, Vec<&'a T>> {
        let mut m: BTreeMap<String, Vec<&T>> = BTreeMap::new();
        for l in items {
            let file = if l.source.file.is_empty() {
                default.to_string()
            } else {
                l.source.file.clone()
            };
            m.entry(file).or_default().push(&l.item);
        }
        m
    }
    let mut files: Vec<(String, String)> = Vec::new();
    for (f, reqs) in group(&project.requirements, "reqs/requirements.req") {
        let owned: Vec<_> = reqs.into_iter().cloned().collect();
        files.push((f, serialize_requirements(&owned)));
    }
    for (f, props) in group(&project.properties, "vv/properties.vvm") {
        let owned: Vec<_> = props.into_iter().cloned().collect();
        files.push((f, serialize_vv(&owned)));
    }
    for l in &project.tests {
        let f = if l.source.file.is_empty() {
            format!("tests/{}.tm", l.item.id)
        } else {
            l.source.file.clone()
        };
        files.push((f, serialize_test_model(&l.item)));
    }
    for l in &project.scenarios {
        let f = if l.source.file.is_empty() {
            format!("stories/{}.json", l.item.id)
        } else {
            l.source.file.clone()
        };
        files.push((f, serialize_scenario(&l.item)));
    }
    for (f, claims) in group(&project.claims, "claims/claims.json") {
        let owned: Vec<_> = claims.into_iter().cloned().collect();
        files.push((f, serialize_claims(&owned)));
    }
    for (rel, text) in files {
        let path = dir.join(&rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|source| LoadError::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
        fs::write(&path, text).map_err(|source| LoadError::Io { path, source })?;
    }
    Ok(())
}
