use bn_core::{parse_edge_list, parse_graph6, Graph, PartSizes};
use sha2::{Digest, Sha256};
use std::io::Read;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{source_name}: {message}")]
    Malformed { source_name: String, message: String },
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("--parts: {0}")]
    Parts(String),
    #[error("no input graph: pass --graph6, --edges or --parts")]
    Missing,
}

/// Bytes read from a file or standard input, with their digest.
#[derive(Clone, Debug)]
pub struct RawInput {
    pub name: String,
    pub text: String,
    pub sha256: String,
}

pub fn read_source(spec: &str) -> Result<RawInput, InputError> {
    let mut bytes = Vec::new();
    if spec == "-" {
        std::io::stdin().read_to_end(&mut bytes).map_err(|e| InputError::Io("<stdin>".into(), e))?;
    } else {
        bytes = std::fs::read(spec).map_err(|e| InputError::Io(spec.into(), e))?;
    }
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|e| InputError::Malformed {
        source_name: display_name(spec),
        message: format!("not UTF-8 text ({e})"),
    })?;
    Ok(RawInput { name: display_name(spec), text, sha256 })
}

fn display_name(spec: &str) -> String {
    if spec == "-" { "<stdin>".into() } else { spec.into() }
}

/// `-` reads standard input, an existing path reads that file, anything else
/// is taken as a single graph6 record.
pub fn graph6_input(spec: &str) -> Result<Option<RawInput>, InputError> {
    if spec == "-" || Path::new(spec).is_file() {
        read_source(spec).map(Some)
    } else {
        Ok(None)
    }
}

pub struct Labeled {
    pub label: String,
    pub graph: Graph,
}

/// Every record of a graph6 text; fails with one diagnostic per bad line.
pub fn graphs_from_graph6(raw: &RawInput) -> Result<Vec<Labeled>, InputError> {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for (idx, line) in raw.text.lines().enumerate() {
        let record = line.trim();
        if record.is_empty() {
            continue;
        }
        match parse_graph6(record) {
            Ok(graph) => out.push(Labeled { label: format!("graph6:{record}"), graph }),
            Err(e) => errors.push(format!("line {}: {e}", idx + 1)),
        }
    }
    if !errors.is_empty() {
        return Err(InputError::Malformed { source_name: raw.name.clone(), message: errors.join("; ") });
    }
    Ok(out)
}

pub fn graph_from_edges(raw: &RawInput) -> Result<Labeled, InputError> {
    let graph = parse_edge_list(&raw.text)
        .map_err(|e| InputError::Malformed { source_name: raw.name.clone(), message: e.to_string() })?;
    Ok(Labeled { label: format!("edges:{}", raw.name), graph })
}

pub fn parse_parts(text: &str) -> Result<PartSizes, InputError> {
    let sizes = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| InputError::Parts(format!("'{s}' is not a part size"))))
        .collect::<Result<Vec<_>, _>>()?;
    PartSizes::new(sizes).map_err(|e| InputError::Parts(e.to_string()))
}

/// Graphs named by `--graph6`/`--edges`, plus the raw inputs for the manifest.
pub fn load_graphs(graph6: Option<&str>, edges: Option<&str>) -> Result<(Vec<Labeled>, Vec<RawInput>), InputError> {
    let mut graphs = Vec::new();
    let mut raws = Vec::new();
    if let Some(spec) = graph6 {
        match graph6_input(spec)? {
            Some(raw) => {
                graphs.extend(graphs_from_graph6(&raw)?);
                raws.push(raw);
            }
            None => {
                let graph = parse_graph6(spec).map_err(|e| InputError::Malformed {
                    source_name: "--graph6".into(),
                    message: format!("line 1: {e}"),
                })?;
                graphs.push(Labeled { label: format!("graph6:{}", spec.trim()), graph });
            }
        }
    }
    if let Some(spec) = edges {
        let raw = read_source(spec)?;
        graphs.push(graph_from_edges(&raw)?);
        raws.push(raw);
    }
    if graphs.is_empty() && raws.is_empty() {
        return Err(InputError::Missing);
    }
    Ok((graphs, raws))
}
