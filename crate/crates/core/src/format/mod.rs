//! File formats: structured text (JSON-compatible) with rationals written
//! as `p/q` strings, so every value round-trips exactly. Float literals are
//! rejected by the scalar parser.

pub mod dot;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::ProductIndexPair;
use crate::dynamics::{DynamicsError, MapSpace, PLMap};
use crate::geometry::{
    CompactPair, GeometryError, GridSet, Label, Rect, RegionSet, Space, SquareBase,
};
use crate::index::{IndexError, IndexSystem};
use crate::scalar::{format_scalar, parse_scalar, Scalar, ScalarParseError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid rational: {0}")]
    Scalar(#[from] ScalarParseError),
    #[error("unknown space tag `{0}` (expected \"line\" or \"circle\")")]
    UnknownSpace(String),
    #[error("cell must be an endpoint pair, got {0} entries")]
    BadCell(usize),
    #[error("grid resolution k must satisfy 1 <= k <= 10000, got {0}")]
    BadResolution(u64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

impl FormatError {
    fn from_json(err: serde_json::Error) -> Self {
        FormatError::Syntax {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

fn space_tag(space: &Space) -> &'static str {
    match space {
        Space::Line => "line",
        Space::Circle => "circle",
        Space::Square { .. } => "square",
    }
}

fn parse_space(tag: &str) -> Result<Space, FormatError> {
    match tag {
        "line" => Ok(Space::Line),
        "circle" => Ok(Space::Circle),
        other => Err(FormatError::UnknownSpace(other.to_string())),
    }
}

fn cells_to_strings(set: &RegionSet) -> Vec<Vec<String>> {
    set.cells()
        .iter()
        .map(|(a, b)| vec![format_scalar(a), format_scalar(b)])
        .collect()
}

fn cells_from_strings(raw: &[Vec<String>]) -> Result<Vec<(Scalar, Scalar)>, FormatError> {
    raw.iter()
        .map(|pair| {
            if pair.len() != 2 {
                return Err(FormatError::BadCell(pair.len()));
            }
            Ok((parse_scalar(&pair[0])?, parse_scalar(&pair[1])?))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Map files: the vertex list of the graph of f, plus a space tag.

#[derive(Serialize, Deserialize)]
struct MapFile {
    space: String,
    vertices: Vec<Vec<String>>,
}

pub fn map_to_string(map: &PLMap) -> String {
    let file = MapFile {
        space: match map.space() {
            MapSpace::Line => "line".to_string(),
            MapSpace::Circle => "circle".to_string(),
        },
        vertices: map
            .vertices()
            .iter()
            .map(|(x, y)| vec![format_scalar(x), format_scalar(y)])
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("static schema")
}

pub fn map_from_str(text: &str) -> Result<PLMap, FormatError> {
    let file: MapFile = serde_json::from_str(text).map_err(FormatError::from_json)?;
    let space = match parse_space(&file.space)? {
        Space::Line => MapSpace::Line,
        Space::Circle => MapSpace::Circle,
        Space::Square { .. } => return Err(FormatError::UnknownSpace(file.space)),
    };
    let vertices = cells_from_strings(&file.vertices)?;
    Ok(PLMap::from_vertices(space, vertices)?)
}

// ---------------------------------------------------------------------------
// System files: labeled pairs plus the precedes edges.

#[derive(Serialize, Deserialize)]
struct PairFile {
    #[serde(rename = "N")]
    n: Vec<Vec<String>>,
    #[serde(rename = "L")]
    l: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    space: String,
    pairs: BTreeMap<String, PairFile>,
    edges: Vec<Vec<String>>,
}

pub fn system_to_string(system: &IndexSystem) -> String {
    let file = SystemFile {
        space: space_tag(system.space()).to_string(),
        pairs: system
            .pairs()
            .map(|p| {
                (
                    p.label.0.clone(),
                    PairFile {
                        n: cells_to_strings(p.n()),
                        l: cells_to_strings(p.l()),
                    },
                )
            })
            .collect(),
        edges: system
            .edges()
            .map(|(a, b)| vec![a.0.clone(), b.0.clone()])
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("static schema")
}

pub fn system_from_str(text: &str) -> Result<IndexSystem, FormatError> {
    let file: SystemFile = serde_json::from_str(text).map_err(FormatError::from_json)?;
    let space = parse_space(&file.space)?;
    let mut pairs = Vec::new();
    for (label, pair) in &file.pairs {
        let n = RegionSet::normalize(&space, cells_from_strings(&pair.n)?)?;
        let l = RegionSet::normalize(&space, cells_from_strings(&pair.l)?)?;
        pairs.push(CompactPair::new(Label::new(label.clone()), n, l)?);
    }
    let mut edges = Vec::new();
    for e in &file.edges {
        if e.len() != 2 {
            return Err(FormatError::BadCell(e.len()));
        }
        edges.push((Label::new(e[0].clone()), Label::new(e[1].clone())));
    }
    Ok(IndexSystem::new(pairs, edges)?)
}

// ---------------------------------------------------------------------------
// Product-pair files: box or rectangle lists over the quantized square.

#[derive(Serialize, Deserialize)]
struct ProductPairFile {
    base: String,
    k: u64,
    #[serde(rename = "N")]
    n: Vec<Vec<Vec<String>>>,
    #[serde(rename = "L")]
    l: Vec<Vec<Vec<String>>>,
}

fn rects_from_file(raw: &[Vec<Vec<String>>]) -> Result<Vec<Rect>, FormatError> {
    let mut out = Vec::new();
    for rect in raw {
        if rect.len() != 2 {
            return Err(FormatError::BadCell(rect.len()));
        }
        let x = cells_from_strings(&rect[0..1])?.remove(0);
        let y = cells_from_strings(&rect[1..2])?.remove(0);
        out.push(Rect { x, y });
    }
    Ok(out)
}

pub fn product_pair_rects_from_str(
    text: &str,
) -> Result<(SquareBase, u64, Vec<Rect>, Vec<Rect>), FormatError> {
    let file: ProductPairFile = serde_json::from_str(text).map_err(FormatError::from_json)?;
    if file.k == 0 || file.k > 10_000 {
        return Err(FormatError::BadResolution(file.k));
    }
    let base = match file.base.as_str() {
        "line" => SquareBase::Line,
        "circle" => SquareBase::Circle,
        other => return Err(FormatError::UnknownSpace(other.to_string())),
    };
    Ok((
        base,
        file.k,
        rects_from_file(&file.n)?,
        rects_from_file(&file.l)?,
    ))
}

fn grid_to_rects(set: &GridSet) -> Vec<Vec<Vec<String>>> {
    set.boxes()
        .map(|(i, j)| {
            let (x0, x1) = set.index_cell(i);
            let (y0, y1) = set.index_cell(j);
            vec![
                vec![format_scalar(&x0), format_scalar(&x1)],
                vec![format_scalar(&y0), format_scalar(&y1)],
            ]
        })
        .collect()
}

pub fn product_pair_to_string(pair: &ProductIndexPair) -> String {
    let file = ProductPairFile {
        base: match pair.base() {
            SquareBase::Line => "line".to_string(),
            SquareBase::Circle => "circle".to_string(),
        },
        k: pair.k(),
        n: grid_to_rects(pair.n()),
        l: grid_to_rects(pair.l()),
    };
    serde_json::to_string_pretty(&file).expect("static schema")
}

// ---------------------------------------------------------------------------
// Word files: a list of finite words, or an eventually periodic word.

#[derive(Serialize, Deserialize, Default)]
pub struct WordsFile {
    #[serde(default)]
    pub words: Vec<Vec<String>>,
    #[serde(default)]
    pub preperiod: Vec<String>,
    #[serde(default)]
    pub period: Vec<String>,
}

pub fn words_from_str(text: &str) -> Result<WordsFile, FormatError> {
    serde_json::from_str(text).map_err(FormatError::from_json)
}

pub fn labels(raw: &[String]) -> Vec<Label> {
    raw.iter().map(|s| Label::new(s.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn map_round_trip() {
        for map in [fixtures::tent_map(), fixtures::doubling_map()] {
            let text = map_to_string(&map);
            let back = map_from_str(&text).unwrap();
            assert_eq!(back, map);
        }
    }

    #[test]
    fn system_round_trip() {
        let eps = fixtures::default_eps();
        for system in [
            fixtures::tent_system(&eps),
            fixtures::doubling_system(&eps),
            fixtures::trivial_tent_system(&eps),
        ] {
            let text = system_to_string(&system);
            let back = system_from_str(&text).unwrap();
            assert_eq!(back.len(), system.len());
            assert_eq!(back.edge_count(), system.edge_count());
            for label in system.labels() {
                assert_eq!(back.pair(label).unwrap(), system.pair(label).unwrap());
            }
            // Byte-identical re-serialization (canonical form).
            assert_eq!(system_to_string(&back), text);
        }
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = system_from_str("{\n  \"space\": \"line\",\n  broken").unwrap_err();
        match err {
            FormatError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn float_literals_rejected() {
        let text = r#"{"space":"line","vertices":[["0","0"],["0.5","1"]]}"#;
        assert!(matches!(
            map_from_str(text),
            Err(FormatError::Scalar(_))
        ));
    }
}
