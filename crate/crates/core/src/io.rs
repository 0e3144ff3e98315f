//! JSON file formats.
//!
//! Exact values are strings: rationals as `"p/q"` (or `"p"`), quadratic
//! elements as `{"base", "coeff", "radicand"}`. A signature is
//! `{"arity": n, "weights": [...]}` with either `n + 1` symmetric weights
//! or `2^n` dense entries (slot 0 is the most significant bit).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{parse_rat, ArithError, QuadExt, Rat};
use crate::grid::rx3c::SetSystem;
use crate::grid::{GridError, Polarity, Port, SignatureGrid};
use crate::planar::holographic::{EmbeddedHypergraph, PlanarGrid};
use crate::planar::{PlanarEdge, PlanarError, PlanarGraph};
use crate::sig::{SigError, SymSig, Tensor};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Sig(#[from] SigError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Planar(#[from] PlanarError),
}

fn format_err<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Format(msg.into()))
}

/// A weight written as a string or a JSON integer.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn to_rat(&self) -> Result<Rat, IoError> {
        match self {
            Num::Int(n) => Ok(Rat::from_integer((*n).into())),
            Num::Str(s) => Ok(parse_rat(s)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
enum Id {
    Num(i64),
    Str(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct SigFile {
    arity: usize,
    weights: Vec<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SigSpec {
    File(SigFile),
    Text(String),
}

pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

pub fn quad_to_json(q: &QuadExt) -> Value {
    json!({
        "base": q.base().to_string(),
        "coeff": q.coeff().to_string(),
        "radicand": q.radicand().to_string(),
    })
}

pub fn quad_from_json(v: &Value) -> Result<QuadExt, IoError> {
    let field = |k: &str| -> Result<Rat, IoError> {
        match v.get(k) {
            Some(Value::String(s)) => Ok(parse_rat(s)?),
            Some(Value::Number(n)) if n.is_i64() => Ok(Rat::from_integer(n.as_i64().unwrap().into())),
            _ => format_err(format!("quadratic value needs a {k:?} field")),
        }
    };
    Ok(QuadExt::new(field("base")?, field("coeff")?, field("radicand")?)?)
}

pub fn sig_to_json(s: &SymSig) -> Value {
    json!({
        "arity": s.arity(),
        "weights": s.values().iter().map(rat_to_string).collect::<Vec<_>>(),
    })
}

pub fn tensor_to_json(t: &Tensor) -> Value {
    json!({
        "arity": t.arity(),
        "weights": t.entries().iter().map(rat_to_string).collect::<Vec<_>>(),
    })
}

/// Parses `"x0,x1,x2,x3"`, optionally bracketed, entries `"p/q"`.
pub fn parse_signature(text: &str) -> Result<SymSig, IoError> {
    let t = text.trim();
    let t = t.strip_prefix('[').unwrap_or(t);
    let t = t.strip_suffix(']').unwrap_or(t);
    if t.trim().is_empty() {
        return format_err("empty signature");
    }
    let values = t.split(',').map(parse_rat).collect::<Result<Vec<_>, _>>()?;
    Ok(SymSig::new(values))
}

fn tensor_from_file(f: &SigFile) -> Result<Tensor, IoError> {
    let w = f.weights.iter().map(Num::to_rat).collect::<Result<Vec<_>, _>>()?;
    if w.len() == f.arity + 1 {
        Ok(SymSig::new(w).to_tensor())
    } else if f.arity < usize::BITS as usize && w.len() == 1usize << f.arity {
        Ok(Tensor::new(f.arity, w)?)
    } else {
        format_err(format!(
            "arity {} needs {} symmetric or 2^{} dense weights, got {}",
            f.arity,
            f.arity + 1,
            f.arity,
            w.len()
        ))
    }
}

fn tensor_from_spec(s: &SigSpec) -> Result<Tensor, IoError> {
    match s {
        SigSpec::File(f) => tensor_from_file(f),
        SigSpec::Text(t) => Ok(parse_signature(t)?.to_tensor()),
    }
}

/// Reads a signature file or an inline signature string.
pub fn signature_from_json(text: &str) -> Result<Tensor, IoError> {
    let spec: SigSpec = serde_json::from_str(text)?;
    tensor_from_spec(&spec)
}

#[derive(Debug, Deserialize)]
struct GridVertex {
    id: Id,
    side: String,
    sig: SigSpec,
    #[serde(default)]
    polarity: Option<Vec<String>>,
    #[serde(default)]
    rotation: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
struct GridFile {
    vertices: Vec<GridVertex>,
    #[serde(default)]
    edges: Vec<(Id, usize, Id, usize)>,
    #[serde(default)]
    dangling: Vec<(Id, usize)>,
}

fn polarity(s: &str) -> Result<Polarity, IoError> {
    match s {
        "L" => Ok(Polarity::L),
        "R" => Ok(Polarity::R),
        other => format_err(format!("polarity must be \"L\" or \"R\", got {other:?}")),
    }
}

/// A grid file, with the per-vertex rotations when every vertex has one.
pub struct GridInput {
    pub grid: SignatureGrid,
    pub rotation: Option<Vec<Vec<usize>>>,
}

impl GridInput {
    /// The grid with its rotation data, which must be present.
    pub fn planar(self) -> Result<PlanarGrid, IoError> {
        let rotation = match self.rotation {
            Some(r) => r,
            None => return format_err("planar solving needs a \"rotation\" on every vertex"),
        };
        Ok(PlanarGrid::new(self.grid, rotation)?)
    }
}

pub fn grid_from_json(text: &str) -> Result<GridInput, IoError> {
    let file: GridFile = serde_json::from_str(text)?;
    let mut index = HashMap::new();
    let mut grid = SignatureGrid::new();
    let mut rotations = Vec::new();
    for (i, v) in file.vertices.iter().enumerate() {
        if index.insert(v.id.clone(), i).is_some() {
            return format_err(format!("duplicate vertex id {:?}", v.id));
        }
        let sig = tensor_from_spec(&v.sig)?;
        let pol = match (v.side.as_str(), &v.polarity) {
            ("L", None) => vec![Polarity::L; sig.arity()],
            ("R", None) => vec![Polarity::R; sig.arity()],
            ("mixed", Some(p)) => p.iter().map(|s| polarity(s)).collect::<Result<Vec<_>, _>>()?,
            ("mixed", None) => return format_err(format!("mixed vertex {:?} needs a polarity list", v.id)),
            (s @ ("L" | "R"), Some(p)) => {
                let side = polarity(s)?;
                let p = p.iter().map(|s| polarity(s)).collect::<Result<Vec<_>, _>>()?;
                if p.iter().any(|&x| x != side) {
                    return format_err(format!("vertex {:?}: polarity contradicts side {s}", v.id));
                }
                p
            }
            (other, _) => return format_err(format!("side must be L, R or mixed, got {other:?}")),
        };
        if pol.len() != sig.arity() {
            return Err(GridError::PolarityCount {
                vertex: i,
                arity: sig.arity(),
                found: pol.len(),
            }
            .into());
        }
        grid.add_vertex(sig, pol);
        rotations.push(v.rotation.clone());
    }
    let lookup = |id: &Id| -> Result<usize, IoError> {
        index
            .get(id)
            .copied()
            .ok_or_else(|| IoError::Format(format!("unknown vertex id {id:?}")))
    };
    for (a, sa, b, sb) in &file.edges {
        grid.connect(Port::new(lookup(a)?, *sa), Port::new(lookup(b)?, *sb));
    }
    for (a, sa) in &file.dangling {
        grid.add_dangling(Port::new(lookup(a)?, *sa));
    }
    grid.validate()?;
    let rotation = rotations.into_iter().collect::<Option<Vec<_>>>();
    Ok(GridInput { grid, rotation })
}

fn polarity_str(p: Polarity) -> &'static str {
    match p {
        Polarity::L => "L",
        Polarity::R => "R",
    }
}

/// Grid file with vertex ids `0, 1, …`.
pub fn grid_to_json(g: &SignatureGrid, rotation: Option<&[Vec<usize>]>) -> Value {
    let vertices: Vec<Value> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let side = if v.polarity.iter().all(|&p| p == Polarity::L) {
                "L"
            } else if v.polarity.iter().all(|&p| p == Polarity::R) {
                "R"
            } else {
                "mixed"
            };
            let mut o = json!({ "id": i, "side": side, "sig": tensor_to_json(&v.signature) });
            if side == "mixed" {
                o["polarity"] = json!(v.polarity.iter().map(|&p| polarity_str(p)).collect::<Vec<_>>());
            }
            if let Some(r) = rotation {
                o["rotation"] = json!(r[i]);
            }
            o
        })
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|(a, b)| json!([a.vertex, a.slot, b.vertex, b.slot]))
        .collect();
    let dangling: Vec<Value> = g.dangling().iter().map(|p| json!([p.vertex, p.slot])).collect();
    json!({ "vertices": vertices, "edges": edges, "dangling": dangling })
}

#[derive(Debug, Deserialize)]
struct HyperFile {
    ground: Vec<i64>,
    sets: Vec<[i64; 3]>,
    #[serde(default)]
    rotation: Option<Vec<Vec<(usize, usize)>>>,
}

/// A hypergraph with its optional embedding (`rotation[i]` lists element
/// `ground[i]`'s incidences as `[set index, position]`).
pub fn hypergraph_from_json(text: &str) -> Result<(SetSystem, Option<Vec<Vec<(usize, usize)>>>), IoError> {
    let f: HyperFile = serde_json::from_str(text)?;
    Ok((SetSystem::new(f.ground, f.sets), f.rotation))
}

pub fn embedded_hypergraph_from_json(text: &str) -> Result<EmbeddedHypergraph, IoError> {
    let (s, r) = hypergraph_from_json(text)?;
    Ok(EmbeddedHypergraph::new(s, r)?)
}

pub fn hypergraph_to_json(h: &EmbeddedHypergraph) -> Value {
    json!({ "ground": h.system.ground, "sets": h.system.sets, "rotation": h.rotation })
}

#[derive(Debug, Deserialize)]
struct PlanarVertex {
    id: Id,
    rotation: Vec<usize>,
}

#[derive(Debug, Deserialize)]
struct PlanarEdgeFile {
    ends: (Id, Id),
    weight: Num,
}

#[derive(Debug, Deserialize)]
struct PlanarFile {
    vertices: Vec<PlanarVertex>,
    edges: Vec<PlanarEdgeFile>,
}

/// Planar graph file; `rotation` lists incident edge indices in cyclic
/// order.
pub fn planar_graph_from_json(text: &str) -> Result<PlanarGraph, IoError> {
    let f: PlanarFile = serde_json::from_str(text)?;
    let mut index = HashMap::new();
    for (i, v) in f.vertices.iter().enumerate() {
        if index.insert(v.id.clone(), i).is_some() {
            return format_err(format!("duplicate vertex id {:?}", v.id));
        }
    }
    let lookup = |id: &Id| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| IoError::Format(format!("unknown vertex id {id:?}")))
    };
    let edges = f
        .edges
        .iter()
        .map(|e| {
            Ok(PlanarEdge {
                ends: [lookup(&e.ends.0)?, lookup(&e.ends.1)?],
                weight: e.weight.to_rat()?,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    let rotation = f.vertices.iter().map(|v| v.rotation.clone()).collect();
    Ok(PlanarGraph::from_rotation(f.vertices.len(), edges, rotation)?)
}

pub fn planar_graph_to_json(g: &PlanarGraph) -> Value {
    let rot = g.edge_rotation();
    let vertices: Vec<Value> = rot
        .iter()
        .enumerate()
        .map(|(i, r)| json!({ "id": i, "rotation": r }))
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!({ "ends": e.ends, "weight": rat_to_string(&e.weight) }))
        .collect();
    json!({ "vertices": vertices, "edges": edges })
}
