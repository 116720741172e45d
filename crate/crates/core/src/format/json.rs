//! JSON documents.
//!
//! A block is `{"span":[k,n],"levels":[[...],...],"sigma":[...]}` with
//! 1-based `sigma`. A tiling is
//! `{"family":"...","span":[k,n],"blocks":[...],"provenance":"..."}`, plus
//! `"composition":[b_1,...]` for multi-block tilings. A graph is
//! `{"family":"...","span":[k,n],"target":"d","vertices":[...],"edges":[[u,v],...]}`.
//!
//! Writers emit pretty-printed JSON with a trailing newline, so parsing and
//! writing again reproduces the same bytes.

use serde::{Deserialize, Serialize};

use super::FormatError;
use crate::blockgraph::BlockGraph;
use crate::fsequence::{Composition, FSequence};
use crate::geometry::{Block, Layer, ShapeFamily};
use crate::tiling::Tiling;

type Result<T> = std::result::Result<T, FormatError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingDoc {
    pub family: String,
    pub span: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub composition: Option<Composition>,
    #[serde(default)]
    pub blocks: Vec<Block>,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub family: String,
    pub span: [usize; 2],
    /// Clique size of a tiling, as a decimal string.
    pub target: String,
    pub vertices: Vec<Block>,
    pub edges: Vec<[usize; 2]>,
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn tiling_doc(tiling: &Tiling) -> TilingDoc {
    TilingDoc {
        family: tiling.layer().seq().to_string(),
        span: tiling.layer().span(),
        composition: match tiling.shape() {
            ShapeFamily::Multi(c) => Some(c.clone()),
            ShapeFamily::Plain(_) => None,
        },
        blocks: tiling.blocks().to_vec(),
        provenance: tiling.provenance().to_string(),
    }
}

pub fn tiling_to_json(tiling: &Tiling) -> String {
    pretty(&tiling_doc(tiling))
}

/// A layer with no blocks, for drawing the bare skeleton.
pub fn layer_to_json(layer: &Layer) -> String {
    pretty(&TilingDoc {
        family: layer.seq().to_string(),
        span: layer.span(),
        composition: None,
        blocks: Vec::new(),
        provenance: "layer".to_string(),
    })
}

pub fn parse_tiling_doc(input: &str) -> Result<TilingDoc> {
    Ok(serde_json::from_str(input)?)
}

/// Rebuilds a tiling from its document. Blocks are checked for span only;
/// use [`verify_tiling`](crate::tiling::verify_tiling) for validity.
pub fn tiling_from_doc(doc: TilingDoc) -> Result<Tiling> {
    let seq: FSequence = doc.family.parse()?;
    let [k, n] = doc.span;
    let layer = Layer::new(&seq, k, n)?;
    let shape = match doc.composition {
        Some(c) => ShapeFamily::Multi(c),
        None => ShapeFamily::Plain(layer.height()),
    };
    shape.check_fits(&layer)?;
    if let Some(i) = doc.blocks.iter().position(|b| b.span() != layer.span()) {
        return Err(FormatError::Invalid(format!(
            "block {i} spans {:?}, tiling spans {:?}",
            doc.blocks[i].span(),
            layer.span()
        )));
    }
    Ok(Tiling::new(layer, shape, doc.blocks, doc.provenance))
}

pub fn tiling_from_json(input: &str) -> Result<Tiling> {
    tiling_from_doc(parse_tiling_doc(input)?)
}

pub fn block_to_json(block: &Block) -> String {
    pretty(block)
}

pub fn block_from_json(input: &str) -> Result<Block> {
    Ok(serde_json::from_str(input)?)
}

/// Single-line form, used for hashing.
pub fn block_compact(block: &Block) -> String {
    serde_json::to_string(block).expect("blocks serialize")
}

pub fn graph_doc(graph: &BlockGraph) -> GraphDoc {
    GraphDoc {
        family: graph.layer().seq().to_string(),
        span: graph.layer().span(),
        target: graph.target().to_string(),
        vertices: graph.vertices().to_vec(),
        edges: graph.edges().map(|(u, v)| [u, v]).collect(),
    }
}

pub fn graph_to_json(graph: &BlockGraph) -> String {
    pretty(&graph_doc(graph))
}

pub fn parse_graph_doc(input: &str) -> Result<GraphDoc> {
    Ok(serde_json::from_str(input)?)
}

/// Writes any document with the same layout as the other writers.
pub fn to_json<T: Serialize>(value: &T) -> String {
    pretty(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockgraph::build_block_graph;
    use crate::tiling::{construct_multi_tiling, construct_tiling, ChoiceStrategy};

    #[test]
    fn block_schema() {
        let b = Block::from_parts([3, 4], vec![vec![2], vec![1, 4]], vec![1, 2]);
        assert_eq!(block_compact(&b), r#"{"span":[3,4],"levels":[[2],[1,4]],"sigma":[1,2]}"#);
        assert_eq!(block_from_json(&block_to_json(&b)).unwrap(), b);
    }

    #[test]
    fn tiling_round_trip_is_byte_stable() {
        let t = construct_tiling(&FSequence::fibonacci(), 3, 5, ChoiceStrategy::Seeded(3)).unwrap();
        let first = tiling_to_json(&t);
        let back = tiling_from_json(&first).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.provenance(), "construct:seed:3");
        assert_eq!(tiling_to_json(&back), first);
    }

    #[test]
    fn multi_tiling_keeps_its_composition() {
        let t = construct_multi_tiling(&FSequence::natural(), &"2,2".parse().unwrap(), ChoiceStrategy::LowestLabels)
            .unwrap();
        let json = tiling_to_json(&t);
        assert!(json.contains("\"composition\""));
        assert_eq!(tiling_from_json(&json).unwrap().shape(), t.shape());
    }

    #[test]
    fn graph_round_trip_is_byte_stable() {
        let g = build_block_graph(&Layer::new(&FSequence::natural(), 2, 3).unwrap(), 1000).unwrap();
        let first = graph_to_json(&g);
        let doc = parse_graph_doc(&first).unwrap();
        assert_eq!(doc.target, "3");
        assert_eq!(to_json(&doc), first);
    }

    #[test]
    fn malformed_input_reports_location() {
        let err = tiling_from_json("{\n  \"family\": natural\n}").unwrap_err();
        match err {
            FormatError::Json { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(tiling_from_json(r#"{"family":"natural","span":[3,2]}"#).is_err());
    }

    #[test]
    fn layer_document_has_no_blocks() {
        let layer = Layer::new(&FSequence::natural(), 2, 4).unwrap();
        let t = tiling_from_json(&layer_to_json(&layer)).unwrap();
        assert!(t.is_empty());
    }
}
