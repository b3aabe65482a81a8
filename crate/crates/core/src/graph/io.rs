//! Whitespace-separated edge lists in the SNAP style.
//!
//! One record per line: `u v` or `u v p` for social edges, `u v` for ad-hoc
//! links. A line holding a single id declares a node with no edges. Lines
//! starting with `#` and blank lines are skipped. Labels are arbitrary
//! non-negative integers and are compacted to dense ids in ascending label
//! order.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{AdhocGraph, LayerMapping, NodeId, SocialGraph};
use crate::error::{Error, Result};

/// How social edge records are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub enum SocialFormat {
    /// Each record is one directed edge.
    #[default]
    Directed,
    /// Each record adds both directions with the same probability.
    Undirected,
}

impl std::str::FromStr for SocialFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "directed" => Ok(SocialFormat::Directed),
            "undirected" => Ok(SocialFormat::Undirected),
            x => Err(Error::domain(format!("unknown social format `{x}`"))),
        }
    }
}

struct Record {
    line: usize,
    u: u64,
    v: Option<u64>,
    p: Option<f64>,
}

fn records<R: BufRead>(reader: R, allow_probability: bool) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let max_fields = if allow_probability { 3 } else { 2 };
        if fields.len() > max_fields {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected at most {max_fields} fields, found {}", fields.len()),
            });
        }
        let id = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid node id `{s}`"),
            })
        };
        let u = id(fields[0])?;
        let v = fields.get(1).map(|s| id(s)).transpose()?;
        let p = match fields.get(2) {
            None => None,
            Some(s) => {
                let p: f64 = s.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid probability `{s}`"),
                })?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Probability { line: line_no, value: p });
                }
                Some(p)
            }
        };
        if v == Some(u) {
            return Err(Error::SelfLoop(u));
        }
        out.push(Record { line: line_no, u, v, p });
    }
    Ok(out)
}

fn compact(records: &[Record]) -> (Vec<u64>, HashMap<u64, NodeId>) {
    let mut labels: Vec<u64> = records
        .iter()
        .flat_map(|r| std::iter::once(r.u).chain(r.v))
        .collect();
    labels.sort_unstable();
    labels.dedup();
    let index = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, NodeId::from(i)))
        .collect();
    (labels, index)
}

pub fn load_social<R: BufRead>(reader: R, format: SocialFormat) -> Result<SocialGraph> {
    let records = records(reader, true)?;
    let (labels, index) = compact(&records);
    let mut edges = Vec::with_capacity(records.len());
    for r in &records {
        let Some(v) = r.v else { continue };
        let (u, v) = (index[&r.u], index[&v]);
        edges.push((u, v, r.p));
        if format == SocialFormat::Undirected {
            edges.push((v, u, r.p));
        }
    }
    SocialGraph::with_labels(labels, edges)
}

pub fn load_adhoc<R: BufRead>(reader: R) -> Result<AdhocGraph> {
    let records = records(reader, false)?;
    let (labels, index) = compact(&records);
    let edges = records
        .iter()
        .filter_map(|r| r.v.map(|v| (index[&r.u], index[&v])));
    AdhocGraph::with_labels(labels, edges)
}

/// Reads `social_label adhoc_label` pairs.
pub fn load_mapping<R: BufRead>(
    reader: R,
    social: &SocialGraph,
    adhoc: &AdhocGraph,
) -> Result<LayerMapping> {
    let records = records(reader, false)?;
    let lookup = |labels: &[u64], l: u64, line: usize| -> Result<NodeId> {
        labels
            .binary_search(&l)
            .map(NodeId::from)
            .map_err(|_| Error::Parse {
                line,
                message: format!("unknown node label {l}"),
            })
    };
    let n = social.node_count();
    let mut perm = vec![NodeId(u32::MAX); n];
    for r in &records {
        let v = r.v.ok_or_else(|| Error::Parse {
            line: r.line,
            message: "expected `social adhoc`".into(),
        })?;
        let s = lookup(social.labels(), r.u, r.line)?;
        let a = lookup(adhoc.labels(), v, r.line)?;
        perm[s.index()] = a;
    }
    if let Some(s) = perm.iter().position(|a| a.0 == u32::MAX) {
        return Err(Error::Mapping(format!(
            "social node {} has no ad-hoc host",
            social.labels()[s]
        )));
    }
    LayerMapping::from_permutation(perm)
}

pub fn write_social<W: Write>(g: &SocialGraph, mut w: W) -> std::io::Result<()> {
    for v in g.nodes() {
        if g.friends(v).is_empty() {
            writeln!(w, "{}", g.label(v))?;
        }
    }
    for (u, v, p) in g.edges() {
        match p {
            Some(p) => writeln!(w, "{} {} {}", g.label(u), g.label(v), p)?,
            None => writeln!(w, "{} {}", g.label(u), g.label(v))?,
        }
    }
    Ok(())
}

pub fn write_adhoc<W: Write>(g: &AdhocGraph, mut w: W) -> std::io::Result<()> {
    let labels = g.labels();
    for v in g.nodes() {
        if g.degree(v) == 0 {
            writeln!(w, "{}", labels[v.index()])?;
        }
    }
    for (u, v) in g.edges() {
        writeln!(w, "{} {}", labels[u.index()], labels[v.index()])?;
    }
    Ok(())
}

pub fn write_mapping<W: Write>(
    m: &LayerMapping,
    social: &SocialGraph,
    adhoc: &AdhocGraph,
    mut w: W,
) -> std::io::Result<()> {
    for s in social.nodes() {
        let a = m.adhoc_of(s);
        writeln!(w, "{} {}", social.label(s), adhoc.labels()[a.index()])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn social(text: &str) -> Result<SocialGraph> {
        load_social(text.as_bytes(), SocialFormat::Directed)
    }

    #[test]
    fn two_probabilistic_edges() {
        let g = social("0 1 0.5\n1 0 0.2\n").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge(NodeId(0), NodeId(1)), Some(Some(0.5)));
        assert_eq!(g.edge(NodeId(1), NodeId(0)), Some(Some(0.2)));
    }

    #[test]
    fn empty_stream() {
        let g = social("").unwrap();
        assert_eq!(g.node_count(), 0);
        let a = load_adhoc("# nothing here\n\n".as_bytes()).unwrap();
        assert_eq!(a.node_count(), 0);
    }

    #[test]
    fn labels_are_compacted_in_order() {
        let g = social("# Nodes: 3\n10 30\n30 20 0.1\n").unwrap();
        assert_eq!(g.labels(), &[10, 20, 30]);
        assert_eq!(g.out_neighbors(NodeId(0)), &[NodeId(2)]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match social("0 1\n0 x\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match social("0 1 0.3 7\n") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match social("0 1\n1 2 1.25\n") {
            Err(Error::Probability { line: 2, value }) => assert_eq!(value, 1.25),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load_adhoc("0 1\n2 2\n".as_bytes()), Err(Error::SelfLoop(2))));
        assert!(matches!(load_adhoc("0 1 0.5\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn undirected_format_adds_both_directions() {
        let g = load_social("1 2 0.3\n".as_bytes(), SocialFormat::Undirected).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge(NodeId(1), NodeId(0)), Some(Some(0.3)));
    }

    #[test]
    fn adhoc_path_and_dedup() {
        let g = load_adhoc("0 1\n1 2\n".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.neighbors(NodeId(1)), &[NodeId(0), NodeId(2)]);
        let g = load_adhoc("0 1\n0 1\n".as_bytes()).unwrap();
        assert_eq!(g.degree(NodeId(0)), 1);
    }

    #[test]
    fn isolated_nodes_survive_a_round_trip() {
        let g = social("5\n1 2 0.25\n").unwrap();
        assert_eq!(g.node_count(), 3);
        let mut buf = Vec::new();
        write_social(&g, &mut buf).unwrap();
        assert_eq!(social(std::str::from_utf8(&buf).unwrap()).unwrap(), g);
    }

    #[test]
    fn mapping_file_uses_labels() {
        let s = social("10 20\n20 30\n").unwrap();
        let a = load_adhoc("7 8\n8 9\n".as_bytes()).unwrap();
        let m = load_mapping("10 9\n20 7\n30 8\n".as_bytes(), &s, &a).unwrap();
        assert_eq!(m.adhoc_of(NodeId(0)), NodeId(2));
        let mut buf = Vec::new();
        write_mapping(&m, &s, &a, &mut buf).unwrap();
        assert_eq!(load_mapping(buf.as_slice(), &s, &a).unwrap(), m);
        assert!(load_mapping("10 9\n".as_bytes(), &s, &a).is_err());
    }
}
