//! Non-commuting graphs and DIMACS exchange.

use std::io::{self, BufRead, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::group::{GroupTable, Subset};

/// Vertex count above which building a graph needs `allow_big_memory`.
pub const DEFAULT_VERTEX_CAP: usize = 16_384;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("group is abelian; its non-commuting graph is empty")]
    Abelian,
    #[error("graph is already collapsed by the center")]
    AlreadyCollapsed,
    #[error("graph has no group center attached")]
    NoCenter,
    #[error("{vertices} vertices exceeds the cap of {limit} without the big-memory flag")]
    TooLarge { vertices: usize, limit: usize },
    #[error("DIMACS line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Simple undirected graph with bitset adjacency rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    rows: Vec<BitSet>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        BitGraph {
            rows: vec![BitSet::new(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = BitGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub(crate) fn from_rows(rows: Vec<BitSet>) -> Self {
        BitGraph { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds `{u, v}`; self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.rows[u].insert(v);
            self.rows[v].insert(u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, r)| r.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Subgraph induced on `vs`, renumbered in the given order.
    pub fn induced(&self, vs: &[usize]) -> BitGraph {
        let mut g = BitGraph::new(vs.len());
        for (i, &u) in vs.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn is_symmetric_irreflexive(&self) -> bool {
        (0..self.len()).all(|u| {
            !self.rows[u].contains(u) && self.rows[u].iter().all(|v| self.rows[v].contains(u))
        })
    }
}

/// Non-commuting graph over group elements.
#[derive(Clone, Debug)]
pub struct NcGraph {
    vertices: Vec<usize>,
    graph: BitGraph,
    collapsed: bool,
    /// Elements excluded as central, when the graph came from a group.
    center: Option<Vec<usize>>,
    coset_map: Option<Vec<u32>>,
    label: Option<String>,
}

/// Marks an element with no vertex in a coset map.
pub const NO_VERTEX: u32 = u32::MAX;

impl NcGraph {
    /// The graph on `G ∖ Z(G)`.
    pub fn build(g: &GroupTable, allow_big_memory: bool) -> Result<Self, GraphError> {
        Self::of_subgroup(g, &g.full_subset(), allow_big_memory)
    }

    /// The graph of a subgroup `H` on `H ∖ Z(H)`.
    pub fn of_subgroup(
        g: &GroupTable,
        h: &Subset,
        allow_big_memory: bool,
    ) -> Result<Self, GraphError> {
        let z = if h.count() == g.order() {
            g.center().clone()
        } else {
            g.center_of(h)
        };
        let vertices: Vec<usize> = h.iter().filter(|&x| !z.contains(x)).collect();
        if vertices.is_empty() {
            return Err(GraphError::Abelian);
        }
        check_cap(vertices.len(), allow_big_memory)?;
        let graph = commutation_graph(g, &vertices);
        Ok(NcGraph {
            vertices,
            graph,
            collapsed: false,
            center: Some(z.to_vec()),
            coset_map: None,
            label: Some(g.family().slug()),
        })
    }

    /// One vertex per non-trivial coset of the center, represented by its
    /// smallest element; adjacency is induced from the representatives.
    pub fn collapse_by_center(&self, g: &GroupTable) -> Result<Self, GraphError> {
        if self.collapsed {
            return Err(GraphError::AlreadyCollapsed);
        }
        let center = self.center.as_ref().ok_or(GraphError::NoCenter)?;
        let mut coset_map = vec![NO_VERTEX; g.order()];
        let mut reps = Vec::new();
        let mut rep_pos = Vec::new();
        for (pos, &v) in self.vertices.iter().enumerate() {
            if coset_map[v] != NO_VERTEX {
                continue;
            }
            let id = reps.len() as u32;
            for &z in center {
                coset_map[g.mul(v, z)] = id;
            }
            reps.push(v);
            rep_pos.push(pos);
        }
        Ok(NcGraph {
            vertices: reps,
            graph: self.graph.induced(&rep_pos),
            collapsed: true,
            center: self.center.clone(),
            coset_map: Some(coset_map),
            label: self.label.clone(),
        })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn graph(&self) -> &BitGraph {
        &self.graph
    }

    pub fn is_collapsed(&self) -> bool {
        self.collapsed
    }

    /// Element index to vertex, present only on collapsed graphs.
    pub fn coset_map(&self) -> Option<&[u32]> {
        self.coset_map.as_deref()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Maps vertex numbers back to group elements.
    pub fn elements_of(&self, vs: &[usize]) -> Vec<usize> {
        vs.iter().map(|&v| self.vertices[v]).collect()
    }

    /// DIMACS text with `c` comment lines carrying the family, collapse flag
    /// and the element index behind each vertex.
    pub fn write_dimacs(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "c non-commuting graph")?;
        if let Some(l) = &self.label {
            writeln!(w, "c family {l}")?;
        }
        writeln!(w, "c collapsed {}", self.collapsed)?;
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        writeln!(w, "c vertices {}", vs.join(" "))?;
        write_dimacs_body(&self.graph, w)
    }

    pub fn read_dimacs(r: impl BufRead) -> Result<Self, GraphError> {
        let mut label = None;
        let mut collapsed = false;
        let mut vertices: Option<Vec<usize>> = None;
        let graph = read_dimacs_inner(r, |line, text| {
            let mut parts = text.splitn(2, ' ');
            match (parts.next(), parts.next()) {
                (Some("family"), Some(v)) => label = Some(v.trim().to_string()),
                (Some("collapsed"), Some(v)) => collapsed = v.trim() == "true",
                (Some("vertices"), Some(v)) => {
                    let parsed = v
                        .split_whitespace()
                        .map(str::parse)
                        .collect::<Result<Vec<usize>, _>>()
                        .map_err(|e| dimacs_err(line, format!("vertex list: {e}")))?;
                    vertices = Some(parsed);
                }
                _ => {}
            }
            Ok(())
        })?;
        let vertices = match vertices {
            Some(v) if v.len() == graph.len() => v,
            Some(_) => return Err(dimacs_err(0, "vertex list length differs from header")),
            None => (0..graph.len()).collect(),
        };
        Ok(NcGraph {
            vertices,
            graph,
            collapsed,
            center: None,
            coset_map: None,
            label,
        })
    }
}

fn check_cap(n: usize, allow_big_memory: bool) -> Result<(), GraphError> {
    if n > DEFAULT_VERTEX_CAP && !allow_big_memory {
        return Err(GraphError::TooLarge {
            vertices: n,
            limit: DEFAULT_VERTEX_CAP,
        });
    }
    Ok(())
}

fn commutation_graph(g: &GroupTable, vertices: &[usize]) -> BitGraph {
    let n = vertices.len();
    let rows: Vec<BitSet> = vertices
        .par_iter()
        .map(|&u| {
            let mut row = BitSet::new(n);
            let eu = g.encoding(u);
            for (j, &v) in vertices.iter().enumerate() {
                if !g.carrier().commutes(eu, g.encoding(v)) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    BitGraph::from_rows(rows)
}

fn dimacs_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Dimacs {
        line,
        msg: msg.into(),
    }
}

/// `p edge n m` followed by 1-indexed `e u v` lines.
pub fn write_dimacs_body(g: &BitGraph, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "p edge {} {}", g.len(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "e {} {}", u + 1, v + 1)?;
    }
    Ok(())
}

/// Plain DIMACS reader; comments are ignored.
pub fn read_dimacs(r: impl BufRead) -> Result<BitGraph, GraphError> {
    read_dimacs_inner(r, |_, _| Ok(()))
}

fn read_dimacs_inner(
    r: impl BufRead,
    mut on_comment: impl FnMut(usize, &str) -> Result<(), GraphError>,
) -> Result<BitGraph, GraphError> {
    let mut graph: Option<BitGraph> = None;
    let mut declared = 0usize;
    let mut seen = 0usize;
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let no = i + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut f = t.split_whitespace();
        match f.next() {
            Some("c") => on_comment(no, t[1..].trim_start())?,
            Some("p") => {
                if graph.is_some() {
                    return Err(dimacs_err(no, "second problem line"));
                }
                let kind = f.next();
                if !matches!(kind, Some("edge") | Some("col")) {
                    return Err(dimacs_err(no, "expected `p edge n m`"));
                }
                let n: usize = parse_field(f.next(), no)?;
                declared = parse_field(f.next(), no)?;
                if f.next().is_some() {
                    return Err(dimacs_err(no, "trailing fields in problem line"));
                }
                graph = Some(BitGraph::new(n));
            }
            Some("e") => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| dimacs_err(no, "edge before problem line"))?;
                let u: usize = parse_field(f.next(), no)?;
                let v: usize = parse_field(f.next(), no)?;
                let n = g.len();
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(dimacs_err(no, format!("endpoint out of range 1..={n}")));
                }
                if u == v {
                    return Err(dimacs_err(no, "self-loop"));
                }
                if g.has_edge(u - 1, v - 1) {
                    return Err(dimacs_err(no, "duplicate edge"));
                }
                g.add_edge(u - 1, v - 1);
                seen += 1;
            }
            Some(other) => return Err(dimacs_err(no, format!("unknown line type `{other}`"))),
            None => {}
        }
    }
    let g = graph.ok_or_else(|| dimacs_err(0, "missing problem line"))?;
    if seen != declared {
        return Err(dimacs_err(
            0,
            format!("header declares {declared} edges, found {seen}"),
        ));
    }
    Ok(g)
}

fn parse_field(tok: Option<&str>, line: usize) -> Result<usize, GraphError> {
    tok.ok_or_else(|| dimacs_err(line, "missing field"))?
        .parse()
        .map_err(|e| dimacs_err(line, format!("bad number: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;

    #[test]
    fn vertex_counts() {
        let s3 = build_named(NamedGroup::Symmetric(3)).unwrap();
        assert_eq!(NcGraph::build(&s3, false).unwrap().vertices().len(), 5);
        let psl = build_linear(LinearKind::Psl, 2, 7).unwrap();
        assert_eq!(NcGraph::build(&psl, false).unwrap().vertices().len(), 167);
        let sl = build_linear(LinearKind::Sl, 2, 5).unwrap();
        let g = NcGraph::build(&sl, false).unwrap();
        assert_eq!(g.vertices().len(), 118);
        assert_eq!(g.collapse_by_center(&sl).unwrap().vertices().len(), 59);
    }

    #[test]
    fn abelian_group_is_rejected() {
        let d4 = build_named(NamedGroup::Dihedral(2)).unwrap();
        assert!(matches!(
            NcGraph::build(&d4, false),
            Err(GraphError::Abelian)
        ));
    }

    #[test]
    fn degree_identity_and_no_isolated_vertices() {
        let g = build_linear(LinearKind::Psl, 2, 7).unwrap();
        let nc = NcGraph::build(&g, false).unwrap();
        assert!(nc.graph().is_symmetric_irreflexive());
        let mut total = 0;
        for (v, &x) in nc.vertices().iter().enumerate() {
            let d = nc.graph().degree(v);
            assert_eq!(d, g.order() - g.centralizer(x).count());
            assert!(d > 0);
            total += d;
        }
        assert_eq!(nc.graph().edge_count(), total / 2);
    }

    #[test]
    fn collapse_extraspecial() {
        let g = build_extraspecial(3, 2, ExtraspecialForm::Plus).unwrap();
        let nc = NcGraph::build(&g, false).unwrap();
        assert_eq!(nc.vertices().len(), 240);
        let c = nc.collapse_by_center(&g).unwrap();
        assert_eq!(c.vertices().len(), 80);
        assert!(matches!(
            c.collapse_by_center(&g),
            Err(GraphError::AlreadyCollapsed)
        ));
        let map = c.coset_map().unwrap();
        for &x in nc.vertices() {
            let y = map[x] as usize;
            assert!(g.commutes(x, c.vertices()[y]));
        }
    }

    #[test]
    fn trivial_center_collapse_keeps_vertices() {
        let g = build_named(NamedGroup::Alternating(4)).unwrap();
        let nc = NcGraph::build(&g, false).unwrap();
        let c = nc.collapse_by_center(&g).unwrap();
        assert_eq!(c.graph(), nc.graph());
    }

    #[test]
    fn s3_dimacs_header() {
        let g = build_named(NamedGroup::Symmetric(3)).unwrap();
        let nc = NcGraph::build(&g, false).unwrap();
        let mut out = Vec::new();
        nc.write_dimacs(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.lines().any(|l| l == "p edge 5 9"), "{text}");
    }

    #[test]
    fn dimacs_round_trip() {
        let g = build_linear(LinearKind::Psl, 2, 5).unwrap();
        let nc = NcGraph::build(&g, false).unwrap();
        let mut out = Vec::new();
        nc.write_dimacs(&mut out).unwrap();
        let back = NcGraph::read_dimacs(out.as_slice()).unwrap();
        assert_eq!(back.graph(), nc.graph());
        assert_eq!(back.vertices(), nc.vertices());
        assert_eq!(back.label(), nc.label());
        assert_eq!(read_dimacs(out.as_slice()).unwrap(), *nc.graph());
    }

    #[test]
    fn dimacs_rejections() {
        for bad in [
            "e 1 2\n",
            "p edge 3\n",
            "p edge 3 1\ne 1 4\n",
            "p edge 3 1\ne 0 1\n",
            "p edge 3 1\ne 1 1\n",
            "p edge 3 2\ne 1 2\ne 2 1\n",
            "p edge 3 2\ne 1 2\n",
            "p foo 3 0\n",
            "x\n",
        ] {
            assert!(read_dimacs(bad.as_bytes()).is_err(), "{bad:?}");
        }
        let one = read_dimacs("p edge 1 0\n".as_bytes()).unwrap();
        assert_eq!((one.len(), one.edge_count()), (1, 0));
    }
}
