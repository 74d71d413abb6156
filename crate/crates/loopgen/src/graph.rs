//! Embedded trivalent recoupling graphs.
//!
//! A [`RecouplingGraph`] stores vertices (each with exactly three half-edges
//! in counter-clockwise cyclic order), oriented internal edges and external
//! legs. The cyclic order is the ribbon-graph embedding: it decides whether a
//! curve's passage through a vertex is clockwise or counter-clockwise, which
//! is where the sign rules live. Graphs are immutable after construction;
//! every mutation-like operation returns a new graph.
//!
//! # Text format
//!
//! Line-oriented, `#` starts a comment:
//!
//! ```text
//! vertex <id>: <half-edge> <half-edge> <half-edge>   # counter-clockwise
//! edge <Name>: <half-edge> -> <half-edge>            # tail -> head
//! leg <Name>: <half-edge>
//! ```
//!
//! Every half-edge must appear in exactly one vertex line and exactly one
//! edge or leg line; line names must be unique. The parser rejects trailing
//! garbage and reports the offending input line.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("non-trivalent vertex {vertex}: {degree} half-edges")]
    NonTrivalentVertex { vertex: String, degree: usize },
    #[error("dangling half-edge {0}: not attached to any edge or leg")]
    DanglingHalfEdge(String),
    #[error("half-edge {0} attached more than once")]
    HalfEdgeReused(String),
    #[error("half-edge {0} is not listed at any vertex")]
    UnknownHalfEdge(String),
    #[error("duplicate half-edge {0} in vertex list")]
    DuplicateHalfEdge(String),
    #[error("duplicate variable name {0}")]
    DuplicateVariable(String),
    #[error("name `{0}` is empty or contains a reserved character")]
    ReservedName(String),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(String),
    #[error("no such leg: {0}")]
    NoSuchLeg(String),
    #[error("no such edge: {0}")]
    NoSuchEdge(String),
    #[error("cannot glue a leg to itself: {0}")]
    IdenticalLegs(String),
    #[error("{0} is a leg, not an internal edge")]
    NotAnEdge(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Index of a half-edge in the graph's half-edge table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge(pub usize);

/// What a half-edge is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attachment {
    /// `(edge index, true if this is the tail half)`
    EdgeEnd(usize, bool),
    /// leg index
    Leg(usize),
}

/// A line of the graph: an internal edge or an external leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineRef {
    Edge(usize),
    Leg(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalEdge {
    pub name: String,
    pub tail: HalfEdge,
    pub head: HalfEdge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalLeg {
    pub name: String,
    pub half: HalfEdge,
}

/// Embedded trivalent graph with oriented internal edges and external legs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecouplingGraph {
    vertex_names: Vec<String>,
    /// three half-edges per vertex, in counter-clockwise cyclic order
    vertices: Vec<[HalfEdge; 3]>,
    half_names: Vec<String>,
    /// half-edge -> owning vertex
    half_vertex: Vec<usize>,
    /// half-edge -> edge/leg attachment
    attachments: Vec<Attachment>,
    edges: Vec<InternalEdge>,
    legs: Vec<ExternalLeg>,
}

/// Raw description consumed by [`RecouplingGraph::build`]; the parser and the
/// programmatic constructors both produce one of these.
#[derive(Debug, Clone, Default)]
pub struct GraphSpec {
    /// `(vertex id, half-edge names in counter-clockwise order)`
    pub vertices: Vec<(String, Vec<String>)>,
    /// `(edge name, tail half-edge, head half-edge)`
    pub edges: Vec<(String, String, String)>,
    /// `(leg name, half-edge)`
    pub legs: Vec<(String, String)>,
}

/// Names appear inside polynomial text and `name=2j` assignments, so the
/// syntax-bearing characters are reserved.
fn check_name(name: &str) -> Result<(), GraphError> {
    let ok = !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || "~*:,=#".contains(c));
    if ok {
        Ok(())
    } else {
        Err(GraphError::ReservedName(name.to_string()))
    }
}

impl RecouplingGraph {
    pub fn build(spec: &GraphSpec) -> Result<Self, GraphError> {
        let mut half_names = Vec::new();
        let mut half_index: HashMap<&str, usize> = HashMap::new();
        let mut half_vertex = Vec::new();
        let mut vertices = Vec::new();
        let mut vertex_names = Vec::new();
        let mut seen_vertices: HashMap<&str, ()> = HashMap::new();

        for (vid, halves) in &spec.vertices {
            check_name(vid)?;
            for h in halves {
                check_name(h)?;
            }
            if seen_vertices.insert(vid, ()).is_some() {
                return Err(GraphError::DuplicateVertex(vid.clone()));
            }
            if halves.len() != 3 {
                return Err(GraphError::NonTrivalentVertex {
                    vertex: vid.clone(),
                    degree: halves.len(),
                });
            }
            let mut slot = [HalfEdge(0); 3];
            for (k, h) in halves.iter().enumerate() {
                if half_index.contains_key(h.as_str()) {
                    return Err(GraphError::DuplicateHalfEdge(h.clone()));
                }
                let idx = half_names.len();
                half_index.insert(h.as_str(), idx);
                half_names.push(h.clone());
                half_vertex.push(vertices.len());
                slot[k] = HalfEdge(idx);
            }
            vertices.push(slot);
            vertex_names.push(vid.clone());
        }

        let mut attachments: Vec<Option<Attachment>> = vec![None; half_names.len()];
        let mut names_seen: HashMap<&str, ()> = HashMap::new();
        let mut edges = Vec::new();
        let mut legs = Vec::new();

        let attach = |h: &str,
                      a: Attachment,
                      attachments: &mut Vec<Option<Attachment>>|
         -> Result<HalfEdge, GraphError> {
            let idx = *half_index
                .get(h)
                .ok_or_else(|| GraphError::UnknownHalfEdge(h.to_string()))?;
            if attachments[idx].is_some() {
                return Err(GraphError::HalfEdgeReused(h.to_string()));
            }
            attachments[idx] = Some(a);
            Ok(HalfEdge(idx))
        };

        for (name, tail, head) in &spec.edges {
            check_name(name)?;
            if names_seen.insert(name, ()).is_some() {
                return Err(GraphError::DuplicateVariable(name.clone()));
            }
            let e = edges.len();
            let tail = attach(tail, Attachment::EdgeEnd(e, true), &mut attachments)?;
            let head = attach(head, Attachment::EdgeEnd(e, false), &mut attachments)?;
            edges.push(InternalEdge {
                name: name.clone(),
                tail,
                head,
            });
        }
        for (name, half) in &spec.legs {
            check_name(name)?;
            if names_seen.insert(name, ()).is_some() {
                return Err(GraphError::DuplicateVariable(name.clone()));
            }
            let l = legs.len();
            let half = attach(half, Attachment::Leg(l), &mut attachments)?;
            legs.push(ExternalLeg {
                name: name.clone(),
                half,
            });
        }

        let attachments = attachments
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| GraphError::DanglingHalfEdge(half_names[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;

        let g = RecouplingGraph {
            vertex_names,
            vertices,
            half_names,
            half_vertex,
            attachments,
            edges,
            legs,
        };
        debug_assert_eq!(g.leg_count() + 2 * g.edge_count(), 3 * g.vertex_count());
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    pub fn edges(&self) -> &[InternalEdge] {
        &self.edges
    }

    pub fn legs(&self) -> &[ExternalLeg] {
        &self.legs
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn half_count(&self) -> usize {
        self.half_names.len()
    }

    pub fn half_name(&self, h: HalfEdge) -> &str {
        &self.half_names[h.0]
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        self.half_vertex[h.0]
    }

    pub fn attachment(&self, h: HalfEdge) -> Attachment {
        self.attachments[h.0]
    }

    pub fn line_of(&self, h: HalfEdge) -> LineRef {
        match self.attachments[h.0] {
            Attachment::EdgeEnd(e, _) => LineRef::Edge(e),
            Attachment::Leg(l) => LineRef::Leg(l),
        }
    }

    pub fn line_name(&self, line: LineRef) -> &str {
        match line {
            LineRef::Edge(e) => &self.edges[e].name,
            LineRef::Leg(l) => &self.legs[l].name,
        }
    }

    /// All lines, edges first then legs, in stored order.
    pub fn lines(&self) -> Vec<LineRef> {
        (0..self.edges.len())
            .map(LineRef::Edge)
            .chain((0..self.legs.len()).map(LineRef::Leg))
            .collect()
    }

    /// The three half-edges at `v` in counter-clockwise order.
    pub fn vertex_halves(&self, v: usize) -> [HalfEdge; 3] {
        self.vertices[v]
    }

    /// The three lines incident to `v` in counter-clockwise order.
    pub fn vertex_lines(&self, v: usize) -> [LineRef; 3] {
        let h = self.vertices[v];
        [self.line_of(h[0]), self.line_of(h[1]), self.line_of(h[2])]
    }

    /// Opposite half of an internal edge's half-edge; `None` for legs.
    pub fn opposite_half(&self, h: HalfEdge) -> Option<HalfEdge> {
        match self.attachments[h.0] {
            Attachment::EdgeEnd(e, true) => Some(self.edges[e].head),
            Attachment::EdgeEnd(e, false) => Some(self.edges[e].tail),
            Attachment::Leg(_) => None,
        }
    }

    /// Counter-clockwise successor of `h` within its vertex.
    pub fn ccw_successor(&self, h: HalfEdge) -> HalfEdge {
        let v = self.vertices[self.half_vertex[h.0]];
        let pos = v.iter().position(|&x| x == h).expect("half-edge in vertex");
        v[(pos + 1) % 3]
    }

    pub fn leg_index(&self, name: &str) -> Result<usize, GraphError> {
        self.legs
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| GraphError::NoSuchLeg(name.to_string()))
    }

    pub fn edge_index(&self, name: &str) -> Result<usize, GraphError> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| GraphError::NoSuchEdge(name.to_string()))
    }

    fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self
                .vertex_names
                .iter()
                .zip(&self.vertices)
                .map(|(n, hs)| {
                    (
                        n.clone(),
                        hs.iter().map(|&h| self.half_names[h.0].clone()).collect(),
                    )
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        e.name.clone(),
                        self.half_names[e.tail.0].clone(),
                        self.half_names[e.head.0].clone(),
                    )
                })
                .collect(),
            legs: self
                .legs
                .iter()
                .map(|l| (l.name.clone(), self.half_names[l.half.0].clone()))
                .collect(),
        }
    }

    /// Replaces two legs by one oriented internal edge running from `leg1` to
    /// `leg2`. Cyclic orders are untouched: the new edge occupies the
    /// half-edge slots of the removed legs.
    pub fn glue_legs(
        &self,
        leg1: &str,
        leg2: &str,
        edge_name: &str,
    ) -> Result<RecouplingGraph, GraphError> {
        if leg1 == leg2 {
            return Err(GraphError::IdenticalLegs(leg1.to_string()));
        }
        let i1 = self.leg_index(leg1)?;
        let i2 = self.leg_index(leg2)?;
        let mut spec = self.to_spec();
        let h1 = self.half_names[self.legs[i1].half.0].clone();
        let h2 = self.half_names[self.legs[i2].half.0].clone();
        spec.legs.retain(|(n, _)| n != leg1 && n != leg2);
        spec.edges.push((edge_name.to_string(), h1, h2));
        RecouplingGraph::build(&spec)
    }

    /// Flips the orientation of an internal edge.
    pub fn reverse_edge(&self, name: &str) -> Result<RecouplingGraph, GraphError> {
        if self.legs.iter().any(|l| l.name == name) {
            return Err(GraphError::NotAnEdge(name.to_string()));
        }
        let idx = self.edge_index(name)?;
        let mut spec = self.to_spec();
        let (_, tail, head) = spec.edges[idx].clone();
        spec.edges[idx] = (name.to_string(), head, tail);
        RecouplingGraph::build(&spec)
    }

    /// Transposes two slots in one vertex's cyclic order (reverses the local
    /// orientation); used by the sign-covariance tests.
    pub fn swap_vertex_slots(&self, v: usize, a: usize, b: usize) -> RecouplingGraph {
        let mut spec = self.to_spec();
        spec.vertices[v].1.swap(a, b);
        RecouplingGraph::build(&spec).expect("slot swap preserves validity")
    }

    /// Disjoint union; all vertex ids, half-edge and line names must differ
    /// (any clash surfaces as the corresponding duplicate error).
    pub fn disjoint_union(&self, other: &RecouplingGraph) -> Result<RecouplingGraph, GraphError> {
        let a = self.to_spec();
        let b = other.to_spec();
        let spec = GraphSpec {
            vertices: a.vertices.into_iter().chain(b.vertices).collect(),
            edges: a.edges.into_iter().chain(b.edges).collect(),
            legs: a.legs.into_iter().chain(b.legs).collect(),
        };
        RecouplingGraph::build(&spec)
    }

    /// True if the underlying graph (ignoring legs) is connected.
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &h in &self.vertices[v] {
                if let Some(opp) = self.opposite_half(h) {
                    let w = self.vertex_of(opp);
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn parse(text: &str) -> Result<RecouplingGraph, GraphError> {
        let mut spec = GraphSpec::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (kind, rest) = content.split_once(char::is_whitespace).ok_or_else(|| {
                GraphError::Parse {
                    line,
                    message: format!("expected `vertex`, `edge` or `leg`, got `{content}`"),
                }
            })?;
            let (name, body) = rest.split_once(':').ok_or_else(|| GraphError::Parse {
                line,
                message: "missing `:` after name".to_string(),
            })?;
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(GraphError::Parse {
                    line,
                    message: format!("bad name `{name}`"),
                });
            }
            match kind {
                "vertex" => {
                    let halves: Vec<String> =
                        body.split_whitespace().map(str::to_string).collect();
                    spec.vertices.push((name.to_string(), halves));
                }
                "edge" => {
                    let (tail, head) = body.split_once("->").ok_or_else(|| GraphError::Parse {
                        line,
                        message: "edge body must be `<half> -> <half>`".to_string(),
                    })?;
                    let tail = tail.trim();
                    let head = head.trim();
                    if tail.is_empty()
                        || head.is_empty()
                        || tail.contains(char::is_whitespace)
                        || head.contains(char::is_whitespace)
                    {
                        return Err(GraphError::Parse {
                            line,
                            message: "edge body must be `<half> -> <half>`".to_string(),
                        });
                    }
                    spec.edges
                        .push((name.to_string(), tail.to_string(), head.to_string()));
                }
                "leg" => {
                    let half = body.trim();
                    if half.is_empty() || half.contains(char::is_whitespace) {
                        return Err(GraphError::Parse {
                            line,
                            message: "leg body must be a single half-edge".to_string(),
                        });
                    }
                    spec.legs.push((name.to_string(), half.to_string()));
                }
                other => {
                    return Err(GraphError::Parse {
                        line,
                        message: format!("unknown directive `{other}`"),
                    });
                }
            }
        }
        RecouplingGraph::build(&spec)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (n, hs) in self.vertex_names.iter().zip(&self.vertices) {
            out.push_str(&format!(
                "vertex {n}: {} {} {}\n",
                self.half_names[hs[0].0], self.half_names[hs[1].0], self.half_names[hs[2].0]
            ));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {}: {} -> {}\n",
                e.name, self.half_names[e.tail.0], self.half_names[e.head.0]
            ));
        }
        for l in &self.legs {
            out.push_str(&format!("leg {}: {}\n", l.name, self.half_names[l.half.0]));
        }
        out
    }
}

impl fmt::Display for RecouplingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

/// Single vertex with three legs in counter-clockwise order.
pub fn single_vertex(leg_names: [&str; 3]) -> RecouplingGraph {
    let spec = GraphSpec {
        vertices: vec![(
            "v0".to_string(),
            leg_names.iter().map(|n| format!("v0.{n}")).collect(),
        )],
        edges: vec![],
        legs: leg_names
            .iter()
            .map(|n| (n.to_string(), format!("v0.{n}")))
            .collect(),
    };
    RecouplingGraph::build(&spec).expect("valid single vertex")
}

/// The standard three-symbol graph: one vertex, legs `A`, `B`, `C`
/// counter-clockwise.
pub fn three_j() -> RecouplingGraph {
    single_vertex(["A", "B", "C"])
}

/// Two vertices joined by the oriented internal edge `A`, with leg pairs
/// `(B, C)` and `(D, E)`; the gluing of two three-leg vertices.
pub fn five_j() -> RecouplingGraph {
    let spec = GraphSpec {
        vertices: vec![
            ("u".to_string(), vec!["u.A", "u.B", "u.C"].strs()),
            ("w".to_string(), vec!["w.A", "w.D", "w.E"].strs()),
        ],
        edges: vec![("A".to_string(), "u.A".to_string(), "w.A".to_string())],
        legs: vec![
            ("B".to_string(), "u.B".to_string()),
            ("C".to_string(), "u.C".to_string()),
            ("D".to_string(), "w.D".to_string()),
            ("E".to_string(), "w.E".to_string()),
        ],
    };
    RecouplingGraph::build(&spec).expect("valid 5-j graph")
}

/// Tetrahedral graph of the 6-j symbol. Vertex triples are
/// `(A,B,C), (A,E,F), (C,D,E), (B,D,F)`; the embedding and edge orientations
/// are calibrated so that the loop-set polynomial is
/// `1 + A*B*F + A*C*E + B*C*D + D*E*F + A*B*D*E + A*C*D*F + B*C*E*F`.
pub fn six_j() -> RecouplingGraph {
    let spec = GraphSpec {
        vertices: vec![
            ("v1".to_string(), vec!["v1.a", "v1.c", "v1.b"].strs()),
            ("v2".to_string(), vec!["v2.e", "v2.a", "v2.f"].strs()),
            ("v3".to_string(), vec!["v3.d", "v3.c", "v3.e"].strs()),
            ("v4".to_string(), vec!["v4.f", "v4.b", "v4.d"].strs()),
        ],
        edges: vec![
            ("A".to_string(), "v1.a".to_string(), "v2.a".to_string()),
            ("B".to_string(), "v1.b".to_string(), "v4.b".to_string()),
            ("C".to_string(), "v3.c".to_string(), "v1.c".to_string()),
            ("D".to_string(), "v3.d".to_string(), "v4.d".to_string()),
            ("E".to_string(), "v2.e".to_string(), "v3.e".to_string()),
            ("F".to_string(), "v2.f".to_string(), "v4.f".to_string()),
        ],
        legs: vec![],
    };
    RecouplingGraph::build(&spec).expect("valid 6-j graph")
}

/// Bipartite graph of the 9-j symbol. Row vertices carry `(A,B,C)`,
/// `(D,E,F)`, `(G,H,K)`; column vertices `(A,D,G)`, `(B,E,H)`, `(C,F,K)`.
/// Embedding and orientations are calibrated to the 16-term loop-set
/// polynomial with nine negative quartics, three positive and three negative
/// sextics.
pub fn nine_j() -> RecouplingGraph {
    let spec = GraphSpec {
        vertices: vec![
            ("r1".to_string(), vec!["r1.a", "r1.b", "r1.c"].strs()),
            ("r2".to_string(), vec!["r2.d", "r2.e", "r2.f"].strs()),
            ("r3".to_string(), vec!["r3.g", "r3.h", "r3.k"].strs()),
            ("c1".to_string(), vec!["c1.a", "c1.d", "c1.g"].strs()),
            ("c2".to_string(), vec!["c2.b", "c2.e", "c2.h"].strs()),
            ("c3".to_string(), vec!["c3.c", "c3.f", "c3.k"].strs()),
        ],
        edges: vec![
            ("A".to_string(), "r1.a".to_string(), "c1.a".to_string()),
            ("B".to_string(), "r1.b".to_string(), "c2.b".to_string()),
            ("C".to_string(), "r1.c".to_string(), "c3.c".to_string()),
            ("D".to_string(), "r2.d".to_string(), "c1.d".to_string()),
            ("E".to_string(), "r2.e".to_string(), "c2.e".to_string()),
            ("F".to_string(), "r2.f".to_string(), "c3.f".to_string()),
            ("G".to_string(), "r3.g".to_string(), "c1.g".to_string()),
            ("H".to_string(), "r3.h".to_string(), "c2.h".to_string()),
            ("K".to_string(), "r3.k".to_string(), "c3.k".to_string()),
        ],
        legs: vec![],
    };
    RecouplingGraph::build(&spec).expect("valid 9-j graph")
}

trait Strs {
    fn strs(self) -> Vec<String>;
}

impl Strs for Vec<&str> {
    fn strs(self) -> Vec<String> {
        self.into_iter().map(str::to_string).collect()
    }
}

/// Per-line angular momenta (doubled) and per-leg magnetic numbers (doubled).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumAssignment {
    /// twice the angular momentum per internal edge, aligned with `edges()`
    pub edge_tj: Vec<i32>,
    /// twice the angular momentum per leg, aligned with `legs()`
    pub leg_tj: Vec<i32>,
    /// twice the magnetic number per leg
    pub leg_tm: Vec<i32>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssignError {
    #[error("no such line: {0}")]
    NoSuchLine(String),
    #[error("line {0} assigned twice")]
    DuplicateLine(String),
    #[error("missing assignment for line {0}")]
    MissingLine(String),
    #[error("negative angular momentum 2j = {tj} on line {line}")]
    NegativeMomentum { line: String, tj: i32 },
    #[error("magnetic number out of range on leg {leg}: |2m| = {tm} > 2j = {tj}")]
    MagneticRange { leg: String, tm: i32, tj: i32 },
    #[error("parity violation on leg {leg}: 2j = {tj} and 2m = {tm} differ mod 2")]
    Parity { leg: String, tj: i32, tm: i32 },
    #[error("internal edge {0} takes no magnetic number")]
    EdgeWithMagnetic(String),
    #[error("leg {0} needs a magnetic number")]
    LegWithoutMagnetic(String),
}

impl QuantumAssignment {
    /// Builds an assignment from `(line name, 2j, optional 2m)` entries.
    /// Every line of the graph must appear exactly once; legs need a magnetic
    /// number, internal edges must not have one.
    pub fn new(
        g: &RecouplingGraph,
        entries: &[(String, i32, Option<i32>)],
    ) -> Result<Self, AssignError> {
        let mut edge_tj = vec![None; g.edge_count()];
        let mut leg_tj = vec![None; g.leg_count()];
        let mut leg_tm = vec![0; g.leg_count()];
        for (name, tj, tm) in entries {
            if *tj < 0 {
                return Err(AssignError::NegativeMomentum {
                    line: name.clone(),
                    tj: *tj,
                });
            }
            if let Ok(e) = g.edge_index(name) {
                if edge_tj[e].is_some() {
                    return Err(AssignError::DuplicateLine(name.clone()));
                }
                if tm.is_some() {
                    return Err(AssignError::EdgeWithMagnetic(name.clone()));
                }
                edge_tj[e] = Some(*tj);
            } else if let Ok(l) = g.leg_index(name) {
                if leg_tj[l].is_some() {
                    return Err(AssignError::DuplicateLine(name.clone()));
                }
                let tm = tm.ok_or_else(|| AssignError::LegWithoutMagnetic(name.clone()))?;
                if (tj - tm).rem_euclid(2) != 0 {
                    return Err(AssignError::Parity {
                        leg: name.clone(),
                        tj: *tj,
                        tm,
                    });
                }
                if tm.abs() > *tj {
                    return Err(AssignError::MagneticRange {
                        leg: name.clone(),
                        tm,
                        tj: *tj,
                    });
                }
                leg_tj[l] = Some(*tj);
                leg_tm[l] = tm;
            } else {
                return Err(AssignError::NoSuchLine(name.clone()));
            }
        }
        let edge_tj = edge_tj
            .into_iter()
            .enumerate()
            .map(|(e, v)| v.ok_or_else(|| AssignError::MissingLine(g.edges[e].name.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let leg_tj = leg_tj
            .into_iter()
            .enumerate()
            .map(|(l, v)| v.ok_or_else(|| AssignError::MissingLine(g.legs[l].name.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QuantumAssignment {
            edge_tj,
            leg_tj,
            leg_tm,
        })
    }

    /// 2j of an arbitrary line.
    pub fn line_tj(&self, line: LineRef) -> i32 {
        match line {
            LineRef::Edge(e) => self.edge_tj[e],
            LineRef::Leg(l) => self.leg_tj[l],
        }
    }
}
