//! Text formats for instances and solve reports.
//!
//! Instance files declare the network one directive per line:
//!
//! ```text
//! mmspp 1
//! # comments run to end of line
//! arc s v
//! arc v t
//! commodity s t
//! ```
//!
//! Nodes are named by arc lines and indexed in first-appearance order;
//! commodity lines must reference known nodes. Solution files are
//! `key: value` blocks with the arcs and certificate inline (see
//! [`serialize_report`]).

use std::collections::HashMap;
use std::fmt;

use mmspp_core::{
    Arc, CertificateKind, Instance, Solution, SolveReport, SolveStatus, WitnessCertificate,
};

/// A syntax or validation failure, with the 1-based offending line when
/// one can be pinned down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number; `None` for whole-file failures.
    pub line: Option<usize>,
    /// What went wrong.
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn whole(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

/// Strips the comment and surrounding whitespace off one raw line.
fn significant(line: &str) -> &str {
    let line = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    line.trim()
}

/// Parses the instance file format. Nodes are indexed in order of first
/// appearance in arc lines.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, significant(l)))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, "mmspp 1")) => {}
        Some((n, other)) => {
            return Err(ParseError::at(
                n,
                format!("expected header \"mmspp 1\", found {other:?}"),
            ))
        }
        None => return Err(ParseError::whole("empty instance file")),
    }

    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut arcs: Vec<(usize, Arc)> = Vec::new();
    let mut commodities: Vec<(usize, String, String)> = Vec::new();

    for (n, line) in lines {
        let mut words = line.split_whitespace();
        let directive = words.next().expect("non-empty line has a first word");
        let (a, b, extra) = (words.next(), words.next(), words.next());
        let (Some(a), Some(b), None) = (a, b, extra) else {
            return Err(ParseError::at(
                n,
                format!("directive {directive:?} takes exactly two names"),
            ));
        };
        match directive {
            "arc" => {
                let mut id = |name: &str| -> u32 {
                    *index.entry(name.to_string()).or_insert_with(|| {
                        names.push(name.to_string());
                        names.len() as u32 - 1
                    })
                };
                let (tail, head) = (id(a), id(b));
                arcs.push((n, Arc::new(tail, head)));
            }
            "commodity" => commodities.push((n, a.to_string(), b.to_string())),
            other => {
                return Err(ParseError::at(n, format!("unknown directive {other:?}")));
            }
        }
    }

    let mut coms = Vec::with_capacity(commodities.len());
    for (n, s, t) in commodities {
        let Some(&source) = index.get(s.as_str()) else {
            return Err(ParseError::at(n, format!("unknown node {s:?}")));
        };
        let Some(&sink) = index.get(t.as_str()) else {
            return Err(ParseError::at(n, format!("unknown node {t:?}")));
        };
        coms.push(mmspp_core::Commodity::new(source, sink));
    }

    let arcs: Vec<Arc> = arcs.into_iter().map(|(_, a)| a).collect();
    Instance::new(names, arcs, coms).map_err(|e| ParseError::whole(e.to_string()))
}

/// Renders an instance back into the file format: arcs in instance order,
/// then commodities.
pub fn serialize_instance(i: &Instance) -> String {
    let mut out = String::from("mmspp 1\n");
    for a in i.arcs() {
        out.push_str(&format!("arc {} {}\n", i.name(a.tail), i.name(a.head)));
    }
    for c in i.commodities() {
        out.push_str(&format!(
            "commodity {} {}\n",
            i.name(c.source),
            i.name(c.sink)
        ));
    }
    out
}

/// Renders a solve report: status, then the solution block when a
/// solution exists, then the certificate block when one is attached.
/// Deterministic for fixed inputs; no timing data.
pub fn serialize_report(i: &Instance, report: &SolveReport) -> String {
    let mut out = String::from("mmspp-solution 1\n");
    out.push_str(&format!("status: {}\n", report.status));
    if let Some(sol) = &report.solution {
        out.push_str(&format!("max_out_degree: {}\n", sol.max_out_degree()));
        out.push_str(&format!("arcs: {}\n", sol.arc_count()));
        for a in sol.arcs() {
            out.push_str(&format!("{} {}\n", i.name(a.tail), i.name(a.head)));
        }
    }
    if let Some(cert) = &report.certificate {
        out.push_str(&format!("certificate: {}\n", cert.kind));
        out.push_str(&format!("value: {}\n", cert.value));
        let nodes: Vec<&str> = cert.witness_nodes.iter().map(|&u| i.name(u)).collect();
        out.push_str(&format!("witness_nodes: {}\n", nodes.join(" ")));
        let ks: Vec<String> = cert.commodities.iter().map(u32::to_string).collect();
        out.push_str(&format!("witness_commodities: {}\n", ks.join(" ")));
    }
    out
}

/// A solution file read back from text, before names are resolved against
/// an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedReport {
    /// The reported status line.
    pub status: SolveStatus,
    /// The reported degree, when a solution block is present.
    pub max_out_degree: Option<u32>,
    /// Solution arcs as name pairs, when present.
    pub arcs: Option<Vec<(String, String)>>,
    /// The certificate block, when present.
    pub certificate: Option<ParsedCertificate>,
}

/// Certificate block of a solution file, with node names unresolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedCertificate {
    /// Lower-bound family named on the `certificate:` line.
    pub kind: CertificateKind,
    /// Claimed bound.
    pub value: u32,
    /// Witness node names.
    pub witness_nodes: Vec<String>,
    /// Selected commodity indices.
    pub witness_commodities: Vec<u32>,
}

impl ParsedReport {
    /// Resolves the arc names against an instance, rebuilding the
    /// [`Solution`]. Errors mention the unknown name.
    pub fn solution(&self, i: &Instance) -> Result<Option<Solution>, ParseError> {
        let Some(pairs) = &self.arcs else {
            return Ok(None);
        };
        let mut arcs = Vec::with_capacity(pairs.len());
        for (tail, head) in pairs {
            let t = lookup(i, tail)?;
            let h = lookup(i, head)?;
            arcs.push(Arc::new(t, h));
        }
        Ok(Some(Solution::from_arcs(i.node_count(), arcs)))
    }

    /// Resolves the certificate block against an instance.
    pub fn certificate(&self, i: &Instance) -> Result<Option<WitnessCertificate>, ParseError> {
        let Some(cert) = &self.certificate else {
            return Ok(None);
        };
        let mut witness_nodes = Vec::with_capacity(cert.witness_nodes.len());
        for name in &cert.witness_nodes {
            witness_nodes.push(lookup(i, name)?);
        }
        Ok(Some(WitnessCertificate {
            kind: cert.kind,
            value: cert.value,
            witness_nodes,
            commodities: cert.witness_commodities.clone(),
        }))
    }
}

fn lookup(i: &Instance, name: &str) -> Result<u32, ParseError> {
    i.node_index(name)
        .ok_or_else(|| ParseError::whole(format!("unknown node {name:?} in solution")))
}

/// Significant lines of a solution file, with a read position.
struct Cursor<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied();
        if item.is_some() {
            self.pos += 1;
        }
        item
    }

    /// Consumes the next line if it is `key: value`, returning the value.
    fn field(&mut self, key: &str) -> Option<(usize, String)> {
        let &(n, line) = self.items.get(self.pos)?;
        let rest = line.strip_prefix(key)?.strip_prefix(':')?;
        self.pos += 1;
        Some((n, rest.trim().to_string()))
    }
}

/// Parses the solution file format produced by [`serialize_report`].
pub fn parse_report(text: &str) -> Result<ParsedReport, ParseError> {
    let mut lines = Cursor {
        items: text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, significant(l)))
            .filter(|(_, l)| !l.is_empty())
            .collect(),
        pos: 0,
    };

    match lines.next() {
        Some((_, "mmspp-solution 1")) => {}
        Some((n, other)) => {
            return Err(ParseError::at(
                n,
                format!("expected header \"mmspp-solution 1\", found {other:?}"),
            ))
        }
        None => return Err(ParseError::whole("empty solution file")),
    }

    let Some((n, status)) = lines.field("status") else {
        return Err(ParseError::whole("missing status line"));
    };
    let status: SolveStatus = status
        .parse()
        .map_err(|_| ParseError::at(n, format!("unknown status {status:?}")))?;

    let mut max_out_degree = None;
    let mut arcs = None;
    if let Some((n, deg)) = lines.field("max_out_degree") {
        let deg: u32 = deg
            .parse()
            .map_err(|_| ParseError::at(n, "max_out_degree must be an integer"))?;
        max_out_degree = Some(deg);
        let Some((n, count)) = lines.field("arcs") else {
            return Err(ParseError::at(n, "expected an arcs count after the degree"));
        };
        let count: usize = count
            .parse()
            .map_err(|_| ParseError::at(n, "arcs must give a count"))?;
        let mut pairs = Vec::with_capacity(count);
        for _ in 0..count {
            let Some((n, line)) = lines.next() else {
                return Err(ParseError::whole("arc list ends early"));
            };
            let mut words = line.split_whitespace();
            let (Some(t), Some(h), None) = (words.next(), words.next(), words.next()) else {
                return Err(ParseError::at(n, "arc lines hold exactly two names"));
            };
            pairs.push((t.to_string(), h.to_string()));
        }
        arcs = Some(pairs);
    }

    let mut certificate = None;
    if let Some((n, kind)) = lines.field("certificate") {
        let Some(kind) = CertificateKind::from_name(&kind) else {
            return Err(ParseError::at(n, format!("unknown certificate kind {kind:?}")));
        };
        let Some((n, value)) = lines.field("value") else {
            return Err(ParseError::whole("certificate block is missing its value"));
        };
        let value: u32 = value
            .parse()
            .map_err(|_| ParseError::at(n, "certificate value must be an integer"))?;
        let Some((_, nodes)) = lines.field("witness_nodes") else {
            return Err(ParseError::whole("certificate block is missing witness_nodes"));
        };
        let witness_nodes: Vec<String> = nodes.split_whitespace().map(String::from).collect();
        let Some((n, ks)) = lines.field("witness_commodities") else {
            return Err(ParseError::whole(
                "certificate block is missing witness_commodities",
            ));
        };
        let mut witness_commodities = Vec::new();
        for word in ks.split_whitespace() {
            let k: u32 = word
                .parse()
                .map_err(|_| ParseError::at(n, "commodity ids must be integers"))?;
            witness_commodities.push(k);
        }
        certificate = Some(ParsedCertificate {
            kind,
            value,
            witness_nodes,
            witness_commodities,
        });
    }

    if let Some((n, line)) = lines.next() {
        return Err(ParseError::at(n, format!("unexpected trailing line {line:?}")));
    }

    Ok(ParsedReport {
        status,
        max_out_degree,
        arcs,
        certificate,
    })
}
