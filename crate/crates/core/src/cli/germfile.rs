//! Line-oriented germ file format.
//!
//! ```text
//! germ "name"
//! assume h2_tangent_vanishes = true
//! assume modification = false
//! graph N {
//!   curve G self=-6 retained
//!   curve a self=-2
//!   edge a G
//! }
//! component C genus=0 graph=N:G+F
//! component D genus=0 selfint=-5/3
//! point P type=slt n=2 a=1 on=C
//! point Q type=cusp4 p=3 q=3 r=inf on=C:pq_inf branches=2
//! selfint C = -3
//! ```
//!
//! `#` starts a comment. Unknown keys are errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::arith::parse_rational;
use crate::catalog::{ComponentRole, ExtNat, SingularityType};
use crate::germ::{GermComponent, GermDescription, Normalization, PointIncidence};
use crate::graph::DualGraph;
use crate::render;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

struct Args<'a> {
    line: usize,
    map: BTreeMap<&'a str, &'a str>,
    flags: Vec<&'a str>,
}

impl<'a> Args<'a> {
    fn new(line: usize, tokens: &[&'a str]) -> Result<Self, ParseError> {
        let mut map = BTreeMap::new();
        let mut flags = Vec::new();
        for tok in tokens {
            match tok.split_once('=') {
                Some((k, v)) => {
                    if map.insert(k, v).is_some() {
                        return Err(err(line, format!("duplicate key `{k}`")));
                    }
                }
                None => flags.push(*tok),
            }
        }
        Ok(Args { line, map, flags })
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        self.map.remove(key)
    }

    fn need(&mut self, key: &str) -> Result<&'a str, ParseError> {
        self.take(key).ok_or_else(|| err(self.line, format!("missing `{key}=`")))
    }

    fn flag(&mut self, name: &str) -> bool {
        let before = self.flags.len();
        self.flags.retain(|f| *f != name);
        self.flags.len() != before
    }

    /// Fails on anything not consumed.
    fn finish(self) -> Result<(), ParseError> {
        if let Some(k) = self.map.keys().next() {
            return Err(err(self.line, format!("unknown key `{k}`")));
        }
        if let Some(f) = self.flags.first() {
            return Err(err(self.line, format!("unexpected `{f}`")));
        }
        Ok(())
    }
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ParseError> {
    v.parse().map_err(|_| err(line, format!("bad value `{v}` for `{key}`")))
}

fn boolean(line: usize, v: &str) -> Result<bool, ParseError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(err(line, format!("expected true or false, got `{v}`"))),
    }
}

/// Reads the type parameters of a point from `key=value` arguments.
fn singularity(line: usize, kind: &str, args: &mut Args<'_>) -> Result<SingularityType, ParseError> {
    let mut ext = |key: &str| -> Result<ExtNat, ParseError> {
        let v = args.need(key)?;
        num(line, key, v)
    };
    let t = match kind {
        "nc" => SingularityType::NormalCrossing,
        "pinch" => SingularityType::Pinch,
        "cusp1" => SingularityType::DegCusp1,
        "cusp2" => SingularityType::DegCusp2 { n: ext("n")? },
        "cusp3" => SingularityType::DegCusp3 {
            p: ext("p")?,
            q: ext("q")?,
        },
        "cusp4" => SingularityType::DegCusp4 {
            p: ext("p")?,
            q: ext("q")?,
            r: ext("r")?,
        },
        "slt" => {
            let n = num(line, "n", args.need("n")?)?;
            let a = num(line, "a", args.need("a")?)?;
            SingularityType::slt(n, a).map_err(|e| err(line, e.to_string()))?
        }
        _ => return Err(err(line, format!("unknown point type `{kind}`"))),
    };
    Ok(t)
}

fn incidences(line: usize, v: &str) -> Result<Vec<(String, Option<ComponentRole>)>, ParseError> {
    v.split(',')
        .map(|item| {
            let (cid, role) = match item.split_once(':') {
                Some((c, r)) => (c, Some(r.parse().map_err(|e: String| err(line, e))?)),
                None => (item, None),
            };
            if cid.is_empty() {
                return Err(err(line, "empty component id in `on=`"));
            }
            Ok((cid.to_string(), role))
        })
        .collect()
}

fn component(line: usize, tokens: &[&str]) -> Result<GermComponent, ParseError> {
    let [id, rest @ ..] = tokens else {
        return Err(err(line, "expected `component <id> ...`"));
    };
    let mut args = Args::new(line, rest)?;
    let genus = num(line, "genus", args.need("genus")?)?;
    let normalization = match (args.take("selfint"), args.take("graph")) {
        (Some(v), None) => Normalization::Asserted(
            parse_rational(v).ok_or_else(|| err(line, format!("bad rational `{v}`")))?,
        ),
        (None, Some(v)) => {
            let (gid, div) = v
                .split_once(':')
                .ok_or_else(|| err(line, "expected `graph=<gid>:<id>+<id>...`"))?;
            let divisor: Vec<String> = div.split('+').map(str::to_string).collect();
            if gid.is_empty() || divisor.iter().any(String::is_empty) {
                return Err(err(line, format!("bad graph reference `{v}`")));
            }
            Normalization::FromGraph {
                graph: gid.to_string(),
                divisor,
            }
        }
        _ => return Err(err(line, "need exactly one of `selfint=` and `graph=`")),
    };
    args.finish()?;
    Ok(GermComponent {
        id: id.to_string(),
        genus,
        normalization,
    })
}

fn point(line: usize, tokens: &[&str]) -> Result<PointIncidence, ParseError> {
    let [id, rest @ ..] = tokens else {
        return Err(err(line, "expected `point <id> ...`"));
    };
    let mut args = Args::new(line, rest)?;
    let kind = args.need("type")?;
    let kind = singularity(line, kind, &mut args)?;
    let incidences = incidences(line, args.need("on")?)?;
    let branches = match args.take("branches") {
        Some(v) => num(line, "branches", v)?,
        None => 1,
    };
    args.finish()?;
    Ok(PointIncidence {
        id: id.to_string(),
        kind,
        incidences,
        branches,
    })
}

fn graph_line(line: usize, tokens: &[&str], g: &mut DualGraph) -> Result<(), ParseError> {
    let gerr = |e: crate::graph::GraphError| err(line, e.to_string());
    match tokens {
        ["curve", id, rest @ ..] => {
            let mut args = Args::new(line, rest)?;
            let s = num(line, "self", args.need("self")?)?;
            let retained = args.flag("retained");
            args.finish()?;
            g.add_curve(id, s, retained).map_err(gerr)
        }
        ["edge", a, b] => g.add_edge(a, b).map_err(gerr),
        ["edge", a, b, m] => {
            let m = m
                .strip_prefix('x')
                .and_then(|m| m.parse::<u32>().ok())
                .filter(|&m| m > 0)
                .ok_or_else(|| err(line, format!("bad multiplicity `{m}`")))?;
            g.add_edges(a, b, m).map_err(gerr)
        }
        _ => Err(err(line, "expected `curve`, `edge` or `}`")),
    }
}

pub fn parse_germ_file(text: &str) -> Result<GermDescription, ParseError> {
    let mut g = GermDescription::default();
    let mut name = None;
    let mut open: Option<(usize, String, DualGraph)> = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if let Some((_, gid, graph)) = open.as_mut() {
            if tokens == ["}"] {
                let gid = std::mem::take(gid);
                let graph = std::mem::take(graph);
                g.graphs.insert(gid, graph);
                open = None;
            } else {
                graph_line(line, &tokens, graph)?;
            }
            continue;
        }
        match tokens[0] {
            "germ" => {
                if name.is_some() {
                    return Err(err(line, "second `germ` header"));
                }
                let rest = content["germ".len()..].trim();
                let inner = rest
                    .strip_prefix('"')
                    .and_then(|s| s.strip_suffix('"'))
                    .filter(|s| !s.contains('"'))
                    .ok_or_else(|| err(line, "expected `germ \"<name>\"`"))?;
                name = Some(inner.to_string());
            }
            "assume" => match tokens.as_slice() {
                ["assume", key, "=", v] => {
                    let v = boolean(line, v)?;
                    match *key {
                        "h2_tangent_vanishes" => g.assumptions.h2_tangent_vanishes = v,
                        "modification" => g.assumptions.modification = v,
                        _ => return Err(err(line, format!("unknown assumption `{key}`"))),
                    }
                }
                _ => return Err(err(line, "expected `assume <key> = true|false`")),
            },
            "graph" => match tokens.as_slice() {
                ["graph", gid, "{"] => {
                    if g.graphs.contains_key(*gid) {
                        return Err(err(line, format!("graph `{gid}` declared twice")));
                    }
                    open = Some((line, gid.to_string(), DualGraph::new()));
                }
                _ => return Err(err(line, "expected `graph <id> {`")),
            },
            "component" => g.components.push(component(line, &tokens[1..])?),
            "point" => g.points.push(point(line, &tokens[1..])?),
            "selfint" => match tokens.as_slice() {
                ["selfint", cid, "=", v] => {
                    let v = parse_rational(v).ok_or_else(|| err(line, format!("bad rational `{v}`")))?;
                    if g.selfint_checks.insert(cid.to_string(), v).is_some() {
                        return Err(err(line, format!("second `selfint` for `{cid}`")));
                    }
                }
                _ => return Err(err(line, "expected `selfint <component> = <rational>`")),
            },
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    if let Some((start, gid, _)) = open {
        return Err(err(last.max(start), format!("graph `{gid}` opened on line {start} is not closed")));
    }
    g.name = name.ok_or_else(|| err(1, "missing `germ \"<name>\"` header"))?;
    Ok(g)
}

fn point_params(t: &SingularityType) -> String {
    match t {
        SingularityType::Slt(q) => format!(" n={} a={}", q.n(), q.a()),
        SingularityType::DegCusp2 { n } => format!(" n={n}"),
        SingularityType::DegCusp3 { p, q } => format!(" p={p} q={q}"),
        SingularityType::DegCusp4 { p, q, r } => format!(" p={p} q={q} r={r}"),
        _ => String::new(),
    }
}

/// Normalized text: header, assumptions, graphs by id, components and
/// points in declaration order, then checks.
pub fn emit_germ_file(g: &GermDescription) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "germ \"{}\"", g.name);
    let _ = writeln!(s, "assume h2_tangent_vanishes = {}", g.assumptions.h2_tangent_vanishes);
    let _ = writeln!(s, "assume modification = {}", g.assumptions.modification);
    for (gid, graph) in &g.graphs {
        let _ = writeln!(s, "\ngraph {gid} {{");
        for c in graph.curves() {
            let kept = if c.retained { " retained" } else { "" };
            let _ = writeln!(s, "  curve {} self={}{kept}", c.id, c.self_intersection);
        }
        for (a, b, m) in graph.edges() {
            let mult = if m > 1 { format!(" x{m}") } else { String::new() };
            let _ = writeln!(s, "  edge {a} {b}{mult}");
        }
        s.push_str("}\n");
    }
    if !g.components.is_empty() {
        s.push('\n');
    }
    for c in &g.components {
        let norm = match &c.normalization {
            Normalization::Asserted(v) => format!("selfint={}", render(v)),
            Normalization::FromGraph { graph, divisor } => format!("graph={graph}:{}", divisor.join("+")),
        };
        let _ = writeln!(s, "component {} genus={} {norm}", c.id, c.genus);
    }
    if !g.points.is_empty() {
        s.push('\n');
    }
    for p in &g.points {
        let on: Vec<String> = p
            .incidences
            .iter()
            .map(|(c, r)| match r {
                Some(r) => format!("{c}:{r}"),
                None => c.clone(),
            })
            .collect();
        let branches = if p.branches != 1 { format!(" branches={}", p.branches) } else { String::new() };
        let _ = writeln!(
            s,
            "point {} type={}{} on={}{branches}",
            p.id,
            p.kind.keyword(),
            point_params(&p.kind),
            on.join(",")
        );
    }
    if !g.selfint_checks.is_empty() {
        s.push('\n');
    }
    for (cid, v) in &g.selfint_checks {
        let _ = writeln!(s, "selfint {cid} = {}", render(v));
    }
    s
}
