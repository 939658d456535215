//! Line-oriented text formats: `labelcover v1` for constraint instances,
//! `network v1` for emitted connectivity instances, `layout v1` for the
//! provenance map, `pipeline v1` for shaping parameters, and bare
//! edge-index lists for solutions. Writers are canonical so byte equality
//! means instance equality; `#` starts a comment anywhere.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::gadgets::{
    Demand, EdgeCost, GadgetLayout, NetEdge, NetworkInstance, PaddingSets, ProblemKind, Role, Side,
};
use crate::model::{Arc, LabelCosts, LabelCoverInstance};
use crate::num::{format_q, parse_q, q_zero, Q};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, msg: msg.into() })
}

/// `sha256:<hex>` digest of a serialized artifact.
pub fn digest_str(content: &str) -> String {
    let hash = Sha256::digest(content.as_bytes());
    let mut hex = String::with_capacity(7 + 64);
    hex.push_str("sha256:");
    for byte in hash {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

struct Lines<'a> {
    items: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let stripped = raw.split('#').next().unwrap_or("").trim();
                if stripped.is_empty() {
                    None
                } else {
                    Some((i + 1, stripped.split_whitespace().collect()))
                }
            })
            .collect();
        Lines { items, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &[&'a str])> {
        let item = self.items.get(self.pos)?;
        self.pos += 1;
        Some((item.0, &item.1))
    }

    fn peek(&self) -> Option<(usize, &[&'a str])> {
        self.items.get(self.pos).map(|item| (item.0, item.1.as_slice()))
    }
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize, FormatError> {
    token
        .parse()
        .map_err(|_| FormatError { line, msg: format!("bad {what} {token:?}") })
}

pub fn write_labelcover(inst: &LabelCoverInstance) -> String {
    let mut out = String::new();
    out.push_str("labelcover v1\n");
    out.push_str(&format!("labels {} {}\n", inst.left_labels, inst.right_labels));
    if let Some(c) = &inst.costs {
        out.push_str(&format!("costs {} {}\n", format_q(c.left), format_q(c.right)));
    }
    out.push_str(&format!("left {}\n", inst.left_count));
    out.push_str(&format!("right {}\n", inst.right_count));
    for arc in &inst.arcs {
        out.push_str(&format!("arc {} {}", arc.left, arc.right));
        for &b in &arc.image {
            out.push_str(&format!(" {b}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_labelcover(text: &str) -> Result<LabelCoverInstance, FormatError> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next().ok_or(FormatError { line: 0, msg: "empty input".into() })?;
    if header != ["labelcover", "v1"] {
        return err(ln, "expected header `labelcover v1`");
    }
    let (ln, labels) = lines.next().ok_or(FormatError { line: ln, msg: "missing labels".into() })?;
    if labels.len() != 3 || labels[0] != "labels" {
        return err(ln, "expected `labels <L1> <L2>`");
    }
    let left_labels = parse_usize(ln, labels[1], "label count")?;
    let right_labels = parse_usize(ln, labels[2], "label count")?;

    let mut costs = None;
    if let Some((ln, toks)) = lines.peek() {
        if toks.first() == Some(&"costs") {
            if toks.len() != 3 {
                return err(ln, "expected `costs <c1> <c2>`");
            }
            let left = parse_q(toks[1]).map_err(|m| FormatError { line: ln, msg: m })?;
            let right = parse_q(toks[2]).map_err(|m| FormatError { line: ln, msg: m })?;
            costs = Some(LabelCosts { left, right });
            lines.next();
        }
    }

    let (ln, left) = lines.next().ok_or(FormatError { line: 0, msg: "missing left".into() })?;
    if left.len() != 2 || left[0] != "left" {
        return err(ln, "expected `left <count>`");
    }
    let left_count = parse_usize(ln, left[1], "vertex count")?;
    let (ln, right) = lines.next().ok_or(FormatError { line: 0, msg: "missing right".into() })?;
    if right.len() != 2 || right[0] != "right" {
        return err(ln, "expected `right <count>`");
    }
    let right_count = parse_usize(ln, right[1], "vertex count")?;

    let mut arcs = Vec::new();
    while let Some((ln, toks)) = lines.next() {
        if toks[0] != "arc" {
            return err(ln, format!("unexpected directive {:?}", toks[0]));
        }
        if toks.len() != 3 + left_labels {
            return err(ln, format!("arc line needs {} image entries", left_labels));
        }
        let left = parse_usize(ln, toks[1], "left index")?;
        let right = parse_usize(ln, toks[2], "right index")?;
        let image = toks[3..]
            .iter()
            .map(|t| parse_usize(ln, t, "image label"))
            .collect::<Result<Vec<_>, _>>()?;
        arcs.push(Arc { left, right, image });
    }

    let mut seen = std::collections::BTreeSet::new();
    let allow_parallel = arcs.iter().any(|a| !seen.insert((a.left, a.right)));
    Ok(LabelCoverInstance {
        left_count,
        right_count,
        left_labels,
        right_labels,
        arcs,
        costs,
        allow_parallel,
        planted: None,
    })
}

fn write_cost(cost: EdgeCost) -> String {
    match cost {
        EdgeCost::Zero => "0".into(),
        EdgeCost::Finite(c) => format_q(c),
        EdgeCost::Infinite => "inf".into(),
    }
}

fn parse_cost(line: usize, token: &str) -> Result<EdgeCost, FormatError> {
    if token == "inf" {
        return Ok(EdgeCost::Infinite);
    }
    let q = parse_q(token).map_err(|m| FormatError { line, msg: m })?;
    if q == q_zero() {
        Ok(EdgeCost::Zero)
    } else if q < q_zero() {
        err(line, "negative edge cost")
    } else {
        Ok(EdgeCost::Finite(q))
    }
}

pub fn write_network(net: &NetworkInstance) -> String {
    let mut out = String::new();
    out.push_str("network v1\n");
    out.push_str(if net.directed { "directed\n" } else { "undirected\n" });
    out.push_str(&format!("kind {}\n", net.kind.tag()));
    out.push_str(&format!("k {}\n", net.k));
    for (i, role) in net.roles.iter().enumerate() {
        out.push_str(&format!("vertex {} {}\n", i, role.tag()));
    }
    for e in &net.edges {
        out.push_str(&format!(
            "edge {} {} cost {} mult {}\n",
            e.u,
            e.v,
            write_cost(e.cost),
            e.mult
        ));
    }
    if let Some(r) = net.root {
        out.push_str(&format!("root {r}\n"));
    }
    for &t in &net.terminals {
        out.push_str(&format!("terminal {t}\n"));
    }
    for d in &net.demands {
        out.push_str(&format!("demand {} {} req {}\n", d.s, d.t, d.req));
    }
    out
}

pub fn parse_network(text: &str) -> Result<NetworkInstance, FormatError> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next().ok_or(FormatError { line: 0, msg: "empty input".into() })?;
    if header != ["network", "v1"] {
        return err(ln, "expected header `network v1`");
    }
    let (ln, dir) = lines.next().ok_or(FormatError { line: ln, msg: "missing direction".into() })?;
    let directed = match dir {
        ["directed"] => true,
        ["undirected"] => false,
        _ => return err(ln, "expected `directed` or `undirected`"),
    };
    let (ln, kind_line) = lines.next().ok_or(FormatError { line: ln, msg: "missing kind".into() })?;
    if kind_line.len() != 2 || kind_line[0] != "kind" {
        return err(ln, "expected `kind <tag>`");
    }
    let kind = ProblemKind::from_tag(kind_line[1])
        .ok_or(FormatError { line: ln, msg: format!("unknown kind {:?}", kind_line[1]) })?;
    let (ln, k_line) = lines.next().ok_or(FormatError { line: ln, msg: "missing k".into() })?;
    if k_line.len() != 2 || k_line[0] != "k" {
        return err(ln, "expected `k <int>`");
    }
    let k = parse_usize(ln, k_line[1], "k")? as u32;

    let mut roles = Vec::new();
    let mut edges = Vec::new();
    let mut root = None;
    let mut terminals = Vec::new();
    let mut demands = Vec::new();
    while let Some((ln, toks)) = lines.next() {
        match toks[0] {
            "vertex" => {
                if toks.len() != 3 {
                    return err(ln, "expected `vertex <index> <role>`");
                }
                let idx = parse_usize(ln, toks[1], "vertex index")?;
                if idx != roles.len() {
                    return err(ln, format!("vertex {idx} out of order"));
                }
                let role = Role::from_tag(toks[2])
                    .ok_or(FormatError { line: ln, msg: format!("unknown role {:?}", toks[2]) })?;
                roles.push(role);
            }
            "edge" => {
                if toks.len() != 7 || toks[3] != "cost" || toks[5] != "mult" {
                    return err(ln, "expected `edge <u> <v> cost <c> mult <m>`");
                }
                edges.push(NetEdge {
                    u: parse_usize(ln, toks[1], "endpoint")?,
                    v: parse_usize(ln, toks[2], "endpoint")?,
                    cost: parse_cost(ln, toks[4])?,
                    mult: parse_usize(ln, toks[6], "multiplicity")? as u32,
                });
            }
            "root" => {
                if toks.len() != 2 {
                    return err(ln, "expected `root <index>`");
                }
                root = Some(parse_usize(ln, toks[1], "root")?);
            }
            "terminal" => {
                if toks.len() != 2 {
                    return err(ln, "expected `terminal <index>`");
                }
                terminals.push(parse_usize(ln, toks[1], "terminal")?);
            }
            "demand" => {
                if toks.len() != 5 || toks[3] != "req" {
                    return err(ln, "expected `demand <s> <t> req <r>`");
                }
                demands.push(Demand {
                    s: parse_usize(ln, toks[1], "source")?,
                    t: parse_usize(ln, toks[2], "sink")?,
                    req: parse_usize(ln, toks[4], "requirement")? as u32,
                });
            }
            other => return err(ln, format!("unexpected directive {other:?}")),
        }
    }
    Ok(NetworkInstance { directed, kind, k, roles, edges, root, terminals, demands })
}

pub fn write_layout(layout: &GadgetLayout) -> String {
    let mut out = String::new();
    out.push_str("layout v1\n");
    out.push_str(&format!(
        "source {} {} {} {} {}\n",
        layout.source_left,
        layout.source_right,
        layout.source_left_labels,
        layout.source_right_labels,
        layout.source_max_degree
    ));
    for (arc, &(u, w)) in layout.source_arcs.iter().enumerate() {
        out.push_str(&format!("demandarc {} {} {}\n", u, w, layout.demand_of[arc]));
    }
    for (&(side, vertex, label), &edge) in &layout.label_edge {
        let global = match side {
            Side::Left => vertex,
            Side::Right => layout.source_left + vertex,
        };
        out.push_str(&format!("labeledge {global} {label} {edge}\n"));
    }
    for (demand, pads) in layout.padding.iter().enumerate() {
        for (name, set) in
            [("z", &pads.z), ("y", &pads.y), ("q", &pads.q), ("s", &pads.s), ("x", &pads.x)]
        {
            for &v in set {
                out.push_str(&format!("padset {demand} {name} {v}\n"));
            }
        }
    }
    for (demand, path) in layout.canonical.iter().enumerate() {
        out.push_str(&format!("canon {demand}"));
        for &v in path {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_layout(text: &str) -> Result<GadgetLayout, FormatError> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next().ok_or(FormatError { line: 0, msg: "empty input".into() })?;
    if header != ["layout", "v1"] {
        return err(ln, "expected header `layout v1`");
    }
    let (ln, src) = lines.next().ok_or(FormatError { line: ln, msg: "missing source".into() })?;
    if src.len() != 6 || src[0] != "source" {
        return err(ln, "expected `source <U> <W> <L1> <L2> <Delta>`");
    }
    let mut layout = GadgetLayout {
        source_left: parse_usize(ln, src[1], "left count")?,
        source_right: parse_usize(ln, src[2], "right count")?,
        source_left_labels: parse_usize(ln, src[3], "label count")?,
        source_right_labels: parse_usize(ln, src[4], "label count")?,
        source_max_degree: parse_usize(ln, src[5], "degree")?,
        ..GadgetLayout::default()
    };
    let mut padding: BTreeMap<usize, PaddingSets> = BTreeMap::new();
    let mut canonical: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    while let Some((ln, toks)) = lines.next() {
        match toks[0] {
            "demandarc" => {
                if toks.len() != 4 {
                    return err(ln, "expected `demandarc <u> <w> <demand>`");
                }
                layout.source_arcs.push((
                    parse_usize(ln, toks[1], "left index")?,
                    parse_usize(ln, toks[2], "right index")?,
                ));
                layout.demand_of.push(parse_usize(ln, toks[3], "demand id")?);
            }
            "labeledge" => {
                if toks.len() != 4 {
                    return err(ln, "expected `labeledge <vertex> <label> <edge>`");
                }
                let global = parse_usize(ln, toks[1], "vertex")?;
                let label = parse_usize(ln, toks[2], "label")?;
                let edge = parse_usize(ln, toks[3], "edge index")?;
                let key = if global < layout.source_left {
                    (Side::Left, global, label)
                } else {
                    (Side::Right, global - layout.source_left, label)
                };
                layout.label_edge.insert(key, edge);
            }
            "padset" => {
                if toks.len() != 4 {
                    return err(ln, "expected `padset <demand> <set> <vertex>`");
                }
                let demand = parse_usize(ln, toks[1], "demand id")?;
                let vertex = parse_usize(ln, toks[3], "vertex")?;
                let pads = padding.entry(demand).or_default();
                match toks[2] {
                    "z" => pads.z.push(vertex),
                    "y" => pads.y.push(vertex),
                    "q" => pads.q.push(vertex),
                    "s" => pads.s.push(vertex),
                    "x" => pads.x.push(vertex),
                    other => return err(ln, format!("unknown padding set {other:?}")),
                }
            }
            "canon" => {
                if toks.len() < 2 {
                    return err(ln, "expected `canon <demand> <v...>`");
                }
                let demand = parse_usize(ln, toks[1], "demand id")?;
                let path = toks[2..]
                    .iter()
                    .map(|t| parse_usize(ln, t, "vertex"))
                    .collect::<Result<Vec<_>, _>>()?;
                canonical.insert(demand, path);
            }
            other => return err(ln, format!("unexpected directive {other:?}")),
        }
    }
    let demand_count = layout.demand_of.iter().copied().max().map_or(0, |m| m + 1);
    layout.padding = (0..demand_count)
        .map(|d| padding.remove(&d).unwrap_or_default())
        .collect();
    layout.canonical = (0..demand_count)
        .map(|d| canonical.remove(&d).unwrap_or_default())
        .collect();
    Ok(layout)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub gamma: Q,
    pub epsilon: Q,
    pub d: Option<usize>,
    pub seed: u64,
    pub trim: Option<Q>,
}

pub fn write_pipeline_config(cfg: &PipelineConfig) -> String {
    let mut out = String::new();
    out.push_str("pipeline v1\n");
    out.push_str(&format!("gamma {}\n", format_q(cfg.gamma)));
    out.push_str(&format!("epsilon {}\n", format_q(cfg.epsilon)));
    match cfg.d {
        Some(d) => out.push_str(&format!("d {d}\n")),
        None => out.push_str("d auto\n"),
    }
    out.push_str(&format!("seed {}\n", cfg.seed));
    match cfg.trim {
        Some(t) => out.push_str(&format!("trim {}\n", format_q(t))),
        None => out.push_str("trim auto\n"),
    }
    out
}

pub fn parse_pipeline_config(text: &str) -> Result<PipelineConfig, FormatError> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next().ok_or(FormatError { line: 0, msg: "empty input".into() })?;
    if header != ["pipeline", "v1"] {
        return err(ln, "expected header `pipeline v1`");
    }
    let mut gamma = None;
    let mut epsilon = None;
    let mut d = None;
    let mut seed = None;
    let mut trim = None;
    while let Some((ln, toks)) = lines.next() {
        match toks {
            ["gamma", v] => gamma = Some(parse_q(v).map_err(|m| FormatError { line: ln, msg: m })?),
            ["epsilon", v] => {
                epsilon = Some(parse_q(v).map_err(|m| FormatError { line: ln, msg: m })?)
            }
            ["d", "auto"] => d = Some(None),
            ["d", v] => d = Some(Some(parse_usize(ln, v, "d")?)),
            ["seed", v] => {
                seed = Some(v.parse().map_err(|_| FormatError {
                    line: ln,
                    msg: format!("bad seed {v:?}"),
                })?)
            }
            ["trim", "auto"] => trim = Some(None),
            ["trim", v] => {
                trim = Some(Some(parse_q(v).map_err(|m| FormatError { line: ln, msg: m })?))
            }
            _ => return err(ln, format!("unexpected directive {:?}", toks[0])),
        }
    }
    Ok(PipelineConfig {
        gamma: gamma.ok_or(FormatError { line: 0, msg: "missing gamma".into() })?,
        epsilon: epsilon.ok_or(FormatError { line: 0, msg: "missing epsilon".into() })?,
        d: d.unwrap_or(None),
        seed: seed.ok_or(FormatError { line: 0, msg: "missing seed".into() })?,
        trim: trim.unwrap_or(None),
    })
}

pub fn write_solution(edges: &[usize]) -> String {
    let mut out = String::new();
    for &e in edges {
        out.push_str(&format!("{e}\n"));
    }
    out
}

pub fn parse_solution(text: &str) -> Result<Vec<usize>, FormatError> {
    let mut out = Vec::new();
    let mut lines = Lines::new(text);
    while let Some((ln, toks)) = lines.next() {
        for t in toks {
            out.push(parse_usize(ln, t, "edge index")?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn labelcover_round_trip() {
        let text = "labelcover v1\nlabels 2 2\ncosts 2/1 3/1\nleft 2\nright 2\n\
                    arc 0 0 0 1\narc 1 1 1 0\n";
        let inst = parse_labelcover(text).unwrap();
        assert_eq!(inst.left_labels, 2);
        assert_eq!(inst.costs.unwrap().right, q(3, 1));
        assert_eq!(inst.arcs.len(), 2);
        assert!(!inst.allow_parallel);
        assert_eq!(write_labelcover(&inst), text);
    }

    #[test]
    fn labelcover_parse_errors_carry_line_numbers() {
        let text = "labelcover v1\nlabels 2 2\nleft 1\nright 1\narc 0 0 0\n";
        let e = parse_labelcover(text).unwrap_err();
        assert_eq!(e.line, 5);
    }

    #[test]
    fn parallel_arcs_set_the_flag() {
        let text = "labelcover v1\nlabels 1 1\nleft 1\nright 1\narc 0 0 0\narc 0 0 0\n";
        let inst = parse_labelcover(text).unwrap();
        assert!(inst.allow_parallel);
        assert!(inst.validate().is_empty());
    }

    #[test]
    fn pipeline_config_round_trip() {
        let cfg = PipelineConfig {
            gamma: q(1, 2),
            epsilon: q(1, 8),
            d: None,
            seed: 3,
            trim: Some(q(11, 2)),
        };
        let text = write_pipeline_config(&cfg);
        assert_eq!(parse_pipeline_config(&text).unwrap(), cfg);
    }

    #[test]
    fn solution_round_trip() {
        let text = "3\n1\n2\n# comment\n";
        assert_eq!(parse_solution(text).unwrap(), vec![3, 1, 2]);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest_str("x"), digest_str("x"));
        assert_ne!(digest_str("x"), digest_str("y"));
        assert!(digest_str("x").starts_with("sha256:"));
    }
}
