//! Connectivity of RDP types under purely inseparable degree-p morphisms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write;

use serde::Serialize;

use crate::rdp::RdpType;
use crate::tables::{builtin_rows, row_types, Binding, TableRow};

/// One row instance, read as an undirected edge between its two types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: RdpType,
    pub to: RdpType,
    pub row: String,
    pub binding: Binding,
    /// Comes from a row whose derivation has a divisorial fixed locus.
    pub ramified: bool,
}

fn row_bindings(row: &TableRow, p: u64, bound: i64) -> Vec<Binding> {
    let mut out = vec![Binding::new(p, &[])];
    for range in &row.params {
        out = out
            .into_iter()
            .flat_map(|b| {
                (range.min..=bound).filter(|&v| range.admits(v)).map(move |v| {
                    let mut b = b.clone();
                    b.values.insert(range.name.clone(), v);
                    b
                })
            })
            .collect();
    }
    out
}

/// Edges in characteristic `p` from the rows of tables 1 to 3, plus the
/// ramified `D` rows of table 5, with parameters up to `bound`.
pub fn inseparable_edges(p: u64, bound: i64) -> Vec<Edge> {
    let mut out = Vec::new();
    for row in builtin_rows() {
        let ramified = row.table == 5;
        if row.table > 3 && !(ramified && matches!(row.row, 2 | 3)) {
            continue;
        }
        for b in row_bindings(&row, p, bound) {
            // Bindings outside the row's characteristic are skipped here.
            let Ok((source, target)) = row_types(&row, &b) else { continue };
            if source != target {
                out.push(Edge { from: source, to: target, row: row.id(), binding: b, ramified });
            }
        }
    }
    out
}

/// Shortest chain of row instances joining `a` and `b`, traversing edges in
/// either direction. `Some(vec![])` when the types coincide.
pub fn connected_by_inseparable(a: RdpType, b: RdpType, p: u64, bound: i64) -> Option<Vec<Edge>> {
    let (a, b) = (a.normalized(p), b.normalized(p));
    if a == b {
        return Some(Vec::new());
    }
    let edges = inseparable_edges(p, bound);
    let mut adj: BTreeMap<RdpType, Vec<(RdpType, usize, bool)>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        adj.entry(e.from).or_default().push((e.to, i, false));
        adj.entry(e.to).or_default().push((e.from, i, true));
    }
    let mut prev: BTreeMap<RdpType, (RdpType, usize, bool)> = BTreeMap::new();
    let mut seen = BTreeSet::from([a]);
    let mut queue = VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        for &(w, i, rev) in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                prev.insert(w, (v, i, rev));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = b;
    while cur != a {
        let &(v, i, rev) = prev.get(&cur)?;
        let mut e = edges[i].clone();
        if rev {
            std::mem::swap(&mut e.from, &mut e.to);
        }
        path.push(e);
        cur = v;
    }
    path.reverse();
    Some(path)
}

/// The edge multigraph as Graphviz DOT; ramified edges are dashed.
pub fn inseparable_graph_dot(p: u64, bound: i64) -> String {
    let mut s = format!("graph inseparable_p{p} {{\n");
    for e in inseparable_edges(p, bound) {
        let style = if e.ramified { ", style=dashed" } else { "" };
        let label = format!("{} {}", e.row, e.binding).replace('"', "'");
        let _ = writeln!(s, "  \"{}\" -- \"{}\" [label=\"{label}\"{style}];", e.from, e.to);
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> RdpType {
        s.parse().unwrap()
    }

    #[test]
    fn known_connections() {
        let path = connected_by_inseparable(t("A1"), t("E7^0"), 3, 3).unwrap();
        assert_eq!(path.len(), 1);
        assert!(["1.5", "2.5"].contains(&path[0].row.as_str()));
        let path = connected_by_inseparable(t("A2"), t("E6^0"), 2, 3).unwrap();
        assert_eq!((path[0].from, path.last().unwrap().to), (t("A2"), t("E6^0")));
        for w in path.windows(2) {
            assert_eq!(w[0].to, w[1].from);
        }
        assert_eq!(connected_by_inseparable(t("D6^1"), t("D6^1"), 2, 3), Some(Vec::new()));
        assert!(connected_by_inseparable(t("A1"), t("A2"), 5, 2).is_none());
    }

    #[test]
    fn dot_lists_every_edge() {
        let dot = inseparable_graph_dot(3, 2);
        assert!(dot.starts_with("graph inseparable_p3 {"));
        assert_eq!(dot.matches(" -- ").count(), inseparable_edges(3, 2).len());
        assert!(dot.contains("style=dashed"));
    }
}
