//! Dual graphs of exceptional curves and Dynkin diagram recognition.

use serde::Serialize;

use crate::rdp::{Family, RdpType};

/// Intersection graph of exceptional components. Vertex names `E1..En`
/// follow depth-first discovery order from the first component created.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub vertices: Vec<String>,
    /// Pairs of indices into `vertices`, each with the smaller index first, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dynkin type read off from the shape, if it is an ADE diagram.
    pub fn identify(&self) -> Option<RdpType> {
        Graph::from_dual(self).identify()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph exceptional {\n");
        for v in &self.vertices {
            s.push_str(&format!("  {v};\n"));
        }
        for &(a, b) in &self.edges {
            s.push_str(&format!("  {} -- {};\n", self.vertices[a], self.vertices[b]));
        }
        s.push_str("}\n");
        s
    }
}

/// Mutable adjacency-list graph used while assembling a resolution.
#[derive(Clone, Debug, Default)]
pub(crate) struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn chain(n: usize) -> Self {
        let mut g = Graph { adj: vec![Vec::new(); n] };
        for i in 1..n {
            g.connect(i - 1, i);
        }
        g
    }

    fn from_dual(d: &DualGraph) -> Self {
        let mut g = Graph { adj: vec![Vec::new(); d.len()] };
        for &(a, b) in &d.edges {
            g.connect(a, b);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn connect(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    /// Appends a copy of `other`; returns the offset of its vertices.
    pub fn append(&mut self, other: &Graph) -> usize {
        let off = self.adj.len();
        for nbrs in &other.adj {
            self.adj.push(nbrs.iter().map(|v| v + off).collect());
        }
        off
    }

    fn is_tree(&self) -> bool {
        let n = self.adj.len();
        if n == 0 {
            return false;
        }
        let edges: usize = self.adj.iter().map(|a| a.len()).sum::<usize>() / 2;
        if edges + 1 != n {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Vertices of a path graph from one end to the other.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if !self.is_tree() || self.adj.iter().any(|a| a.len() > 2) {
            return None;
        }
        let start = (0..self.len()).find(|&v| self.adj[v].len() <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = self.adj[cur].iter().find(|&&w| w != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    /// For a tree with exactly one vertex of degree three: the centre and
    /// its arms (listed outward), shortest first.
    pub fn arms(&self) -> Option<(usize, Vec<Vec<usize>>)> {
        if !self.is_tree() {
            return None;
        }
        let branch: Vec<usize> = (0..self.len()).filter(|&v| self.adj[v].len() >= 3).collect();
        if branch.len() != 1 || self.adj[branch[0]].len() != 3 {
            return None;
        }
        let c = branch[0];
        let mut arms: Vec<Vec<usize>> = self.adj[c]
            .iter()
            .map(|&first| {
                let mut arm = vec![first];
                let (mut prev, mut cur) = (c, first);
                while let Some(&next) = self.adj[cur].iter().find(|&&w| w != prev) {
                    arm.push(next);
                    prev = cur;
                    cur = next;
                }
                arm
            })
            .collect();
        arms.sort_by_key(|a| (a.len(), a[0]));
        Some((c, arms))
    }

    pub fn identify(&self) -> Option<RdpType> {
        if let Some(path) = self.path_order() {
            return Some(RdpType::a(path.len() as u32));
        }
        let (_, arms) = self.arms()?;
        let lens: Vec<usize> = arms.iter().map(|a| a.len()).collect();
        let n = self.len() as u32;
        match lens.as_slice() {
            [1, 1, _] => Some(RdpType::d(n, None)),
            [1, 2, 2] => Some(RdpType::e(6, None)),
            [1, 2, 3] => Some(RdpType::e(7, None)),
            [1, 2, 4] => Some(RdpType::e(8, None)),
            _ => None,
        }
    }

    /// Freezes the graph, naming vertices by depth-first discovery order.
    pub fn finish(&self) -> DualGraph {
        let n = self.len();
        let mut rank = vec![usize::MAX; n];
        let mut next = 0;
        for root in 0..n {
            if rank[root] != usize::MAX {
                continue;
            }
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                if rank[v] != usize::MAX {
                    continue;
                }
                rank[v] = next;
                next += 1;
                let mut nbrs = self.adj[v].clone();
                nbrs.sort_unstable_by(|a, b| b.cmp(a));
                stack.extend(nbrs.into_iter().filter(|&w| rank[w] == usize::MAX));
            }
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for v in 0..n {
            for &w in &self.adj[v] {
                let (a, b) = (rank[v].min(rank[w]), rank[v].max(rank[w]));
                if rank[v] < rank[w] {
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        DualGraph { vertices: (1..=n).map(|i| format!("E{i}")).collect(), edges }
    }
}

/// Graph of the exceptional locus after blowing up a point whose tangent
/// cone is a double line, given the graphs of the singular points on the
/// blow-up. Returns the type and graph, or `None` when the configuration is
/// not one of an RDP.
pub(crate) fn attach_double_line(children: &[(RdpType, Graph)]) -> Option<(RdpType, Graph)> {
    let mut kids: Vec<&(RdpType, Graph)> = children.iter().collect();
    kids.sort_by_key(|(t, _)| (t.family(), t.index()));
    let mut g = Graph::new();
    let c = g.add_vertex();
    let attach = |g: &mut Graph, child: &Graph, local: usize| {
        let off = g.append(child);
        g.connect(c, off + local);
    };
    let a = |n: u32| RdpType::a(n);
    let ty = match kids.as_slice() {
        [(t1, g1), (t2, g2), (t3, g3)] if *t1 == a(1) && *t2 == a(1) && *t3 == a(1) => {
            for gi in [g1, g2, g3] {
                attach(&mut g, gi, 0);
            }
            RdpType::d(4, None)
        }
        [(t1, g1), (t2, g2)] if *t1 == a(1) && *t2 == a(3) => {
            attach(&mut g, g1, 0);
            attach(&mut g, g2, g2.path_order()?[1]);
            RdpType::d(5, None)
        }
        [(t1, g1), (t2, g2)] if *t1 == a(1) && t2.family() == Some(Family::D) => {
            attach(&mut g, g1, 0);
            let (_, arms) = g2.arms()?;
            attach(&mut g, g2, *arms[2].last()?);
            RdpType::d(t2.index() + 2, None)
        }
        [(t1, g1)] if *t1 == a(5) => {
            attach(&mut g, g1, g1.path_order()?[2]);
            RdpType::e(6, None)
        }
        [(t1, g1)] if t1.family() == Some(Family::D) && t1.index() == 6 => {
            let (_, arms) = g1.arms()?;
            attach(&mut g, g1, *arms[0].last()?);
            RdpType::e(7, None)
        }
        [(t1, g1)] if *t1 == RdpType::e(7, None) => {
            let (_, arms) = g1.arms()?;
            if arms[2].len() != 3 {
                return None;
            }
            attach(&mut g, g1, *arms[2].last()?);
            RdpType::e(8, None)
        }
        _ => return None,
    };
    debug_assert_eq!(g.identify(), Some(ty));
    Some((ty, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(t: RdpType) -> Graph {
        match (t.family(), t.index()) {
            (Some(Family::A), n) => Graph::chain(n as usize),
            (Some(Family::D), 4) => attach_double_line(&vec![(RdpType::a(1), Graph::chain(1)); 3]).unwrap().1,
            (Some(Family::D), 5) => attach_double_line(&[(RdpType::a(1), Graph::chain(1)), (RdpType::a(3), Graph::chain(3))]).unwrap().1,
            (Some(Family::D), n) => {
                let sub = RdpType::d(n - 2, None);
                attach_double_line(&[(RdpType::a(1), Graph::chain(1)), (sub, build(sub))]).unwrap().1
            }
            (Some(Family::E), 6) => attach_double_line(&[(RdpType::a(5), Graph::chain(5))]).unwrap().1,
            (Some(Family::E), 7) => attach_double_line(&[(RdpType::d(6, None), build(RdpType::d(6, None)))]).unwrap().1,
            (Some(Family::E), 8) => attach_double_line(&[(RdpType::e(7, None), build(RdpType::e(7, None)))]).unwrap().1,
            _ => unreachable!(),
        }
    }

    #[test]
    fn assembled_diagrams_are_recognized() {
        let mut types: Vec<RdpType> = (1..=9).map(RdpType::a).collect();
        types.extend((4..=12).map(|n| RdpType::d(n, None)));
        types.extend((6..=8).map(|n| RdpType::e(n, None)));
        for t in types {
            let g = build(t);
            assert_eq!(g.identify(), Some(t));
            let d = g.finish();
            assert_eq!(d.len() as u32, t.index());
            assert_eq!(d.identify(), Some(t));
        }
    }

    #[test]
    fn rejects_non_ade() {
        assert!(attach_double_line(&vec![(RdpType::a(1), Graph::chain(1)); 2]).is_none());
        let mut cyc = Graph::chain(3);
        cyc.connect(0, 2);
        assert_eq!(cyc.identify(), None);
        let d = build(RdpType::d(4, None)).finish();
        assert!(d.to_dot().contains("E1 -- E2"));
    }
}
