//! Tree-cut decompositions: a tree plus a map from graph vertices to tree
//! nodes. Widths upper-bound scramble orders.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::board::{generate, BoardSpec, Piece};
use crate::error::{Error, Result};
use crate::graph::{families, Coord, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDecomposition", into = "RawDecomposition")]
pub struct TreeCutDecomposition {
    links: Vec<(usize, usize)>,
    assignment: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawDecomposition {
    tree_links: Vec<(usize, usize)>,
    assignment: Vec<usize>,
}

impl TryFrom<RawDecomposition> for TreeCutDecomposition {
    type Error = Error;

    fn try_from(r: RawDecomposition) -> Result<Self> {
        TreeCutDecomposition::new(r.tree_links, r.assignment)
    }
}

impl From<TreeCutDecomposition> for RawDecomposition {
    fn from(t: TreeCutDecomposition) -> Self {
        RawDecomposition { tree_links: t.links, assignment: t.assignment }
    }
}

impl TreeCutDecomposition {
    /// The tree has `links.len() + 1` nodes; `assignment[v]` is the node of vertex `v`.
    pub fn new(links: Vec<(usize, usize)>, assignment: Vec<usize>) -> Result<Self> {
        let nodes = links.len() + 1;
        let bad = |msg: String| Err(Error::InvalidDecomposition(msg));
        let mut adj = vec![Vec::new(); nodes];
        for (k, &(a, b)) in links.iter().enumerate() {
            if a >= nodes || b >= nodes || a == b {
                return bad(format!("link {k} = ({a}, {b}) is not a link of a tree on {nodes} nodes"));
            }
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        if let Some(v) = assignment.iter().position(|&t| t >= nodes) {
            return bad(format!("vertex {v} is assigned to node {} of {nodes}", assignment[v]));
        }
        let mut parent = vec![None; nodes];
        let mut depth = vec![usize::MAX; nodes];
        depth[0] = 0;
        let mut stack = vec![0];
        while let Some(a) = stack.pop() {
            for &(b, k) in &adj[a] {
                if depth[b] == usize::MAX {
                    depth[b] = depth[a] + 1;
                    parent[b] = Some((a, k));
                    stack.push(b);
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return bad("tree is disconnected".into());
        }
        Ok(Self { links, assignment, parent, depth })
    }

    /// Every vertex in one bag.
    pub fn single_node(vertex_count: usize) -> Self {
        Self::new(Vec::new(), vec![0; vertex_count]).expect("one node is a tree")
    }

    /// A path of bags, `bags[k]` holding the listed node for each vertex.
    pub fn path(node_of_vertex: Vec<usize>) -> Result<Self> {
        let nodes = node_of_vertex.iter().max().map_or(1, |&x| x + 1);
        Self::new((1..nodes).map(|k| (k - 1, k)).collect(), node_of_vertex)
    }

    /// A star with node 0 at the centre and one leaf per entry of `leaves`.
    pub fn star(vertex_count: usize, leaves: &[Vec<Vertex>]) -> Result<Self> {
        let mut assignment = vec![0; vertex_count];
        for (k, leaf) in leaves.iter().enumerate() {
            for &v in leaf {
                let slot = assignment
                    .get_mut(v)
                    .ok_or_else(|| Error::InvalidDecomposition(format!("vertex {v} out of range")))?;
                *slot = k + 1;
            }
        }
        Self::new((1..=leaves.len()).map(|k| (0, k)).collect(), assignment)
    }

    pub fn node_count(&self) -> usize {
        self.links.len() + 1
    }

    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn bag(&self, node: usize) -> Vec<Vertex> {
        (0..self.assignment.len()).filter(|&v| self.assignment[v] == node).collect()
    }

    /// Walks the tree path from `a` to `b`, reporting each link index and
    /// each interior node.
    fn walk(&self, mut a: usize, mut b: usize, mut link: impl FnMut(usize), mut interior: impl FnMut(usize)) {
        let (ends_a, ends_b) = (a, b);
        let mut step = |x: &mut usize| {
            let (p, k) = self.parent[*x].expect("non-root node");
            link(k);
            *x = p;
            p
        };
        let mut inner = Vec::new();
        while a != b {
            let next = if self.depth[a] >= self.depth[b] { step(&mut a) } else { step(&mut b) };
            inner.push(next);
        }
        // The meeting node is pushed once per side at most; filter endpoints and duplicates.
        inner.sort_unstable();
        inner.dedup();
        for t in inner {
            if t != ends_a && t != ends_b {
                interior(t);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    pub width: u64,
    /// Adhesion of each link, in the order the links were given.
    pub per_link: Vec<u64>,
    /// Bag size plus tunneling edges, per node.
    pub per_node: Vec<u64>,
}

pub fn width(g: &Graph, t: &TreeCutDecomposition) -> Result<WidthReport> {
    if t.assignment.len() != g.vertex_count() {
        return Err(Error::InvalidDecomposition(format!(
            "assignment covers {} vertices, graph has {}",
            t.assignment.len(),
            g.vertex_count()
        )));
    }
    let mut per_link = vec![0u64; t.links.len()];
    let mut per_node = vec![0u64; t.node_count()];
    for &node in &t.assignment {
        per_node[node] += 1;
    }
    for e in g.edges() {
        let (a, b) = (t.assignment[e.v], t.assignment[e.w]);
        if a == b {
            continue;
        }
        let m = u64::from(e.mult);
        let mut tunnel = Vec::new();
        t.walk(a, b, |k| per_link[k] += m, |n| tunnel.push(n));
        for n in tunnel {
            per_node[n] += m;
        }
    }
    let width = per_link.iter().chain(&per_node).copied().max().unwrap_or(0);
    Ok(WidthReport { width, per_link, per_node })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailRule {
    /// Leftover columns join the last full bag.
    #[default]
    MergeIntoLast,
    /// Leftover columns form a bag of their own.
    OwnBag,
}

fn coords(g: &Graph) -> Result<&[Coord]> {
    g.labels().ok_or_else(|| Error::Domain("graph carries no board coordinates".into()))
}

/// Path decomposition whose bags are runs of `cols_per_bag` consecutive
/// columns, using the coordinate labels of `g`.
pub fn column_path_decomposition(g: &Graph, cols_per_bag: usize, tail: TailRule) -> Result<TreeCutDecomposition> {
    if cols_per_bag == 0 {
        return Err(Error::Domain("cols_per_bag must be at least 1".into()));
    }
    let labels = coords(g)?;
    let cols = labels.iter().map(|c| c.col).max().unwrap_or(1);
    let full = (cols / cols_per_bag).max(1);
    let node = |c: usize| {
        let k = (c - 1) / cols_per_bag;
        match tail {
            TailRule::MergeIntoLast => k.min(full - 1),
            TailRule::OwnBag => k,
        }
    };
    TreeCutDecomposition::path(labels.iter().map(|c| node(c.col)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionName {
    Fig4Left,
    Fig4Right,
    Fig11,
    Fig13,
    Fig14,
}

impl DecompositionName {
    pub const ALL: [DecompositionName; 5] = [
        DecompositionName::Fig4Left,
        DecompositionName::Fig4Right,
        DecompositionName::Fig11,
        DecompositionName::Fig13,
        DecompositionName::Fig14,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DecompositionName::Fig4Left => "fig4-left",
            DecompositionName::Fig4Right => "fig4-right",
            DecompositionName::Fig11 => "fig11",
            DecompositionName::Fig13 => "fig13",
            DecompositionName::Fig14 => "fig14",
        }
    }
}

impl fmt::Display for DecompositionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecompositionName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DecompositionName::ALL.into_iter().find(|d| d.as_str() == s).ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

fn expect_size(name: DecompositionName, m: usize, n: usize, want: (usize, usize)) -> Result<()> {
    if (m, n) == want {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} is drawn on a {}x{} board, not {m}x{n}", want.0, want.1)))
    }
}

/// A catalogued decomposition together with its graph. Fig 4 uses the grid
/// graph; the others use king's graphs. `fig14` accepts any `m x m` with `m >= 4`.
pub fn catalogue_decomposition(name: DecompositionName, m: usize, n: usize) -> Result<(Graph, TreeCutDecomposition)> {
    let king = |m, n| BoardSpec::planar(Piece::King, m, n);
    match name {
        DecompositionName::Fig4Left => {
            expect_size(name, m, n, (4, 5))?;
            let spec = king(4, 5);
            // Columns 1-3 at the centre, columns 4-5 next, two squares of column 5 as leaves.
            let mut assignment: Vec<usize> = (0..20).map(|v| if spec.coord(v).col <= 3 { 0 } else { 1 }).collect();
            assignment[spec.index(2, 5)] = 2;
            assignment[spec.index(3, 5)] = 3;
            Ok((families::grid(4, 5), TreeCutDecomposition::new(vec![(0, 1), (1, 2), (1, 3)], assignment)?))
        }
        DecompositionName::Fig4Right => {
            expect_size(name, m, n, (4, 5))?;
            let g = families::grid(4, 5);
            let t = column_path_decomposition(&g, 1, TailRule::OwnBag)?;
            Ok((g, t))
        }
        DecompositionName::Fig11 => {
            expect_size(name, m, n, (3, 4))?;
            let spec = king(3, 4);
            let leaves: Vec<Vec<Vertex>> = [(1, 1), (1, 3), (3, 1), (3, 3)]
                .iter()
                .map(|&(r, c)| vec![spec.index(r, c), spec.index(r, c + 1)])
                .collect();
            Ok((generate(&spec), TreeCutDecomposition::star(12, &leaves)?))
        }
        DecompositionName::Fig13 => {
            expect_size(name, m, n, (4, 5))?;
            let spec = king(4, 5);
            let leaf = |sq: &[(usize, usize)]| sq.iter().map(|&(r, c)| spec.index(r, c)).collect::<Vec<_>>();
            let leaves = vec![
                leaf(&[(1, 1)]),
                leaf(&[(1, 3), (1, 4), (1, 5)]),
                leaf(&[(3, 1), (3, 2), (4, 1), (4, 2)]),
                leaf(&[(3, 4), (3, 5), (4, 4), (4, 5)]),
            ];
            Ok((generate(&spec), TreeCutDecomposition::star(20, &leaves)?))
        }
        DecompositionName::Fig14 => {
            if m != n || m < 4 {
                return Err(Error::Domain(format!("fig14 needs a square board with m >= 4, got {m}x{n}")));
            }
            let spec = king(m, m);
            Ok((generate(&spec), square_king_decomposition(m)))
        }
    }
}

/// Central plus-shaped bag (shifted, with a half column, for even `m`) and
/// chains of L-shaped bags running out to the four corners.
fn square_king_decomposition(m: usize) -> TreeCutDecomposition {
    let spec = BoardSpec::planar(Piece::King, m, m);
    let h = m / 2;
    // Centre row and column, 1-based.
    let (cr, cc) = if m % 2 == 1 { (h + 1, h + 1) } else { (h + 1, h) };
    let in_centre = |r: usize, c: usize| r == cr || c == cc || (m.is_multiple_of(2) && c == cc + 1 && r < cr);
    // Quadrant rectangles: rows, cols, and the inner corner they face.
    let right_from = if m.is_multiple_of(2) { cc + 2 } else { cc + 1 };
    let quads = [
        ((1, cr - 1), (1, cc - 1), (cr - 1, cc - 1)),
        ((1, cr - 1), (right_from, m), (cr - 1, right_from)),
        ((cr + 1, m), (1, cc - 1), (cr + 1, cc - 1)),
        ((cr + 1, m), (cc + 1, m), (cr + 1, cc + 1)),
    ];
    let mut links = Vec::new();
    let mut assignment = vec![usize::MAX; spec.vertex_count()];
    let mut next = 1;
    for ((r0, r1), (c0, c1), (ir, ic)) in quads {
        if r0 > r1 || c0 > c1 {
            continue;
        }
        let shells = (r1 - r0 + 1).min(c1 - c0 + 1);
        let base = next;
        for s in 0..shells {
            links.push((if s == 0 { 0 } else { base + s - 1 }, base + s));
        }
        next += shells;
        for r in r0..=r1 {
            for c in c0..=c1 {
                let s = r.abs_diff(ir).min(c.abs_diff(ic));
                assignment[spec.index(r, c)] = base + s;
            }
        }
    }
    for r in 1..=m {
        for c in 1..=m {
            if in_centre(r, c) {
                assignment[spec.index(r, c)] = 0;
            }
        }
    }
    debug_assert!(assignment.iter().all(|&a| a != usize::MAX));
    TreeCutDecomposition::new(links, assignment).expect("shell chains form a tree")
}

/// Predicted width of the square king decomposition.
pub fn square_king_predicted_width(m: usize) -> usize {
    if m % 2 == 1 {
        3 * m - 6
    } else {
        (5 * m / 2 - 1).max(3 * m - 6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex_set::VertexSet;

    #[test]
    fn single_node_width_is_vertex_count() {
        let g = generate(&BoardSpec::planar(Piece::Knight, 3, 4));
        let r = width(&g, &TreeCutDecomposition::single_node(12)).unwrap();
        assert_eq!(r.width, 12);
        assert!(r.per_link.is_empty());
    }

    #[test]
    fn tunneling_edges_count_at_interior_nodes() {
        // Path 0-1-2 with vertices a, b at the ends: the edge tunnels through node 1.
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let t = TreeCutDecomposition::new(vec![(0, 1), (1, 2)], vec![0, 2]).unwrap();
        let r = width(&g, &t).unwrap();
        assert_eq!(r.per_link, vec![1, 1]);
        assert_eq!(r.per_node, vec![1, 1, 1]);
    }

    #[test]
    fn rejects_non_trees_and_partial_assignments() {
        assert!(TreeCutDecomposition::new(vec![(0, 1), (0, 1)], vec![0]).is_err());
        assert!(TreeCutDecomposition::new(vec![(0, 0)], vec![0]).is_err());
        assert!(TreeCutDecomposition::new(vec![(0, 3)], vec![0]).is_err());
        assert!(TreeCutDecomposition::new(vec![(0, 1)], vec![2]).is_err());
        let g = families::path(3);
        let t = TreeCutDecomposition::single_node(2);
        assert!(matches!(width(&g, &t), Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn fig4_grid_decompositions() {
        let (g, t) = catalogue_decomposition(DecompositionName::Fig4Left, 4, 5).unwrap();
        let r = width(&g, &t).unwrap();
        assert_eq!(r.per_link, vec![4, 3, 3]);
        assert_eq!(r.width, 12);
        let (g, t) = catalogue_decomposition(DecompositionName::Fig4Right, 4, 5).unwrap();
        assert_eq!(width(&g, &t).unwrap().width, 4);
    }

    #[test]
    fn king_figures() {
        let (g, t) = catalogue_decomposition(DecompositionName::Fig11, 3, 4).unwrap();
        assert_eq!(width(&g, &t).unwrap().width, 6);
        let (g, t) = catalogue_decomposition(DecompositionName::Fig13, 4, 5).unwrap();
        assert_eq!(width(&g, &t).unwrap().width, 9);
        assert!(catalogue_decomposition(DecompositionName::Fig13, 4, 6).is_err());
    }

    #[test]
    fn square_king_widths() {
        let widths: Vec<u64> = (4..=7)
            .map(|m| {
                let (g, t) = catalogue_decomposition(DecompositionName::Fig14, m, m).unwrap();
                width(&g, &t).unwrap().width
            })
            .collect();
        assert_eq!(widths, vec![9, 9, 14, 15]);
        for m in 5..=12 {
            let (g, t) = catalogue_decomposition(DecompositionName::Fig14, m, m).unwrap();
            assert_eq!(width(&g, &t).unwrap().width, square_king_predicted_width(m) as u64, "m = {m}");
        }
    }

    #[test]
    fn column_paths() {
        for m in 4..=6 {
            let g = generate(&BoardSpec::planar(Piece::Knight, m, 9));
            let t = column_path_decomposition(&g, 2, TailRule::MergeIntoLast).unwrap();
            assert_eq!(t.bag(t.node_count() - 1).len(), 3 * m);
            assert_eq!(width(&g, &t).unwrap().width, 6 * m as u64 - 8);
        }
        for m in [5, 6] {
            let g = generate(&BoardSpec::torus(Piece::Knight, m, 12));
            let t = column_path_decomposition(&g, 2, TailRule::MergeIntoLast).unwrap();
            assert_eq!(width(&g, &t).unwrap().width, 12 * m as u64);
        }
        assert!(column_path_decomposition(&families::grid(2, 2), 0, TailRule::OwnBag).is_err());
        assert!(column_path_decomposition(&families::path(3), 1, TailRule::OwnBag).is_err());
    }

    #[test]
    fn bishop_white_component_path() {
        for m in [4, 6] {
            let spec = BoardSpec::planar(Piece::Bishop, m, 3 * m);
            let (white, _) = crate::board::bishop_components(&spec).unwrap();
            let (sub, _) = generate(&spec).induced_subgraph(&white).unwrap();
            let t = column_path_decomposition(&sub, m, TailRule::MergeIntoLast).unwrap();
            assert_eq!(width(&sub, &t).unwrap().width, ((m - 1) * m * (m + 1) / 6) as u64, "m = {m}");
        }
    }

    #[test]
    fn width_survives_relabelling_nodes() {
        let (g, t) = catalogue_decomposition(DecompositionName::Fig14, 6, 6).unwrap();
        let k = t.node_count();
        let perm = |x: usize| (x + 3) % k;
        let links = t.links().iter().map(|&(a, b)| (perm(a), perm(b))).collect();
        let assignment = t.assignment().iter().map(|&a| perm(a)).collect();
        let u = TreeCutDecomposition::new(links, assignment).unwrap();
        assert_eq!(width(&g, &u).unwrap().width, width(&g, &t).unwrap().width);
    }

    /// No decomposition of K_{4x5} has width 8. A weighted centroid node
    /// splits the other bags into groups of at most 10 vertices, each with
    /// boundary at most 8; no family of such groups leaves a centre of value 8.
    #[test]
    fn king_4x5_has_no_width_8_decomposition() {
        fn best(v: usize, used: u32, centre: u32, sets: &[Vec<u32>], nb: &[u32], bound: &mut u32) {
            if centre >= *bound {
                return;
            }
            if v == nb.len() {
                *bound = centre;
                return;
            }
            if used >> v & 1 == 1 {
                return best(v + 1, used, centre, sets, nb, bound);
            }
            for &s in &sets[v] {
                if s & used == 0 {
                    let cross: u32 =
                        (0..nb.len()).filter(|&x| s >> x & 1 == 1).map(|x| (nb[x] & used).count_ones()).sum();
                    best(v + 1, used | s, centre + cross, sets, nb, bound);
                }
            }
            best(v + 1, used, centre + 1, sets, nb, bound);
        }
        let g = generate(&BoardSpec::planar(Piece::King, 4, 5));
        let nb: Vec<u32> = g.vertices().map(|v| g.neighbors(v).iter().map(|&(w, _)| 1u32 << w).sum()).collect();
        let run = |w: usize| {
            let mut sets = vec![Vec::new(); 20];
            let mut count = 0;
            for mask in 1u32..1 << 20 {
                if mask.count_ones() > 10 {
                    continue;
                }
                let s = VertexSet::from_indices(20, (0..20).filter(|&x| mask >> x & 1 == 1)).unwrap();
                if g.boundary_size(&s) as usize <= w {
                    sets[mask.trailing_zeros() as usize].push(mask);
                    count += 1;
                }
            }
            let mut bound = u32::MAX;
            best(0, 0, 0, &sets, &nb, &mut bound);
            (count, bound)
        };
        assert_eq!(run(8), (80, 10));
        assert_eq!(run(9).1, 8);
    }
}
