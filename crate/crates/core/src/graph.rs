//! Confusion graphs as Cayley graphs on F_q^{nt}.
//!
//! Two tuples `x`, `z` are adjacent iff `x - z` lies in the connection set
//! `D`. A difference `d` is in `D` iff at some symbol position some receiver
//! sees `d` nonzero on its wanted coordinates and zero on its
//! side-information coordinates, which makes the block-length-`t` graph the
//! `t`-fold OR power of the single-symbol graph. Only
//! `D` is stored; dense adjacency is materialized on demand for the exact
//! solvers, which have their own (smaller) caps.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::instance::{Instance, MessageSet};
use crate::rational::Rational;
use crate::space::TupleSpace;

/// Largest vertex count `build` accepts by default.
pub const DEFAULT_VERTEX_CAP: usize = 1 << 20;
/// Largest graph the independence-number solver will materialize.
pub const DENSE_VERTEX_CAP: usize = 1 << 13;
/// Largest graph handed to the exact coloring search.
pub const COLORING_VERTEX_CAP: usize = 256;
/// Largest graph rendered as DOT.
pub const DOT_VERTEX_CAP: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex cap exceeded: {what} needs q^{dims} = {q}^{dims} vertices, cap is {cap}")]
    VertexCap { what: &'static str, q: u32, dims: usize, cap: usize },
    #[error("graphs live over different fields (q = {0} vs q = {1})")]
    FieldMismatch(u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSet {
    pub size: usize,
    /// Vertex indices in increasing order.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionGraph {
    space: TupleSpace,
    in_connection: FixedBitSet,
    connection: Vec<usize>,
}

/// Coordinates each receiver wants and holds, for a given tuple space.
struct ReceiverCoords {
    wants: Vec<usize>,
    has: Vec<usize>,
}

/// Wanted and side-information coordinates of each non-degenerate receiver,
/// one entry per symbol position.
fn receiver_coords(inst: &Instance, space: &TupleSpace) -> Vec<ReceiverCoords> {
    let per_symbol = |set: &MessageSet, s: usize| -> Vec<usize> { set.iter().map(|&j| space.coordinate(j, s)).collect() };
    inst.receivers()
        .iter()
        .filter(|r| !r.is_degenerate())
        .flat_map(|r| {
            (0..space.block_length()).map(move |s| ReceiverCoords { wants: per_symbol(&r.wants, s), has: per_symbol(&r.has, s) })
        })
        .collect()
}

/// The first receiver (0-based) at which `x` and `z` are confusable, straight
/// from the definition: at some symbol position their wanted parts differ
/// and their side information agrees.
pub fn confusing_receiver(inst: &Instance, space: &TupleSpace, x: usize, z: usize) -> Option<usize> {
    let differs = |c: usize| space.digit(x, c) != space.digit(z, c);
    inst.receivers().iter().position(|r| {
        (0..space.block_length()).any(|s| {
            r.wants.iter().any(|&j| differs(space.coordinate(j, s))) && r.has.iter().all(|&j| !differs(space.coordinate(j, s)))
        })
    })
}

impl ConfusionGraph {
    pub fn build(inst: &Instance, t: usize) -> Result<Self, GraphError> {
        Self::build_with_cap(inst, t, DEFAULT_VERTEX_CAP)
    }

    pub fn build_with_cap(inst: &Instance, t: usize, cap: usize) -> Result<Self, GraphError> {
        let q = inst.q();
        let n = inst.message_count();
        let space = TupleSpace::new(q, n, t, cap).ok_or(GraphError::VertexCap {
            what: "confusion graph",
            q,
            dims: n * t,
            cap,
        })?;
        let coords = receiver_coords(inst, &space);
        let size = space.size();
        let mut in_connection = FixedBitSet::with_capacity(size);
        let mut connection = Vec::new();
        for d in 1..size {
            let hit = coords
                .iter()
                .any(|rc| !space.is_zero_on(d, &rc.wants) && space.is_zero_on(d, &rc.has));
            if hit {
                in_connection.insert(d);
                connection.push(d);
            }
        }
        Ok(ConfusionGraph { space, in_connection, connection })
    }

    fn from_connection(space: TupleSpace, connection: Vec<usize>) -> Self {
        let mut in_connection = FixedBitSet::with_capacity(space.size());
        for &d in &connection {
            in_connection.insert(d);
        }
        let g = ConfusionGraph { space, in_connection, connection };
        debug_assert!(g.connection.iter().all(|&d| d != 0 && g.in_connection[g.space.neg(d)]));
        g
    }

    pub fn space(&self) -> &TupleSpace {
        &self.space
    }

    pub fn q(&self) -> u32 {
        self.space.q()
    }

    pub fn vertex_count(&self) -> usize {
        self.space.size()
    }

    /// Sorted nonzero differences that make two tuples adjacent.
    pub fn connection_set(&self) -> &[usize] {
        &self.connection
    }

    /// Every vertex has this degree.
    pub fn degree(&self) -> usize {
        self.connection.len()
    }

    pub fn edge_count(&self) -> usize {
        self.connection.len() * self.vertex_count() / 2
    }

    pub fn adjacent(&self, x: usize, z: usize) -> bool {
        self.in_connection[self.space.sub(x, z)]
    }

    /// True iff no two of `verts` are adjacent. Vertices must be in range.
    pub fn is_independent_set(&self, verts: &[usize]) -> bool {
        let size = self.vertex_count();
        assert!(verts.iter().all(|&v| v < size), "vertex out of range");
        verts
            .iter()
            .enumerate()
            .all(|(i, &x)| verts[i + 1..].iter().all(|&z| x == z || !self.adjacent(x, z)))
    }

    fn neighbor_rows(&self) -> Vec<FixedBitSet> {
        let size = self.vertex_count();
        let mut rows = vec![FixedBitSet::with_capacity(size); size];
        if self.q() == 2 {
            for (v, row) in rows.iter_mut().enumerate() {
                for &d in &self.connection {
                    row.insert(v ^ d);
                }
            }
        } else {
            let diffs: Vec<Vec<u32>> = self.connection.iter().map(|&d| self.space.digits(d)).collect();
            let q = self.q();
            for (v, row) in rows.iter_mut().enumerate() {
                let vd = self.space.digits(v);
                for dd in &diffs {
                    let z = vd.iter().zip(dd).fold(0usize, |acc, (&a, &b)| acc * q as usize + ((a + b) % q) as usize);
                    row.insert(z);
                }
            }
        }
        rows
    }

    fn dense_cap_check(&self, what: &'static str, cap: usize) -> Result<(), GraphError> {
        if self.vertex_count() > cap {
            return Err(GraphError::VertexCap { what, q: self.q(), dims: self.space.dims(), cap });
        }
        Ok(())
    }

    /// Exact independence number with a witness.
    ///
    /// Branch and bound over bitsets with a greedy clique cover as the
    /// bound. The graph is vertex-transitive, so the search fixes vertex 0
    /// in the solution and only explores its non-neighbours.
    pub fn max_independent_set(&self) -> Result<IndependentSet, GraphError> {
        self.dense_cap_check("independence number", DENSE_VERTEX_CAP)?;
        let adj = self.neighbor_rows();
        let mut candidates = FixedBitSet::with_capacity(self.vertex_count());
        candidates.insert_range(..);
        candidates.difference_with(&adj[0]);
        candidates.set(0, false);
        let mut current = vec![0usize];
        let mut best = current.clone();
        if !candidates.is_clear() {
            mis_expand(&adj, &mut current, candidates, &mut best);
        }
        best.sort_unstable();
        Ok(IndependentSet { size: best.len(), witness: best })
    }

    /// Exact chromatic number by DSATUR branch and bound.
    pub fn chromatic_number(&self) -> Result<usize, GraphError> {
        self.chromatic_number_with_cap(COLORING_VERTEX_CAP)
    }

    pub fn chromatic_number_with_cap(&self, cap: usize) -> Result<usize, GraphError> {
        self.dense_cap_check("chromatic number", cap)?;
        let size = self.vertex_count();
        if self.connection.is_empty() {
            return Ok(1);
        }
        let alpha = self.max_independent_set()?.size;
        let lower = size.div_ceil(alpha).max(2);
        let adj: Vec<Vec<usize>> = self.neighbor_rows().iter().map(|r| r.ones().collect()).collect();
        Ok(ColorSearch::new(adj).solve(lower))
    }

    /// `|V| / α`, exact for vertex-transitive graphs.
    pub fn fractional_chromatic(&self) -> Result<Rational, GraphError> {
        let alpha = self.max_independent_set()?.size;
        Ok(Rational::new((self.vertex_count() as i64).into(), (alpha as i64).into()))
    }

    /// OR (disjunctive) product: `(d1, d2)` is a connection iff `d1 ∈ D1`
    /// or `d2 ∈ D2`. Vertex `(v1, v2)` has index `v1 * |V2| + v2`.
    pub fn or_product(&self, other: &ConfusionGraph) -> Result<ConfusionGraph, GraphError> {
        if self.q() != other.q() {
            return Err(GraphError::FieldMismatch(self.q(), other.q()));
        }
        let (a, b) = (&self.space, &other.space);
        let cap = DEFAULT_VERTEX_CAP;
        let space = if a.messages() == b.messages() {
            TupleSpace::new(a.q(), a.messages(), a.block_length() + b.block_length(), cap)
        } else {
            TupleSpace::new(a.q(), a.dims() + b.dims(), 1, cap)
        }
        .ok_or(GraphError::VertexCap { what: "OR product", q: a.q(), dims: a.dims() + b.dims(), cap })?;
        let n2 = other.vertex_count();
        let mut connection = Vec::new();
        for d1 in 0..self.vertex_count() {
            if self.in_connection[d1] {
                connection.extend((0..n2).map(|d2| d1 * n2 + d2));
            } else {
                connection.extend(other.connection.iter().map(|&d2| d1 * n2 + d2));
            }
        }
        Ok(ConfusionGraph::from_connection(space, connection))
    }

    /// Graphviz rendering with base-q tuple labels.
    pub fn to_dot(&self) -> Result<String, GraphError> {
        self.dense_cap_check("DOT rendering", DOT_VERTEX_CAP)?;
        let mut out = String::from("graph confusion {\n");
        for v in 0..self.vertex_count() {
            writeln!(out, "  v{v} [label=\"{}\"];", self.space.label(v)).unwrap();
        }
        for x in 0..self.vertex_count() {
            for &d in &self.connection {
                let z = self.space.add(x, d);
                if z > x {
                    writeln!(out, "  v{x} -- v{z};").unwrap();
                }
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}

fn mis_expand(adj: &[FixedBitSet], current: &mut Vec<usize>, candidates: FixedBitSet, best: &mut Vec<usize>) {
    let (order, bound) = clique_cover(adj, &candidates);
    let mut candidates = candidates;
    for i in (0..order.len()).rev() {
        if current.len() + bound[i] <= best.len() {
            return;
        }
        let v = order[i];
        current.push(v);
        let mut next = candidates.clone();
        next.difference_with(&adj[v]);
        next.set(v, false);
        if next.is_clear() {
            if current.len() > best.len() {
                best.clone_from(current);
            }
        } else {
            mis_expand(adj, current, next, best);
        }
        current.pop();
        candidates.set(v, false);
    }
}

/// Greedy partition of `set` into cliques, in ascending vertex order.
/// `bound[i]` is the number of cliques used once `order[i]` is placed, an
/// upper bound on any independent set within `order[..=i]`.
fn clique_cover(adj: &[FixedBitSet], set: &FixedBitSet) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(set.count_ones(..));
    let mut bound = Vec::with_capacity(order.capacity());
    let mut uncovered = set.clone();
    let mut k = 0;
    while let Some(first) = uncovered.minimum() {
        k += 1;
        let mut open = uncovered.clone();
        let mut v = first;
        loop {
            uncovered.set(v, false);
            open.set(v, false);
            open.intersect_with(&adj[v]);
            order.push(v);
            bound.push(k);
            match open.minimum() {
                Some(next) => v = next,
                None => break,
            }
        }
    }
    (order, bound)
}

struct ColorSearch {
    adj: Vec<Vec<usize>>,
    color: Vec<Option<usize>>,
    /// `conflicts[v][c]`: coloured neighbours of `v` with colour `c`
    conflicts: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    best: usize,
    lower: usize,
}

impl ColorSearch {
    fn new(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        ColorSearch {
            color: vec![None; n],
            conflicts: vec![vec![0; n + 1]; n],
            saturation: vec![0; n],
            best: n,
            lower: 1,
            adj,
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = Some(c);
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            if self.conflicts[w][c] == 0 {
                self.saturation[w] += 1;
            }
            self.conflicts[w][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.color[v] = None;
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            self.conflicts[w][c] -= 1;
            if self.conflicts[w][c] == 0 {
                self.saturation[w] -= 1;
            }
        }
    }

    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.adj.len() {
            if self.color[v].is_some() {
                continue;
            }
            let free_degree = self.adj[v].iter().filter(|&&w| self.color[w].is_none()).count();
            let key = (self.saturation[v], free_degree);
            if best.is_none_or(|(s, d, _)| key > (s, d)) {
                best = Some((key.0, key.1, v));
            }
        }
        best.map(|(_, _, v)| v)
    }

    fn greedy(&mut self) -> usize {
        let mut used = 0;
        while let Some(v) = self.pick() {
            let c = (0..).find(|&c| self.conflicts[v][c] == 0).unwrap();
            self.assign(v, c);
            used = used.max(c + 1);
        }
        for v in 0..self.adj.len() {
            let c = self.color[v].unwrap();
            self.unassign(v, c);
        }
        used
    }

    fn solve(mut self, lower: usize) -> usize {
        self.lower = lower;
        self.best = self.greedy();
        if self.best > self.lower {
            self.search(0);
        }
        self.best
    }

    /// Returns true once a colouring meeting the lower bound is found.
    fn search(&mut self, used: usize) -> bool {
        let Some(v) = self.pick() else {
            self.best = used;
            return self.best <= self.lower;
        };
        for c in 0..=used {
            if used.max(c + 1) >= self.best {
                break;
            }
            if self.conflicts[v][c] > 0 {
                continue;
            }
            self.assign(v, c);
            let done = self.search(used.max(c + 1));
            self.unassign(v, c);
            if done {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::PrimeField;
    use crate::instance::Receiver;

    fn figure2() -> Instance {
        Instance::new(PrimeField::binary(), 2, vec![Receiver::new([0], [1]), Receiver::new([1], [0])]).unwrap()
    }

    fn complete(q: u64) -> ConfusionGraph {
        let inst = Instance::new(PrimeField::new(q).unwrap(), 1, vec![Receiver::new([0], [])]).unwrap();
        ConfusionGraph::build(&inst, 1).unwrap()
    }

    fn edgeless(n: usize) -> ConfusionGraph {
        ConfusionGraph::build(&Instance::new(PrimeField::binary(), n, vec![]).unwrap(), 1).unwrap()
    }

    fn all_independent_sets_max(g: &ConfusionGraph) -> usize {
        let n = g.vertex_count();
        (0u32..1 << n)
            .filter(|s| {
                let v: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
                g.is_independent_set(&v)
            })
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn figure2_is_a_four_cycle() {
        let g = ConfusionGraph::build(&figure2(), 1).unwrap();
        assert_eq!(g.vertex_count(), 4);
        // 00=0, 01=1, 10=2, 11=3
        assert_eq!(g.connection_set(), &[1, 2]);
        assert_eq!(g.edge_count(), 4);
        for (x, z) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            assert!(g.adjacent(x, z));
        }
        assert!(!g.adjacent(0, 3));
        assert!(!g.adjacent(1, 2));
        assert_eq!(confusing_receiver(&figure2(), g.space(), 0, 1), Some(1));
    }

    #[test]
    fn figure2_independent_sets() {
        let g = ConfusionGraph::build(&figure2(), 1).unwrap();
        assert!(g.is_independent_set(&[0, 3]));
        assert!(!g.is_independent_set(&[0, 1]));
        assert!(g.is_independent_set(&[2]));
        let mis = g.max_independent_set().unwrap();
        assert_eq!(mis.size, all_independent_sets_max(&g));
        assert_eq!(mis, IndependentSet { size: 2, witness: vec![0, 3] });
        assert_eq!(g.chromatic_number().unwrap(), 2);
        assert_eq!(g.fractional_chromatic().unwrap(), Rational::from_integer(2.into()));
    }

    #[test]
    fn single_message_gives_complete_graph() {
        let g = complete(2);
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        let g5 = complete(5);
        assert_eq!(g5.max_independent_set().unwrap().size, 1);
        assert_eq!(g5.chromatic_number().unwrap(), 5);
        assert_eq!(g5.fractional_chromatic().unwrap(), Rational::from_integer(5.into()));
    }

    #[test]
    fn receiver_free_instance_is_edgeless() {
        let g = edgeless(3);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.max_independent_set().unwrap().size, 8);
        assert_eq!(g.chromatic_number().unwrap(), 1);
    }

    #[test]
    fn degenerate_receivers_add_no_edges() {
        let inst = Instance::new(PrimeField::binary(), 2, vec![Receiver::new([], [0])]).unwrap();
        assert_eq!(ConfusionGraph::build(&inst, 1).unwrap().edge_count(), 0);
    }

    #[test]
    fn or_square_of_figure2_matches_block_length_two() {
        let g1 = ConfusionGraph::build(&figure2(), 1).unwrap();
        let g2 = ConfusionGraph::build(&figure2(), 2).unwrap();
        let prod = g1.or_product(&g1).unwrap();
        assert_eq!(prod.connection_set(), g2.connection_set());
        assert_eq!(prod.space(), g2.space());
    }

    #[test]
    fn or_product_trivial_cases() {
        let e = edgeless(1);
        assert_eq!(e.or_product(&e).unwrap().edge_count(), 0);
        let k = complete(3);
        let kk = k.or_product(&k).unwrap();
        assert_eq!(kk.vertex_count(), 9);
        assert_eq!(kk.degree(), 8);
        assert!(matches!(k.or_product(&complete(2)), Err(GraphError::FieldMismatch(3, 2))));
    }

    #[test]
    fn vertex_cap() {
        let inst = Instance::new(PrimeField::binary(), 21, vec![]).unwrap();
        assert!(matches!(ConfusionGraph::build(&inst, 1), Err(GraphError::VertexCap { .. })));
        let big = ConfusionGraph::build(&Instance::new(PrimeField::binary(), 9, vec![]).unwrap(), 1).unwrap();
        assert!(big.chromatic_number().is_err());
        assert!(big.to_dot().is_ok());
        let huge = ConfusionGraph::build(&Instance::new(PrimeField::binary(), 14, vec![]).unwrap(), 1).unwrap();
        assert!(huge.max_independent_set().is_err());
        assert!(huge.to_dot().is_err());
    }

    #[test]
    fn dot_output() {
        let g = ConfusionGraph::build(&figure2(), 1).unwrap();
        let dot = g.to_dot().unwrap();
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert_eq!(dot.matches("[label=").count(), 4);
        assert!(dot.contains("v0 [label=\"00\"]"));
        assert!(dot.contains("v0 -- v1;"));

        let single = ConfusionGraph::build(&Instance::new(PrimeField::binary(), 0, vec![]).unwrap(), 1).unwrap();
        let dot = single.to_dot().unwrap();
        assert_eq!(dot.matches("[label=").count(), 1);
        assert_eq!(dot.matches(" -- ").count(), 0);
    }

    #[test]
    fn chromatic_of_five_cycle_like_graph() {
        // Receivers forming a directed 3-cycle over GF(2): 1<-3, 2<-1, 3<-2.
        let inst = Instance::new(
            PrimeField::binary(),
            3,
            vec![Receiver::new([0], [2]), Receiver::new([1], [0]), Receiver::new([2], [1])],
        )
        .unwrap();
        let g = ConfusionGraph::build(&inst, 1).unwrap();
        let alpha = g.max_independent_set().unwrap().size;
        assert_eq!(alpha, all_independent_sets_max(&g));
        let chi = g.chromatic_number().unwrap();
        assert!(Rational::from_integer((chi as i64).into()) >= g.fractional_chromatic().unwrap());
    }
}
