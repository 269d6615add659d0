//! Simple undirected graphs stored as adjacency bitsets, and the graph
//! families used throughout the crate.

pub(crate) mod circulant;
mod invariants;
mod io;
mod sample;

pub use circulant::{
    build_circulant, build_paley, is_prime, paley_localization, primitive_root,
    sample_random_circulant, CirculantSpec, PaleyLocalization,
};
pub use invariants::{
    chromatic_number, clique_number, independence_number, shannon_bounds, small_invariants,
    GraphInvariants, ShannonBounds, EXACT_ALPHA_CAP, SMALL_INVARIANTS_CAP,
};
pub use sample::sample_er;

use crate::error::{Error, Result};

/// Default vertex cap for [`strong_product`].
pub const STRONG_PRODUCT_CAP: usize = 4096;

/// Undirected simple graph on vertices `0..n`.
///
/// Row `i` occupies `words` consecutive `u64`s of `adj`; bit `j` of row `i` is
/// set iff `{i, j}` is an edge. Rows are symmetric, the diagonal is clear and
/// padding bits past `n - 1` are clear.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph { n, words, adj: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.set(i, j, true);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for i in 0..n {
                g.set(i, (i + 1) % n, true);
            }
        } else if n == 2 {
            g.set(0, 1, true);
        }
        g
    }

    /// Builds a graph from an edge list. Rejects self-loops, out-of-range
    /// endpoints and repeated pairs (in either orientation).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::invalid(format!("edge ({i},{j}) out of range for n={n}")));
            }
            if i == j {
                return Err(Error::invalid(format!("self-loop at vertex {i}")));
            }
            if g.has_edge(i, j) {
                return Err(Error::invalid(format!("duplicate edge ({i},{j})")));
            }
            g.set(i, j, true);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (self.adj[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, on: bool) {
        let (wi, bi) = (i * self.words + j / 64, j % 64);
        let (wj, bj) = (j * self.words + i / 64, i % 64);
        if on {
            self.adj[wi] |= 1 << bi;
            self.adj[wj] |= 1 << bj;
        } else {
            self.adj[wi] &= !(1 << bi);
            self.adj[wj] &= !(1 << bj);
        }
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n || i == j {
            return Err(Error::invalid(format!("cannot add edge ({i},{j}) on n={}", self.n)));
        }
        self.set(i, j, true);
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n || i == j {
            return Err(Error::invalid(format!("cannot remove edge ({i},{j}) on n={}", self.n)));
        }
        self.set(i, j, false);
        Ok(())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_edge(i, j))
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    /// Neighborhood of `i` as a single word. Only valid for `n <= 64`.
    #[inline]
    pub(crate) fn mask(&self, i: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.adj[i * self.words]
    }

    /// Checks symmetry, irreflexivity and clear padding bits.
    pub fn check_invariants(&self) -> Result<()> {
        for i in 0..self.n {
            if self.has_edge(i, i) {
                return Err(Error::Internal(format!("self-loop at {i}")));
            }
            for j in 0..self.n {
                if self.has_edge(i, j) != self.has_edge(j, i) {
                    return Err(Error::Internal(format!("asymmetric pair ({i},{j})")));
                }
            }
            for j in self.n..self.words * 64 {
                if (self.adj[i * self.words + j / 64] >> (j % 64)) & 1 == 1 {
                    return Err(Error::Internal(format!("padding bit {j} set in row {i}")));
                }
            }
        }
        Ok(())
    }

    /// Returns true if `perm` (a bijection `0..n -> 0..n`) maps the edges of
    /// `self` exactly onto the edges of `other`.
    pub fn is_isomorphic_under(&self, other: &Graph, perm: &[usize]) -> bool {
        if self.n != other.n || perm.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        (0..self.n).all(|i| {
            ((i + 1)..self.n).all(|j| self.has_edge(i, j) == other.has_edge(perm[i], perm[j]))
        })
    }

    /// Induced subgraph on `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let m = vertices.len();
        let mut g = Graph::empty(m);
        for a in 0..m {
            for b in (a + 1)..m {
                if self.has_edge(vertices[a], vertices[b]) {
                    g.set(a, b, true);
                }
            }
        }
        g
    }

    /// Stable 64-bit FNV-1a hash of `n` and the sorted edge list.
    pub fn edges_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.n as u64);
        for (i, j) in self.edges() {
            eat(i as u64);
            eat(j as u64);
        }
        h
    }
}

pub fn complement(g: &Graph) -> Graph {
    let mut c = Graph::empty(g.n);
    for i in 0..g.n {
        for j in (i + 1)..g.n {
            if !g.has_edge(i, j) {
                c.set(i, j, true);
            }
        }
    }
    c
}

/// Induced subgraph on the common neighbourhood of `pins`.
#[derive(Clone, Debug)]
pub struct Localized {
    pub graph: Graph,
    /// `labels[k]` is the original vertex now called `k`.
    pub labels: Vec<usize>,
}

/// k-localization: the subgraph induced by the vertices adjacent to every
/// pinned vertex. Common neighbours keep their original relative order.
pub fn localize(g: &Graph, pins: &[usize]) -> Result<Localized> {
    for (a, &p) in pins.iter().enumerate() {
        if p >= g.n {
            return Err(Error::invalid(format!("pin {p} out of range for n={}", g.n)));
        }
        if pins[..a].contains(&p) {
            return Err(Error::invalid(format!("pin {p} repeated")));
        }
    }
    let labels: Vec<usize> = (0..g.n)
        .filter(|&v| !pins.contains(&v) && pins.iter().all(|&p| g.has_edge(p, v)))
        .collect();
    Ok(Localized { graph: g.induced(&labels), labels })
}

pub fn strong_product(g: &Graph, h: &Graph) -> Result<Graph> {
    strong_product_capped(g, h, STRONG_PRODUCT_CAP)
}

/// Strong product with vertex `(u, v)` numbered `u * h.n() + v`.
pub fn strong_product_capped(g: &Graph, h: &Graph, cap: usize) -> Result<Graph> {
    let total = g.n.checked_mul(h.n).unwrap_or(usize::MAX);
    if total > cap {
        return Err(Error::CapExceeded { what: "strong product vertex count", value: total, cap });
    }
    let close = |gr: &Graph, a: usize, b: usize| a == b || gr.has_edge(a, b);
    let mut p = Graph::empty(total);
    for u1 in 0..g.n {
        for v1 in 0..h.n {
            let x = u1 * h.n + v1;
            for u2 in 0..g.n {
                if !close(g, u1, u2) {
                    continue;
                }
                for v2 in 0..h.n {
                    let y = u2 * h.n + v2;
                    if y > x && close(h, v1, v2) {
                        p.set(x, y, true);
                    }
                }
            }
        }
    }
    Ok(p)
}

/// k-fold strong power `G^{⊠k}`; `k = 0` gives the single-vertex graph.
pub fn strong_power(g: &Graph, k: u32, cap: usize) -> Result<Graph> {
    let mut acc = Graph::empty(1);
    for _ in 0..k {
        acc = strong_product_capped(&acc, g, cap)?;
    }
    Ok(acc)
}

pub use io::{parse_graph, write_graph};
