use itertools::Itertools;

use crate::count::{binomial, Count};
use crate::error::{Error, Result};

/// Subsets or matchings beyond this many are not enumerated.
pub const SOURCE_CAP: u128 = 1 << 26;

/// An exact-cover-by-3-sets instance over ground elements `0..ground.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X3CInstance {
    ground: Vec<String>,
    family: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn new(ground: Vec<String>, family: Vec<[usize; 3]>) -> Result<Self> {
        if ground.is_empty() || ground.len() % 3 != 0 {
            return Err(Error::InvalidInstance(format!("ground set size {} is not a positive multiple of 3", ground.len())));
        }
        if ground.iter().duplicates().next().is_some() {
            return Err(Error::InvalidInstance("duplicate ground element".into()));
        }
        for set in &family {
            if set.iter().any(|&x| x >= ground.len()) || set[0] == set[1] || set[1] == set[2] || set[0] == set[2] {
                return Err(Error::InvalidInstance(format!("{set:?} is not a 3-subset of the ground set")));
            }
        }
        Ok(X3CInstance { ground, family })
    }

    /// Ground set `b1..b{size}` with the given sets of element indices.
    pub fn numbered(size: usize, family: Vec<[usize; 3]>) -> Result<Self> {
        Self::new((1..=size).map(|i| format!("b{i}")).collect(), family)
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn family(&self) -> &[[usize; 3]] {
        &self.family
    }

    /// `k = |B| / 3`.
    pub fn k(&self) -> usize {
        self.ground.len() / 3
    }
}

/// Number of `k`-subfamilies whose union is the ground set.
pub fn count_x3c(src: &X3CInstance) -> Result<Count> {
    let k = src.k();
    let subsets = binomial(src.family.len(), k);
    if subsets > Count::from(SOURCE_CAP) {
        return Err(Error::OracleCapExceeded { subsets: subsets.to_string(), cap: SOURCE_CAP });
    }
    let full: u64 = if src.ground.len() == 64 { u64::MAX } else { (1u64 << src.ground.len()) - 1 };
    if src.ground.len() > 64 {
        return Err(Error::InvalidInstance("ground set too large".into()));
    }
    let masks: Vec<u64> = src.family.iter().map(|s| s.iter().fold(0, |m, &x| m | 1 << x)).collect();
    let hits = (0..masks.len())
        .combinations(k)
        .filter(|c| c.iter().fold(0, |m, &i| m | masks[i]) == full)
        .count();
    Ok(Count::from(hits))
}

/// A bipartite graph with sides of equal size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: Vec<String>,
    right: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(left: Vec<String>, right: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::InvalidInstance(format!("sides differ in size: {} and {}", left.len(), right.len())));
        }
        if left.iter().chain(&right).duplicates().next().is_some() {
            return Err(Error::InvalidInstance("duplicate vertex name".into()));
        }
        for &(x, y) in &edges {
            if x >= left.len() || y >= right.len() {
                return Err(Error::InvalidInstance(format!("edge ({x}, {y}) out of range")));
            }
        }
        if edges.iter().duplicates().next().is_some() {
            return Err(Error::InvalidInstance("duplicate edge".into()));
        }
        Ok(BipartiteGraph { left, right, edges })
    }

    /// Vertices `x1..xn`, `y1..yn` and the given edges.
    pub fn numbered(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("x{i}")).collect(), (1..=n).map(|i| format!("y{i}")).collect(), edges)
    }

    pub fn complete(n: usize) -> Self {
        Self::numbered(n, (0..n).cartesian_product(0..n).collect()).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.left.len()
    }

    pub fn left(&self) -> &[String] {
        &self.left
    }

    pub fn right(&self) -> &[String] {
        &self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn left_degree(&self, x: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == x).count()
    }

    pub fn right_degree(&self, y: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == y).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n())
            .map(|v| self.left_degree(v).max(self.right_degree(v)))
            .max()
            .unwrap_or(0)
    }

    /// Pairs `i < j` of edges sharing an endpoint.
    pub fn adjacent_edge_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.edges.len())
            .tuple_combinations()
            .filter(|&(i, j)| {
                let (a, b) = (self.edges[i], self.edges[j]);
                a.0 == b.0 || a.1 == b.1
            })
            .collect()
    }
}

/// Every bipartite graph on `x1..xn`, `y1..yn`.
pub fn all_bipartite_graphs(n: usize) -> impl Iterator<Item = BipartiteGraph> {
    let slots: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).collect();
    (0u64..1 << slots.len()).map(move |mask| {
        let edges = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        BipartiteGraph::numbered(n, edges).expect("valid")
    })
}

/// `g[j]` = number of matchings with exactly `j` edges, for `j = 0..=n`.
pub fn count_matchings_by_size(g: &BipartiteGraph) -> Result<Vec<Count>> {
    let n = g.n();
    let work: u128 = (0..n).map(|x| g.left_degree(x) as u128 + 1).product();
    if work > SOURCE_CAP {
        return Err(Error::OracleCapExceeded { subsets: work.to_string(), cap: SOURCE_CAP });
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|x| g.edges.iter().filter(|e| e.0 == x).map(|e| e.1).collect())
        .collect();
    let mut counts = vec![0u64; n + 1];
    fn walk(x: usize, size: usize, used: &mut [bool], adj: &[Vec<usize>], counts: &mut [u64]) {
        if x == adj.len() {
            counts[size] += 1;
            return;
        }
        walk(x + 1, size, used, adj, counts);
        for &y in &adj[x] {
            if !used[y] {
                used[y] = true;
                walk(x + 1, size + 1, used, adj, counts);
                used[y] = false;
            }
        }
    }
    walk(0, 0, &mut vec![false; n], &adj, &mut counts);
    Ok(counts.into_iter().map(Count::from).collect())
}

pub fn count_perfect_matchings(g: &BipartiteGraph) -> Result<Count> {
    Ok(count_matchings_by_size(g)?.pop().expect("n + 1 entries"))
}
