//! Hopcroft–Karp maximum bipartite matching.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Bipartite graph with `left` and `right` vertex counts and adjacency lists
/// from left to right.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Self {
        Self {
            left,
            right,
            adj: vec![Vec::new(); left],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u < self.left && v < self.right);
        self.adj[u].push(v);
    }

    /// Size of a maximum matching and, for each left vertex, its partner.
    pub fn maximum_matching(&self) -> (usize, Vec<Option<usize>>) {
        let mut pair_u = vec![NIL; self.left];
        let mut pair_v = vec![NIL; self.right];
        let mut dist = vec![0usize; self.left];
        let mut size = 0;
        while self.bfs(&pair_u, &pair_v, &mut dist) {
            for u in 0..self.left {
                if pair_u[u] == NIL && self.dfs(u, &mut pair_u, &mut pair_v, &mut dist) {
                    size += 1;
                }
            }
        }
        let partners = pair_u.into_iter().map(|v| (v != NIL).then_some(v)).collect();
        (size, partners)
    }

    pub fn has_perfect_matching(&self) -> bool {
        self.left == self.right && self.maximum_matching().0 == self.left
    }

    fn bfs(&self, pair_u: &[usize], pair_v: &[usize], dist: &mut [usize]) -> bool {
        let mut queue = VecDeque::new();
        for u in 0..self.left {
            if pair_u[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                let w = pair_v[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        found
    }

    fn dfs(&self, u: usize, pair_u: &mut [usize], pair_v: &mut [usize], dist: &mut [usize]) -> bool {
        for i in 0..self.adj[u].len() {
            let v = self.adj[u][i];
            let w = pair_v[v];
            if w == NIL || (dist[w] == dist[u] + 1 && self.dfs(w, pair_u, pair_v, dist)) {
                pair_u[u] = v;
                pair_v[v] = u;
                return true;
            }
        }
        dist[u] = usize::MAX;
        false
    }
}
