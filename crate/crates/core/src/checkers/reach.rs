use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::relation::Relation;
use crate::spaces::{BallCover, Net};

use super::engine::SAMPLE_CAP;

/// Directed graph on cover balls: for map `i`, an edge `u -> v` when `f_i`
/// sends one of the sample points of ball `u` into ball `v`.
///
/// Samples are the ball centre plus net points inside the ball. For a table
/// system every ball holds exactly one point, so the graph is the system
/// itself and walks are orbits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachGraph {
    pub nodes: usize,
    /// `edges[i][u]`: sorted successors of `u` under map `i`.
    pub edges: Vec<Vec<Vec<usize>>>,
}

impl ReachGraph {
    pub fn build(rel: &Relation, cover: &BallCover, net_eps: f64) -> Result<ReachGraph> {
        let nodes = cover.len();
        let table = rel.table_net().is_some();
        let net = Net::for_eps(rel.space(), net_eps)?;
        let mut edges = vec![vec![Vec::new(); nodes]; rel.k()];
        for u in 0..nodes {
            let ball = cover.ball(u);
            let mut samples = vec![ball.center.clone()];
            if !table {
                samples.extend(
                    net.points_within(&ball.center, ball.radius)
                        .into_iter()
                        .take(SAMPLE_CAP)
                        .map(|j| net.point(j)),
                );
            }
            for (i, list) in edges.iter_mut().enumerate() {
                let out = &mut list[u];
                for p in &samples {
                    out.extend(cover.containing(&rel.apply(i, p)?));
                }
                out.sort_unstable();
                out.dedup();
            }
        }
        Ok(ReachGraph { nodes, edges })
    }

    pub fn successors(&self, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges.iter().flat_map(|m| m[u].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Nodes at the end of some walk of length >= 1 from `u`.
    pub fn reachable_from(&self, u: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes];
        let mut stack = self.successors(u);
        while let Some(w) = stack.pop() {
            if !seen[w] {
                seen[w] = true;
                stack.extend(self.successors(w).into_iter().filter(|&z| !seen[z]));
            }
        }
        seen
    }

    /// Strongly connected components, each sorted, listed in reverse
    /// topological order.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let succ: Vec<Vec<usize>> = (0..self.nodes).map(|u| self.successors(u)).collect();
        let mut index = vec![usize::MAX; self.nodes];
        let mut low = vec![0; self.nodes];
        let mut on_stack = vec![false; self.nodes];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        for root in 0..self.nodes {
            if index[root] != usize::MAX {
                continue;
            }
            // (node, next successor position)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&(u, pos)) = call.last() {
                if let Some(&w) = succ[u].get(pos) {
                    call.last_mut().expect("nonempty").1 += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[u] = low[u].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == u {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
        comps
    }

    /// Every node reaches every node (itself included) by a nonempty walk.
    pub fn is_strongly_connected(&self) -> bool {
        self.nodes > 0 && (0..self.nodes).all(|u| self.reachable_from(u).iter().all(|&b| b))
    }
}
