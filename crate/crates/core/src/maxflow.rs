//! Dinic max-flow over generic capacities, with the residual-reachability
//! queries needed to enumerate minimal/maximal minimum cuts.

/// Capacity arithmetic for the flow solver. Implemented for exact integers
/// (`i128`) and for `f64` with an absolute tolerance.
pub trait Capacity: Copy + PartialOrd + std::fmt::Debug {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn min(self, other: Self) -> Self;
    /// Strictly positive up to the type's tolerance.
    fn is_positive(self) -> bool;
}

impl Capacity for i128 {
    fn zero() -> Self {
        0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn min(self, other: Self) -> Self {
        Ord::min(self, other)
    }
    fn is_positive(self) -> bool {
        self > 0
    }
}

const F64_TOL: f64 = 1e-11;

impl Capacity for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn min(self, other: Self) -> Self {
        f64::min(self, other)
    }
    fn is_positive(self) -> bool {
        self > F64_TOL
    }
}

#[derive(Debug, Clone)]
struct Edge<C> {
    to: usize,
    cap: C,
    flow: C,
}

/// Max-flow network on nodes `0..n`; every `add_edge` also installs the
/// reverse residual edge with zero capacity.
#[derive(Debug, Clone)]
pub struct MaxFlow<C: Capacity> {
    edges: Vec<Edge<C>>,
    adj: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
}

impl<C: Capacity> MaxFlow<C> {
    pub fn new(n: usize, source: usize, sink: usize) -> Self {
        assert!(source < n && sink < n && source != sink);
        MaxFlow {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            source,
            sink,
        }
    }

    /// Adds a directed edge; returns its index.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: C) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge {
            to,
            cap,
            flow: C::zero(),
        });
        self.edges.push(Edge {
            to: from,
            cap: C::zero(),
            flow: C::zero(),
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn residual(&self, e: usize) -> C {
        self.edges[e].cap.sub(self.edges[e].flow)
    }

    /// Net flow pushed along edge `id` (forward flow minus cancellation).
    pub fn flow_on(&self, id: usize) -> C {
        self.edges[id].flow
    }

    fn bfs_levels(&self) -> Option<Vec<i32>> {
        let n = self.adj.len();
        let mut level = vec![-1i32; n];
        let mut queue = std::collections::VecDeque::new();
        level[self.source] = 0;
        queue.push_back(self.source);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if level[v] < 0 && self.residual(e).is_positive() {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (level[self.sink] >= 0).then_some(level)
    }

    fn dfs_push(&mut self, u: usize, pushed: C, level: &[i32], iter: &mut [usize]) -> C {
        if u == self.sink {
            return pushed;
        }
        while iter[u] < self.adj[u].len() {
            let e = self.adj[u][iter[u]];
            let v = self.edges[e].to;
            if level[v] == level[u] + 1 && self.residual(e).is_positive() {
                let d = self.dfs_push(v, pushed.min(self.residual(e)), level, iter);
                if d.is_positive() {
                    self.edges[e].flow = self.edges[e].flow.add(d);
                    self.edges[e ^ 1].flow = self.edges[e ^ 1].flow.sub(d);
                    return d;
                }
            }
            iter[u] += 1;
        }
        C::zero()
    }

    /// Runs Dinic to completion; returns the max-flow value.
    pub fn run(&mut self, infinity: C) -> C {
        let mut total = C::zero();
        while let Some(level) = self.bfs_levels() {
            let mut iter = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.dfs_push(self.source, infinity, &level, &mut iter);
                if !pushed.is_positive() {
                    break;
                }
                total = total.add(pushed);
            }
        }
        total
    }

    /// Source side of the minimal minimum cut: nodes reachable from the
    /// source in the residual network. This is the inclusion-wise smallest
    /// source side over all minimum cuts.
    pub fn min_cut_source_side(&self) -> Vec<bool> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut stack = vec![self.source];
        seen[self.source] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if !seen[v] && self.residual(e).is_positive() {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Complement of the sink side of the maximal minimum cut: nodes that
    /// cannot reach the sink in the residual network. Inclusion-wise largest
    /// source side over all minimum cuts.
    pub fn max_cut_source_side(&self) -> Vec<bool> {
        let n = self.adj.len();
        let mut reaches_sink = vec![false; n];
        let mut stack = vec![self.sink];
        reaches_sink[self.sink] = true;
        // walk residual edges backwards
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v] {
                // edge e goes v -> u in the residual of its pair e^1
                let u = self.edges[e].to;
                if !reaches_sink[u] && self.residual(e ^ 1).is_positive() {
                    reaches_sink[u] = true;
                    stack.push(u);
                }
            }
        }
        reaches_sink.iter().map(|&b| !b).collect()
    }
}
