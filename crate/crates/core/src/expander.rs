//! Regular expander graphs on an indexed vertex set.
//!
//! The base family is the 8-regular Gabber–Galil graph on `Z_s × Z_s`;
//! smaller second eigenvalues are reached by taking walks of length `t` as
//! edges (the `t`-th power, degree `8^t`). Vertex counts that are not
//! perfect squares are padded with dummy vertices, and edges touching a dummy
//! are flagged. When the degree needed for the requested bound reaches the
//! vertex count, the complete digraph (all ordered pairs of distinct
//! vertices) is used instead.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Float;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Second eigenvalue bound of the base Gabber–Galil graph, `5√2/8`.
pub const GABBER_GALIL_LAMBDA: f64 = 0.883_883_476_483_184_4;
pub const GABBER_GALIL_DEGREE: usize = 8;
pub const DEFAULT_CERTIFICATION_BUDGET: usize = 4096;

#[derive(Clone, Debug)]
pub struct ExpanderOptions {
    /// Largest padded vertex count for which the spectral gap is measured.
    pub certification_budget: usize,
    /// Use seeded random regular graphs of degree `⌈16/λ²⌉` instead of
    /// Gabber–Galil powers.
    pub random_regular_seed: Option<u64>,
}

impl Default for ExpanderOptions {
    fn default() -> Self {
        ExpanderOptions {
            certification_budget: DEFAULT_CERTIFICATION_BUDGET,
            random_regular_seed: None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum EdgeSource {
    /// Walks of length `power` in the Gabber–Galil graph on `side × side`.
    GabberGalil { side: usize, power: u32 },
    /// All ordered pairs of distinct vertices.
    Complete,
    /// Union of random permutations and their inverses.
    RandomRegular { neighbors: Arc<Vec<Vec<u32>>> },
}

/// A directed edge; `dummy` is set when either end is a padding vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub dummy: bool,
}

#[derive(Clone, Debug)]
pub struct ExpanderGraph {
    vertices: usize,
    padded: usize,
    degree: usize,
    target: f64,
    lambda: f64,
    certified: bool,
    source: EdgeSource,
}

impl ExpanderGraph {
    /// The complete digraph on `vertices` vertices.
    pub fn complete(vertices: usize, target: f64) -> Self {
        ExpanderGraph {
            vertices,
            padded: vertices,
            degree: vertices.saturating_sub(1),
            target,
            lambda: if vertices >= 2 { 1.0 / (vertices - 1) as f64 } else { 0.0 },
            certified: true,
            source: EdgeSource::Complete,
        }
    }

    /// The `power`-th power of the Gabber–Galil graph covering `vertices`.
    pub fn gabber_galil(vertices: usize, power: u32) -> Self {
        let side = ceil_sqrt(vertices.max(1));
        ExpanderGraph {
            vertices,
            padded: side * side,
            degree: GABBER_GALIL_DEGREE.pow(power),
            target: 1.0,
            lambda: GABBER_GALIL_LAMBDA.powi(power as i32),
            certified: false,
            source: EdgeSource::GabberGalil { side, power },
        }
    }

    /// Number of caller vertices `|V|`.
    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Vertex count including padding, `n'`.
    pub fn padded_count(&self) -> usize {
        self.padded
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn edge_count(&self) -> usize {
        self.padded * self.degree
    }

    pub fn source(&self) -> &EdgeSource {
        &self.source
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    /// Second eigenvalue magnitude: measured when [`Self::is_certified`],
    /// otherwise the analytic bound.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// All `n' · d` directed edges in a fixed order.
    pub fn edges(&self) -> Box<dyn Iterator<Item = Edge> + '_> {
        let real = self.vertices;
        let mark = move |from: usize, to: usize| Edge {
            from,
            to,
            dummy: from >= real || to >= real,
        };
        match &self.source {
            EdgeSource::Complete => {
                let n = self.vertices;
                Box::new(
                    (0..n).flat_map(move |u| (0..n).filter(move |&v| v != u).map(move |v| mark(u, v))),
                )
            }
            EdgeSource::GabberGalil { side, power } => {
                let (side, power) = (*side, *power);
                let walks = GABBER_GALIL_DEGREE.pow(power);
                Box::new((0..self.padded).flat_map(move |u| {
                    (0..walks).map(move |mut code| {
                        let mut v = u;
                        for _ in 0..power {
                            v = gabber_galil_step(side, v, code % GABBER_GALIL_DEGREE);
                            code /= GABBER_GALIL_DEGREE;
                        }
                        mark(u, v)
                    })
                }))
            }
            EdgeSource::RandomRegular { neighbors } => Box::new(
                neighbors
                    .iter()
                    .enumerate()
                    .flat_map(move |(u, ns)| ns.iter().map(move |&v| mark(u, v as usize))),
            ),
        }
    }
}

fn ceil_sqrt(n: usize) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while s * s < n {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s
}

/// One of the eight affine moves on `Z_s × Z_s`, vertex `(x, y)` at index
/// `x * s + y`.
#[inline]
fn gabber_galil_step(side: usize, v: usize, which: usize) -> usize {
    let s = side as i64;
    let (x, y) = ((v / side) as i64, (v % side) as i64);
    let (nx, ny) = match which {
        0 => (x + 2 * y, y),
        1 => (x - 2 * y, y),
        2 => (x + 2 * y + 1, y),
        3 => (x - 2 * y - 1, y),
        4 => (x, y + 2 * x),
        5 => (x, y - 2 * x),
        6 => (x, y + 2 * x + 1),
        _ => (x, y - 2 * x - 1),
    };
    (nx.rem_euclid(s) * s + ny.rem_euclid(s)) as usize
}

/// Builds a graph over `vertices` vertices with second eigenvalue at most
/// `lambda_target`, falling back to the complete digraph when the required
/// degree reaches `vertices`.
pub fn build_expander(vertices: usize, lambda_target: f64, opts: &ExpanderOptions) -> ExpanderGraph {
    assert!(lambda_target > 0.0 && lambda_target < 1.0, "lambda target must lie in (0, 1)");
    let complete = || ExpanderGraph::complete(vertices, lambda_target);
    if let Some(seed) = opts.random_regular_seed {
        return random_regular(vertices, lambda_target, seed, opts).unwrap_or_else(complete);
    }
    let mut power = (lambda_target.ln() / GABBER_GALIL_LAMBDA.ln()).ceil().max(1.0) as u32;
    while GABBER_GALIL_LAMBDA.powi(power as i32) > lambda_target {
        power += 1;
    }
    let side = ceil_sqrt(vertices.max(1));
    let mut measured_base = None;
    loop {
        let degree_exceeds = power >= 32 || GABBER_GALIL_DEGREE.pow(power) >= vertices;
        if degree_exceeds {
            return complete();
        }
        let mut g = ExpanderGraph::gabber_galil(vertices, power);
        g.target = lambda_target;
        if side * side > opts.certification_budget {
            return g;
        }
        let base = *measured_base.get_or_insert_with(|| base_lambda(side, opts.certification_budget));
        // powering raises every eigenvalue to the same power
        let lambda = base.powi(power as i32);
        if lambda <= lambda_target {
            g.lambda = lambda;
            g.certified = true;
            return g;
        }
        power += 1;
    }
}

/// Measured second eigenvalue of the unpowered graph on a `side × side`
/// torus, memoized per side.
fn base_lambda(side: usize, budget: usize) -> f64 {
    static MEASURED: OnceLock<Mutex<HashMap<usize, f64>>> = OnceLock::new();
    let memo = MEASURED.get_or_init(Default::default);
    if let Some(&l) = memo.lock().expect("memo lock").get(&side) {
        return l;
    }
    let base = ExpanderGraph::gabber_galil(side * side, 1);
    let l = second_eigenvalue::<f64, _>(&base, budget).expect("within budget");
    memo.lock().expect("memo lock").insert(side, l);
    l
}

fn random_regular(vertices: usize, lambda_target: f64, seed: u64, opts: &ExpanderOptions) -> Option<ExpanderGraph> {
    let mut degree = (16.0 / (lambda_target * lambda_target)).ceil() as usize;
    degree += degree % 2;
    if degree >= vertices || vertices > u32::MAX as usize {
        return None;
    }
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut neighbors = vec![Vec::with_capacity(degree); vertices];
        for _ in 0..degree / 2 {
            let mut perm: Vec<u32> = (0..vertices as u32).collect();
            perm.shuffle(&mut rng);
            for (v, &p) in perm.iter().enumerate() {
                neighbors[v].push(p);
                neighbors[p as usize].push(v as u32);
            }
        }
        let mut g = ExpanderGraph {
            vertices,
            padded: vertices,
            degree,
            target: lambda_target,
            lambda: 2.0 * ((degree - 1) as f64).sqrt() / degree as f64,
            certified: false,
            source: EdgeSource::RandomRegular {
                neighbors: Arc::new(neighbors),
            },
        };
        if vertices > opts.certification_budget {
            return Some(g);
        }
        let measured: f64 = second_eigenvalue(&g, opts.certification_budget).ok()?;
        if measured <= lambda_target {
            g.lambda = measured;
            g.certified = true;
            return Some(g);
        }
    }
    None
}

/// A regular (multi)graph that can apply its normalized adjacency matrix.
pub trait RegularGraph {
    fn order(&self) -> usize;
    /// `out = (1/d) A x`.
    fn apply_normalized<T: Float>(&self, x: &[T], out: &mut [T]);
}

impl RegularGraph for ExpanderGraph {
    fn order(&self) -> usize {
        self.padded
    }

    fn apply_normalized<T: Float>(&self, x: &[T], out: &mut [T]) {
        match &self.source {
            EdgeSource::Complete => {
                let n = self.padded;
                if n < 2 {
                    out.iter_mut().for_each(|o| *o = T::zero());
                    return;
                }
                let total = x.iter().fold(T::zero(), |a, &b| a + b);
                let scale = T::from(n - 1).unwrap();
                for (o, &xi) in out.iter_mut().zip(x) {
                    *o = (total - xi) / scale;
                }
            }
            EdgeSource::GabberGalil { side, power } => {
                let eighth = T::from(GABBER_GALIL_DEGREE).unwrap();
                let mut cur = x.to_vec();
                for _ in 0..*power {
                    for (v, o) in out.iter_mut().enumerate() {
                        let mut acc = T::zero();
                        for which in 0..GABBER_GALIL_DEGREE {
                            acc = acc + cur[gabber_galil_step(*side, v, which)];
                        }
                        *o = acc / eighth;
                    }
                    cur.copy_from_slice(out);
                }
            }
            EdgeSource::RandomRegular { neighbors } => {
                let d = T::from(self.degree).unwrap();
                for (o, ns) in out.iter_mut().zip(neighbors.iter()) {
                    *o = ns.iter().fold(T::zero(), |a, &v| a + x[v as usize]) / d;
                }
            }
        }
    }
}

/// An explicit regular multigraph given by out-neighbor lists.
#[derive(Clone, Debug)]
pub struct AdjacencyList {
    neighbors: Vec<Vec<usize>>,
}

impl AdjacencyList {
    pub fn new(neighbors: Vec<Vec<usize>>) -> Result<Self> {
        let d = neighbors.first().map_or(0, Vec::len);
        let n = neighbors.len();
        if neighbors.iter().any(|ns| ns.len() != d || ns.iter().any(|&v| v >= n)) {
            return Err(Error::BadParams("adjacency lists are not regular".into()));
        }
        Ok(AdjacencyList { neighbors })
    }

    pub fn from_graph(g: &ExpanderGraph) -> Self {
        let mut neighbors = vec![Vec::with_capacity(g.degree()); g.padded_count()];
        for e in g.edges() {
            neighbors[e.from].push(e.to);
        }
        AdjacencyList { neighbors }
    }

    /// Vertices `(v, side)`; each edge `u → v` becomes `(u,0) → (v,1)` and
    /// `(u,1) → (v,0)`.
    pub fn bipartite_double_cover(&self) -> Self {
        let n = self.neighbors.len();
        let mut out = vec![Vec::new(); 2 * n];
        for (u, ns) in self.neighbors.iter().enumerate() {
            for &v in ns {
                out[u].push(n + v);
                out[n + u].push(v);
            }
        }
        AdjacencyList { neighbors: out }
    }

    pub fn neighbors(&self) -> &[Vec<usize>] {
        &self.neighbors
    }
}

impl RegularGraph for AdjacencyList {
    fn order(&self) -> usize {
        self.neighbors.len()
    }

    fn apply_normalized<T: Float>(&self, x: &[T], out: &mut [T]) {
        for (o, ns) in out.iter_mut().zip(&self.neighbors) {
            let d = T::from(ns.len().max(1)).unwrap();
            *o = ns.iter().fold(T::zero(), |a, &v| a + x[v]) / d;
        }
    }
}

/// Largest eigenvalue magnitude of the normalized adjacency matrix on the
/// complement of the constant vector, by deflated power iteration.
///
/// Assumes the adjacency is symmetric.
pub fn second_eigenvalue<T: Float, G: RegularGraph>(graph: &G, budget: usize) -> Result<T> {
    let n = graph.order();
    if n > budget {
        return Err(Error::BudgetExceeded {
            needed: format!("{n} vertices"),
            budget: budget as u64,
        });
    }
    if n < 2 {
        return Ok(T::zero());
    }
    let project = |v: &mut [T]| {
        let mean = v.iter().fold(T::zero(), |a, &b| a + b) / T::from(n).unwrap();
        v.iter_mut().for_each(|x| *x = *x - mean);
    };
    let norm = |v: &[T]| v.iter().fold(T::zero(), |a, &b| a + b * b).sqrt();

    // deterministic pseudo-random start
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    let mut x: Vec<T> = (0..n)
        .map(|_| {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            T::from((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5).unwrap()
        })
        .collect();
    project(&mut x);
    let nx = norm(&x);
    x.iter_mut().for_each(|v| *v = *v / nx);

    let mut y = vec![T::zero(); n];
    let mut estimate = T::zero();
    let mut checkpoint = T::zero();
    const MAX_ITERS: usize = 200_000;
    const WINDOW: usize = 200;
    let tol = T::from(1e-11).unwrap();
    for iter in 1..=MAX_ITERS {
        graph.apply_normalized(&x, &mut y);
        project(&mut y);
        let ny = norm(&y);
        if ny == T::zero() {
            return Ok(T::zero());
        }
        estimate = ny;
        for (xi, &yi) in x.iter_mut().zip(&y) {
            *xi = yi / ny;
        }
        if iter % WINDOW == 0 {
            if (estimate - checkpoint).abs() < tol {
                break;
            }
            checkpoint = estimate;
        }
    }
    Ok(estimate)
}
