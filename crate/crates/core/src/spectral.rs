//! d-regular multigraphs for the right-degree reduction, generated with the
//! configuration model, and certified by their second adjacency eigenvalue.

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::rng;

/// Iteration tolerance for the eigensolve.
pub const DEFAULT_EIG_TOL: f64 = 1e-9;

/// Default eigenvalue bound constant: random d-regular graphs concentrate
/// near 2*sqrt(d-1), comfortably inside 3*sqrt(d).
pub const DEFAULT_EXPANDER_C: f64 = 3.0;

pub const DEFAULT_EXPANDER_RETRIES: usize = 32;

/// A d-regular multigraph. Self-loops and parallel edges are permitted; a
/// loop contributes 2 to its endpoint's degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularGraph {
    pub n: usize,
    pub d: usize,
    /// Unordered pairs with u <= v, sorted.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCertificate {
    /// Largest absolute value among non-principal adjacency eigenvalues.
    pub lambda2: f64,
    /// The bound c*sqrt(d) the certificate was checked against.
    pub bound: f64,
    pub pass: bool,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct ExpanderBuild {
    pub graph: RegularGraph,
    pub certificate: SpectralCertificate,
    pub retries: usize,
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("n*d must be even, got n={n} d={d}")]
    OddDegreeSum { n: usize, d: usize },
    #[error("degree and vertex count must be positive")]
    EmptyGraph,
    #[error("vertex {vertex} has degree {got}, expected {want}")]
    NotRegular { vertex: usize, got: usize, want: usize },
    #[error("no expander within {attempts} attempts; best lambda2 {best_lambda2} vs bound {bound}")]
    RetriesExhausted { attempts: usize, best_lambda2: f64, bound: f64 },
}

impl RegularGraph {
    pub fn from_edges(n: usize, d: usize, edges: Vec<(usize, usize)>) -> Result<Self, SpectralError> {
        if n == 0 || d == 0 {
            return Err(SpectralError::EmptyGraph);
        }
        let mut deg = vec![0usize; n];
        for &(u, v) in &edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        for (vertex, &got) in deg.iter().enumerate() {
            if got != d {
                return Err(SpectralError::NotRegular { vertex, got, want: d });
            }
        }
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        Ok(RegularGraph { n, d, edges })
    }

    /// Degree lists including loop double-counts.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// y = A x where loops contribute 2 on the diagonal.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for &(u, v) in &self.edges {
            if u == v {
                y[u] += 2.0 * x[u];
            } else {
                y[u] += x[v];
                y[v] += x[u];
            }
        }
    }
}

/// Seeded d-regular multigraph via the configuration model: n*d half-edge
/// stubs paired by a random perfect matching.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<RegularGraph, SpectralError> {
    if n == 0 || d == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    if n * d % 2 != 0 {
        return Err(SpectralError::OddDegreeSum { n, d });
    }
    let mut rng = rng::stream(seed, "regular");
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    stubs.shuffle(&mut rng);
    let edges: Vec<(usize, usize)> = stubs
        .chunks_exact(2)
        .map(|pair| (pair[0].min(pair[1]), pair[0].max(pair[1])))
        .collect();
    RegularGraph::from_edges(n, d, edges)
}

/// Largest non-principal eigenvalue magnitude via power iteration after
/// deflating the all-ones principal eigenvector. Both ends of the spectrum
/// are probed through the shifts A + dI and dI - A, whose deflated dominant
/// eigenvalues recover the extreme signed eigenvalues.
pub fn second_eigenvalue(g: &RegularGraph, c: f64, tol: f64) -> SpectralCertificate {
    let bound = c * (g.d as f64).sqrt();
    if g.n <= 1 {
        return SpectralCertificate { lambda2: 0.0, bound, pass: true, iterations: 0, residual: 0.0 };
    }

    let cap = (10.0 * g.n as f64 * (g.n.max(2) as f64).ln()).ceil() as usize;
    let d = g.d as f64;
    let mut total_iters = 0usize;
    let mut worst_residual: f64 = 0.0;
    let mut extremes = [0.0f64; 2];

    for (slot, sign) in [(0usize, 1.0f64), (1usize, -1.0f64)] {
        // deterministic start vector, deflated against all-ones
        let mut v: Vec<f64> = (0..g.n)
            .map(|i| {
                let x = (i as u64).wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(0x1234_5678);
                (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        deflate(&mut v);
        normalize(&mut v);

        let mut av = vec![0.0f64; g.n];
        let mut mu = 0.0f64;
        let mut residual = f64::INFINITY;
        let mut iters = 0usize;
        while iters < cap {
            g.apply(&v, &mut av);
            // shifted operator: sign*A + dI, nonnegative on the deflated space
            let mut w: Vec<f64> = av
                .iter()
                .zip(&v)
                .map(|(&a, &x)| sign * a + d * x)
                .collect();
            deflate(&mut w);
            mu = dot(&v, &w);
            residual = w
                .iter()
                .zip(&v)
                .map(|(&wi, &vi)| (wi - mu * vi).powi(2))
                .sum::<f64>()
                .sqrt();
            iters += 1;
            if residual <= tol * d.max(1.0) {
                break;
            }
            let norm = dot(&w, &w).sqrt();
            if norm == 0.0 {
                mu = 0.0;
                break;
            }
            w.iter_mut().for_each(|x| *x /= norm);
            v = w;
        }
        // mu estimates d + sign*lambda_extreme
        extremes[slot] = sign * (mu - d);
        total_iters += iters;
        worst_residual = worst_residual.max(if residual.is_finite() { residual } else { 0.0 });
    }

    let lambda2 = extremes[0].abs().max(extremes[1].abs());
    SpectralCertificate {
        lambda2,
        bound,
        pass: lambda2 <= bound + tol.max(1e-9) * (d.max(1.0)),
        iterations: total_iters,
        residual: worst_residual,
    }
}

/// First seeded random regular graph whose certificate passes
/// lambda2 <= c*sqrt(d). Retries walk a derived seed chain for determinism.
pub fn build_expander(
    n: usize,
    d: usize,
    c: f64,
    seed: u64,
    max_retries: usize,
) -> Result<ExpanderBuild, SpectralError> {
    let mut best: Option<SpectralCertificate> = None;
    for attempt in 0..max_retries {
        let g = random_regular(n, d, rng::derived_seed(seed, "expander", attempt as u64))?;
        let certificate = second_eigenvalue(&g, c, DEFAULT_EIG_TOL);
        if certificate.pass {
            return Ok(ExpanderBuild { graph: g, certificate, retries: attempt });
        }
        if best.as_ref().map_or(true, |b| certificate.lambda2 < b.lambda2) {
            best = Some(certificate);
        }
    }
    let best = best.expect("max_retries must be positive");
    Err(SpectralError::RetriesExhausted {
        attempts: max_retries,
        best_lambda2: best.lambda2,
        bound: best.bound,
    })
}

fn deflate(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn normalize(v: &mut [f64]) {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Complete graph on n vertices with uniform edge multiplicity plus a
/// circulant remainder, reaching degree d exactly. Used by the right-degree
/// reduction when a right vertex has too few neighbors for a random
/// expander to make sense; complete multigraphs have minimal lambda2.
pub fn near_complete_regular(n: usize, d: usize) -> Result<RegularGraph, SpectralError> {
    if n == 0 || d == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    if n * d % 2 != 0 {
        return Err(SpectralError::OddDegreeSum { n, d });
    }
    let mut edges = Vec::new();
    if n == 1 {
        for _ in 0..d / 2 {
            edges.push((0, 0));
        }
        return RegularGraph::from_edges(n, d, edges);
    }
    let mult = d / (n - 1);
    let rem = d % (n - 1);
    for u in 0..n {
        for v in u + 1..n {
            for _ in 0..mult {
                edges.push((u, v));
            }
        }
    }
    // rem-regular circulant; rem*n is even because n*d is
    for t in 1..=rem / 2 {
        for u in 0..n {
            let v = (u + t) % n;
            edges.push((u.min(v), u.max(v)));
        }
    }
    if rem % 2 == 1 {
        for u in 0..n / 2 {
            edges.push((u, u + n / 2));
        }
    }
    RegularGraph::from_edges(n, d, edges)
}
