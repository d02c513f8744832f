//! Seeded Brownian paths on dyadic grids with midpoint refinement.
//!
//! A path stores the Brownian *values* `W(t_k)` at the nodes of the dyadic
//! grid `t_k = k * T * 2^-level` (with `W(0) = 0`), and increments are read
//! off as node differences. Refinement inserts conditionally-sampled
//! midpoints and never touches existing nodes, so every partial sum of
//! increments up to a coarse node is preserved bit-for-bit across
//! refinements: a solver consuming the same path at two different levels sees
//! exactly coupled noise.

use crate::error::SgfError;
use crate::sde::rng;
use crate::Result;

// Tags separating the root draw from the bridge draws in the counter space.
const TAG_ROOT: u64 = 1;
const TAG_BRIDGE: u64 = 2;

/// One seeded Brownian sample path over `[0, T]` at dyadic resolution.
#[derive(Debug, Clone)]
pub struct BrownianPath {
    seed: u64,
    path_index: u64,
    horizon: f64,
    level: u32,
    m: usize,
    /// Node values, node-major: `values[k*m..(k+1)*m] = W(t_k)`.
    values: Vec<f64>,
}

#[inline]
fn counter(tag: u64, level: u32, k: u64, component: usize) -> u64 {
    (tag << 56) | ((level as u64) << 48) | ((component as u64) << 40) | k
}

impl BrownianPath {
    /// Samples a path at the given `level` (grid step `h = T * 2^-level`).
    ///
    /// The increments at every level are deterministic functions of
    /// `(seed, path_index, level, k)`.
    pub fn sample(seed: u64, path_index: u64, horizon: f64, level: u32, m: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(SgfError::InvalidParameter(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        if level > 30 {
            return Err(SgfError::InvalidParameter(format!(
                "level {level} too deep (max 30)"
            )));
        }
        if m == 0 {
            return Err(SgfError::InvalidParameter(
                "Brownian dimension must be at least 1".into(),
            ));
        }
        let stream = path_index;
        let mut values = vec![0.0; 2 * m];
        let sqrt_t = horizon.sqrt();
        for j in 0..m {
            values[m + j] = sqrt_t * rng::draw_normal(seed, stream, counter(TAG_ROOT, 0, 0, j));
        }
        let mut path = BrownianPath {
            seed,
            path_index,
            horizon,
            level: 0,
            m,
            values,
        };
        path.refine_to(level);
        Ok(path)
    }

    /// One refinement step: every interval gains a bridge midpoint
    /// `W_mid = (W_a + W_b)/2 + (sqrt(h)/2) Z`, existing nodes untouched.
    pub fn refine(&mut self) {
        let n = self.steps();
        let h = self.step_size();
        let half_sd = 0.5 * h.sqrt();
        let m = self.m;
        let mut next = vec![0.0; (2 * n + 1) * m];
        for k in 0..=n {
            next[2 * k * m..(2 * k + 1) * m].copy_from_slice(&self.values[k * m..(k + 1) * m]);
        }
        for k in 0..n {
            for j in 0..m {
                let a = self.values[k * m + j];
                let b = self.values[(k + 1) * m + j];
                let z = rng::draw_normal(
                    self.seed,
                    self.path_index,
                    counter(TAG_BRIDGE, self.level, k as u64, j),
                );
                next[(2 * k + 1) * m + j] = 0.5 * (a + b) + half_sd * z;
            }
        }
        self.values = next;
        self.level += 1;
    }

    /// Refines until the path reaches `level`. No-op if already at or past it.
    pub fn refine_to(&mut self, level: u32) {
        while self.level < level {
            self.refine();
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path_index(&self) -> u64 {
        self.path_index
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Brownian dimension.
    pub fn dim(&self) -> usize {
        self.m
    }

    /// Number of grid steps at the current level.
    pub fn steps(&self) -> usize {
        1usize << self.level
    }

    /// Grid step `h = T * 2^-level`.
    pub fn step_size(&self) -> f64 {
        self.horizon / self.steps() as f64
    }

    /// Value `W(t_k)` at node `k` of the current grid.
    pub fn node(&self, k: usize) -> &[f64] {
        &self.values[k * self.m..(k + 1) * self.m]
    }

    /// Writes the increment over `[k*stride, (k+1)*stride]` grid steps into
    /// `out`. With `stride = 2^(level - l)` this is exactly the level-`l`
    /// increment of the same path: a node-value difference, so coarse and
    /// fine reads of the path are bit-consistent.
    pub fn increment_into(&self, k: usize, stride: usize, out: &mut [f64]) {
        let a = k * stride * self.m;
        let b = (k + 1) * stride * self.m;
        let (va, vb) = (&self.values[a..a + self.m], &self.values[b..b + self.m]);
        for (o, (lo, hi)) in out.iter_mut().zip(va.iter().zip(vb)) {
            *o = hi - lo;
        }
    }

    /// Partial sum of increments up to node `k` (telescopes to the stored
    /// node value, hence exact under refinement).
    pub fn partial_sum(&self, k: usize) -> &[f64] {
        self.node(k)
    }

    /// Terminal value `W(T)`.
    pub fn terminal(&self) -> &[f64] {
        self.node(self.steps())
    }
}
