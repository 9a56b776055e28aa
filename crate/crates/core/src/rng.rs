//! Deterministic randomness: a splitmix64 generator for seeded fixtures and
//! Halton low-discrepancy sequences for sphere and ball sampling.
//!
//! Everything here is seed-stable across platforms; reports produced from a
//! fixed seed are byte-identical.

/// Splitmix64 pseudo-random generator. Small, fast, and stable forever.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: u64) -> u64 {
        // Modulo bias is irrelevant at fixture scale.
        self.next_u64() % n
    }

    /// Uniform point in the closed unit disk, as (x, y).
    pub fn in_unit_disk(&mut self) -> (f64, f64) {
        loop {
            let x = self.range(-1.0, 1.0);
            let y = self.range(-1.0, 1.0);
            if x * x + y * y <= 1.0 {
                return (x, y);
            }
        }
    }
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Radical-inverse of `index` in the given base (van der Corput).
pub fn radical_inverse(base: u64, mut index: u64) -> f64 {
    let inv_base = 1.0 / base as f64;
    let mut inv = inv_base;
    let mut result = 0.0;
    while index > 0 {
        result += (index % base) as f64 * inv;
        index /= base;
        inv *= inv_base;
    }
    result
}

/// The `index`-th Halton point in `dim` dimensions (index starts at 1).
///
/// Prefixes are nested: the first n points of the sequence never change, so
/// sample sets at doubled counts are supersets of the smaller ones.
pub fn halton_point(dim: usize, index: u64, out: &mut [f64]) {
    assert!(dim <= PRIMES.len(), "halton dimension too large");
    for (i, slot) in out.iter_mut().enumerate().take(dim) {
        *slot = radical_inverse(PRIMES[i], index);
    }
}

/// Quasi-Gaussian sample from a pair of uniforms via Box-Muller.
fn box_muller(u1: f64, u2: f64) -> (f64, f64) {
    let u1 = u1.max(1e-300);
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * u2;
    (r * th.cos(), r * th.sin())
}

/// The `index`-th point of a low-discrepancy sequence on the unit sphere in
/// `dim` real dimensions (dim >= 2, index starts at 1).
pub fn sphere_point(dim: usize, index: u64) -> Vec<f64> {
    let pairs = dim.div_ceil(2);
    let mut u = vec![0.0; 2 * pairs];
    halton_point(2 * pairs, index, &mut u);
    let mut g = Vec::with_capacity(2 * pairs);
    for p in 0..pairs {
        let (a, b) = box_muller(u[2 * p], u[2 * p + 1]);
        g.push(a);
        g.push(b);
    }
    g.truncate(dim);
    let norm: f64 = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-300 {
        let mut e = vec![0.0; dim];
        e[0] = 1.0;
        return e;
    }
    g.iter().map(|x| x / norm).collect()
}

/// First `count` points of a low-discrepancy sequence inside the closed ball
/// of the given center and radius (rejection from the bounding box, so the
/// accepted set is a nested prefix as well).
pub fn ball_points(center: &[f64], radius: f64, count: usize) -> Vec<Vec<f64>> {
    let dim = center.len();
    let mut pts = Vec::with_capacity(count);
    let mut u = vec![0.0; dim];
    let mut index = 1u64;
    while pts.len() < count {
        halton_point(dim, index, &mut u);
        index += 1;
        let p: Vec<f64> = (0..dim)
            .map(|i| center[i] + radius * (2.0 * u[i] - 1.0))
            .collect();
        let d2: f64 = p.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
        if d2 <= radius * radius {
            pts.push(p);
        }
        if index > 64 * count as u64 + 1024 {
            break; // dimension too high for box rejection; callers keep dims small
        }
    }
    pts
}
