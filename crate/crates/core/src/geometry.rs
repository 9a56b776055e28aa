//! Self-similar set generation, natural measures, and Ahlfors-regularity
//! certification.
//!
//! A sampled set carries one representative point per depth-m cylinder of an
//! iterated function system, weighted by the natural self-similar measure
//! (the mass of a cylinder for the word `w` is the product of the map ratios
//! raised to the similarity dimension). Cylinder granularity bounds every
//! scale the sampling can resolve, and the regularity scan refuses scales
//! below that floor.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the number of generated cylinder points.
pub const MAX_POINTS: usize = 1 << 20;

/// Absolute tolerance of the similarity-dimension bisection.
pub const MORAN_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("point count {requested} exceeds the cap {cap}")]
    Resource { requested: u128, cap: usize },
    #[error("scale {scale} is below the sampling resolution {resolution}")]
    Resolution { scale: f64, resolution: f64 },
    #[error("invalid scale {0}; scales must lie in (0, diameter]")]
    InvalidScale(f64),
    #[error("invalid similarity: ratio must lie strictly in (0,1), got {0}")]
    InvalidRatio(f64),
    #[error("coordinates must be finite")]
    NonFinite,
}

/// A point of C^n stored as 2n real coordinates `[re1, im1, ...]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    /// Planar point identified with a complex number.
    pub fn complex(re: f64, im: f64) -> Self {
        Point {
            coords: vec![re, im],
        }
    }

    pub fn origin(real_dim: usize) -> Self {
        Point {
            coords: vec![0.0; real_dim],
        }
    }

    pub fn real_dim(&self) -> usize {
        self.coords.len()
    }

    /// Complex ambient dimension n (coords hold 2n reals).
    pub fn ambient_n(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Pad with zero coordinates up to `real_dim` total (embedding into a
    /// higher ambient space).
    pub fn padded(&self, real_dim: usize) -> Point {
        let mut c = self.coords.clone();
        c.resize(real_dim.max(c.len()), 0.0);
        Point { coords: c }
    }
}

/// A contracting planar similarity `z -> ratio * e^{i rotation} * z + b`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Similarity {
    pub ratio: f64,
    pub rotation: f64,
    pub translation: Point,
}

impl Similarity {
    pub fn new(ratio: f64, rotation: f64, translation: Point) -> Result<Self, GeometryError> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(GeometryError::InvalidRatio(ratio));
        }
        if !translation.is_finite() || !rotation.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        Ok(Similarity {
            ratio,
            rotation,
            translation,
        })
    }

    fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        let (s, c) = self.rotation.sin_cos();
        let tx = self.translation.coords[0];
        let ty = *self.translation.coords.get(1).unwrap_or(&0.0);
        (
            self.ratio * (c * x - s * y) + tx,
            self.ratio * (s * x + c * y) + ty,
        )
    }
}

/// A sampled compact set with its natural measure: one representative point
/// per cylinder, nonnegative weights, a similarity dimension, and (after
/// certification) the two-sided regularity constants.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DSet {
    pub dimension_d: f64,
    pub depth: u32,
    pub diameter: f64,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reg_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reg_b: Option<f64>,
    /// Finest scale the sampling resolves; scales below it are rejected.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub resolution: Option<f64>,
}

impl DSet {
    pub fn new(
        dimension_d: f64,
        depth: u32,
        points: Vec<Point>,
        weights: Vec<f64>,
        resolution: Option<f64>,
    ) -> Result<Self, GeometryError> {
        if points.len() != weights.len() {
            return Err(GeometryError::Degenerate(
                "points and weights differ in length".into(),
            ));
        }
        if points.is_empty() {
            return Err(GeometryError::Degenerate("empty point cloud".into()));
        }
        let real_dim = points[0].real_dim();
        if real_dim == 0 || !real_dim.is_multiple_of(2) {
            return Err(GeometryError::Degenerate(
                "points need a positive even number of real coordinates".into(),
            ));
        }
        for p in &points {
            if p.real_dim() != real_dim {
                return Err(GeometryError::Degenerate("mixed point dimensions".into()));
            }
            if !p.is_finite() {
                return Err(GeometryError::NonFinite);
            }
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(GeometryError::Degenerate(
                "negative or non-finite weight".into(),
            ));
        }
        if !(dimension_d > 0.0 && dimension_d <= real_dim as f64) {
            return Err(GeometryError::Degenerate(format!(
                "dimension {dimension_d} outside (0, {real_dim}]"
            )));
        }
        let diameter = bbox_diagonal(&points);
        Ok(DSet {
            dimension_d,
            depth: depth.max(1),
            diameter,
            points,
            weights,
            reg_a: None,
            reg_b: None,
            resolution,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn real_dim(&self) -> usize {
        self.points.first().map_or(0, Point::real_dim)
    }

    /// Finest resolvable scale: the stored cylinder bound when present, the
    /// minimal nearest-neighbour distance otherwise.
    pub fn sampling_resolution(&self) -> f64 {
        if let Some(r) = self.resolution {
            return r;
        }
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                let d2 = self.points[i].dist2(&self.points[j]);
                if d2 > 0.0 && d2 < best {
                    best = d2;
                }
            }
        }
        if best.is_finite() {
            best.sqrt()
        } else {
            0.0
        }
    }

    pub fn certify(&mut self, report: &RegularityReport) {
        self.reg_a = Some(report.certified_a);
        self.reg_b = Some(report.certified_b);
    }

    /// Re-derive the validity invariants after deserialization.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let clone = DSet::new(
            self.dimension_d,
            self.depth,
            self.points.clone(),
            self.weights.clone(),
            self.resolution,
        )?;
        if self.diameter < clone.diameter * (1.0 - 1e-9) {
            return Err(GeometryError::Degenerate(
                "declared diameter below the point-cloud extent".into(),
            ));
        }
        Ok(())
    }
}

fn bbox_diagonal(points: &[Point]) -> f64 {
    let dim = points[0].real_dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points {
        for (i, &c) in p.coords.iter().enumerate() {
            lo[i] = lo[i].min(c);
            hi[i] = hi[i].max(c);
        }
    }
    lo.iter()
        .zip(&hi)
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt()
}

/// Per-scale regularity ratios and the certified two-sided constants.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegularityReport {
    /// Scales in strictly decreasing order.
    pub scales: Vec<f64>,
    /// Worst-case upper ratio `sup_x mass(B(x,t)) / t^d` per scale.
    pub upper_ratios: Vec<f64>,
    /// Worst-case lower ratio `inf_x mass(B(x,t)) / t^d` per scale.
    pub lower_ratios: Vec<f64>,
    pub certified_a: f64,
    pub certified_b: f64,
}

/// Solve `sum_i ratio_i^d = 1` for the similarity dimension `d` by
/// bisection.
pub fn moran_dimension(ratios: &[f64]) -> Result<f64, GeometryError> {
    if ratios.is_empty() {
        return Err(GeometryError::Degenerate("empty ratio list".into()));
    }
    for &r in ratios {
        if !(r > 0.0 && r < 1.0) {
            return Err(GeometryError::InvalidRatio(r));
        }
    }
    if ratios.len() == 1 {
        return Err(GeometryError::Degenerate(
            "single-map system has no positive similarity dimension".into(),
        ));
    }
    let f = |d: f64| ratios.iter().map(|r| r.powf(d)).sum::<f64>() - 1.0;
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut guard = 0;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 64 {
            return Err(GeometryError::Degenerate(
                "similarity dimension did not bracket".into(),
            ));
        }
    }
    // bisect well past the documented tolerance so cylinder masses stay
    // consistent to ~1e-15 at any depth
    for _ in 0..200 {
        if hi - lo <= f64::EPSILON * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Generate one representative point per length-`depth` word of the system,
/// weighted by the natural self-similar measure, embedded into C^ambient_n.
///
/// The maps are assumed to satisfy the open-set condition; the built-in
/// generators below do.
pub fn generate_ifs_set(
    maps: &[Similarity],
    depth: u32,
    ambient_n: usize,
) -> Result<DSet, GeometryError> {
    if maps.len() < 2 {
        return Err(GeometryError::Degenerate(
            "need at least two similarities".into(),
        ));
    }
    let depth = depth.max(1);
    let count = (maps.len() as u128).pow(depth);
    if count > MAX_POINTS as u128 {
        return Err(GeometryError::Resource {
            requested: count,
            cap: MAX_POINTS,
        });
    }
    let ratios: Vec<f64> = maps.iter().map(|m| m.ratio).collect();
    let d = moran_dimension(&ratios)?;
    let branch_mass: Vec<f64> = ratios.iter().map(|r| r.powf(d)).collect();

    let real_dim = 2 * ambient_n.max(1);
    let mut points = Vec::with_capacity(count as usize);
    let mut weights = Vec::with_capacity(count as usize);
    // Words in lexicographic order; apply maps outermost-first so that the
    // representative is the image of the base point 0 under the composition.
    let mut word = vec![0usize; depth as usize];
    loop {
        let (mut x, mut y) = (0.0, 0.0);
        let mut w = 1.0;
        for &letter in word.iter().rev() {
            let (nx, ny) = maps[letter].apply(x, y);
            x = nx;
            y = ny;
        }
        for &letter in word.iter() {
            w *= branch_mass[letter];
        }
        let mut coords = vec![x, y];
        coords.resize(real_dim, 0.0);
        points.push(Point::new(coords));
        weights.push(w);
        // advance the word as a base-m counter
        let mut pos = word.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            word[pos] += 1;
            if word[pos] < maps.len() {
                break;
            }
            word[pos] = 0;
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
        }
        if pos == usize::MAX {
            break;
        }
    }

    let max_ratio = ratios.iter().cloned().fold(0.0_f64, f64::max);
    let mut set = DSet::new(d, depth, points, weights, None)?;
    // The sample cloud sits one representative deep in each cylinder, so
    // the attractor diameter exceeds the sampled one by at most twice the
    // cylinder diameter; report the corrected bound.
    let shrink = 2.0 * max_ratio.powi(depth as i32);
    if shrink < 1.0 {
        set.diameter /= 1.0 - shrink;
    }
    set.resolution = Some(max_ratio.powi(depth as i32) * set.diameter);
    Ok(set)
}

/// Worst-case regularity ratios over the sample points at the given scales.
///
/// Ball masses are weight sums over the sample cloud; centers range over the
/// sample points themselves, which are dense in the set at the cylinder
/// resolution.
pub fn regularity_constants(set: &DSet, scales: &[f64]) -> Result<RegularityReport, GeometryError> {
    if scales.is_empty() {
        return Err(GeometryError::Degenerate("empty scale list".into()));
    }
    if set.diameter <= 0.0 {
        return Err(GeometryError::Degenerate("set has zero diameter".into()));
    }
    let resolution = set.sampling_resolution();
    let mut sorted: Vec<f64> = scales.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sorted.dedup();
    for &t in &sorted {
        if !(t > 0.0 && t <= set.diameter * (1.0 + 1e-12)) {
            return Err(GeometryError::InvalidScale(t));
        }
        if t < resolution {
            return Err(GeometryError::Resolution {
                scale: t,
                resolution,
            });
        }
    }

    let d = set.dimension_d;
    let mut upper = Vec::with_capacity(sorted.len());
    let mut lower = Vec::with_capacity(sorted.len());
    for &t in &sorted {
        let t2 = t * t;
        let td = t.powf(d);
        let mut sup = f64::NEG_INFINITY;
        let mut inf = f64::INFINITY;
        for x in &set.points {
            let mut mass = 0.0;
            for (p, w) in set.points.iter().zip(&set.weights) {
                if x.dist2(p) <= t2 {
                    mass += w;
                }
            }
            let ratio = mass / td;
            sup = sup.max(ratio);
            inf = inf.min(ratio);
        }
        upper.push(sup);
        lower.push(inf);
    }
    let a = upper.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let b = lower.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(RegularityReport {
        scales: sorted,
        upper_ratios: upper,
        lower_ratios: lower,
        certified_a: a,
        certified_b: b,
    })
}

/// Restrict the sampled set to the closed ball `B(center, radius)`; returns
/// the sub-cloud and its total weight. An empty intersection is returned as
/// an empty cloud with weight zero rather than an error.
pub fn ball_restrict(set: &DSet, center: &Point, radius: f64) -> (DSet, f64) {
    assert!(radius > 0.0, "ball_restrict needs a positive radius");
    let r2 = radius * radius;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (p, w) in set.points.iter().zip(&set.weights) {
        if center.dist2(p) <= r2 {
            points.push(p.clone());
            weights.push(*w);
        }
    }
    let eps: f64 = weights.iter().sum();
    let sub = DSet {
        dimension_d: set.dimension_d,
        depth: set.depth,
        diameter: if points.is_empty() {
            0.0
        } else {
            bbox_diagonal(&points)
        },
        points,
        weights,
        reg_a: set.reg_a,
        reg_b: set.reg_b,
        resolution: set.resolution,
    };
    (sub, eps)
}

// ---------------------------------------------------------------------------
// Built-in generators (all satisfy the open-set condition)
// ---------------------------------------------------------------------------

/// Middle-thirds construction on the segment `[a, b]` of the real axis.
pub fn cantor_maps_on(a: f64, b: f64) -> Vec<Similarity> {
    vec![
        Similarity::new(1.0 / 3.0, 0.0, Point::complex(a * 2.0 / 3.0, 0.0)).unwrap(),
        Similarity::new(1.0 / 3.0, 0.0, Point::complex(b * 2.0 / 3.0, 0.0)).unwrap(),
    ]
}

/// Middle-thirds construction on `[0, 1]`.
pub fn cantor_maps() -> Vec<Similarity> {
    cantor_maps_on(0.0, 1.0)
}

/// Four contractions of the given ratio fixed at the corners of the unit
/// square; ratio 1/4 gives similarity dimension 1.
pub fn four_corner_maps(ratio: f64) -> Vec<Similarity> {
    let corners = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
    corners
        .iter()
        .map(|&(cx, cy)| {
            Similarity::new(
                ratio,
                0.0,
                Point::complex((1.0 - ratio) * cx, (1.0 - ratio) * cy),
            )
            .unwrap()
        })
        .collect()
}

/// Two half-scale contractions whose attractor is the unit segment.
pub fn segment_maps() -> Vec<Similarity> {
    vec![
        Similarity::new(0.5, 0.0, Point::complex(0.0, 0.0)).unwrap(),
        Similarity::new(0.5, 0.0, Point::complex(0.5, 0.0)).unwrap(),
    ]
}

/// Polyline sampling of a circular arc with the normalized length measure;
/// a Lipschitz curve sampler with dimension 1.
pub fn arc_polyline_set(
    center: (f64, f64),
    radius: f64,
    angle0: f64,
    angle1: f64,
    n_points: usize,
) -> Result<DSet, GeometryError> {
    if n_points < 2 || radius <= 0.0 || angle1 <= angle0 {
        return Err(GeometryError::Degenerate("bad arc parameters".into()));
    }
    let mut points = Vec::with_capacity(n_points);
    let w = 1.0 / n_points as f64;
    for i in 0..n_points {
        let th = angle0 + (angle1 - angle0) * i as f64 / (n_points - 1) as f64;
        points.push(Point::complex(
            center.0 + radius * th.cos(),
            center.1 + radius * th.sin(),
        ));
    }
    let spacing = radius * (angle1 - angle0) / (n_points - 1) as f64;
    let mut set = DSet::new(1.0, 1, points, vec![w; n_points], Some(spacing))?;
    set.depth = (n_points as f64).log2().ceil().max(1.0) as u32;
    Ok(set)
}

/// The geometric sequence `{2^-k}` with matching weights: a deliberately
/// non-regular fixture for the necessity experiment.
pub fn sequence_set(n_terms: u32) -> Result<DSet, GeometryError> {
    if n_terms < 2 {
        return Err(GeometryError::Degenerate("need at least two terms".into()));
    }
    let mut points = Vec::with_capacity(n_terms as usize);
    let mut weights = Vec::with_capacity(n_terms as usize);
    for k in 1..=n_terms {
        let v = (2.0_f64).powi(-(k as i32));
        points.push(Point::complex(v, 0.0));
        weights.push(v);
    }
    let resolution = (2.0_f64).powi(-(n_terms as i32));
    DSet::new(1.0, n_terms, points, weights, Some(resolution))
}
