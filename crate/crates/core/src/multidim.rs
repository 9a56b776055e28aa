//! Plurisubharmonic analogues for `u = log|F|` with analytically known zero
//! sets: the lower envelope against the zero potential, the exceptional
//! cover and lower bound inside the half ball, a directional ellipticity
//! probe, and the supremum-gap experiment feeding the same fit machinery as
//! the planar case.
//!
//! Test maps carry their zeros, multiplicities, and boundary bound `M` in
//! closed form; nothing here locates zeros numerically.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{cartan_cover_with_audit, CartanError, CartanReport};
use crate::functions::{sup_on_ball, DiscreteMeasure, EvaluableFunction, FunctionError};
use crate::geometry::{DSet, Point};
use crate::grid::GridSpec;
use crate::poly::{coords_to_complex, PolyError, PolyMap, Term};
use crate::rng::sphere_point;
use crate::trace::{RemezExperiment, TraceError};

/// Residual allowed at a declared zero of the map.
pub const ZERO_RESIDUAL_TOL: f64 = 1e-10;

/// Grid-fidelity tolerance of the envelope and cover verdicts.
pub const ENVELOPE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MultidimError {
    #[error("map needs n >= 2 components in n variables; got {components} components in {vars} variables")]
    BadArity { components: usize, vars: usize },
    #[error("declared zero at {0:?} has |F| = {1:e}, above the tolerance")]
    NotAZero(Vec<f64>, f64),
    #[error("boundary bound M must be nonnegative and finite, got {0}")]
    BadBound(f64),
    #[error("probe point is not a declared zero")]
    UnknownZero,
    #[error("t grid reaches another zero at distance {isolation}; largest probe step {got}")]
    IsolationViolated { isolation: f64, got: f64 },
    #[error("probe needs a geometric t grid with at least 3 positive steps")]
    BadProbeGrid,
    #[error("geometric hypothesis violated: {0}")]
    Geometry(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

/// A holomorphic test map `F = (f_1, ..., f_n)` with analytically known
/// zeros inside the half ball and the boundary bound
/// `inf_{|z| = 1/2} log|F| >= -M`.
///
/// JSON schema: `{n, components: [[term, ...], ...], zeros:
/// [{point, mult}, ...], M}` with each term
/// `{exponents: [...], coeff: [re, im]}`.
#[derive(Clone, Debug)]
pub struct HolomorphicMapSample {
    pub n: usize,
    pub components: Vec<PolyMap>,
    /// (zero, multiplicity) pairs inside the half ball.
    pub known_zeros: Vec<(Point, u32)>,
    pub m_bound: f64,
}

#[derive(Serialize, Deserialize)]
struct ZeroEntry {
    point: Point,
    mult: u32,
}

#[derive(Serialize, Deserialize)]
struct MapSchema {
    n: usize,
    components: Vec<Vec<Term>>,
    zeros: Vec<ZeroEntry>,
    #[serde(rename = "M")]
    m: f64,
}

impl Serialize for HolomorphicMapSample {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        MapSchema {
            n: self.n,
            components: self.components.iter().map(|c| c.terms.clone()).collect(),
            zeros: self
                .known_zeros
                .iter()
                .map(|(point, mult)| ZeroEntry {
                    point: point.clone(),
                    mult: *mult,
                })
                .collect(),
            m: self.m_bound,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for HolomorphicMapSample {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let schema = MapSchema::deserialize(de)?;
        let components: Result<Vec<PolyMap>, _> = schema
            .components
            .into_iter()
            .map(|terms| PolyMap::new(schema.n, terms))
            .collect();
        let components = components.map_err(serde::de::Error::custom)?;
        HolomorphicMapSample::new(
            schema.n,
            components,
            schema
                .zeros
                .into_iter()
                .map(|e| (e.point, e.mult))
                .collect(),
            schema.m,
        )
        .map_err(serde::de::Error::custom)
    }
}

impl HolomorphicMapSample {
    pub fn new(
        n: usize,
        components: Vec<PolyMap>,
        known_zeros: Vec<(Point, u32)>,
        m_bound: f64,
    ) -> Result<Self, MultidimError> {
        if n < 2 || components.len() != n || components.iter().any(|c| c.n_vars != n) {
            return Err(MultidimError::BadArity {
                components: components.len(),
                vars: components.first().map_or(0, |c| c.n_vars),
            });
        }
        if !(m_bound >= 0.0 && m_bound.is_finite()) {
            return Err(MultidimError::BadBound(m_bound));
        }
        let sample = HolomorphicMapSample {
            n,
            components,
            known_zeros,
            m_bound,
        };
        for (zero, _) in &sample.known_zeros {
            let norm = sample.norm_at(zero);
            if norm >= ZERO_RESIDUAL_TOL {
                return Err(MultidimError::NotAZero(zero.coords.clone(), norm));
            }
        }
        Ok(sample)
    }

    /// Total zero count with multiplicity.
    pub fn k(&self) -> u32 {
        self.known_zeros.iter().map(|(_, m)| m).sum()
    }

    fn eval_components(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    /// `|F(z)|`.
    pub fn norm_at(&self, z: &Point) -> f64 {
        let zc = coords_to_complex(&z.coords);
        self.eval_components(&zc)
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// The function `log|F|` as an evaluable object.
    pub fn log_norm_function(&self) -> EvaluableFunction {
        EvaluableFunction::LogNormMap {
            components: self.components.clone(),
        }
    }

    /// Counting measure of the zeros with multiplicities as masses, scaled
    /// so the total equals `mass_total` (defaults to k).
    pub fn zero_measure(&self, mass_total: Option<f64>) -> DiscreteMeasure {
        let k = self.k() as f64;
        let scale = mass_total.map_or(1.0, |p| p / k);
        let atoms: Vec<Point> = self.known_zeros.iter().map(|(z, _)| z.clone()).collect();
        let masses: Vec<f64> = self
            .known_zeros
            .iter()
            .map(|(_, m)| *m as f64 * scale)
            .collect();
        DiscreteMeasure::new(atoms, masses).expect("zero measure is valid")
    }
}

/// `log|F(z)|`, `-inf` at common zeros.
pub fn log_norm(map: &HolomorphicMapSample, z: &Point) -> Result<f64, MultidimError> {
    if z.ambient_n() != map.n {
        return Err(MultidimError::Geometry(format!(
            "point lives in C^{}, map in C^{}",
            z.ambient_n(),
            map.n
        )));
    }
    let n = map.norm_at(z);
    Ok(if n == 0.0 { f64::NEG_INFINITY } else { n.ln() })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub grid_size: usize,
    pub checked: usize,
    /// Smallest value of `u(z) - (-M + sum mult log|z - zero|)` seen.
    pub min_slack: f64,
    pub violations: Vec<Point>,
}

impl EnvelopeReport {
    pub fn success(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the lower envelope `-M + sum_i mult_i log|z - zero_i| <= u(z)` at
/// every grid point inside the half ball.
pub fn envelope_check(
    map: &HolomorphicMapSample,
    grid: &GridSpec,
) -> Result<EnvelopeReport, MultidimError> {
    let pts = grid.points();
    let grid_size = pts.len();
    let mut checked = 0usize;
    let mut min_slack = f64::INFINITY;
    let mut violations = Vec::new();
    let dim = 2 * map.n;
    for z in pts {
        let z = z.padded(dim);
        if z.norm() > 0.5 {
            continue;
        }
        checked += 1;
        let u = log_norm(map, &z)?;
        let mut envelope = -map.m_bound;
        for (zero, mult) in &map.known_zeros {
            let d2 = z.dist2(zero);
            if d2 == 0.0 {
                envelope = f64::NEG_INFINITY;
                break;
            }
            envelope += *mult as f64 * 0.5 * d2.ln();
        }
        if envelope == f64::NEG_INFINITY {
            continue; // the envelope collapses at its own pole
        }
        let slack = if u == f64::NEG_INFINITY {
            // u = -inf strictly below a finite envelope would violate, but
            // u = -inf only at common zeros, where the envelope is -inf too
            f64::NEG_INFINITY
        } else {
            u - envelope
        };
        min_slack = min_slack.min(slack);
        if slack < -ENVELOPE_TOL {
            violations.push(z);
        }
    }
    Ok(EnvelopeReport {
        grid_size,
        checked,
        min_slack,
        violations,
    })
}

/// Exceptional cover for the zero counting measure, then verification of
/// `u >= -M + p log(H/e)` off the cover inside the half ball. `mass_override`
/// replaces the zero count `k` by any `p >= k`.
pub fn multidim_cartan(
    map: &HolomorphicMapSample,
    h: f64,
    d: f64,
    grid: &GridSpec,
    mass_override: Option<f64>,
) -> Result<CartanReport, MultidimError> {
    let k = map.k() as f64;
    if let Some(p) = mass_override {
        if p < k {
            return Err(MultidimError::Geometry(format!(
                "mass override {p} below the zero count {k}"
            )));
        }
    }
    let mass = mass_override.unwrap_or(k);
    let mu = map.zero_measure(mass_override);
    let cover = cartan_cover_with_audit(&mu, h, d, Some(grid))?;
    let bound = -map.m_bound + mass * (h / std::f64::consts::E).ln();
    let f = map.log_norm_function();
    // restrict verification to the half ball
    let pts: Vec<Point> = grid
        .points()
        .into_iter()
        .map(|p| p.padded(2 * map.n))
        .filter(|p| p.norm() <= 0.5)
        .collect();
    let mut min_off = f64::INFINITY;
    let mut violations = Vec::new();
    let mut any_off = false;
    for z in &pts {
        if cover.covers(z) {
            continue;
        }
        any_off = true;
        let v = f.eval_raw(&z.coords);
        min_off = min_off.min(v);
        if v < bound - ENVELOPE_TOL {
            violations.push(z.clone());
        }
    }
    Ok(CartanReport {
        cover,
        h: Some(h),
        total_mass: Some(mass),
        bound,
        min_off_cover: min_off,
        grid_size: pts.len(),
        violations,
        empty_off_cover: !any_off,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EllipticityVerdict {
    Elliptic,
    NonElliptic,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectionFit {
    pub direction: Vec<f64>,
    /// Fitted leading exponent of `|F|^2` along the ray.
    pub exponent: f64,
    /// Fitted leading coefficient.
    pub coefficient: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EllipticityProbeResult {
    pub zero: Point,
    pub per_direction: Vec<DirectionFit>,
    pub verdict: EllipticityVerdict,
}

/// Exponent spread below which directions count as uniform.
pub const ELLIPTIC_EXPONENT_TOL: f64 = 0.05;

/// Spread above which the verdict is decisively non-elliptic.
pub const NON_ELLIPTIC_EXPONENT_GAP: f64 = 0.25;

/// Coefficient floor for a uniform leading term.
pub const ELLIPTIC_COEFF_FLOOR: f64 = 1e-8;

/// Fit `log |F(zero + t w)|^2 ~ e log t + log c` along low-discrepancy
/// directions `w` and classify the zero by exponent uniformity.
pub fn ellipticity_probe(
    map: &HolomorphicMapSample,
    zero: &Point,
    n_directions: usize,
    t_grid: &[f64],
) -> Result<EllipticityProbeResult, MultidimError> {
    let known = map
        .known_zeros
        .iter()
        .find(|(z, _)| z.dist(zero) < 1e-12)
        .is_some();
    if !known {
        return Err(MultidimError::UnknownZero);
    }
    if t_grid.len() < 3 || t_grid.iter().any(|t| !(*t > 0.0)) {
        return Err(MultidimError::BadProbeGrid);
    }
    let t_max = t_grid.iter().cloned().fold(0.0_f64, f64::max);
    let mut isolation = f64::INFINITY;
    for (z, _) in &map.known_zeros {
        let dz = z.dist(zero);
        if dz > 1e-12 {
            isolation = isolation.min(dz);
        }
    }
    if t_max >= isolation {
        return Err(MultidimError::IsolationViolated {
            isolation,
            got: t_max,
        });
    }
    let dim = 2 * map.n;
    // coordinate axes first: direction-dependent leading terms hide from
    // generic rays, so the axes are always probed
    let mut directions: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            e
        })
        .collect();
    for i in directions.len()..n_directions.max(dim) {
        directions.push(sphere_point(dim, (i - dim) as u64 + 1));
    }
    let mut fits = Vec::with_capacity(directions.len());
    for dir in directions {
        let mut xs = Vec::with_capacity(t_grid.len());
        let mut ys = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            let p = Point::new(
                zero.coords
                    .iter()
                    .zip(&dir)
                    .map(|(c, d)| c + t * d)
                    .collect(),
            );
            let h = map.norm_at(&p).powi(2);
            if h > 0.0 {
                xs.push(t.ln());
                ys.push(h.ln());
            }
        }
        if xs.len() < 2 {
            fits.push(DirectionFit {
                direction: dir,
                exponent: f64::NAN,
                coefficient: 0.0,
            });
            continue;
        }
        let n = xs.len() as f64;
        let sx: f64 = xs.iter().sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = xs.iter().map(|v| v * v).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(a, b)| a * b).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        fits.push(DirectionFit {
            direction: dir,
            exponent: slope,
            coefficient: intercept.exp(),
        });
    }
    let exps: Vec<f64> = fits.iter().map(|f| f.exponent).collect();
    let emin = exps.iter().cloned().fold(f64::INFINITY, f64::min);
    let emax = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cmin = fits
        .iter()
        .map(|f| f.coefficient)
        .fold(f64::INFINITY, f64::min);
    let verdict = if exps.iter().any(|e| e.is_nan()) {
        EllipticityVerdict::Inconclusive
    } else if emax - emin <= ELLIPTIC_EXPONENT_TOL && cmin >= ELLIPTIC_COEFF_FLOOR {
        EllipticityVerdict::Elliptic
    } else if emax - emin > NON_ELLIPTIC_EXPONENT_GAP || cmin < ELLIPTIC_COEFF_FLOOR {
        EllipticityVerdict::NonElliptic
    } else {
        EllipticityVerdict::Inconclusive
    };
    Ok(EllipticityProbeResult {
        zero: zero.clone(),
        per_direction: fits,
        verdict,
    })
}

/// The supremum-gap experiment for `log|F|` on a ball `B(x,t)` against a
/// subset `omega` of a sampled set: the log term is
/// `log(16 e r t a^{1/d} / (d epsilon)^{1/d})` and the zero count plays the
/// role of the normalization gap, so the planar fit machinery applies
/// unchanged.
pub fn mcol1_gap(
    map: &HolomorphicMapSample,
    set: &DSet,
    x: &Point,
    t: f64,
    r: f64,
    omega: &DSet,
) -> Result<RemezExperiment, MultidimError> {
    if !(t > 0.0 && r > 0.5) {
        return Err(MultidimError::Geometry(format!(
            "need t > 0 and domain radius r > 1/2, got t={t}, r={r}"
        )));
    }
    if x.norm() + 4.0 * r * r * t > 0.5 * (1.0 + 1e-12) {
        return Err(MultidimError::Geometry(format!(
            "B(x, 4 r^2 t) escapes the half ball: |x| + 4 r^2 t = {}",
            x.norm() + 4.0 * r * r * t
        )));
    }
    let epsilon = omega.total_mass();
    if !(epsilon > 0.0) {
        return Err(MultidimError::Trace(TraceError::EmptyOmega));
    }
    let a = set.reg_a.ok_or(TraceError::Uncertified)?;
    let d = set.dimension_d;
    let f = map.log_norm_function();
    let sup_ball = sup_on_ball(&f, x, t, crate::functions::DEFAULT_SUP_RESOLUTION)?.value;
    let mut sup_omega = f64::NEG_INFINITY;
    for p in &omega.points {
        sup_omega = sup_omega.max(f.eval_raw(&p.coords));
    }
    if sup_omega == f64::NEG_INFINITY {
        return Err(MultidimError::Trace(TraceError::AllNegInf));
    }
    let lhs = sup_ball - sup_omega;
    let log_term =
        (16.0 * std::f64::consts::E * r * t * a.powf(1.0 / d) / (d * epsilon).powf(1.0 / d)).ln();
    let k = map.k() as f64;
    Ok(RemezExperiment {
        x: x.clone(),
        t,
        r,
        omega_radius: None,
        epsilon,
        lhs,
        log_term,
        m1: k,
        m2: 0.0,
    })
}

// ---------------------------------------------------------------------------
// Built-in map gallery with closed-form zeros and boundary bounds
// ---------------------------------------------------------------------------

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `(z1, z2)`: one simple zero at the origin, `M = log 2`.
pub fn map_linear_pair() -> HolomorphicMapSample {
    let f1 = PolyMap::monomial(2, 0, 1, c64(1.0));
    let f2 = PolyMap::monomial(2, 1, 1, c64(1.0));
    HolomorphicMapSample::new(
        2,
        vec![f1, f2],
        vec![(Point::new(vec![0.0; 4]), 1)],
        (2.0_f64).ln(),
    )
    .expect("valid gallery map")
}

/// `((z1^2 - c)/2, z2/2)` for small `c > 0`: two simple zeros at
/// `(+-sqrt c, 0)`; the boundary minimum sits on the plane `z2 = 0` where
/// `|z1^2 - c| = 1/4 - c`, so `M = log 2 - log(1/4 - c)`.
pub fn map_split_quadratic(c: f64) -> HolomorphicMapSample {
    assert!(
        c > 0.0 && c < 0.2,
        "split point must stay inside the half ball"
    );
    let f1 = PolyMap::new(
        2,
        vec![
            Term::new(vec![2, 0], 0.5, 0.0),
            Term::new(vec![0, 0], -0.5 * c, 0.0),
        ],
    )
    .unwrap();
    let f2 = PolyMap::monomial(2, 1, 1, c64(0.5));
    let s = c.sqrt();
    let zeros = vec![
        (Point::new(vec![s, 0.0, 0.0, 0.0]), 1),
        (Point::new(vec![-s, 0.0, 0.0, 0.0]), 1),
    ];
    let m = (2.0_f64).ln() - (0.25 - c).ln();
    HolomorphicMapSample::new(2, vec![f1, f2], zeros, m).expect("valid gallery map")
}

/// `((z1 + z2)/2, (z1 - z2)/2)`: a linear isomorphism with
/// `|F| = |z|/sqrt 2`, one simple zero at the origin, `M = log(2 sqrt 2)`.
pub fn map_rotated_pair() -> HolomorphicMapSample {
    let f1 = PolyMap::new(
        2,
        vec![
            Term::new(vec![1, 0], 0.5, 0.0),
            Term::new(vec![0, 1], 0.5, 0.0),
        ],
    )
    .unwrap();
    let f2 = PolyMap::new(
        2,
        vec![
            Term::new(vec![1, 0], 0.5, 0.0),
            Term::new(vec![0, 1], -0.5, 0.0),
        ],
    )
    .unwrap();
    HolomorphicMapSample::new(
        2,
        vec![f1, f2],
        vec![(Point::new(vec![0.0; 4]), 1)],
        (2.0 * (2.0_f64).sqrt()).ln(),
    )
    .expect("valid gallery map")
}

/// `((z1^2 - c1)/2, (z2^2 - c2)/2)`: four simple zeros
/// `(+-sqrt c1, +-sqrt c2)`. The boundary minimum of
/// `(u - c1)^2 + (1/4 - u - c2)^2` over `u = |z1|^2` is a clamped quadratic.
pub fn map_double_quadratic(c1: f64, c2: f64) -> HolomorphicMapSample {
    assert!(c1 > 0.0 && c2 > 0.0 && c1 + c2 < 0.2);
    let f1 = PolyMap::new(
        2,
        vec![
            Term::new(vec![2, 0], 0.5, 0.0),
            Term::new(vec![0, 0], -0.5 * c1, 0.0),
        ],
    )
    .unwrap();
    let f2 = PolyMap::new(
        2,
        vec![
            Term::new(vec![0, 2], 0.5, 0.0),
            Term::new(vec![0, 0], -0.5 * c2, 0.0),
        ],
    )
    .unwrap();
    let (s1, s2) = (c1.sqrt(), c2.sqrt());
    let zeros = vec![
        (Point::new(vec![s1, 0.0, s2, 0.0]), 1),
        (Point::new(vec![s1, 0.0, -s2, 0.0]), 1),
        (Point::new(vec![-s1, 0.0, s2, 0.0]), 1),
        (Point::new(vec![-s1, 0.0, -s2, 0.0]), 1),
    ];
    // minimize (u - c1)^2 + (1/4 - u - c2)^2 over u in [0, 1/4]
    let u_star = ((c1 - c2 + 0.25) * 0.5).clamp(0.0, 0.25);
    let g = (u_star - c1).powi(2) + (0.25 - u_star - c2).powi(2);
    let m = (2.0_f64).ln() - 0.5 * g.ln();
    HolomorphicMapSample::new(2, vec![f1, f2], zeros, m).expect("valid gallery map")
}

/// `(z1/2, z2^2/2)`: one zero of multiplicity 2 at the origin whose leading
/// term is direction-dependent; `M = log 8`.
pub fn map_mixed_degree() -> HolomorphicMapSample {
    let f1 = PolyMap::monomial(2, 0, 1, c64(0.5));
    let f2 = PolyMap::monomial(2, 1, 2, c64(0.5));
    HolomorphicMapSample::new(
        2,
        vec![f1, f2],
        vec![(Point::new(vec![0.0; 4]), 2)],
        (8.0_f64).ln(),
    )
    .expect("valid gallery map")
}

/// The built-in gallery, in a stable order.
pub fn gallery() -> Vec<(&'static str, HolomorphicMapSample)> {
    vec![
        ("linear-pair", map_linear_pair()),
        ("split-quadratic", map_split_quadratic(0.01)),
        ("rotated-pair", map_rotated_pair()),
        ("double-quadratic", map_double_quadratic(0.01, 0.02)),
        ("mixed-degree", map_mixed_degree()),
    ]
}
