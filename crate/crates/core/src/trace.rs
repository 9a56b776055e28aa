//! Trace-inequality experiments on sampled regular sets: supremum gaps with
//! constant fitting, BMO norms, reverse Hölder ratios, distribution-function
//! decay, Bernstein-Walsh growth checks, and the necessity experiment for
//! non-regular sets.
//!
//! The multiplicative constant in the gap inequality is not computable in
//! closed form, so the laboratory uses a fit-and-validate protocol: fit a
//! least-squares constant on a calibration batch, certify the inequality
//! with the envelope constant of that batch on disjoint validation batches.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functions::{
    normalize_m1m2, sup_on_ball, EvaluableFunction, FunctionError, DEFAULT_SUP_RESOLUTION,
};
use crate::geometry::{ball_restrict, DSet, GeometryError, Point};

/// Value used in place of `-inf` samples inside absolute-deviation
/// integrals; every report that clamps says so.
pub const NEG_INF_CLAMP: f64 = -1.0e6;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("omega has zero mass")]
    EmptyOmega,
    #[error("geometric hypothesis violated: {0}")]
    Geometry(String),
    #[error("ball at {0:?} radius {1} misses the set")]
    EmptyBall(Vec<f64>, f64),
    #[error("every sample in the ball evaluates to -inf")]
    AllNegInf,
    #[error("function evaluated to NaN; scaled -inf values are not integrable")]
    NanValue,
    #[error("set must carry certified regularity constants")]
    Uncertified,
    #[error("need at least {need} experiments, got {got}")]
    TooFewExperiments { need: usize, got: usize },
    #[error("epsilon range spans a factor {got:.3}, need at least {need}")]
    EpsilonRangeTooNarrow { need: f64, got: f64 },
    #[error("degenerate fit design: no positive-gap experiment varies the log term")]
    DegenerateFit,
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Geometry2(#[from] GeometryError),
}

/// One supremum-gap experiment: the gap `sup_{D(x,t)} f - sup_omega f`
/// against the predicted logarithmic term.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RemezExperiment {
    pub x: Point,
    pub t: f64,
    pub r: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub omega_radius: Option<f64>,
    /// Mass of omega under the set's natural measure.
    pub epsilon: f64,
    /// `sup_{D(x,t)} f - sup_omega f`.
    pub lhs: f64,
    /// `log(4 e t a^{1/d} / (r (d epsilon)^{1/d}))`.
    pub log_term: f64,
    pub m1: f64,
    pub m2: f64,
}

impl RemezExperiment {
    /// Gap per unit of predicted term; the quantity the fit explains.
    pub fn ratio(&self) -> f64 {
        self.lhs / ((self.m1 - self.m2) * self.log_term)
    }
}

/// Fitted gap constant: least-squares value, the envelope constant that
/// makes the inequality hold on the whole batch, and residuals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitResult {
    pub c_hat: f64,
    pub c_envelope: f64,
    pub residuals: Vec<f64>,
    pub n_used: usize,
}

/// Mean and mean oscillation of `f` on one ball of the set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BmoBallRecord {
    pub center: Point,
    pub radius: f64,
    pub mean: f64,
    pub oscillation: f64,
    pub mass: f64,
    pub clamped: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BmoReport {
    pub balls: Vec<BmoBallRecord>,
    pub bmo_norm: f64,
    /// True when any ball contained a `-inf` sample replaced by the clamp.
    pub clamped: bool,
}

/// Exponent for reverse Hölder ratios; `"inf"` selects the sample
/// supremum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PExponent {
    Finite(f64),
    Infinity(String),
}

impl PExponent {
    pub fn finite(p: f64) -> Self {
        PExponent::Finite(p)
    }

    pub fn infinity() -> Self {
        PExponent::Infinity("inf".to_string())
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            PExponent::Finite(p) => *p,
            PExponent::Infinity(_) => f64::INFINITY,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Some(PExponent::infinity());
        }
        s.parse::<f64>().ok().map(PExponent::Finite)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReverseHolderRecord {
    pub p: PExponent,
    /// `((1/mu) int e^{p f} dmu)^{1/p}`, or the sample sup of `e^f` at
    /// `p = inf`.
    pub lhs: f64,
    /// `(1/mu) int e^{f} dmu`.
    pub rhs_base: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReverseHolderReport {
    pub x: Point,
    pub t: f64,
    pub mass: f64,
    pub records: Vec<ReverseHolderRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistributionReport {
    pub lambda_grid: Vec<f64>,
    /// Empirical `D(lambda) = mu{ y : f'(y) >= lambda }`.
    pub d_values: Vec<f64>,
    /// `(4 e t)^d a / (r^d d) * exp(-lambda d / (c (M1 - M2)))`.
    pub bound_curve: Vec<f64>,
    /// Least-squares slope of `log D` against `lambda` on the decaying
    /// range; absent when fewer than two points decay.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fitted_slope: Option<f64>,
    pub mass: f64,
    pub sup_value: f64,
}

/// Parameters the distribution bound needs besides the function itself.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DistParams {
    pub r: f64,
    pub a: f64,
    pub d: f64,
    pub m1: f64,
    pub m2: f64,
    pub c_hat: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SharpnessScale {
    pub t: f64,
    /// `sup_x mu(K cap D(x,t)) / t^d`.
    pub sup_ratio: f64,
    /// `sup_x [ sup_{D(x,t)} f_x - sup_omega f_x - C log(t / eps^{1/d}) ]`
    /// for `f_x = log|z - x|`.
    pub sup_gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub d: f64,
    pub c_log: f64,
    pub scales: Vec<SharpnessScale>,
}

fn require_certified_a(set: &DSet) -> Result<f64, TraceError> {
    set.reg_a.ok_or(TraceError::Uncertified)
}

/// The supremum-gap experiment on one `(x, t, omega)` triple.
///
/// `omega` must be contained in `D(x, t)` carrying positive mass, and the
/// inflated disk `D(x, t/r)` must sit inside `D_r`.
pub fn remez_gap(
    f: &EvaluableFunction,
    set: &DSet,
    x: &Point,
    t: f64,
    r: f64,
    omega: &DSet,
    omega_radius: Option<f64>,
) -> Result<RemezExperiment, TraceError> {
    if !(t > 0.0 && r > 0.0 && r < 1.0) {
        return Err(TraceError::Geometry(format!("bad t={t} or r={r}")));
    }
    if x.norm() + t / r > r * (1.0 + 1e-12) {
        return Err(TraceError::Geometry(format!(
            "D(x,t/r) escapes D_r: |x| + t/r = {}",
            x.norm() + t / r
        )));
    }
    let epsilon = omega.total_mass();
    if !(epsilon > 0.0) {
        return Err(TraceError::EmptyOmega);
    }
    let a = require_certified_a(set)?;
    let d = set.dimension_d;

    let sup_ball = sup_on_ball(f, x, t, DEFAULT_SUP_RESOLUTION)?.value;
    let mut sup_omega = f64::NEG_INFINITY;
    for p in &omega.points {
        sup_omega = sup_omega.max(f.eval_raw(&p.coords));
    }
    if sup_omega == f64::NEG_INFINITY {
        return Err(TraceError::AllNegInf);
    }
    let lhs = sup_ball - sup_omega;
    let log_term =
        (4.0 * std::f64::consts::E * t * a.powf(1.0 / d) / (r * (d * epsilon).powf(1.0 / d))).ln();
    let (m1, m2) = normalize_m1m2(f, r)?;
    Ok(RemezExperiment {
        x: x.clone(),
        t,
        r,
        omega_radius,
        epsilon,
        lhs,
        log_term,
        m1,
        m2,
    })
}

/// Least-squares fit of `lhs ~ c (M1 - M2) log_term` over the experiments
/// with a positive gap, plus the envelope constant of the batch.
pub fn fit_constant_c(experiments: &[RemezExperiment]) -> Result<FitResult, TraceError> {
    if experiments.len() < 10 {
        return Err(TraceError::TooFewExperiments {
            need: 10,
            got: experiments.len(),
        });
    }
    let eps_min = experiments
        .iter()
        .map(|e| e.epsilon)
        .fold(f64::INFINITY, f64::min);
    let eps_max = experiments
        .iter()
        .map(|e| e.epsilon)
        .fold(f64::NEG_INFINITY, f64::max);
    let span = eps_max / eps_min;
    if !(span >= 8.0 * (1.0 - 1e-12)) {
        return Err(TraceError::EpsilonRangeTooNarrow {
            need: 8.0,
            got: span,
        });
    }
    let positive: Vec<&RemezExperiment> = experiments.iter().filter(|e| e.lhs > 0.0).collect();
    if positive.is_empty() {
        // a constant function has zero gap everywhere
        return Ok(FitResult {
            c_hat: 0.0,
            c_envelope: 0.0,
            residuals: vec![0.0; experiments.len()],
            n_used: 0,
        });
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let mut env = 0.0_f64;
    for e in &positive {
        let w = (e.m1 - e.m2) * e.log_term;
        num += w * e.lhs;
        den += w * w;
        if w > 0.0 {
            env = env.max(e.lhs / w);
        }
    }
    if den == 0.0 {
        return Err(TraceError::DegenerateFit);
    }
    let c_hat = num / den;
    let residuals: Vec<f64> = experiments
        .iter()
        .map(|e| e.lhs - c_hat * (e.m1 - e.m2) * e.log_term)
        .collect();
    Ok(FitResult {
        c_hat,
        c_envelope: env,
        residuals,
        n_used: positive.len(),
    })
}

/// Weighted mean and mean oscillation of `f` over every (center, radius)
/// pair. Balls that miss the set are an error; `-inf` samples enter
/// absolute-deviation integrals through the clamp and flag the record.
pub fn bmo_norm(
    f: &EvaluableFunction,
    set: &DSet,
    ball_centers: &[Point],
    radii: &[f64],
) -> Result<BmoReport, TraceError> {
    let mut balls = Vec::with_capacity(ball_centers.len() * radii.len());
    let mut bmo = 0.0_f64;
    let mut any_clamped = false;
    // evaluate once per sample point, not once per ball
    let values: Vec<f64> = set.points.iter().map(|p| f.eval_raw(&p.coords)).collect();
    if values.iter().any(|v| v.is_nan()) {
        return Err(TraceError::NanValue);
    }
    // clamp once; a -inf sample clamps every ball containing it
    let clamped_values: Vec<(f64, bool)> = values
        .iter()
        .map(|v| {
            if *v == f64::NEG_INFINITY {
                (NEG_INF_CLAMP, true)
            } else {
                (*v, false)
            }
        })
        .collect();
    let mut d2 = vec![0.0_f64; set.points.len()];
    let mut order: Vec<u32> = Vec::with_capacity(set.points.len());
    for center in ball_centers {
        // one distance pass and one sort per center serve every radius
        for (slot, p) in d2.iter_mut().zip(&set.points) {
            *slot = center.dist2(p);
        }
        order.clear();
        order.extend(0..set.points.len() as u32);
        order.sort_unstable_by(|&a, &b| d2[a as usize].partial_cmp(&d2[b as usize]).unwrap());
        for &radius in radii {
            let r2 = radius * radius;
            let cut = order.partition_point(|&i| d2[i as usize] <= r2);
            if cut == 0 {
                return Err(TraceError::EmptyBall(center.coords.clone(), radius));
            }
            let members = &order[..cut];
            let mut mass = 0.0;
            let mut clamped = false;
            let mut all_neg_inf = true;
            // center at the first value so constant data oscillates by
            // exactly zero regardless of weight rounding
            let (base, base_clamped) = clamped_values[members[0] as usize];
            all_neg_inf &= base_clamped;
            let mut dev_sum = 0.0;
            for &i in members {
                let (v, c) = clamped_values[i as usize];
                let w = set.weights[i as usize];
                clamped |= c;
                all_neg_inf &= c;
                dev_sum += (v - base) * w;
                mass += w;
            }
            if mass <= 0.0 {
                return Err(TraceError::EmptyBall(center.coords.clone(), radius));
            }
            if all_neg_inf {
                return Err(TraceError::AllNegInf);
            }
            let mean_dev = dev_sum / mass;
            let mean = base + mean_dev;
            let mut osc = 0.0;
            for &i in members {
                let (v, _) = clamped_values[i as usize];
                let w = set.weights[i as usize];
                osc += ((v - base) - mean_dev).abs() * w;
            }
            osc /= mass;
            bmo = bmo.max(osc);
            any_clamped |= clamped;
            balls.push(BmoBallRecord {
                center: center.clone(),
                radius,
                mean,
                oscillation: osc,
                mass,
                clamped,
            });
        }
    }
    Ok(BmoReport {
        balls,
        bmo_norm: bmo,
        clamped: any_clamped,
    })
}

/// The dyadic ball family used for BMO suprema: every sample point as a
/// center, radii halving from the diameter down to the sampling resolution.
pub fn dyadic_ball_family(set: &DSet) -> (Vec<Point>, Vec<f64>) {
    let mut radii = Vec::new();
    let floor = set.sampling_resolution().max(set.diameter * 1e-12);
    let mut r = set.diameter;
    while r >= floor && radii.len() < 60 {
        radii.push(r);
        r *= 0.5;
    }
    if radii.is_empty() {
        radii.push(set.diameter.max(1e-12));
    }
    (set.points.clone(), radii)
}

fn log_sum_exp(terms: &[(f64, f64)]) -> f64 {
    // terms are (exponent, positive weight); result log(sum w e^{x})
    let m = terms
        .iter()
        .filter(|(x, _)| *x != f64::NEG_INFINITY)
        .map(|(x, _)| *x)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = terms
        .iter()
        .map(|(x, w)| {
            if *x == f64::NEG_INFINITY {
                0.0
            } else {
                w * (x - m).exp()
            }
        })
        .sum();
    m + s.ln()
}

/// Reverse Hölder ratios of `e^f` on `K cap D(x,t)` for each requested
/// exponent. Computed in log space so large exponents do not overflow;
/// `e^f` is exactly zero at `-inf` samples.
pub fn reverse_holder(
    f: &EvaluableFunction,
    set: &DSet,
    x: &Point,
    t: f64,
    p_list: &[PExponent],
) -> Result<ReverseHolderReport, TraceError> {
    let (ball, mass) = ball_restrict(set, x, t);
    if ball.is_empty() || mass <= 0.0 {
        return Err(TraceError::EmptyBall(x.coords.clone(), t));
    }
    let values: Vec<(f64, f64)> = ball
        .points
        .iter()
        .zip(&ball.weights)
        .map(|(p, w)| (f.eval_raw(&p.coords), *w))
        .collect();
    if values.iter().any(|(v, _)| v.is_nan()) {
        return Err(TraceError::NanValue);
    }
    if values.iter().all(|(v, _)| *v == f64::NEG_INFINITY) {
        return Err(TraceError::AllNegInf);
    }
    let log_mass = mass.ln();
    let log_rhs = log_sum_exp(&values) - log_mass;
    let rhs_base = log_rhs.exp();
    let mut records = Vec::with_capacity(p_list.len());
    for p in p_list {
        let (lhs, ratio) = match p {
            PExponent::Finite(pv) => {
                let scaled: Vec<(f64, f64)> = values
                    .iter()
                    .map(|(v, w)| {
                        if *v == f64::NEG_INFINITY {
                            (f64::NEG_INFINITY, *w)
                        } else {
                            (pv * v, *w)
                        }
                    })
                    .collect();
                let log_lhs = (log_sum_exp(&scaled) - log_mass) / pv;
                (log_lhs.exp(), (log_lhs - log_rhs).exp())
            }
            PExponent::Infinity(_) => {
                let vmax = values
                    .iter()
                    .map(|(v, _)| *v)
                    .fold(f64::NEG_INFINITY, f64::max);
                (vmax.exp(), (vmax - log_rhs).exp())
            }
        };
        records.push(ReverseHolderRecord {
            p: p.clone(),
            lhs,
            rhs_base,
            ratio,
        });
    }
    Ok(ReverseHolderReport {
        x: x.clone(),
        t,
        mass,
        records,
    })
}

/// Empirical distribution function of `f' = sup_{D(x,t)} f - f` on
/// `K cap D(x,t)`, the exponential bound curve with the supplied constant,
/// and the fitted decay slope.
pub fn distribution_check(
    f: &EvaluableFunction,
    set: &DSet,
    x: &Point,
    t: f64,
    lambda_grid: &[f64],
    params: DistParams,
) -> Result<DistributionReport, TraceError> {
    if lambda_grid.is_empty() || lambda_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(TraceError::Geometry(
            "lambda grid must be nonempty and strictly increasing".into(),
        ));
    }
    let (ball, mass) = ball_restrict(set, x, t);
    if ball.is_empty() || mass <= 0.0 {
        return Err(TraceError::EmptyBall(x.coords.clone(), t));
    }
    let sup = sup_on_ball(f, x, t, DEFAULT_SUP_RESOLUTION)?.value;
    // f' = sup - f; a -inf value of f puts its mass on the large side of
    // every threshold
    let fprime: Vec<(f64, f64)> = ball
        .points
        .iter()
        .zip(&ball.weights)
        .map(|(p, w)| {
            let v = f.eval_raw(&p.coords);
            let fp = if v == f64::NEG_INFINITY {
                f64::INFINITY
            } else {
                sup - v
            };
            (fp, *w)
        })
        .collect();
    let d_values: Vec<f64> = lambda_grid
        .iter()
        .map(|&l| {
            fprime
                .iter()
                .filter(|(fp, _)| *fp >= l)
                .map(|(_, w)| w)
                .sum()
        })
        .collect();
    let DistParams {
        r,
        a,
        d,
        m1,
        m2,
        c_hat,
    } = params;
    let front = (4.0 * std::f64::consts::E * t).powf(d) * a / (r.powf(d) * d);
    let rate = d / (c_hat * (m1 - m2));
    let bound_curve: Vec<f64> = lambda_grid
        .iter()
        .map(|&l| front * (-l * rate).exp())
        .collect();

    // decay-range fit: thresholds where the distribution has strictly
    // dropped but not yet emptied
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&l, &dv) in lambda_grid.iter().zip(&d_values) {
        if dv > 0.0 && dv < mass * (1.0 - 1e-12) {
            xs.push(l);
            ys.push(dv.ln());
        }
    }
    let fitted_slope = if xs.len() >= 2 {
        let n = xs.len() as f64;
        let sx: f64 = xs.iter().sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = xs.iter().map(|v| v * v).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(a, b)| a * b).sum();
        let denom = n * sxx - sx * sx;
        if denom.abs() > 1e-30 {
            Some((n * sxy - sx * sy) / denom)
        } else {
            None
        }
    } else {
        None
    };
    Ok(DistributionReport {
        lambda_grid: lambda_grid.to_vec(),
        d_values,
        bound_curve,
        fitted_slope,
        mass,
        sup_value: sup,
    })
}

/// Growth check for degree-normalized log-moduli: is
/// `sup_{D(x,qt)} f <= log q + sup_{D(x,t)} f` within 1e-9?
pub fn bernstein_walsh_check(
    roots: &[Point],
    degree_normalize: bool,
    x: &Point,
    t: f64,
    q: f64,
) -> Result<bool, TraceError> {
    if roots.is_empty() {
        return Err(TraceError::Geometry("empty root list".into()));
    }
    if !(q >= 1.0 && t >= 0.0) {
        return Err(TraceError::Geometry(format!(
            "need q >= 1, t >= 0; got q={q}, t={t}"
        )));
    }
    let mass = if degree_normalize {
        1.0 / roots.len() as f64
    } else {
        1.0
    };
    let mu = crate::functions::DiscreteMeasure::new(roots.to_vec(), vec![mass; roots.len()])
        .map_err(TraceError::Function)?;
    let f = EvaluableFunction::potential(mu);
    if t == 0.0 || q == 1.0 {
        return Ok(true);
    }
    let lhs = sup_on_ball(&f, x, q * t, DEFAULT_SUP_RESOLUTION)?.value;
    let rhs = q.ln() + sup_on_ball(&f, x, t, DEFAULT_SUP_RESOLUTION)?.value;
    Ok(lhs <= rhs + 1e-9)
}

/// Scan `epsilon_t / t^d` and the residual gap across scales and centers
/// using the probe family `f_x = log|z - x|`; a regular set keeps the
/// ratios bounded while a non-regular one lets them diverge as the scale
/// shrinks.
pub fn sharpness_experiment(
    set: &DSet,
    d: f64,
    scales: &[f64],
    c_log: f64,
) -> Result<SharpnessReport, TraceError> {
    if scales.is_empty() {
        return Err(TraceError::Geometry("empty scale list".into()));
    }
    if set.diameter <= 0.0 || set.len() < 2 {
        return Err(TraceError::Geometry2(GeometryError::Degenerate(
            "set has zero diameter".into(),
        )));
    }
    let mut out = Vec::with_capacity(scales.len());
    for &t in scales {
        if !(t > 0.0) {
            return Err(TraceError::Geometry(format!("scale {t} not positive")));
        }
        let td = t.powf(d);
        let mut sup_ratio = f64::NEG_INFINITY;
        let mut sup_gap = f64::NEG_INFINITY;
        for x in &set.points {
            let (omega, eps) = ball_restrict(set, x, t);
            if eps <= 0.0 {
                continue;
            }
            sup_ratio = sup_ratio.max(eps / td);
            // f_x = log|z - x|: sup over D(x,t) is log t exactly; over the
            // sample omega it is the log of the farthest sample distance
            let mut far = 0.0_f64;
            for p in &omega.points {
                far = far.max(x.dist(p));
            }
            if far > 0.0 {
                let gap = t.ln() - far.ln() - c_log * (t / eps.powf(1.0 / d)).ln();
                sup_gap = sup_gap.max(gap);
            }
        }
        out.push(SharpnessScale {
            t,
            sup_ratio,
            sup_gap,
        });
    }
    Ok(SharpnessReport {
        d,
        c_log,
        scales: out,
    })
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn random_two_point_set(x1: f64) -> DSet {
        DSet::new(
            1.0,
            1,
            vec![Point::complex(0.0, 0.0), Point::complex(x1, 0.0)],
            vec![0.5, 0.5],
            Some(x1.abs().max(1e-3)),
        )
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Power means never decrease in the exponent on any two-point ball.
        #[test]
        fn reverse_holder_monotone_two_atoms(
            x1 in 0.2..2.0f64,
            root in -3.0..3.0f64,
            p1 in 1.0..8.0f64,
            p2 in 8.0..40.0f64,
        ) {
            prop_assume!((root).abs() > 1e-3 && (root - x1).abs() > 1e-3);
            let set = random_two_point_set(x1);
            let f = EvaluableFunction::log_abs_polynomial(
                vec![Point::complex(root, 0.0)], 0.0);
            let report = reverse_holder(
                &f,
                &set,
                &Point::complex(x1 / 2.0, 0.0),
                x1,
                &[PExponent::finite(1.0), PExponent::finite(p1), PExponent::finite(p2), PExponent::infinity()],
            ).unwrap();
            prop_assert_eq!(report.records[0].ratio, 1.0);
            let mut prev = 0.0;
            for rec in &report.records {
                prop_assert!(rec.lhs >= prev * (1.0 - 1e-12));
                prev = rec.lhs;
            }
        }

        // Mean oscillation never reacts to a shift beyond float rounding
        // and scales absolutely with the factor.
        #[test]
        fn bmo_shift_scale_near_exact(
            x1 in 0.2..2.0f64,
            root in -3.0..-0.1f64,
            shift in -5.0..5.0f64,
            factor in 0.1..4.0f64,
        ) {
            let set = random_two_point_set(x1);
            let f = EvaluableFunction::log_abs_polynomial(
                vec![Point::complex(root, 0.0)], 0.0);
            let centers = vec![Point::complex(x1 / 2.0, 0.0)];
            let radii = [x1];
            let base = bmo_norm(&f, &set, &centers, &radii).unwrap().bmo_norm;
            let shifted = EvaluableFunction::Shifted { base: Box::new(f.clone()), offset: shift };
            let sh = bmo_norm(&shifted, &set, &centers, &radii).unwrap().bmo_norm;
            prop_assert!((sh - base).abs() <= 1e-12 * (1.0 + base.abs()));
            let scaled = EvaluableFunction::Scaled { base: Box::new(f), factor };
            let sc = bmo_norm(&scaled, &set, &centers, &radii).unwrap().bmo_norm;
            prop_assert!((sc - factor * base).abs() <= 1e-12 * (1.0 + factor * base.abs()));
        }
    }
}
