//! Polynomial maps in several complex variables, given as explicit
//! coefficient tables of total degree at most 8.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on the total degree of any component.
pub const MAX_TOTAL_DEGREE: u32 = 8;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("term has {got} exponents, map has {expected} variables")]
    ExponentArity { expected: usize, got: usize },
    #[error("total degree {0} exceeds the supported maximum {MAX_TOTAL_DEGREE}")]
    DegreeTooLarge(u32),
    #[error("polynomial map must have at least one variable")]
    NoVariables,
    #[error("coefficient is not finite")]
    NonFiniteCoefficient,
}

/// One monomial term: coefficient times the product of powers of the
/// complex variables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Term {
    pub exponents: Vec<u32>,
    /// Complex coefficient as `[re, im]`.
    pub coeff: [f64; 2],
}

impl Term {
    pub fn new(exponents: Vec<u32>, re: f64, im: f64) -> Self {
        Term {
            exponents,
            coeff: [re, im],
        }
    }
}

/// A polynomial in `n_vars` complex variables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyMap {
    pub n_vars: usize,
    pub terms: Vec<Term>,
}

impl PolyMap {
    pub fn new(n_vars: usize, terms: Vec<Term>) -> Result<Self, PolyError> {
        if n_vars == 0 {
            return Err(PolyError::NoVariables);
        }
        for t in &terms {
            if t.exponents.len() != n_vars {
                return Err(PolyError::ExponentArity {
                    expected: n_vars,
                    got: t.exponents.len(),
                });
            }
            let deg: u32 = t.exponents.iter().sum();
            if deg > MAX_TOTAL_DEGREE {
                return Err(PolyError::DegreeTooLarge(deg));
            }
            if !t.coeff[0].is_finite() || !t.coeff[1].is_finite() {
                return Err(PolyError::NonFiniteCoefficient);
            }
        }
        Ok(PolyMap { n_vars, terms })
    }

    /// Convenience constructor for a single monomial `c * z_var^pow`.
    pub fn monomial(n_vars: usize, var: usize, pow: u32, c: Complex64) -> Self {
        let mut e = vec![0u32; n_vars];
        e[var] = pow;
        PolyMap::new(n_vars, vec![Term::new(e, c.re, c.im)]).expect("valid monomial")
    }

    /// Evaluate at a point of C^n.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.n_vars);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut m = Complex64::new(t.coeff[0], t.coeff[1]);
            for (zi, &e) in z.iter().zip(&t.exponents) {
                for _ in 0..e {
                    m *= zi;
                }
            }
            acc += m;
        }
        acc
    }
}

/// Interpret a real coordinate slice `[re1, im1, re2, im2, ...]` as complex
/// variables.
pub fn coords_to_complex(coords: &[f64]) -> Vec<Complex64> {
    coords
        .chunks_exact(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect()
}
