//! Brute-force ground truth: apply the operator to basis vectors and take
//! squared norms, with no closed forms involved.
//!
//! Weights are square roots of the rational `sq(n)`, so vector entries live
//! in the span of square roots of rationals. [`Surd`] keeps such numbers
//! exactly; a squared norm computed from them is rational whenever the
//! irrational parts cancel, which is always the case for images of basis
//! vectors.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::moments::MomentSeq;
use crate::scalar::{exact_sqrt, fmt_rat, Rat};
use crate::wco::SquaredWeights;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("dimension {dim} cannot hold index {needed}")]
    DimensionTooSmall { dim: usize, needed: usize },
    #[error("vector has support at index {0}, which the operator maps outside the truncation")]
    SupportOverflow(usize),
    #[error("vector length {got} does not match operator dimension {dim}")]
    LengthMismatch { dim: usize, got: usize },
    #[error("squared norm has an irrational part")]
    Irrational,
}

/// `sum_i c_i sqrt(r_i)` with rational `c_i`, positive rational `r_i`, and no
/// two radicands whose ratio is a rational square.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Surd {
    terms: Vec<(Rat, Rat)>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd { terms: Vec::new() }
    }

    pub fn rational(c: Rat) -> Self {
        let mut s = Surd::zero();
        s.push(c, Rat::one());
        s
    }

    /// `sign * sqrt(r)`; `r` must be nonnegative.
    pub fn sqrt(r: &Rat, negative: bool) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        let c = if negative { -Rat::one() } else { Rat::one() };
        let mut s = Surd::zero();
        s.push(c, r.clone());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, c: Rat, r: Rat) {
        if c.is_zero() || r.is_zero() {
            return;
        }
        let (c, r) = match exact_sqrt(&r) {
            Some(root) => (c * root, Rat::one()),
            None => (c, r),
        };
        let hit = self
            .terms
            .iter()
            .enumerate()
            .find_map(|(i, (_, tr))| exact_sqrt(&(&r / tr)).map(|ratio| (i, ratio)));
        match hit {
            Some((i, ratio)) => {
                self.terms[i].0 += c * ratio;
                if self.terms[i].0.is_zero() {
                    self.terms.remove(i);
                }
            }
            None => self.terms.push((c, r)),
        }
    }

    pub fn add(&self, other: &Surd) -> Surd {
        let mut out = self.clone();
        for (c, r) in &other.terms {
            out.push(c.clone(), r.clone());
        }
        out
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (a, ra) in &self.terms {
            for (b, rb) in &other.terms {
                out.push(a * b, ra * rb);
            }
        }
        out
    }

    /// The value when it is rational.
    pub fn to_rat(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(c, r)] if r.is_one() => Some(c.clone()),
            _ => None,
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, r)| {
                if r.is_one() {
                    fmt_rat(c)
                } else {
                    format!("{}*sqrt({})", fmt_rat(c), fmt_rat(r))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sign convention for the square roots of `sq(n)`. Norms do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Phase {
    #[default]
    Nonnegative,
    /// `w(n) = (-1)^n sqrt(sq(n))`.
    Alternating,
}

/// Vector with entries at indices `0..dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactVector {
    entries: Vec<Surd>,
}

impl ExactVector {
    pub fn zeros(dim: usize) -> Self {
        ExactVector { entries: vec![Surd::zero(); dim] }
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self, OracleError> {
        if k >= dim {
            return Err(OracleError::DimensionTooSmall { dim, needed: k });
        }
        let mut v = ExactVector::zeros(dim);
        v.entries[k] = Surd::rational(Rat::one());
        Ok(v)
    }

    pub fn from_rationals(values: Vec<Rat>) -> Self {
        ExactVector { entries: values.into_iter().map(Surd::rational).collect() }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize) -> &Surd {
        &self.entries[i]
    }

    pub fn norm_sq(&self) -> Surd {
        self.entries.iter().fold(Surd::zero(), |acc, e| acc.add(&e.mul(e)))
    }
}

/// The operator truncated to `span{e_0, ..., e_N}`.
#[derive(Debug, Clone)]
pub struct BandedOp {
    weights: SquaredWeights,
    dim: usize,
    phase: Phase,
    roots: Vec<Surd>,
}

impl BandedOp {
    /// `last_index` is `N`; the matrix is `(N+1) x (N+1)`.
    pub fn new(weights: SquaredWeights, last_index: usize, phase: Phase) -> Self {
        let dim = last_index + 1;
        let roots = (0..=dim)
            .map(|n| {
                let negative = phase == Phase::Alternating && n % 2 == 1;
                Surd::sqrt(&weights.sq(n), negative)
            })
            .collect();
        BandedOp { weights, dim, phase, roots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn weights(&self) -> &SquaredWeights {
        &self.weights
    }

    /// `e_0 -> w(0) e_0 + w(1) e_1`, `e_n -> w(n+1) e_{n+1}`, extended linearly.
    pub fn apply(&self, v: &ExactVector) -> Result<ExactVector, OracleError> {
        if v.dim() != self.dim {
            return Err(OracleError::LengthMismatch { dim: self.dim, got: v.dim() });
        }
        let last = self.dim - 1;
        if !v.entries[last].is_zero() {
            return Err(OracleError::SupportOverflow(last));
        }
        let mut out = ExactVector::zeros(self.dim);
        for (n, c) in v.entries.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if n == 0 {
                out.entries[0] = out.entries[0].add(&c.mul(&self.roots[0]));
                out.entries[1] = out.entries[1].add(&c.mul(&self.roots[1]));
            } else {
                out.entries[n + 1] = out.entries[n + 1].add(&c.mul(&self.roots[n + 1]));
            }
        }
        Ok(out)
    }

    /// `||C^n e_k||^2`, requiring `k + n <= N`.
    pub fn gram_diagonal(&self, k: usize, n: usize) -> Result<Rat, OracleError> {
        let needed = k + n;
        if needed >= self.dim {
            return Err(OracleError::DimensionTooSmall { dim: self.dim, needed });
        }
        let mut v = ExactVector::basis(self.dim, k)?;
        for _ in 0..n {
            v = self.apply(&v)?;
        }
        v.norm_sq().to_rat().ok_or(OracleError::Irrational)
    }

    /// `||C^n e_k||^2` for `n = 0..=n_max` from a single orbit.
    pub fn orbit_norms(&self, k: usize, n_max: usize) -> Result<Vec<Rat>, OracleError> {
        let needed = k + n_max;
        if needed >= self.dim {
            return Err(OracleError::DimensionTooSmall { dim: self.dim, needed });
        }
        let mut v = ExactVector::basis(self.dim, k)?;
        let mut out = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            if n > 0 {
                v = self.apply(&v)?;
            }
            out.push(v.norm_sq().to_rat().ok_or(OracleError::Irrational)?);
        }
        Ok(out)
    }
}

/// Default horizon for moment prefixes.
pub const DEFAULT_HORIZON: usize = 12;

/// `||C^n e_k||^2` on the smallest truncation that holds the orbit exactly.
pub fn gram_diagonal(w: &SquaredWeights, k: usize, n: usize, phase: Phase) -> Result<Rat, OracleError> {
    BandedOp::new(w.clone(), k + n, phase).gram_diagonal(k, n)
}

/// `{||C^n e_k||^2}_{n=0..=n_max}` as an exact moment prefix.
pub fn hsequence(w: &SquaredWeights, k: usize, n_max: usize) -> Result<MomentSeq, OracleError> {
    let norms = BandedOp::new(w.clone(), k + n_max, Phase::Nonnegative).orbit_norms(k, n_max)?;
    Ok(MomentSeq::Exact(norms))
}
