//! Weighted composition operator on the one-circuit graph over `Z+`.
//!
//! The symbol is `phi(0) = 0`, `phi(n) = n - 1`, so the fiber over `0` is
//! `{0, 1}` and every other fiber is a singleton. The operator acts by
//!
//! ```text
//! C e_0 = w(0) e_0 + w(1) e_1,     C e_n = w(n+1) e_{n+1}  (n >= 1)
//! ```
//!
//! Every quantity handled here depends on the weights only through the
//! squared moduli `sq(n) = |w(n)|^2`, which are kept as exact rationals.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{fmt_rat, parse_rat, Rat, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WcoError {
    #[error("squared weight at index {index} is negative ({value})")]
    Negative { index: usize, value: Rat },
    #[error("xi tail needs w2sq >= 1, got {0}")]
    XiDomain(Rat),
    #[error("xi tail needs an explicit head of at least 2 entries, got {0}")]
    HeadTooShort(usize),
    #[error("weight head is empty")]
    EmptyHead,
    #[error("operator is not bounded from below (lower bound of squared weights is {0})")]
    NotBoundedBelow(Rat),
    #[error("w(1) = 0 requires |w(0)|^2 = 1, got {0}")]
    FirstBranch(Rat),
    #[error("w(1) != 0 requires ((sq0+sq1)(2-sq0)-1)/sq1 >= 1, got w2sq = {0}")]
    SecondBranch(Rat),
    #[error("not a 2-isometry: residual at n = {index} is {residual}")]
    NotTwoIsometric { index: usize, residual: Rat },
    #[error("zero squared weight at index {0}")]
    ZeroWeight(usize),
    #[error("fiber index must be at least 1 for the product formula")]
    FiberZero,
    #[error("probe depth must be at least {min}, got {got}")]
    Depth { min: usize, got: usize },
    #[error("weight spec line {line}: {msg}")]
    Spec { line: usize, msg: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Rule generating `sq(n)` past the explicit head.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TailRule {
    /// `sq(n) = value`.
    Constant(Rat),
    /// `sq(n + 2) = xi_sq(n, w2sq)`; the 2-isometric continuation.
    Xi { w2sq: Rat },
    /// `sq(n + 2) = 1 / xi_sq(n, w2sq)`; the Cauchy dual of an `Xi` tail.
    InverseXi { w2sq: Rat },
}

impl fmt::Display for TailRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailRule::Constant(c) if c.is_one() => write!(f, "ones"),
            TailRule::Constant(c) => write!(f, "const({})", fmt_rat(c)),
            TailRule::Xi { w2sq } => write!(f, "xi(w2sq={})", fmt_rat(w2sq)),
            TailRule::InverseXi { w2sq } => write!(f, "inverse-xi(w2sq={})", fmt_rat(w2sq)),
        }
    }
}

/// The sequence `sq(n) = |w(n)|^2`, `n >= 0`: an explicit head plus a tail rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquaredWeights {
    head: Vec<Rat>,
    tail: TailRule,
}

/// Square of `xi_n` at a point where `x^2 = w2sq`:
/// `(1 + (n+1)(w2sq-1)) / (1 + n(w2sq-1))`.
pub fn xi_sq(n: usize, w2sq: &Rat) -> Result<Rat, WcoError> {
    if w2sq < &Rat::one() {
        return Err(WcoError::XiDomain(w2sq.clone()));
    }
    Ok(xi_sq_unchecked(n, w2sq))
}

fn xi_sq_unchecked(n: usize, w2sq: &Rat) -> Rat {
    let delta = w2sq - Rat::one();
    let n = Rat::from_integer(n.into());
    (Rat::one() + (&n + Rat::one()) * &delta) / (Rat::one() + n * delta)
}

impl SquaredWeights {
    pub fn new(head: Vec<Rat>, tail: TailRule) -> Result<Self, WcoError> {
        if head.is_empty() {
            return Err(WcoError::EmptyHead);
        }
        if let Some((index, value)) = head.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(WcoError::Negative { index, value: value.clone() });
        }
        match &tail {
            TailRule::Constant(c) if c.is_negative() => {
                return Err(WcoError::Negative { index: head.len(), value: c.clone() })
            }
            TailRule::Xi { w2sq } | TailRule::InverseXi { w2sq } => {
                if w2sq < &Rat::one() {
                    return Err(WcoError::XiDomain(w2sq.clone()));
                }
                if head.len() < 2 {
                    return Err(WcoError::HeadTooShort(head.len()));
                }
            }
            TailRule::Constant(_) => {}
        }
        Ok(SquaredWeights { head, tail })
    }

    /// Weights `sq(n) = 1` for every `n`.
    pub fn ones() -> Self {
        SquaredWeights { head: vec![Rat::one(), Rat::one()], tail: TailRule::Constant(Rat::one()) }
    }

    /// Isometric weights `(1, 0, 1, 1, ...)`.
    pub fn isometry() -> Self {
        SquaredWeights { head: vec![Rat::one(), Rat::zero()], tail: TailRule::Constant(Rat::one()) }
    }

    pub fn head(&self) -> &[Rat] {
        &self.head
    }

    pub fn tail(&self) -> &TailRule {
        &self.tail
    }

    /// `sq(n)`; total for every `n`.
    pub fn sq(&self, n: usize) -> Rat {
        if let Some(v) = self.head.get(n) {
            return v.clone();
        }
        match &self.tail {
            TailRule::Constant(c) => c.clone(),
            TailRule::Xi { w2sq } => xi_sq_unchecked(n - 2, w2sq),
            TailRule::InverseXi { w2sq } => xi_sq_unchecked(n - 2, w2sq).recip(),
        }
    }

    /// `sq(0), ..., sq(len - 1)`.
    pub fn prefix(&self, len: usize) -> Vec<Rat> {
        (0..len).map(|n| self.sq(n)).collect()
    }

    /// `alpha = sq(0) + sq(1)`, the mass of the fiber over 0.
    pub fn alpha(&self) -> Rat {
        self.sq(0) + self.sq(1)
    }

    /// First index generated by the tail rule.
    fn tail_start(&self) -> usize {
        self.head.len()
    }

    /// `(sup, inf)` of `sq(n)` over `n >= from`, with `from` in the tail region.
    /// Closed form: `Xi` tails decrease to 1, `InverseXi` tails increase to 1.
    fn tail_sup_inf(&self, from: usize) -> (Rat, Rat) {
        match &self.tail {
            TailRule::Constant(c) => (c.clone(), c.clone()),
            TailRule::Xi { .. } => (self.sq(from), Rat::one()),
            TailRule::InverseXi { .. } => (Rat::one(), self.sq(from)),
        }
    }

    /// `(sup, inf)` of `sq(n)` over `n >= 2`.
    fn sup_inf_from_two(&self) -> (Rat, Rat) {
        let from = self.tail_start().max(2);
        let (mut sup, mut inf) = self.tail_sup_inf(from);
        for v in self.head.iter().skip(2) {
            if v > &sup {
                sup = v.clone();
            }
            if v < &inf {
                inf = v.clone();
            }
        }
        (sup, inf)
    }

    /// Every `sq(n)` with `n >= 1` is strictly positive.
    fn positive_from_one(&self) -> bool {
        let head_ok = self.head.iter().skip(1).all(Signed::is_positive);
        let tail_ok = match &self.tail {
            TailRule::Constant(c) => c.is_positive(),
            TailRule::Xi { .. } | TailRule::InverseXi { .. } => true,
        };
        head_ok && tail_ok
    }
}

impl fmt::Display for SquaredWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = self.head.iter().map(fmt_rat).collect();
        write!(f, "sq = [{}], tail = {}", head.join(", "), self.tail)
    }
}

/// `h(n)`: the sum of squared weights over the fiber `phi^{-1}(n)`.
pub fn h_of(w: &SquaredWeights, n: usize) -> Rat {
    if n == 0 {
        w.alpha()
    } else {
        w.sq(n + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorReport {
    /// `||C||^2 = max(alpha, sup_{n>=2} sq(n))`.
    pub norm_sq: Rat,
    /// `min(alpha, inf_{n>=2} sq(n))`; zero means not bounded below.
    pub lower_bound_sq: Rat,
    pub bounded: bool,
    /// `w(n) != 0` for all `n >= 1`, which makes `e_0` cyclic.
    pub cyclic_sufficient: bool,
    pub two_isometry_residuals: Vec<Rat>,
    /// The tail rule makes every residual beyond the head vanish.
    pub tail_certified: bool,
}

impl OperatorReport {
    pub fn bounded_below(&self) -> bool {
        self.lower_bound_sq.is_positive()
    }

    /// Residuals vanish to the probe depth and the tail is certified.
    pub fn is_two_isometry(&self) -> bool {
        self.tail_certified && self.two_isometry_residuals.iter().all(Zero::is_zero)
    }
}

pub fn operator_report(w: &SquaredWeights, probe_depth: usize) -> Result<OperatorReport, WcoError> {
    if probe_depth < 2 {
        return Err(WcoError::Depth { min: 2, got: probe_depth });
    }
    let alpha = w.alpha();
    let (sup, inf) = w.sup_inf_from_two();
    let norm_sq = if alpha > sup { alpha.clone() } else { sup };
    let lower_bound_sq = if alpha < inf { alpha } else { inf };
    // every tail rule is bounded, so the operator always is
    let bounded = true;
    Ok(OperatorReport {
        norm_sq,
        lower_bound_sq,
        bounded,
        cyclic_sufficient: bounded && w.positive_from_one(),
        two_isometry_residuals: two_isometry_check(w, probe_depth)?,
        tail_certified: tail_certified(w),
    })
}

/// Residuals of `I - 2 C*C + C*^2 C^2 = 0`, i.e. of `1 - 2 h + h_2` at
/// `n = 0..=depth`, with
/// `h_2(0) = sq(0)^2 + sq(0) sq(1) + sq(1) sq(2)` and
/// `h_2(n) = sq(n+1) sq(n+2)` for `n >= 1`.
pub fn two_isometry_check(w: &SquaredWeights, depth: usize) -> Result<Vec<Rat>, WcoError> {
    if depth < 1 {
        return Err(WcoError::Depth { min: 1, got: depth });
    }
    let two = Rat::from_integer(2.into());
    let (s0, s1, s2) = (w.sq(0), w.sq(1), w.sq(2));
    let h2_0 = &s0 * &s0 + &s0 * &s1 + &s1 * &s2;
    let mut out = Vec::with_capacity(depth + 1);
    out.push(Rat::one() - &two * w.alpha() + h2_0);
    let mut cur = w.sq(2);
    for n in 1..=depth {
        let next = w.sq(n + 2);
        out.push(Rat::one() - &two * &cur + &cur * &next);
        cur = next;
    }
    Ok(out)
}

/// True when the tail rule alone makes every residual whose weights both lie
/// in the tail vanish: `Xi` tails telescope, a constant tail must equal 1.
pub fn tail_certified(w: &SquaredWeights) -> bool {
    match w.tail() {
        TailRule::Xi { .. } => true,
        TailRule::Constant(c) => c.is_one(),
        TailRule::InverseXi { w2sq } => w2sq.is_one(),
    }
}

/// Residuals over the head region followed by the symbolic tail certificate.
/// The returned depth covers every residual that touches a head entry.
pub fn two_isometry_certify(w: &SquaredWeights) -> Result<(Vec<Rat>, bool), WcoError> {
    let depth = w.head().len().max(2);
    Ok((two_isometry_check(w, depth)?, tail_certified(w)))
}

/// Weights of a 2-isometry with prescribed `sq(0)`, `sq(1)`.
///
/// `sq(1) = 0` forces `sq(0) = 1` and gives the isometry with unit tail;
/// otherwise `sq(2) = ((sq0 + sq1)(2 - sq0) - 1) / sq1` must be at least 1
/// and the tail follows `xi_n`.
pub fn construct_2isometry(sq0: Rat, sq1: Rat) -> Result<SquaredWeights, WcoError> {
    if sq0.is_negative() {
        return Err(WcoError::Negative { index: 0, value: sq0 });
    }
    if sq1.is_negative() {
        return Err(WcoError::Negative { index: 1, value: sq1 });
    }
    let w2sq = if sq1.is_zero() {
        if !sq0.is_one() {
            return Err(WcoError::FirstBranch(sq0));
        }
        Rat::one()
    } else {
        let two = Rat::from_integer(2.into());
        let w2sq = ((&sq0 + &sq1) * (two - &sq0) - Rat::one()) / &sq1;
        if w2sq < Rat::one() {
            return Err(WcoError::SecondBranch(w2sq));
        }
        w2sq
    };
    SquaredWeights::new(vec![sq0, sq1, w2sq.clone()], TailRule::Xi { w2sq })
}

/// Weights of the Cauchy dual `C (C*C)^{-1}`:
/// `sq'(n) = sq(n)/alpha^2` for `n = 0, 1` and `sq'(n) = 1/sq(n)` for `n >= 2`.
pub fn dual_weights(w: &SquaredWeights) -> Result<SquaredWeights, WcoError> {
    let (_, inf) = w.sup_inf_from_two();
    let alpha = w.alpha();
    let lower = if alpha < inf { alpha.clone() } else { inf };
    if !lower.is_positive() {
        return Err(WcoError::NotBoundedBelow(lower));
    }
    let a2 = &alpha * &alpha;
    let len = w.head().len().max(2);
    let mut head = Vec::with_capacity(len);
    head.push(w.sq(0) / &a2);
    head.push(w.sq(1) / &a2);
    head.extend((2..len).map(|n| w.sq(n).recip()));
    let tail = match w.tail() {
        TailRule::Constant(c) => TailRule::Constant(c.recip()),
        TailRule::Xi { w2sq } => TailRule::InverseXi { w2sq: w2sq.clone() },
        TailRule::InverseXi { w2sq } => TailRule::Xi { w2sq: w2sq.clone() },
    };
    SquaredWeights::new(head, tail)
}

/// `h_{phi^n, w'_[n]}(0) = ||C'^n e_0||^2` for a 2-isometry `C`:
///
/// ```text
/// sq0^n / alpha^(2n) + sum_{j<n} sq0^(n-j-1) sq1 / (alpha^(2(n-j)) (1 + j (sq2 - 1)))
/// ```
pub fn dual_moment_fiber0(w: &SquaredWeights, n: usize) -> Result<Rat, WcoError> {
    let residuals = two_isometry_check(w, n.max(1))?;
    if let Some((index, r)) = residuals.iter().enumerate().find(|(_, r)| !r.is_zero()) {
        return Err(WcoError::NotTwoIsometric { index, residual: r.clone() });
    }
    let (s0, s1, s2) = (w.sq(0), w.sq(1), w.sq(2));
    let inv_a2 = (w.alpha() * w.alpha()).recip();
    let delta = &s2 - Rat::one();
    // powers[i] = sq0^i, inv_pow[i] = alpha^(-2i)
    let mut s0_pow = vec![Rat::one()];
    let mut inv_pow = vec![Rat::one()];
    for i in 1..=n {
        s0_pow.push(&s0_pow[i - 1] * &s0);
        inv_pow.push(&inv_pow[i - 1] * &inv_a2);
    }
    let mut acc = &s0_pow[n] * &inv_pow[n];
    for j in 0..n {
        let denom = Rat::one() + Rat::from_integer(j.into()) * &delta;
        acc += &s0_pow[n - j - 1] * &s1 * &inv_pow[n - j] / denom;
    }
    Ok(acc)
}

/// `h_{phi^n, w'_[n]}(k) = 1 / prod_{j=1}^{n} sq(k + j)` for `k >= 1`.
pub fn dual_moment_fiberk(w: &SquaredWeights, k: usize, n: usize) -> Result<Rat, WcoError> {
    if k == 0 {
        return Err(WcoError::FiberZero);
    }
    let mut prod = Rat::one();
    for j in 1..=n {
        let s = w.sq(k + j);
        if s.is_zero() {
            return Err(WcoError::ZeroWeight(k + j));
        }
        prod *= s;
    }
    Ok(prod.recip())
}

/// Parsed weight spec file.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Explicit(SquaredWeights),
    /// Member of the counterexample family at parameter `x`.
    Family { x: Rat },
}

impl WeightSpec {
    /// Key-value text:
    ///
    /// ```text
    /// kind = explicit
    /// sq = [1/2, 1, 5/4]
    /// tail = xi(w2sq=5/4)      # or: ones | const(Rat)
    /// ```
    ///
    /// or `kind = family` with `x = Rat`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, WcoError> {
        let mut kind: Option<(usize, String)> = None;
        let mut sq: Option<(usize, Vec<Rat>)> = None;
        let mut tail: Option<(usize, TailRule)> = None;
        let mut x: Option<(usize, Rat)> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let spec_err = |msg: String| WcoError::Spec { line, msg };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| spec_err(format!("expected `key = value`, got {content:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let dup = |k: &str| spec_err(format!("duplicate key {k:?}"));
            match key {
                "kind" => {
                    if kind.is_some() {
                        return Err(dup(key));
                    }
                    kind = Some((line, value.to_string()));
                }
                "sq" => {
                    if sq.is_some() {
                        return Err(dup(key));
                    }
                    let inner = value
                        .strip_prefix('[')
                        .and_then(|v| v.strip_suffix(']'))
                        .ok_or_else(|| spec_err("sq must be a bracketed list".into()))?;
                    let vals = inner
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| parse_rat(s).map_err(|e| spec_err(e.to_string())))
                        .collect::<Result<Vec<_>, _>>()?;
                    sq = Some((line, vals));
                }
                "tail" => {
                    if tail.is_some() {
                        return Err(dup(key));
                    }
                    tail = Some((line, parse_tail(value).map_err(spec_err)?));
                }
                "x" => {
                    if x.is_some() {
                        return Err(dup(key));
                    }
                    x = Some((line, parse_rat(value).map_err(|e| spec_err(e.to_string()))?));
                }
                other => return Err(spec_err(format!("unknown key {other:?}"))),
            }
        }
        let (kline, kind) = kind.ok_or(WcoError::Spec { line: 0, msg: "missing `kind`".into() })?;
        match kind.as_str() {
            "explicit" => {
                if let Some((line, _)) = x {
                    return Err(WcoError::Spec { line, msg: "`x` is only valid for kind = family".into() });
                }
                let (_, head) = sq.ok_or(WcoError::Spec { line: 0, msg: "missing `sq`".into() })?;
                let tail = tail.map_or(TailRule::Constant(Rat::one()), |(_, t)| t);
                Ok(WeightSpec::Explicit(SquaredWeights::new(head, tail)?))
            }
            "family" => {
                if let Some((line, _)) = sq.as_ref().map(|s| (s.0, ())).or(tail.as_ref().map(|t| (t.0, ()))) {
                    return Err(WcoError::Spec { line, msg: "`sq`/`tail` are only valid for kind = explicit".into() });
                }
                let (_, x) = x.ok_or(WcoError::Spec { line: 0, msg: "missing `x`".into() })?;
                Ok(WeightSpec::Family { x })
            }
            other => Err(WcoError::Spec { line: kline, msg: format!("unknown kind {other:?}") }),
        }
    }
}

fn parse_tail(value: &str) -> Result<TailRule, String> {
    let v = value.trim();
    if v == "ones" {
        return Ok(TailRule::Constant(Rat::one()));
    }
    let call = |name: &str| -> Option<&str> {
        v.strip_prefix(name)
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .map(str::trim)
    };
    if let Some(arg) = call("xi") {
        let arg = arg.strip_prefix("w2sq").map(str::trim_start).and_then(|a| a.strip_prefix('=')).unwrap_or(arg);
        return parse_rat(arg).map(|w2sq| TailRule::Xi { w2sq }).map_err(|e| e.to_string());
    }
    if let Some(arg) = call("const") {
        return parse_rat(arg).map(TailRule::Constant).map_err(|e| e.to_string());
    }
    Err(format!("unknown tail {v:?} (expected ones, xi(w2sq=Rat) or const(Rat))"))
}
