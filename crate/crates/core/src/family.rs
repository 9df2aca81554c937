//! The one-parameter family of cyclic 2-isometries whose Cauchy duals fail
//! to be subnormal for small `x > 0`.
//!
//! For `x >= 0` the squared weights are
//! `sq(0) = 1/2`, `sq(1) = 1/2 + x`, `sq(2) = (1+3x)/(1+2x)` and
//! `sq(n+2) = (1+(n+3)x)/(1+(n+2)x)`. The fiber-0 moments of the dual are
//!
//! ```text
//! omega_n(x) = (1 + (1+2x)^2 S_n(x)) / (2^n (1+x)^(2n)),
//! S_n(x)     = sum_{j<n} 2^j (1+x)^(2j) / (1 + (j+2)x),
//! ```
//!
//! and `D_m = sum_n (-1)^n C(m,n) omega_n` is the order-`m` difference whose
//! sign decides the Hausdorff condition at shift 0.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::moments::{hausdorff_test, MomentError, MomentSeq, MomentVerdict};
use crate::oracle::{hsequence, OracleError};
use crate::scalar::{binomial, fmt_rat, to_decimal, two_pow, Poly, Rat, RatFn, ScalarError};
use crate::wco::{
    dual_moment_fiber0, dual_weights, operator_report, SquaredWeights, TailRule, WcoError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("family parameter must be nonnegative, got x = {0}")]
    NegativeParameter(Rat),
    #[error("x = {x} lies outside the domain (-1/{}, oo) of omega_{n}", n + 1)]
    Domain { n: usize, x: Rat },
    #[error(
        "x = 0 is the isometric boundary case: h = 1 everywhere, so the operator and its \
         Cauchy dual are isometries and the dual is subnormal"
    )]
    IsometricBoundary,
    #[error("m_max = {m_max} exceeds n_max = {n_max}")]
    Order { m_max: usize, n_max: usize },
    #[error("invalid scan: {0}")]
    Scan(String),
    #[error(transparent)]
    Wco(#[from] WcoError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Moment(#[from] MomentError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// The family parameter `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyParam {
    x: Rat,
}

impl FamilyParam {
    pub fn new(x: Rat) -> Result<Self, FamilyError> {
        if x.is_negative() {
            return Err(FamilyError::NegativeParameter(x));
        }
        Ok(FamilyParam { x })
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }
}

/// Membership in `(-1/(n+1), oo)`.
fn in_domain(n: usize, x: &Rat) -> bool {
    x * Rat::from_integer(BigInt::from(n + 1)) > -Rat::one()
}

pub fn family_weights(p: &FamilyParam) -> SquaredWeights {
    let x = p.x();
    let one = Rat::one();
    let half = Rat::new(1.into(), 2.into());
    let three = Rat::from_integer(3.into());
    let two = Rat::from_integer(2.into());
    let w2sq = (&one + &three * x) / (&one + &two * x);
    SquaredWeights::new(vec![half.clone(), half + x, w2sq.clone()], TailRule::Xi { w2sq })
        .expect("family weights are valid for x >= 0")
}

/// `omega_n(x)` evaluated directly from its defining sum.
pub fn omega_at(n: usize, x: &Rat) -> Result<Rat, FamilyError> {
    if !in_domain(n, x) {
        return Err(FamilyError::Domain { n, x: x.clone() });
    }
    let one = Rat::one();
    let two = Rat::from_integer(2.into());
    let a = (&one + x) * (&one + x);
    let b = (&one + &two * x) * (&one + &two * x);
    let mut s = Rat::zero();
    let mut pow = Rat::one(); // 2^j (1+x)^(2j)
    for j in 0..n {
        let den = &one + Rat::from_integer(BigInt::from(j + 2)) * x;
        s += &pow / den;
        pow *= &two * &a;
    }
    // after the loop pow = 2^n (1+x)^(2n)
    Ok((one + b * s) / pow)
}

/// `h_{phi^n, w'_[n]}(0)` for the family member `p`.
pub fn omega_eval(n: usize, p: &FamilyParam) -> Result<Rat, FamilyError> {
    omega_at(n, p.x())
}

/// `omega_n`, `S_n` for `n <= n_max` and `D_m` for `m <= m_max` as reduced
/// rational functions of `x`.
#[derive(Debug, Clone)]
pub struct FamilySymbolics {
    pub omega: Vec<RatFn>,
    pub s: Vec<RatFn>,
    pub d: Vec<RatFn>,
}

pub fn s_functions(n_max: usize) -> Vec<RatFn> {
    let one_plus_x_sq = Poly::from_ints(&[1, 1]).pow(2);
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = RatFn::zero();
    let mut pow = Poly::one(); // 2^j (1+x)^(2j)
    out.push(acc.clone());
    for j in 0..n_max {
        let den = Poly::linear(Rat::one(), Rat::from_integer(BigInt::from(j + 2)));
        let term = RatFn::new(pow.clone(), den).expect("nonzero denominator");
        acc = &acc + &term;
        out.push(acc.clone());
        pow = (&pow * &one_plus_x_sq).scale(&Rat::from_integer(2.into()));
    }
    out
}

fn omega_from_s(n: usize, s: &RatFn) -> RatFn {
    let b = RatFn::from_poly(Poly::from_ints(&[1, 2]).pow(2));
    let top = &RatFn::one() + &(&b * s);
    let den = Poly::from_ints(&[1, 1]).pow(2 * n as u32).scale(&two_pow(n as i64));
    top.checked_div(&RatFn::from_poly(den)).expect("nonzero denominator")
}

/// `sum_{n<=m} (-1)^n C(m,n) f_n`.
fn alternating_sum(m: usize, f: &[RatFn]) -> RatFn {
    // one common denominator, then a single reduction
    let den = f[..=m]
        .iter()
        .fold(Poly::one(), |acc, g| {
            let gcd = acc.gcd(g.den());
            &acc * &g.den().exact_div(&gcd)
        });
    let mut num = Poly::zero();
    for (n, g) in f[..=m].iter().enumerate() {
        let c = Rat::from_integer(binomial(m as u32, n as u32));
        let c = if n % 2 == 0 { c } else { -c };
        let part = &g.num().scale(&c) * &den.exact_div(g.den());
        num = &num + &part;
    }
    RatFn::new(num, den).expect("nonzero denominator")
}

pub fn build_symbolics(n_max: usize, m_max: usize) -> Result<FamilySymbolics, FamilyError> {
    if m_max > n_max {
        return Err(FamilyError::Order { m_max, n_max });
    }
    let s = s_functions(n_max);
    let omega: Vec<RatFn> = s.par_iter().enumerate().map(|(n, sn)| omega_from_s(n, sn)).collect();
    let d = (0..=m_max).into_par_iter().map(|m| alternating_sum(m, &omega)).collect();
    Ok(FamilySymbolics { omega, s, d })
}

/// `D_m` as a reduced rational function.
pub fn d_function(m: usize) -> RatFn {
    let s = s_functions(m);
    let omega: Vec<RatFn> = s.iter().enumerate().map(|(n, sn)| omega_from_s(n, sn)).collect();
    alternating_sum(m, &omega)
}

/// Exact `D_m(x)`, refusing points outside `(-1/(m+1), oo)`.
pub fn d_eval(d_m: &RatFn, m: usize, x: &Rat) -> Result<Rat, FamilyError> {
    if !in_domain(m, x) {
        return Err(FamilyError::Domain { n: m, x: x.clone() });
    }
    Ok(d_m.eval(x)?)
}

/// Derivatives `D_m^(l)(0)` for `l = 0..=order`.
pub fn d_taylor(m: usize, order: usize) -> Result<Vec<Rat>, FamilyError> {
    Ok(d_function(m).derivatives_at_zero(order)?)
}

/// `S_n^(l)(0)`, flagged when `l` lies past the tabulated orders `0..=4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SDerivative {
    pub value: Rat,
    pub beyond_table: bool,
}

pub fn s_derivatives_at_zero(n: usize, l: usize) -> Result<SDerivative, FamilyError> {
    let s = s_functions(n).pop().expect("n_max + 1 entries");
    let value = s.derivatives_at_zero(l)?.pop().expect("order + 1 entries");
    Ok(SDerivative { value, beyond_table: l > 4 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

impl SignClass {
    pub fn of(v: &Rat) -> Self {
        if v.is_negative() {
            SignClass::Negative
        } else if v.is_zero() {
            SignClass::Zero
        } else {
            SignClass::Positive
        }
    }

    fn symbol(self) -> char {
        match self {
            SignClass::Negative => '-',
            SignClass::Zero => '0',
            SignClass::Positive => '+',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub m: usize,
    pub x_max: Rat,
    pub steps: usize,
    /// `(x_k, D_m(x_k))` for `x_k = k x_max / steps`, `k = 1..=steps`.
    pub samples: Vec<(Rat, Rat)>,
    /// Largest `x_k` such that every sample in `(0, x_k]` is strictly negative.
    pub negative_prefix_end: Option<Rat>,
    /// Bracket `[a, b]` with `D_m(a) < 0 <= D_m(b)` (or the reverse change),
    /// around the first sign change between negative and nonnegative samples.
    pub bracket: Option<(Rat, Rat)>,
}

impl ScanReport {
    pub fn pattern(&self) -> String {
        self.samples.iter().map(|(_, v)| SignClass::of(v).symbol()).collect()
    }

    pub fn all_negative(&self) -> bool {
        self.samples.iter().all(|(_, v)| v.is_negative())
    }

    pub fn all_nonnegative(&self) -> bool {
        self.samples.iter().all(|(_, v)| !v.is_negative())
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m={} x_max={} steps={}", self.m, fmt_rat(&self.x_max), self.steps)?;
        writeln!(f, "signs: {}", self.pattern())?;
        match &self.negative_prefix_end {
            Some(e) => writeln!(f, "negative on samples in (0, {}]", fmt_rat(e))?,
            None => writeln!(f, "negative prefix: none")?,
        }
        match &self.bracket {
            Some((a, b)) => write!(f, "first crossing in [{}, {}]", fmt_rat(a), fmt_rat(b)),
            None => write!(f, "no sign change"),
        }
    }
}

/// Exact sign scan of `D_m` on the grid `k x_max / steps`, `k = 1..=steps`.
pub fn sign_scan(m: usize, x_max: &Rat, steps: usize) -> Result<ScanReport, FamilyError> {
    if steps == 0 {
        return Err(FamilyError::Scan("steps must be at least 1".into()));
    }
    if !x_max.is_positive() {
        return Err(FamilyError::Scan(format!("x_max must be positive, got {}", fmt_rat(x_max))));
    }
    let d_m = d_function(m);
    let step = x_max / Rat::from_integer(BigInt::from(steps));
    let samples: Vec<(Rat, Rat)> = (1..=steps)
        .into_par_iter()
        .map(|k| {
            let x = &step * Rat::from_integer(BigInt::from(k));
            let v = d_m.eval(&x).map_err(FamilyError::from)?;
            Ok((x, v))
        })
        .collect::<Result<_, FamilyError>>()?;

    let negative_prefix_end = samples
        .iter()
        .take_while(|(_, v)| v.is_negative())
        .last()
        .map(|(x, _)| x.clone());

    let change = samples
        .windows(2)
        .find(|w| w[0].1.is_negative() != w[1].1.is_negative());
    let bracket = match change {
        Some(w) => {
            let left_negative = w[0].1.is_negative();
            let (mut a, mut b) = (w[0].0.clone(), w[1].0.clone());
            let target = x_max * two_pow(-10);
            let two = Rat::from_integer(2.into());
            while &b - &a > target {
                let mid = (&a + &b) / &two;
                if d_m.eval(&mid)?.is_negative() == left_negative {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            Some((a, b))
        }
        None => None,
    };
    Ok(ScanReport { m, x_max: x_max.clone(), steps, samples, negative_prefix_end, bracket })
}

/// Settings of the counterexample pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerdictConfig {
    /// Hausdorff depth `M`.
    pub depth: usize,
    /// Moment prefix `n = 0..=horizon`.
    pub horizon: usize,
    /// Depth of the exact 2-isometry residual check.
    pub residual_depth: usize,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig { depth: 5, horizon: 12, residual_depth: 50 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleVerdict {
    pub x: Rat,
    pub config: VerdictConfig,
    pub norm_sq: Rat,
    pub bounded: bool,
    pub cyclic_sufficient: bool,
    pub residuals_zero: bool,
    pub tail_certified: bool,
    /// `omega_n(x)` for `n = 0..=horizon`.
    pub moments: Vec<Rat>,
    /// Closed-form dual moments agree with `omega_n(x)`.
    pub closed_form_agrees: bool,
    /// Oracle norms `||C'^n e_0||^2` agree with `omega_n(x)`.
    pub oracle_agrees: bool,
    pub hausdorff: MomentVerdict,
    pub confirmed: bool,
}

impl fmt::Display for CounterexampleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(f, "x={}", fmt_rat(&self.x))?;
        writeln!(f, "bounded={} norm_sq={}", self.bounded, fmt_rat(&self.norm_sq))?;
        writeln!(f, "cyclic_sufficient={}", self.cyclic_sufficient)?;
        writeln!(
            f,
            "two_isometry: residuals_zero={} (depth {}) tail_certified={}",
            self.residuals_zero, c.residual_depth, self.tail_certified
        )?;
        writeln!(
            f,
            "dual moments (n<={}): closed_form_agrees={} oracle_agrees={}",
            c.horizon, self.closed_form_agrees, self.oracle_agrees
        )?;
        writeln!(f, "hausdorff: {}", self.hausdorff)?;
        if self.confirmed {
            write!(f, "verdict: counterexample confirmed (cyclic 2-isometry, Cauchy dual not subnormal)")
        } else {
            write!(f, "verdict: not confirmed")
        }
    }
}

/// Bundles the operator checks, the dual moment prefix, the Hausdorff test
/// and the closed-form and oracle cross-checks for one family member.
pub fn counterexample_verdict(
    p: &FamilyParam,
    config: VerdictConfig,
) -> Result<CounterexampleVerdict, FamilyError> {
    if p.x().is_zero() {
        return Err(FamilyError::IsometricBoundary);
    }
    let w = family_weights(p);
    let report = operator_report(&w, config.residual_depth.max(2))?;
    let residuals_zero = report.two_isometry_residuals.iter().all(Zero::is_zero);

    let moments = (0..=config.horizon)
        .map(|n| omega_eval(n, p))
        .collect::<Result<Vec<_>, _>>()?;
    let closed_form_agrees = residuals_zero
        && (0..=config.horizon)
            .map(|n| dual_moment_fiber0(&w, n))
            .collect::<Result<Vec<_>, _>>()?
            == moments;
    let oracle = hsequence(&dual_weights(&w)?, 0, config.horizon)?;
    let oracle_agrees = oracle == MomentSeq::Exact(moments.clone());

    let hausdorff = hausdorff_test(&MomentSeq::Exact(moments.clone()), config.depth)?;
    let confirmed = report.bounded
        && report.cyclic_sufficient
        && residuals_zero
        && report.tail_certified
        && closed_form_agrees
        && oracle_agrees
        && !hausdorff.passed();
    Ok(CounterexampleVerdict {
        x: p.x().clone(),
        config,
        norm_sq: report.norm_sq,
        bounded: report.bounded,
        cyclic_sufficient: report.cyclic_sufficient,
        residuals_zero,
        tail_certified: report.tail_certified,
        moments,
        closed_form_agrees,
        oracle_agrees,
        hausdorff,
        confirmed,
    })
}

/// Default grid of the `D_4, D_5, D_6` plot: `x_max = 3/5`, 120 steps.
pub fn default_figure_grid() -> (Rat, usize) {
    (Rat::new(3.into(), 5.into()), 120)
}

/// Rows `(x_k, D_4(x_k), D_5(x_k), D_6(x_k))` on `x_k = k x_max / steps`.
pub fn figure_rows(x_max: &Rat, steps: usize) -> Result<Vec<[Rat; 4]>, FamilyError> {
    if steps == 0 || !x_max.is_positive() {
        return Err(FamilyError::Scan("figure needs x_max > 0 and steps >= 1".into()));
    }
    let sym = build_symbolics(6, 6)?;
    let step = x_max / Rat::from_integer(BigInt::from(steps));
    (1..=steps)
        .into_par_iter()
        .map(|k| {
            let x = &step * Rat::from_integer(BigInt::from(k));
            Ok([
                x.clone(),
                d_eval(&sym.d[4], 4, &x)?,
                d_eval(&sym.d[5], 5, &x)?,
                d_eval(&sym.d[6], 6, &x)?,
            ])
        })
        .collect()
}

/// CSV with header `x,D4,D5,D6`: 12 significant digits, or exact `p/q` strings.
pub fn figure_csv(rows: &[[Rat; 4]], exact: bool) -> String {
    let mut out = String::from("x,D4,D5,D6\n");
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|v| if exact { fmt_rat(v) } else { to_decimal(v, 12) })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::moments::Witness;
    use crate::wco::two_isometry_check;

    fn param(n: i64, d: i64) -> FamilyParam {
        FamilyParam::new(rat(n, d)).unwrap()
    }

    #[test]
    fn weights_at_zero_are_isometric() {
        let w = family_weights(&param(0, 1));
        assert_eq!(w.prefix(5), vec![rat(1, 2), rat(1, 2), int(1), int(1), int(1)]);
        assert!((0..30).all(|n| crate::wco::h_of(&w, n).is_one()));
    }

    #[test]
    fn weights_at_half_follow_closed_tail() {
        let w = family_weights(&param(1, 2));
        assert_eq!(w.sq(2), rat(5, 4));
        assert_eq!(w.sq(3), rat(6, 5));
        assert_eq!(w.sq(4), rat(7, 6));
        let x = rat(1, 2);
        for n in 0..40usize {
            let k = Rat::from_integer(BigInt::from(n));
            let closed = (int(1) + (&k + int(3)) * &x) / (int(1) + (&k + int(2)) * &x);
            assert_eq!(w.sq(n + 2), closed);
        }
    }

    #[test]
    fn family_is_two_isometric() {
        for x in [rat(0, 1), rat(1, 100), rat(1, 10), rat(1, 2), int(3)] {
            let w = family_weights(&FamilyParam::new(x).unwrap());
            assert!(two_isometry_check(&w, 20).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn negative_parameter_rejected() {
        assert_eq!(FamilyParam::new(rat(-1, 3)), Err(FamilyError::NegativeParameter(rat(-1, 3))));
    }

    #[test]
    fn omega_values() {
        assert_eq!(omega_eval(0, &param(7, 3)).unwrap(), int(1));
        for x in [rat(1, 10), rat(2, 1), rat(5, 7)] {
            let p = FamilyParam::new(x.clone()).unwrap();
            assert_eq!(omega_eval(1, &p).unwrap(), (int(1) + x).recip());
        }
        for n in 0..12 {
            assert_eq!(omega_eval(n, &param(0, 1)).unwrap(), int(1));
        }
    }

    #[test]
    fn omega_domain() {
        assert!(omega_at(3, &rat(-1, 5)).is_ok());
        assert_eq!(omega_at(3, &rat(-1, 4)), Err(FamilyError::Domain { n: 3, x: rat(-1, 4) }));
    }

    #[test]
    fn symbolic_layer_conventions() {
        let sym = build_symbolics(6, 6).unwrap();
        assert_eq!(sym.omega[0], RatFn::one());
        assert!(sym.s[0].is_zero());
        assert_eq!(sym.d[0], RatFn::one());
        let s0: Vec<Rat> = sym.s.iter().map(|s| s.eval(&int(0)).unwrap()).collect();
        assert_eq!(s0, [0, 1, 3, 7, 15, 31, 63].iter().map(|&v| int(v)).collect::<Vec<_>>());
        for m in 1..=6 {
            assert!(sym.d[m].eval(&int(0)).unwrap().is_zero());
        }
        assert!(build_symbolics(3, 4).is_err());
    }

    #[test]
    fn symbolic_omega_matches_direct_sum() {
        let sym = build_symbolics(8, 8).unwrap();
        for x in [rat(1, 10), rat(-1, 20), rat(3, 2), rat(1, 1000)] {
            for n in 0..=8 {
                assert_eq!(sym.omega[n].eval(&x).unwrap(), omega_at(n, &x).unwrap());
            }
            for m in 0..=8 {
                let direct: Rat = (0..=m)
                    .map(|n| {
                        let c = Rat::from_integer(binomial(m as u32, n as u32));
                        let v = omega_at(n, &x).unwrap() * c;
                        if n % 2 == 0 { v } else { -v }
                    })
                    .sum();
                assert_eq!(d_eval(&sym.d[m], m, &x).unwrap(), direct);
            }
        }
    }

    #[test]
    fn fourth_derivative_examples() {
        assert_eq!(d_taylor(5, 4).unwrap(), vec![int(0), int(0), int(0), int(0), int(-9)]);
        assert_eq!(d_taylor(6, 4).unwrap()[4], rat(-9, 2));
        let d4 = d_taylor(4, 4).unwrap();
        assert!(d4[..4].iter().all(Zero::is_zero));
        assert_ne!(d4[4], rat(-288, 16));
        assert!(!d4[4].is_negative());
    }

    #[test]
    fn series_and_repeated_differentiation_agree() {
        for m in [4usize, 5] {
            let d = d_function(m);
            let series = d.derivatives_at_zero(4).unwrap();
            for (l, v) in series.iter().enumerate() {
                assert_eq!(&d.nth_derivative(l as u32).eval(&int(0)).unwrap(), v, "m={m} l={l}");
            }
        }
    }

    #[test]
    fn s_derivative_examples() {
        assert_eq!(s_derivatives_at_zero(1, 1).unwrap().value, int(-2));
        for l in 0..=4 {
            assert!(s_derivatives_at_zero(0, l).unwrap().value.is_zero());
        }
        assert_eq!(s_derivatives_at_zero(3, 0).unwrap().value, int(7));
        assert!(s_derivatives_at_zero(3, 5).unwrap().beyond_table);
        assert!(!s_derivatives_at_zero(3, 4).unwrap().beyond_table);
    }

    #[test]
    fn scans() {
        // D_5 < 0 only below x ~ 0.0034
        let r = sign_scan(5, &rat(1, 1000), 100).unwrap();
        assert!(r.all_negative());
        assert_eq!(r.negative_prefix_end, Some(rat(1, 1000)));
        assert_eq!(r.pattern(), "-".repeat(100));
        let r = sign_scan(4, &rat(1, 10), 100).unwrap();
        assert!(r.all_nonnegative());
        assert_eq!(r.negative_prefix_end, None);
        let r = sign_scan(0, &rat(1, 10), 10).unwrap();
        assert!(r.samples.iter().all(|(_, v)| v.is_one()));
        assert_eq!(r.bracket, None);
        assert!(sign_scan(5, &int(0), 10).is_err());
        assert!(sign_scan(5, &int(1), 0).is_err());
    }

    #[test]
    fn scan_brackets_first_crossing() {
        let x_max = rat(1, 100);
        let r = sign_scan(5, &x_max, 10).unwrap();
        let (a, b) = r.bracket.clone().expect("D5 changes sign on (0, 1/100]");
        assert!(&b - &a <= &x_max * two_pow(-10));
        let d5 = d_function(5);
        assert!(d5.eval(&a).unwrap().is_negative());
        assert!(!d5.eval(&b).unwrap().is_negative());
        assert_eq!(r.negative_prefix_end, Some(rat(3, 1000)));
        assert!(a > rat(3, 1000) && b < rat(4, 1000));
    }

    #[test]
    fn verdicts() {
        let v = counterexample_verdict(&param(1, 1000), VerdictConfig::default()).unwrap();
        assert!(v.confirmed, "{v}");
        assert_eq!(v.hausdorff.witness, Some(Witness::Difference { m: 5, j: 0 }));

        // at x = 1/10 the first violation sits at m = 9, beyond the default depth
        let v = counterexample_verdict(&param(1, 10), VerdictConfig::default()).unwrap();
        assert!(!v.confirmed);
        assert!(v.hausdorff.passed() && v.oracle_agrees && v.closed_form_agrees);
        let deep = VerdictConfig { depth: 12, ..VerdictConfig::default() };
        let v = counterexample_verdict(&param(1, 10), deep).unwrap();
        assert!(v.confirmed);
        assert_eq!(v.hausdorff.witness, Some(Witness::Difference { m: 9, j: 0 }));

        assert_eq!(
            counterexample_verdict(&param(0, 1), VerdictConfig::default()),
            Err(FamilyError::IsometricBoundary)
        );
    }

    #[test]
    fn csv_layout() {
        let rows = figure_rows(&rat(3, 5), 3).unwrap();
        let csv = figure_csv(&rows, true);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,D4,D5,D6"));
        assert_eq!(lines.next().unwrap().split(',').next(), Some("1/5"));
        assert_eq!(csv.lines().count(), 4);
        let dec = figure_csv(&rows, false);
        assert!(dec.lines().nth(1).unwrap().starts_with("0.200000000000,"));
    }
}
