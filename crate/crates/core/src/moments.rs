//! Necessary-condition tests for Hausdorff and Stieltjes moment sequences on
//! finite prefixes.
//!
//! A finite prefix can never certify that a sequence *is* a moment sequence.
//! `Pass` therefore means "no violation among the tested indices"; `Fail`
//! always comes with a witness whose value violates the tested inequality.
//!
//! Hausdorff: every iterated difference
//! `sum_{n=0}^{m} (-1)^n C(m,n) g_{n+j}` must be nonnegative.
//! Stieltjes: the Hankel matrices `(g_{i+j})` and `(g_{i+j+1})` must be
//! positive semidefinite.

use std::fmt;

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::scalar::{binomial, fmt_rat, parse_rat, to_f64, Rat, ScalarError};

/// Default absolute tolerance of the float backend.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl std::str::FromStr for Backend {
    type Err = MomentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(MomentError::UnknownBackend(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentError {
    #[error("prefix too short: need index {needed}, have entries up to {available}")]
    InsufficientPrefix { needed: usize, available: usize },
    #[error("empty sequence")]
    Empty,
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("Hankel order {order} needs 2*{order} <= N = {n}")]
    HankelOrder { order: usize, n: usize },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ScalarError },
    #[error("line {line}: cannot parse {text:?} as a number")]
    ParseFloat { line: usize, text: String },
    #[error("unknown backend {0:?} (expected exact or float)")]
    UnknownBackend(String),
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
}

/// A value produced by one of the two backends.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Float(f64),
}

impl Scalar {
    pub fn as_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => to_f64(r),
            Scalar::Float(v) => *v,
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Float(v) => write!(f, "{v:e}"),
        }
    }
}

/// Finite prefix `g_0..=g_N` of a real sequence on a single backend.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentSeq {
    Exact(Vec<Rat>),
    Float(Vec<f64>),
}

impl MomentSeq {
    pub fn exact(values: Vec<Rat>) -> Result<Self, MomentError> {
        if values.is_empty() {
            return Err(MomentError::Empty);
        }
        Ok(MomentSeq::Exact(values))
    }

    pub fn float(values: Vec<f64>) -> Result<Self, MomentError> {
        if values.is_empty() {
            return Err(MomentError::Empty);
        }
        Ok(MomentSeq::Float(values))
    }

    pub fn len(&self) -> usize {
        match self {
            MomentSeq::Exact(v) => v.len(),
            MomentSeq::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest available index `N`.
    pub fn last_index(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn backend(&self) -> Backend {
        match self {
            MomentSeq::Exact(_) => Backend::Exact,
            MomentSeq::Float(_) => Backend::Float,
        }
    }

    pub fn get(&self, i: usize) -> Option<Scalar> {
        match self {
            MomentSeq::Exact(v) => v.get(i).cloned().map(Scalar::Exact),
            MomentSeq::Float(v) => v.get(i).copied().map(Scalar::Float),
        }
    }

    pub fn to_float(&self) -> MomentSeq {
        match self {
            MomentSeq::Exact(v) => MomentSeq::Float(v.iter().map(to_f64).collect()),
            MomentSeq::Float(v) => MomentSeq::Float(v.clone()),
        }
    }

    /// The sequence `(g_{n+k})`.
    pub fn shifted(&self, k: usize) -> Result<MomentSeq, MomentError> {
        if k >= self.len() {
            return Err(MomentError::InsufficientPrefix { needed: k, available: self.last_index() });
        }
        Ok(match self {
            MomentSeq::Exact(v) => MomentSeq::Exact(v[k..].to_vec()),
            MomentSeq::Float(v) => MomentSeq::Float(v[k..].to_vec()),
        })
    }
}

/// Parses a sequence file: one value per line, `#` comments and blank lines ignored.
pub fn parse_sequence(text: &str, backend: Backend) -> Result<MomentSeq, MomentError> {
    let lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let seq = match backend {
        Backend::Exact => MomentSeq::Exact(
            lines
                .map(|(line, l)| parse_rat(l).map_err(|source| MomentError::Parse { line, source }))
                .collect::<Result<_, _>>()?,
        ),
        Backend::Float => MomentSeq::Float(
            lines
                .map(|(line, l)| parse_float(l).ok_or_else(|| MomentError::ParseFloat { line, text: l.to_string() }))
                .collect::<Result<_, _>>()?,
        ),
    };
    if seq.is_empty() {
        return Err(MomentError::Empty);
    }
    Ok(seq)
}

fn parse_float(s: &str) -> Option<f64> {
    if s.contains('/') {
        parse_rat(s).ok().map(|r| to_f64(&r))
    } else {
        s.parse::<f64>().ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Negative iterated difference of order `m` at shift `j`.
    Difference { m: usize, j: usize },
    /// Negative principal minor (exact) or eigenvalue (float) of the Hankel
    /// matrix `(g_{i+j+shift})_{i,j<=order}`.
    Hankel { shift: usize, order: usize, rows: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    Hausdorff,
    Stieltjes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentVerdict {
    pub kind: TestKind,
    pub status: Status,
    pub witness: Option<Witness>,
    pub detail: Option<Scalar>,
    /// Depth `M` (Hausdorff) or Hankel order `K` (Stieltjes) that was tested.
    pub depth: usize,
    /// Last index of the prefix that was available.
    pub n: usize,
}

impl MomentVerdict {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn pass(kind: TestKind, depth: usize, n: usize) -> Self {
        MomentVerdict { kind, status: Status::Pass, witness: None, detail: None, depth, n }
    }

    fn fail(kind: TestKind, witness: Witness, value: Scalar, depth: usize, n: usize) -> Self {
        MomentVerdict { kind, status: Status::Fail, witness: Some(witness), detail: Some(value), depth, n }
    }
}

impl fmt::Display for MomentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.status, &self.witness, &self.detail) {
            (Status::Pass, _, _) => write!(f, "PASS depth={} n={}", self.depth, self.n),
            (Status::Fail, Some(Witness::Difference { m, j }), Some(v)) => {
                write!(f, "FAIL m={m} j={j} value={v}")
            }
            (Status::Fail, Some(Witness::Hankel { shift, order, rows }), Some(v)) => {
                let rows: Vec<String> = rows.iter().map(ToString::to_string).collect();
                write!(f, "FAIL k={order} shift={shift} rows={} value={v}", rows.join(","))
            }
            _ => write!(f, "FAIL"),
        }
    }
}

/// `sum_{n=0}^{m} (-1)^n C(m, n) g_{n+j}`.
pub fn diff_transform(seq: &MomentSeq, m: usize, j: usize) -> Result<Scalar, MomentError> {
    let needed = m + j;
    if needed > seq.last_index() {
        return Err(MomentError::InsufficientPrefix { needed, available: seq.last_index() });
    }
    let m32 = m as u32;
    Ok(match seq {
        MomentSeq::Exact(v) => {
            let mut acc = Rat::zero();
            for n in 0..=m {
                let term = &v[n + j] * Rat::from_integer(binomial(m32, n as u32));
                if n % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            Scalar::Exact(acc)
        }
        MomentSeq::Float(v) => {
            let mut acc = 0.0;
            let mut c = 1.0f64;
            for n in 0..=m {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * c * v[n + j];
                c = c * (m - n) as f64 / (n + 1) as f64;
            }
            Scalar::Float(acc)
        }
    })
}

/// Hausdorff test to depth `depth` over the whole prefix.
pub fn hausdorff_test(seq: &MomentSeq, depth: usize) -> Result<MomentVerdict, MomentError> {
    hausdorff_test_with(seq, depth, None, DEFAULT_TOLERANCE)
}

/// Checks every difference of order `m <= depth` at every shift `j` with
/// `j + m <= min(N, j_cap)`. The first violation in `(m, j)` order is reported.
///
/// `tolerance` applies to the float backend only: values `>= -tolerance` pass.
pub fn hausdorff_test_with(
    seq: &MomentSeq,
    depth: usize,
    j_cap: Option<usize>,
    tolerance: f64,
) -> Result<MomentVerdict, MomentError> {
    if depth == 0 {
        return Err(MomentError::ZeroDepth);
    }
    if seq.is_empty() {
        return Err(MomentError::Empty);
    }
    let n = seq.last_index();
    let limit = j_cap.map_or(n, |c| c.min(n));
    let kind = TestKind::Hausdorff;
    // row m of the difference table holds (Delta^m g)_j for j = 0..=limit-m,
    // where (Delta g)_j = g_j - g_{j+1}
    match seq {
        MomentSeq::Exact(v) => {
            let mut row: Vec<Rat> = v[..=limit].to_vec();
            for m in 0..=depth.min(limit) {
                if m > 0 {
                    row = row.windows(2).map(|w| &w[0] - &w[1]).collect();
                }
                if let Some((j, val)) = row.iter().enumerate().find(|(_, x)| x.is_negative()) {
                    return Ok(MomentVerdict::fail(
                        kind,
                        Witness::Difference { m, j },
                        Scalar::Exact(val.clone()),
                        depth,
                        n,
                    ));
                }
            }
        }
        MomentSeq::Float(v) => {
            if tolerance.is_nan() || tolerance <= 0.0 {
                return Err(MomentError::Tolerance(tolerance));
            }
            let mut row: Vec<f64> = v[..=limit].to_vec();
            for m in 0..=depth.min(limit) {
                if m > 0 {
                    row = row.windows(2).map(|w| w[0] - w[1]).collect();
                }
                if let Some((j, val)) = row.iter().enumerate().find(|(_, x)| **x < -tolerance) {
                    return Ok(MomentVerdict::fail(
                        kind,
                        Witness::Difference { m, j },
                        Scalar::Float(*val),
                        depth,
                        n,
                    ));
                }
            }
        }
    }
    Ok(MomentVerdict::pass(kind, depth, n))
}

pub fn stieltjes_test(seq: &MomentSeq, order: usize) -> Result<MomentVerdict, MomentError> {
    stieltjes_test_with(seq, order, DEFAULT_TOLERANCE)
}

/// Positive semidefiniteness of `(g_{i+j})_{i,j<=K}` and of the shifted
/// Hankel matrix `(g_{i+j+1})`, the latter truncated to the largest order the
/// prefix supports (at most `K`).
///
/// Exact backend: leading principal minors; if one vanishes and none is
/// negative, every principal minor is examined. Float backend: smallest
/// eigenvalue against `-tolerance`.
pub fn stieltjes_test_with(
    seq: &MomentSeq,
    order: usize,
    tolerance: f64,
) -> Result<MomentVerdict, MomentError> {
    let n = seq.last_index();
    if 2 * order > n || seq.is_empty() {
        return Err(MomentError::HankelOrder { order, n });
    }
    let kind = TestKind::Stieltjes;
    let shifted_order = if n >= 1 { order.min((n - 1) / 2) } else { 0 };
    let blocks: Vec<(usize, usize)> = if n >= 1 {
        vec![(0, order), (1, shifted_order)]
    } else {
        vec![(0, order)]
    };
    match seq {
        MomentSeq::Exact(v) => {
            for (shift, k) in blocks {
                let h = hankel_exact(v, shift, k);
                if let Some((rows, minor)) = negative_principal_minor(&h) {
                    return Ok(MomentVerdict::fail(
                        kind,
                        Witness::Hankel { shift, order: k, rows },
                        Scalar::Exact(minor),
                        order,
                        n,
                    ));
                }
            }
        }
        MomentSeq::Float(v) => {
            if tolerance.is_nan() || tolerance <= 0.0 {
                return Err(MomentError::Tolerance(tolerance));
            }
            for (shift, k) in blocks {
                let h = DMatrix::from_fn(k + 1, k + 1, |i, j| v[i + j + shift]);
                let eig = h.symmetric_eigenvalues();
                let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
                if min < -tolerance {
                    return Ok(MomentVerdict::fail(
                        kind,
                        Witness::Hankel { shift, order: k, rows: (0..=k).collect() },
                        Scalar::Float(min),
                        order,
                        n,
                    ));
                }
            }
        }
    }
    Ok(MomentVerdict::pass(kind, order, n))
}

fn hankel_exact(v: &[Rat], shift: usize, k: usize) -> Vec<Vec<Rat>> {
    (0..=k)
        .map(|i| (0..=k).map(|j| v[i + j + shift].clone()).collect())
        .collect()
}

/// Returns a principal minor that is negative, if any.
///
/// Leading minors are tried first; all positive means positive definite.
/// A zero leading minor falls through to the sweep over every index subset,
/// ordered by size and then lexicographically.
fn negative_principal_minor(h: &[Vec<Rat>]) -> Option<(Vec<usize>, Rat)> {
    let size = h.len();
    let mut saw_zero = false;
    for s in 1..=size {
        let rows: Vec<usize> = (0..s).collect();
        let d = determinant(&submatrix(h, &rows));
        if d.is_negative() {
            return Some((rows, d));
        }
        saw_zero |= d.is_zero();
    }
    if !saw_zero {
        return None;
    }
    for s in 1..=size {
        for rows in subsets(size, s) {
            let d = determinant(&submatrix(h, &rows));
            if d.is_negative() {
                return Some((rows, d));
            }
        }
    }
    None
}

fn submatrix(h: &[Vec<Rat>], rows: &[usize]) -> Vec<Vec<Rat>> {
    rows.iter()
        .map(|&i| rows.iter().map(|&j| h[i][j].clone()).collect())
        .collect()
}

/// k-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
        }
        cur[i] += 1;
        for t in i + 1..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

/// Exact determinant by Gaussian elimination with row pivoting.
pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::from_integer(1.into());
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            let (upper, lower) = a.split_at_mut(r);
            for (dst, src) in lower[0][col..n].iter_mut().zip(&upper[col][col..n]) {
                *dst -= &factor * src;
            }
        }
    }
    det
}

/// True iff every entry is at most `bound`.
pub fn boundedness_check(seq: &MomentSeq, bound: &Scalar) -> bool {
    match seq {
        MomentSeq::Exact(v) => match bound {
            Scalar::Exact(b) => v.iter().all(|x| x <= b),
            Scalar::Float(b) => v.iter().all(|x| to_f64(x) <= *b),
        },
        MomentSeq::Float(v) => {
            let b = bound.as_f64();
            v.iter().all(|x| *x <= b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn exact(v: Vec<Rat>) -> MomentSeq {
        MomentSeq::exact(v).unwrap()
    }

    #[test]
    fn differences_of_simple_sequences() {
        let ones = exact(vec![int(1); 6]);
        assert_eq!(diff_transform(&ones, 3, 0).unwrap(), Scalar::Exact(int(0)));
        let delta = exact(vec![int(1), int(0), int(0), int(0)]);
        assert_eq!(diff_transform(&delta, 2, 0).unwrap(), Scalar::Exact(int(1)));
        let geo = exact((0..6).map(|n| crate::scalar::two_pow(-n)).collect());
        assert_eq!(diff_transform(&geo, 2, 1).unwrap(), Scalar::Exact(rat(1, 8)));
        assert_eq!(
            diff_transform(&geo, 4, 2),
            Err(MomentError::InsufficientPrefix { needed: 6, available: 5 })
        );
    }

    #[test]
    fn uniform_moments_pass_hausdorff() {
        let seq = exact((0..=12).map(|n| rat(1, n + 1)).collect());
        let v = hausdorff_test(&seq, 6).unwrap();
        assert!(v.passed());
        assert_eq!(v.to_string(), "PASS depth=6 n=12");
    }

    #[test]
    fn increasing_sequence_fails_monotonicity() {
        let seq = exact((0..=4).map(crate::scalar::two_pow).collect());
        let v = hausdorff_test(&seq, 1).unwrap();
        assert_eq!(v.witness, Some(Witness::Difference { m: 1, j: 0 }));
        assert_eq!(v.detail, Some(Scalar::Exact(int(-1))));
        assert_eq!(v.to_string(), "FAIL m=1 j=0 value=-1");
    }

    #[test]
    fn hausdorff_respects_j_cap_and_depth() {
        // violation only at j = 3, m = 1
        let seq = exact(vec![int(4), int(3), int(2), int(1), int(2)]);
        let capped = hausdorff_test_with(&seq, 1, Some(3), DEFAULT_TOLERANCE).unwrap();
        assert!(capped.passed());
        let full = hausdorff_test(&seq, 1).unwrap();
        assert_eq!(full.witness, Some(Witness::Difference { m: 1, j: 3 }));
        assert_eq!(hausdorff_test(&seq, 0), Err(MomentError::ZeroDepth));
    }

    #[test]
    fn exponential_moments_pass_stieltjes() {
        let mut f = int(1);
        let mut v = vec![f.clone()];
        for n in 1..=8 {
            f *= int(n);
            v.push(f.clone());
        }
        let verdict = stieltjes_test(&exact(v.clone()), 4).unwrap();
        assert!(verdict.passed(), "{verdict}");
        let float = stieltjes_test(&MomentSeq::Exact(v).to_float(), 4).unwrap();
        assert!(float.passed());
    }

    #[test]
    fn alternating_zeros_fail_shifted_hankel() {
        let v: Vec<Rat> = (0..6).map(|n| if n % 2 == 0 { int(1) } else { int(0) }).collect();
        let verdict = stieltjes_test(&exact(v.clone()), 1).unwrap();
        assert_eq!(verdict.witness, Some(Witness::Hankel { shift: 1, order: 1, rows: vec![0, 1] }));
        assert_eq!(verdict.detail, Some(Scalar::Exact(int(-1))));
        let float = stieltjes_test(&MomentSeq::Exact(v).to_float(), 1).unwrap();
        assert_eq!(float.status, Status::Fail);
    }

    #[test]
    fn zero_leading_minor_triggers_full_sweep() {
        // H = [[0,0],[0,-1]] : leading minors 0, 0 but the (1,1) entry is negative
        let v = vec![int(0), int(0), int(-1)];
        let verdict = stieltjes_test(&exact(v), 1).unwrap();
        assert_eq!(verdict.witness, Some(Witness::Hankel { shift: 0, order: 1, rows: vec![1] }));
        // singular PSD matrix passes: constant sequence
        let verdict = stieltjes_test(&exact(vec![int(1); 7]), 3).unwrap();
        assert!(verdict.passed());
    }

    #[test]
    fn hankel_order_precondition() {
        assert_eq!(
            stieltjes_test(&exact(vec![int(1); 4]), 2),
            Err(MomentError::HankelOrder { order: 2, n: 3 })
        );
    }

    #[test]
    fn bounds() {
        assert!(boundedness_check(&exact(vec![int(1); 5]), &Scalar::Exact(int(1))));
        let pow2 = exact((0..=4).map(crate::scalar::two_pow).collect());
        assert!(!boundedness_check(&pow2, &Scalar::Exact(int(1))));
        assert!(!boundedness_check(&pow2.to_float(), &Scalar::Float(1.0)));
    }

    #[test]
    fn sequence_file_parsing() {
        let text = "# moments\n1\n1/2\n\n0.25 \n# end\n";
        let seq = parse_sequence(text, Backend::Exact).unwrap();
        assert_eq!(seq, exact(vec![int(1), rat(1, 2), rat(1, 4)]));
        let f = parse_sequence(text, Backend::Float).unwrap();
        assert_eq!(f, MomentSeq::Float(vec![1.0, 0.5, 0.25]));
        assert!(matches!(
            parse_sequence("1\nx\n", Backend::Exact),
            Err(MomentError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_sequence("1\nx\n", Backend::Float),
            Err(MomentError::ParseFloat { line: 2, .. })
        ));
        assert_eq!(parse_sequence("# nothing\n", Backend::Exact), Err(MomentError::Empty));
    }

    #[test]
    fn subsets_in_lexicographic_order() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(2, 3), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn determinant_with_pivoting() {
        let m = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(determinant(&m), int(-1));
        let m = vec![
            vec![int(2), int(1), int(0)],
            vec![int(1), int(2), int(1)],
            vec![int(0), int(1), int(2)],
        ];
        assert_eq!(determinant(&m), int(4));
    }
}
