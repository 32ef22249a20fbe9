//! Core toric-model types: polytopes, design matrices, data, binomials,
//! monomial parametrization, likelihood and Birch residuals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, rational_to_f64, Rational, Scalar};

/// An ordered list of distinct lattice points; the order fixes variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolytope {
    points: Vec<Vec<i64>>,
}

impl LatticePolytope {
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidArgument("polytope needs at least one point".into()));
        };
        let dim = first.len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Dimension("points have differing dimensions".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidArgument(format!("duplicate lattice point {p:?}")));
            }
        }
        Ok(LatticePolytope { points })
    }

    /// Skips validation; callers guarantee distinct points of equal length.
    pub(crate) fn from_distinct(points: Vec<Vec<i64>>) -> Self {
        LatticePolytope { points }
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, point: &[i64]) -> Option<usize> {
        self.points.iter().position(|p| p == point)
    }
}

/// Integer exponent matrix; columns are the lattice points. The homogenizing
/// all-ones row is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<i64>>,
}

impl DesignMatrix {
    pub fn from_rows(entries: Vec<Vec<i64>>, cols: usize) -> Result<Self> {
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged design matrix".into()));
        }
        Ok(DesignMatrix { rows: entries.len(), cols, entries })
    }

    pub fn from_columns(columns: &[Vec<i64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns have differing lengths".into()));
        }
        let entries = (0..rows).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        Ok(DesignMatrix { rows, cols: columns.len(), entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.entries.iter().map(|r| r[j]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// `A v` over any scalar type.
    pub fn apply<T: Scalar>(&self, v: &[T]) -> Vec<T> {
        self.entries
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, _)| **a != 0)
                    .fold(T::zero(), |acc, (a, x)| acc + T::from_i64(*a) * x.clone())
            })
            .collect()
    }

    pub fn apply_f64(&self, v: &[f64]) -> Vec<f64> {
        self.entries.iter().map(|r| r.iter().zip(v).map(|(a, x)| *a as f64 * x).sum()).collect()
    }
}

pub fn polytope_to_matrix(q: &LatticePolytope) -> DesignMatrix {
    DesignMatrix::from_columns(q.points()).expect("polytope points share a dimension")
}

/// Nonnegative integer counts with positive total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataVector {
    counts: Vec<u64>,
}

impl DataVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::InvalidArgument("data total must be positive".into()));
        }
        Ok(DataVector { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.counts.iter().map(|&c| Rational::from_integer(c.into())).collect()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64).collect()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.counts.iter().all(|&c| c > 0)
    }

    /// `u / u_+` exactly.
    pub fn normalized(&self) -> Vec<Rational> {
        let t = Rational::from_integer(self.total().into());
        self.as_rationals().into_iter().map(|x| x / &t).collect()
    }
}

/// Nonzero rational coefficients `c_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scaling {
    values: Vec<Rational>,
}

impl Scaling {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(j) = values.iter().position(Zero::is_zero) {
            return Err(Error::InvalidArgument(format!("scaling entry {j} is zero")));
        }
        Ok(Scaling { values })
    }

    pub fn ones(n: usize) -> Self {
        Scaling { values: vec![int(1); n] }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, lambda: &Rational) -> Result<Self> {
        Scaling::new(self.values.iter().map(|v| v * lambda).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Exact,
    Float,
}

/// A point of the simplex, tagged exact or float.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbVector {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl ProbVector {
    /// Requires an exact sum of one.
    pub fn exact(values: Vec<Rational>) -> Result<Self> {
        let s: Rational = values.iter().fold(Rational::zero(), |a, b| a + b);
        if !s.is_one() {
            return Err(Error::InvalidArgument(format!("entries sum to {s}, not 1")));
        }
        Ok(ProbVector::Exact(values))
    }

    /// Requires the sum to be within `tol` of one.
    pub fn float(values: Vec<f64>, tol: f64) -> Result<Self> {
        let s: f64 = values.iter().sum();
        if (s - 1.0).abs() > tol || values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!("entries sum to {s}, not 1")));
        }
        Ok(ProbVector::Float(values))
    }

    pub fn representation(&self) -> Representation {
        match self {
            ProbVector::Exact(_) => Representation::Exact,
            ProbVector::Float(_) => Representation::Float,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ProbVector::Exact(v) => v.len(),
            ProbVector::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            ProbVector::Exact(v) => v.iter().map(rational_to_f64).collect(),
            ProbVector::Float(v) => v.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&[Rational]> {
        match self {
            ProbVector::Exact(v) => Some(v),
            ProbVector::Float(_) => None,
        }
    }

    pub fn is_distribution(&self) -> bool {
        match self {
            ProbVector::Exact(v) => v.iter().all(|x| !x.is_negative()),
            ProbVector::Float(v) => v.iter().all(|&x| x >= 0.0),
        }
    }
}

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn new(factors: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *acc.entry(v).or_default() += e;
            }
        }
        Monomial(acc.into_iter().collect())
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|(v, _)| *v)
    }

    pub fn evaluate<T: Scalar>(&self, p: &[T]) -> T {
        self.0.iter().fold(T::one(), |acc, (v, e)| acc * p[*v].pow_int(*e as i64))
    }

    pub fn relabel(&self, map: &[usize]) -> Monomial {
        Monomial::new(self.0.iter().map(|(v, e)| (map[*v], *e)))
    }
}

/// `lhs - rhs`; homogeneous by construction. Equal sides encode the zero binomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binomial {
    lhs: Monomial,
    rhs: Monomial,
}

impl Binomial {
    pub fn new(lhs: Monomial, rhs: Monomial) -> Result<Self> {
        if lhs.degree() != rhs.degree() {
            return Err(Error::InvalidArgument(format!(
                "binomial is not homogeneous: degrees {} and {}",
                lhs.degree(),
                rhs.degree()
            )));
        }
        Ok(Binomial { lhs, rhs })
    }

    pub fn zero() -> Self {
        Binomial { lhs: Monomial::default(), rhs: Monomial::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn lhs(&self) -> &Monomial {
        &self.lhs
    }

    pub fn rhs(&self) -> &Monomial {
        &self.rhs
    }

    pub fn degree(&self) -> u32 {
        self.lhs.degree()
    }

    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.lhs.max_var().max(self.rhs.max_var())
    }

    pub fn evaluate<T: Scalar>(&self, p: &[T]) -> T {
        self.lhs.evaluate(p) - self.rhs.evaluate(p)
    }

    /// `|m1 - m2| / max(|m1|, |m2|)`, zero when both monomials vanish.
    pub fn scaled_residual<T: Scalar>(&self, p: &[T]) -> f64 {
        let a = self.lhs.evaluate(p);
        let b = self.rhs.evaluate(p);
        let diff = a.clone() - b.clone();
        if diff.is_zero() {
            return 0.0;
        }
        let scale = a.abs_f64().max(b.abs_f64());
        if scale == 0.0 {
            diff.abs_f64()
        } else {
            diff.abs_f64() / scale
        }
    }

    /// Renames variable `v` to `map[v]`.
    pub fn relabel(&self, map: &[usize]) -> Binomial {
        Binomial { lhs: self.lhs.relabel(map), rhs: self.rhs.relabel(map) }
    }

    /// The same binomial up to sign, with sides in a canonical order.
    pub fn canonical(&self) -> Binomial {
        if self.lhs <= self.rhs {
            self.clone()
        } else {
            Binomial { lhs: self.rhs.clone(), rhs: self.lhs.clone() }
        }
    }

    /// Parses text such as `p1p2p3-p4^3` (1-indexed variables).
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.replace('\u{2212}', "-");
        let (l, r) = s
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("binomial `{s}` has no minus sign")))?;
        Binomial::new(parse_monomial(l)?, parse_monomial(r)?)
    }

    pub fn fmt_with<F: Fn(usize) -> String>(&self, name: F) -> String {
        let side = |m: &Monomial| {
            if m.0.is_empty() {
                return "1".to_string();
            }
            m.0.iter()
                .map(|(v, e)| if *e == 1 { name(*v) } else { format!("{}^{}", name(*v), e) })
                .collect::<Vec<_>>()
                .join("*")
        };
        if self.is_zero() {
            "0".into()
        } else {
            format!("{} - {}", side(&self.lhs), side(&self.rhs))
        }
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(|v| format!("p{}", v + 1)))
    }
}

fn parse_monomial(s: &str) -> Result<Monomial> {
    let bad = || Error::Parse(format!("bad monomial `{s}`"));
    let mut factors = Vec::new();
    for part in s.split('p').skip(1) {
        let part = part.trim_end_matches('*');
        let (v, e) = match part.split_once('^') {
            Some((v, e)) => (v, e.parse::<u32>().map_err(|_| bad())?),
            None => (part, 1),
        };
        let v: usize = v.parse().map_err(|_| bad())?;
        if v == 0 {
            return Err(bad());
        }
        factors.push((v - 1, e));
    }
    if factors.is_empty() || !s.starts_with('p') {
        return Err(bad());
    }
    Ok(Monomial::new(factors))
}

/// `c_j * s * theta^{a_j}` for every column.
pub fn parametrize<T: Scalar>(a: &DesignMatrix, c: &[T], s: &T, theta: &[T]) -> Result<Vec<T>> {
    if theta.len() != a.rows() || c.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "matrix is {}x{}, scaling has {} entries, theta has {}",
            a.rows(),
            a.cols(),
            c.len(),
            theta.len()
        )));
    }
    (0..a.cols())
        .map(|j| {
            let mut v = c[j].clone() * s.clone();
            for (i, t) in theta.iter().enumerate() {
                let e = a.entry(i, j);
                if e < 0 && t.is_zero() {
                    return Err(Error::Domain(format!("theta_{} = 0 with negative exponent", i + 1)));
                }
                if e != 0 {
                    v = v * t.pow_int(e);
                }
            }
            Ok(v)
        })
        .collect()
}

/// `sum u_j log p_j - u_+ log(sum p_j)`; minus infinity when a positive count
/// meets a zero probability.
pub fn log_likelihood(p: &[f64], u: &DataVector) -> f64 {
    let total: f64 = p.iter().sum();
    let mut ll = 0.0;
    for (&pj, &uj) in p.iter().zip(u.counts()) {
        if uj == 0 {
            continue;
        }
        if pj <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ll += uj as f64 * pj.ln();
    }
    ll - u.total() as f64 * total.ln()
}

/// Deviations from the Birch conditions and from the variety.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirchResidual {
    /// `|sum p - 1|`
    pub sum: f64,
    /// `max_i |(A p)_i - (A u)_i / u_+|`
    pub sufficient: f64,
    /// largest scaled generator value
    pub generators: f64,
}

impl BirchResidual {
    pub fn max(&self) -> f64 {
        self.sum.max(self.sufficient).max(self.generators)
    }

    pub fn is_zero(&self) -> bool {
        self.max() == 0.0
    }
}

pub fn birch_residual(
    p: &ProbVector,
    u: &DataVector,
    a: &DesignMatrix,
    gens: &[Binomial],
) -> Result<BirchResidual> {
    match p {
        ProbVector::Exact(v) => birch_residual_generic(v, u, a, gens),
        ProbVector::Float(v) => birch_residual_generic(v, u, a, gens),
    }
}

pub fn birch_residual_generic<T: Scalar>(
    p: &[T],
    u: &DataVector,
    a: &DesignMatrix,
    gens: &[Binomial],
) -> Result<BirchResidual> {
    if p.len() != a.cols() || u.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "matrix has {} columns, p has {}, u has {}",
            a.cols(),
            p.len(),
            u.len()
        )));
    }
    if let Some(g) = gens.iter().find(|g| g.max_var().is_some_and(|v| v >= p.len())) {
        return Err(Error::Dimension(format!("generator {g} uses a variable out of range")));
    }
    let sum = p.iter().cloned().fold(T::zero(), |acc, x| acc + x) - T::one();
    let total = T::from_i64(u.total() as i64);
    let uu: Vec<T> = u.counts().iter().map(|&c| T::from_i64(c as i64)).collect();
    let ap = a.apply(p);
    let au = a.apply(&uu);
    let sufficient = ap
        .into_iter()
        .zip(au)
        .map(|(x, y)| (x - y / total.clone()).abs_f64())
        .fold(0.0, f64::max);
    let generators = gens.iter().map(|g| g.scaled_residual(p)).fold(0.0, f64::max);
    Ok(BirchResidual { sum: sum.abs_f64(), sufficient, generators })
}
