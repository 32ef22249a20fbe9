//! Codimension-zero toric fiber products: generators from Lift and Quad,
//! marginals, and composition of critical points.
//!
//! Variables `x^i_j`, `y^i_k` and `z^i_{jk}` are flattened lexicographically
//! by `(i, j)`, `(i, k)` and `(i, j, k)`.

use std::collections::HashSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{Binomial, DesignMatrix, Monomial};
use crate::rational::{int, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedConfig {
    /// Grading vectors `a^i`.
    pub grading: Vec<Vec<i64>>,
    /// `b[i][j]`, the configuration of the first factor.
    pub b: Vec<Vec<Vec<i64>>>,
    /// `c[i][k]`, the configuration of the second factor.
    pub c: Vec<Vec<Vec<i64>>>,
    /// Projection with `pi1 b^i_j = a^i`.
    pub pi1: Vec<Vec<i64>>,
    /// Projection with `pi2 c^i_k = a^i`.
    pub pi2: Vec<Vec<i64>>,
}

fn project(pi: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    pi.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

impl GradedConfig {
    pub fn new(
        grading: Vec<Vec<i64>>,
        b: Vec<Vec<Vec<i64>>>,
        c: Vec<Vec<Vec<i64>>>,
        pi1: Vec<Vec<i64>>,
        pi2: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let cfg = GradedConfig { grading, b, c, pi1, pi2 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.grading.len();
        if r == 0 {
            return Err(Error::InvalidConfig("no grading vectors".into()));
        }
        if self.b.len() != r || self.c.len() != r {
            return Err(Error::InvalidConfig("B and C must have one block per grading vector".into()));
        }
        let d = self.grading[0].len();
        if self.grading.iter().any(|a| a.len() != d) {
            return Err(Error::InvalidConfig("grading vectors differ in length".into()));
        }
        if self.pi1.len() != d || self.pi2.len() != d {
            return Err(Error::InvalidConfig("projections must have one row per grading coordinate".into()));
        }
        for (name, blocks, pi) in [("B", &self.b, &self.pi1), ("C", &self.c, &self.pi2)] {
            let dim = pi.first().map_or(0, Vec::len);
            if pi.iter().any(|row| row.len() != dim) {
                return Err(Error::InvalidConfig(format!("ragged projection for {name}")));
            }
            for (i, block) in blocks.iter().enumerate() {
                if block.is_empty() {
                    return Err(Error::InvalidConfig(format!("{name} block {i} is empty")));
                }
                for v in block {
                    if v.len() != dim {
                        return Err(Error::InvalidConfig(format!("{name} vector {v:?} has wrong length")));
                    }
                    if project(pi, v) != self.grading[i] {
                        return Err(Error::InvalidConfig(format!(
                            "{name} vector {v:?} does not project to grading vector {i}"
                        )));
                    }
                }
            }
        }
        let a = linalg::from_i64(&self.grading);
        if linalg::rank(&a) != r {
            return Err(Error::InvalidConfig("grading vectors are linearly dependent".into()));
        }
        // some rational omega with omega . a^i = 1 for all i
        if linalg::solve(&a, &vec![int(1); r]).is_none() {
            return Err(Error::InvalidConfig("grading is not standard (no omega with omega.a = 1)".into()));
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.grading.len()
    }

    pub fn s(&self, i: usize) -> usize {
        self.b[i].len()
    }

    pub fn t(&self, i: usize) -> usize {
        self.c[i].len()
    }

    pub fn shape(&self) -> Shape {
        Shape { s: self.b.iter().map(Vec::len).collect(), t: self.c.iter().map(Vec::len).collect() }
    }

    pub fn b_matrix(&self) -> DesignMatrix {
        let cols: Vec<Vec<i64>> = self.b.iter().flatten().cloned().collect();
        DesignMatrix::from_columns(&cols).expect("validated lengths")
    }

    pub fn c_matrix(&self) -> DesignMatrix {
        let cols: Vec<Vec<i64>> = self.c.iter().flatten().cloned().collect();
        DesignMatrix::from_columns(&cols).expect("validated lengths")
    }
}

/// Index ranges `s_i`, `t_i` and the flattening of x, y and z variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

impl Shape {
    pub fn r(&self) -> usize {
        self.s.len()
    }

    pub fn x_count(&self) -> usize {
        self.s.iter().sum()
    }

    pub fn y_count(&self) -> usize {
        self.t.iter().sum()
    }

    pub fn z_count(&self) -> usize {
        self.s.iter().zip(&self.t).map(|(s, t)| s * t).sum()
    }

    pub fn x_index(&self, i: usize, j: usize) -> usize {
        self.s[..i].iter().sum::<usize>() + j
    }

    pub fn y_index(&self, i: usize, k: usize) -> usize {
        self.t[..i].iter().sum::<usize>() + k
    }

    pub fn z_index(&self, i: usize, j: usize, k: usize) -> usize {
        self.s[..i].iter().zip(&self.t[..i]).map(|(s, t)| s * t).sum::<usize>() + j * self.t[i] + k
    }

    pub fn x_of(&self, mut flat: usize) -> Option<(usize, usize)> {
        for (i, &s) in self.s.iter().enumerate() {
            if flat < s {
                return Some((i, flat));
            }
            flat -= s;
        }
        None
    }

    pub fn y_of(&self, mut flat: usize) -> Option<(usize, usize)> {
        for (i, &t) in self.t.iter().enumerate() {
            if flat < t {
                return Some((i, flat));
            }
            flat -= t;
        }
        None
    }

    pub fn z_of(&self, mut flat: usize) -> Option<(usize, usize, usize)> {
        for i in 0..self.r() {
            let block = self.s[i] * self.t[i];
            if flat < block {
                return Some((i, flat / self.t[i], flat % self.t[i]));
            }
            flat -= block;
        }
        None
    }
}

/// Which factor a generator set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// Generators of `I_B` over the `x^i_j`.
    B,
    /// Generators of `I_C` over the `y^i_k`.
    C,
}

fn expand(m: &Monomial, of: impl Fn(usize) -> Option<(usize, usize)>) -> Result<Vec<(usize, usize)>> {
    let mut v = Vec::new();
    for &(var, e) in m.factors() {
        let ij = of(var).ok_or_else(|| Error::Dimension(format!("variable {var} out of range")))?;
        v.extend(std::iter::repeat_n(ij, e as usize));
    }
    v.sort_unstable();
    Ok(v)
}

/// `Lift(f)`: one binomial in the z-variables per choice of the free indices.
pub fn lift(f: &Binomial, shape: &Shape, factor: Factor) -> Result<Vec<Binomial>> {
    if f.is_zero() {
        return Ok(vec![Binomial::zero()]);
    }
    let of = |v: usize| match factor {
        Factor::B => shape.x_of(v),
        Factor::C => shape.y_of(v),
    };
    let lhs = expand(f.lhs(), of)?;
    let rhs = expand(f.rhs(), of)?;
    let classes: Vec<usize> = lhs.iter().map(|p| p.0).collect();
    if classes != rhs.iter().map(|p| p.0).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!(
            "binomial {f} is not homogeneous for the grading"
        )));
    }
    let free: Vec<usize> = classes
        .iter()
        .map(|&i| match factor {
            Factor::B => shape.t[i],
            Factor::C => shape.s[i],
        })
        .collect();
    let z = |i: usize, own: usize, other: usize| match factor {
        Factor::B => shape.z_index(i, own, other),
        Factor::C => shape.z_index(i, other, own),
    };
    let mut out = Vec::new();
    let mut choice = vec![0usize; free.len()];
    loop {
        let side = |m: &[(usize, usize)]| {
            Monomial::new(m.iter().zip(&choice).map(|(&(i, own), &k)| (z(i, own, k), 1)))
        };
        out.push(Binomial::new(side(&lhs), side(&rhs))?);
        // odometer over the product of free index ranges
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < free[pos] {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// All `z^i_{j1 k1} z^i_{j2 k2} - z^i_{j1 k2} z^i_{j2 k1}` with `j1 < j2`, `k1 < k2`.
pub fn quad(shape: &Shape) -> Vec<Binomial> {
    let mut out = Vec::new();
    for i in 0..shape.r() {
        for j1 in 0..shape.s[i] {
            for j2 in j1 + 1..shape.s[i] {
                for k1 in 0..shape.t[i] {
                    for k2 in k1 + 1..shape.t[i] {
                        let z = |j, k| (shape.z_index(i, j, k), 1);
                        out.push(
                            Binomial::new(
                                Monomial::new([z(j1, k1), z(j2, k2)]),
                                Monomial::new([z(j1, k2), z(j2, k1)]),
                            )
                            .expect("quadrics are homogeneous"),
                        );
                    }
                }
            }
        }
    }
    out
}

/// `Lift(F) ∪ Lift(G) ∪ Quad` without zero binomials or duplicates (up to sign),
/// in order of first appearance.
pub fn generators(f: &[Binomial], g: &[Binomial], shape: &Shape) -> Result<Vec<Binomial>> {
    let mut all = Vec::new();
    for b in f {
        all.extend(lift(b, shape, Factor::B)?);
    }
    for b in g {
        all.extend(lift(b, shape, Factor::C)?);
    }
    all.extend(quad(shape));
    let mut seen = HashSet::new();
    Ok(all.into_iter().filter(|b| !b.is_zero() && seen.insert(b.canonical())).collect())
}

/// Entries `u^i_{jk}` in flattened order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TfpVector<T> {
    pub shape: Shape,
    pub values: Vec<T>,
}

impl<T: Scalar> TfpVector<T> {
    pub fn new(shape: Shape, values: Vec<T>) -> Result<Self> {
        if values.len() != shape.z_count() {
            return Err(Error::Dimension(format!(
                "expected {} entries, got {}",
                shape.z_count(),
                values.len()
            )));
        }
        Ok(TfpVector { shape, values })
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &T {
        &self.values[self.shape.z_index(i, j, k)]
    }

    /// The `s_i x t_i` slice for class `i`.
    pub fn slice(&self, i: usize) -> Vec<Vec<T>> {
        (0..self.shape.s[i]).map(|j| (0..self.shape.t[i]).map(|k| self.get(i, j, k).clone()).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marginals<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub c: Vec<T>,
}

pub fn marginals<T: Scalar>(u: &TfpVector<T>) -> Marginals<T> {
    let sh = &u.shape;
    let mut a = vec![T::zero(); sh.r()];
    let mut b = vec![T::zero(); sh.x_count()];
    let mut c = vec![T::zero(); sh.y_count()];
    for i in 0..sh.r() {
        for j in 0..sh.s[i] {
            for k in 0..sh.t[i] {
                let v = u.get(i, j, k).clone();
                a[i] = a[i].clone() + v.clone();
                let (xb, yc) = (sh.x_index(i, j), sh.y_index(i, k));
                b[xb] = b[xb].clone() + v.clone();
                c[yc] = c[yc].clone() + v;
            }
        }
    }
    Marginals { a, b, c }
}

/// `pbar^i_{jk} = pB^i_j pC^i_k / pA^i`.
pub fn compose_critical(
    shape: &Shape,
    pa: &[Rational],
    pb: &[Rational],
    pc: &[Rational],
) -> Result<TfpVector<Rational>> {
    if pa.len() != shape.r() || pb.len() != shape.x_count() || pc.len() != shape.y_count() {
        return Err(Error::Dimension("marginal vectors do not match the index ranges".into()));
    }
    for i in 0..shape.r() {
        if pa[i].is_zero() {
            return Err(Error::BoundaryData(format!("grading marginal {i} is zero")));
        }
        let sb: Rational = (0..shape.s[i]).map(|j| &pb[shape.x_index(i, j)]).sum();
        let sc: Rational = (0..shape.t[i]).map(|k| &pc[shape.y_index(i, k)]).sum();
        if sb != pa[i] || sc != pa[i] {
            return Err(Error::IncompatibleMarginals(format!(
                "class {i}: B sums to {sb}, C sums to {sc}, A has {}",
                pa[i]
            )));
        }
    }
    let mut values = Vec::with_capacity(shape.z_count());
    for i in 0..shape.r() {
        for j in 0..shape.s[i] {
            for k in 0..shape.t[i] {
                values.push(&pb[shape.x_index(i, j)] * &pc[shape.y_index(i, k)] / &pa[i]);
            }
        }
    }
    TfpVector::new(shape.clone(), values)
}

/// ML degree of a codimension-zero product.
pub fn mldeg_product(m_b: u64, m_c: u64) -> Result<u64> {
    if m_b == 0 || m_c == 0 {
        return Err(Error::InvalidArgument("ML degrees are at least one".into()));
    }
    m_b.checked_mul(m_c).ok_or_else(|| Error::InvalidArgument("ML degree overflow".into()))
}

/// Columns `(b^i_j, c^i_k)` in `(i, j, k)` order.
pub fn tfp_matrix(cfg: &GradedConfig) -> DesignMatrix {
    let mut cols = Vec::new();
    for i in 0..cfg.r() {
        for bj in &cfg.b[i] {
            for ck in &cfg.c[i] {
                cols.push([bj.clone(), ck.clone()].concat());
            }
        }
    }
    DesignMatrix::from_columns(&cols).expect("validated lengths")
}
