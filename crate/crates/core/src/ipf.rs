//! Generalized iterative scaling for the positive Birch point of a log-linear model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{log_likelihood, DataVector, DesignMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IpfConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Record the log-likelihood every this many iterations.
    pub trace_every: Option<usize>,
}

impl Default for IpfConfig {
    fn default() -> Self {
        IpfConfig { tolerance: 1e-10, max_iterations: 1_000_000, trace_every: None }
    }
}

impl IpfConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) || self.max_iterations == 0 || self.trace_every == Some(0) {
            return Err(Error::InvalidArgument(
                "tolerance and max_iterations must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IpfStatus {
    Converged,
    /// Residual within tolerance but some coordinate is below tolerance.
    Boundary,
    NotConverged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IpfResult {
    pub estimate: Vec<f64>,
    pub iterations: usize,
    pub final_residual: f64,
    pub status: IpfStatus,
    pub converged: bool,
    /// `(iteration, log-likelihood)` pairs when tracing was requested.
    pub trace: Vec<(usize, f64)>,
}

/// A nonnegative matrix with equal column sums and the same affine row space.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMatrix {
    pub matrix: DesignMatrix,
    pub common_sum: i64,
    /// Constant added to each original row.
    pub shifts: Vec<i64>,
}

pub fn normalize_matrix(a: &DesignMatrix) -> NormalizedMatrix {
    let shifts: Vec<i64> = a.entries().iter().map(|r| -r.iter().copied().min().unwrap_or(0).min(0)).collect();
    let mut rows: Vec<Vec<i64>> =
        a.entries().iter().zip(&shifts).map(|(r, s)| r.iter().map(|x| x + s).collect()).collect();
    let sums: Vec<i64> = (0..a.cols()).map(|j| rows.iter().map(|r| r[j]).sum()).collect();
    let common_sum = sums.iter().copied().max().unwrap_or(0).max(1);
    rows.push(sums.iter().map(|s| common_sum - s).collect());
    NormalizedMatrix {
        matrix: DesignMatrix::from_rows(rows, a.cols()).expect("rectangular by construction"),
        common_sum,
        shifts,
    }
}

fn birch_gap(a: &DesignMatrix, p: &[f64], target: &[f64]) -> f64 {
    let sum: f64 = p.iter().sum();
    a.apply_f64(p)
        .iter()
        .zip(target)
        .map(|(x, t)| (x - t).abs())
        .fold((sum - 1.0).abs(), f64::max)
}

/// One scaling step on a normalized matrix; keeps `p` summing to one.
fn gis_step(m: &NormalizedMatrix, p: &mut [f64], target: &[f64]) {
    let ap = m.matrix.apply_f64(p);
    let c = m.common_sum as f64;
    let ratios: Vec<f64> = ap
        .iter()
        .zip(target)
        .map(|(&x, &t)| if x > 0.0 { t / x } else { 1.0 })
        .collect();
    for (j, pj) in p.iter_mut().enumerate() {
        if *pj == 0.0 {
            continue;
        }
        let mut f = 1.0;
        for (i, r) in ratios.iter().enumerate() {
            let e = m.matrix.entry(i, j);
            if e != 0 {
                f *= r.powf(e as f64 / c);
            }
        }
        *pj *= f;
    }
    let s: f64 = p.iter().sum();
    if s > 0.0 {
        p.iter_mut().for_each(|x| *x /= s);
    }
}

pub fn ipf_solve(a: &DesignMatrix, u: &DataVector, cfg: &IpfConfig) -> Result<IpfResult> {
    ipf_solve_scaled(a, u, &vec![1.0; a.cols()], cfg)
}

/// The Birch point of the scaled model `c_j s theta^{a_j}`; scaling must be positive.
pub fn ipf_solve_scaled(a: &DesignMatrix, u: &DataVector, c: &[f64], cfg: &IpfConfig) -> Result<IpfResult> {
    cfg.validate()?;
    if c.len() != a.cols() {
        return Err(Error::Dimension(format!("matrix has {} columns but scaling has {} entries", a.cols(), c.len())));
    }
    if c.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidArgument("iterative scaling needs a positive scaling".into()));
    }
    if u.len() != a.cols() || a.cols() == 0 {
        return Err(Error::Dimension(format!(
            "matrix has {} columns but data has {} entries",
            a.cols(),
            u.len()
        )));
    }
    let total = u.total() as f64;
    let uf = u.as_f64();
    let target: Vec<f64> = a.apply_f64(&uf).iter().map(|x| x / total).collect();
    let norm = normalize_matrix(a);
    let norm_target: Vec<f64> = norm.matrix.apply_f64(&uf).iter().map(|x| x / total).collect();

    let c_sum: f64 = c.iter().sum();
    let mut p: Vec<f64> = c.iter().map(|x| x / c_sum).collect();
    let mut trace = Vec::new();
    let mut residual = birch_gap(a, &p, &target);
    let mut iterations = 0;
    while residual > cfg.tolerance && iterations < cfg.max_iterations {
        if let Some(k) = cfg.trace_every {
            if iterations % k == 0 {
                trace.push((iterations, log_likelihood(&p, u)));
            }
        }
        gis_step(&norm, &mut p, &norm_target);
        iterations += 1;
        residual = birch_gap(a, &p, &target);
    }
    if cfg.trace_every.is_some() {
        trace.push((iterations, log_likelihood(&p, u)));
    }
    let status = if residual > cfg.tolerance {
        IpfStatus::NotConverged
    } else if p.iter().any(|&x| x < cfg.tolerance) {
        IpfStatus::Boundary
    } else {
        IpfStatus::Converged
    };
    Ok(IpfResult {
        estimate: p,
        iterations,
        final_residual: residual,
        converged: status == IpfStatus::Converged,
        status,
        trace,
    })
}

/// Applies one more scaling step to `p`; used to check the fixed point.
pub fn ipf_step(a: &DesignMatrix, u: &DataVector, p: &[f64]) -> Vec<f64> {
    let total = u.total() as f64;
    let norm = normalize_matrix(a);
    let t: Vec<f64> = norm.matrix.apply_f64(&u.as_f64()).iter().map(|x| x / total).collect();
    let mut q = p.to_vec();
    gis_step(&norm, &mut q, &t);
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> DesignMatrix {
        DesignMatrix::from_rows(vec![vec![2, 1, 0, 1], vec![1, 2, 0, 1]], 4).unwrap()
    }

    #[test]
    fn normalize_cubic() {
        let n = normalize_matrix(&cubic());
        assert_eq!(n.common_sum, 3);
        assert_eq!(n.matrix.row(2), &[0, 0, 3, 1]);
        assert_eq!(n.shifts, vec![0, 0]);
    }

    #[test]
    fn normalize_shifts_negative_rows() {
        let a = DesignMatrix::from_rows(vec![vec![-1, 0, 1]], 3).unwrap();
        let n = normalize_matrix(&a);
        assert_eq!(n.matrix.row(0), &[0, 1, 2]);
        assert_eq!(n.shifts, vec![1]);
    }

    #[test]
    fn normalize_zero_matrix() {
        let a = DesignMatrix::from_rows(vec![vec![0, 0, 0]], 3).unwrap();
        let n = normalize_matrix(&a);
        assert_eq!(n.matrix.row(1), &[1, 1, 1]);
    }

    #[test]
    fn symmetric_data_gives_uniform() {
        let u = DataVector::new(vec![1, 1, 1, 1]).unwrap();
        let r = ipf_solve(&cubic(), &u, &IpfConfig::default()).unwrap();
        assert!(r.converged);
        assert!(r.estimate.iter().all(|x| (x - 0.25).abs() < 1e-10));
    }

    #[test]
    fn saturated_model_returns_normalized_data() {
        let a = DesignMatrix::from_rows(vec![vec![0, 1, 1, 0], vec![0, 1, 0, 1], vec![0, 0, 1, 1]], 4).unwrap();
        let u = DataVector::new(vec![44, 10, 21, 25]).unwrap();
        let r = ipf_solve(&a, &u, &IpfConfig::default()).unwrap();
        for (x, c) in r.estimate.iter().zip([44.0, 10.0, 21.0, 25.0]) {
            assert!((x - c / 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_counts_flag_boundary_or_nonconvergence() {
        let u = DataVector::new(vec![3, 2, 0, 0]).unwrap();
        let cfg = IpfConfig { max_iterations: 20_000, ..IpfConfig::default() };
        let r = ipf_solve(&cubic(), &u, &cfg).unwrap();
        assert!(!r.converged);
        assert_ne!(r.status, IpfStatus::Converged);
    }

    #[test]
    fn rejects_bad_input() {
        let u = DataVector::new(vec![1, 1, 1]).unwrap();
        assert!(matches!(ipf_solve(&cubic(), &u, &IpfConfig::default()), Err(Error::Dimension(_))));
        let cfg = IpfConfig { tolerance: 0.0, ..IpfConfig::default() };
        let u = DataVector::new(vec![1, 1, 1, 1]).unwrap();
        assert!(ipf_solve(&cubic(), &u, &cfg).is_err());
    }
}
