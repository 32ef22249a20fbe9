//! The sixteen Gorenstein toric del Pezzo surfaces and closed-form MLEs for
//! the five of ML degree at most four.

use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry;
use crate::model::{
    birch_residual_generic, polytope_to_matrix, Binomial, BirchResidual, DataVector, DesignMatrix,
    LatticePolytope,
};
use crate::poly;
use crate::rational::{int, rational_to_f64, Rational, Scalar};

pub const LABELS: [&str; 16] =
    ["3", "4a", "4b", "4c", "5a", "5b", "6a", "6b", "6c", "6d", "7a", "7b", "8a", "8b", "8c", "9"];

pub const CLOSED_FORM_LABELS: [&str; 5] = ["3", "4a", "4b", "4c", "5a"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelPezzoEntry {
    pub label: String,
    pub polytope: LatticePolytope,
    #[serde(serialize_with = "ser_binomials")]
    pub generators: Vec<Binomial>,
    pub degree: usize,
    pub ml_degree: usize,
}

fn ser_binomials<S: serde::Serializer>(g: &[Binomial], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(g.iter().map(ToString::to_string))
}

impl DelPezzoEntry {
    pub fn design_matrix(&self) -> DesignMatrix {
        polytope_to_matrix(&self.polytope)
    }

    pub fn boundary_points(&self) -> usize {
        geometry::boundary_lattice_count(self.polytope.points())
    }
}

struct RawEntry {
    label: &'static str,
    points: &'static [[i64; 2]],
    generators: &'static [&'static str],
}

const RAW: [RawEntry; 16] = [
    RawEntry { label: "3", points: &[[2, 1], [1, 2], [0, 0], [1, 1]], generators: &["p1p2p3-p4^3"] },
    RawEntry {
        label: "4a",
        points: &[[2, 1], [1, 2], [1, 1], [1, 0], [0, 1]],
        generators: &["p2p4-p1p5", "p3^2-p1p5"],
    },
    RawEntry {
        label: "4b",
        points: &[[2, 1], [1, 2], [1, 1], [1, 0], [0, 2]],
        generators: &["p2p4-p3^2", "p2p3-p1p5"],
    },
    RawEntry {
        label: "4c",
        points: &[[2, 2], [1, 2], [1, 1], [1, 0], [0, 2]],
        generators: &["p2p4-p3^2", "p2^2-p1p5"],
    },
    RawEntry {
        label: "5a",
        points: &[[2, 1], [1, 2], [0, 2], [0, 1], [1, 0], [1, 1]],
        generators: &["p3p5-p4p6", "p2p5-p6^2", "p2p4-p3p6", "p1p4-p6^2", "p1p3-p2p6"],
    },
    RawEntry {
        label: "5b",
        points: &[[2, 2], [1, 2], [0, 2], [0, 1], [1, 0], [1, 1]],
        generators: &["p3p5-p4p6", "p2p5-p6^2", "p2p4-p3p6", "p1p4-p2p6", "p2^2-p1p3"],
    },
    RawEntry {
        label: "6a",
        points: &[[0, 0], [1, 0], [3, 1], [4, 2], [3, 2], [1, 1], [2, 1]],
        generators: &[
            "p4p6-p5p7", "p3p6-p7^2", "p2p6-p1p7", "p3p5-p4p7", "p2p5-p7^2", "p1p5-p6p7", "p2p4-p3p7",
            "p1p4-p7^2", "p1p3-p2p7",
        ],
    },
    RawEntry {
        label: "6b",
        points: &[[1, 0], [1, 1], [2, 2], [3, 2], [3, 1], [0, 0], [2, 1]],
        generators: &[
            "p5p6-p1p7", "p4p6-p2p7", "p3p5-p4p7", "p2p5-p7^2", "p2p4-p3p7", "p1p4-p7^2", "p1p3-p2p7",
            "p2^2-p3p6", "p1p2-p6p7",
        ],
    },
    RawEntry {
        label: "6c",
        points: &[[4, 2], [3, 2], [2, 1], [1, 0], [2, 2], [1, 1], [0, 0]],
        generators: &[
            "p6^2-p5p7", "p4p6-p3p7", "p3p6-p2p7", "p4p5-p2p7", "p3p5-p2p6", "p2p4-p1p7", "p3^2-p1p7",
            "p2p3-p1p6", "p2^2-p1p5",
        ],
    },
    RawEntry {
        label: "6d",
        points: &[[2, 0], [1, 0], [2, 1], [0, 0], [1, 1], [2, 2], [3, 3]],
        generators: &[
            "p6^2-p5p7", "p5p6-p4p7", "p3p6-p2p7", "p5^2-p4p6", "p3p5-p2p6", "p3p4-p2p5", "p3^2-p1p6",
            "p2p3-p1p5", "p2^2-p1p4",
        ],
    },
    RawEntry {
        label: "7a",
        points: &[[0, 0], [1, 0], [1, 1], [2, 1], [3, 1], [2, 2], [3, 2], [4, 2]],
        generators: &[
            "p5p7-p4p8", "p4p7-p3p8", "p2p7-p1p8", "p5p6-p3p8", "p4p6-p3p7", "p2p6-p1p7", "p4p5-p2p8",
            "p3p5-p1p8", "p4^2-p1p8", "p3p4-p1p7", "p2p4-p1p5", "p3^2-p1p6", "p7^2-p6p8", "p2p3-p1p4",
        ],
    },
    RawEntry {
        label: "7b",
        points: &[[3, 1], [3, 2], [2, 1], [1, 0], [3, 3], [2, 2], [1, 1], [0, 0]],
        generators: &[
            "p7^2-p6p8", "p6p7-p5p8", "p4p7-p3p8", "p3p7-p2p8", "p6^2-p5p7", "p4p6-p2p8", "p3p6-p2p7",
            "p4p5-p2p7", "p3p5-p2p6", "p3p4-p1p8", "p2p4-p1p7", "p3^2-p1p7", "p2p3-p1p6", "p2^2-p1p5",
        ],
    },
    RawEntry {
        label: "8a",
        points: &[[0, 0], [1, 0], [2, 0], [1, 1], [2, 1], [3, 1], [2, 2], [3, 2], [4, 2]],
        generators: &[
            "p8^2-p7p9", "p6p8-p5p9", "p5p8-p4p9", "p3p8-p2p9", "p2p8-p1p9", "p6p7-p4p9", "p5p7-p4p8",
            "p3p7-p1p9", "p2p7-p1p8", "p6^2-p3p9", "p5p6-p2p9", "p4p6-p1p9", "p5^2-p1p9", "p4p5-p1p8",
            "p3p5-p2p6", "p2p5-p1p6", "p4^2-p1p7", "p3p4-p1p6", "p2p4-p1p5", "p2^2-p1p3",
        ],
    },
    RawEntry {
        label: "8b",
        points: &[[2, 0], [3, 1], [1, 0], [2, 1], [3, 2], [0, 0], [1, 1], [2, 2], [3, 3]],
        generators: &[
            "p8^2-p7p9", "p7p8-p6p9", "p5p8-p4p9", "p4p8-p3p9", "p2p8-p1p9", "p7^2-p6p8", "p5p7-p3p9",
            "p4p7-p3p8", "p2p7-p1p8", "p5p6-p3p8", "p4p6-p3p7", "p2p6-p1p7", "p5^2-p2p9", "p4p5-p1p9",
            "p3p5-p1p8", "p4^2-p1p8", "p3p4-p1p7", "p2p4-p1p5", "p3^2-p1p6", "p2p3-p1p4",
        ],
    },
    RawEntry {
        label: "8c",
        points: &[[2, 2], [1, 1], [2, 1], [3, 1], [0, 0], [1, 0], [2, 0], [3, 0], [4, 0]],
        generators: &[
            "p8^2-p7p9", "p7p8-p6p9", "p6p8-p5p9", "p4p8-p3p9", "p3p8-p2p9", "p7^2-p5p9", "p6p7-p5p8",
            "p4p7-p2p9", "p3p7-p2p8", "p6^2-p5p7", "p4p6-p2p8", "p3p6-p2p7", "p4p5-p2p7", "p3p5-p2p6",
            "p4^2-p1p9", "p3p4-p1p8", "p2p4-p1p7", "p3^2-p1p7", "p2p3-p1p6", "p2^2-p1p5",
        ],
    },
    RawEntry {
        label: "9",
        points: &[[0, 0], [1, 0], [1, 1], [2, 0], [2, 1], [2, 2], [3, 0], [3, 1], [3, 2], [3, 3]],
        generators: &[
            "p9^2-p8p10", "p8p9-p7p10", "p6p9-p5p10", "p5p9-p4p10", "p3p9-p2p10", "p8^2-p7p9",
            "p6p8-p4p10", "p5p8-p4p9", "p3p8-p2p9", "p6p7-p4p9", "p5p7-p4p8", "p3p7-p2p8", "p6^2-p3p10",
            "p5p6-p2p10", "p4p6-p2p9", "p3p6-p1p10", "p2p6-p1p9", "p5^2-p2p9", "p4p5-p2p8", "p3p5-p1p9",
            "p2p5-p1p8", "p4^2-p2p7", "p3p4-p1p8", "p2p4-p1p7", "p3^2-p1p6", "p2p3-p1p5", "p2^2-p1p4",
        ],
    },
];

fn build_entry(raw: &RawEntry) -> DelPezzoEntry {
    let polytope = LatticePolytope::new(raw.points.iter().map(|p| p.to_vec()).collect())
        .expect("catalog points are distinct");
    let generators =
        raw.generators.iter().map(|g| Binomial::parse(g).expect("catalog generator parses")).collect();
    let degree: usize = raw.label.trim_end_matches(char::is_alphabetic).parse().expect("numeric label");
    let ml_degree = if raw.label == "5a" { 3 } else { degree };
    DelPezzoEntry { label: raw.label.to_string(), polytope, generators, degree, ml_degree }
}

/// The sixteen entries with their generators.
pub fn catalog() -> &'static [DelPezzoEntry] {
    static CATALOG: OnceLock<Vec<DelPezzoEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| RAW.iter().map(build_entry).collect())
}

pub fn entry(label: &str) -> Result<&'static DelPezzoEntry> {
    catalog().iter().find(|e| e.label == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

pub fn ml_degree(label: &str) -> Result<usize> {
    entry(label).map(|e| e.ml_degree)
}

/// Variable ordering and design matrix used by the closed-form formulas for one label.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormEntry {
    pub label: &'static str,
    pub design_matrix: DesignMatrix,
    /// `to_catalog[k]` is the catalog index of closed-form variable `k`.
    pub to_catalog: Vec<usize>,
    /// Catalog generators rewritten in the closed-form ordering.
    pub generators: Vec<Binomial>,
    pub ml_degree: usize,
}

fn closed_form_points(label: &str) -> Option<&'static [[i64; 2]]> {
    Some(match label {
        "3" => &[[2, 1], [1, 2], [0, 0], [1, 1]],
        "4a" => &[[2, 1], [1, 2], [1, 0], [0, 1], [1, 1]],
        "4b" => &[[2, 1], [1, 2], [0, 2], [1, 0], [1, 1]],
        "4c" => &[[1, 0], [2, 2], [1, 2], [0, 2], [1, 1]],
        "5a" => &[[2, 1], [1, 2], [1, 1], [1, 0], [0, 2], [0, 1]],
        _ => return None,
    })
}

pub fn closed_form_entry(label: &str) -> Result<ClosedFormEntry> {
    let cat = entry(label)?;
    let pts = closed_form_points(label)
        .ok_or_else(|| Error::NotApplicable(format!("no closed form for label {label}")))?;
    let label = CLOSED_FORM_LABELS.iter().find(|l| **l == label).expect("closed-form label");
    let to_catalog: Vec<usize> = pts
        .iter()
        .map(|p| cat.polytope.index_of(p).expect("closed-form points are catalog points"))
        .collect();
    let mut from_catalog = vec![0; to_catalog.len()];
    for (k, &c) in to_catalog.iter().enumerate() {
        from_catalog[c] = k;
    }
    let columns: Vec<Vec<i64>> = pts.iter().map(|p| p.to_vec()).collect();
    Ok(ClosedFormEntry {
        label,
        design_matrix: DesignMatrix::from_columns(&columns).expect("planar columns"),
        to_catalog,
        generators: cat.generators.iter().map(|g| g.relabel(&from_catalog)).collect(),
        ml_degree: cat.ml_degree,
    })
}

/// Exact `(a, b, c)` from counts given in the closed-form ordering.
pub fn coefficients(label: &str, u: &DataVector) -> Result<(Rational, Rational, Rational)> {
    let n = match label {
        "3" => 4,
        "4a" | "4b" | "4c" => 5,
        "5a" => 6,
        _ if entry(label).is_ok() => {
            return Err(Error::NotApplicable(format!("no closed form for label {label}")))
        }
        _ => return Err(Error::UnknownLabel(label.to_string())),
    };
    if u.len() != n {
        return Err(Error::Dimension(format!("label {label} needs {n} counts, got {}", u.len())));
    }
    let v = u.as_rationals();
    let w = |k: usize| v[k - 1].clone();
    let (a, b, c) = match label {
        "3" => (w(1) - w(3), w(2) - w(3), int(3) * w(3) + w(4)),
        "4a" => (w(1) - w(4), w(2) - w(3), int(2) * w(3) + int(2) * w(4) + w(5)),
        "4b" => (
            w(1) + int(2) * w(4) + w(5),
            w(3) + int(2) * w(4) + w(5),
            w(2) - int(3) * w(4) - w(5),
        ),
        "4c" => (w(2) - w(4), int(2) * w(1) + w(5), int(2) * w(3) + int(4) * w(4) + w(5)),
        "5a" => (
            w(2) - w(3) - int(3) * w(4) - int(2) * w(6),
            w(3) + w(5) + int(2) * (w(4) + w(6)),
            w(1) + w(3) + w(6) + int(2) * w(4),
        ),
        _ => unreachable!(),
    };
    let t = Rational::from_integer(u.total().into());
    Ok((a / &t, b / &t, c / t))
}

/// Coefficients of the univariate likelihood polynomial, highest degree first.
pub fn likelihood_polynomial<T: Scalar>(label: &str, a: &T, b: &T, c: &T) -> Result<Vec<T>> {
    let k = |v: i64| T::from_i64(v);
    let (a, b, c) = (a.clone(), b.clone(), c.clone());
    let sq = |x: &T| x.clone() * x.clone();
    Ok(match label {
        "3" => vec![
            k(28),
            a.clone() + b.clone() - k(27) * c.clone(),
            a * b + k(9) * sq(&c),
            -(sq(&c) * c),
        ],
        "4a" => {
            let (a2, b2) = (sq(&a), sq(&b));
            let t = k(4) * a2.clone() - k(3) * b2.clone();
            vec![
                k(15),
                k(-16),
                k(8) * a2.clone() - k(22) * b2.clone() - k(56),
                k(16) * (k(4) - k(4) * a2.clone() + k(5) * b2.clone()),
                k(8) * (k(4) * a2 - k(5) * b2 - k(2)) - sq(&t),
            ]
        }
        "4b" => {
            let ab = a.clone() * b.clone();
            vec![
                k(17),
                k(17) * c.clone() - k(16),
                k(3) + k(9) * ab.clone() - k(8) * c.clone() + k(4) * sq(&c),
                k(4) * ab.clone() * c.clone() - k(5) * ab.clone() - c,
                sq(&ab),
            ]
        }
        "4c" => vec![
            k(-55),
            k(12),
            c.clone() * (k(4) * a.clone() + c.clone()) + b.clone() * (k(5) * b.clone() - k(8)),
            -(k(4) * b.clone() * (a.clone() * b.clone() + a.clone() * c.clone() + c.clone())),
            (k(4) * a + c.clone()) * sq(&b) * c,
        ],
        "5a" => vec![
            k(-5),
            k(3) - k(5) * a.clone(),
            -a - b.clone() * (b.clone() + k(5) * c.clone()),
            sq(&b) * c,
        ],
        _ if entry(label).is_ok() => {
            return Err(Error::NotApplicable(format!("no closed form for label {label}")))
        }
        _ => return Err(Error::UnknownLabel(label.to_string())),
    })
}

/// `(s, theta1, theta2)` from a root `x`.
pub fn recover(label: &str, x: f64, a: f64, b: f64, c: f64) -> Result<(f64, f64, f64)> {
    let x2 = x * x;
    Ok(match label {
        "3" => {
            let w = -3.0 * x + c;
            (w.powi(3) / ((x + a) * (x + b)), (x + a) / w, (x + b) / w)
        }
        "4a" => {
            let q = 3.0 * b * b - 4.0 * a * a;
            let d = -x2 + 8.0 * x - (q + 4.0);
            let n = -7.0 * x2 + (8.0 * a + 8.0) * x + (q - 4.0 - 8.0 * a);
            (
                d.powi(3) / (16.0 * (x - 1.0).powi(2) * (x + b) * n),
                n / (2.0 * d),
                4.0 * (x + b) * (x - 1.0) / d,
            )
        }
        "4b" => {
            let d = 4.0 * x2 + 2.0 * (c - 1.0) * x + a * b;
            let f = x2 + (c + 1.0) * x + a * b + c;
            let g = -2.0 * x2 - (2.0 * c + a) * x + a - a * b;
            (d.powi(3) / ((1.0 - x) * f * g), g / d, f / d)
        }
        "4c" => {
            let n = -3.0 * x2 - (2.0 * a + 2.0) * x + (4.0 * a + c) * b;
            (4.0 * x2 * (b - x) / n, n / (8.0 * x2), 2.0 * x / (b - x))
        }
        "5a" => {
            let n = 2.0 * x2 - (b + 2.0 * c) * x + b * c;
            let l = x2 + (a + b) * x;
            let r = -x2 + c * x;
            (r * l / n, n / l, n / r)
        }
        _ if entry(label).is_ok() => {
            return Err(Error::NotApplicable(format!("no closed form for label {label}")))
        }
        _ => return Err(Error::UnknownLabel(label.to_string())),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormResult {
    pub label: String,
    pub x: f64,
    pub s: f64,
    pub theta: [f64; 2],
    pub estimate: Vec<f64>,
    pub residual: BirchResidual,
    pub real_roots: Vec<f64>,
    #[serde(skip)]
    pub coefficients: (Rational, Rational, Rational),
}

/// Positivity threshold for admissible roots.
pub const POSITIVITY_TOL: f64 = 1e-12;

struct Candidate {
    x: f64,
    s: f64,
    theta: [f64; 2],
    p: Vec<f64>,
}

fn candidate(label: &str, a: &DesignMatrix, x: f64, abc: (f64, f64, f64)) -> Option<Candidate> {
    let (s, t1, t2) = recover(label, x, abc.0, abc.1, abc.2).ok()?;
    let p: Vec<f64> = (0..a.cols())
        .map(|j| s * t1.powi(a.entry(0, j) as i32) * t2.powi(a.entry(1, j) as i32))
        .collect();
    p.iter().all(|v| v.is_finite() && *v > POSITIVITY_TOL).then_some(Candidate { x, s, theta: [t1, t2], p })
}

/// Real roots of the likelihood polynomial whose recovered point is strictly positive.
pub fn admissible_roots(label: &str, u: &DataVector) -> Result<(Vec<f64>, Vec<f64>)> {
    let cf = closed_form_entry(label)?;
    let (a, b, c) = coefficients(label, u)?;
    let abc = (rational_to_f64(&a), rational_to_f64(&b), rational_to_f64(&c));
    let coeffs: Vec<f64> = likelihood_polynomial(label, &a, &b, &c)?.iter().map(rational_to_f64).collect();
    let roots = poly::real_roots(&coeffs, 1e-8)?;
    let adm = admissible(label, &cf.design_matrix, &roots, abc).into_iter().map(|c| c.x).collect();
    Ok((roots, adm))
}

fn admissible(label: &str, a: &DesignMatrix, roots: &[f64], abc: (f64, f64, f64)) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = Vec::new();
    for &x in roots {
        if let Some(cand) = candidate(label, a, x, abc) {
            // numerically coincident roots describe the same point
            let dup = out.iter().any(|o| o.p.iter().zip(&cand.p).all(|(p, q)| (p - q).abs() < 1e-8));
            if !dup {
                out.push(cand);
            }
        }
    }
    out
}

/// The MLE from the closed-form formulas; `u` and the estimate use the
/// closed-form variable ordering of [`closed_form_entry`].
pub fn closed_form_mle(label: &str, u: &DataVector, tol: f64) -> Result<ClosedFormResult> {
    let cf = closed_form_entry(label)?;
    let (a, b, c) = coefficients(label, u)?;
    if !u.is_strictly_positive() {
        return Err(Error::BoundaryData("closed forms need strictly positive counts".into()));
    }
    let abc = (rational_to_f64(&a), rational_to_f64(&b), rational_to_f64(&c));
    let coeffs: Vec<f64> = likelihood_polynomial(label, &a, &b, &c)?.iter().map(rational_to_f64).collect();
    let roots = poly::real_roots(&coeffs, 1e-8)?;
    let mut cands = admissible(label, &cf.design_matrix, &roots, abc);
    match cands.len() {
        0 => return Err(Error::NoAdmissibleRoot { roots }),
        1 => {}
        _ => return Err(Error::MultipleAdmissibleRoots { roots: cands.iter().map(|c| c.x).collect() }),
    }
    let best = cands.pop().expect("one candidate");
    let residual = birch_residual_generic(&best.p, u, &cf.design_matrix, &cf.generators)?;
    if !(residual.max() <= tol) {
        return Err(Error::ResidualTooLarge { residual: residual.max(), tolerance: tol });
    }
    Ok(ClosedFormResult {
        label: label.to_string(),
        x: best.x,
        s: best.s,
        theta: best.theta,
        estimate: best.p,
        residual,
        real_roots: roots,
        coefficients: (a, b, c),
    })
}

/// Whether every generator of `e` vanishes on `s * theta^{a_j}`, exactly.
pub fn generators_vanish_at(e: &DelPezzoEntry, s: &Rational, theta: &[Rational]) -> Result<bool> {
    let a = e.design_matrix();
    let p = crate::model::parametrize(&a, &vec![int(1); a.cols()], s, theta)?;
    Ok(e.generators.iter().all(|g| g.evaluate(&p).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn catalog_shape() {
        let c = catalog();
        assert_eq!(c.len(), 16);
        assert_eq!(entry("9").unwrap().generators.len(), 27);
        assert_eq!(entry("5a").unwrap().generators.len(), 5);
        assert_eq!(entry("3").unwrap().generators[0].to_string(), "p1*p2*p3 - p4^3");
        assert_eq!(ml_degree("5a").unwrap(), 3);
        assert_eq!(ml_degree("5b").unwrap(), 5);
        assert_eq!(ml_degree("9").unwrap(), 9);
        assert!(matches!(ml_degree("10"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn every_polygon_is_reflexive_with_all_lattice_points_listed() {
        for e in catalog() {
            let pts = e.polytope.points();
            assert_eq!(e.boundary_points(), e.degree, "label {}", e.label);
            // Pick's theorem: one interior point, so 2A = B
            assert_eq!(geometry::twice_area(pts), e.degree as i64, "label {}", e.label);
            assert_eq!(pts.len(), e.degree + 1, "label {}", e.label);
        }
    }

    #[test]
    fn coefficients_and_polynomial_for_cubic() {
        let u = DataVector::new(vec![1, 1, 1, 1]).unwrap();
        let (a, b, c) = coefficients("3", &u).unwrap();
        assert_eq!((a.clone(), b.clone(), c.clone()), (int(0), int(0), int(1)));
        let p = likelihood_polynomial("3", &a, &b, &c).unwrap();
        assert_eq!(p, vec![int(28), int(-27), int(9), int(-1)]);
    }

    #[test]
    fn five_a_coefficients() {
        let u = DataVector::new(vec![1, 2, 3, 4, 5, 6]).unwrap();
        let (a, _, _) = coefficients("5a", &u).unwrap();
        assert_eq!(a, rat(2 - 3 - 12 - 12, 21));
        assert!(matches!(coefficients("6a", &u), Err(Error::NotApplicable(_))));
        assert!(matches!(coefficients("x", &u), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn uniform_cubic_closed_form() {
        let u = DataVector::new(vec![1, 1, 1, 1]).unwrap();
        let r = closed_form_mle("3", &u, 1e-10).unwrap();
        assert!((r.x - 0.25).abs() < 1e-12);
        assert!(r.estimate.iter().all(|p| (p - 0.25).abs() < 1e-12));
    }

    #[test]
    fn closed_form_generators_vanish_on_design() {
        for label in CLOSED_FORM_LABELS {
            let cf = closed_form_entry(label).unwrap();
            let p = crate::model::parametrize(
                &cf.design_matrix,
                &vec![int(1); cf.design_matrix.cols()],
                &rat(3, 7),
                &[rat(2, 5), rat(-7, 3)],
            )
            .unwrap();
            assert!(cf.generators.iter().all(|g| g.evaluate(&p).is_zero()), "label {label}");
        }
    }

    #[test]
    fn degree_of_polynomial_matches_ml_degree() {
        for label in CLOSED_FORM_LABELS {
            let p = likelihood_polynomial(label, &0.3, &0.2, &0.5).unwrap();
            assert_eq!(p.len() - 1, ml_degree(label).unwrap());
        }
    }
}
