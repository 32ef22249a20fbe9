//! Face discriminants and singular points of `f_c = sum c_j theta^{a_j}` for
//! predicting when a scaled toric model has lower ML degree.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry;
use crate::linalg::{self, RatMatrix};
use crate::model::{polytope_to_matrix, Binomial, DataVector, DesignMatrix, LatticePolytope, Scaling};
use crate::quadratic::QSqrt5;
use crate::rational::{int, rat, Rational, Scalar};

/// Column indices of `A` lying on one face, ordered along the face for edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceConfig {
    pub indices: Vec<usize>,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledConfig {
    pub polytope: LatticePolytope,
    pub matrix: DesignMatrix,
    pub scaling: Scaling,
    pub faces: Vec<FaceConfig>,
}

impl ScaledConfig {
    /// Faces are enumerated for configurations of affine dimension at most two.
    pub fn new(polytope: LatticePolytope, scaling: Scaling) -> Result<Self> {
        if scaling.len() != polytope.len() {
            return Err(Error::Dimension(format!(
                "{} points but {} scaling entries",
                polytope.len(),
                scaling.len()
            )));
        }
        let faces = enumerate_faces(polytope.points())?;
        let matrix = polytope_to_matrix(&polytope);
        Ok(ScaledConfig { polytope, matrix, scaling, faces })
    }

    pub fn unscaled(polytope: LatticePolytope) -> Result<Self> {
        let n = polytope.len();
        ScaledConfig::new(polytope, Scaling::ones(n))
    }

    pub fn edges(&self) -> impl Iterator<Item = &FaceConfig> {
        self.faces.iter().filter(|f| f.dim == 1)
    }
}

fn sorted_along(points: &[Vec<i64>], idx: &mut [usize], from: usize) {
    let start = points[from].clone();
    idx.sort_by_key(|&k| points[k].iter().zip(&start).map(|(a, b)| (a - b).abs()).sum::<i64>());
}

fn enumerate_faces(points: &[Vec<i64>]) -> Result<Vec<FaceConfig>> {
    let all: Vec<usize> = (0..points.len()).collect();
    let dim = geometry::affine_dim(points);
    match dim {
        0 => Ok(vec![FaceConfig { indices: vec![0], dim: 0 }]),
        1 => {
            // endpoints are the extreme points along the line
            let dir: Vec<i64> = points.iter().find(|p| *p != &points[0]).map(|p| {
                p.iter().zip(&points[0]).map(|(a, b)| a - b).collect()
            }).expect("a second point");
            let key = |k: usize| points[k].iter().zip(&dir).map(|(a, b)| a * b).sum::<i64>();
            let lo = *all.iter().min_by_key(|&&k| key(k)).expect("nonempty");
            let hi = *all.iter().max_by_key(|&&k| key(k)).expect("nonempty");
            let mut line = all.clone();
            sorted_along(points, &mut line, lo);
            Ok(vec![
                FaceConfig { indices: vec![lo], dim: 0 },
                FaceConfig { indices: vec![hi], dim: 0 },
                FaceConfig { indices: line, dim: 1 },
            ])
        }
        2 if points[0].len() == 2 => {
            let hull = geometry::convex_hull(points);
            let mut faces: Vec<FaceConfig> =
                hull.iter().map(|&v| FaceConfig { indices: vec![v], dim: 0 }).collect();
            for k in 0..hull.len() {
                let (a, b) = (hull[k], hull[(k + 1) % hull.len()]);
                let mut on: Vec<usize> =
                    all.iter().copied().filter(|&j| geometry::on_segment(&points[a], &points[b], &points[j])).collect();
                sorted_along(points, &mut on, a);
                faces.push(FaceConfig { indices: on, dim: 1 });
            }
            faces.push(FaceConfig { indices: all, dim: 2 });
            Ok(faces)
        }
        _ => Err(Error::UnsupportedFace(format!(
            "face enumeration needs a planar configuration, got affine dimension {dim}"
        ))),
    }
}

/// `f_c(theta)` and its partial derivatives.
pub fn f_c<T: Scalar>(config: &ScaledConfig, theta: &[T]) -> Result<(T, Vec<T>)> {
    let a = &config.matrix;
    if theta.len() != a.rows() {
        return Err(Error::Dimension(format!("theta has {} entries, expected {}", theta.len(), a.rows())));
    }
    if theta.iter().any(Zero::is_zero) {
        return Err(Error::Domain("theta entries must be nonzero".into()));
    }
    let mut value = T::zero();
    let mut grad = vec![T::zero(); a.rows()];
    for j in 0..a.cols() {
        let c = T::from_rational(&config.scaling.values()[j]);
        let mono = (0..a.rows()).fold(c, |acc, i| acc * theta[i].pow_int(a.entry(i, j)));
        for (i, g) in grad.iter_mut().enumerate() {
            let e = a.entry(i, j);
            if e != 0 {
                *g = g.clone() + T::from_i64(e) * mono.clone() / theta[i].clone();
            }
        }
        value = value + mono;
    }
    Ok((value, grad))
}

pub fn verify_singular_point<T: Scalar>(config: &ScaledConfig, theta: &[T], tol: f64) -> Result<bool> {
    let (v, g) = f_c(config, theta)?;
    Ok(v.is_negligible(tol) && g.iter().all(|x| x.is_negligible(tol)))
}

/// Discriminant of a vertex or an edge with at most three lattice points.
pub fn edge_discriminant(face: &FaceConfig, c: &Scaling) -> Result<Rational> {
    let coeff = |k: usize| c.values()[face.indices[k]].clone();
    match (face.dim, face.indices.len()) {
        (0, 1) | (1, 2) => Ok(int(1)),
        (1, 3) => Ok(coeff(1) * coeff(1) - int(4) * coeff(0) * coeff(2)),
        (1, n) => Err(Error::UnsupportedFace(format!("edge of lattice length {}", n - 1))),
        (d, _) => Err(Error::UnsupportedFace(format!("face of dimension {d} is not an edge"))),
    }
}

/// Symmetric 3x3 matrix of a scaled Veronese surface:
/// `[[2c00, c10, c01], [c10, 2c20, c11], [c01, c11, 2c02]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VeroneseScaling {
    c: [[Rational; 3]; 3],
}

/// Lattice points of the Veronese triangle in the order `a1..a6`.
pub const VERONESE_POINTS: [[i64; 2]; 6] = [[0, 0], [1, 0], [2, 0], [0, 1], [0, 2], [1, 1]];

impl VeroneseScaling {
    pub fn new(c: [[Rational; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..i {
                if c[i][j] != c[j][i] {
                    return Err(Error::InvalidArgument("matrix C must be symmetric".into()));
                }
            }
        }
        Ok(VeroneseScaling { c })
    }

    pub fn from_i64(c: [[i64; 3]; 3]) -> Result<Self> {
        VeroneseScaling::new(c.map(|r| r.map(int)))
    }

    pub fn matrix(&self) -> &[[Rational; 3]; 3] {
        &self.c
    }

    fn rat_matrix(&self) -> RatMatrix {
        self.c.iter().map(|r| r.to_vec()).collect()
    }

    /// Scaling on [`VERONESE_POINTS`]; fails when some coefficient is zero.
    pub fn to_scaling(&self) -> Result<Scaling> {
        let c = &self.c;
        let half = rat(1, 2);
        Scaling::new(vec![
            &c[0][0] * &half,
            c[0][1].clone(),
            &c[1][1] * &half,
            c[0][2].clone(),
            &c[2][2] * &half,
            c[1][2].clone(),
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VeroneseFactors {
    pub det_c: Rational,
    pub d12: Rational,
    pub d36: Rational,
    pub d14: Rational,
    pub product: Rational,
}

impl VeroneseFactors {
    /// Nonzero flags of `(det C, d12, d36, d14)`.
    pub fn pattern(&self) -> [bool; 4] {
        [!self.det_c.is_zero(), !self.d12.is_zero(), !self.d36.is_zero(), !self.d14.is_zero()]
    }
}

fn det2(a: &Rational, b: &Rational, d: &Rational) -> Rational {
    a * d - b * b
}

pub fn veronese_ea(c: &VeroneseScaling) -> VeroneseFactors {
    let m = &c.c;
    let det_c = linalg::det(&c.rat_matrix());
    let d12 = det2(&m[0][0], &m[0][1], &m[1][1]);
    let d36 = det2(&m[1][1], &m[1][2], &m[2][2]);
    let d14 = det2(&m[0][0], &m[0][2], &m[2][2]);
    let product = &det_c * &d12 * &d36 * &d14;
    VeroneseFactors { det_c, d12, d36, d14, product }
}

/// True exactly when the principal determinant vanishes, i.e. the ML degree drops below 4.
pub fn predict_drop_veronese(c: &VeroneseScaling) -> bool {
    veronese_ea(c).product.is_zero()
}

/// A point `theta` with nonzero coordinates and `C (1, theta)^T = 0`, if one exists.
pub fn veronese_rank_singularity(c: &VeroneseScaling) -> Option<(Rational, Rational)> {
    let kernel = linalg::nullspace(&c.rat_matrix(), 3);
    if kernel.is_empty() {
        return None;
    }
    let accept = |v: &[Rational]| {
        (!v[0].is_zero() && !v[1].is_zero() && !v[2].is_zero()).then(|| (&v[1] / &v[0], &v[2] / &v[0]))
    };
    let coeffs: Vec<i64> = vec![0, 1, -1, 2, -2, 3, -3];
    let mut combos: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..kernel.len() {
        combos = combos
            .into_iter()
            .flat_map(|c| coeffs.iter().map(move |&k| [c.clone(), vec![k]].concat()))
            .collect();
    }
    // a generic combination works whenever any does; small coefficients suffice
    for combo in combos {
        let v: Vec<Rational> = (0..3)
            .map(|r| kernel.iter().zip(&combo).fold(Rational::zero(), |acc, (b, &k)| acc + &b[r] * int(k)))
            .collect();
        if let Some(t) = accept(&v) {
            return Some(t);
        }
    }
    None
}

/// One row of the table of scaled Veronese surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VeroneseRow {
    pub c: [[i64; 3]; 3],
    /// Nonzero flags of `(det C, d12, d36, d14)`.
    pub pattern: [bool; 4],
    pub ml_degree: usize,
}

pub const VERONESE_TABLE: [VeroneseRow; 7] = [
    VeroneseRow { c: [[2, 1, 1], [1, 2, 1], [1, 1, 2]], pattern: [true, true, true, true], ml_degree: 4 },
    VeroneseRow { c: [[2, 2, 1], [2, 2, 3], [1, 3, 2]], pattern: [true, false, true, true], ml_degree: 3 },
    VeroneseRow { c: [[2, 2, 1], [2, 2, 2], [1, 2, 2]], pattern: [true, false, false, true], ml_degree: 2 },
    VeroneseRow {
        c: [[-2, 2, 2], [2, -2, 2], [2, 2, -2]],
        pattern: [true, false, false, false],
        ml_degree: 1,
    },
    VeroneseRow {
        c: [[17, 22, 27], [22, 29, 36], [27, 36, 45]],
        pattern: [false, true, true, true],
        ml_degree: 3,
    },
    VeroneseRow { c: [[2, 3, 3], [3, 5, 5], [3, 5, 5]], pattern: [false, true, false, true], ml_degree: 2 },
    VeroneseRow { c: [[2, 2, 2], [2, 2, 2], [2, 2, 2]], pattern: [false, false, false, false], ml_degree: 1 },
];

/// Coefficient vectors (over `p`) of the forms `(Au)_i L_c(p) - u_+ L_{c,i}(p)`.
pub fn critical_linear_system(a: &DesignMatrix, c: &Scaling, u: &DataVector) -> Result<Vec<Vec<Rational>>> {
    if c.len() != a.cols() || u.len() != a.cols() {
        return Err(Error::Dimension("matrix, scaling and data sizes differ".into()));
    }
    let au = a.apply(&u.as_rationals());
    let total = Rational::from_integer(u.total().into());
    Ok((0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| {
                    let cj = &c.values()[j];
                    &au[i] * cj - &total * int(a.entry(i, j)) * cj
                })
                .collect()
        })
        .collect())
}

pub fn evaluate_linear_form<T: Scalar>(form: &[Rational], p: &[T]) -> T {
    form.iter().zip(p).fold(T::zero(), |acc, (f, x)| acc + T::from_rational(f) * x.clone())
}

/// `L_c(p)` followed by `L_{c,i}(p)` for every row of `A`.
pub fn removal_forms<T: Scalar>(a: &DesignMatrix, c: &Scaling, p: &[T]) -> Vec<T> {
    let cp: Vec<T> = p.iter().zip(c.values()).map(|(x, cj)| T::from_rational(cj) * x.clone()).collect();
    let mut out = vec![cp.iter().cloned().fold(T::zero(), |acc, x| acc + x)];
    out.extend(a.apply(&cp));
    out
}

/// Whether `p` lies on the variety and on the data-independent linear space
/// `L_c = L_{c,1} = ... = 0`.
pub fn removal_point_check<T: Scalar>(
    gens: &[Binomial],
    a: &DesignMatrix,
    c: &Scaling,
    p: &[T],
    tol: f64,
) -> Result<bool> {
    if p.len() != a.cols() || c.len() != a.cols() {
        return Err(Error::Dimension("point, matrix and scaling sizes differ".into()));
    }
    if p.iter().all(Zero::is_zero) {
        return Err(Error::InvalidArgument("the zero vector is not a projective point".into()));
    }
    if gens.iter().any(|g| g.max_var().is_some_and(|v| v >= p.len())) {
        return Err(Error::Dimension("generator uses a variable out of range".into()));
    }
    Ok(gens.iter().all(|g| g.evaluate(p).is_negligible(tol))
        && removal_forms(a, c, p).iter().all(|x| x.is_negligible(tol)))
}

/// The two quintic del Pezzo configurations with all scalings one, in the
/// lattice-point order `(0,1),(0,2),(1,0),(1,1),(1,2),(2,1)` for 5a and
/// `(0,1),(0,2),(1,0),(1,1),(1,2),(2,2)` for 5b.
pub fn quintic_config(label: &str) -> Result<ScaledConfig> {
    let pts: Vec<Vec<i64>> = match label {
        "5a" => vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2], vec![2, 1]],
        "5b" => vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2], vec![2, 2]],
        _ => return Err(Error::UnknownLabel(label.to_string())),
    };
    ScaledConfig::unscaled(LatticePolytope::new(pts)?)
}

/// Catalog generators of a quintic, renamed to the ordering of [`quintic_config`].
pub fn quintic_generators(label: &str) -> Result<Vec<Binomial>> {
    let cfg = quintic_config(label)?;
    let cat = crate::delpezzo::entry(label)?;
    let map: Vec<usize> = cat
        .polytope
        .points()
        .iter()
        .map(|p| cfg.polytope.index_of(p).ok_or_else(|| Error::InvalidConfig("point sets differ".into())))
        .collect::<Result<_>>()?;
    Ok(cat.generators.iter().map(|g| g.relabel(&map)).collect())
}

/// The singular points `(-phi, phi)` and its conjugate of `f_c` on 5a with `c = 1`.
pub fn quintic_singular_points() -> [[QSqrt5; 2]; 2] {
    let phi = QSqrt5::phi();
    let psi = phi.conjugate();
    [[-phi.clone(), phi], [-psi.clone(), psi]]
}

/// `p_j = theta^{a_j}` at each singular point: the points removed from the
/// critical locus for every data vector.
pub fn quintic_removal_points() -> Result<Vec<Vec<QSqrt5>>> {
    let cfg = quintic_config("5a")?;
    let ones = vec![QSqrt5::one(); cfg.matrix.cols()];
    quintic_singular_points()
        .iter()
        .map(|t| crate::model::parametrize(&cfg.matrix, &ones, &QSqrt5::one(), t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_of_quintic() {
        let cfg = quintic_config("5b").unwrap();
        let verts = cfg.faces.iter().filter(|f| f.dim == 0).count();
        assert_eq!(verts, 4);
        let long: Vec<_> = cfg.edges().filter(|e| e.indices.len() == 3).collect();
        assert_eq!(long.len(), 1);
        assert_eq!(edge_discriminant(long[0], &cfg.scaling).unwrap(), int(-3));
        assert_eq!(cfg.faces.last().unwrap().dim, 2);
    }

    #[test]
    fn five_b_values_at_one() {
        let cfg = quintic_config("5b").unwrap();
        let (v, g) = f_c(&cfg, &[int(1), int(1)]).unwrap();
        assert_eq!(v, int(6));
        assert_eq!(g, vec![int(5), int(8)]);
    }

    #[test]
    fn perfect_square_edge() {
        let face = FaceConfig { indices: vec![0, 1, 2], dim: 1 };
        let c = Scaling::new(vec![int(1), int(2), int(1)]).unwrap();
        assert!(edge_discriminant(&face, &c).unwrap().is_zero());
        let vertex = FaceConfig { indices: vec![1], dim: 0 };
        assert_eq!(edge_discriminant(&vertex, &c).unwrap(), int(1));
        let long = FaceConfig { indices: vec![0, 1, 2, 3], dim: 1 };
        assert!(matches!(edge_discriminant(&long, &Scaling::ones(4)), Err(Error::UnsupportedFace(_))));
    }

    #[test]
    fn veronese_first_row_values() {
        let f = veronese_ea(&VeroneseScaling::from_i64([[2, 1, 1], [1, 2, 1], [1, 1, 2]]).unwrap());
        assert_eq!((f.det_c, f.d12, f.d36, f.d14), (int(4), int(3), int(3), int(3)));
    }

    #[test]
    fn rank_singularity_rows() {
        let row = |k: usize| VeroneseScaling::from_i64(VERONESE_TABLE[k].c).unwrap();
        assert_eq!(veronese_rank_singularity(&row(6)), Some((rat(-1, 2), rat(-1, 2))));
        assert_eq!(veronese_rank_singularity(&row(0)), None);
        assert_eq!(veronese_rank_singularity(&row(5)), None);
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        assert!(VeroneseScaling::from_i64([[1, 2, 0], [0, 1, 0], [0, 0, 1]]).is_err());
    }

    #[test]
    fn critical_forms_for_cubic() {
        let a = DesignMatrix::from_rows(vec![vec![2, 1, 0, 1], vec![1, 2, 0, 1]], 4).unwrap();
        let u = DataVector::new(vec![1, 1, 1, 1]).unwrap();
        let forms = critical_linear_system(&a, &Scaling::ones(4), &u).unwrap();
        assert_eq!(forms[0], vec![int(-4), int(0), int(4), int(0)]);
        assert_eq!(forms[1], vec![int(0), int(-4), int(4), int(0)]);
    }

    #[test]
    fn uniform_point_is_not_removed() {
        let cfg = quintic_config("5a").unwrap();
        let gens = quintic_generators("5a").unwrap();
        let p = vec![rat(1, 6); 6];
        assert!(!removal_point_check(&gens, &cfg.matrix, &cfg.scaling, &p, 0.0).unwrap());
    }
}
