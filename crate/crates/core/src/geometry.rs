//! Small integer geometry helpers for planar lattice polygons.

use num_integer::Integer;

use crate::linalg;

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Vertices of the convex hull of planar points, counter-clockwise, without
/// collinear points. Returns indices into `points`.
pub fn convex_hull(points: &[Vec<i64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].cmp(&points[b]));
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && cross(&points[lower[lower.len() - 2]], &points[lower[lower.len() - 1]], &points[i]) <= 0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross(&points[upper[upper.len() - 2]], &points[upper[upper.len() - 1]], &points[i]) <= 0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Number of lattice steps between two lattice points.
pub fn lattice_length(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).fold(0i64, |g, (x, y)| g.gcd(&(x - y)))
}

/// Lattice points on the boundary of the convex hull of a 2-dimensional point set.
pub fn boundary_lattice_count(points: &[Vec<i64>]) -> usize {
    let hull = convex_hull(points);
    (0..hull.len())
        .map(|k| lattice_length(&points[hull[k]], &points[hull[(k + 1) % hull.len()]]) as usize)
        .sum()
}

/// Twice the area of the hull (an integer).
pub fn twice_area(points: &[Vec<i64>]) -> i64 {
    let hull = convex_hull(points);
    let n = hull.len();
    (0..n)
        .map(|k| {
            let (p, q) = (&points[hull[k]], &points[hull[(k + 1) % n]]);
            p[0] * q[1] - p[1] * q[0]
        })
        .sum::<i64>()
        .abs()
}

/// Dimension of the affine span.
pub fn affine_dim(points: &[Vec<i64>]) -> usize {
    let Some(first) = points.first() else { return 0 };
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        return 0;
    }
    linalg::rank(&linalg::from_i64(&diffs))
}

/// True when `p` lies on the closed segment `[a, b]`.
pub fn on_segment(a: &[i64], b: &[i64], p: &[i64]) -> bool {
    let d: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let e: Vec<i64> = p.iter().zip(a).map(|(x, y)| x - y).collect();
    // e = t d with 0 <= t <= 1
    let dd: i64 = d.iter().map(|x| x * x).sum();
    let ed: i64 = e.iter().zip(&d).map(|(x, y)| x * y).sum();
    if dd == 0 {
        return e.iter().all(|&x| x == 0);
    }
    let collinear = (0..d.len()).all(|i| (0..d.len()).all(|j| e[i] * d[j] == e[j] * d[i]));
    collinear && ed >= 0 && ed <= dd
}
