//! Group-based binary (CFN) phylogenetic models in Fourier coordinates:
//! parity labelings, the rational MLE of 3-valent trees, the Horn matrix,
//! the toric-fiber-product route and the staged-tree description.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Binomial, DataVector, LatticePolytope};
use crate::rational::{Rational, Scalar};
use crate::tfp::{self, GradedConfig, Shape};

pub const MAX_LEAVES: usize = 20;

/// A labeling of the edges; bit `e` holds the label of edge `e`.
pub type Labeling = u64;

pub fn label_of(l: Labeling, e: usize) -> bool {
    (l >> e) & 1 == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    /// Edges as pairs of vertex names; the order indexes labeling coordinates.
    pub edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhyloTree {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
    incident: Vec<Vec<usize>>,
}

impl PhyloTree {
    /// Vertices are numbered by first appearance in the edge list.
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let id = |n: &str, names: &mut Vec<String>| match names.iter().position(|x| x == n) {
            Some(i) => i,
            None => {
                names.push(n.to_string());
                names.len() - 1
            }
        };
        let mut es = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (a, b) = (id(a.as_ref(), &mut names), id(b.as_ref(), &mut names));
            if a == b {
                return Err(Error::InvalidTree(format!("loop at vertex {}", names[a])));
            }
            es.push((a, b));
        }
        if es.is_empty() {
            return Err(Error::InvalidTree("tree has no edges".into()));
        }
        if es.len() + 1 != names.len() {
            return Err(Error::InvalidTree("edge count must be one less than vertex count".into()));
        }
        let mut incident = vec![Vec::new(); names.len()];
        for (e, &(a, b)) in es.iter().enumerate() {
            incident[a].push(e);
            incident[b].push(e);
        }
        let degrees: Vec<usize> = incident.iter().map(Vec::len).collect();
        // connectivity (with |E| = |V| - 1 this also rules out cycles)
        let mut seen = vec![false; names.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in &incident[v] {
                let w = if es[e].0 == v { es[e].1 } else { es[e].0 };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidTree("tree is not connected".into()));
        }
        if let Some(v) = degrees.iter().position(|&d| d == 2) {
            return Err(Error::InvalidTree(format!("vertex {} has degree 2", names[v])));
        }
        let leaves = degrees.iter().filter(|&&d| d == 1).count();
        if leaves > MAX_LEAVES {
            return Err(Error::TreeTooLarge { leaves, max: MAX_LEAVES });
        }
        Ok(PhyloTree { names, edges: es, degrees, incident })
    }

    pub fn from_spec(spec: &TreeSpec) -> Result<Self> {
        PhyloTree::from_edges(&spec.edges)
    }

    /// A caterpillar on `n >= 3` leaves named `L1..Ln` with inner vertices `v1..v(n-2)`.
    pub fn caterpillar(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument("caterpillar needs at least 3 leaves".into()));
        }
        let mut e = vec![("L1".to_string(), "v1".to_string()), ("L2".to_string(), "v1".to_string())];
        for k in 1..n - 2 {
            e.push((format!("v{k}"), format!("v{}", k + 1)));
            e.push((format!("v{}", k + 1), format!("L{}", k + 2)));
        }
        e.push((format!("v{}", n - 2), format!("L{n}")));
        // order leaf edges of each inner vertex after the spine edge, as in the usual drawing
        PhyloTree::from_edges(&e)
    }

    /// Grows a 3-valent tree from a tripod: each choice subdivides edge
    /// `choice % edge_count` and hangs a new leaf from the new vertex.
    pub fn grown(choices: &[usize]) -> Result<Self> {
        let mut e: Vec<(String, String)> = (1..=3).map(|k| (format!("L{k}"), "v1".to_string())).collect();
        for (step, &c) in choices.iter().enumerate() {
            let k = c % e.len();
            let w = format!("v{}", step + 2);
            let (a, b) = e[k].clone();
            e[k] = (a, w.clone());
            e.push((w.clone(), b));
            e.push((w, format!("L{}", step + 4)));
        }
        PhyloTree::from_edges(&e)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn leaf_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d == 1).count()
    }

    pub fn is_three_valent(&self) -> bool {
        self.degrees.iter().all(|&d| d == 1 || d == 3)
    }

    pub fn inner_vertices(&self) -> Vec<usize> {
        (0..self.names.len()).filter(|&v| self.degrees[v] > 1).collect()
    }

    pub fn is_inner_edge(&self, e: usize) -> bool {
        let (a, b) = self.edges[e];
        self.degrees[a] > 1 && self.degrees[b] > 1
    }

    /// Bit string with edge 0 first.
    pub fn label_string(&self, l: Labeling) -> String {
        (0..self.edge_count()).map(|e| if label_of(l, e) { '1' } else { '0' }).collect()
    }

    pub fn parse_label(&self, s: &str) -> Result<Labeling> {
        if s.len() != self.edge_count() || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::Parse(format!("`{s}` is not a {}-bit labeling", self.edge_count())));
        }
        Ok(s.chars().enumerate().filter(|(_, c)| *c == '1').fold(0, |l, (e, _)| l | (1 << e)))
    }

    fn lex_key(&self, l: Labeling) -> u64 {
        (0..self.edge_count()).fold(0, |k, e| (k << 1) | u64::from(label_of(l, e)))
    }

    fn parity_ok(&self, l: Labeling) -> bool {
        self.inner_vertices()
            .iter()
            .all(|&v| self.incident[v].iter().filter(|&&e| label_of(l, e)).count() % 2 == 0)
    }

    /// For each edge, the leaf edges on the side of its second endpoint.
    fn leaf_edges(&self) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                self.degrees[a] == 1 || self.degrees[b] == 1
            })
            .collect()
    }

    fn side_masks(&self, leaf_edges: &[usize]) -> Vec<u64> {
        // mask over positions in `leaf_edges` of the leaves beyond the second endpoint
        (0..self.edge_count())
            .map(|e| {
                let mut mask = 0u64;
                let mut stack = vec![(self.edges[e].1, e)];
                while let Some((v, via)) = stack.pop() {
                    for &f in &self.incident[v] {
                        if f == via {
                            continue;
                        }
                        let w = if self.edges[f].0 == v { self.edges[f].1 } else { self.edges[f].0 };
                        if let Some(pos) = leaf_edges.iter().position(|&x| x == f) {
                            mask |= 1 << pos;
                        }
                        stack.push((w, f));
                    }
                }
                mask
            })
            .collect()
    }
}

/// All parity-even labelings in lexicographic order of the bit string (edge 0 first).
pub fn valid_labelings(t: &PhyloTree) -> Vec<Labeling> {
    let leaf_edges = t.leaf_edges();
    let masks = t.side_masks(&leaf_edges);
    let mut out = Vec::with_capacity(1 << leaf_edges.len().saturating_sub(1));
    for assign in 0u64..(1u64 << leaf_edges.len()) {
        // leaf labels sum to an even number unless the tree is a single edge
        if t.edge_count() > 1 && assign.count_ones() % 2 == 1 {
            continue;
        }
        let mut l: Labeling = 0;
        for e in 0..t.edge_count() {
            let bit = match leaf_edges.iter().position(|&x| x == e) {
                Some(pos) => (assign >> pos) & 1 == 1,
                None => (assign & masks[e]).count_ones() % 2 == 1,
            };
            if bit {
                l |= 1 << e;
            }
        }
        debug_assert!(t.parity_ok(l));
        out.push(l);
    }
    out.sort_by_key(|&l| t.lex_key(l));
    out
}

/// Labelings as 0/1 points in edge coordinates.
pub fn polytope(t: &PhyloTree) -> LatticePolytope {
    let pts = valid_labelings(t)
        .into_iter()
        .map(|l| (0..t.edge_count()).map(|e| i64::from(label_of(l, e))).collect())
        .collect();
    LatticePolytope::from_distinct(pts)
}

/// Positions of the given labelings in the canonical order.
pub fn labels_to_indices(t: &PhyloTree, labels: &[String]) -> Result<Vec<usize>> {
    let canon = valid_labelings(t);
    let pos: HashMap<Labeling, usize> = canon.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut used = vec![false; canon.len()];
    let idx = labels
        .iter()
        .map(|s| {
            let l = t.parse_label(s)?;
            let &i = pos.get(&l).ok_or_else(|| Error::UnknownLabel(s.clone()))?;
            if std::mem::replace(&mut used[i], true) {
                return Err(Error::InvalidArgument(format!("labeling {s} listed twice")));
            }
            Ok(i)
        })
        .collect::<Result<Vec<_>>>()?;
    if idx.len() != canon.len() {
        return Err(Error::Dimension(format!("expected {} labelings, got {}", canon.len(), idx.len())));
    }
    Ok(idx)
}

/// Counts listed against explicit labelings, reordered to the canonical order.
pub fn labeled_data(t: &PhyloTree, labels: &[String], counts: &[u64]) -> Result<DataVector> {
    if labels.len() != counts.len() {
        return Err(Error::Dimension(format!("{} labels but {} counts", labels.len(), counts.len())));
    }
    let idx = labels_to_indices(t, labels)?;
    let mut out = vec![0; counts.len()];
    for (&i, &c) in idx.iter().zip(counts) {
        out[i] = c;
    }
    DataVector::new(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tripod {
    pub vertex: usize,
    /// Incident edges in edge order.
    pub edges: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub tripods: Vec<Tripod>,
    pub inner_edges: Vec<usize>,
}

pub fn tripod_decomposition(t: &PhyloTree) -> Result<Decomposition> {
    if !t.is_three_valent() {
        return Err(Error::NotThreeValent);
    }
    let tripods: Vec<Tripod> = t
        .inner_vertices()
        .into_iter()
        .map(|v| {
            let mut e = t.incident[v].clone();
            e.sort_unstable();
            Tripod { vertex: v, edges: [e[0], e[1], e[2]] }
        })
        .collect();
    if tripods.is_empty() {
        return Err(Error::NotApplicable("a tree needs an inner vertex for a tripod decomposition".into()));
    }
    let inner_edges = (0..t.edge_count()).filter(|&e| t.is_inner_edge(e)).collect();
    Ok(Decomposition { tripods, inner_edges })
}

/// Sorted edge subset with the labels it sees, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Margin<T> {
    pub edges: Vec<usize>,
    /// Restrictions, bit `m` = label of `edges[m]`.
    pub labels: Vec<u64>,
    pub values: Vec<T>,
}

impl<T: Scalar> Margin<T> {
    pub fn get(&self, sub: u64) -> Option<&T> {
        self.labels.iter().position(|&l| l == sub).map(|i| &self.values[i])
    }
}

pub fn restrict(l: Labeling, edges: &[usize]) -> u64 {
    edges.iter().enumerate().fold(0, |acc, (m, &e)| acc | (u64::from(label_of(l, e)) << m))
}

fn sub_lex_key(sub: u64, len: usize) -> u64 {
    (0..len).fold(0, |k, m| (k << 1) | ((sub >> m) & 1))
}

/// Pattern such as `000++` for a restriction to `edges`.
pub fn pattern(t: &PhyloTree, edges: &[usize], sub: u64) -> String {
    (0..t.edge_count())
        .map(|e| match edges.iter().position(|&x| x == e) {
            Some(m) => if (sub >> m) & 1 == 1 { '1' } else { '0' },
            None => '+',
        })
        .collect()
}

/// Sums of `u` (indexed by `labelings`) over each restriction to `edges`.
pub fn marginal<T: Scalar>(labelings: &[Labeling], u: &[T], edges: &[usize]) -> Result<Margin<T>> {
    if labelings.len() != u.len() {
        return Err(Error::Dimension(format!("{} labelings but {} values", labelings.len(), u.len())));
    }
    let mut edges = edges.to_vec();
    edges.sort_unstable();
    edges.dedup();
    let mut acc: HashMap<u64, T> = HashMap::new();
    for (&l, x) in labelings.iter().zip(u) {
        let e = acc.entry(restrict(l, &edges)).or_insert_with(T::zero);
        *e = e.clone() + x.clone();
    }
    let mut labels: Vec<u64> = acc.keys().copied().collect();
    labels.sort_by_key(|&s| sub_lex_key(s, edges.len()));
    let values = labels.iter().map(|s| acc[s].clone()).collect();
    Ok(Margin { edges, labels, values })
}

fn check_data(t: &PhyloTree, labelings: &[Labeling], u: &DataVector) -> Result<()> {
    if u.len() != labelings.len() {
        return Err(Error::Dimension(format!(
            "tree has {} labelings, data has {} entries",
            labelings.len(),
            u.len()
        )));
    }
    let _ = t;
    Ok(())
}

/// The exact MLE of a 3-valent tree model, indexed like [`valid_labelings`].
pub fn phylo_mle(t: &PhyloTree, u: &DataVector) -> Result<Vec<Rational>> {
    let dec = tripod_decomposition(t)?;
    let labs = valid_labelings(t);
    check_data(t, &labs, u)?;
    let uq = u.normalized();
    if dec.tripods.len() == 1 {
        return Ok(uq);
    }
    let tri: Vec<Margin<Rational>> =
        dec.tripods.iter().map(|tp| marginal(&labs, &uq, &tp.edges)).collect::<Result<_>>()?;
    let edg: Vec<Margin<Rational>> =
        dec.inner_edges.iter().map(|&e| marginal(&labs, &uq, &[e])).collect::<Result<_>>()?;
    labs.iter()
        .map(|&l| {
            let mut num = Rational::one();
            for m in &tri {
                num *= m.get(restrict(l, &m.edges)).expect("restriction of a valid labeling");
            }
            let mut den = Rational::one();
            for m in &edg {
                let v = m.get(restrict(l, &m.edges)).cloned().unwrap_or_else(Rational::zero);
                if v.is_zero() {
                    return Err(Error::BoundaryData(format!("edge {} has an empty margin", m.edges[0] + 1)));
                }
                den *= v;
            }
            Ok(num / den)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HornData {
    pub rows: Vec<Vec<i64>>,
    pub row_labels: Vec<String>,
    pub column_labels: Vec<String>,
    pub lambda: Vec<i64>,
}

/// Tripod indicator rows, then inner-edge rows with -1, then the global -1 row.
pub fn horn_matrix(t: &PhyloTree) -> Result<HornData> {
    let dec = tripod_decomposition(t)?;
    if dec.tripods.len() < 2 {
        return Err(Error::NotApplicable("the tripod MLE is linear; no Horn matrix needed".into()));
    }
    let labs = valid_labelings(t);
    let ones = vec![1.0f64; labs.len()];
    let mut rows = Vec::new();
    let mut row_labels = Vec::new();
    let mut add_rows = |edges: &[usize], sign: i64| -> Result<()> {
        let m = marginal(&labs, &ones, edges)?;
        for &sub in &m.labels {
            rows.push(labs.iter().map(|&l| if restrict(l, &m.edges) == sub { sign } else { 0 }).collect());
            row_labels.push(pattern(t, &m.edges, sub));
        }
        Ok(())
    };
    for tp in &dec.tripods {
        add_rows(&tp.edges, 1)?;
    }
    for &e in &dec.inner_edges {
        add_rows(&[e], -1)?;
    }
    rows.push(vec![-1; labs.len()]);
    row_labels.push("+".repeat(t.edge_count()));
    let sign = if (t.leaf_count() - 2).is_multiple_of(2) { 1 } else { -1 };
    Ok(HornData {
        rows,
        row_labels,
        column_labels: labs.iter().map(|&l| t.label_string(l)).collect(),
        lambda: vec![sign; labs.len()],
    })
}

/// `p_j = lambda_j prod_i (sum_k h_ik u_k)^{h_ij}`, exactly.
pub fn horn_mle(hd: &HornData, u: &DataVector) -> Result<Vec<Rational>> {
    let n = hd.lambda.len();
    if u.len() != n || hd.rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("Horn matrix and data sizes differ".into()));
    }
    let uq = u.as_rationals();
    let forms: Vec<Rational> = hd
        .rows
        .iter()
        .map(|r| r.iter().zip(&uq).filter(|(h, _)| **h != 0).map(|(h, x)| Rational::from_integer((*h).into()) * x).sum())
        .collect();
    (0..n)
        .map(|j| {
            let mut p = Rational::from_integer(hd.lambda[j].into());
            for (i, f) in forms.iter().enumerate() {
                let h = hd.rows[i][j];
                if h == 0 {
                    continue;
                }
                if h < 0 && f.is_zero() {
                    return Err(Error::BoundaryData(format!("linear form {} vanishes", hd.row_labels[i])));
                }
                p *= f.pow_int(h);
            }
            Ok(p)
        })
        .collect()
}

/// Tripods in breadth-first order from the first one, each (after the first)
/// with the edge it shares with an earlier tripod.
pub fn gluing_order(dec: &Decomposition) -> Vec<(usize, Option<usize>)> {
    let k = dec.tripods.len();
    let mut order = vec![(0, None)];
    let mut done = vec![false; k];
    done[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(a) = queue.pop_front() {
        for b in 0..k {
            if done[b] {
                continue;
            }
            if let Some(&e) = dec.tripods[a].edges.iter().find(|e| dec.tripods[b].edges.contains(e)) {
                done[b] = true;
                order.push((b, Some(e)));
                queue.push_back(b);
            }
        }
    }
    order
}

/// One gluing step: the subtree built so far (`left`) and a new tripod glued
/// along `shared`, graded by the label of the shared edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Gluing {
    pub shared: usize,
    pub left_edges: Vec<usize>,
    pub right_edges: Vec<usize>,
    /// `left[i]`: restrictions to `left_edges` with shared label `i`, lexicographic.
    pub left: Vec<Vec<u64>>,
    pub right: Vec<Vec<u64>>,
    pub union_edges: Vec<usize>,
}

impl Gluing {
    pub fn new(labs: &[Labeling], left_edges: &[usize], right_edges: &[usize], shared: usize) -> Result<Self> {
        let ones = vec![1.0f64; labs.len()];
        let group = |edges: &[usize]| -> Result<Vec<Vec<u64>>> {
            let m = marginal(labs, &ones, edges)?;
            let pos = m.edges.iter().position(|&e| e == shared).expect("shared edge present");
            Ok((0..2).map(|i| m.labels.iter().copied().filter(|s| (s >> pos) & 1 == i).collect()).collect())
        };
        let mut union_edges: Vec<usize> = left_edges.iter().chain(right_edges).copied().collect();
        union_edges.sort_unstable();
        union_edges.dedup();
        let mut l = left_edges.to_vec();
        l.sort_unstable();
        let mut r = right_edges.to_vec();
        r.sort_unstable();
        Ok(Gluing { shared, left: group(&l)?, right: group(&r)?, left_edges: l, right_edges: r, union_edges })
    }

    pub fn shape(&self) -> Shape {
        Shape { s: self.left.iter().map(Vec::len).collect(), t: self.right.iter().map(Vec::len).collect() }
    }

    fn widen(sub: u64, from: &[usize]) -> Labeling {
        from.iter().enumerate().fold(0, |l, (m, &e)| l | (((sub >> m) & 1) << e))
    }

    /// The labeling (restricted to the union) of the z-variable `(i, j, k)`.
    pub fn joined(&self, i: usize, j: usize, k: usize) -> u64 {
        let full = Self::widen(self.left[i][j], &self.left_edges) | Self::widen(self.right[i][k], &self.right_edges);
        restrict(full, &self.union_edges)
    }

    /// Homogenized configurations `(1, labels)` graded by the shared label.
    pub fn config(&self) -> Result<GradedConfig> {
        let side = |edges: &[usize], groups: &[Vec<u64>]| {
            let pos = edges.iter().position(|&e| e == self.shared).expect("shared edge present");
            let vecs: Vec<Vec<Vec<i64>>> = groups
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|&s| std::iter::once(1).chain((0..edges.len()).map(|m| ((s >> m) & 1) as i64)).collect())
                        .collect()
                })
                .collect();
            let mut pick = vec![0i64; edges.len() + 1];
            pick[pos + 1] = 1;
            let mut rest = vec![0i64; edges.len() + 1];
            rest[0] = 1;
            rest[pos + 1] = -1;
            (vecs, vec![pick, rest])
        };
        let (b, pi1) = side(&self.left_edges, &self.left);
        let (c, pi2) = side(&self.right_edges, &self.right);
        GradedConfig::new(vec![vec![0, 1], vec![1, 0]], b, c, pi1, pi2)
    }
}

/// The MLE assembled by composing tripod estimates along the gluing order.
pub fn tfp_mle(t: &PhyloTree, u: &DataVector) -> Result<Vec<Rational>> {
    let dec = tripod_decomposition(t)?;
    let labs = valid_labelings(t);
    check_data(t, &labs, u)?;
    let uq = u.normalized();
    let order = gluing_order(&dec);
    let first = &dec.tripods[order[0].0];
    let m0 = marginal(&labs, &uq, &first.edges)?;
    let mut edges = m0.edges.clone();
    let mut current: HashMap<u64, Rational> = m0.labels.iter().copied().zip(m0.values).collect();
    for &(ti, shared) in &order[1..] {
        let shared = shared.expect("glued tripods share an edge");
        let tp = &dec.tripods[ti];
        let g = Gluing::new(&labs, &edges, &tp.edges, shared)?;
        let right = marginal(&labs, &uq, &tp.edges)?;
        let edge = marginal(&labs, &uq, &[shared])?;
        let pa: Vec<Rational> = (0..2).map(|i| edge.get(i).cloned().unwrap_or_else(Rational::zero)).collect();
        let pb: Vec<Rational> = g.left.iter().flatten().map(|s| current[s].clone()).collect();
        let pc: Vec<Rational> =
            g.right.iter().flatten().map(|s| right.get(*s).cloned().expect("tripod restriction")).collect();
        let shape = g.shape();
        let composed = tfp::compose_critical(&shape, &pa, &pb, &pc)?;
        let mut next = HashMap::new();
        for i in 0..shape.r() {
            for j in 0..shape.s[i] {
                for k in 0..shape.t[i] {
                    next.insert(g.joined(i, j, k), composed.get(i, j, k).clone());
                }
            }
        }
        current = next;
        edges = g.union_edges;
    }
    labs.iter()
        .map(|&l| current.get(&restrict(l, &edges)).cloned().ok_or_else(|| Error::InvalidTree("tripods do not cover the tree".into())))
        .collect()
}

/// Generators of the model ideal over the canonical labeling order, built
/// recursively from `Lift` and `Quad`.
pub fn generators(t: &PhyloTree) -> Result<Vec<Binomial>> {
    Ok(generators_by_step(t)?.0)
}

/// Sizes of `Lift(F)` and `Quad` at one gluing step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GluingStep {
    pub tripod: usize,
    pub shared_edge: usize,
    pub lifts: usize,
    pub quads: usize,
}

/// The generators together with the lift and quad counts of every gluing step.
pub fn generators_by_step(t: &PhyloTree) -> Result<(Vec<Binomial>, Vec<GluingStep>)> {
    let mut steps = Vec::new();
    let dec = tripod_decomposition(t)?;
    let labs = valid_labelings(t);
    let order = gluing_order(&dec);
    let mut edges = dec.tripods[order[0].0].edges.to_vec();
    // sub-labelings of the current subtree in lexicographic order, and its generators over them
    let ones = vec![1.0f64; labs.len()];
    let mut subs = marginal(&labs, &ones, &edges)?.labels;
    let mut gens: Vec<Binomial> = Vec::new();
    for &(ti, shared) in &order[1..] {
        let shared = shared.expect("glued tripods share an edge");
        let g = Gluing::new(&labs, &edges, &dec.tripods[ti].edges, shared)?;
        let shape = g.shape();
        let mut to_x = vec![0usize; subs.len()];
        for (i, grp) in g.left.iter().enumerate() {
            for (j, s) in grp.iter().enumerate() {
                to_x[subs.iter().position(|x| x == s).expect("sub-labeling")] = shape.x_index(i, j);
            }
        }
        let f: Vec<Binomial> = gens.iter().map(|b| b.relabel(&to_x)).collect();
        let z = tfp::generators(&f, &[], &shape)?;
        let quads = tfp::quad(&shape).len();
        steps.push(GluingStep { tripod: ti, shared_edge: shared, lifts: z.len() - quads, quads });
        let next_subs = marginal(&labs, &ones, &g.union_edges)?.labels;
        let pos: HashMap<u64, usize> = next_subs.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut from_z = vec![0usize; shape.z_count()];
        for i in 0..shape.r() {
            for j in 0..shape.s[i] {
                for k in 0..shape.t[i] {
                    from_z[shape.z_index(i, j, k)] = pos[&g.joined(i, j, k)];
                }
            }
        }
        gens = z.iter().map(|b| b.relabel(&from_z)).collect();
        subs = next_subs;
        edges = g.union_edges;
    }
    // subs now index all labelings lexicographically, which is the canonical order
    debug_assert_eq!(subs.len(), labs.len());
    Ok((gens, steps))
}

/// A parameter of the staged tree: a tripod margin, conditioned on the
/// shared edge for every tripod after the first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageParam {
    pub name: String,
    pub tripod: usize,
    /// Tripod labeling as a pattern, e.g. `++000`.
    pub numerator: String,
    /// Shared-edge pattern, e.g. `++0++`, absent for the root stage.
    pub denominator: Option<String>,
    #[serde(skip)]
    num_edges: Vec<usize>,
    #[serde(skip)]
    num_sub: u64,
    #[serde(skip)]
    den: Option<(usize, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StagedTree {
    pub params: Vec<StageParam>,
    /// Florets as lists of parameter indices; florets are equal or disjoint.
    pub florets: Vec<Vec<usize>>,
    /// Root-to-leaf path of every labeling (canonical order) as parameter indices.
    pub paths: Vec<Vec<usize>>,
    pub leaf_labels: Vec<String>,
}

impl StagedTree {
    /// `mu[s][j]`: how often parameter `s` occurs on path `j`.
    pub fn mu(&self) -> Vec<Vec<u32>> {
        let mut mu = vec![vec![0; self.paths.len()]; self.params.len()];
        for (j, path) in self.paths.iter().enumerate() {
            for &s in path {
                mu[s][j] += 1;
            }
        }
        mu
    }

    /// Parameter values at a distribution given in canonical order.
    pub fn theta_at(&self, t: &PhyloTree, p: &[Rational]) -> Result<Vec<Rational>> {
        let labs = valid_labelings(t);
        self.params
            .iter()
            .map(|s| {
                let num = marginal(&labs, p, &s.num_edges)?.get(s.num_sub).cloned().unwrap_or_else(Rational::zero);
                match s.den {
                    None => Ok(num),
                    Some((e, bit)) => {
                        let den = marginal(&labs, p, &[e])?.get(bit).cloned().unwrap_or_else(Rational::zero);
                        if den.is_zero() {
                            return Err(Error::BoundaryData(format!("edge {} has zero margin", e + 1)));
                        }
                        Ok(num / den)
                    }
                }
            })
            .collect()
    }

    /// `p_j = prod_s theta_s^{mu_sj}`.
    pub fn evaluate(&self, theta: &[Rational]) -> Vec<Rational> {
        self.paths.iter().map(|path| path.iter().map(|&s| theta[s].clone()).product()).collect()
    }

    /// Number of vertices of the rooted tree.
    pub fn vertex_count(&self) -> usize {
        let mut prefixes = std::collections::HashSet::new();
        for path in &self.paths {
            for k in 0..=path.len() {
                prefixes.insert(path[..k].to_vec());
            }
        }
        prefixes.len()
    }
}

pub fn staged_tree(t: &PhyloTree) -> Result<StagedTree> {
    let dec = tripod_decomposition(t)?;
    let labs = valid_labelings(t);
    let ones = vec![1.0f64; labs.len()];
    let order = gluing_order(&dec);
    let mut params = Vec::new();
    let mut florets = Vec::new();
    // per stage: map from the tripod restriction to its parameter index
    let mut stage_maps: Vec<(Vec<usize>, HashMap<u64, usize>)> = Vec::new();
    for (stage, &(ti, shared)) in order.iter().enumerate() {
        let edges = dec.tripods[ti].edges.to_vec();
        let m = marginal(&labs, &ones, &edges)?;
        let mut map = HashMap::new();
        let groups: Vec<Vec<u64>> = match shared {
            None => vec![m.labels.clone()],
            Some(e) => {
                let pos = edges.iter().position(|&x| x == e).expect("shared edge in tripod");
                (0..2).map(|i| m.labels.iter().copied().filter(|s| (s >> pos) & 1 == i).collect()).collect()
            }
        };
        for (bit, grp) in groups.iter().enumerate() {
            let mut floret = Vec::new();
            for &sub in grp {
                let den = shared.map(|e| (e, bit as u64));
                params.push(StageParam {
                    name: format!("theta_{}", params.len() + 1),
                    tripod: ti,
                    numerator: pattern(t, &edges, sub),
                    denominator: shared.map(|e| pattern(t, &[e], bit as u64)),
                    num_edges: edges.clone(),
                    num_sub: sub,
                    den,
                });
                map.insert(sub, params.len() - 1);
                floret.push(params.len() - 1);
            }
            florets.push(floret);
        }
        let _ = stage;
        stage_maps.push((edges, map));
    }
    let paths = labs
        .iter()
        .map(|&l| stage_maps.iter().map(|(edges, map)| map[&restrict(l, edges)]).collect())
        .collect();
    Ok(StagedTree { params, florets, paths, leaf_labels: labs.iter().map(|&l| t.label_string(l)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    pub(crate) fn four_leaf() -> PhyloTree {
        PhyloTree::from_edges(&[("L1", "u"), ("L2", "u"), ("u", "v"), ("v", "L3"), ("v", "L4")]).unwrap()
    }

    fn tripod() -> PhyloTree {
        PhyloTree::from_edges(&[("a", "x"), ("b", "x"), ("c", "x")]).unwrap()
    }

    #[test]
    fn labelings_of_small_trees() {
        let t = tripod();
        let l: Vec<String> = valid_labelings(&t).iter().map(|&l| t.label_string(l)).collect();
        assert_eq!(l, ["000", "011", "101", "110"]);
        let e = PhyloTree::from_edges(&[("a", "b")]).unwrap();
        assert_eq!(valid_labelings(&e).len(), 2);
        let f = four_leaf();
        let l: Vec<String> = valid_labelings(&f).iter().map(|&l| f.label_string(l)).collect();
        assert_eq!(l, ["00000", "00011", "01101", "01110", "10101", "10110", "11000", "11011"]);
    }

    const WORKED_LABELS: [&str; 8] = ["00000", "11000", "00011", "11011", "10110", "10101", "01110", "01101"];

    fn worked() -> (PhyloTree, DataVector, Vec<usize>) {
        let t = four_leaf();
        let labels: Vec<String> = WORKED_LABELS.iter().map(|s| s.to_string()).collect();
        let u = labeled_data(&t, &labels, &[17, 5, 27, 5, 16, 5, 19, 6]).unwrap();
        let idx = labels_to_indices(&t, &labels).unwrap();
        (t, u, idx)
    }

    #[test]
    fn worked_example_all_routes() {
        let (t, u, idx) = worked();
        let expected = [rat(121, 675), rat(11, 270), rat(176, 675), rat(8, 135), rat(147, 920), rat(231, 4600), rat(35, 184), rat(11, 184)];
        let direct = phylo_mle(&t, &u).unwrap();
        for (k, &i) in idx.iter().enumerate() {
            assert_eq!(direct[i], expected[k]);
        }
        assert_eq!(horn_mle(&horn_matrix(&t).unwrap(), &u).unwrap(), direct);
        assert_eq!(tfp_mle(&t, &u).unwrap(), direct);
        let labs = valid_labelings(&t);
        let m = marginal(&labs, &u.as_rationals(), &[2]).unwrap();
        assert_eq!(m.values, vec![int(54), int(46)]);
        let st = staged_tree(&t).unwrap();
        let theta = st.theta_at(&t, &direct).unwrap();
        assert_eq!(st.evaluate(&theta), direct);
        for f in &st.florets {
            assert_eq!(f.iter().map(|&s| theta[s].clone()).sum::<Rational>(), int(1));
        }
        assert_eq!(st.params[4].numerator, "++000");
        assert_eq!(st.params[4].denominator.as_deref(), Some("++0++"));
        for g in generators(&t).unwrap() {
            assert!(g.evaluate(&direct).is_zero());
        }
    }

    #[test]
    fn horn_rows_by_label() {
        let t = four_leaf();
        let h = horn_matrix(&t).unwrap();
        let row = |label: &str| h.rows[h.row_labels.iter().position(|l| l == label).unwrap()].clone();
        let col = |label: &str| h.column_labels.iter().position(|l| l == label).unwrap();
        // row 000++ has +1 in columns 00000 and 00011
        let r = row("000++");
        assert_eq!((r[col("00000")], r[col("00011")], r.iter().sum::<i64>()), (1, 1, 2));
        let r = row("++1++");
        assert_eq!((r[col("10110")], r[col("00000")]), (-1, 0));
        assert_eq!(h.lambda, vec![1; 8]);
        for j in 0..8 {
            let c: Vec<i64> = h.rows.iter().map(|r| r[j]).collect();
            assert_eq!(c.iter().sum::<i64>(), 0);
            assert_eq!(c.iter().filter(|&&x| x == 1).count(), 2);
        }
    }

    #[test]
    fn invalid_trees() {
        assert!(matches!(PhyloTree::from_edges(&[("a", "b"), ("b", "c")]), Err(Error::InvalidTree(_))));
        assert!(matches!(
            PhyloTree::from_edges(&[("a", "b"), ("b", "a")]),
            Err(Error::InvalidTree(_))
        ));
        let claw = PhyloTree::from_edges(&[("a", "x"), ("b", "x"), ("c", "x"), ("d", "x")]).unwrap();
        assert_eq!(valid_labelings(&claw).len(), 8);
        assert!(matches!(phylo_mle(&claw, &DataVector::new(vec![1; 8]).unwrap()), Err(Error::NotThreeValent)));
    }

    #[test]
    fn decomposition_counts() {
        let d = tripod_decomposition(&four_leaf()).unwrap();
        assert_eq!((d.tripods.len(), d.inner_edges.len()), (2, 1));
        let d = tripod_decomposition(&PhyloTree::caterpillar(5).unwrap()).unwrap();
        assert_eq!((d.tripods.len(), d.inner_edges.len()), (3, 2));
    }

    #[test]
    fn uniform_four_leaf() {
        let t = four_leaf();
        let u = DataVector::new(vec![1; 8]).unwrap();
        let labs = valid_labelings(&t);
        let m = marginal(&labs, &u.as_rationals(), &[0, 1, 2]).unwrap();
        assert!(m.values.iter().all(|v| *v == int(2)));
        assert!(phylo_mle(&t, &u).unwrap().iter().all(|p| *p == rat(1, 8)));
        assert!(horn_mle(&horn_matrix(&t).unwrap(), &u).unwrap().iter().all(|p| *p == rat(1, 8)));
    }

    #[test]
    fn horn_shape() {
        let h = horn_matrix(&PhyloTree::caterpillar(5).unwrap()).unwrap();
        assert_eq!((h.rows.len(), h.rows[0].len()), (17, 16));
        assert!(h.lambda.iter().all(|&x| x == -1));
        assert!(matches!(horn_matrix(&tripod()), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn staged_tree_for_tripod() {
        let st = staged_tree(&tripod()).unwrap();
        assert_eq!(st.params.len(), 4);
        assert_eq!(st.florets.len(), 1);
        assert_eq!(st.vertex_count(), 5);
    }

    #[test]
    fn generators_small_trees() {
        assert!(generators(&tripod()).unwrap().is_empty());
        assert_eq!(generators(&four_leaf()).unwrap().len(), 2);
        assert_eq!(generators(&PhyloTree::caterpillar(5).unwrap()).unwrap().len(), 20);
    }
}
