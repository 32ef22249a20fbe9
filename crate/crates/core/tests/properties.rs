use num_traits::Zero;
use proptest::prelude::*;

use toric_mle::delpezzo;
use toric_mle::discriminant::{self, ScaledConfig, VeroneseScaling};
use toric_mle::ipf::{ipf_solve, ipf_step, IpfConfig};
use toric_mle::model::{birch_residual_generic, log_likelihood, polytope_to_matrix, DataVector, Scaling};
use toric_mle::phylo::{self, PhyloTree};
use toric_mle::rational::{int, rat, Rational};
use toric_mle::tfp::{self, GradedConfig, Shape};

fn nonzero_rat() -> impl Strategy<Value = Rational> {
    (1i64..20, 1i64..20, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

fn positive_rat() -> impl Strategy<Value = Rational> {
    (1i64..30, 1i64..30).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn catalog_generators_vanish_on_parametrization(s in nonzero_rat(), t1 in nonzero_rat(), t2 in nonzero_rat()) {
        for e in delpezzo::catalog() {
            prop_assert!(delpezzo::generators_vanish_at(e, &s, &[t1.clone(), t2.clone()]).unwrap(), "label {}", e.label);
        }
    }

    #[test]
    fn log_likelihood_scale_invariant(
        p in prop::collection::vec(0.01f64..10.0, 5),
        u in prop::collection::vec(0u64..20, 5),
        lambda in 0.001f64..1000.0,
    ) {
        prop_assume!(u.iter().sum::<u64>() > 0);
        let u = DataVector::new(u).unwrap();
        let q: Vec<f64> = p.iter().map(|x| x * lambda).collect();
        let (a, b) = (log_likelihood(&p, &u), log_likelihood(&q, &u));
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn ipf_monotone_and_idempotent(u in prop::collection::vec(1u64..40, 4)) {
        let a = delpezzo::entry("3").unwrap().design_matrix();
        let u = DataVector::new(u).unwrap();
        let cfg = IpfConfig { trace_every: Some(100), ..IpfConfig::default() };
        let r = ipf_solve(&a, &u, &cfg).unwrap();
        prop_assert!(r.converged);
        for w in r.trace.windows(2) {
            prop_assert!(w[1].1 >= w[0].1 - 1e-9 * w[0].1.abs());
        }
        let next = ipf_step(&a, &u, &r.estimate);
        let moved = next.iter().zip(&r.estimate).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(moved < cfg.tolerance);
    }

    #[test]
    fn face_discriminants_scale_covariantly(
        c in prop::collection::vec(nonzero_rat(), 6),
        lambda in nonzero_rat(),
    ) {
        for label in ["5a", "5b", "6a", "8a"] {
            let e = delpezzo::entry(label).unwrap();
            let c = c.iter().cycle().take(e.polytope.len()).cloned().collect::<Vec<_>>();
            let cfg = ScaledConfig::new(e.polytope.clone(), Scaling::new(c.clone()).unwrap()).unwrap();
            let scaled = Scaling::new(c.iter().map(|x| x * &lambda).collect()).unwrap();
            for face in cfg.edges() {
                let (Ok(d0), Ok(d1)) = (
                    discriminant::edge_discriminant(face, &cfg.scaling),
                    discriminant::edge_discriminant(face, &scaled),
                ) else { continue };
                prop_assert_eq!(d0.is_zero(), d1.is_zero());
                if face.indices.len() == 3 {
                    prop_assert_eq!(d1, d0 * &lambda * &lambda);
                }
            }
        }
    }

    #[test]
    fn veronese_pattern_scale_invariant(
        entries in prop::collection::vec(-4i64..5, 6),
        lambda in nonzero_rat(),
    ) {
        let [a, b, c, d, e, f] = [0, 1, 2, 3, 4, 5].map(|k| int(entries[k]));
        let m = [[a.clone(), b.clone(), c.clone()], [b.clone(), d.clone(), e.clone()], [c.clone(), e.clone(), f.clone()]];
        let s = m.clone().map(|r| r.map(|x| x * &lambda));
        let f0 = discriminant::veronese_ea(&VeroneseScaling::new(m).unwrap());
        let f1 = discriminant::veronese_ea(&VeroneseScaling::new(s).unwrap());
        prop_assert_eq!(f0.pattern(), f1.pattern());
        let l2 = &lambda * &lambda;
        prop_assert_eq!(f1.det_c, f0.det_c * &l2 * &lambda);
        prop_assert_eq!(f1.d12, f0.d12 * &l2);
    }
}

/// Grading `e_0, e_1`; each `b` vector is its class's grading vector followed by free entries.
fn graded_config(sizes: (usize, usize, usize, usize), free: &[i64]) -> GradedConfig {
    let mut it = free.iter().cycle();
    let mut block = |i: usize, n: usize, extra: usize| -> Vec<Vec<i64>> {
        (0..n)
            .map(|_| {
                let mut v = vec![i64::from(i == 0), i64::from(i == 1)];
                v.extend((0..extra).map(|_| *it.next().unwrap()));
                v
            })
            .collect()
    };
    let b = vec![block(0, sizes.0, 2), block(1, sizes.1, 2)];
    let c = vec![block(0, sizes.2, 1), block(1, sizes.3, 1)];
    let proj = |w: usize| vec![(0..w).map(|k| i64::from(k == 0)).collect(), (0..w).map(|k| i64::from(k == 1)).collect()];
    GradedConfig::new(vec![vec![1, 0], vec![0, 1]], b, c, proj(4), proj(3)).unwrap()
}

fn shape_of(sizes: (usize, usize, usize, usize)) -> Shape {
    Shape { s: vec![sizes.0, sizes.1], t: vec![sizes.2, sizes.3] }
}

fn sizes() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (1usize..4, 1usize..4, 1usize..4, 1usize..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn product_matrix_splits(sz in sizes(), free in prop::collection::vec(-3i64..4, 8), seed in prop::collection::vec(0i64..50, 36)) {
        let cfg = graded_config(sz, &free);
        let shape = cfg.shape();
        let u: Vec<Rational> = seed.iter().take(shape.z_count()).map(|&x| int(x)).collect();
        let uv = tfp::TfpVector::new(shape, u.clone()).unwrap();
        let m = tfp::marginals(&uv);
        let lhs = tfp::tfp_matrix(&cfg).apply(&u);
        let mut rhs = cfg.b_matrix().apply(&m.b);
        rhs.extend(cfg.c_matrix().apply(&m.c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_reproduces_margins_with_rank_one_slices(sz in sizes(), w in prop::collection::vec(1i64..30, 12)) {
        let shape = shape_of(sz);
        // pB and pC share the class totals pA
        let mut pb = Vec::new();
        let mut pc = Vec::new();
        let mut pa = Vec::new();
        let mut it = w.iter().cycle();
        let mut raw_b = Vec::new();
        let mut raw_c = Vec::new();
        for i in 0..2 {
            raw_b.push((0..shape.s[i]).map(|_| int(*it.next().unwrap())).collect::<Vec<_>>());
            raw_c.push((0..shape.t[i]).map(|_| int(*it.next().unwrap())).collect::<Vec<_>>());
            pa.push(int(*it.next().unwrap()));
        }
        let total: Rational = pa.iter().sum();
        for i in 0..2 {
            let sb: Rational = raw_b[i].iter().sum();
            let sc: Rational = raw_c[i].iter().sum();
            pa[i] = &pa[i] / &total;
            pb.extend(raw_b[i].iter().map(|x| x * &pa[i] / &sb));
            pc.extend(raw_c[i].iter().map(|x| x * &pa[i] / &sc));
        }
        let p = tfp::compose_critical(&shape, &pa, &pb, &pc).unwrap();
        let m = tfp::marginals(&p);
        prop_assert_eq!((&m.a, &m.b, &m.c), (&pa, &pb, &pc));
        prop_assert_eq!(p.values.iter().sum::<Rational>(), int(1));
        for i in 0..2 {
            let sl = p.slice(i);
            for j1 in 0..sl.len() {
                for j2 in j1 + 1..sl.len() {
                    for k1 in 0..sl[0].len() {
                        for k2 in k1 + 1..sl[0].len() {
                            prop_assert!((&sl[j1][k1] * &sl[j2][k2] - &sl[j1][k2] * &sl[j2][k1]).is_zero());
                        }
                    }
                }
            }
        }
        for g in tfp::quad(&shape) {
            prop_assert!(g.evaluate(&p.values).is_zero());
        }
    }

    #[test]
    fn tfp_generators_vanish_on_parametrized_points(sz in sizes(), free in prop::collection::vec(-2i64..3, 8), theta in prop::collection::vec(nonzero_rat(), 7)) {
        let cfg = graded_config(sz, &free);
        let a = tfp::tfp_matrix(&cfg);
        let ones = vec![int(1); a.cols()];
        let p = toric_mle::model::parametrize(&a, &ones, &int(1), &theta).unwrap();
        for g in tfp::generators(&[], &[], &cfg.shape()).unwrap() {
            prop_assert!(g.evaluate(&p).is_zero());
        }
    }
}

fn tree_and_data() -> impl Strategy<Value = (PhyloTree, DataVector)> {
    prop::collection::vec(0usize..20, 0..4).prop_flat_map(|choices| {
        let t = PhyloTree::grown(&choices).unwrap();
        let n = phylo::valid_labelings(&t).len();
        (Just(t), prop::collection::vec(1u64..50, n).prop_map(|u| DataVector::new(u).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn phylo_routes_agree_and_hit_birch_point((t, u) in tree_and_data()) {
        let n = t.leaf_count();
        prop_assert_eq!(phylo::valid_labelings(&t).len(), 1 << (n - 1));
        let direct = phylo::phylo_mle(&t, &u).unwrap();
        prop_assert_eq!(&phylo::tfp_mle(&t, &u).unwrap(), &direct);
        if n >= 4 {
            let h = phylo::horn_matrix(&t).unwrap();
            prop_assert_eq!(h.rows.len(), 6 * (n - 2) - 1);
            for j in 0..h.lambda.len() {
                let col: Vec<i64> = h.rows.iter().map(|r| r[j]).collect();
                prop_assert_eq!(col.iter().sum::<i64>(), 0);
                prop_assert_eq!(col.iter().filter(|&&x| x == 1).count(), n - 2);
                prop_assert_eq!(col.iter().filter(|&&x| x == -1).count(), n - 2);
            }
            prop_assert_eq!(&phylo::horn_mle(&h, &u).unwrap(), &direct);
        }
        let a = polytope_to_matrix(&phylo::polytope(&t));
        let gens = phylo::generators(&t).unwrap();
        prop_assert!(birch_residual_generic(&direct, &u, &a, &gens).unwrap().is_zero());
        let st = phylo::staged_tree(&t).unwrap();
        let theta = st.theta_at(&t, &direct).unwrap();
        prop_assert_eq!(&st.evaluate(&theta), &direct);
        for f in &st.florets {
            prop_assert_eq!(f.iter().map(|&s| theta[s].clone()).sum::<Rational>(), int(1));
        }
    }

    #[test]
    fn staged_tree_reproduces_model_points(choices in prop::collection::vec(0usize..20, 0..3), theta in prop::collection::vec(positive_rat(), 12)) {
        // a model point from the parametrization, normalized
        let t = PhyloTree::grown(&choices).unwrap();
        let a = polytope_to_matrix(&phylo::polytope(&t));
        let ones = vec![int(1); a.cols()];
        let raw = toric_mle::model::parametrize(&a, &ones, &int(1), &theta[..a.rows()]).unwrap();
        let total: Rational = raw.iter().sum();
        let p: Vec<Rational> = raw.iter().map(|x| x / &total).collect();
        let st = phylo::staged_tree(&t).unwrap();
        let th = st.theta_at(&t, &p).unwrap();
        prop_assert_eq!(st.evaluate(&th), p);
    }
}
