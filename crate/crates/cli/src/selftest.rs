//! Named checks of the worked examples, run against a catalog context so a
//! damaged catalog shows up as a named failure.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use toric_mle::delpezzo::{self, DelPezzoEntry, CLOSED_FORM_LABELS};
use toric_mle::discriminant::{self, VeroneseRow, VeroneseScaling, VERONESE_TABLE};
use toric_mle::ipf::{ipf_solve, normalize_matrix, IpfConfig};
use toric_mle::model::{log_likelihood, parametrize, Binomial, DataVector, DesignMatrix, Scaling};
use toric_mle::phylo::{self, PhyloTree};
use toric_mle::quadratic::QSqrt5;
use toric_mle::rational::{int, rat, Rational};
use toric_mle::tfp;

/// Degree and ML degree of every surface, kept apart from the catalog it checks.
const EXPECTED_DEGREES: [(&str, usize, usize); 16] = [
    ("3", 3, 3),
    ("4a", 4, 4),
    ("4b", 4, 4),
    ("4c", 4, 4),
    ("5a", 5, 3),
    ("5b", 5, 5),
    ("6a", 6, 6),
    ("6b", 6, 6),
    ("6c", 6, 6),
    ("6d", 6, 6),
    ("7a", 7, 7),
    ("7b", 7, 7),
    ("8a", 8, 8),
    ("8b", 8, 8),
    ("8c", 8, 8),
    ("9", 9, 9),
];

pub struct Context {
    pub catalog: Vec<DelPezzoEntry>,
    pub veronese: Vec<VeroneseRow>,
    pub seed: u64,
}

impl Default for Context {
    fn default() -> Self {
        Context { catalog: delpezzo::catalog().to_vec(), veronese: VERONESE_TABLE.to_vec(), seed: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Outcome = Result<String, String>;

fn expect(cond: bool, ok: impl Into<String>, fail: impl Into<String>) -> Outcome {
    if cond {
        Ok(ok.into())
    } else {
        Err(fail.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cubic() -> DesignMatrix {
    DesignMatrix::from_rows(vec![vec![2, 1, 0, 1], vec![1, 2, 0, 1]], 4).expect("rectangular")
}

fn four_leaf() -> PhyloTree {
    PhyloTree::from_edges(&[("L1", "u"), ("L2", "u"), ("u", "v"), ("v", "L3"), ("v", "L4")]).expect("valid tree")
}

const WORKED_LABELS: [&str; 8] = ["00000", "11000", "00011", "11011", "10110", "10101", "01110", "01101"];
const WORKED_COUNTS: [u64; 8] = [17, 5, 27, 5, 16, 5, 19, 6];

fn worked_data(t: &PhyloTree) -> Result<(DataVector, Vec<usize>), String> {
    let labels: Vec<String> = WORKED_LABELS.iter().map(|s| s.to_string()).collect();
    let u = phylo::labeled_data(t, &labels, &WORKED_COUNTS).map_err(err)?;
    let idx = phylo::labels_to_indices(t, &labels).map_err(err)?;
    Ok((u, idx))
}

fn model_checks(out: &mut Vec<(String, Outcome)>) {
    out.push(("model/parametrize-cubic".into(), {
        let p = parametrize(&cubic(), &vec![int(1); 4], &int(1), &[int(2), int(1)]);
        expect(p == Ok(vec![int(4), int(2), int(1), int(2)]), "(4,2,1,2)", format!("{p:?}"))
    }));
    out.push(("model/log-likelihood".into(), {
        let u = DataVector::new(vec![3, 1]).expect("positive total");
        let v = log_likelihood(&[0.5, 0.5], &u);
        let w = -4.0 * 2f64.ln();
        expect((v - w).abs() < 1e-12, format!("{v}"), format!("{v} vs {w}"))
    }));
    out.push(("model/binomial-value".into(), {
        let g = Binomial::parse("p4^3-p1p2p3").map_err(err);
        g.and_then(|g| {
            let v = g.evaluate(&[int(1), int(1), int(1), int(2)]);
            expect(v == int(7), "7", format!("{v}"))
        })
    }));
    out.push(("ipf/normalize-cubic".into(), {
        let n = normalize_matrix(&cubic());
        expect(n.common_sum == 3 && n.matrix.row(2) == [0, 0, 3, 1], "slack row (0,0,3,1)", format!("{:?}", n.matrix.row(2)))
    }));
    out.push(("ipf/cubic-uniform".into(), {
        let u = DataVector::new(vec![1; 4]).expect("positive total");
        ipf_solve(&cubic(), &u, &IpfConfig::default()).map_err(err).and_then(|r| {
            let gap = r.estimate.iter().map(|p| (p - 0.25).abs()).fold(0.0, f64::max);
            expect(r.converged && gap < 1e-10, format!("{} iterations", r.iterations), format!("gap {gap}"))
        })
    }));
}

fn catalog_checks(ctx: &Context, rng: &mut ChaCha8Rng, out: &mut Vec<(String, Outcome)>) {
    out.push(("table1/count".into(), expect(ctx.catalog.len() == 16, "16 entries", format!("{} entries", ctx.catalog.len()))));
    for (label, degree, mld) in EXPECTED_DEGREES {
        let name = format!("table1/{label}");
        let Some(e) = ctx.catalog.iter().find(|e| e.label == label) else {
            out.push((name, Err("missing entry".into())));
            continue;
        };
        let outcome = (|| {
            if e.boundary_points() != degree || e.degree != degree {
                return Err(format!("degree {} with {} boundary points, expected {degree}", e.degree, e.boundary_points()));
            }
            if e.ml_degree != mld {
                return Err(format!("ML degree {}, expected {mld}", e.ml_degree));
            }
            for _ in 0..5 {
                let mut q = || rat(rng.random_range(1..30) * if rng.random_bool(0.5) { 1 } else { -1 }, rng.random_range(1..30));
                let (s, t1, t2) = (q(), q(), q());
                if !delpezzo::generators_vanish_at(e, &s, &[t1, t2]).map_err(err)? {
                    return Err("a generator does not vanish on the parametrization".into());
                }
            }
            Ok(format!("degree {degree}, ML degree {mld}, {} generators", e.generators.len()))
        })();
        out.push((name, outcome));
    }
}

fn closed_form_checks(ctx: &Context, rng: &mut ChaCha8Rng, out: &mut Vec<(String, Outcome)>) {
    out.push(("table2/cubic-polynomial".into(), {
        let p = delpezzo::likelihood_polynomial("3", &int(0), &int(0), &int(1));
        expect(p == Ok(vec![int(28), int(-27), int(9), int(-1)]), "28x^3 - 27x^2 + 9x - 1", format!("{p:?}"))
    }));
    out.push(("table2/cubic-uniform".into(), {
        let u = DataVector::new(vec![1; 4]).expect("positive total");
        delpezzo::closed_form_mle("3", &u, 1e-10).map_err(err).and_then(|r| {
            let gap = r.estimate.iter().map(|p| (p - 0.25).abs()).fold(0.0, f64::max);
            expect((r.x - 0.25).abs() < 1e-12 && gap < 1e-12, "x = 1/4", format!("x = {}", r.x))
        })
    }));
    for label in CLOSED_FORM_LABELS {
        let name = format!("table2/{label}-vs-ipf");
        let outcome = (|| {
            let cf = delpezzo::closed_form_entry(label).map_err(err)?;
            let stored = ctx.catalog.iter().find(|e| e.label == label).map(|e| e.ml_degree);
            let mut worst = 0.0f64;
            for _ in 0..5 {
                let counts: Vec<u64> = (0..cf.design_matrix.cols()).map(|_| rng.random_range(1..200)).collect();
                let u = DataVector::new(counts).map_err(err)?;
                let (roots, adm) = delpezzo::admissible_roots(label, &u).map_err(err)?;
                if adm.len() != 1 {
                    return Err(format!("{} admissible roots among {roots:?}", adm.len()));
                }
                let r = delpezzo::closed_form_mle(label, &u, 1e-10).map_err(err)?;
                let i = ipf_solve(&cf.design_matrix, &u, &IpfConfig::default()).map_err(err)?;
                worst = worst.max(r.estimate.iter().zip(&i.estimate).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
                let (a, b, c) = delpezzo::coefficients(label, &u).map_err(err)?;
                let degree = delpezzo::likelihood_polynomial(label, &a, &b, &c).map_err(err)?.len() - 1;
                if Some(degree) != stored {
                    return Err(format!("polynomial degree {degree}, catalog ML degree {stored:?}"));
                }
            }
            expect(worst < 1e-8, format!("max gap {worst:.1e}"), format!("max gap {worst:.1e}"))
        })();
        out.push((name, outcome));
    }
}

fn veronese_checks(ctx: &Context, out: &mut Vec<(String, Outcome)>) {
    for (k, row) in ctx.veronese.iter().enumerate() {
        let outcome = VeroneseScaling::from_i64(row.c).map_err(err).and_then(|c| {
            let f = discriminant::veronese_ea(&c);
            let drop = discriminant::predict_drop_veronese(&c);
            expect(
                f.pattern() == row.pattern && drop == (row.ml_degree < 4),
                format!("pattern {:?}, ML degree {}", row.pattern, row.ml_degree),
                format!("pattern {:?} vs {:?}, drop {drop}", f.pattern(), row.pattern),
            )
        });
        out.push((format!("table3/row-{}", k + 1), outcome));
    }
    out.push(("table3/row-6-no-torus-point".into(), {
        let c = VeroneseScaling::from_i64([[2, 3, 3], [3, 5, 5], [3, 5, 5]]).map_err(err);
        c.and_then(|c| expect(discriminant::veronese_rank_singularity(&c).is_none(), "none", "unexpected point"))
    }));
}

fn quintic_checks(out: &mut Vec<(String, Outcome)>) {
    out.push(("quintic/5a-singular-points".into(), (|| {
        let cfg = discriminant::quintic_config("5a").map_err(err)?;
        for t in discriminant::quintic_singular_points() {
            let on_curve = (t[0].clone() + t[1].clone()).is_zero()
                && (t[1].clone() * t[1].clone() - t[1].clone() - QSqrt5::new(int(1), int(0))).is_zero();
            if !on_curve || !discriminant::verify_singular_point(&cfg, &t, 0.0).map_err(err)? {
                return Err(format!("{t:?} is not singular"));
            }
        }
        Ok("both points singular, exactly".into())
    })()));
    out.push(("quintic/5a-removal-points".into(), (|| {
        let cfg = discriminant::quintic_config("5a").map_err(err)?;
        let gens = discriminant::quintic_generators("5a").map_err(err)?;
        for p in discriminant::quintic_removal_points().map_err(err)? {
            if !discriminant::removal_point_check(&gens, &cfg.matrix, &Scaling::ones(6), &p, 0.0).map_err(err)? {
                return Err(format!("{p:?} fails"));
            }
        }
        Ok(format!("{} generators and the linear forms vanish", gens.len()))
    })()));
    out.push(("quintic/5b-long-edge".into(), (|| {
        let cfg = discriminant::quintic_config("5b").map_err(err)?;
        let edge = cfg.edges().find(|e| e.indices.len() == 3).ok_or("no edge of length two")?;
        let d = discriminant::edge_discriminant(edge, &cfg.scaling).map_err(err)?;
        expect(d == int(-3), "-3", format!("{d}"))
    })()));
    out.push(("quintic/5b-values".into(), (|| {
        let cfg = discriminant::quintic_config("5b").map_err(err)?;
        let (v, g) = discriminant::f_c(&cfg, &[int(1), int(1)]).map_err(err)?;
        expect(v == int(6) && g == vec![int(5), int(8)], "f = 6, grad = (5, 8)", format!("{v}, {g:?}"))
    })()));
}

fn phylo_checks(out: &mut Vec<(String, Outcome)>) {
    let t = four_leaf();
    out.push(("phylo/tripod-labelings".into(), (|| {
        let tri = PhyloTree::from_edges(&[("a", "x"), ("b", "x"), ("c", "x")]).map_err(err)?;
        let l: Vec<String> = phylo::valid_labelings(&tri).iter().map(|&l| tri.label_string(l)).collect();
        expect(l == ["000", "011", "101", "110"], l.join(" "), l.join(" "))
    })()));
    out.push(("phylo/worked-margins".into(), (|| {
        let (u, _) = worked_data(&t)?;
        let labs = phylo::valid_labelings(&t);
        let m = phylo::marginal(&labs, &u.as_rationals(), &[0, 1, 2]).map_err(err)?;
        let want = [("000", 44), ("110", 10), ("101", 21), ("011", 25)];
        for (pat, v) in want {
            let sub = pat.chars().enumerate().fold(0u64, |s, (k, ch)| s | (u64::from(ch == '1') << k));
            if m.get(sub) != Some(&int(v)) {
                return Err(format!("margin {pat} is {:?}", m.get(sub)));
            }
        }
        let e = phylo::marginal(&labs, &u.as_rationals(), &[2]).map_err(err)?;
        expect(e.values == vec![int(54), int(46)], "(44,10,21,25) and (54,46)", format!("{:?}", e.values))
    })()));
    out.push(("phylo/worked-mle".into(), (|| {
        let (u, idx) = worked_data(&t)?;
        let want = [rat(121, 675), rat(11, 270), rat(176, 675), rat(8, 135), rat(147, 920), rat(231, 4600), rat(35, 184), rat(11, 184)];
        let p = phylo::phylo_mle(&t, &u).map_err(err)?;
        let h = phylo::horn_mle(&phylo::horn_matrix(&t).map_err(err)?, &u).map_err(err)?;
        let c = phylo::tfp_mle(&t, &u).map_err(err)?;
        let ok = idx.iter().zip(&want).all(|(&i, w)| p[i] == *w) && p == h && p == c;
        expect(ok, "121/675, ..., 11/184 by all three routes", "mismatch")
    })()));
    out.push(("phylo/horn-4-leaf".into(), (|| {
        let h = phylo::horn_matrix(&t).map_err(err)?;
        let sums_zero = (0..8).all(|j| h.rows.iter().map(|r| r[j]).sum::<i64>() == 0);
        expect(h.rows.len() == 11 && h.rows[0].len() == 8 && h.lambda == vec![1; 8] && sums_zero, "11 x 8, lambda all 1", "shape or sign mismatch")
    })()));
    out.push(("phylo/staged-tree".into(), (|| {
        let (u, _) = worked_data(&t)?;
        let p = phylo::phylo_mle(&t, &u).map_err(err)?;
        let st = phylo::staged_tree(&t).map_err(err)?;
        let theta = st.theta_at(&t, &p).map_err(err)?;
        let floret_sums = st.florets.iter().all(|f| f.iter().map(|&s| theta[s].clone()).sum::<Rational>() == int(1));
        expect(st.evaluate(&theta) == p && floret_sums && st.params.len() == 8, "8 parameters reproduce the estimate", "reconstruction failed")
    })()));
}

fn tfp_checks(out: &mut Vec<(String, Outcome)>) {
    out.push(("tfp/four-leaf-quads".into(), (|| {
        let g = phylo::generators(&four_leaf()).map_err(err)?;
        expect(g.len() == 2, "2 quadrics", format!("{} generators", g.len()))
    })()));
    out.push(("tfp/five-leaf-generators".into(), (|| {
        let (g, steps) = phylo::generators_by_step(&PhyloTree::caterpillar(5).map_err(err)?).map_err(err)?;
        let last = steps.last().ok_or("no gluing step")?;
        expect((last.lifts, last.quads, g.len()) == (8, 12, 20), "8 lifts + 12 quads", format!("{} + {}", last.lifts, last.quads))
    })()));
    out.push(("tfp/ml-degree-product".into(), {
        let a = tfp::mldeg_product(1, 5);
        let b = tfp::mldeg_product(5, 5);
        expect(a == Ok(5) && b == Ok(25), "5 and 25", format!("{a:?}, {b:?}"))
    }));
}

pub fn run(ctx: &Context, filter: Option<&str>) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut all = Vec::new();
    model_checks(&mut all);
    catalog_checks(ctx, &mut rng, &mut all);
    closed_form_checks(ctx, &mut rng, &mut all);
    veronese_checks(ctx, &mut all);
    quintic_checks(&mut all);
    phylo_checks(&mut all);
    tfp_checks(&mut all);
    all.into_iter()
        .filter(|(name, _)| filter.is_none_or(|f| name.contains(f)))
        .map(|(name, o)| match o {
            Ok(detail) => CheckResult { name, passed: true, detail },
            Err(detail) => CheckResult { name, passed: false, detail },
        })
        .collect()
}

pub fn report(results: &[CheckResult]) -> Value {
    let checks: Vec<Value> =
        results.iter().map(|r| json!({ "name": r.name, "passed": r.passed, "detail": r.detail })).collect();
    let failed = results.iter().filter(|r| !r.passed).count();
    json!({ "checks": checks, "passed": results.len() - failed, "failed": failed })
}
