//! One function per subcommand, each returning the payload and diagnostics.

use std::path::Path;

use serde_json::{json, Value};
use toric_mle::delpezzo::{self, CLOSED_FORM_LABELS};
use toric_mle::discriminant::{self, ScaledConfig, VeroneseScaling, VERONESE_TABLE};
use toric_mle::ipf::{ipf_solve, ipf_solve_scaled, IpfConfig};
use toric_mle::linalg;
use toric_mle::model::{birch_residual_generic, polytope_to_matrix, DataVector, DesignMatrix};
use toric_mle::phylo::{self, PhyloTree};
use toric_mle::rational::{rational_to_f64, Rational};
use toric_mle::tfp::{self, GradedConfig, Shape};
use toric_mle::Error;

use crate::args::Method;
use crate::error::CliResult;
use crate::input;
use crate::output::{exact, exacts, float, floats, residual, Success};

fn ipf_config(tol: Option<f64>, max_iter: Option<usize>) -> IpfConfig {
    let d = IpfConfig::default();
    IpfConfig { tolerance: tol.unwrap_or(d.tolerance), max_iterations: max_iter.unwrap_or(d.max_iterations), trace_every: None }
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn mle_loglinear(model: &Path, data: &Path, tol: Option<f64>, max_iter: Option<usize>) -> CliResult<Success> {
    let m = input::model(model)?;
    let u = input::data_vector(data)?;
    let a = polytope_to_matrix(&m.polytope);
    let c: Vec<f64> = m.scaling.values().iter().map(rational_to_f64).collect();
    let cfg = ipf_config(tol, max_iter);
    let r = ipf_solve_scaled(&a, &u, &c, &cfg)?;
    let birch = birch_residual_generic(&r.estimate, &u, &a, &[])?;
    Ok(Success::with(
        json!({
            "estimate": floats(&r.estimate),
            "iterations": r.iterations,
            "final_residual": float(r.final_residual),
            "status": r.status,
            "converged": r.converged,
        }),
        json!({ "tolerance": float(cfg.tolerance), "birch_residual": residual(&birch) }),
    ))
}

pub fn mle_delpezzo(label: &str, data: &Path, tol: Option<f64>) -> CliResult<Success> {
    let entry = delpezzo::entry(label)?;
    let u = input::data_vector(data)?;
    if u.len() != entry.polytope.len() {
        return Err(Error::Dimension(format!("surface {label} has {} points, data has {}", entry.polytope.len(), u.len())).into());
    }
    let a = entry.design_matrix();
    let ipf = ipf_solve(&a, &u, &ipf_config(None, None))?;
    if !CLOSED_FORM_LABELS.contains(&label) {
        let birch = birch_residual_generic(&ipf.estimate, &u, &a, &entry.generators)?;
        return Ok(Success::with(
            json!({
                "label": label,
                "method": "iterative_scaling",
                "estimate": floats(&ipf.estimate),
                "iterations": ipf.iterations,
                "converged": ipf.converged,
            }),
            json!({ "birch_residual": residual(&birch), "ml_degree": entry.ml_degree }),
        ));
    }
    let cf = delpezzo::closed_form_entry(label)?;
    // closed-form formulas use their own variable order
    let counts: Vec<u64> = cf.to_catalog.iter().map(|&k| u.counts()[k]).collect();
    let r = delpezzo::closed_form_mle(label, &DataVector::new(counts)?, tol.unwrap_or(1e-10))?;
    let mut estimate = vec![0.0; r.estimate.len()];
    for (k, &c) in cf.to_catalog.iter().enumerate() {
        estimate[c] = r.estimate[k];
    }
    let (qa, qb, qc) = &r.coefficients;
    let poly = delpezzo::likelihood_polynomial(label, qa, qb, qc)?;
    Ok(Success::with(
        json!({
            "label": label,
            "method": "closed_form",
            "x": float(r.x),
            "s": float(r.s),
            "theta": floats(&r.theta),
            "estimate": floats(&estimate),
            "coefficients": { "a": exact(qa), "b": exact(qb), "c": exact(qc) },
            "polynomial": exacts(&poly),
            "real_roots": floats(&r.real_roots),
        }),
        json!({
            "birch_residual": residual(&r.residual),
            "iterative_scaling_gap": float(max_gap(&estimate, &ipf.estimate)),
            "ml_degree": entry.ml_degree,
        }),
    ))
}

fn phylo_data(t: &PhyloTree, data: &Path) -> CliResult<DataVector> {
    let d = input::data(data)?;
    match d.labels {
        Some(labels) => Ok(phylo::labeled_data(t, &labels, &d.counts)?),
        None => Ok(DataVector::new(d.counts)?),
    }
}

pub fn mle_phylo(tree: &Path, data: &Path, method: Method) -> CliResult<Success> {
    let t = input::tree(tree)?;
    let u = phylo_data(&t, data)?;
    let labs = phylo::valid_labelings(&t);
    let direct = phylo::phylo_mle(&t, &u)?;
    let horn = if t.leaf_count() >= 4 { Some(phylo::horn_mle(&phylo::horn_matrix(&t)?, &u)?) } else { None };
    let composed = phylo::tfp_mle(&t, &u)?;
    let chosen = match method {
        Method::Direct => &direct,
        Method::Horn => horn.as_ref().ok_or_else(|| Error::NotApplicable("a tripod has no Horn matrix".into()))?,
        Method::Tfp => &composed,
    };
    let a = polytope_to_matrix(&phylo::polytope(&t));
    let gens = phylo::generators(&t)?;
    let birch = birch_residual_generic(chosen, &u, &a, &gens)?;
    let rows: Vec<Value> = labs
        .iter()
        .zip(chosen)
        .map(|(&l, p)| json!({ "label": t.label_string(l), "value": exact(p) }))
        .collect();
    let method_name = match method {
        Method::Direct => "direct",
        Method::Horn => "horn",
        Method::Tfp => "tfp",
    };
    Ok(Success::with(
        json!({ "method": method_name, "estimate": rows }),
        json!({
            "agreement": {
                "direct_equals_tfp": direct == composed,
                "direct_equals_horn": horn.as_ref().map(|h| Value::Bool(*h == direct)).unwrap_or(Value::Null),
            },
            "birch_residual_exactly_zero": birch.is_zero(),
            "generators_checked": gens.len(),
        }),
    ))
}

/// Whether the configuration's columns are affinely independent, so its MLE is the data.
fn saturated(m: &DesignMatrix) -> bool {
    let mut rows = m.entries().to_vec();
    rows.push(vec![1; m.cols()]);
    linalg::rank(&linalg::from_i64(&rows)) == m.cols()
}

pub fn mle_tfp(config: &Path, data: &Path, tol: Option<f64>) -> CliResult<Success> {
    let cfg = input::graded_config(config)?;
    let shape = cfg.shape();
    let u = input::data_vector(data)?;
    if u.len() != shape.z_count() {
        return Err(Error::Dimension(format!("configuration has {} cells, data has {}", shape.z_count(), u.len())).into());
    }
    let total = Rational::from_integer(u.total().into());
    let uq: Vec<Rational> = u.as_rationals().iter().map(|x| x / &total).collect();
    let m = tfp::marginals(&tfp::TfpVector::new(shape.clone(), uq)?);
    let (bm, cm) = (cfg.b_matrix(), cfg.c_matrix());
    let margins = json!({ "a": exacts(&m.a), "b": exacts(&m.b), "c": exacts(&m.c) });
    if saturated(&bm) && saturated(&cm) {
        let p = tfp::compose_critical(&shape, &m.a, &m.b, &m.c)?;
        return Ok(Success::with(
            json!({ "representation": "exact", "estimate": exacts(&p.values), "margins": margins }),
            json!({ "factor_estimates": "exact data margins" }),
        ));
    }
    // factor estimates by iterative scaling on the margins, composed in floating point
    let counts = |v: &[Rational]| -> CliResult<DataVector> {
        let t = rational_to_f64(&total);
        Ok(DataVector::new(v.iter().map(|x| (rational_to_f64(x) * t).round() as u64).collect())?)
    };
    let icfg = ipf_config(tol, None);
    let pb = ipf_solve(&bm, &counts(&m.b)?, &icfg)?;
    let pc = ipf_solve(&cm, &counts(&m.c)?, &icfg)?;
    let pa: Vec<f64> = m.a.iter().map(rational_to_f64).collect();
    let mut p = Vec::with_capacity(shape.z_count());
    for i in 0..shape.r() {
        for j in 0..shape.s[i] {
            for k in 0..shape.t[i] {
                p.push(pb.estimate[shape.x_index(i, j)] * pc.estimate[shape.y_index(i, k)] / pa[i]);
            }
        }
    }
    Ok(Success::with(
        json!({ "representation": "float", "estimate": floats(&p), "margins": margins }),
        json!({
            "factor_estimates": "iterative scaling",
            "factor_iterations": [pb.iterations, pc.iterations],
            "factor_converged": pb.converged && pc.converged,
        }),
    ))
}

pub fn catalog(label: Option<&str>) -> CliResult<Success> {
    let entries: Vec<&delpezzo::DelPezzoEntry> = match label {
        Some(l) => vec![delpezzo::entry(l)?],
        None => delpezzo::catalog().iter().collect(),
    };
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "label": e.label,
                "points": e.polytope.points(),
                "generators": e.generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "degree": e.degree,
                "ml_degree": e.ml_degree,
                "closed_form": CLOSED_FORM_LABELS.contains(&e.label.as_str()),
            })
        })
        .collect();
    let count = rows.len();
    Ok(Success::with(json!({ "entries": rows }), json!({ "count": count })))
}

pub fn veronese(path: &Path) -> CliResult<Success> {
    let c = VeroneseScaling::new(input::veronese(path)?)?;
    let f = discriminant::veronese_ea(&c);
    let table_row = VERONESE_TABLE
        .iter()
        .position(|r| VeroneseScaling::from_i64(r.c).map(|x| x == c).unwrap_or(false));
    let singular = discriminant::veronese_rank_singularity(&c).map(|(a, b)| exacts(&[a, b]));
    Ok(Success::with(
        json!({
            "det_c": exact(&f.det_c),
            "d12": exact(&f.d12),
            "d36": exact(&f.d36),
            "d14": exact(&f.d14),
            "product": exact(&f.product),
            "nonzero": f.pattern(),
            "ml_degree_drops": discriminant::predict_drop_veronese(&c),
            "rank_singular_point": singular.unwrap_or(Value::Null),
        }),
        json!({
            "table_row": table_row.map(|i| i + 1),
            "table_ml_degree": table_row.map(|i| VERONESE_TABLE[i].ml_degree),
        }),
    ))
}

pub fn check_singular(model: &Path, theta: &Path, tol: Option<f64>) -> CliResult<Success> {
    let m = input::model(model)?;
    let theta = input::theta(theta)?;
    let cfg = ScaledConfig::new(m.polytope, m.scaling)?;
    let (value, grad) = discriminant::f_c(&cfg, &theta)?;
    let tol = tol.unwrap_or(0.0);
    let singular = discriminant::verify_singular_point(&cfg, &theta, tol)?;
    let faces: Vec<Value> = cfg
        .faces
        .iter()
        .filter(|f| f.dim < 2)
        .map(|f| {
            let d = match discriminant::edge_discriminant(f, &cfg.scaling) {
                Ok(q) => exact(&q),
                Err(_) => Value::String("unsupported".into()),
            };
            json!({ "dim": f.dim, "indices": f.indices, "discriminant": d })
        })
        .collect();
    Ok(Success::with(
        json!({ "value": exact(&value), "gradient": exacts(&grad), "singular": singular, "faces": faces }),
        json!({ "tolerance": float(tol) }),
    ))
}

fn z_name(shape: &Shape, v: usize) -> String {
    match shape.z_of(v) {
        Some((i, j, k)) => format!("z{}_{}_{}", i + 1, j + 1, k + 1),
        None => format!("?{v}"),
    }
}

pub fn generators_tfp(config: &Path, f: Option<&Path>, g: Option<&Path>) -> CliResult<Success> {
    let cfg: GradedConfig = input::graded_config(config)?;
    let shape = cfg.shape();
    let f = f.map(input::binomials).transpose()?.unwrap_or_default();
    let g = g.map(input::binomials).transpose()?.unwrap_or_default();
    let lifts_f: usize = f.iter().map(|b| tfp::lift(b, &shape, tfp::Factor::B).map(|v| v.len())).sum::<toric_mle::Result<_>>()?;
    let lifts_g: usize = g.iter().map(|b| tfp::lift(b, &shape, tfp::Factor::C).map(|v| v.len())).sum::<toric_mle::Result<_>>()?;
    let quads = tfp::quad(&shape).len();
    let all = tfp::generators(&f, &g, &shape)?;
    let names: Vec<String> = all.iter().map(|b| b.fmt_with(|v| z_name(&shape, v))).collect();
    Ok(Success::with(
        json!({ "generators": names }),
        json!({ "lifts_f": lifts_f, "lifts_g": lifts_g, "quads": quads, "total": all.len() }),
    ))
}

pub fn generators_phylo(tree: &Path) -> CliResult<Success> {
    let t = input::tree(tree)?;
    let labs = phylo::valid_labelings(&t);
    let (gens, steps) = phylo::generators_by_step(&t)?;
    let names: Vec<String> = gens.iter().map(|b| b.fmt_with(|v| format!("x{}", t.label_string(labs[v])))).collect();
    Ok(Success::with(json!({ "generators": names }), json!({ "steps": steps, "total": gens.len() })))
}

pub fn horn(tree: &Path) -> CliResult<Success> {
    let t = input::tree(tree)?;
    let h = phylo::horn_matrix(&t)?;
    let rows = h.rows.len();
    let cols = h.column_labels.len();
    Ok(Success::with(
        json!({
            "row_labels": h.row_labels,
            "column_labels": h.column_labels,
            "rows": h.rows,
            "lambda": h.lambda,
        }),
        json!({ "shape": [rows, cols], "leaves": t.leaf_count() }),
    ))
}
