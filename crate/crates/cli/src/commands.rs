//! One function per subcommand. Each resolves flags against the figure
//! preset and the built-in defaults, runs the computation and renders a CSV.

use std::sync::Arc;

use pim_core::combiners::{parse_combiner_list, GBayesPosterior};
use pim_core::diagnostics::{self, conditional_validity, coverage_length, default_alpha_grid, CdfReport, JointSampler};
use pim_core::priors::CompatiblePrior;
use pim_core::sparse::{region_area, sparse_tnorm_contour, sparse_validified_contour, SparseDemoConfig};
use pim_core::validify::{CombinerGenerator, ValidifyConfig, Validifier};
use pim_core::{
    Assertion, Axis, CombinerSpec, Contour, GridSpec, IntervalPrior, Observation, PriorSpec, SamplingModel,
    ScalarNormalModel, TNorm, UpperProbability,
};

use crate::error::{config, Result};
use crate::figures::{preset, Preset};
use crate::Common;
use crate::table::{fmt_num, Table};

const RUNNING_MODEL: &str = "normal:10";
const RUNNING_PRIOR: &str = "interval:1,2,0.1";
const SPARSE_GRID: &str = "-3:5:0.02,-3:5:0.02";
/// Region level shared by the sparse demo's membership columns and areas.
const SPARSE_ALPHA: f64 = 0.1;

fn fill(slot: &mut Option<String>, value: Option<&str>) {
    if slot.is_none() {
        *slot = value.map(str::to_string);
    }
}

/// Applies the figure preset, then the given defaults, to unset flags.
fn resolve(command: &str, mut c: Common, defaults: &Preset) -> Result<(Common, Preset)> {
    let p = match &c.figure {
        Some(id) => preset(command, id)?,
        None => Preset::default(),
    };
    let join = |y: &[f64]| y.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    for src in [&p, defaults] {
        fill(&mut c.model, src.model);
        fill(&mut c.prior, src.prior);
        fill(&mut c.combiners, src.combiners);
        if c.y.is_none() {
            c.y = src.y.filter(|y| !y.is_empty()).map(join);
        }
        c.reps = c.reps.or(src.reps);
    }
    Ok((c, p))
}

/// First comment line: version, subcommand and every resolved setting.
fn header(command: &str, c: &Common, extra: &[(&str, String)]) -> String {
    let mut s = format!("pim {} {command}", env!("CARGO_PKG_VERSION"));
    let fields = [
        ("figure", c.figure.clone()),
        ("model", c.model.clone()),
        ("prior", c.prior.clone()),
        ("combiners", c.combiners.clone()),
        ("y", c.y.clone()),
        ("grid", c.grid.clone()),
        ("alpha-grid", c.alpha_grid.clone()),
        ("reps", c.reps.map(|r| r.to_string())),
        ("seed", c.seed.map(|r| r.to_string())),
    ];
    for (k, v) in fields.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))) {
        s.push_str(&format!(" {k}={v}"));
    }
    for (k, v) in extra {
        s.push_str(&format!(" {k}={v}"));
    }
    s
}

/// Drops accumulated rounding noise such as `0.30000000000000004` from
/// regular grid coordinates; other values pass through unchanged.
fn tidy(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if (r - x).abs() < 1e-12 {
        r
    } else {
        x
    }
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| config(format!("--{flag} is required")))
}

fn seed(c: &Common) -> Result<u64> {
    c.seed
        .ok_or_else(|| config("--seed (or IM_SEED) is required for Monte Carlo output"))
}

fn parse_numbers(s: &str, flag: &str) -> Result<Vec<f64>> {
    let v = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| config(format!("--{flag}: `{t}` is not a finite number")))
        })
        .collect::<Result<Vec<_>>>()?;
    if v.is_empty() {
        return Err(config(format!("--{flag} is empty")));
    }
    Ok(v)
}

fn scalar_model(c: &Common) -> Result<ScalarNormalModel> {
    let m: SamplingModel = required(&c.model, "model")?.parse()?;
    m.as_scalar()
        .copied()
        .ok_or_else(|| config("this subcommand needs the scalar model normal:n"))
}

fn interval_prior(c: &Common) -> Result<IntervalPrior> {
    match required(&c.prior, "prior")?.parse::<PriorSpec>()? {
        PriorSpec::Interval(p) => Ok(p),
        _ => Err(config("this subcommand needs an interval prior interval:a,b,beta")),
    }
}

fn single_y(c: &Common) -> Result<f64> {
    let y = parse_numbers(required(&c.y, "y")?, "y")?;
    match y.as_slice() {
        [y] => Ok(*y),
        _ => Err(config("the scalar model takes exactly one --y value")),
    }
}

fn combiners(c: &Common) -> Result<Vec<CombinerSpec>> {
    let specs = parse_combiner_list(required(&c.combiners, "combiners")?)?;
    if specs.is_empty() {
        return Err(config("--combiners is empty"));
    }
    Ok(specs)
}

/// Contour-bearing combiners only; the Bayes posterior has none.
fn contour_combiners(c: &Common) -> Result<Vec<CombinerSpec>> {
    let specs = combiners(c)?;
    if specs.contains(&CombinerSpec::GBayes) {
        return Err(config("gbayes has no contour; use cond-validity"));
    }
    Ok(specs)
}

/// Covers the bulk of the vacuous contour and the prior's core.
fn scalar_grid(c: &Common, m: &ScalarNormalModel, p: &IntervalPrior, y: f64) -> Result<GridSpec> {
    if let Some(g) = &c.grid {
        let g: GridSpec = g.parse()?;
        if g.dim() != 1 {
            return Err(config("the scalar model needs a one-axis --grid"));
        }
        return Ok(g);
    }
    let half = 4.0 * m.sd();
    Ok(GridSpec::scalar(
        (y - half).min(p.a - 0.5),
        (y + half).max(p.b + 0.5),
        0.005,
    )?)
}

fn alpha_grid(c: &Common) -> Result<Vec<f64>> {
    match &c.alpha_grid {
        Some(s) => {
            let a: Axis = s.parse()?;
            let pts: Vec<f64> = a.points().into_iter().map(tidy).collect();
            if pts.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(config("--alpha-grid must lie in [0, 1]"));
            }
            Ok(pts)
        }
        None => Ok(default_alpha_grid()),
    }
}

fn compatible_priors(q: &[String], p: &IntervalPrior) -> Result<Vec<CompatiblePrior>> {
    if q.is_empty() {
        return Ok(vec![p.compatible(0.0)]);
    }
    Ok(q.iter().map(|s| s.parse()).collect::<pim_core::Result<Vec<_>>>()?)
}

fn validifier(spec: CombinerSpec, m: ScalarNormalModel, p: &IntervalPrior, mc_reps: usize, seed: u64) -> Result<(Arc<Validifier>, CombinerGenerator)> {
    let g = CombinerGenerator {
        spec,
        model: m,
        prior: p.to_focal(),
    };
    let cfg = ValidifyConfig {
        mc_reps,
        seed,
        ..ValidifyConfig::default()
    };
    let v = Validifier::new(&g, &g.prior, &SamplingModel::Scalar(m), &cfg)?;
    Ok((Arc::new(v), g))
}

fn positive(n: Option<usize>, default: usize, flag: &str) -> Result<usize> {
    match n.unwrap_or(default) {
        0 => Err(config(format!("--{flag} must be positive"))),
        n => Ok(n),
    }
}

/// One IM under test: its column label and its contour at `y`.
type Im = (String, Box<dyn Fn(&Observation) -> pim_core::Result<Contour> + Sync>);

fn ims(specs: &[CombinerSpec], m: ScalarNormalModel, p: &IntervalPrior, validify: Option<(usize, u64)>) -> Result<Vec<Im>> {
    let focal = p.to_focal();
    let mut out: Vec<Im> = Vec::new();
    for &s in specs {
        let f = focal.clone();
        out.push((s.label(), Box::new(move |y: &Observation| s.contour(&m, &f, y.first()))));
    }
    if let Some((mc_reps, seed)) = validify {
        for &s in specs.iter().filter(|s| **s != CombinerSpec::Vacuous) {
            let (v, g) = validifier(s, m, p, mc_reps, seed)?;
            out.push((
                format!("validified_{}", s.label()),
                Box::new(move |y: &Observation| v.contour(&g, y.first())),
            ));
        }
    }
    Ok(out)
}

pub fn contour(common: Common, sparse: bool, dim: Option<usize>) -> Result<String> {
    let figure_sparse = match &common.figure {
        Some(id) => preset("contour", id)?.sparse,
        None => false,
    };
    if sparse || figure_sparse || dim.is_some() {
        return sparse_contour(common, dim);
    }
    let defaults = Preset {
        model: Some(RUNNING_MODEL),
        prior: Some(RUNNING_PRIOR),
        combiners: Some("vacuous"),
        ..Preset::default()
    };
    let (c, _) = resolve("contour", common, &defaults)?;
    let (m, p, y) = (scalar_model(&c)?, interval_prior(&c)?, single_y(&c)?);
    let specs = contour_combiners(&c)?;
    let focal = p.to_focal();
    let contours = specs
        .iter()
        .map(|s| s.contour(&m, &focal, y))
        .collect::<pim_core::Result<Vec<_>>>()?;
    let grid = scalar_grid(&c, &m, &p, y)?;
    // The peak at `y` and the prior's jumps are always sampled.
    let mut bp = focal.breakpoints();
    bp.push(y);
    let mesh = grid.mesh_with(&[bp]);

    let mut cols = vec!["theta".to_string()];
    cols.extend(specs.iter().map(|s| format!("contour_{}", s.label())));
    let mut t = Table::new(cols);
    t.comment(header("contour", &c, &[]));
    let mut row = Vec::with_capacity(contours.len() + 1);
    for theta in mesh.axis_coords(0).iter().map(|t| tidy(*t)) {
        row.clear();
        row.push(theta);
        row.extend(contours.iter().map(|k| k.at(theta)));
        t.row(&row);
    }
    Ok(t.render())
}

fn sparse_config(c: &Common, dim: Option<usize>, mc_reps: usize, seed: u64) -> Result<SparseDemoConfig> {
    let varpi = match required(&c.prior, "prior")?.parse::<PriorSpec>()? {
        PriorSpec::Sparsity(p) => {
            if dim.is_some_and(|d| d != p.dim()) {
                return Err(config("--dim disagrees with the sparsity prior"));
            }
            if p.dim() != 2 && c.grid.is_none() {
                return Err(config("--grid is required outside dimension 2"));
            }
            p.varpi()
        }
        _ => return Err(config("the sparse problem needs a prior sparsity:dim,varpi")),
    };
    let y = Observation::new(parse_numbers(required(&c.y, "y")?, "y")?)?;
    let grid: GridSpec = c.grid.as_deref().unwrap_or(SPARSE_GRID).parse()?;
    if let Ok(SamplingModel::Mv(m)) = required(&c.model, "model")?.parse::<SamplingModel>() {
        if m.dim() != y.dim() {
            return Err(config("--model dimension disagrees with --y"));
        }
    } else {
        return Err(config("the sparse problem needs the model mvnormal:d"));
    }
    Ok(SparseDemoConfig {
        dim: y.dim(),
        varpi,
        y,
        grid,
        mc_reps,
        seed,
        eps: 0.01,
    })
}

fn sparse_defaults(dim: usize) -> (String, String, Option<String>) {
    if dim == 2 {
        return ("mvnormal:2".into(), "sparsity:2,0.5".into(), Some("1,0.3".into()));
    }
    (format!("mvnormal:{dim}"), format!("sparsity:{dim},0.5"), None)
}

fn theta_columns(dim: usize) -> Vec<String> {
    (0..dim)
        .map(|i| if i == 0 { "theta".into() } else { format!("theta{}", i + 1) })
        .collect()
}

fn sparse_contour(common: Common, dim: Option<usize>) -> Result<String> {
    let (model, prior, y) = sparse_defaults(dim.unwrap_or(2));
    let defaults = Preset {
        combiners: Some("vacuous,tnorm:product"),
        ..Preset::default()
    };
    let (mut c, _) = resolve("contour", common, &defaults)?;
    c.model.get_or_insert(model);
    c.prior.get_or_insert(prior);
    if c.y.is_none() {
        c.y = y;
    }
    let cfg = sparse_config(&c, dim, 1, 0)?;
    let specs = combiners(&c)?;
    let mut contours = Vec::new();
    for s in &specs {
        contours.push(match s {
            CombinerSpec::Vacuous => cfg.model()?.vacuous_contour(&cfg.y)?,
            CombinerSpec::TNorm(TNorm::Product) => sparse_tnorm_contour(&cfg)?,
            other => return Err(config(format!("{other} is not available for the sparse problem"))),
        });
    }
    let mesh = cfg.grid.mesh_snapped(&sparse_tnorm_contour(&cfg)?.breakpoints());
    let mut cols = theta_columns(cfg.dim);
    cols.extend(specs.iter().map(|s| format!("contour_{}", s.label())));
    let mut t = Table::new(cols);
    t.comment(header("contour", &c, &[("sparse", "true".into())]));
    let mut p = vec![0.0; cfg.dim];
    let mut row = Vec::new();
    for i in 0..mesh.len() {
        mesh.point_into(i, &mut p);
        p.iter_mut().for_each(|x| *x = tidy(*x));
        row.clear();
        row.extend_from_slice(&p);
        row.extend(contours.iter().map(|k| k.eval(&p)));
        t.row(&row);
    }
    Ok(t.render())
}

pub fn validity_cdf(common: Common, q: Vec<String>, validify: bool, mc_reps: Option<usize>) -> Result<String> {
    let defaults = Preset {
        model: Some(RUNNING_MODEL),
        prior: Some(RUNNING_PRIOR),
        combiners: Some("vacuous,hose:0.5,dempster,tnorm:product"),
        reps: Some(100_000),
        ..Preset::default()
    };
    let (c, _) = resolve("validity-cdf", common, &defaults)?;
    let (m, p, seed) = (scalar_model(&c)?, interval_prior(&c)?, seed(&c)?);
    let reps = positive(c.reps, 100_000, "reps")?;
    let mc_reps = positive(mc_reps, 10_000, "mc-reps")?;
    let alpha = alpha_grid(&c)?;
    let qs = compatible_priors(&q, &p)?;
    let specs = contour_combiners(&c)?;
    let ims = ims(&specs, m, &p, validify.then_some((mc_reps, seed)))?;

    let mut reports = Vec::with_capacity(ims.len());
    for (_, im) in &ims {
        let per_q = qs
            .iter()
            .map(|q| {
                let js = JointSampler::new(*q, SamplingModel::Scalar(m), reps, seed)?;
                diagnostics::validity_cdf(im.as_ref(), &js, &alpha)
            })
            .collect::<pim_core::Result<Vec<_>>>()?;
        reports.push(CdfReport::envelope(&per_q)?);
    }

    let mut cols = vec!["alpha".to_string()];
    cols.extend(ims.iter().map(|(l, _)| format!("cdf_{l}")));
    cols.extend(ims.iter().map(|(l, _)| format!("stderr_{l}")));
    let mut t = Table::new(cols);
    let mut extra = vec![("q", q_label(&q))];
    if validify {
        extra.push(("validify", "true".into()));
        extra.push(("mc-reps", mc_reps.to_string()));
    }
    t.comment(header("validity-cdf", &c, &extra));
    for (i, &a) in alpha.iter().enumerate() {
        let mut row = vec![a];
        row.extend(reports.iter().map(|r| r.cdf[i]));
        row.extend(reports.iter().map(|r| r.stderr[i]));
        t.row(&row);
    }
    Ok(t.render())
}

fn q_label(q: &[String]) -> String {
    if q.is_empty() {
        "default".into()
    } else {
        q.join(";")
    }
}

fn parse_assertion(s: &str) -> Result<Assertion> {
    match parse_numbers(s, "assert")?.as_slice() {
        [lo, hi] if lo < hi => Ok(Assertion::open(*lo, *hi)),
        _ => Err(config("--assert takes lo,hi with lo < hi")),
    }
}

pub fn cond_validity(common: Common, assertion: Option<String>) -> Result<String> {
    let defaults = Preset {
        model: Some(RUNNING_MODEL),
        prior: Some("credal:0,1"),
        reps: Some(100_000),
        ..Preset::default()
    };
    let (c, p) = resolve("cond-validity", common, &defaults)?;
    let assertion = assertion.or(p.assertion.map(str::to_string));
    let a = parse_assertion(required(&assertion, "assert")?)?;
    let (m, seed) = (scalar_model(&c)?, seed(&c)?);
    let reps = positive(c.reps, 100_000, "reps")?;
    let credal = match required(&c.prior, "prior")?.parse::<PriorSpec>()? {
        PriorSpec::Credal(s) => s,
        _ => return Err(config("cond-validity needs a prior credal:m,v;...")),
    };
    let alpha = alpha_grid(&c)?;
    let post = |y: &Observation, a: &Assertion| GBayesPosterior::new(&credal, &m, y.first()).upper(a);
    let per_prior = credal
        .priors()
        .iter()
        .map(|np| {
            let js = JointSampler::new(CompatiblePrior::Normal(*np), SamplingModel::Scalar(m), reps, seed)?;
            conditional_validity(&post, &js, &a, &alpha)
        })
        .collect::<pim_core::Result<Vec<_>>>()?;
    let r = CdfReport::envelope(&per_prior)?;

    let mut t = Table::new(vec!["alpha".into(), "H_A".into(), "stderr".into()]);
    t.comment(header("cond-validity", &c, &[("assert", assertion.unwrap_or_default())]));
    let hits: Vec<String> = per_prior.iter().map(|r| r.reps.to_string()).collect();
    t.comment(format!("hits={} widened={}", hits.join(";"), r.widened));
    for i in 0..r.alpha.len() {
        t.row(&[r.alpha[i], r.cdf[i], r.stderr[i]]);
    }
    Ok(t.render())
}

pub fn coverage(
    common: Common,
    alpha: Option<f64>,
    q: Vec<String>,
    validify: bool,
    mc_reps: Option<usize>,
) -> Result<String> {
    let defaults = Preset {
        model: Some(RUNNING_MODEL),
        prior: Some(RUNNING_PRIOR),
        combiners: Some("vacuous,tnorm:product"),
        reps: Some(10_000),
        ..Preset::default()
    };
    let (c, _) = resolve("coverage", common, &defaults)?;
    let level = alpha.unwrap_or(0.05);
    if !(level > 0.0 && level < 1.0) {
        return Err(config("--alpha must lie in (0, 1)"));
    }
    let (m, p, seed) = (scalar_model(&c)?, interval_prior(&c)?, seed(&c)?);
    let reps = positive(c.reps, 10_000, "reps")?;
    let mc_reps = positive(mc_reps, 10_000, "mc-reps")?;
    let grid = match &c.grid {
        Some(g) => Some(g.parse::<GridSpec>()?),
        None => None,
    };
    let qs = compatible_priors(&q, &p)?;
    let specs = contour_combiners(&c)?;
    let ims = ims(&specs, m, &p, validify.then_some((mc_reps, seed)))?;

    let cols = ["im", "alpha", "coverage", "mean_length", "stderr_cov", "stderr_len", "reps", "seed"];
    let mut t = Table::new(cols.iter().map(|s| s.to_string()).collect());
    let mut extra = vec![("alpha", fmt_num(level)), ("q", q_label(&q))];
    if validify {
        extra.push(("validify", "true".into()));
        extra.push(("mc-reps", mc_reps.to_string()));
    }
    t.comment(header("coverage", &c, &extra));
    for (label, im) in &ims {
        for (qi, q) in qs.iter().enumerate() {
            let js = JointSampler::new(*q, SamplingModel::Scalar(m), reps, seed)?;
            let r = coverage_length(im.as_ref(), &js, level, grid.as_ref())?;
            let name = if qs.len() > 1 { format!("{label}@q{}", qi + 1) } else { label.clone() };
            t.row_mixed(
                &[&name],
                &[
                    r.alpha,
                    r.coverage,
                    r.mean_length,
                    r.stderr_coverage,
                    r.stderr_length,
                    r.reps as f64,
                    r.seed as f64,
                ],
            );
        }
    }
    Ok(t.render())
}

pub fn validify(common: Common, mc_reps: Option<usize>) -> Result<String> {
    let defaults = Preset {
        model: Some(RUNNING_MODEL),
        prior: Some(RUNNING_PRIOR),
        combiners: Some("tnorm:product"),
        ..Preset::default()
    };
    let (c, _) = resolve("validify", common, &defaults)?;
    let (m, p, y, seed) = (scalar_model(&c)?, interval_prior(&c)?, single_y(&c)?, seed(&c)?);
    let mc_reps = positive(mc_reps, 10_000, "mc-reps")?;
    let spec = match contour_combiners(&c)?.as_slice() {
        [s] => *s,
        _ => return Err(config("validify takes exactly one generator in --combiners")),
    };
    let (v, g) = validifier(spec, m, &p, mc_reps, seed)?;
    let vacuous = m.vacuous_contour(y);
    let gen = g.spec.contour(&m, &g.prior, y)?;
    let grid = scalar_grid(&c, &m, &p, y)?;
    let mut bp = g.prior.breakpoints();
    bp.push(y);
    let mesh = grid.mesh_with(&[bp]);

    let label = spec.label();
    let mut t = Table::new(vec![
        "theta".into(),
        "contour_vacuous".into(),
        format!("contour_{label}"),
        format!("contour_validified_{label}"),
        "stderr_validified".into(),
    ]);
    t.comment(header("validify", &c, &[("mc-reps", mc_reps.to_string())]));
    for theta in mesh.axis_coords(0).iter().map(|t| tidy(*t)) {
        let h = gen.at(theta);
        t.row(&[theta, vacuous.at(theta), h, v.transform(h), v.stderr(h)]);
    }
    Ok(t.render())
}

/// CSV plus the region-area lines, which also go to stdout when the CSV is
/// written to a file.
pub fn sparse_demo(common: Common, mc_reps: Option<usize>) -> Result<(String, Vec<String>)> {
    let defaults = Preset {
        model: Some("mvnormal:2"),
        prior: Some("sparsity:2,0.5"),
        y: Some(&[1.0, 0.3]),
        ..Preset::default()
    };
    let (c, _) = resolve("sparse-demo", common, &defaults)?;
    let seed = seed(&c)?;
    let mc_reps = positive(mc_reps, 100_000, "mc-reps")?;
    let cfg = sparse_config(&c, None, mc_reps, seed)?;
    if cfg.dim != 2 {
        return Err(config("sparse-demo is implemented for dimension 2"));
    }
    let contours = [
        ("vacuous", cfg.model()?.vacuous_contour(&cfg.y)?),
        ("tnorm", sparse_tnorm_contour(&cfg)?),
        ("validified", sparse_validified_contour(&cfg)?),
    ];
    let level = format!("{}", 1.0 - SPARSE_ALPHA);
    let mut cols = theta_columns(2);
    cols.extend(contours.iter().map(|(l, _)| format!("contour_{l}")));
    cols.extend(contours.iter().map(|(l, _)| format!("in_region_{level}_{l}")));
    let mut t = Table::new(cols);
    t.comment(header("sparse-demo", &c, &[("mc-reps", mc_reps.to_string())]));
    let mut areas = Vec::new();
    for (l, k) in &contours {
        let line = format!("area_{l}_{level} = {}", fmt_num(region_area(k, SPARSE_ALPHA, &cfg.grid)?));
        t.comment(line.clone());
        areas.push(line);
    }
    let mesh = cfg.grid.mesh_snapped(&contours[1].1.breakpoints());
    let mut p = [0.0; 2];
    for i in 0..mesh.len() {
        mesh.point_into(i, &mut p);
        p.iter_mut().for_each(|x| *x = tidy(*x));
        let vals: Vec<f64> = contours.iter().map(|(_, k)| k.eval(&p)).collect();
        let mut row = p.to_vec();
        row.extend(&vals);
        row.extend(vals.iter().map(|v| if *v > SPARSE_ALPHA { 1.0 } else { 0.0 }));
        t.row(&row);
    }
    Ok((t.render(), areas))
}
