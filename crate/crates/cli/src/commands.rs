//! One function per subcommand; each fills a [`Document`].

use bernoulli_entropy::chenstein::{
    coefficients_from_spec, tv_upper_agg, tv_lower_barbour_hall, tv_upper_barbour_hall,
    ChenSteinCoefficients, IndexSetSize, TvBoundReport,
};
use bernoulli_entropy::entropybound::{
    a_of_lambda, best_independent_bound, entropy_bound_corollary, entropy_bound_proposition,
    entropy_bound_theorem4, EntropyBoundReport, MomentSummary,
};
use bernoulli_entropy::examples::{
    hypercube_coefficients, hypercube_monte_carlo, reproduce_example1, reproduce_table1, HypercubeSpec,
    MonteCarloSpec,
};
use bernoulli_entropy::exactsum::{exact_distribution, pmf_entropy, tv_to_poisson, BernoulliSystem};
use bernoulli_entropy::poisson::{
    poisson_entropy, poisson_entropy_asymptotic, poisson_entropy_series, EntropyValue, PoissonParams,
};
use bernoulli_entropy::{Error, LogF64};
use serde_json::{json, Value};

use crate::input::{parse_probs, parse_spec};
use crate::output::{integer, log_quantity, quantity, Document, Units};
use crate::{CliError, Method, Rule, Source, THREADS_ENV};

pub struct Ctx {
    pub units: Units,
    pub tol: f64,
}

fn entropy_value(doc: &mut Document, ctx: &Ctx, key: &str, h: &EntropyValue<f64>) {
    doc.result(key, ctx.units.entropy(h.nats));
    doc.result(&format!("{key}_method"), json!(h.method.name()));
    doc.result(&format!("{key}_abs_error"), ctx.units.entropy(h.certified_abs_error));
    let flagged = doc.notes.iter().any(|n| n.contains("heuristic"));
    if h.is_heuristic() && !flagged {
        doc.notes.push(format!(
            "{key}: the large-mean expansion error is a heuristic estimate, not a certified bound"
        ));
    }
}

pub fn poisson_entropy_cmd(doc: &mut Document, ctx: &Ctx, lambda: f64, method: Method) -> Result<(), CliError> {
    doc.input("lambda", quantity(lambda, "count"));
    doc.input("method", json!(method.name()));
    doc.input("tol", ctx.units.entropy(ctx.tol));
    let params = PoissonParams::new(lambda)?;
    let h = match method {
        Method::Auto => poisson_entropy(params, ctx.tol)?,
        Method::Series => poisson_entropy_series(params, ctx.tol)?,
        Method::Asymptotic => poisson_entropy_asymptotic(params)?,
    };
    entropy_value(doc, ctx, "entropy", &h);
    Ok(())
}

enum Resolved {
    Independent { lambda: f64, sum_p2: f64, m: Option<u64> },
    Coefficients(ChenSteinCoefficients<f64>),
}

fn resolve(doc: &mut Document, source: &Source) -> Result<Resolved, CliError> {
    if let Some(path) = &source.spec {
        doc.input("spec", json!(path.display().to_string()));
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let spec = parse_spec(&text)?;
        doc.input("m", integer(spec.m() as u64, "count"));
        return Ok(Resolved::Coefficients(coefficients_from_spec(&spec)?));
    }
    if let Some(c) = &source.coeffs {
        let [b1, b2, b3, lambda, log2m] = c[..] else {
            return Err(CliError::Input(format!(
                "--coeffs takes five values b1,b2,b3,lambda,log2m; got {}",
                c.len()
            )));
        };
        for (k, v, unit) in [
            ("b1", b1, "dimensionless"),
            ("b2", b2, "dimensionless"),
            ("b3", b3, "dimensionless"),
            ("lambda", lambda, "count"),
            ("log2_m", log2m, "dimensionless"),
        ] {
            doc.input(k, quantity(v, unit));
        }
        if !(log2m >= 0.0) || !log2m.is_finite() {
            return Err(CliError::Input(format!("log2m must be finite and non-negative, got {log2m}")));
        }
        return Ok(Resolved::Coefficients(ChenSteinCoefficients::new(
            b1,
            b2,
            b3,
            lambda,
            IndexSetSize::Log2(log2m),
        )?));
    }
    let (Some(lambda), Some(sum_p2)) = (source.lambda, source.sum_p2) else {
        return Err(CliError::Input("--independent needs --lambda and --sum-p2".into()));
    };
    doc.input("independent", json!(true));
    doc.input("lambda", quantity(lambda, "count"));
    doc.input("sum_p2", quantity(sum_p2, "dimensionless"));
    if let Some(m) = source.m {
        doc.input("m", integer(m, "count"));
    }
    Ok(Resolved::Independent { lambda, sum_p2, m: source.m })
}

fn bound_report(doc: &mut Document, ctx: &Ctx, r: &EntropyBoundReport<f64>) {
    let u = ctx.units;
    doc.result("theorem", json!(r.theorem_id.name()));
    doc.notes.extend(r.notes.iter().cloned());
    entropy_value(doc, ctx, "h_poisson", &r.h_poisson);
    doc.result("coefficient", log_quantity(r.coefficient, "dimensionless"));
    doc.result("a_term", u.log_entropy(r.a_term));
    doc.result("b_term", u.log_entropy(r.b_term));
    doc.result("epsilon", u.log_entropy(r.epsilon));
    doc.result("interval_lower", u.entropy(r.interval.0));
    doc.result("interval_upper", u.entropy(r.interval.1));
    doc.result("point_estimate", u.entropy(r.point_estimate));
    doc.result("relative_error", log_quantity(r.relative_error, "fraction"));
    doc.result(
        "relative_error_percent",
        log_quantity(r.relative_error * LogF64::from(100.0), "percent"),
    );
    doc.result("relative_error_convention", json!(r.convention.name()));
    r.conditions.iter().for_each(|c| doc.condition(c));
}

pub fn entropy_bound_cmd(doc: &mut Document, ctx: &Ctx, source: &Source, rule: Option<Rule>) -> Result<(), CliError> {
    let resolved = resolve(doc, source)?;
    let report = match resolved {
        Resolved::Coefficients(coeffs) => {
            let rule = rule.unwrap_or(Rule::Theorem4);
            doc.input("rule", json!(rule.name()));
            if rule != Rule::Theorem4 {
                return Err(CliError::Input(format!(
                    "--rule {} needs independent summands; use --independent or --rule theorem4",
                    rule.name()
                )));
            }
            entropy_bound_theorem4(&coeffs, ctx.tol)?
        }
        Resolved::Independent { lambda, sum_p2, m } => {
            let rule = rule.unwrap_or(Rule::Best);
            doc.input("rule", json!(rule.name()));
            let m = m.ok_or_else(|| CliError::Input("entropy-bound --independent needs --m".into()))?;
            let moments = MomentSummary::new(lambda, sum_p2, IndexSetSize::Count(m))?;
            match rule {
                Rule::Theorem4 => entropy_bound_theorem4(
                    &ChenSteinCoefficients::new(sum_p2, 0.0, 0.0, lambda, IndexSetSize::Count(m))?,
                    ctx.tol,
                )?,
                Rule::Corollary => entropy_bound_corollary(&moments, ctx.tol)?,
                Rule::Proposition => entropy_bound_proposition(&moments, ctx.tol)?,
                Rule::Best => best_independent_bound(&moments, ctx.tol)?,
            }
        }
    };
    doc.input("tol", ctx.units.entropy(ctx.tol));
    bound_report(doc, ctx, &report);
    Ok(())
}

fn tv_report(doc: &mut Document, r: &TvBoundReport<f64>) {
    let opt = |v: Option<f64>| v.map(|v| quantity(v, "probability"));
    for (k, v) in [("lecam_upper", opt(r.lecam_upper)), ("bh_lower", opt(r.bh_lower)), ("bh_upper", opt(r.bh_upper))] {
        if let Some(v) = v {
            doc.result(k, v);
        }
    }
    if let Some(agg) = r.agg_upper {
        doc.result("neighborhood_upper", log_quantity(agg, "probability"));
    }
    doc.notes.extend(r.method_notes.iter().cloned());
}

pub fn tv_bounds_cmd(doc: &mut Document, source: &Source) -> Result<(), CliError> {
    let report = match resolve(doc, source)? {
        Resolved::Independent { lambda, sum_p2, .. } => TvBoundReport::independent(lambda, sum_p2)?,
        Resolved::Coefficients(coeffs) => TvBoundReport::dependent(&coeffs),
    };
    tv_report(doc, &report);
    Ok(())
}

pub fn exact_cmd(doc: &mut Document, ctx: &Ctx, probs: &str) -> Result<(), CliError> {
    let p = parse_probs(probs)?;
    doc.input("probs", json!(probs));
    doc.input("n", integer(p.len() as u64, "count"));
    let system = BernoulliSystem::new(p)?;
    let (lambda, sum_p2) = (system.lambda(), system.sum_p_squared());
    if !(lambda > 0.0) {
        return Err(CliError::Input("the probabilities sum to zero; the Poisson comparison needs a positive mean".into()));
    }
    let pmf = exact_distribution(&system)?;
    let h_w = pmf_entropy(&pmf);
    let h_z = poisson_entropy(PoissonParams::new(lambda)?, ctx.tol)?;
    doc.result("lambda", quantity(lambda, "count"));
    doc.result("sum_p2", quantity(sum_p2, "dimensionless"));
    doc.result("entropy", ctx.units.entropy(h_w.nats));
    entropy_value(doc, ctx, "h_poisson", &h_z);
    doc.result("entropy_gap", ctx.units.entropy(h_z.nats - h_w.nats));
    doc.result("tv_to_poisson", quantity(tv_to_poisson(&pmf, lambda, 1e-15)?, "probability"));
    doc.result("tv_bh_lower", quantity(tv_lower_barbour_hall(lambda, sum_p2), "probability"));
    doc.result("tv_bh_upper", quantity(tv_upper_barbour_hall(lambda, sum_p2), "probability"));
    doc.result("pmf", Value::Array(pmf.mass().iter().map(|&v| quantity(v, "probability")).collect()));
    Ok(())
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(CliError::Input(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
            Ok(t) => Ok(Some(t)),
        },
    }
}

pub struct Simulate {
    pub replicates: u64,
    pub seed: u64,
}

pub fn hypercube_cmd(doc: &mut Document, ctx: &Ctx, n: u32, k: u32, simulate: Option<Simulate>) -> Result<(), CliError> {
    doc.input("n", integer(n.into(), "count"));
    doc.input("k", integer(k.into(), "count"));
    let spec = HypercubeSpec::new(n, k)?;
    let coeffs = hypercube_coefficients::<f64>(&spec);
    doc.result("lambda", log_quantity(coeffs.lambda, "count"));
    doc.result("b1", log_quantity(coeffs.b1, "dimensionless"));
    doc.result("b2", log_quantity(coeffs.b2, "dimensionless"));
    doc.result("b3", log_quantity(coeffs.b3, "dimensionless"));
    doc.result("log2_m", integer(n.into(), "dimensionless"));
    doc.result("a", log_quantity(a_of_lambda(&coeffs), "dimensionless"));
    doc.result("tv_upper", log_quantity(tv_upper_agg(&coeffs), "probability"));
    match entropy_bound_theorem4(&coeffs, ctx.tol) {
        Ok(r) => {
            doc.notes.extend(r.notes);
            doc.result("epsilon", ctx.units.log_entropy(r.epsilon));
            entropy_value(doc, ctx, "h_poisson", &r.h_poisson);
            doc.result("relative_error", log_quantity(r.relative_error, "fraction"));
            r.conditions.iter().for_each(|c| doc.condition(c));
        }
        Err(Error::ConditionViolated(c)) => {
            doc.notes.push(format!("entropy bound not applicable: {c}"));
            doc.condition(&c);
        }
        Err(e) => return Err(e.into()),
    }

    if let Some(sim) = simulate {
        doc.input("replicates", integer(sim.replicates, "count"));
        doc.input("seed", integer(sim.seed, "dimensionless"));
        let mut mc = MonteCarloSpec::new(sim.replicates, sim.seed)?;
        if let Some(t) = threads_from_env()? {
            mc = mc.with_threads(t);
        }
        let s = hypercube_monte_carlo(&spec, &mc)?;
        let rows: Vec<Value> = s
            .pmf
            .iter()
            .zip(&s.pmf_std_error)
            .enumerate()
            .filter(|(w, _)| s.counts[*w] > 0)
            .map(|(w, (p, se))| {
                json!({
                    "w": integer(w as u64, "count"),
                    "count": integer(s.counts[w], "count"),
                    "probability": quantity(*p, "probability"),
                    "std_error": quantity(*se, "probability"),
                })
            })
            .collect();
        doc.result(
            "simulation",
            json!({
                "mean": quantity(s.mean, "count"),
                "mean_std_error": quantity(s.mean_std_error, "count"),
                "z_score": quantity((s.mean - s.lambda_closed_form) / s.mean_std_error, "dimensionless"),
                "entropy_plugin": ctx.units.entropy(s.entropy_plugin),
                "entropy_std_error": ctx.units.entropy(s.entropy_std_error),
                "pmf": rows,
            }),
        );
        doc.notes.extend(s.notes);
    }
    Ok(())
}

pub fn table1_cmd(doc: &mut Document, ctx: &Ctx) -> Result<(), CliError> {
    let rows: Vec<Value> = reproduce_table1()?
        .iter()
        .map(|r| {
            json!({
                "n": integer(r.quoted.n.into(), "count"),
                "k": integer(r.quoted.k.into(), "count"),
                "lambda_quoted": quantity(r.quoted.lambda, "count"),
                "lambda": log_quantity(r.lambda, "count"),
                "h_quoted": ctx.units.entropy(r.quoted.entropy_nats),
                "h_poisson": ctx.units.entropy(r.h_poisson()),
                "epsilon": ctx.units.log_entropy(r.report.epsilon),
                "rel_error_quoted": r.formatted_quoted_relative_error(),
                "rel_error": r.formatted_relative_error(),
                "rel_error_fraction": log_quantity(r.report.relative_error, "fraction"),
            })
        })
        .collect();
    doc.result("rows", Value::Array(rows));
    doc.notes.push("relative error = epsilon / H(Z) for the two-sided neighborhood bound".into());
    Ok(())
}

pub fn example1_cmd(doc: &mut Document, ctx: &Ctx) -> Result<(), CliError> {
    let u = ctx.units;
    let quoted = |v: Option<f64>, f: &dyn Fn(f64) -> Value| v.map(f).unwrap_or_else(|| json!("not quoted"));
    let cases: Vec<Value> = reproduce_example1()?
        .into_iter()
        .map(|c| {
            doc.notes.extend(c.notes.iter().cloned());
            let count = |v: f64| quantity(v, "count");
            let frac = |v: f64| quantity(v, "dimensionless");
            let nats = |v: f64| u.entropy(v);
            json!({
                "a": quantity(c.spec.a, "probability"),
                "n": integer(c.spec.n, "count"),
                "lambda_quoted": quoted(c.claims.lambda, &count),
                "lambda": log_quantity(c.moments.lambda, "count"),
                "theta_quoted": quoted(c.claims.theta, &frac),
                "theta": frac(c.moments.theta()),
                "h_quoted": quoted(c.claims.h_poisson, &nats),
                "h_poisson": nats(c.best.h_poisson.nats),
                "corollary_eps_quoted": quoted(c.claims.corollary_epsilon, &nats),
                "corollary_eps": u.log_entropy(c.corollary.epsilon),
                "proposition_eps_quoted": quoted(c.claims.proposition_epsilon, &nats),
                "proposition_eps": u.log_entropy(c.proposition.epsilon),
                "h_w_quoted": nats(c.claims.h_w),
                "h_w_estimate": nats(c.best.point_estimate),
                "rel_error_quoted": quantity(c.claims.relative_error * 100.0, "percent"),
                "rel_error": log_quantity(c.best.relative_error * LogF64::from(100.0), "percent"),
                "reproducible": c.claims.reproducible,
            })
        })
        .collect();
    doc.result("cases", Value::Array(cases));
    doc.notes.push("relative error = (epsilon/2) / (H(Z) - epsilon/2) for the one-sided bounds".into());
    Ok(())
}
