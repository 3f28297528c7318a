use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use qorbit_core::charring::{classical_twining, twining_mults};
use qorbit_core::exactmath::{fmt_rat, fmt_rational, fmt_real, parse_rat, parse_rational};
use qorbit_core::hc_integral::{cell_state, e_gamma, hc_image, hc_image_grouped, invariant_integral, solve_cell_weights};
use qorbit_core::lowrank_models::{
    classify_hw, h2_model, h2_stratify, invariance_residuals, verma_gram, BlockSel, H2Model, HwFamily, LowRankProvider, QMono,
};
use qorbit_core::rootsys::fold;
use qorbit_core::twistdata::{compact_roots, enumerate_w_minus, strongly_reduce};
use qorbit_core::verify;
use qorbit_core::{
    Error, Involution, LaurentPoly, PolarRational, Rat, Rational, RootSystem, Stratum, TwistingDatum, VermaCase, Weight, WeightFunction,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "qorbit", version, about = "Exact data of q-deformed twisted orbit spaces")]
struct Cli {
    /// Write the JSON document to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
    /// Include secondary fields in the output.
    #[arg(long, global = true)]
    detail: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cartan data of a root system.
    Rootsys(TypeArgs),
    /// Fold a root system along a diagram involution.
    Fold(TypeArgs),
    /// Twisting data: flags, compact roots, W^- and strong reduction.
    Twist {
        #[command(subcommand)]
        op: TwistOp,
    },
    /// Twining multiplicities of a tau-fixed highest weight.
    Twine(TwineArgs),
    /// Harish-Chandra image of a central element.
    Hc(HcArgs),
    /// Invariant integral of a matrix coefficient.
    Integral(IntegralArgs),
    /// Cell decomposition of the invariant state for a low rank case.
    State(StateArgs),
    /// Rank one reflection equation algebra models.
    H2 {
        #[command(subcommand)]
        op: H2Op,
    },
    /// Gram sign scan and highest weight classification.
    Verma(VermaArgs),
    /// Run an acceptance suite by name or number, or `all`.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct TypeArgs {
    /// Cartan type such as A3, D4 or A1xA1.
    #[arg(long = "type")]
    ty: String,
    /// One-based images of the nodes under tau, comma separated.
    #[arg(long)]
    tau: Option<String>,
}

#[derive(Args, Debug)]
struct DatumArgs {
    #[command(flatten)]
    base: TypeArgs,
    /// Node values: rationals, or `m@phase` with the phase in turns.
    #[arg(long, allow_hyphen_values = true)]
    eps: String,
}

#[derive(Subcommand, Debug)]
enum TwistOp {
    Classify(DatumArgs),
    Compact(DatumArgs),
    Wminus(DatumArgs),
    Reduce(DatumArgs),
}

#[derive(Args, Debug)]
struct TwineArgs {
    #[command(flatten)]
    base: TypeArgs,
    /// Highest weight in fundamental weight coordinates.
    #[arg(long)]
    hw: String,
    /// Use the explicit intertwiner instead of the division formula.
    #[arg(long)]
    classical: bool,
}

#[derive(Args, Debug)]
struct HcArgs {
    #[command(flatten)]
    datum: DatumArgs,
    #[arg(long)]
    hw: String,
    /// Group terms by W^tau-orbits.
    #[arg(long)]
    grouped: bool,
}

#[derive(Args, Debug)]
struct IntegralArgs {
    #[command(flatten)]
    datum: DatumArgs,
    #[arg(long)]
    hw: String,
    /// lambda = q^{2 gamma}, gamma in fundamental weight coordinates.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda")]
    gamma: Option<String>,
    /// lambda on the fundamental weights as monomials `c*q^{e}`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Evaluate at this value of q.
    #[arg(long)]
    q: Option<String>,
}

#[derive(Args, Debug)]
struct StateArgs {
    /// A1_H2, A1xA1 or A2_twisted.
    #[arg(long)]
    case: String,
    #[arg(long, allow_hyphen_values = true)]
    eps: String,
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
    #[arg(long, default_value = "1/2")]
    q: String,
    /// Number of weight levels kept in each cell.
    #[arg(long, default_value_t = 80)]
    depth: usize,
}

#[derive(Subcommand, Debug)]
enum H2Op {
    /// Locate (d, t) in the central character plane.
    Stratify {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value = "1/2")]
        q: String,
    },
    /// Truncated operators of an irreducible representation.
    Model(ModelArgs),
    /// Invariant state of a monomial in z, v, w, u.
    State {
        #[command(flatten)]
        model: ModelArgs,
        /// Generators separated by commas, e.g. `z,v,w`.
        #[arg(long, default_value = "")]
        word: String,
        /// Also report the invariance residuals up to degree 3.
        #[arg(long)]
        residuals: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StratumKind {
    Plus,
    Zero,
    Minus,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Block {
    All,
    Plus,
    Minus,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, value_enum)]
    stratum: StratumKind,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    c: String,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    t: String,
    #[arg(long, default_value = "1")]
    a: String,
    #[arg(long, default_value = "1/2")]
    q: String,
    #[arg(long, default_value_t = 400)]
    cutoff: usize,
    #[arg(long, value_enum, default_value = "all")]
    block: Block,
}

#[derive(Args, Debug)]
struct VermaArgs {
    #[arg(long)]
    case: String,
    /// Highest weight `c*q^{e}`; omit with --classify.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    eps: String,
    #[arg(long, default_value = "1/2")]
    q: String,
    #[arg(long, default_value_t = 200)]
    t_max: usize,
    /// Classify all admissible highest weights instead.
    #[arg(long)]
    classify: bool,
    #[arg(long, default_value_t = 20)]
    n_max: u32,
}

#[derive(Args, Debug)]
struct CheckArgs {
    suite: String,
    /// Largest rank for the theosec suite.
    #[arg(long)]
    max_rank: Option<usize>,
}

fn list<T>(s: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| f(x.trim())).collect()
}

fn rat(s: &str) -> Result<Rat> {
    Ok(parse_rat(s)?)
}

fn big(s: &str) -> Result<Rational> {
    Ok(parse_rational(s)?)
}

fn real(s: &str) -> Result<f64> {
    if let Ok(r) = parse_rational(s) {
        return r.to_f64().ok_or_else(|| anyhow!("'{s}' is out of range"));
    }
    s.parse::<f64>().map_err(|_| Error::Validation(format!("bad number '{s}'")).into())
}

fn polar(s: &str) -> Result<PolarRational> {
    match s.split_once('@') {
        Some((m, p)) => Ok(PolarRational::new(big(m)?, rat(p)?)?),
        None => Ok(PolarRational::from_real(big(s)?)),
    }
}

fn root_system(a: &TypeArgs) -> Result<(RootSystem, Involution)> {
    let rs = RootSystem::from_label(&a.ty)?;
    let tau = match &a.tau {
        Some(t) if !t.trim().is_empty() => {
            let images = list(t, |x| x.parse::<usize>().map_err(|_| Error::Validation(format!("bad node '{x}'")).into()))?;
            Involution::from_one_based(&rs, &images)?
        }
        _ => Involution::identity(rs.rank),
    };
    Ok((rs, tau))
}

fn datum(a: &DatumArgs) -> Result<TwistingDatum> {
    let (rs, tau) = root_system(&a.base)?;
    Ok(TwistingDatum::new(&rs, tau, list(&a.eps, polar)?)?)
}

fn weight(s: &str) -> Result<Weight> {
    Ok(Weight(list(s, rat)?))
}

fn rat_str(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

fn weight_json(w: &Weight) -> Value {
    Value::Array(w.0.iter().map(rat_str).collect())
}

fn real_json(x: f64) -> Value {
    Value::String(fmt_real(x))
}

fn poly_json(p: &LaurentPoly) -> Value {
    Value::String(p.to_string())
}

fn run_rootsys(a: &TypeArgs, detail: bool) -> Result<Value> {
    let (rs, _) = root_system(a)?;
    let mut out = json!({
        "type": rs.label,
        "rank": rs.rank,
        "cartan": rs.cartan,
        "num_positive_roots": rs.pos_roots.len(),
        "weyl_order": rs.weyl_order().to_string(),
        "rho": weight_json(&rs.rho),
    });
    if detail {
        out["positive_roots"] = json!(rs.pos_roots_alpha);
        out["components"] = json!(rs.components.iter().map(|c| c.iter().map(|r| r + 1).collect::<Vec<_>>()).collect::<Vec<_>>());
    }
    Ok(out)
}

fn run_fold(a: &TypeArgs, detail: bool) -> Result<Value> {
    let (rs, tau) = root_system(a)?;
    let f = fold(&rs, &tau)?;
    let mut out = json!({ "folded_type": f.label, "non_reduced": f.non_reduced });
    if detail {
        out["cartan"] = json!(f.cartan);
        out["classes"] = json!(f.classes.iter().map(|c| c.iter().map(|r| r + 1).collect::<Vec<_>>()).collect::<Vec<_>>());
        out["positive_roots"] = json!(f.pos_roots.iter().map(weight_json).collect::<Vec<_>>());
    }
    Ok(out)
}

fn run_twist(op: &TwistOp, detail: bool) -> Result<Value> {
    match op {
        TwistOp::Classify(a) => {
            let nu = datum(a)?;
            let flags: Map<String, Value> = nu.classify().as_pairs().iter().map(|(k, v)| (k.to_string(), Value::Bool(*v))).collect();
            Ok(json!({ "flags": flags, "j_tau": nu.j_tau().iter().map(|r| r + 1).collect::<Vec<_>>() }))
        }
        TwistOp::Compact(a) => {
            let nu = datum(a)?;
            let c = compact_roots(&nu)?;
            let roots = |idx: &[usize]| idx.iter().map(|&i| weight_json(&nu.folded.pos_roots[i])).collect::<Vec<_>>();
            let mut out = json!({ "positive": roots(&c.positive), "simple": roots(&c.simple) });
            if detail {
                out["generators"] = json!(c.generators.iter().map(|w| w.to_string()).collect::<Vec<_>>());
            }
            Ok(out)
        }
        TwistOp::Wminus(a) => {
            let nu = datum(a)?;
            let wm = enumerate_w_minus(&nu)?;
            let mut out = json!({ "w_minus": wm.iter().map(|(w, _)| w.to_string()).collect::<Vec<_>>() });
            if detail {
                out["sign_characters"] = json!(wm.iter().map(|(_, s)| s.to_string()).collect::<Vec<_>>());
            }
            Ok(out)
        }
        TwistOp::Reduce(a) => {
            let r = strongly_reduce(&datum(a)?)?;
            Ok(json!({
                "eps": r.datum.eps.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "w": r.w.to_string(),
                "f": r.f.iter().map(fmt_rational).collect::<Vec<_>>(),
            }))
        }
    }
}

fn run_twine(a: &TwineArgs) -> Result<Value> {
    let (rs, tau) = root_system(&a.base)?;
    let f = fold(&rs, &tau)?;
    let hw = weight(&a.hw)?;
    let table = if a.classical { classical_twining(&f, &hw)?.twining } else { twining_mults(&f, &hw)? };
    let rows: Vec<Value> = table.jvals.iter().map(|(w, j)| json!({ "weight": weight_json(w), "j": j })).collect();
    Ok(json!({ "highest": weight_json(&hw), "twining": rows }))
}

fn run_hc(a: &HcArgs) -> Result<Value> {
    let nu = datum(&a.datum)?;
    let hw = weight(&a.hw)?;
    let j = twining_mults(&nu.folded, &hw)?;
    let el = if a.grouped { hc_image_grouped(&nu, &hw, &j)? } else { hc_image(&nu, &hw, &j)? };
    let terms: Vec<Value> = el.terms.iter().map(|(w, c)| json!({ "weight": weight_json(w), "coeff": poly_json(c) })).collect();
    Ok(json!({ "highest": weight_json(&hw), "terms": terms }))
}

fn weight_function(nu: &TwistingDatum, gamma: Option<&str>, lambda: Option<&str>) -> Result<WeightFunction> {
    match (gamma, lambda) {
        (Some(g), None) => Ok(WeightFunction::from_gamma(nu.rs(), &weight(g)?)),
        (None, Some(l)) => {
            let monos = list(l, |s| Ok(LaurentPoly::parse_monomial(s)?))?;
            let mut coef = Vec::new();
            let mut exp = Vec::new();
            for m in monos {
                let (e, c) = m.terms().iter().next().map(|(e, c)| (*e, c.clone())).ok_or_else(|| Error::Validation("zero lambda".into()))?;
                coef.push(PolarRational::from_real(c));
                exp.push(e);
            }
            Ok(WeightFunction::new(coef, exp)?)
        }
        _ => Err(Error::Validation("give exactly one of --gamma and --lambda".into()).into()),
    }
}

fn run_integral(a: &IntegralArgs) -> Result<Value> {
    let nu = datum(&a.datum)?;
    let lam = weight_function(&nu, a.gamma.as_deref(), a.lambda.as_deref())?;
    let hw = weight(&a.hw)?;
    let v = invariant_integral(&nu, &lam, &hw)?;
    let mut out = json!({
        "numerator": poly_json(&v.ratio.num),
        "denominator": poly_json(&v.ratio.den),
        "qdim": poly_json(&v.qdim),
        "lambda": lam.to_string(),
    });
    if let Some(q) = &a.q {
        let qr = big(q)?;
        out["q"] = Value::String(fmt_rational(&qr));
        out["value"] = match v.exact(&qr)? {
            Some(r) => Value::String(fmt_rational(&r)),
            None => real_json(v.value_f64(qr.to_f64().unwrap_or(f64::NAN))),
        };
    }
    Ok(out)
}

fn run_state(a: &StateArgs, detail: bool) -> Result<Value> {
    let case = VermaCase::parse(&a.case)?;
    let eps = big(&a.eps)?;
    let q = big(&a.q)?;
    let nu = case.datum(&eps)?;
    let lam = WeightFunction::from_gamma(nu.rs(), &weight(&a.gamma)?);
    let provider = LowRankProvider { case, eps: eps.clone(), q: q.clone() };
    let st = cell_state(&nu, &lam, &provider, a.depth, &q)?;
    let solved = solve_cell_weights(&nu, &lam, &provider, a.depth, &q)?;
    let eg = e_gamma(&nu, &lam)?;
    let cells: Vec<Value> = st
        .cells
        .iter()
        .zip(&st.weights)
        .zip(&solved)
        .map(|((c, w), s)| {
            let mut v = json!({
                "w": c.w.to_string(),
                "highest": c.highest.to_string(),
                "c_w": real_json(c.c_w),
                "c_w_solved": real_json(*s),
                "trace": real_json(c.trace),
                "weight": real_json(*w),
            });
            if detail {
                v["tail_bound"] = real_json(c.tail_bound);
                v["c_w_exact"] = c.c_w_exact.as_ref().map(|r| Value::String(fmt_rational(r))).unwrap_or(Value::Null);
            }
            v
        })
        .collect();
    Ok(json!({ "case": case.name(), "e_gamma": { "num": poly_json(&eg.num), "den": poly_json(&eg.den) }, "cells": cells }))
}

fn stratum_json(s: &Option<Stratum>) -> Value {
    match s {
        None => json!({ "stratum": null, "admissible": false }),
        Some(Stratum::Plus { c, n }) => json!({ "stratum": "S_plus", "admissible": true, "c": real_json(*c), "n": n }),
        Some(Stratum::Zero { t }) => json!({ "stratum": "S_zero", "admissible": true, "t": real_json(*t) }),
        Some(Stratum::Minus { c, a }) => json!({ "stratum": "S_minus", "admissible": true, "c": real_json(*c), "a": real_json(*a) }),
    }
}

fn build_model(m: &ModelArgs) -> Result<H2Model> {
    let s = match m.stratum {
        StratumKind::Plus => Stratum::Plus { c: real(&m.c)?, n: m.n },
        StratumKind::Zero => Stratum::Zero { t: real(&m.t)? },
        StratumKind::Minus => Stratum::Minus { c: real(&m.c)?, a: real(&m.a)? },
    };
    let sel = match m.block {
        Block::All => BlockSel::All,
        Block::Plus => BlockSel::Plus,
        Block::Minus => BlockSel::Minus,
    };
    Ok(h2_model(s, sel, m.cutoff, real(&m.q)?)?)
}

fn run_h2(op: &H2Op, detail: bool) -> Result<Value> {
    match op {
        H2Op::Stratify { d, t, q } => Ok(stratum_json(&h2_stratify(real(d)?, real(t)?, real(q)?)?)),
        H2Op::Model(m) => {
            let model = build_model(m)?;
            let shown = if detail { usize::MAX } else { 8 };
            let blocks: Vec<Value> = model
                .blocks
                .iter()
                .map(|b| json!({ "label": b.label, "dim": b.z.dim(), "z_spectrum": b.mu().iter().take(shown).map(|x| real_json(*x)).collect::<Vec<_>>() }))
                .collect();
            Ok(json!({
                "stratum": model.stratum.name(),
                "cutoff": model.cutoff,
                "blocks": blocks,
                "relation_residual": real_json(model.relation_residual()),
            }))
        }
        H2Op::State { model, word, residuals } => {
            let m = build_model(model)?;
            let gens = ["z", "v", "w", "u"];
            let idx = list(word, |g| gens.iter().position(|x| *x == g).ok_or_else(|| Error::Validation(format!("unknown generator '{g}'")).into()))?;
            let mut out = json!({ "stratum": m.stratum.name(), "word": word, "state": real_json(m.state(&m.monomial(&idx))) });
            if *residuals {
                let rs = invariance_residuals(&m, 3);
                let worst = rs.iter().map(|r| r.e_action.max(r.k_action)).fold(0.0, f64::max);
                out["max_residual"] = real_json(worst);
                out["monomials"] = json!(rs.len());
            }
            Ok(out)
        }
    }
}

fn family_json(f: &HwFamily) -> Value {
    match f {
        HwFamily::Discrete(m) => json!({ "kind": "discrete", "members": m.iter().map(|x| x.to_string()).collect::<Vec<_>>() }),
        HwFamily::AllModuli => json!({ "kind": "all_moduli" }),
        HwFamily::HalfLines => json!({ "kind": "half_lines" }),
    }
}

fn run_verma(a: &VermaArgs, detail: bool) -> Result<Value> {
    let case = VermaCase::parse(&a.case)?;
    let eps = big(&a.eps)?;
    let q = big(&a.q)?;
    if a.classify {
        let c = classify_hw(case, &eps, &q, a.n_max)?;
        return Ok(json!({ "case": case.name(), "eps": fmt_rational(&eps), "family": family_json(&c.family), "confirmed": c.confirmed }));
    }
    let lam = QMono::parse(a.lambda.as_deref().ok_or_else(|| Error::Validation("--lambda is required without --classify".into()))?)?;
    let r = verma_gram(case, &lam, &eps, a.t_max, &q)?;
    let mut out = json!({
        "case": case.name(),
        "lambda": lam.to_string(),
        "unitarizable": r.unitarizable,
        "truncation": r.truncation,
        "first_negative": r.signs.iter().position(|s| *s < 0),
    });
    if detail {
        out["signs"] = json!(r.signs);
        out["log_norms"] = json!(r.log_norms.iter().map(|x| real_json(*x)).collect::<Vec<_>>());
    }
    Ok(out)
}

fn report_json(r: &verify::Report, detail: bool) -> Value {
    let mut v = json!({ "id": r.id, "suite": r.name, "passed": r.passed, "detail": r.detail });
    if detail {
        v["seconds"] = real_json(r.seconds);
    }
    v
}

fn run_check(a: &CheckArgs, detail: bool) -> Result<(Value, bool)> {
    if a.suite == "all" {
        let ids: Vec<u8> = verify::SUITES.iter().map(|(i, _)| *i).collect();
        let reports: Vec<verify::Report> = ids.par_iter().map(|&i| verify::criterion(i)).collect::<qorbit_core::Result<_>>()?;
        let ok = reports.iter().all(|r| r.passed);
        return Ok((json!({ "passed": ok, "reports": reports.iter().map(|r| report_json(r, detail)).collect::<Vec<_>>() }), ok));
    }
    let id = verify::suite_id(&a.suite)?;
    let r = match (id, a.max_rank) {
        (2, Some(k)) => {
            let t = std::time::Instant::now();
            let (passed, detail) = verify::theosec(k).unwrap_or_else(|e| (false, format!("error: {e}")));
            verify::Report { id, name: "theosec", passed, detail, seconds: t.elapsed().as_secs_f64() }
        }
        (_, Some(_)) => bail!(Error::Validation("--max-rank applies to theosec only".into())),
        _ => verify::criterion(id)?,
    };
    Ok((report_json(&r, detail), r.passed))
}

fn dispatch(cli: &Cli) -> Result<(Value, bool)> {
    let d = cli.detail;
    let v = match &cli.command {
        Command::Rootsys(a) => run_rootsys(a, d)?,
        Command::Fold(a) => run_fold(a, d)?,
        Command::Twist { op } => run_twist(op, d)?,
        Command::Twine(a) => run_twine(a)?,
        Command::Hc(a) => run_hc(a)?,
        Command::Integral(a) => run_integral(a)?,
        Command::State(a) => run_state(a, d)?,
        Command::H2 { op } => run_h2(op, d)?,
        Command::Verma(a) => run_verma(a, d)?,
        Command::Check(a) => return run_check(a, d),
    };
    Ok((v, true))
}

/// Replaces `--json DOC` by the equivalent flags; `DOC` is inline JSON or `@path`.
fn expand_json(args: Vec<String>) -> Result<Vec<String>> {
    let Some(pos) = args.iter().position(|a| a == "--json" || a.starts_with("--json=")) else {
        return Ok(args);
    };
    let (doc, skip) = match args[pos].strip_prefix("--json=") {
        Some(d) => (d.to_string(), 1),
        None => (args.get(pos + 1).cloned().ok_or_else(|| Error::Validation("--json needs a value".into()))?, 2),
    };
    let text = match doc.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => doc,
    };
    let obj: Map<String, Value> = serde_json::from_str(&text).map_err(|e| Error::Validation(format!("bad JSON input: {e}")))?;
    let mut flags = Vec::new();
    for (k, v) in obj {
        let key = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Bool(true) => flags.push(key),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => flags.extend([key, s]),
            Value::Number(n) => flags.extend([key, n.to_string()]),
            Value::Array(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => Ok(s.clone()),
                        Value::Number(n) => Ok(n.to_string()),
                        _ => Err(Error::Validation(format!("unsupported list entry for '{k}'"))),
                    })
                    .collect::<std::result::Result<_, _>>()?;
                flags.extend([key, parts.join(",")]);
            }
            Value::Object(_) => bail!(Error::Validation(format!("nested object for '{k}'"))),
        }
    }
    let mut out = args[..pos].to_vec();
    out.extend(flags);
    out.extend(args[pos + skip..].iter().cloned());
    Ok(out)
}

fn error_json(e: &anyhow::Error) -> (Value, u8) {
    let (kind, code, id) = match e.downcast_ref::<Error>() {
        Some(Error::Validation(_)) => ("validation", 2, None),
        Some(Error::InexactDivision(_)) => ("inexact_division", 2, None),
        Some(Error::Guard(_)) => ("guard", 3, None),
        Some(Error::Invariant { id, .. }) => ("invariant", 4, Some(*id)),
        None => ("io", 1, None),
    };
    (json!({ "error": { "kind": kind, "message": e.to_string(), "assertion": id } }), code)
}

fn emit(v: &Value, out: Option<&std::path::Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("QORBIT_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    configure_threads();
    let args = match expand_json(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            let (v, code) = error_json(&e);
            let _ = emit(&v, None);
            return ExitCode::from(code);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let v = json!({ "error": { "kind": "validation", "message": e.to_string().trim().to_string(), "assertion": null } });
            let _ = emit(&v, None);
            return ExitCode::from(2);
        }
    };
    match dispatch(&cli).and_then(|(v, ok)| emit(&v, cli.out.as_deref()).map(|_| ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let (v, code) = error_json(&e);
            let _ = emit(&v, None);
            ExitCode::from(code)
        }
    }
}
