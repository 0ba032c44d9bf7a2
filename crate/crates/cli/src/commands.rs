use std::fmt::Write as _;
use std::fs;

use anyhow::{bail, Context, Result};
use plmorse_core::builtin::builtin;
use plmorse_core::complex::ComplexInput;
use plmorse_core::flow::{
    pl_differential, pl_trajectories, stable_complex, trajectories_to_dot, trajectory_table,
    unstable_complex, FlowContext, PLMorseComplexData, PLTrajectory, SweptComplex,
};
use plmorse_core::gradient::{gradient_field as field, morse_differential, MorseComplexData};
use plmorse_core::homology::{compare_summaries, homology as cellular_homology, HomologySummary};
use plmorse_core::metric::{self, classify_flows, FlowTag, Metric, SectionFamily};
use plmorse_core::morse::{
    critical_cells, degenerate_flags, random_generic_morse, tameify as make_tame, validate_generic,
    validate_morse, validate_tame, TameStep,
};
use plmorse_core::subdivision::{barycentric_subdivide, flag_name, Subdivision};
use plmorse_core::{CellComplex, CellId, Error, MorseFunction};
use serde_json::{json, Value};

use crate::render::{self, mark, names};
use crate::{Common, Family, Format};

pub enum Body {
    Text(String),
    Json(Value),
}

pub struct Report {
    pub body: Body,
    /// False when a mathematical check failed; the exit status is then 1.
    pub passed: bool,
}

impl Report {
    fn new(c: &Common, table: impl FnOnce() -> String, json: impl FnOnce() -> Value) -> Result<Self> {
        let body = match c.format {
            Format::Table => Body::Text(table()),
            Format::Json => Body::Json(json()),
            Format::Dot => bail!("dot output is not available for this command"),
        };
        Ok(Report { body, passed: true })
    }

    fn with_dot(
        c: &Common,
        table: impl FnOnce() -> String,
        json: impl FnOnce() -> Value,
        dot: impl FnOnce() -> String,
    ) -> Result<Self> {
        if c.format == Format::Dot {
            return Ok(Report {
                body: Body::Text(dot()),
                passed: true,
            });
        }
        Self::new(c, table, json)
    }

    fn passed(mut self, ok: bool) -> Self {
        self.passed = ok;
        self
    }
}

pub fn emit(c: &Common, report: &Report) -> Result<()> {
    let text = match &report.body {
        Body::Text(s) => s.clone(),
        Body::Json(v) => format!("{}\n", serde_json::to_string_pretty(v)?),
    };
    match &c.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// 1 for failed mathematical checks, 2 for usage, parse and IO errors.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::NotMorse(_)
            | Error::NotGeneric(_)
            | Error::NotTame(_)
            | Error::NonSquareZeroBoundary { .. }
            | Error::NotAComplex { .. }
            | Error::DifferentialNotSquareZero { .. }
            | Error::MatrixMismatch { .. }
            | Error::DegenerateDirection { .. }
            | Error::SingularGram
            | Error::NotPositiveDefinite,
        ) => 1,
        _ => 2,
    }
}

fn load_complex(c: &Common) -> Result<CellComplex> {
    if let Some(name) = &c.builtin {
        return Ok(builtin(name)?);
    }
    let path = c.complex.as_ref().context("one of --complex or --builtin is required")?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ComplexInput::from_json(&text)?.build()?)
}

fn load_function(c: &Common, cx: &CellComplex) -> Result<MorseFunction> {
    match &c.morse {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(MorseFunction::from_json(cx, &text)?)
        }
        None => Ok(random_generic_morse(cx, c.seed)),
    }
}

fn load_metric(c: &Common, sd: &Subdivision) -> Result<Metric> {
    match &c.metric {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(Metric::from_json(sd, &text)?)
        }
        None => Ok(Metric::equilateral()),
    }
}

fn cell(cx: &CellComplex, name: &Option<String>) -> Result<Option<CellId>> {
    Ok(match name {
        Some(n) => Some(cx.id_of(n)?),
        None => None,
    })
}

// Input functions that are not tame are made tame first.
fn tame_function(cx: &CellComplex, f: MorseFunction) -> Result<(MorseFunction, Vec<TameStep>)> {
    if validate_tame(cx, &f).is_empty() {
        let check = validate_morse(cx, &f)?;
        if !check.ok() {
            return Err(Error::NotMorse(check.violations.len()).into());
        }
        let generic = validate_generic(cx, &f);
        if !generic.is_empty() {
            return Err(Error::NotGeneric(generic.len()).into());
        }
        return Ok((f, Vec::new()));
    }
    let t = make_tame(cx, &f)?;
    Ok((t.function, t.steps))
}

fn pair_names(cx: &CellComplex, pairs: &[(CellId, CellId)]) -> Vec<(String, String)> {
    pairs.iter().map(|(a, b)| (cx.name(*a).to_string(), cx.name(*b).to_string())).collect()
}

fn homology_json(h: &HomologySummary) -> Value {
    json!({ "groups": h.groups.iter().map(ToString::to_string).collect::<Vec<_>>(), "betti": h.betti() })
}

pub fn validate(c: &Common) -> Result<Report> {
    let cx = load_complex(c)?;
    let f = load_function(c, &cx)?;
    let morse = validate_morse(&cx, &f)?;
    let generic = validate_generic(&cx, &f);
    let tame = validate_tame(&cx, &f);
    let degenerate = degenerate_flags(&cx, &f);
    let square_zero = (2..=cx.dim()).all(|d| {
        cx.incidence_matrix(d - 1)
            .entries
            .mul(&cx.incidence_matrix(d).entries)
            .is_ok_and(|m| m.is_zero())
    });
    let ok = morse.ok() && generic.is_empty() && tame.is_empty() && square_zero;
    let table = || {
        let mut s = format!(
            "morse {} generic {} tame {}\n∂²=0 {}\n",
            mark(morse.ok()),
            mark(generic.is_empty()),
            mark(tame.is_empty()),
            mark(square_zero)
        );
        for v in &morse.violations {
            let _ = writeln!(
                s,
                "morse violation at {}: low cofacets [{}], high facets [{}]",
                cx.name(v.cell),
                names(&cx, &v.low_cofacets).join(" "),
                names(&cx, &v.high_facets).join(" ")
            );
        }
        for (a, b) in pair_names(&cx, &generic) {
            let _ = writeln!(s, "generic violation: F({a}) = F({b})");
        }
        for (a, b) in pair_names(&cx, &tame) {
            let _ = writeln!(s, "tame violation: F({b}) <= F({a})");
        }
        let _ = writeln!(s, "degenerate flags: {}", degenerate.len());
        s
    };
    let json = || {
        let morse_v: Vec<Value> = morse
            .violations
            .iter()
            .map(|v| {
                json!({
                    "cell": cx.name(v.cell),
                    "low_cofacets": names(&cx, &v.low_cofacets),
                    "high_facets": names(&cx, &v.high_facets),
                })
            })
            .collect();
        json!({
            "morse": morse.ok(),
            "generic": generic.is_empty(),
            "tame": tame.is_empty(),
            "boundary_squares_to_zero": square_zero,
            "violations": {
                "morse": morse_v,
                "generic": pair_names(&cx, &generic),
                "tame": pair_names(&cx, &tame),
            },
            "degenerate_flags": degenerate.iter().map(|fl| flag_name(&cx, fl)).collect::<Vec<_>>(),
        })
    };
    Ok(Report::new(c, table, json)?.passed(ok))
}

pub fn tameify(c: &Common) -> Result<Report> {
    let cx = load_complex(c)?;
    let f = load_function(c, &cx)?;
    let t = make_tame(&cx, &f)?;
    let step_json = |s: &TameStep| {
        json!({
            "alpha": cx.name(s.alpha),
            "beta": cx.name(s.beta),
            "epsilon": cx.name(s.epsilon),
            "old": s.old_value.to_string(),
            "new": s.new_value.to_string(),
            "violations_before": s.violations_before,
            "violations_after": s.violations_after,
        })
    };
    let table = || {
        let mut s = format!("tameify: {} steps\n", t.steps.len());
        for st in &t.steps {
            let _ = writeln!(
                s,
                "  ({}, {}) via {}: F({}) {} -> {}, violations {} -> {}",
                cx.name(st.alpha),
                cx.name(st.beta),
                cx.name(st.epsilon),
                cx.name(st.beta),
                st.old_value,
                st.new_value,
                st.violations_before,
                st.violations_after
            );
        }
        s.push_str("values:\n");
        for id in cx.ids() {
            let _ = writeln!(s, "  {} = {}", cx.name(id), t.function.value(id));
        }
        s
    };
    let json = || {
        let mut v = t.function.to_json(&cx);
        v["steps"] = t.steps.iter().map(step_json).collect();
        v
    };
    Report::new(c, table, json)
}

pub fn critical(c: &Common) -> Result<Report> {
    let cx = load_complex(c)?;
    let f = load_function(c, &cx)?;
    let r = critical_cells(&cx, &f)?;
    let table = || {
        let mut s = format!("critical cells {}\n", render::tuple(&r.critical_counts()));
        s.push_str(&render::graded(&cx, &r.critical));
        s.push_str("pairs:\n");
        for (a, b) in pair_names(&cx, &r.pairs) {
            let _ = writeln!(s, "  {a} < {b}");
        }
        s
    };
    let json = || {
        json!({
            "critical": r.critical.iter().map(|v| names(&cx, v)).collect::<Vec<_>>(),
            "counts": r.critical_counts(),
            "pairs": pair_names(&cx, &r.pairs),
        })
    };
    Report::new(c, table, json)
}

pub fn gradient_field(c: &Common) -> Result<Report> {
    let cx = load_complex(c)?;
    let f = load_function(c, &cx)?;
    let v = field(&cx, &f)?;
    let table = || {
        let mut s = String::from("gradient field\n");
        for (a, b, sign) in v.arrows() {
            let _ = writeln!(s, "  {} -> {} ({sign:+})", cx.name(a), cx.name(b));
        }
        s
    };
    Report::with_dot(c, table, || v.to_json(&cx), || v.to_dot(&cx))
}

fn differential_table(cx: &CellComplex, symbol: &str, basis: &[Vec<CellId>], diffs: &[plmorse_core::matrix::IntMatrix]) -> String {
    let mut s = String::new();
    for (k, m) in diffs.iter().enumerate() {
        s.push_str(&render::matrix(
            &format!("{symbol}_{}", k + 1),
            &names(cx, &basis[k]),
            &names(cx, &basis[k + 1]),
            m,
        ));
    }
    s
}

pub fn morse_complex(c: &Common) -> Result<Report> {
    let cx = load_complex(c)?;
    let f = load_function(c, &cx)?;
    let m = morse_differential(&cx, &f)?;
    let h = cellular_homology(&m.chain_complex(&cx));
    let table = || {
        let mut s = String::from("critical cells\n");
        s.push_str(&render::graded(&cx, &m.basis));
        s.push_str(&differential_table(&cx, "∂̃", &m.basis, &m.differentials));
        let _ = writeln!(s, "H(ℳ): {h}");
        s
    };
    let json = || {
        let mut v = m.to_json(&cx);
        v["homology"] = homology_json(&h);
        v
    };
    Report::new(c, table, json)
}

pub fn homology(c: &Common) -> Result<Report> {
    let cx = load_complex(c)?;
    let h = cellular_homology(&cx.chain_complex());
    let counts: Vec<usize> = (0..=cx.dim()).map(|d| cx.count_of_dim(d)).collect();
    let table = || {
        format!(
            "cells {}\nH: {h}\nbetti {}\neuler characteristic {}\n",
            render::tuple(&counts),
            render::tuple(&h.betti()),
            h.euler_characteristic()
        )
    };
    let json = || {
        let mut v = homology_json(&h);
        v["cells"] = json!(counts);
        v["euler_characteristic"] = json!(h.euler_characteristic());
        v
    };
    Report::new(c, table, json)
}

pub fn subdivide(c: &Common) -> Result<Report> {
    let cx = load_complex(c)?;
    let f = load_function(c, &cx)?;
    let sd = barycentric_subdivide(&cx, &f);
    let vertices = || -> Vec<Value> {
        cx.ids()
            .map(|v| json!({ "name": cx.name(v), "dim": cx.cell_dim(v), "f": sd.f(v).to_string() }))
            .collect()
    };
    let table = || {
        let counts: Vec<usize> = (0..=sd.dim()).map(|k| sd.count_of_dim(k)).collect();
        let mut s = format!("X₁ simplices {}\n", render::tuple(&counts));
        for i in 0..=sd.dim() {
            let rib = sd.rib(i).expect("in range");
            let _ = writeln!(s, "rib {i}: {}", render::tuple(&rib.counts()));
        }
        s.push_str("vertices:\n");
        for v in cx.ids() {
            let _ = writeln!(s, "  {} (dim {}) f={}", cx.name(v), cx.cell_dim(v), sd.f(v));
        }
        s
    };
    let json = || {
        let mut v = sd.summary_json();
        v["vertices"] = json!(vertices());
        v["simplices"] = sd.all().to_json(&cx)["simplices"].clone();
        v
    };
    Report::with_dot(c, table, json, || sd.to_dot())
}

pub fn audit_metric(c: &Common, family: Family) -> Result<Report> {
    let cx = load_complex(c)?;
    let f = match c.morse {
        Some(_) => load_function(c, &cx)?,
        None => MorseFunction::trivial(&cx),
    };
    let sd = barycentric_subdivide(&cx, &f);
    let m = load_metric(c, &sd)?;
    let family = match family {
        Family::SplitFaces => SectionFamily::SplitFaces,
        Family::Chords => SectionFamily::Chords,
    };
    let r = metric::audit_metric(&sd, &m, c.samples, c.seed, family);
    let table = || {
        let mut s = format!(
            "{} failures / {} sections ({} simplices)\n",
            r.failures.len(),
            r.sections,
            r.simplices
        );
        for fail in r.failures.iter().take(10) {
            let coords = |v: &[plmorse_core::Rational]| {
                v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
            };
            let _ = writeln!(
                s,
                "  {} apex {}: b = [{}], c = [{}], corner {} dot {}",
                flag_name(&cx, &fail.simplex),
                fail.apex,
                coords(&fail.b),
                coords(&fail.c),
                fail.corner,
                fail.dot
            );
        }
        s
    };
    let ok = r.passed();
    Ok(Report::new(c, table, || r.to_json(&cx))?.passed(ok))
}

pub fn flows(c: &Common) -> Result<Report> {
    let cx = load_complex(c)?;
    let f = load_function(c, &cx)?;
    let sd = barycentric_subdivide(&cx, &f);
    let m = load_metric(c, &sd)?;
    let fl = classify_flows(&sd, &m)?;
    let table = || {
        let mut s = format!(
            "in-flow {} out-flow {}\n",
            fl.count(FlowTag::InFlow),
            fl.count(FlowTag::OutFlow)
        );
        for (simplex, k, tag) in fl.facet_pairs() {
            let mut facet = simplex.clone();
            facet.remove(k);
            let tag = match tag {
                FlowTag::InFlow => "in",
                FlowTag::OutFlow => "out",
            };
            let _ = writeln!(s, "  {} | {} | {tag}", flag_name(&cx, simplex), flag_name(&cx, &facet));
        }
        s
    };
    Report::with_dot(c, table, || fl.to_json(&cx), || fl.to_dot(&cx))
}

fn describe_steps(steps: &[TameStep]) -> String {
    if steps.is_empty() {
        String::new()
    } else {
        format!("tameify steps: {}\n", steps.len())
    }
}

pub fn trajectories(c: &Common) -> Result<Report> {
    let cx = load_complex(c)?;
    let (f, steps) = tame_function(&cx, load_function(c, &cx)?)?;
    let sd = barycentric_subdivide(&cx, &f);
    let m = load_metric(c, &sd)?;
    let ctx = FlowContext::forward(&sd, &m)?;
    let table_pairs: Vec<((CellId, CellId), Vec<PLTrajectory>)> = match (cell(&cx, &c.from)?, cell(&cx, &c.to)?) {
        (Some(p), Some(q)) => vec![((p, q), pl_trajectories(&ctx, p, q)?)],
        (None, None) => trajectory_table(&ctx)?.into_iter().collect(),
        _ => bail!("--from and --to must be given together"),
    };
    let all: Vec<PLTrajectory> = table_pairs.iter().flat_map(|(_, ts)| ts.iter().cloned()).collect();
    let table = || {
        let mut s = describe_steps(&steps);
        for ((p, q), ts) in &table_pairs {
            let total: i32 = ts.iter().map(|t| t.sign).sum();
            let _ = writeln!(s, "{} -> {}: {} trajectories, signed count {total}", cx.name(*p), cx.name(*q), ts.len());
            for t in ts {
                let _ = writeln!(s, "  {}", t.describe(&cx));
            }
        }
        s
    };
    let json = || {
        let pairs: Vec<Value> = table_pairs
            .iter()
            .map(|((p, q), ts)| {
                json!({
                    "from": cx.name(*p),
                    "to": cx.name(*q),
                    "signed_count": ts.iter().map(|t| t.sign).sum::<i32>(),
                    "trajectories": ts.iter().map(|t| t.to_json(&cx)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "tameify_steps": steps.len(), "pairs": pairs })
    };
    Report::with_dot(c, table, json, || trajectories_to_dot(&sd, &all))
}

fn pl_table(cx: &CellComplex, pl: &PLMorseComplexData) -> String {
    let mut s = String::from("critical vertices\n");
    s.push_str(&render::graded(cx, &pl.basis));
    s.push_str(&differential_table(cx, "d_PL", &pl.basis, &pl.differentials));
    s
}

pub fn pl_complex(c: &Common, reversed: bool) -> Result<Report> {
    let cx = load_complex(c)?;
    let (f, steps) = tame_function(&cx, load_function(c, &cx)?)?;
    let sd = barycentric_subdivide(&cx, &f);
    let m = load_metric(c, &sd)?;
    let fwd = FlowContext::forward(&sd, &m)?;
    let ctx = if reversed { fwd.reversed() } else { fwd };
    let pl = pl_differential(&ctx)?;
    let h = cellular_homology(&pl.chain_complex(&cx));
    let table = || {
        let mut s = describe_steps(&steps);
        let _ = writeln!(s, "flow {}", if reversed { "reversed" } else { "forward" });
        s.push_str(&pl_table(&cx, &pl));
        let _ = writeln!(s, "trajectories {}", pl.trajectory_count);
        let _ = writeln!(s, "H(ℳ_PL): {h}");
        s
    };
    let json = || {
        let mut v = pl.to_json(&cx);
        v["homology"] = homology_json(&h);
        v["tameify_steps"] = json!(steps.len());
        v
    };
    Report::new(c, table, json)
}

pub fn swept(c: &Common, stable: bool) -> Result<Report> {
    let cx = load_complex(c)?;
    let (f, steps) = tame_function(&cx, load_function(c, &cx)?)?;
    let sd = barycentric_subdivide(&cx, &f);
    let m = load_metric(c, &sd)?;
    let ctx = FlowContext::forward(&sd, &m)?;
    let origins: Vec<CellId> = match cell(&cx, &c.from)? {
        Some(p) => vec![p],
        None => ctx.report().all_critical().collect(),
    };
    let sweep = |p: CellId| if stable { stable_complex(&ctx, p) } else { unstable_complex(&ctx, p) };
    let complexes: Vec<SweptComplex> = origins.into_iter().map(sweep).collect::<Result<_, _>>()?;
    let table = || {
        let mut s = describe_steps(&steps);
        for sc in &complexes {
            let _ = writeln!(
                s,
                "{}: cells [{}], X₁ simplices {}",
                plmorse_core::flow::swept_name(&cx, sc),
                names(&cx, &sc.cells).join(" "),
                render::tuple(&sc.subdivision.counts())
            );
        }
        s
    };
    let json = || json!(complexes.iter().map(|sc| sc.to_json(&cx)).collect::<Vec<_>>());
    Report::new(c, table, json)
}

pub fn pipeline(c: &Common) -> Result<Report> {
    let cx = load_complex(c)?;
    let (f, steps) = tame_function(&cx, load_function(c, &cx)?)?;
    let cellular = cellular_homology(&cx.chain_complex());
    let dm: MorseComplexData = morse_differential(&cx, &f)?;
    let morse_h = cellular_homology(&dm.chain_complex(&cx));
    let sd = barycentric_subdivide(&cx, &f);
    let m = load_metric(c, &sd)?;
    let ctx = FlowContext::forward(&sd, &m)?;
    let pl = pl_differential(&ctx)?;
    let pl_h = cellular_homology(&pl.chain_complex(&cx));

    let square_zero = dm
        .differentials
        .windows(2)
        .all(|w| w[0].mul(&w[1]).is_ok_and(|p| p.is_zero()));
    let agree = pl.check_against(&cx, &dm);
    let matches = compare_summaries(&morse_h, &cellular).isomorphic && compare_summaries(&pl_h, &cellular).isomorphic;
    let ok = agree.is_ok() && matches;
    let verdict = format!(
        "∂̃²=0 {}, d_PL=∂̃ {}, H matches cellular {} {}",
        mark(square_zero),
        mark(agree.is_ok()),
        mark(matches),
        render::tuple(&cellular.betti())
    );
    let counts: Vec<usize> = (0..=cx.dim()).map(|d| cx.count_of_dim(d)).collect();
    let table = || {
        let mut s = format!("cells {}\n", render::tuple(&counts));
        s.push_str(&describe_steps(&steps));
        s.push_str("critical cells\n");
        s.push_str(&render::graded(&cx, &dm.basis));
        s.push_str(&differential_table(&cx, "∂̃", &dm.basis, &dm.differentials));
        s.push_str(&differential_table(&cx, "d_PL", &pl.basis, &pl.differentials));
        let _ = writeln!(s, "trajectories {}", pl.trajectory_count);
        let _ = writeln!(s, "H(cellular): {cellular}");
        let _ = writeln!(s, "H(ℳ): {morse_h}");
        let _ = writeln!(s, "H(ℳ_PL): {pl_h}");
        if let Err(e) = &agree {
            let _ = writeln!(s, "mismatch: {e}");
        }
        let _ = writeln!(s, "{verdict}");
        s
    };
    let json = || {
        json!({
            "cells": counts,
            "function": f.to_json(&cx)["values"],
            "tameify_steps": steps.len(),
            "morse_complex": dm.to_json(&cx),
            "pl_complex": pl.to_json(&cx),
            "homology": {
                "cellular": homology_json(&cellular),
                "morse": homology_json(&morse_h),
                "pl": homology_json(&pl_h),
            },
            "checks": {
                "morse_differential_squares_to_zero": square_zero,
                "pl_equals_morse": agree.is_ok(),
                "homology_matches_cellular": matches,
            },
            "verdict": verdict,
        })
    };
    Ok(Report::new(c, table, json)?.passed(ok))
}
