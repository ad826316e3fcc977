use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use cubing_core::automorphism::{automorphism_failure, power_map, GroupMap};
use cubing_core::cache::{AutCache, CachePolicy};
use cubing_core::classify::classify_theorem31;
use cubing_core::cubing::{cube_set, max_cube_ratio_with, MaxMethod};
use cubing_core::io::{group_to_json, parse_group_json};
use cubing_core::sfs::{self, LinearEquation, SfsInstance};
use cubing_core::verify::report::timed;
use cubing_core::verify::suites::{self, LemmaScope, SuiteConfig};
use cubing_core::verify::{catalog, label, resolve, Report};
use cubing_core::{AssocCheck, FiniteGroup, Rational};
use serde_json::{json, Value};

use crate::args::{CubeCmd, Global, GroupCmd, SearchCmd, SfsCmd, VerifyCmd};
use crate::CliError;

/// What a command produced, in every output shape.
pub struct Outcome {
    pub report: Report,
    pub text: String,
    pub csv: Option<String>,
}

impl Outcome {
    fn new(report: Report, text: String) -> Self {
        Outcome { report, text, csv: None }
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

pub struct Context {
    pub global: Global,
    pub suite: SuiteConfig,
}

impl Context {
    pub fn new(global: Global) -> Self {
        let policy = if global.no_cache {
            CachePolicy::Bypass
        } else if global.rebuild_cache {
            CachePolicy::Rebuild
        } else {
            CachePolicy::Use
        };
        let cache = global.cache_dir.clone().or_else(AutCache::default_dir).map(AutCache::new);
        let suite = SuiteConfig { seed: global.seed, cache, policy, aut_cap: global.aut_cap };
        Context { global, suite }
    }

    fn budget(&self, default: u64) -> u64 {
        self.global.budget.unwrap_or(default)
    }

    fn assoc(&self) -> AssocCheck {
        if self.global.strict {
            AssocCheck::Full
        } else {
            AssocCheck::Auto
        }
    }

    fn report(&self, check: &str, scope: Value) -> Report {
        Report::new(check, scope, self.global.seed)
    }

    /// A file path if one exists, otherwise a built-in name.
    pub fn group(&self, spec: &str) -> Result<FiniteGroup, CliError> {
        if Path::new(spec).is_file() {
            return self.load(Path::new(spec));
        }
        Ok(resolve(spec)?)
    }

    fn load(&self, path: &Path) -> Result<FiniteGroup, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        let loaded = parse_group_json(&text, self.assoc()).map_err(|e| CliError::Load(path.display().to_string(), e))?;
        Ok(loaded.group)
    }
}

fn ratio(r: &Rational) -> String {
    format!("{r} ({:.6})", r.to_f64())
}

pub fn summary(g: &FiniteGroup) -> Value {
    let series = g.derived_series();
    let solvable = g.is_solvable();
    let mut sylow = BTreeMap::new();
    let mut m = g.order();
    let mut p = 2;
    while m > 1 {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            sylow.insert(p.to_string(), g.sylow(p).order());
        }
        p += 1;
    }
    json!({
        "name": label(g),
        "order": g.order(),
        "table_hash": g.table_hash(),
        "abelian": g.is_abelian(),
        "center_order": g.center().order(),
        "exponent": g.exponent(),
        "solvable": solvable,
        "derived_length": solvable.then(|| series.len() - 1),
        "nilpotency_class": g.nilpotency_class(),
        "simple": g.is_simple(),
        "sylow_orders": sylow,
    })
}

fn summary_text(s: &Value) -> String {
    let mut t = String::new();
    for key in ["name", "order", "abelian", "center_order", "exponent", "solvable", "derived_length", "nilpotency_class", "simple"] {
        let v = match &s[key] {
            Value::String(x) => x.clone(),
            Value::Null => "-".into(),
            other => other.to_string(),
        };
        let _ = writeln!(t, "{key:<17}{v}");
    }
    let sylow: Vec<String> =
        s["sylow_orders"].as_object().into_iter().flatten().map(|(p, o)| format!("{p}:{o}")).collect();
    let _ = writeln!(t, "{:<17}{}", "sylow_orders", sylow.join(" "));
    let _ = write!(t, "{:<17}{}", "table_hash", s["table_hash"].as_str().unwrap_or_default());
    t
}

/// Maps `name p1 p2 …` onto the built-in naming scheme.
fn builder_name(name: &str, params: &[usize]) -> Result<String, CliError> {
    let p = |i: usize| params.get(i).copied().ok_or_else(|| CliError::Usage(format!("{name} needs {} parameter(s)", i + 1)));
    let joined = match name {
        "cyclic" | "c" | "z" => format!("c{}", p(0)?),
        "dihedral" | "d" => format!("d{}", p(0)?),
        "dicyclic" | "dic" => format!("dic{}", p(0)?),
        "quaternion8" | "q8" => "q8".into(),
        "symmetric" | "s" => format!("s{}", p(0)?),
        "alternating" | "a" => format!("a{}", p(0)?),
        "psl2" | "l2" => format!("psl2_{}", p(0)?),
        "pgl2" => format!("pgl2_{}", p(0)?),
        "sl2" => format!("sl2_{}", p(0)?),
        "heisenberg" | "heis" => format!("heis{}", p(0)?),
        "type3_group_i" | "t3i" => format!("t3i_{}", p(0)?),
        "type3_group_ii" | "t3ii" => "t3ii".into(),
        "cyclic_semidirect" => format!("c{}:c{}:{}", p(0)?, p(1)?, p(2)?),
        other if params.is_empty() => other.to_string(),
        other => return Err(CliError::Usage(format!("unknown builder '{other}'"))),
    };
    Ok(joined)
}

pub fn group(ctx: &Context, cmd: &GroupCmd) -> Result<Outcome, CliError> {
    let (g, scope) = match cmd {
        GroupCmd::Build { name, params, out } => {
            let g = resolve(&builder_name(name, params)?)?;
            if let Some(path) = out {
                std::fs::write(path, group_to_json(&g)).map_err(|e| CliError::Io(path.display().to_string(), e))?;
            }
            (g, json!({"builder": name, "params": params}))
        }
        GroupCmd::Load { file } => (ctx.load(file)?, json!({"file": file.display().to_string()})),
        GroupCmd::Info { group } => (ctx.group(group)?, json!({"group": group})),
        GroupCmd::Catalog { order_cap } => {
            let groups = catalog(*order_cap);
            let rows: Vec<Value> = groups.iter().map(|g| json!({"name": label(g), "order": g.order()})).collect();
            let mut report = ctx.report("group-catalog", json!({"order_cap": order_cap}));
            report.instances = rows.len() as u64;
            let text = groups.iter().map(|g| format!("{:>5}  {}", g.order(), label(g))).collect::<Vec<_>>().join("\n");
            let csv = std::iter::once("name,order".to_string())
                .chain(groups.iter().map(|g| format!("{},{}", label(g), g.order())))
                .collect::<Vec<_>>()
                .join("\n");
            report.data = json!({"groups": rows});
            return Ok(Outcome::new(report, text).with_csv(csv));
        }
    };
    let s = summary(&g);
    let mut report = ctx.report("group-info", scope);
    report.instances = 1;
    let text = summary_text(&s);
    report.data = s;
    Ok(Outcome::new(report, text))
}

fn read_map(path: &Path) -> Result<GroupMap, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let images: Vec<usize> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
    Ok(GroupMap::new(images))
}

pub fn cube(ctx: &Context, cmd: &CubeCmd) -> Result<Outcome, CliError> {
    match cmd {
        CubeCmd::Ratio { group, aut_file, power, exponent } => {
            let g = ctx.group(group)?;
            let alpha = match (aut_file, power) {
                (Some(f), _) => read_map(f)?,
                (None, Some(k)) => power_map(&g, *k),
                (None, None) => GroupMap::identity(g.order()),
            };
            if alpha.len() != g.order() {
                return Err(CliError::Usage(format!("map has {} images for a group of order {}", alpha.len(), g.order())));
            }
            if let Some(f) = automorphism_failure(&g, &alpha) {
                return Err(CliError::Usage(format!("not an automorphism: {f}")));
            }
            let r = cube_set(&g, &alpha, *exponent)?;
            let mut report = ctx.report("cube-ratio", json!({"group": label(&g), "power": power, "exponent": exponent}));
            report.instances = 1;
            let text = format!("|T| = {} of {}\nratio {}", r.members.len(), r.order, ratio(&r.ratio));
            report.data = serde_json::to_value(&r).expect("serializable");
            Ok(Outcome::new(report, text))
        }
        CubeCmd::Max { group, exponent } => {
            let g = ctx.group(group)?;
            let m = max_cube_ratio_with(&g, *exponent, || ctx.suite.automorphisms(&g))?;
            let mut report = ctx.report("cube-max", json!({"group": label(&g), "exponent": exponent}));
            let method = match m.method {
                MaxMethod::Exhaustive { automorphisms } => format!("exhaustive over {automorphisms} automorphisms"),
                MaxMethod::PowerMap => "power map is an automorphism".to_string(),
            };
            report.instances = match m.method {
                MaxMethod::Exhaustive { automorphisms } => automorphisms as u64,
                MaxMethod::PowerMap => 1,
            };
            let text = format!("max ratio {}\n{method}", ratio(&m.ratio));
            report.data = serde_json::to_value(&m).expect("serializable");
            Ok(Outcome::new(report, text))
        }
        CubeCmd::Classify { group } => {
            let g = ctx.group(group)?;
            let v = classify_theorem31(&g);
            let measured = v.constructed_alpha.as_ref().map(|a| cube_set(&g, a, 3)).transpose()?.map(|r| r.ratio);
            let mut report = ctx.report("cube-classify", json!({"group": label(&g)}));
            report.instances = 1;
            if measured.is_some() && measured != v.predicted_ratio {
                report.failures.push(json!({"predicted": v.predicted_ratio, "measured": measured}));
            }
            let mut text = format!("verdict {}", v.kind);
            if let Some(r) = &measured {
                let _ = write!(text, "\nratio {}", ratio(r));
            }
            for n in &v.notes {
                let _ = write!(text, "\nnote: {n}");
            }
            report.data = json!({"verdict": v, "measured": measured});
            Ok(Outcome::new(report, text))
        }
    }
}

fn equations(raw: &[String]) -> Result<Vec<LinearEquation>, CliError> {
    if raw.is_empty() {
        return Ok(vec![LinearEquation::ap3(), LinearEquation::weighted()]);
    }
    raw.iter().map(|s| s.parse::<LinearEquation>().map_err(CliError::from)).collect()
}

pub fn sfs(ctx: &Context, cmd: &SfsCmd) -> Result<Outcome, CliError> {
    let budget = ctx.budget(sfs::DEFAULT_BUDGET);
    match cmd {
        SfsCmd::T { n, equations: eqs } => {
            let inst = SfsInstance::new(*n, equations(eqs)?)?;
            let r = sfs::max_free_subset(&inst, budget)?;
            let mut report = ctx.report("sfs-t", json!({"n": n, "equations": inst.equations, "budget": budget}));
            report.instances = 1;
            let text = format!("T({n}) = {}\ntau = {}\nwitness {:?}\nclasses {}", r.t, ratio(&r.tau), r.witness, r.extremal_sets.len());
            report.data = serde_json::to_value(&r).expect("serializable");
            Ok(Outcome::new(report, text))
        }
        SfsCmd::TauRange { lo, hi, bound } => {
            let bound: Rational = bound.parse().map_err(|e| CliError::Usage(format!("bad bound: {e}")))?;
            if lo > hi {
                return Err(CliError::Usage(format!("empty range {lo}..{hi}")));
            }
            let report = timed(|| {
                let mut report = ctx.report("sfs-tau-range", json!({"lo": lo, "hi": hi, "bound": bound, "budget": budget}));
                match sfs::verify_tau_bound(*lo, *hi, bound, budget) {
                    Ok(rows) => {
                        report.instances = rows.len() as u64;
                        report.failures = rows.iter().filter(|r| !r.pass).map(|r| json!(r)).collect();
                        report.data = json!({"rows": rows});
                    }
                    Err(e) => report.failures.push(json!({"error": e.to_string()})),
                }
                report
            });
            let rows = report.data["rows"].as_array().cloned().unwrap_or_default();
            let text = rows
                .iter()
                .map(|r| format!("{:>4}  T={:<3} tau={}/{}  {}", r["n"].to_string(), r["t"].to_string(), r["tau"]["num"], r["tau"]["den"], if r["pass"] == json!(true) { "ok" } else { "FAIL" }))
                .collect::<Vec<_>>()
                .join("\n");
            let csv = std::iter::once("n,t,tau,pass".to_string())
                .chain(rows.iter().map(|r| format!("{},{},{}/{},{}", r["n"], r["t"], r["tau"]["num"], r["tau"]["den"], r["pass"])))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::new(report, text).with_csv(csv))
        }
        SfsCmd::Table => {
            let report = timed(|| {
                let mut report = ctx.report("sfs-table", json!({"budget": budget}));
                match sfs::reproduce_table(budget) {
                    Ok(rows) => {
                        report.instances = rows.len() as u64;
                        report.failures = rows.iter().filter(|r| !r.matches).map(|r| json!(r)).collect();
                        report.data = json!({"rows": rows});
                    }
                    Err(e) => report.failures.push(json!({"error": e.to_string()})),
                }
                report
            });
            let rows = report.data["rows"].as_array().cloned().unwrap_or_default();
            let text = std::iter::once(format!("{:>4}  {:>4}  {:>8}  {:>8}", "n", "T(n)", "tau", "expected"))
                .chain(rows.iter().map(|r| {
                    let frac = |v: &Value| format!("{}/{}", v["num"], v["den"]);
                    format!("{:>4}  {:>4}  {:>8}  {:>8}  {}", r["n"].to_string(), r["t"].to_string(), frac(&r["tau"]), frac(&r["expected_tau"]), if r["matches"] == json!(true) { "ok" } else { "MISMATCH" })
                }))
                .collect::<Vec<_>>()
                .join("\n");
            let csv = std::iter::once("n,t,tau,expected_t,matches".to_string())
                .chain(rows.iter().map(|r| format!("{},{},{}/{},{},{}", r["n"], r["t"], r["tau"]["num"], r["tau"]["den"], r["expected_t"], r["matches"])))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::new(report, text).with_csv(csv))
        }
        SfsCmd::Extremal { n, size, raw } => {
            let inst = SfsInstance::standard(*n)?;
            let e = sfs::enumerate_extremal(&inst, *size, budget)?;
            let sets = if *raw { &e.raw } else { &e.canonical };
            let mut report = ctx.report("sfs-extremal", json!({"n": n, "size": size, "raw": raw, "budget": budget}));
            report.instances = sets.len() as u64;
            let text = std::iter::once(format!("{} set(s)", sets.len()))
                .chain(sets.iter().map(|s| format!("{s:?}")))
                .collect::<Vec<_>>()
                .join("\n");
            let csv = sets.iter().map(|s| s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join("\n");
            report.data = json!({"sets": sets, "canonical_classes": e.canonical.len(), "raw_count": e.raw.len()});
            Ok(Outcome::new(report, text).with_csv(csv))
        }
    }
}

fn report_text(r: &Report) -> String {
    let mut t = format!(
        "{}: {} ({} instances, {} failures, seed {})",
        r.check,
        if r.passed() { "PASS" } else { "FAIL" },
        r.instances,
        r.failures.len(),
        r.seed
    );
    for f in r.failures.iter().take(20) {
        let _ = write!(t, "\n  {f}");
    }
    t
}

fn rows_csv(rows: &Value, columns: &[&str]) -> String {
    let cell = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Object(o) if o.contains_key("num") => format!("{}/{}", o["num"], o["den"]),
        Value::Null => String::new(),
        other => other.to_string().replace(',', ";"),
    };
    std::iter::once(columns.join(","))
        .chain(rows.as_array().into_iter().flatten().map(|r| columns.iter().map(|c| cell(&r[*c])).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn verify(ctx: &Context, cmd: &VerifyCmd) -> Result<Outcome, CliError> {
    let cfg = &ctx.suite;
    let out = match cmd {
        VerifyCmd::Lemmas { order_cap, exhaustive_cap, min_samples } => {
            let scope = LemmaScope { exhaustive_cap: *exhaustive_cap, sample_cap: *order_cap, min_samples: *min_samples };
            let r = suites::run_lemma_suite(scope, cfg);
            let mut text = report_text(&r);
            let _ = write!(
                text,
                "\nexhaustive {} + sampled {} instances",
                r.data["exhaustive_instances"], r.data["sampled_instances"]
            );
            for (lemma, n) in r.data["checked"].as_object().into_iter().flatten() {
                let _ = write!(text, "\n  {lemma:<20}{n}");
            }
            let csv = rows_csv(&r.data["groups"], &["group", "order", "aut_order", "instances", "mode"]);
            Outcome::new(r, text).with_csv(csv)
        }
        VerifyCmd::Theorem31 { order_cap } => {
            let r = suites::verify_theorem31(*order_cap, cfg);
            let text = report_text(&r);
            let csv = rows_csv(&r.data["groups"], &["group", "order", "verdict", "predicted", "constructed", "max"]);
            Outcome::new(r, text).with_csv(csv)
        }
        VerifyCmd::SolvableBoundary { order_cap } => {
            let r = suites::verify_solvability_boundary(*order_cap, cfg);
            let mut text = report_text(&r);
            for row in r.data["named"].as_array().into_iter().flatten() {
                let _ = write!(text, "\n  {:<8} max {}/{} {} 4/15", row["group"].as_str().unwrap_or_default(), row["max"]["num"], row["max"]["den"], row["relation"].as_str().unwrap_or_default());
            }
            let csv = rows_csv(&r.data["catalog"], &["group", "max", "above", "solvable"]);
            Outcome::new(r, text).with_csv(csv)
        }
        VerifyCmd::Table1 { max_q } => {
            let r = suites::verify_table1(*max_q, ctx.budget(50_000_000), ctx.global.seed);
            let mut text = report_text(&r);
            for row in r.data["rows"].as_array().into_iter().flatten() {
                let _ = write!(text, "\n  L2({}) order {} max abelian {} index {}", row["q"], row["order"], row["max_abelian"], row["index"]);
            }
            let csv = rows_csv(&r.data["rows"], &["q", "order", "max_abelian", "index", "expected", "exact"]);
            Outcome::new(r, text).with_csv(csv)
        }
    };
    Ok(out)
}

pub fn search(ctx: &Context, cmd: &SearchCmd) -> Result<Outcome, CliError> {
    let SearchCmd::RemarkN { n, order_cap } = cmd;
    let r = suites::remark_n_search(*n, *order_cap, &ctx.suite);
    let mut text = report_text(&r);
    let _ = write!(
        text,
        "\n{} ({} groups, {} automorphisms, {} pattern hits)",
        r.data["result"].as_str().unwrap_or_default(),
        r.data["groups"],
        r.data["automorphisms"],
        r.data["pattern_hits"]
    );
    if !r.data["witness"].is_null() {
        let _ = write!(text, "\nwitness {}", r.data["witness"]);
    }
    Ok(Outcome::new(r, text))
}
