//! Catalog-wide verification runs producing [`Report`]s.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::catalog::{catalog, label, resolve};
use super::lemmas::{check_instance, CosetStatus, GroupContext, LemmaId};
use super::report::{timed, Report};
use crate::automorphism::{AutomorphismGroup, GroupMap, MapError};
use crate::cache::{automorphisms, AutCache, CachePolicy};
use crate::classify::{classify_theorem31, VerdictKind};
use crate::cubing::{cube_members, max_cube_ratio_with, MaxCube, MaxMethod};
use crate::group::FiniteGroup;
use crate::rational::Rational;

/// Default cap on `|Aut(G)|` for catalog scans.
pub const DEFAULT_AUT_CAP: usize = 100_000;

/// Settings shared by every suite.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cache: Option<AutCache>,
    pub policy: CachePolicy,
    pub aut_cap: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, cache: None, policy: CachePolicy::Bypass, aut_cap: DEFAULT_AUT_CAP }
    }
}

impl SuiteConfig {
    pub fn automorphisms(&self, g: &FiniteGroup) -> Result<AutomorphismGroup, MapError> {
        automorphisms(g, self.cache.as_ref(), self.policy, Some(self.aut_cap))
    }

    pub fn max_ratio(&self, g: &FiniteGroup) -> Result<MaxCube, MapError> {
        max_cube_ratio_with(g, 3, || self.automorphisms(g))
    }
}

fn method_json(m: &MaxMethod) -> Value {
    match m {
        MaxMethod::Exhaustive { automorphisms } => json!({"exhaustive": automorphisms}),
        MaxMethod::PowerMap => json!("power_map"),
    }
}

/// Seed for the sampling substream of one group, independent of scan order.
fn substream_seed(seed: u64, name: &str) -> u64 {
    name.bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
}

/// Scope of the lemma suite.
#[derive(Clone, Copy, Debug)]
pub struct LemmaScope {
    /// Every automorphism is checked for groups up to this order.
    pub exhaustive_cap: usize,
    /// Groups above `exhaustive_cap` and up to this order are sampled.
    pub sample_cap: usize,
    pub min_samples: usize,
}

impl Default for LemmaScope {
    fn default() -> Self {
        LemmaScope { exhaustive_cap: 24, sample_cap: 360, min_samples: 500 }
    }
}

struct Plan {
    ctx: GroupContext,
    aut_order: usize,
    alphas: Vec<GroupMap>,
    exhaustive: bool,
}

/// Runs every lemma check over the scope.
pub fn run_lemma_suite(scope: LemmaScope, cfg: &SuiteConfig) -> Report {
    timed(|| {
        let groups = catalog(scope.sample_cap);
        let sampled = groups.iter().filter(|g| g.order() > scope.exhaustive_cap).count().max(1);
        let per_group = (2 * scope.min_samples).div_ceil(sampled).max(16);
        let plans: Vec<Result<Plan, (String, String)>> = groups
            .into_par_iter()
            .map(|g| {
                let name = label(&g);
                let aut = cfg.automorphisms(&g).map_err(|e| (name.clone(), e.to_string()))?;
                let exhaustive = g.order() <= scope.exhaustive_cap;
                let alphas = if exhaustive {
                    aut.members.clone()
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(cfg.seed, &name));
                    let k = per_group.min(aut.order());
                    let mut idx = sample(&mut rng, aut.order(), k).into_vec();
                    idx.sort_unstable();
                    idx.into_iter().map(|i| aut.members[i].clone()).collect()
                };
                Ok(Plan { ctx: GroupContext::new(g), aut_order: aut.order(), alphas, exhaustive })
            })
            .collect();
        let mut report = Report::new(
            "lemmas",
            json!({
                "exhaustive_order_cap": scope.exhaustive_cap,
                "sample_order_cap": scope.sample_cap,
                "min_samples": scope.min_samples,
                "samples_per_group": per_group,
                "aut_cap": cfg.aut_cap,
            }),
            cfg.seed,
        );
        let mut skipped = Vec::new();
        let mut ok_plans = Vec::new();
        for p in plans {
            match p {
                Ok(p) => ok_plans.push(p),
                Err((name, why)) => skipped.push(json!({"group": name, "reason": why})),
            }
        }
        let jobs: Vec<(usize, &GroupMap)> =
            ok_plans.iter().enumerate().flat_map(|(i, p)| p.alphas.iter().map(move |a| (i, a))).collect();
        let outcomes: Vec<_> = jobs.par_iter().map(|&(i, a)| check_instance(&ok_plans[i].ctx, a)).collect();

        let mut checked = [0u64; 12];
        let mut coset = [0u64; 3];
        let (mut exhaustive_n, mut sampled_n) = (0u64, 0u64);
        for (&(i, _), out) in jobs.iter().zip(&outcomes) {
            let plan = &ok_plans[i];
            if plan.exhaustive {
                exhaustive_n += 1;
            } else {
                sampled_n += 1;
            }
            for (c, o) in checked.iter_mut().zip(out.checked) {
                *c += o;
            }
            coset[match out.coset_status {
                CosetStatus::Skipped => 0,
                CosetStatus::Exact => 1,
                CosetStatus::BestEffort => 2,
            }] += 1;
            let table = if out.failures.is_empty() { Vec::new() } else { plan.ctx.group.table_rows() };
            for f in &out.failures {
                report.failures.push(json!({
                    "group": plan.ctx.label,
                    "lemma": f.lemma.name(),
                    "counterexample": f,
                    "revalidated": f.revalidate(&table),
                }));
            }
        }
        report.instances = exhaustive_n + sampled_n;
        let lemmas: serde_json::Map<String, Value> =
            LemmaId::ALL.iter().zip(checked).map(|(l, c)| (l.name().to_string(), json!(c))).collect();
        let group_rows: Vec<Value> = ok_plans
            .iter()
            .map(|p| {
                json!({
                    "group": p.ctx.label,
                    "order": p.ctx.group.order(),
                    "aut_order": p.aut_order,
                    "instances": p.alphas.len(),
                    "mode": if p.exhaustive { "exhaustive" } else { "sampled" },
                })
            })
            .collect();
        report.data = json!({
            "exhaustive_instances": exhaustive_n,
            "sampled_instances": sampled_n,
            "checked": lemmas,
            "coset_hypothesis": {"skipped": coset[0], "exact": coset[1], "best_effort": coset[2]},
            "skipped_groups": skipped,
            "groups": group_rows,
        });
        report
    })
}

/// Classification verdicts against brute-force maxima on the catalog.
pub fn verify_theorem31(order_cap: usize, cfg: &SuiteConfig) -> Report {
    timed(|| {
        let groups = catalog(order_cap);
        let rows: Vec<(Value, Option<Value>)> = groups.par_iter().map(|g| theorem31_row(g, cfg)).collect();
        let mut report = Report::new("theorem31", json!({"order_cap": order_cap, "aut_cap": cfg.aut_cap}), cfg.seed);
        report.instances = rows.len() as u64;
        let mut data = Vec::new();
        for (row, failure) in rows {
            data.push(row);
            report.failures.extend(failure);
        }
        report.data = json!({"groups": data});
        report
    })
}

fn theorem31_row(g: &FiniteGroup, cfg: &SuiteConfig) -> (Value, Option<Value>) {
    let name = label(g);
    let verdict = classify_theorem31(g);
    let max = match cfg.max_ratio(g) {
        Ok(m) => m,
        Err(e) => {
            let row = json!({"group": name, "order": g.order(), "error": e.to_string()});
            return (row.clone(), Some(row));
        }
    };
    let half = Rational::new(1, 2);
    let constructed = verdict
        .constructed_alpha
        .as_ref()
        .map(|a| Rational::from_counts(cube_members(g, a, 3).len(), g.order()));
    let mut problems = Vec::new();
    if (verdict.kind != VerdictKind::None) != (max.ratio > half) {
        problems.push(format!("verdict {} but maximum {}", verdict.kind, max.ratio));
    }
    if let Some(c) = constructed {
        if c != max.ratio {
            problems.push(format!("constructed {c} below maximum {}", max.ratio));
        }
        if verdict.predicted_ratio != Some(c) {
            problems.push(format!("predicted {:?} but constructed {c}", verdict.predicted_ratio.map(|r| r.to_string())));
        }
    }
    let row = json!({
        "group": name,
        "order": g.order(),
        "verdict": verdict.kind.to_string(),
        "predicted": verdict.predicted_ratio,
        "constructed": constructed,
        "max": max.ratio,
        "method": method_json(&max.method),
    });
    let failure = (!problems.is_empty()).then(|| json!({"group": name, "problems": problems}));
    (row, failure)
}

/// The groups named at the solvability threshold, with the stated relation to 4/15.
pub const BOUNDARY_GROUPS: [(&str, bool); 5] =
    [("a5", true), ("s5", false), ("psl2_7", false), ("pgl2_7", false), ("a6", false)];

/// Maxima at the 4/15 threshold plus a catalog-wide solvability scan.
///
/// `pgl2_7` stands in for `Aut(L₂(7))`.
pub fn verify_solvability_boundary(order_cap: usize, cfg: &SuiteConfig) -> Report {
    timed(|| {
        let bound = Rational::new(4, 15);
        let mut report = Report::new(
            "solvable-boundary",
            json!({"order_cap": order_cap, "aut_cap": cfg.aut_cap, "aut_l2_7": "pgl2_7"}),
            cfg.seed,
        );
        let named: Vec<Value> = BOUNDARY_GROUPS
            .par_iter()
            .map(|&(name, exact)| {
                let g = resolve(name).expect("builtin");
                match cfg.max_ratio(&g) {
                    Ok(m) => {
                        let ok = if exact { m.ratio == bound } else { m.ratio <= bound };
                        json!({"group": name, "order": g.order(), "max": m.ratio,
                               "method": method_json(&m.method), "relation": if exact { "=" } else { "<=" }, "ok": ok})
                    }
                    Err(e) => json!({"group": name, "error": e.to_string(), "ok": false}),
                }
            })
            .collect();
        for row in &named {
            if row["ok"] != json!(true) {
                report.failures.push(row.clone());
            }
        }
        let scan: Vec<Value> = catalog(order_cap)
            .par_iter()
            .map(|g| match cfg.max_ratio(g) {
                Ok(m) => json!({"group": label(g), "max": m.ratio,
                                 "above": m.ratio > bound, "solvable": g.is_solvable()}),
                Err(e) => json!({"group": label(g), "error": e.to_string()}),
            })
            .collect();
        for row in &scan {
            if row.get("error").is_some() || (row["above"] == json!(true) && row["solvable"] != json!(true)) {
                report.failures.push(row.clone());
            }
        }
        let above = scan.iter().filter(|r| r["above"] == json!(true)).count();
        report.instances = (named.len() + scan.len()) as u64;
        report.data = json!({"named": named, "catalog_groups": scan.len(), "catalog_above_bound": above, "catalog": scan});
        report
    })
}

/// `(q, N:A)` for the simple groups `L₂(q)` in the order the table lists them.
pub const TABLE1: [(usize, usize); 6] = [(5, 12), (7, 24), (9, 40), (8, 56), (11, 60), (13, 84)];

/// Index of a largest abelian subgroup in `L₂(q)` for `q ≤ max_q`.
pub fn verify_table1(max_q: usize, budget: u64, seed: u64) -> Report {
    timed(|| {
        let mut report = Report::new("table1", json!({"max_q": max_q, "budget": budget}), seed);
        let rows: Vec<Value> = TABLE1
            .par_iter()
            .filter(|&&(q, _)| q <= max_q)
            .map(|&(q, expected)| {
                let g = crate::builders::psl2(q).expect("q <= 13");
                let a = g.max_abelian_subgroup(budget);
                let index = g.order() / a.order;
                json!({
                    "q": q, "order": g.order(), "max_abelian": a.order, "index": index,
                    "expected": expected, "exact": a.exact, "nodes": a.nodes,
                    "cube_below_order": a.order.pow(3) < g.order(),
                })
            })
            .collect();
        for r in &rows {
            if r["exact"] != json!(true) {
                report.failures.push(json!({"q": r["q"], "error": "budget exceeded"}));
            } else if r["index"] != r["expected"] {
                report.failures.push(r.clone());
            }
        }
        report.instances = rows.len() as u64;
        report.data = json!({"rows": rows});
        report
    })
}

/// Exponents for which the pattern `{a, b, ab, a^n b} ⊆ T` is known to force `[a,b] = 1`.
pub const KNOWN_COMMUTING: [i64; 4] = [-1, 2, -2, 3];

/// Searches the catalog for `(G, α, a, b)` with `{a, b, ab, aⁿb} ⊆ T` and `[a,b] ≠ 1`.
///
/// The witness reported is the first in catalog, automorphism and pair order.
/// A witness is a failure only for the exponents in [`KNOWN_COMMUTING`].
pub fn remark_n_search(n: i64, order_cap: usize, cfg: &SuiteConfig) -> Report {
    timed(|| {
        let groups = catalog(order_cap);
        let per_group: Vec<Value> = groups
            .par_iter()
            .map(|g| {
                let aut = match cfg.automorphisms(g) {
                    Ok(a) => a,
                    Err(e) => return json!({"group": label(g), "skipped": e.to_string()}),
                };
                let cubes: Vec<usize> = g.elements().map(|x| g.pow(x, 3)).collect();
                let shift: Vec<usize> = g.elements().map(|x| g.pow(x, n)).collect();
                let mut hits = 0u64;
                let mut first: Option<Value> = None;
                for alpha in &aut.members {
                    let mask: Vec<bool> = g.elements().map(|x| alpha.apply(x) == cubes[x]).collect();
                    let t: Vec<usize> = g.elements().filter(|&x| mask[x]).collect();
                    for &a in &t {
                        for &b in &t {
                            if !mask[g.mul(a, b)] || !mask[g.mul(shift[a], b)] {
                                continue;
                            }
                            hits += 1;
                            if first.is_none() && !g.commute(a, b) {
                                first = Some(json!({"group": label(g), "alpha": alpha.images(), "a": a, "b": b}));
                            }
                        }
                    }
                }
                json!({"group": label(g), "automorphisms": aut.order(), "pattern_hits": hits, "witness": first})
            })
            .collect();
        let witness = per_group.iter().find_map(|r| r.get("witness").filter(|w| !w.is_null()).cloned());
        let known = KNOWN_COMMUTING.contains(&n);
        let mut report = Report::new(
            "remark-n",
            json!({"n": n, "order_cap": order_cap, "aut_cap": cfg.aut_cap, "known_commuting": known}),
            cfg.seed,
        );
        if known {
            if let Some(w) = &witness {
                report.failures.push(w.clone());
            }
        }
        let automorphisms: u64 = per_group.iter().filter_map(|r| r["automorphisms"].as_u64()).sum();
        let hits: u64 = per_group.iter().filter_map(|r| r["pattern_hits"].as_u64()).sum();
        let skipped: Vec<&Value> = per_group.iter().filter(|r| r.get("skipped").is_some()).collect();
        report.instances = automorphisms;
        report.data = json!({
            "witness": witness,
            "result": if witness.is_some() { "counterexample found" } else { "no counterexample found" },
            "groups": per_group.len() - skipped.len(),
            "automorphisms": automorphisms,
            "pattern_hits": hits,
            "skipped": skipped,
        });
        report
    })
}
