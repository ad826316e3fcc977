//! Browser bindings. Every export returns a JSON string; errors surface as thrown strings.

use std::collections::BTreeMap;

use cubing_core::automorphism::enumerate_automorphisms;
use cubing_core::sfs::{self, SfsInstance, DEFAULT_BUDGET};
use cubing_core::verify::resolve;
use cubing_core::Rational;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_MODULUS: usize = 200;
const MAX_GROUP_ORDER: usize = 720;
const MAX_AUT: usize = 50_000;

pub fn tau_curve_value(lo: usize, hi: usize) -> Result<Value, String> {
    if lo < 1 || lo > hi || hi > MAX_MODULUS {
        return Err(format!("need 1 <= lo <= hi <= {MAX_MODULUS}"));
    }
    let mut points = Vec::with_capacity(hi - lo + 1);
    for n in lo..=hi {
        let t = sfs::t_of(n, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        points.push(json!({"n": n, "t": t, "tau": Rational::from_counts(t, n)}));
    }
    Ok(json!({"bound": Rational::new(4, 17), "points": points}))
}

pub fn cube_ratio_histogram_value(name: &str) -> Result<Value, String> {
    let g = resolve(name).map_err(|e| e.to_string())?;
    if g.order() > MAX_GROUP_ORDER {
        return Err(format!("order {} is above the demo limit of {MAX_GROUP_ORDER}", g.order()));
    }
    let aut = enumerate_automorphisms(&g, Some(MAX_AUT)).map_err(|e| e.to_string())?;
    let cubes: Vec<usize> = g.elements().map(|x| g.pow(x, 3)).collect();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for alpha in &aut.members {
        let size = cubes.iter().enumerate().filter(|&(x, &c)| alpha.apply(x) == c).count();
        *counts.entry(size).or_default() += 1;
    }
    let bins: Vec<Value> = counts
        .iter()
        .map(|(&size, &k)| json!({"size": size, "ratio": Rational::from_counts(size, g.order()), "automorphisms": k}))
        .collect();
    let max = counts.keys().next_back().copied().unwrap_or(0);
    Ok(json!({
        "group": name,
        "order": g.order(),
        "automorphisms": aut.order(),
        "max": Rational::from_counts(max, g.order()),
        "bins": bins,
    }))
}

/// `size == 0` asks for the maximum size.
pub fn extremal_sets_value(n: usize, size: usize) -> Result<Value, String> {
    if !(1..=MAX_MODULUS).contains(&n) {
        return Err(format!("need 1 <= n <= {MAX_MODULUS}"));
    }
    let inst = SfsInstance::standard(n).map_err(|e| e.to_string())?;
    let t = sfs::t_of(n, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let size = if size == 0 { t } else { size };
    let ex = sfs::enumerate_extremal(&inst, size, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    Ok(json!({"n": n, "t": t, "size": size, "raw_count": ex.raw.len(), "sets": ex.canonical}))
}

fn export(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

/// `τ_n = T(n)/n` for `lo..=hi`.
#[wasm_bindgen]
pub fn tau_curve(lo: usize, hi: usize) -> Result<String, JsValue> {
    export(tau_curve_value(lo, hi))
}

/// Distribution of `|T_{3,α}|` over `Aut(G)` for a built-in group name.
#[wasm_bindgen]
pub fn cube_ratio_histogram(name: &str) -> Result<String, JsValue> {
    export(cube_ratio_histogram_value(name))
}

/// Solution-free sets of `Z_n` of the given size, one per dilation class.
#[wasm_bindgen]
pub fn extremal_sets(n: usize, size: usize) -> Result<String, JsValue> {
    export(extremal_sets_value(n, size))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_endpoints() {
        let v = tau_curve_value(16, 17).unwrap();
        assert_eq!(v["points"][0]["t"], 4);
        assert_eq!(v["points"][1]["tau"], json!({"num": 4, "den": 17}));
        assert!(tau_curve_value(5, 4).is_err());
    }

    #[test]
    fn histogram_totals() {
        let v = cube_ratio_histogram_value("a5").unwrap();
        assert_eq!(v["automorphisms"], 120);
        assert_eq!(v["max"], json!({"num": 4, "den": 15}));
        let total: u64 = v["bins"].as_array().unwrap().iter().map(|b| b["automorphisms"].as_u64().unwrap()).sum();
        assert_eq!(total, 120);
        assert!(cube_ratio_histogram_value("nonsense").is_err());
    }

    #[test]
    fn z16_sets() {
        let v = extremal_sets_value(16, 0).unwrap();
        assert_eq!(v["size"], 4);
        assert_eq!(v["raw_count"], 16);
        assert!(!v["sets"].as_array().unwrap().is_empty());
    }
}
