//! Browser bindings: three calls, each returning a JSON string.
//!
//! The plain functions in [`api`] do the work and are testable natively; the
//! `#[wasm_bindgen]` wrappers only turn errors into JS exceptions.

use wasm_bindgen::prelude::*;

pub mod api {
    use serde_json::{json, Value};

    use slocc_core::optimize::{self, AnnealConfig, SearchConfig};
    use slocc_core::scheme::{matching_total, parse_spins, perfect_matchings};
    use slocc_core::slocc::{fidelity, genuine_threshold, make_target, post_select, TargetClass};
    use slocc_core::{catalog, Error, Result, Statistics};

    /// Largest sample count the page may request in one call.
    pub const MAX_SAMPLES: u64 = 2_000_000;

    fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T> {
        s.parse()
    }

    fn complex(z: slocc_core::Amplitude) -> Value {
        json!({ "re": z.re, "im": z.im })
    }

    /// Post-selects a catalog scheme; `target` may be empty.
    pub fn simulate(name: &str, n: usize, stats: &str, target: &str) -> Result<String> {
        let s = catalog::build(name, n, parse::<Statistics>(stats)?)?;
        let goal = if target.is_empty() { None } else { Some(make_target(parse::<TargetClass>(target)?, n)?) };
        let body = match post_select(&s) {
            Ok(out) => {
                let f = goal.as_ref().map(|t| fidelity(&out, t)).transpose()?;
                let amps: Vec<Value> = out
                    .support(1e-12)
                    .map(|(k, a)| json!({ "config": k.to_string(n), "re": a.re, "im": a.im }))
                    .collect();
                json!({
                    "label": s.label,
                    "vanishing": false,
                    "probability": out.probability,
                    "fidelity": f,
                    "threshold": goal.as_ref().and_then(|t| genuine_threshold(t.class, n).ok()),
                    "amplitudes": amps,
                })
            }
            Err(Error::VanishingState) => json!({
                "label": s.label,
                "vanishing": true,
                "probability": 0.0,
                "fidelity": goal.as_ref().map(|_| 0.0),
                "amplitudes": [],
            }),
            Err(e) => return Err(e),
        };
        Ok(body.to_string())
    }

    /// Samples the fidelity/probability trade-off above `threshold`.
    pub fn tradeoff(
        class: &str,
        n: usize,
        stats: &str,
        threshold: f64,
        samples: u64,
        seed: u64,
        anneal_steps: u64,
    ) -> Result<String> {
        if samples > MAX_SAMPLES {
            return Err(Error::InvalidConfig(format!("at most {MAX_SAMPLES} samples in the browser")));
        }
        let class = parse::<TargetClass>(class)?;
        let t = optimize::templates_for(class, n, parse::<Statistics>(stats)?)?;
        let target = make_target(class, n)?;
        let mut cfg = SearchConfig::new(samples, seed);
        if anneal_steps > 0 {
            cfg.anneal = Some(AnnealConfig { steps: anneal_steps, ..Default::default() });
        }
        let points = match optimize::sample_tradeoff(&t, &target, threshold, &cfg) {
            Ok(p) => p,
            Err(Error::EmptyResult) => Vec::new(),
            Err(e) => return Err(e),
        };
        let rows: Vec<Value> = points
            .iter()
            .map(|p| {
                json!({
                    "low": p.fidelity_bin_low,
                    "high": p.fidelity_bin_high,
                    "max_probability": p.max_probability,
                    "fidelity": p.fidelity,
                })
            })
            .collect();
        Ok(json!({ "threshold": threshold, "points": rows }).to_string())
    }

    /// Perfect matchings behind one spin configuration of a catalog scheme.
    pub fn matchings(name: &str, n: usize, stats: &str, sigma: &str) -> Result<String> {
        let s = catalog::build(name, n, parse::<Statistics>(stats)?)?;
        let list = perfect_matchings(&s, &parse_spins(sigma)?)?;
        let rows: Vec<Value> =
            list.iter().map(|m| json!({ "perm": m.perm, "product": complex(m.product), "sign": m.sign })).collect();
        Ok(json!({ "sigma": sigma, "matchings": rows, "total": complex(matching_total(&list)) }).to_string())
    }
}

fn js(r: slocc_core::Result<String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn simulate(name: &str, n: usize, stats: &str, target: &str) -> Result<String, JsError> {
    js(api::simulate(name, n, stats, target))
}

#[wasm_bindgen]
pub fn tradeoff(
    class: &str,
    n: usize,
    stats: &str,
    threshold: f64,
    samples: u32,
    seed: u32,
    anneal_steps: u32,
) -> Result<String, JsError> {
    js(api::tradeoff(class, n, stats, threshold, samples.into(), seed.into(), anneal_steps.into()))
}

#[wasm_bindgen]
pub fn matchings(name: &str, n: usize, stats: &str, sigma: &str) -> Result<String, JsError> {
    js(api::matchings(name, n, stats, sigma))
}
