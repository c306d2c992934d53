//! Browser demo. Each operation is a plain function returning JSON so it can
//! be tested natively; the `#[wasm_bindgen]` wrappers only convert errors.

use serde_json::{json, Value};
use tmotif::{
    count_motifs, enumerate_codes, heatmap_3e, intermediate_histogram, pair_group_totals,
    random_graph, timespan_histogram, CodeFilter, ConstraintConfig, EngineOptions, FixtureSpec,
    NodeSpec, PairType, TemporalGraph,
};
use wasm_bindgen::prelude::*;

/// Largest generated graph the page will accept.
const MAX_EVENTS: u32 = 5000;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn parse_config(text: &str) -> Result<ConstraintConfig, String> {
    text.parse().map_err(err)
}

fn fixture(seed: u32, nodes: u32, events: u32, horizon: u32) -> Result<TemporalGraph, String> {
    if nodes < 2 || horizon == 0 {
        return Err("need at least 2 nodes and a positive horizon".into());
    }
    if events == 0 || events > MAX_EVENTS {
        return Err(format!("events must be between 1 and {MAX_EVENTS}"));
    }
    Ok(random_graph(&FixtureSpec {
        nodes: nodes.into(),
        events: events as usize,
        horizon: horizon.into(),
        seed: seed.into(),
        unique_edges: false,
    }))
}

/// Which bound binds for `config`, its maximum span, and the motif classes
/// it can produce with their event-pair sequences.
pub fn explore(config: &str) -> Result<String, String> {
    let cfg = parse_config(config)?;
    if cfg.k_events > 5 || cfg.max_nodes > 6 {
        return Err("the explorer lists classes for k <= 5 and at most 6 nodes".into());
    }
    let classes: Vec<Value> = enumerate_codes(cfg.k_events, NodeSpec::AtMost(cfg.max_nodes))
        .into_iter()
        .map(|code| {
            let pairs = code.pair_sequence().ok().map(|s| s.to_string());
            json!({ "code": code.to_string(), "nodes": code.node_count(), "pairs": pairs })
        })
        .collect();
    Ok(json!({
        "config": cfg.to_string(),
        "regime": cfg.regime().map(|r| r.to_string()),
        "span_bound": cfg.span_bound(),
        "classes": classes,
    })
    .to_string())
}

/// Counts three-event motifs on a seeded random graph and arranges them by
/// event-pair sequence.
pub fn heatmap(
    config: &str,
    seed: u32,
    nodes: u32,
    events: u32,
    horizon: u32,
) -> Result<String, String> {
    let cfg = parse_config(config)?;
    if cfg.k_events != 3 || cfg.max_nodes > 3 {
        return Err("the heatmap needs k=3 and max_nodes<=3".into());
    }
    let g = fixture(seed, nodes, events, horizon)?;
    let table = count_motifs(&g, &cfg).map_err(err)?;
    let matrix = heatmap_3e(&table).map_err(err)?;
    let totals = pair_group_totals(&table).map_err(err)?;
    let letters: Vec<String> = PairType::ALPHABET
        .iter()
        .map(|t| t.letter().to_string())
        .collect();
    Ok(json!({
        "labels": letters,
        "cells": matrix.cells,
        "total": matrix.total(),
        "pairs": totals.pairs,
        "rpio": totals.rpio_pairs,
        "cw": totals.cw_pairs,
    })
    .to_string())
}

/// Intermediate-event positions and timespans on a seeded random graph.
pub fn histograms(
    config: &str,
    seed: u32,
    nodes: u32,
    events: u32,
    horizon: u32,
    bins: u32,
    bin_width: u32,
) -> Result<String, String> {
    let cfg = parse_config(config)?;
    if !(1..=200).contains(&bins) {
        return Err("bins must be between 1 and 200".into());
    }
    let g = fixture(seed, nodes, events, horizon)?;
    let opts = EngineOptions::default();
    let positions = if cfg.k_events >= 3 {
        let h =
            intermediate_histogram(&g, &CodeFilter::All, &cfg, bins as usize, opts).map_err(err)?;
        h.counts
    } else {
        Vec::new()
    };
    let spans =
        timespan_histogram(&g, &CodeFilter::All, &cfg, bin_width.into(), opts).map_err(err)?;
    Ok(json!({
        "bins": bins,
        "positions": positions,
        "bin_width": bin_width,
        "spans": spans.counts,
    })
    .to_string())
}

#[wasm_bindgen(js_name = explore)]
pub fn explore_js(config: &str) -> Result<String, JsValue> {
    explore(config).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = heatmap)]
pub fn heatmap_js(
    config: &str,
    seed: u32,
    nodes: u32,
    events: u32,
    horizon: u32,
) -> Result<String, JsValue> {
    heatmap(config, seed, nodes, events, horizon).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = histograms)]
pub fn histograms_js(
    config: &str,
    seed: u32,
    nodes: u32,
    events: u32,
    horizon: u32,
    bins: u32,
    bin_width: u32,
) -> Result<String, JsValue> {
    histograms(config, seed, nodes, events, horizon, bins, bin_width)
        .map_err(|e| JsValue::from_str(&e))
}
