use serde_json::Value;
use tmotif_demo::{explore, heatmap, histograms};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("valid json")
}

#[test]
fn explorer_lists_classes_and_regime() {
    let v = parse(explore("delta_c=1500,delta_w=3000,k=3,max_nodes=3").unwrap());
    assert_eq!(v["regime"], "OnlyC");
    assert_eq!(v["span_bound"], 3000);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 36);
    assert!(classes
        .iter()
        .any(|c| c["code"] == "011202" && c["pairs"] == "CI"));

    let v = parse(explore("delta_w=600,k=4,max_nodes=4").unwrap());
    assert_eq!(v["regime"], "OnlyW");
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 696);
    let without: usize = classes.iter().filter(|c| c["pairs"].is_null()).count();
    assert_eq!(without, 192);
}

#[test]
fn explorer_rejects_bad_config() {
    assert!(explore("k=3").is_err());
    assert!(explore("delta_c=10,colour=red").is_err());
    assert!(explore("delta_c=10,k=9").is_err());
}

#[test]
fn heatmap_cells_sum_to_total() {
    let v = parse(heatmap("delta_w=600", 1, 20, 200, 10_000).unwrap());
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 6);
    let sum: u64 = cells
        .iter()
        .flat_map(|r| r.as_array().unwrap())
        .map(|c| c.as_u64().unwrap())
        .sum();
    assert_eq!(sum, v["total"].as_u64().unwrap());
    assert!(sum > 0);
    let pairs: u64 = v["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .sum();
    assert_eq!(pairs, 2 * sum);
    assert_eq!(v["labels"][0], "R");
}

#[test]
fn heatmap_is_seeded() {
    let a = heatmap("delta_c=300", 7, 15, 300, 5000).unwrap();
    assert_eq!(a, heatmap("delta_c=300", 7, 15, 300, 5000).unwrap());
    assert!(heatmap("delta_c=300,k=4,max_nodes=4", 7, 15, 300, 5000).is_err());
    assert!(heatmap("delta_c=300", 7, 1, 300, 5000).is_err());
    assert!(heatmap("delta_c=300", 7, 15, 0, 5000).is_err());
}

#[test]
fn histograms_respect_the_window() {
    let v = parse(histograms("delta_w=600,k=4,max_nodes=4", 3, 20, 200, 10_000, 10, 100).unwrap());
    let positions = v["positions"].as_array().unwrap();
    assert_eq!(positions.len(), 2);
    assert!(positions.iter().all(|p| p.as_array().unwrap().len() == 10));
    // spans are at most 600, so bins beyond [600, 700) stay absent
    let spans = v["spans"].as_array().unwrap();
    assert!(!spans.is_empty() && spans.len() <= 7);
    assert!(histograms("delta_w=600", 3, 20, 200, 10_000, 0, 100).is_err());
    assert!(histograms("delta_w=600", 3, 20, 200, 10_000, 10, 0).is_err());
}
