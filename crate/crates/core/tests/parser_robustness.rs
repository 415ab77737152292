//! Mutation smoke tests over the file-format parsers: random byte edits of
//! valid seed inputs must never panic, only parse or fail cleanly. The
//! checked-in fuzz targets run the same surfaces under libFuzzer.

use duo_louvain::io;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MATRIX_SEEDS: &[&str] = &[
    "0,1,0\n1,0,1\n0,1,0\n",
    "3\n0,0.5,0\n0.5,0,1\n0,1,0\n",
];
const EDGE_SEEDS: &[&str] = &["1\t2\t0.5\n2\t3\n", "1 2 1\n1 3 1\n2 3 1\n# note\n"];
const MEASURE_SEEDS: &[&str] = &[
    r#"{"n": 3, "form": "additive", "weights": [0.25, 0.25, 0.5]}"#,
    r#"{"n": 2, "form": "explicit", "values": [
        {"subset": [], "value": 0.0}, {"subset": [1], "value": 0.9},
        {"subset": [2], "value": 0.3}, {"subset": [1, 2], "value": 1.0}]}"#,
];
const CONFIG_SEEDS: &[&str] = &[
    r#"{"phi_neg": [], "phi_pos": [], "Phi_neg": {"kind": "max"},
        "Phi_pos": {"kind": "owa", "weights": [0.5, 0.5]},
        "negation": "standard", "psi": {"kind": "min"}, "gamma": 0.5}"#,
];
const PARTITION_SEEDS: &[&str] = &[r#"{"n": 5, "communities": [[1, 2], [3, 4, 5]]}"#];
const OPERATOR_SEEDS: &[&str] = &["min", "max", "mean", "owa:0.5,0.25,0.25"];

fn mutate(rng: &mut ChaCha8Rng, seed: &str) -> Vec<u8> {
    let mut bytes = seed.as_bytes().to_vec();
    for _ in 0..rng.random_range(1..=6) {
        if bytes.is_empty() {
            break;
        }
        let pos = rng.random_range(0..bytes.len());
        match rng.random_range(0..3) {
            0 => bytes[pos] = rng.random::<u8>(),
            1 => {
                bytes.remove(pos);
            }
            _ => bytes.insert(pos, rng.random::<u8>()),
        }
    }
    bytes
}

fn pound<F: Fn(&str)>(seeds: &[&str], salt: u64, parse: F) {
    let mut rng = ChaCha8Rng::seed_from_u64(salt);
    for seed in seeds {
        parse(seed);
        for _ in 0..500 {
            let bytes = mutate(&mut rng, seed);
            if let Ok(text) = std::str::from_utf8(&bytes) {
                parse(text);
            }
        }
    }
}

#[test]
fn matrix_csv_never_panics() {
    pound(MATRIX_SEEDS, 1, |text| {
        if let Ok(g) = io::parse_matrix_csv(text) {
            assert!(g.is_symmetric());
        }
    });
}

#[test]
fn edge_list_never_panics() {
    pound(EDGE_SEEDS, 2, |text| {
        if let Ok(g) = io::parse_edge_list_tsv(text) {
            assert!(g.is_symmetric());
        }
    });
}

#[test]
fn measure_json_never_panics() {
    pound(MEASURE_SEEDS, 3, |text| {
        if let Ok(data) = io::parse_measure_json(text) {
            if data.n <= 12 {
                let _ = duo_louvain::FuzzyMeasure::try_from(&data);
            }
        }
    });
}

#[test]
fn pipeline_config_never_panics() {
    pound(CONFIG_SEEDS, 4, |text| {
        let _ = io::parse_pipeline_config_json(text);
    });
}

#[test]
fn partition_json_never_panics() {
    pound(PARTITION_SEEDS, 5, |text| {
        if let Ok(p) = io::parse_partition_json(text) {
            let json = io::partition_to_json(&p).unwrap();
            assert_eq!(io::parse_partition_json(&json).unwrap(), p);
        }
    });
}

#[test]
fn operator_flag_never_panics() {
    pound(OPERATOR_SEEDS, 6, |text| {
        let _ = io::parse_operator(text);
    });
}
