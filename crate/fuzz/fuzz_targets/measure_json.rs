#![no_main]

use duo_louvain::measure::{validate_measure, FuzzyMeasure};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = duo_louvain::io::parse_measure_json(text) else { return };
    // Keep table sizes fuzz-friendly; validation walks 2^n entries.
    if parsed.n > 12 {
        return;
    }
    let violations = validate_measure(&parsed);
    match FuzzyMeasure::try_from(&parsed) {
        Ok(measure) => {
            assert!(violations.is_empty(), "accepted measure with violations");
            if measure.n() <= 8 {
                let sum: f64 = measure.shapley().unwrap().iter().sum();
                assert!((sum - 1.0).abs() < 1e-9, "efficiency broken: {sum}");
            }
        }
        Err(_) => assert!(!violations.is_empty(), "rejected measure with empty report"),
    }
});
