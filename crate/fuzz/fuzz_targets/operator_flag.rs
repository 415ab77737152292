#![no_main]

use duo_louvain::AggregatorSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = duo_louvain::io::parse_operator(text) {
        assert!(spec.validate().is_ok());
        let arity = match &spec {
            AggregatorSpec::Owa { weights } => weights.len(),
            _ => 2,
        };
        // Boundary conditions of a valid aggregation operator.
        let zeros = vec![0.0; arity];
        let ones = vec![1.0; arity];
        assert!(spec.aggregate(&zeros).unwrap().abs() < 1e-9);
        assert!((spec.aggregate(&ones).unwrap() - 1.0).abs() < 1e-9);
    }
});
