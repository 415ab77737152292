#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Parsing must never panic; accepted matrices are square, symmetric,
    // finite and nonnegative, and survive a print/parse round trip.
    if let Ok(g) = duo_louvain::io::parse_matrix_csv(text) {
        assert!(g.is_symmetric());
        assert!(g.check_weights().is_ok());
        let again = duo_louvain::io::parse_matrix_csv(&duo_louvain::io::matrix_to_csv(&g))
            .expect("serialized matrix must parse");
        assert_eq!(again, g);
    }
});
