#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = duo_louvain::io::parse_edge_list_tsv(text) {
        // Symmetric closure is applied on load.
        assert!(g.is_symmetric());
        assert!(g.check_weights().is_ok());
        assert!(g.n() >= 1);
    }
});
