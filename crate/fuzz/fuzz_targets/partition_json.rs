#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = duo_louvain::io::parse_partition_json(text) {
        // Canonical form: dense labels, communities ordered by smallest member.
        assert!(p.community_count() <= p.len());
        let json = duo_louvain::io::partition_to_json(&p).unwrap();
        let again = duo_louvain::io::parse_partition_json(&json)
            .expect("canonical partition must parse");
        assert_eq!(again, p);
    }
});
