#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = duo_louvain::io::parse_pipeline_config_json(text) {
        assert!(cfg.validate().is_ok());
        let json = duo_louvain::io::pipeline_config_to_json(&cfg).unwrap();
        let again = duo_louvain::io::parse_pipeline_config_json(&json)
            .expect("serialized config must parse");
        assert_eq!(again, cfg);
    }
});
