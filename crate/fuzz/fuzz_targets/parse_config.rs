#![no_main]
use libfuzzer_sys::fuzz_target;

use macrodefault::pipeline::PipelineConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = PipelineConfig::from_toml_str(text) {
            assert!(cfg.validate().is_ok());
        }
    }
});
