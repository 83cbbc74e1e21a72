#![no_main]
use libfuzzer_sys::fuzz_target;

use macrodefault::pipeline::{parse_csv, to_csv_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(dataset) = parse_csv(text) {
        // re-serialized panels parse back to the same values
        let written = to_csv_string(&dataset);
        let reparsed = parse_csv(&written).expect("re-serialized panel parses");
        assert_eq!(dataset, reparsed);
        assert_eq!(to_csv_string(&reparsed), written);
    }
});
