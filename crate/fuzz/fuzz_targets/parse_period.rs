#![no_main]
use libfuzzer_sys::fuzz_target;

use macrodefault::series::Period;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = text.parse::<Period>() {
        assert_eq!(p.to_string(), text);
        assert_eq!(p.succ().offset(-1), p);
    }
});
