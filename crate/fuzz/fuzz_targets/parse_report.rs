#![no_main]
use libfuzzer_sys::fuzz_target;

use macrodefault::pipeline::{parse_structured_report, render_report, ReportFormat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(report) = parse_structured_report(text) {
        let rendered = render_report(&report, ReportFormat::Structured);
        let again = parse_structured_report(&rendered).expect("rendered report parses");
        assert_eq!(render_report(&again, ReportFormat::Structured), rendered);
        let _ = render_report(&report, ReportFormat::Text);
    }
});
