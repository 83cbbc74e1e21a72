//! Parser robustness: the fuzz corpus replayed through the fuzz-target
//! invariants, plus arbitrary and mutated inputs.

use std::path::PathBuf;

use proptest::prelude::*;

use macrodefault::pipeline::{
    parse_csv, parse_structured_report, render_report, to_csv_string, PipelineConfig, ReportFormat,
};
use macrodefault::series::Period;

fn check_csv(text: &str) {
    if let Ok(dataset) = parse_csv(text) {
        let written = to_csv_string(&dataset);
        let reparsed = parse_csv(&written).expect("re-serialized panel parses");
        assert_eq!(dataset, reparsed);
        assert_eq!(to_csv_string(&reparsed), written);
    }
}

fn check_period(text: &str) {
    if let Ok(p) = text.parse::<Period>() {
        assert_eq!(p.to_string(), text);
        assert_eq!(p.succ().offset(-1), p);
    }
}

fn check_config(text: &str) {
    if let Ok(cfg) = PipelineConfig::from_toml_str(text) {
        assert!(cfg.validate().is_ok());
    }
}

fn check_report(text: &str) {
    if let Ok(report) = parse_structured_report(text) {
        let rendered = render_report(&report, ReportFormat::Structured);
        let again = parse_structured_report(&rendered).expect("rendered report parses");
        assert_eq!(render_report(&again, ReportFormat::Structured), rendered);
        let _ = render_report(&report, ReportFormat::Text);
    }
}

type Check = fn(&str);

#[test]
fn corpus_replay() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let targets: [(&str, Check); 4] = [
        ("parse_csv", check_csv),
        ("parse_period", check_period),
        ("parse_config", check_config),
        ("parse_report", check_report),
    ];
    for (target, check) in targets {
        let mut seen = 0;
        for entry in std::fs::read_dir(root.join(target)).unwrap() {
            let bytes = std::fs::read(entry.unwrap().path()).unwrap();
            if let Ok(text) = std::str::from_utf8(&bytes) {
                check(text);
                seen += 1;
            }
        }
        assert!(seen > 0, "empty corpus for {target}");
    }
}

#[test]
fn golden_report_parses() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden_report.json");
    let text = std::fs::read_to_string(path).unwrap();
    assert!(parse_structured_report(&text).is_ok());
    assert!(parse_structured_report("{}").is_err());
    assert!(parse_structured_report("not json").is_err());
}

fn csv_like() -> impl Strategy<Value = String> {
    let cell = prop_oneof![
        "-?[0-9]{1,4}(\\.[0-9]{0,4})?",
        "[0-9]e-?[0-9]",
        "[a-z.,\"]{0,3}",
        Just(String::new()),
    ];
    let period = prop_oneof!["20[0-9]{2}Q[0-5]", "[0-9Qq-]{0,7}"];
    (
        prop::collection::vec("[A-Za-z_]{1,5}", 1..4),
        prop::collection::vec((period, prop::collection::vec(cell, 1..4)), 0..5),
        any::<bool>(),
    )
        .prop_map(|(names, rows, crlf)| {
            let eol = if crlf { "\r\n" } else { "\n" };
            let mut s = format!("period,{}{eol}", names.join(","));
            for (p, cells) in rows {
                s.push_str(&p);
                for c in cells {
                    s.push(',');
                    s.push_str(&c);
                }
                s.push_str(eol);
            }
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,80}") {
        check_csv(&text);
        check_period(&text);
        check_config(&text);
        check_report(&text);
    }

    #[test]
    fn structured_csv_inputs(text in csv_like()) {
        check_csv(&text);
    }

    #[test]
    fn consecutive_panels_round_trip(
        year in 1990i32..2030,
        quarter in 1u8..=4,
        rows in prop::collection::vec(prop::collection::vec(-1e6..1e6f64, 2), 1..10),
    ) {
        let start = Period::new(year, quarter).unwrap();
        let mut text = String::from("period,A,B\n");
        for (i, r) in rows.iter().enumerate() {
            text.push_str(&format!("{},{},{}\n", start.offset(i as i64), r[0], r[1]));
        }
        let d = parse_csv(&text).unwrap();
        prop_assert_eq!(to_csv_string(&d), text);
    }

    #[test]
    fn config_documents(
        dep in "[A-Za-z]{1,6}",
        regs in prop::collection::vec("[A-Za-z]{1,6}", 0..4),
        alpha in 0.0..1.2f64,
        lags in prop_oneof![Just("\"auto\"".to_string()), (0u32..5).prop_map(|k| k.to_string())],
    ) {
        let list = regs.iter().map(|r| format!("\"{r}\"")).collect::<Vec<_>>().join(", ");
        let doc = format!("dependent = \"{dep}\"\nregressors = [{list}]\nalpha = {alpha}\nadf_lags = {lags}\n");
        check_config(&doc);
    }
}
