use cuntz_core::harness::{manifest_names, run_suite};

#[test]
fn full_suite_passes_at_default_settings() {
    let report = run_suite(&[], 256, 0).expect("all names are registered");
    println!("{report}");
    assert_eq!(report.properties.len(), manifest_names().len());
    assert!(report.ok(), "{report}");
}
