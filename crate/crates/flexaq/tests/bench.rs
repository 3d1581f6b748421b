use flexaq::bench::{benchmark, write_report, BenchConfig};
use flexaq::engine::{prepare, Mode, RunConfig};
use flexaq::fixture::{attr_specs, generate_fixture, QUERY};
use flexaq::ingest::load_dir;
use flexaq::kbfile::build_kb;

#[test]
fn report_shape_and_monotone_workload() {
    let dir = tempfile::tempdir().unwrap();
    generate_fixture(200_000, 1, dir.path()).unwrap();
    let tables = load_dir(dir.path()).unwrap();
    let kb = build_kb(&tables, &attr_specs(), 3, 0).unwrap();
    let (query, bound) = prepare(QUERY, &tables, &kb).unwrap();
    let config = BenchConfig {
        sizes: vec![10_000, 50_000, 200_000],
        fractions: vec![0.05, 0.1],
        repetitions: 5,
        run: RunConfig::default(),
    };
    let report = benchmark(&query, &bound, &tables, &config).unwrap();
    assert_eq!(report.len(), 3 * (1 + 2));

    for (i, chunk) in report.chunks(3).enumerate() {
        assert_eq!(chunk[0].mode, Mode::Exact);
        assert_eq!(chunk[0].max_rel_error, 0.0);
        assert!(chunk[1..].iter().all(|r| r.mode == Mode::Approximate && r.rows == config.sizes[i]));
        assert!(chunk[1..].iter().all(|r| r.median_rel_error <= r.max_rel_error && r.max_rel_error.is_finite()));
    }
    for mode_index in 0..3 {
        let times: Vec<f64> = report.iter().skip(mode_index).step_by(3).map(|r| r.median_ms).collect();
        assert!(times.windows(2).all(|w| w[0] <= w[1]), "row {mode_index}: {times:?}");
    }

    let mut csv = Vec::new();
    write_report(&report, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rows,mode,fraction,median_ms,max_rel_error,median_rel_error");
    assert_eq!(lines.len(), 1 + report.len());
    assert!(lines[1].starts_with("10000,EXACT,1,"), "{}", lines[1]);
    assert!(lines[2].starts_with("10000,APPROXIMATE,0.05,"), "{}", lines[2]);
}

#[test]
fn sizes_beyond_the_table_are_clamped() {
    let dir = tempfile::tempdir().unwrap();
    generate_fixture(300, 1, dir.path()).unwrap();
    let tables = load_dir(dir.path()).unwrap();
    let kb = build_kb(&tables, &attr_specs(), 3, 0).unwrap();
    let (query, bound) = prepare(QUERY, &tables, &kb).unwrap();
    let config = BenchConfig { sizes: vec![1000], fractions: vec![1.0], repetitions: 2, run: RunConfig::default() };
    let report = benchmark(&query, &bound, &tables, &config).unwrap();
    assert_eq!(report.len(), 2);
    assert!(report.iter().all(|r| r.rows == 300));
    assert_eq!(report[1].max_rel_error, 0.0);
}

#[test]
fn empty_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    generate_fixture(10, 1, dir.path()).unwrap();
    let tables = load_dir(dir.path()).unwrap();
    let kb = build_kb(&tables, &attr_specs(), 3, 0).unwrap();
    let (query, bound) = prepare(QUERY, &tables, &kb).unwrap();
    let config = BenchConfig { sizes: vec![], fractions: vec![0.1], repetitions: 1, run: RunConfig::default() };
    assert!(benchmark(&query, &bound, &tables, &config).unwrap_err().is_validation());
}
