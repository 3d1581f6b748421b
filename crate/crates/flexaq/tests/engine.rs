use std::fs;

use flexaq::engine::{prepare, relative_errors, run_sql, EngineError, Mode, ResultRow, RunConfig};
use flexaq::fixture::{attr_specs, generate_fixture, QUERY};
use flexaq::ingest::load_dir;
use flexaq::kbfile::build_kb;
use flexaq_core::kb::KnowledgeBase;
use flexaq_core::query::IntervalKind;
use flexaq_core::{Table, Value};

const SALES: &str = "region,amount,qty
north,10,1
south,20,2
north,30,3
east,40,4
south,50,5
north,60,6
east,70,7
south,80,8
north,90,9
east,100,10
";

fn sales() -> Vec<Table> {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sales.csv"), SALES).unwrap();
    load_dir(dir.path()).unwrap()
}

fn exact() -> RunConfig {
    RunConfig { mode: Mode::Exact, ..RunConfig::default() }
}

#[test]
fn crisp_query_matches_hand_computation() {
    let tables = sales();
    let sql = "SELECT COUNT(*), SUM(amount), AVG(qty) FROM sales WHERE amount > 25 AND region <> 'east' GROUP BY region";
    let r = run_sql(sql, &tables, &KnowledgeBase::new(), &exact()).unwrap();
    assert_eq!(r.mode, Mode::Exact);
    assert_eq!(r.header, ["group", "COUNT(*)", "SUM(amount)", "AVG(qty)", "satisfaction", "confidence", "COUNT(*) ± halfwidth", "SUM(amount) ± halfwidth", "AVG(qty) ± halfwidth"]);
    assert_eq!(r.rows.len(), 2);
    let north = r.row(&[Value::from("north")]).unwrap();
    assert_eq!(north.estimates, [3.0, 180.0, 6.0]);
    let south = r.row(&[Value::from("south")]).unwrap();
    assert_eq!(south.estimates, [2.0, 130.0, 6.5]);
    assert!(r.rows.iter().all(|row| row.half_widths.iter().all(Option::is_none) && row.confidence.is_none()));
    let text = r.to_string();
    assert!(text.contains("north | 3        | 180"), "{text}");
    assert!(text.lines().last().unwrap().starts_with("EXACT n=10 N=10"), "{text}");
}

#[test]
fn single_aggregate_header() {
    let tables = sales();
    let r = run_sql("SELECT SUM(qty) FROM sales", &tables, &KnowledgeBase::new(), &RunConfig::default()).unwrap();
    assert_eq!(r.header, ["group", "estimate", "satisfaction", "confidence", "estimate ± halfwidth"]);
    assert_eq!(r.mode, Mode::Approximate);
    assert_eq!((r.n, r.population, r.seed), (1, 10, Some(0)));
    assert_eq!(r.rows[0].group, Vec::<Value>::new());
    assert!(r.to_string().starts_with("group | estimate"));
}

#[test]
fn interval_cells() {
    let row = ResultRow {
        group: vec![Value::Num(2016.0)],
        estimates: vec![120.0, 3.25],
        half_widths: vec![Some(10.5), Some(f64::INFINITY)],
        satisfaction: 0.75,
        confidence: Some(0.95),
    };
    assert_eq!(row.cells(), ["2016", "120", "3.2500", "0.7500", "0.95", "120 ± 10.5000", "n/a"]);
    let exact = ResultRow { half_widths: vec![None, None], confidence: None, ..row };
    assert_eq!(&exact.cells()[4..], ["-", "-", "-"]);
}

#[test]
fn empty_tables_give_empty_results() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("t.csv"), "x,y\n").unwrap();
    let tables = load_dir(dir.path()).unwrap();
    for config in [exact(), RunConfig::default()] {
        let r = run_sql("SELECT COUNT(*) FROM t GROUP BY y", &tables, &KnowledgeBase::new(), &config).unwrap();
        assert!(r.rows.is_empty());
        assert_eq!(r.population, 0);
    }
}

#[test]
fn validation_errors() {
    let tables = sales();
    let kb = KnowledgeBase::new();
    let err = run_sql("SELECT COUNT(*) FROM nope", &tables, &kb, &RunConfig::default()).unwrap_err();
    assert!(matches!(err, EngineError::Invalid(_)) && err.is_validation());
    let err = run_sql("SELECT COUNT(* FROM sales", &tables, &kb, &RunConfig::default()).unwrap_err();
    assert!(matches!(err, EngineError::Parse(_)) && err.is_validation());
    let err = run_sql("SELECT COUNT(*) FROM sales WHERE amount IS high", &tables, &kb, &RunConfig::default()).unwrap_err();
    assert!(err.is_validation(), "{err}");
    assert!(err.to_string().contains("NotRelaxable"), "{err}");
    let config = RunConfig { sample_fraction: 0.0, ..RunConfig::default() };
    assert!(run_sql("SELECT COUNT(*) FROM sales", &tables, &kb, &config).unwrap_err().is_validation());
}

struct Fixture {
    _dir: tempfile::TempDir,
    tables: Vec<Table>,
    kb: KnowledgeBase,
}

fn fixture(rows: usize) -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    generate_fixture(rows, 9, dir.path()).unwrap();
    let tables = load_dir(dir.path()).unwrap();
    let kb = build_kb(&tables, &attr_specs(), 3, 0).unwrap();
    Fixture { _dir: dir, tables, kb }
}

#[test]
fn full_sample_reproduces_exact() {
    let f = fixture(3000);
    let truth = run_sql(QUERY, &f.tables, &f.kb, &exact()).unwrap();
    assert_eq!(truth.rows.len(), 5);
    for interval in [IntervalKind::LargeSample, IntervalKind::Conservative] {
        let config = RunConfig { sample_fraction: 1.0, interval, seed: 17, ..RunConfig::default() };
        let r = run_sql(QUERY, &f.tables, &f.kb, &config).unwrap();
        assert_eq!(r.rows.len(), truth.rows.len());
        for (a, e) in r.rows.iter().zip(&truth.rows) {
            assert_eq!((&a.group, &a.estimates, a.satisfaction), (&e.group, &e.estimates, e.satisfaction));
            if interval == IntervalKind::LargeSample {
                assert_eq!(a.half_widths, [Some(0.0)]);
            }
        }
        assert!(relative_errors(&truth, &r).iter().all(|&e| e == 0.0));
    }
}

#[test]
fn fixed_seed_is_deterministic() {
    let f = fixture(3000);
    let config = RunConfig { sample_fraction: 0.1, seed: 5, export_lattice: true, ..RunConfig::default() };
    let a = run_sql(QUERY, &f.tables, &f.kb, &config).unwrap();
    let b = run_sql(QUERY, &f.tables, &f.kb, &config).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.lattice_dot, b.lattice_dot);
    assert!(a.lattice_dot.as_deref().unwrap().starts_with("digraph"));
    let other = run_sql(QUERY, &f.tables, &f.kb, &RunConfig { seed: 6, ..config }).unwrap();
    assert_ne!(a.rows, other.rows);
}

#[test]
fn missing_groups_count_as_total_error() {
    let f = fixture(400);
    let truth = run_sql(QUERY, &f.tables, &f.kb, &exact()).unwrap();
    let mut approx = truth.clone();
    approx.rows.truncate(truth.rows.len() - 1);
    let errors = relative_errors(&truth, &approx);
    assert_eq!(errors.len(), truth.rows.len());
    assert_eq!(errors.iter().filter(|&&e| e == 1.0).count(), 1);
}

#[test]
fn driving_table_override() {
    let f = fixture(1000);
    let (_, bound) = prepare(QUERY, &f.tables, &f.kb).unwrap();
    let truth = run_sql(QUERY, &f.tables, &f.kb, &exact()).unwrap();
    let death_first = RunConfig { driving: 1, sample_fraction: 1.0, ..RunConfig::default() };
    let r = run_sql(QUERY, &f.tables, &f.kb, &death_first).unwrap();
    assert_eq!(r.population, f.tables[bound.tables[1]].len());
    for (a, e) in r.rows.iter().zip(&truth.rows) {
        for (x, y) in a.estimates.iter().zip(&e.estimates) {
            assert!((x - y).abs() <= 1e-9 * y.abs(), "{x} vs {y}");
        }
    }
}
