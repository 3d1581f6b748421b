//! Synthetic patient/death tables for tests and benchmarks.

use std::fs;
use std::io;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::kbfile::AttrSpec;

pub const DEATH_RATE: f64 = 0.3;
pub const YEARS: std::ops::RangeInclusive<u32> = 2015..=2019;
const CAUSES: [&str; 4] = ["cardiac", "stroke", "cancer", "other"];

/// Number of deaths among regular drinkers with school-level education, per year.
pub const QUERY: &str = "SELECT COUNT(*) FROM Patient, Death \
    WHERE Patient.alcohol_units_per_week IS regularly AND Patient.education_years IS school \
    AND Death.pid = Patient.pid GROUP BY Death.year";

/// Attribute specs that give the fixture's columns the terms used by [`QUERY`].
pub fn attr_specs() -> Vec<AttrSpec> {
    ["Patient.alcohol_units_per_week:rarely,occasionally,regularly", "Patient.education_years:primary,school,university"]
        .iter()
        .map(|s| s.parse().expect("static spec"))
        .collect()
}

fn mixture(rng: &mut ChaCha8Rng, parts: &[(f64, f64, f64)]) -> f64 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(weight, mean, sd) in parts {
        acc += weight;
        if u < acc {
            return Normal::new(mean, sd).expect("valid normal").sample(rng);
        }
    }
    let &(_, mean, sd) = parts.last().expect("non-empty mixture");
    Normal::new(mean, sd).expect("valid normal").sample(rng)
}

/// CSV text of `Patient.csv` and `Death.csv`.
pub fn fixture_csv(rows: usize, seed: u64) -> (String, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut patients = String::from("pid,age,education_years,alcohol_units_per_week\n");
    let mut deaths = String::from("did,pid,year,cause\n");
    let mut did = 0;
    for pid in 1..=rows {
        let age = rng.random_range(30..=89);
        let education = mixture(&mut rng, &[(0.20, 6.0, 1.5), (0.55, 12.0, 1.5), (0.25, 17.0, 1.5)]).clamp(0.0, 25.0).round();
        let alcohol = mixture(&mut rng, &[(0.25, 1.0, 0.7), (0.25, 7.0, 2.0), (0.50, 21.0, 5.0)]).max(0.0);
        patients.push_str(&format!("{pid},{age},{education},{alcohol:.1}\n"));
        if rng.random_bool(DEATH_RATE) {
            did += 1;
            let year = rng.random_range(YEARS);
            let cause = CAUSES[rng.random_range(0..CAUSES.len())];
            deaths.push_str(&format!("{did},{pid},{year},{cause}\n"));
        }
    }
    (patients, deaths)
}

/// Writes `Patient.csv` and `Death.csv` into `out_dir`. Same seed, same bytes.
pub fn generate_fixture(rows: usize, seed: u64, out_dir: impl AsRef<Path>) -> io::Result<()> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir)?;
    let (patients, deaths) = fixture_csv(rows, seed);
    fs::write(out_dir.join("Patient.csv"), patients)?;
    fs::write(out_dir.join("Death.csv"), deaths)
}
