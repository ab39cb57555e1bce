//! Fixture integrity: the committed CSV regenerates exactly from its design
//! and seed, and every model combination fits it interiorly.

mod common;

use common::*;
use sn_bands::simulate_dataset;

/// Seed search used to (re)generate the committed fixture. Run with
/// `cargo test -p sn-bands --test fixture -- --ignored --nocapture`.
#[test]
#[ignore]
fn regenerate_fixture() {
    'seed: for seed in 1..400u64 {
        let design = fixture_design(seed);
        let data = simulate_dataset(&design, 0).unwrap();
        let runouts = data.n_runouts();
        if !(4..=9).contains(&runouts) {
            continue;
        }
        let (lo, hi) = data.cycles_range();
        if lo < 120.0 || hi > 5600.0 {
            continue;
        }
        for spec in all_combos() {
            match sn_bands::fit_ml(&spec, &data, &sn_bands::FitOptions::default()) {
                Ok(f) if fit_is_interior(&f) => {}
                _ => continue 'seed,
            }
        }
        println!("seed {seed}: runouts={runouts}, cycles in [{lo:.1}, {hi:.1}]");
        std::fs::write(fixture_path(), data.to_csv_string()).unwrap();
        println!("wrote {}", fixture_path().display());
        return;
    }
    panic!("no admissible seed found");
}

#[test]
fn fixture_reproduces_from_design() {
    let design = fixture_design(FIXTURE_SEED);
    let regenerated = simulate_dataset(&design, 0).unwrap();
    let committed = std::fs::read_to_string(fixture_path()).unwrap();
    assert_eq!(
        regenerated.to_csv_string(),
        committed,
        "fixture30.csv no longer matches its generating design"
    );
}

#[test]
fn fixture_shape() {
    let data = fixture_dataset();
    assert_eq!(data.len(), 30);
    let runouts = data.n_runouts();
    assert!((4..=9).contains(&runouts), "runouts = {runouts}");
    let stresses: std::collections::BTreeSet<u64> = data
        .observations
        .iter()
        .map(|o| o.stress.round() as u64)
        .collect();
    assert_eq!(stresses.into_iter().collect::<Vec<_>>(), vec![30, 55, 100]);
}

#[test]
fn every_combo_fits_interiorly() {
    let data = fixture_dataset();
    for spec in all_combos() {
        let fitted = fit_fixture(&spec, &data);
        assert!(
            fit_is_interior(&fitted),
            "non-interior fit for {:?} {:?} {:?}",
            spec.error_family,
            spec.curve,
            spec.orientation
        );
    }
}
