//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use vlike_core::exact::{bernoulli_recurrence_witness, stirling_duality_witness};
use vlike_core::genus_zero::{check_all_constraints, FrobeniusPotential, GenusZeroData};
use vlike_core::hodge::{verify_dim1_closed_form, verify_hodge_virasoro, verify_minus_one_shift, verify_two_paths};
use vlike_core::lie::{
    admissible, check_deformed_generating_function, check_deformed_identities, check_generating_identities,
    verify_commutative_family, verify_half_twist, verify_prop_univ, verify_structure_table, verify_virasoro, Family,
    SeriesCheck, UniversalBracket,
};
use vlike_core::report::CheckRecord;
use vlike_core::spectrum::{catalog, SpectrumData, CATALOG_NAMES};
use vlike_core::stress_tensor::{check_commuting_generator_form, check_evenness, check_gamma_oracle};

struct Outcome {
    passed: bool,
    summary: String,
}

fn from_records(records: &[CheckRecord]) -> Outcome {
    let bad: Vec<&CheckRecord> = records.iter().filter(|r| !r.passed()).collect();
    match bad.first() {
        None => Outcome {
            passed: true,
            summary: format!("{} checks", records.len()),
        },
        Some(r) => Outcome {
            passed: false,
            summary: format!(
                "{} of {} checks not passing; first: {} [{}] {:?} {}",
                bad.len(),
                records.len(),
                r.identity,
                r.indices,
                r.status,
                r.detail.as_deref().unwrap_or("")
            ),
        },
    }
}

fn from_series(checks: &[SeriesCheck]) -> Vec<CheckRecord> {
    use vlike_core::report::{Status, Verified};
    checks
        .iter()
        .map(|c| {
            let rec = CheckRecord::new(c.identity.clone(), "", None);
            if c.passed {
                rec.with_status(Status::Pass, Verified::Exact)
            } else {
                rec.with_status(Status::Fail, Verified::Exact)
                    .with_detail(c.witness.clone().unwrap_or_default())
            }
        })
        .collect()
}

fn spectra() -> Vec<(&'static str, Arc<SpectrumData>)> {
    CATALOG_NAMES.iter().map(|n| (*n, catalog(n).unwrap())).collect()
}

fn virasoro() -> Outcome {
    let mut records = Vec::new();
    for (_, s) in spectra() {
        let family = Family::new(s, 12);
        let pairs: Vec<(i64, i64)> = (-1..=4)
            .flat_map(|m| (-1..=4).map(move |n| (m, n)))
            .filter(|(m, n)| m + n >= -1)
            .collect();
        records.extend(pairs.par_iter().map(|&(m, n)| verify_virasoro(&family, m, n)).collect::<Vec<_>>());
    }
    from_records(&records)
}

fn evenness() -> Outcome {
    let records: Vec<CheckRecord> = spectra()
        .iter()
        .flat_map(|(_, s)| (-1..=6).map(move |m| check_evenness(s, m, 12)))
        .collect();
    from_records(&records)
}

fn structure_constants() -> Outcome {
    let mut records = Vec::new();
    let mut tables = Vec::new();
    for (name, s) in spectra() {
        let family = Family::new(s, 12);
        let (table, recs) = verify_structure_table(&family, 4);
        records.extend(recs);
        if let Some(t) = table {
            tables.push((name, t));
        }
        for (m, k) in admissible(4) {
            for which in [UniversalBracket::L10, UniversalBracket::L12] {
                records.push(verify_prop_univ(&family, m, k, which));
            }
        }
    }
    let mut out = from_records(&records);
    if tables.len() != 3 {
        out.passed = false;
        out.summary.push_str("; a table could not be fitted");
    }
    for (name, t) in &tables[1..] {
        if let Some(key) = tables[0].1.first_difference(t) {
            out.passed = false;
            out.summary.push_str(&format!("; {name} differs from {} at {key:?}", tables[0].0));
        }
    }
    if out.passed {
        out.summary.push_str(", tables identical across spectra");
    }
    out
}

fn half_twist() -> Outcome {
    let mut records = Vec::new();
    for name in ["dim1", "a2"] {
        let family = Family::new(catalog(name).unwrap(), 12);
        for m in -1..=3 {
            for n in -1..=3 {
                records.push(verify_half_twist(&family, m, n));
            }
        }
    }
    from_records(&records)
}

fn commuting_family() -> Outcome {
    let mut records = Vec::new();
    for (_, s) in spectra() {
        let family = Family::new(s, 14);
        for k in 1..=3 {
            for j in 1..=3 {
                records.push(verify_commutative_family(&family, k, j));
            }
        }
    }
    from_records(&records)
}

fn commuting_form() -> Outcome {
    let records: Vec<CheckRecord> = spectra()
        .iter()
        .flat_map(|(_, s)| (1..=2).map(move |k| check_commuting_generator_form(s, k, 12)))
        .collect();
    from_records(&records)
}

fn genus_zero() -> Outcome {
    let mut records = Vec::new();
    let mut lowest = u32::MAX;
    for name in ["dim1", "a2"] {
        let p = FrobeniusPotential::builtin(name).unwrap();
        match GenusZeroData::build(p, 8, 8) {
            Ok(data) => {
                lowest = lowest.min(data.verified_degree());
                records.extend(check_all_constraints(&data, 3));
            }
            Err(e) => records.push(CheckRecord::new("genus-zero data", name, None).from_outcome(Err(e))),
        }
    }
    let mut out = from_records(&records);
    if lowest < 6 {
        out.passed = false;
    }
    out.summary.push_str(&format!(", verified degree {lowest}"));
    out
}

fn hodge() -> Outcome {
    let mut records = Vec::new();
    for (_, s) in spectra() {
        let family = Family::new(s, 12);
        records.push(verify_minus_one_shift(&family, 2, 2));
        for n in -1..=2 {
            records.extend(verify_two_paths(&family, n, 2, 2));
        }
        for m in -1..=2 {
            for n in -1..=2 {
                records.extend(verify_hodge_virasoro(&family, m, n, 2, 2));
            }
        }
    }
    from_records(&records)
}

fn dim1_closed_form() -> Outcome {
    let family = Family::new(catalog("dim1").unwrap(), 12);
    let records: Vec<CheckRecord> = (0..=1).flat_map(|n| verify_dim1_closed_form(&family, n, 1, 3)).collect();
    from_records(&records)
}

fn combinatorics() -> Outcome {
    use vlike_core::report::{Status, Verified};
    let mut records = Vec::new();
    let duality = CheckRecord::new("Stirling duality", "n <= 20", None);
    records.push(match stirling_duality_witness(20) {
        None => duality.with_status(Status::Pass, Verified::Exact),
        Some(w) => duality.with_status(Status::Fail, Verified::Exact).with_detail(format!("{w:?}")),
    });
    let bern = CheckRecord::new("Bernoulli recurrence", "n <= 30", None);
    records.push(match bernoulli_recurrence_witness(30) {
        None => bern.with_status(Status::Pass, Verified::Exact),
        Some(w) => bern.with_status(Status::Fail, Verified::Exact).with_detail(format!("n={w}")),
    });
    records.extend(from_series(&check_generating_identities(6, 10)));
    let p1 = catalog("p1").unwrap();
    records.extend(from_series(&check_deformed_generating_function(&p1, 4, 3, 10)));
    records.extend(from_series(&check_deformed_identities(&p1, 3, 3, 10)));
    from_records(&records)
}

fn gamma_oracle() -> Outcome {
    let records: Vec<CheckRecord> = spectra()
        .iter()
        .filter(|(_, s)| !s.has_r())
        .map(|(_, s)| check_gamma_oracle(s, 20, 2024, 1e-9))
        .collect();
    from_records(&records)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("virasoro relations", virasoro),
        ("evenness and degree", evenness),
        ("structure constants", structure_constants),
        ("half-twist subalgebra", half_twist),
        ("commuting family", commuting_family),
        ("commuting generator differential form", commuting_form),
        ("genus-zero constraints", genus_zero),
        ("hodge operators", hodge),
        ("one-dimensional closed form", dim1_closed_form),
        ("combinatorics", combinatorics),
        ("gamma oracle", gamma_oracle),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        if !out.passed {
            failed += 1;
        }
        println!(
            "{:>2}. {} {name}: {} ({:.1}s)",
            i + 1,
            if out.passed { "PASS" } else { "FAIL" },
            out.summary,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
