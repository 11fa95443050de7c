use gcs::report::{CheckRecord, Parameters, Status, VerificationReport};
use gcs::seedfile::{Family, NodeRecord, SeedFile};
use gcs::{build_seed_file, mutate_file, CliError};
use gcs_core::completeness::NOTEQUIV_TARGETS;
use gcs_core::double::{coord_minor, grid_label};
use gcs_core::engine::random::{random_seed, RandomSeedConfig};
use gcs_core::exact::{functions_equal, IdentityConfig};
use gcs_core::{rng_from_seed, Error};
use proptest::prelude::*;

fn same_functions(a: &SeedFile, b: &SeedFile) -> bool {
    let (sa, sb) = (a.to_seed().unwrap(), b.to_seed().unwrap());
    let cfg = IdentityConfig { symbolic_term_limit: 0, ..IdentityConfig::default() };
    let mut rng = rng_from_seed(1);
    sa.cluster.iter().zip(&sb.cluster).all(|(f, g)| functions_equal(f, g, &cfg, &mut rng).unwrap().holds())
}

#[test]
fn double_seed_round_trips() {
    for n in 3..=4 {
        let file = build_seed_file(Family::Double, n, None).unwrap();
        file.check_structure().unwrap();
        let json = file.to_json();
        let back: SeedFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, file);
        let rebuilt = SeedFile::from_seed(&back.to_seed().unwrap(), Family::Double, None, back.conventions.clone());
        assert_eq!(rebuilt.to_json(), json);
    }
}

#[test]
fn band_seed_records_its_conventions() {
    let file = build_seed_file(Family::Band, 5, Some(4)).unwrap();
    file.check_structure().unwrap();
    assert_eq!(file.vertices.len(), 25);
    assert!(file.conventions["tall_ledger"].contains("X_[2,k]"));
    assert!(file.conventions["long_ledger"].contains("(k-j)(n-1)-i+1"));
    let k2 = build_seed_file(Family::Band, 4, Some(2)).unwrap();
    assert!(k2.conventions["tall_ledger"].starts_with("no ledger rows"));
    assert!(matches!(build_seed_file(Family::Band, 4, None), Err(CliError::Config(_))));
}

#[test]
fn shared_subexpressions_are_stored_once() {
    let file = build_seed_file(Family::Double, 3, None).unwrap();
    let (once, _) = mutate_file(&file, &[grid_label(2, 1)], false, 1000).unwrap();
    let seed = once.to_seed().unwrap();
    let separate: usize = seed.cluster.iter().map(|f| f.node_count()).sum();
    assert!(once.nodes.len() < separate, "{} nodes stored, {separate} counted separately", once.nodes.len());
    assert!(once.nodes.len() < file.nodes.len() + seed.cluster[seed.find(&grid_label(2, 1)).unwrap()].node_count());
}

#[test]
fn malformed_files_are_rejected() {
    let mut file = build_seed_file(Family::Double, 3, None).unwrap();
    file.format = 2;
    assert!(matches!(file.to_seed(), Err(CliError::Format(_))));
    let mut file = build_seed_file(Family::Double, 3, None).unwrap();
    file.nodes.insert(0, NodeRecord::Sum { args: vec![5] });
    assert!(file.to_seed().is_err());
    let mut file = build_seed_file(Family::Double, 3, None).unwrap();
    file.nodes[0] = NodeRecord::Entry { coord: "x4,1".into() };
    assert!(file.to_seed().is_err());
    let mut file = build_seed_file(Family::Double, 3, None).unwrap();
    file.vertices.pop();
    assert!(file.check_structure().is_err());
}

#[test]
fn mutation_and_its_repeat_restore_the_seed() {
    let file = build_seed_file(Family::Double, 3, None).unwrap();
    let v = vec![grid_label(2, 1)];
    let (once, _) = mutate_file(&file, &v, false, 1000).unwrap();
    let (twice, _) = mutate_file(&once, &v, false, 1000).unwrap();
    assert_eq!(twice.edges, file.edges);
    assert_eq!(twice.strings, file.strings);
    assert!(same_functions(&twice, &file));
    let reloaded: SeedFile = serde_json::from_str(&once.to_json()).unwrap();
    assert!(same_functions(&reloaded, &once));
}

#[test]
fn check_regular_certifies_one_step_mutations_for_three() {
    let file = build_seed_file(Family::Double, 3, None).unwrap();
    let seed = file.to_seed().unwrap();
    for k in seed.mutable_vertices() {
        let (_, steps) = mutate_file(&file, &[seed.quiver.vertex(k).label.clone()], true, 500_000).unwrap();
        assert_eq!(steps.len(), 1);
        assert!(steps[0].outcome.is_ok(), "{}", steps[0].label);
    }
    let four = build_seed_file(Family::Double, 4, None).unwrap();
    assert!(matches!(mutate_file(&four, &[grid_label(2, 1)], true, 1000), Err(CliError::Config(_))));
}

#[test]
fn frozen_and_unknown_vertices_are_refused() {
    let file = build_seed_file(Family::Double, 3, None).unwrap();
    assert!(matches!(mutate_file(&file, &["c1".into()], false, 1000), Err(CliError::Config(_))));
    assert!(matches!(mutate_file(&file, &["nowhere".into()], false, 1000), Err(CliError::Config(_))));
}

#[test]
fn notequiv_sequence_through_the_file_format() {
    let file = build_seed_file(Family::Double, 4, None).unwrap();
    let seq: Vec<String> = ["(5,4)", "(4,3)", "(3,2)", "(6,4)", "(5,3)", "(4,2)", "(5,4)", "(4,3)"].map(String::from).into();
    let (out, _) = mutate_file(&file, &seq, false, 1000).unwrap();
    let seed = serde_json::from_str::<SeedFile>(&out.to_json()).unwrap().to_seed().unwrap();
    let cfg = IdentityConfig::default();
    let mut rng = rng_from_seed(2);
    for t in &NOTEQUIV_TARGETS {
        let v = seed.find(&grid_label(t.vertex.0, t.vertex.1)).unwrap();
        assert!(functions_equal(&seed.cluster[v], &coord_minor(4, t.rows, t.cols), &cfg, &mut rng).unwrap().holds(), "{}", t.name);
    }
}

#[test]
fn reports_sort_records_and_count_statuses() {
    let rec = |id: &str, status| CheckRecord { id: id.into(), anchor: "a".into(), status, witness: None, values: None };
    let r = VerificationReport::new(
        "x",
        Parameters::default(),
        vec![rec("b", Status::Pass), rec("a", Status::Excluded), rec("c", Status::Fail)],
    );
    assert_eq!(r.records.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), ["a", "b", "c"]);
    assert!(!r.passed);
    assert_eq!((r.summary.pass, r.summary.fail, r.summary.excluded), (1, 1, 1));
    assert!(r.to_json().contains("\"status\": \"excluded\""));
    assert!(!r.to_json().contains("duration"));
}

#[test]
fn core_errors_convert() {
    let e: CliError = Error::Range("n".into()).into();
    assert_eq!(e.exit_code(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_seeds_round_trip(seed in any::<u64>(), walk in prop::collection::vec(0usize..5, 0..4)) {
        let mut rng = rng_from_seed(seed);
        let s = random_seed(&RandomSeedConfig::default(), &mut rng);
        let mutable = s.mutable_vertices();
        let ks: Vec<usize> = walk.iter().map(|i| mutable[i % mutable.len()]).collect();
        let Ok(s) = s.mutate_sequence(&ks) else { return Ok(()) };
        let file = SeedFile::from_seed(&s, Family::Double, None, Default::default());
        let json = file.to_json();
        let back: SeedFile = serde_json::from_str(&json).unwrap();
        let rebuilt = back.to_seed().unwrap();
        prop_assert_eq!(&rebuilt.quiver, &s.quiver);
        prop_assert_eq!(&rebuilt.strings, &s.strings);
        prop_assert_eq!(SeedFile::from_seed(&rebuilt, Family::Double, None, Default::default()).to_json(), json);
    }
}
