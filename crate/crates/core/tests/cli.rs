use ihara::cli::{run, EXIT_EMPTY_SEARCH, EXIT_INPUT, EXIT_NOT_CERTIFIED, EXIT_OK};
use ihara::report::{certificate_from_record, certificate_record, Record};

fn ihara(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ihara").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn records(stdout: &str) -> Vec<Record> {
    stdout.lines().map(|l| Record::from_json_line(l).unwrap_or_else(|| panic!("not a flat record: {l}"))).collect()
}

#[test]
fn spectrum_of_the_projective_line() {
    let (code, out, _) = ihara(&["--config", "f2_tower1", "spectrum", "--name", "P1", "--dmax", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("a_d = (3,1,2)"), "{out}");
}

#[test]
fn spectrum_of_e_with_zeta() {
    let (code, out, _) = ihara(&["--config", "f2_tower1", "--json", "spectrum", "--name", "E", "--dmax", "8"]);
    assert_eq!(code, EXIT_OK);
    let recs = records(&out);
    let summary = recs.iter().find(|r| r.kind() == "spectrum_summary").unwrap();
    assert_eq!(summary.get("places").unwrap(), "5,0,0,5,4,10,20,25");
    let zeta = recs.iter().find(|r| r.kind() == "zeta").unwrap();
    assert_eq!(zeta.get("l_coefficients").unwrap(), "1,2,2");
    assert_eq!(zeta.get("max_discrepancy").unwrap(), 0);
}

#[test]
fn spectrum_of_k3_has_zero_residuals() {
    let (code, out, _) = ihara(&["--config", "f3_tower", "--json", "spectrum", "--name", "k3", "--dmax", "9"]);
    assert_eq!(code, EXIT_OK);
    let recs = records(&out);
    let summary = recs.iter().find(|r| r.kind() == "spectrum_summary").unwrap();
    assert_eq!(summary.get("places").unwrap(), "567,0,0,0,1,0,0,162,1809");
    let oracles: Vec<_> = recs.iter().filter(|r| r.kind() == "oracle").collect();
    assert_eq!(oracles.len(), 2);
    assert!(oracles.iter().all(|r| r.get("residual").unwrap() == 0));
}

#[test]
fn certify_reports_exact_bounds() {
    let (code, out, _) = ihara(&["--config", "f2_tower1", "certify", "--name", "tower1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("80/253"), "{out}");
    assert!(out.contains("16384/51711 = 0.316837810137"), "{out}");
}

#[test]
fn uncertified_plan_exits_with_four() {
    let (code, out, _) = ihara(&["--config", "f2_tower1", "--json", "certify", "--name", "tower1_t231"]);
    assert_eq!(code, EXIT_NOT_CERTIFIED);
    let rec = &records(&out)[0];
    assert_eq!(rec.get("infinite").unwrap(), false);
    assert!(rec.get("gs_margin").unwrap().as_i64().unwrap() < 0);
    assert!(rec.get("bound").is_none());
}

#[test]
fn certificate_records_round_trip() {
    for config in ["f2_tower1", "f2_tower2", "f3_tower"] {
        let (_, out, _) = ihara(&["--config", config, "--json", "certify"]);
        for rec in records(&out).into_iter().filter(|r| r.kind() == "certificate") {
            let (genus, plan, cert) = certificate_from_record(&rec).expect("replayable record");
            let name = rec.get("plan").unwrap().as_str().unwrap();
            let again = certificate_record(name, genus, &plan, &cert);
            assert_eq!(Record::from_json_line(&again.to_json_line()).unwrap(), rec);
        }
    }
}

#[test]
fn refinement_flag_is_reported_for_p3() {
    let (_, out, _) = ihara(&["--config", "f3_tower", "--json", "certify", "--name", "f3_alt"]);
    let recs = records(&out);
    assert_eq!(recs[0].get("refinement_exponent_differs").unwrap(), true);
    assert!(recs.iter().any(|r| r.kind() == "warning"));
}

#[test]
fn compare_inline_and_configured() {
    let (code, out, _) =
        ihara(&["compare", "--s", "24", "--l", "2", "--t", "24", "--s-prime", "3", "--t-size", "99", "--p", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("ours  d ≥ 22, r - d ≤ 92"), "{out}");
    let (code, out, _) = ihara(&["--config", "remark_comparisons", "--json", "compare"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(records(&out).len(), 4);
}

#[test]
fn incomplete_inline_comparison_is_an_input_error() {
    let (code, _, err) = ihara(&["compare", "--s", "24"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("--t-size"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(ihara(&["--config", "/nonexistent.toml", "certify"]).0, EXIT_INPUT);
    assert_eq!(ihara(&["--config", "f2_tower1", "certify", "--name", "missing"]).0, EXIT_INPUT);
    assert_eq!(ihara(&["--config", "f2_tower1", "spectrum", "--name", "missing"]).0, EXIT_INPUT);
    assert_eq!(ihara(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(ihara(&["--help"]).0, EXIT_OK);
}

#[test]
fn degenerate_search_exits_with_five() {
    let dir = std::env::temp_dir().join(format!("ihara-degenerate-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("degenerate.toml");
    std::fs::write(
        &path,
        "[field]\np = 2\n\n[[curves]]\nname = \"P1\"\nequation = \"y\"\ngenus = 0\ninfinity = [[1, 1]]\n\n\
         [search]\nover = \"P1\"\ndmax = 3\ndegrees = [2, 3]\n",
    )
    .unwrap();
    let (code, _, err) = ihara(&["--config", path.to_str().unwrap(), "optimize"]);
    assert_eq!(code, EXIT_EMPTY_SEARCH, "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn optimize_output_is_independent_of_jobs() {
    let (c1, one, _) = ihara(&["--config", "f2_tower2", "--jobs", "1", "--json", "optimize", "--top", "5"]);
    let (c4, four, _) = ihara(&["--config", "f2_tower2", "--jobs", "4", "--json", "optimize", "--top", "5"]);
    assert_eq!((c1, c4), (EXIT_OK, EXIT_OK));
    assert_eq!(one, four);
    let best = records(&one).into_iter().find(|r| r.get("rank") == Some(&1.into())).unwrap();
    assert!(best.get("bound_refined_decimal").unwrap().as_str().unwrap() >= "0.316999");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = std::env::temp_dir().join(format!("ihara-strict-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("strict.toml");
    std::fs::write(&path, "[field]\np = 2\ncolour = \"red\"\n").unwrap();
    let (code, _, err) = ihara(&["--config", path.to_str().unwrap(), "certify"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("colour"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}
