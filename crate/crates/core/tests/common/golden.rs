use std::path::{Path, PathBuf};

/// Set to regenerate the expected files instead of comparing.
pub const BLESS_ENV: &str = "CPA_BLESS";

pub const INPUTS: &str = "tests/golden/inputs";
pub const EXPECTED: &str = "tests/golden/expected";

pub struct Case {
    pub name: &'static str,
    pub args: Vec<String>,
    /// Files the command writes, compared as `<case>.<suffix>`.
    pub files: Vec<(&'static str, PathBuf)>,
}

fn tmp() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("golden")
}

fn input(name: &str) -> String {
    format!("{INPUTS}/{name}")
}

pub fn cases() -> Vec<Case> {
    let case = |name: &'static str, args: &[&str]| Case {
        name,
        args: args
            .iter()
            .map(|a| match a.strip_prefix('@') {
                Some(file) => input(file),
                None => a.to_string(),
            })
            .collect(),
        files: Vec::new(),
    };
    let with_file = |name: &'static str, args: &[&str], flag: &str, suffix: &'static str| {
        let path = tmp().join(format!("{name}.{suffix}"));
        let mut c = case(name, args);
        c.args.push(flag.to_string());
        c.args.push(path.display().to_string());
        c.files.push((suffix, path));
        c
    };
    let sim = |name: &'static str, scenario: &str, json: bool| {
        let mut args = vec!["simulate", scenario];
        if json {
            args.push("--json");
        }
        with_file(name, &args, "--trace", "trace")
    };
    vec![
        case("check_ring4_f1", &["check", "@ring4.json", "--f", "1"]),
        case("check_ring4_f1_oracle_json", &["check", "@ring4.json", "--f", "1", "--oracle", "--json"]),
        case("check_ring4_f0_oracle", &["check", "@ring4.json", "--f", "0", "--oracle"]),
        case("check_k4_f2", &["check", "@k4.json", "--f", "2"]),
        case("check_k4_domain_json", &["check", "@k4.json", "--domain", "@domain_k4.json", "--json"]),
        case("check_band6_f1_oracle", &["check", "@band6.json", "--f", "1", "--oracle"]),
        case("maxf_k4", &["maxf", "@k4.json"]),
        case("maxf_ring4", &["maxf", "@ring4.json"]),
        case("maxf_edgeless2_json", &["maxf", "@edgeless2.json", "--json"]),
        case("maxf_band6", &["maxf", "@band6.json"]),
        sim("simulate_star_cpa", "@star_cpa.json", false),
        sim("simulate_ring4_cpa", "@ring4_cpa.json", false),
        sim("simulate_fan_in5_fixed_json", "@fan_in5_fixed.json", true),
        sim("simulate_radio_silent", "@radio_silent.json", false),
        sim("simulate_cpap_liar", "@cpap_liar.json", false),
        sim("simulate_cpag_domain", "@cpag_domain.json", false),
        sim("simulate_async_seeded", "@async_seeded.json", false),
        sim("simulate_async_explicit", "@async_explicit.json", false),
        sim("simulate_equivocate", "@equivocate.json", true),
        with_file(
            "search_ring4_cpa_json",
            &["search", "@ring4.json", "--f", "1", "--protocol", "cpa", "--json"],
            "--witness",
            "witness",
        ),
        case("search_k4_cpa", &["search", "@k4.json", "--f", "1", "--protocol", "cpa", "--depth", "2"]),
        case(
            "search_k4_radio_json",
            &["search", "@k4.json", "--f", "1", "--protocol", "radio-bb", "--depth", "2", "--json"],
        ),
        case(
            "search_k4_budget",
            &["search", "@k4.json", "--f", "1", "--protocol", "cpa", "--budget", "5"],
        ),
        case(
            "search_band6_cpag_domain",
            &["search", "@band6.json", "--domain", "@domain_band6.json", "--protocol", "cpa-g", "--depth", "1"],
        ),
        case(
            "search_ring4_async",
            &["search", "@ring4.json", "--f", "0", "--protocol", "async-cpa", "--seed", "5", "--depth", "1"],
        ),
        case("gen_random", &["gen", "random", "--n", "6", "--p", "0.5", "--seed", "3"]),
        with_file("gen_torus", &["gen", "grid-torus", "--rows", "2", "--cols", "3"], "-o", "graph"),
        case("gen_complete_json", &["gen", "complete", "--n", "4", "--json"]),
        case("usage_missing_model", &["check", "@ring4.json"]),
        case("usage_bad_scenario", &["simulate", "@k4.json"]),
    ]
}

/// Runs a case in-process and returns `(file name, content)` pairs, with the
/// scratch directory replaced by `$TMP`.
pub fn render(case: &Case) -> Vec<(String, String)> {
    std::fs::create_dir_all(tmp()).unwrap();
    for (_, p) in &case.files {
        let _ = std::fs::remove_file(p);
    }
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cpa::cli::run(case.args.iter().cloned(), &mut out, &mut err);
    let scrub = |s: String| s.replace(&tmp().display().to_string(), "$TMP");
    let mut main = String::from_utf8(out).unwrap();
    let err = String::from_utf8(err).unwrap();
    if !err.is_empty() {
        main.push_str("--- stderr\n");
        main.push_str(&err);
    }
    main.push_str(&format!("--- exit {code}\n"));
    let mut files = vec![(format!("{}.out", case.name), scrub(main))];
    for (suffix, path) in &case.files {
        let body = std::fs::read_to_string(path).unwrap_or_else(|_| "<not written>\n".into());
        files.push((format!("{}.{suffix}", case.name), scrub(body)));
    }
    files
}

/// Compares every case with its expected files, or rewrites them when
/// blessing. Returns the mismatching file names.
pub fn check_all(bless: bool) -> Vec<String> {
    let dir = Path::new(EXPECTED);
    let mut bad = Vec::new();
    for case in cases() {
        for (name, body) in render(&case) {
            let path = dir.join(&name);
            if bless {
                std::fs::write(&path, &body).unwrap();
            } else if std::fs::read_to_string(&path).ok().as_deref() != Some(body.as_str()) {
                bad.push(name);
            }
        }
    }
    bad
}

pub fn expected_file_count() -> usize {
    std::fs::read_dir(EXPECTED).map(|d| d.count()).unwrap_or(0)
}
