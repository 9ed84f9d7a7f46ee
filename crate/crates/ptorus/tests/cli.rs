use ptorus::cli::{format_complex, run, trim, EXIT_FAILURE, EXIT_USAGE};

fn ptorus(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("ptorus").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn last_json(text: &str) -> serde_json::Value {
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

#[test]
fn normalize_rotates() {
    let (code, out) = ptorus(&["normalize", "--word", "LRLR"]);
    assert_eq!(code, 0);
    assert!(out.contains("word RLRL"), "{out}");
    assert!(out.contains("p 4") && out.contains("trace 7"), "{out}");
    let (_, json) = ptorus(&["normalize", "--word", "LRLR", "--json"]);
    let v = last_json(&json);
    assert_eq!(v["word"], "RLRL");
    assert_eq!(v["p"], 4);
}

#[test]
fn verify_lemmas_on_the_long_word() {
    let (code, out) = ptorus(&["verify", "--word", "RLLRRRLLLL", "--suite", "lemmas"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn solve_rl_golden() {
    let (code, out) = ptorus(&["solve", "--word", "RL"]);
    assert_eq!(code, 0);
    assert!(out.contains("shapes 0.5+0.866025404i ×2"), "{out}");
    assert!(out.contains("Im lambda 0.577350269"), "{out}");
    let (_, json) = ptorus(&["solve", "--word", "RL", "--json"]);
    let v = last_json(&json);
    assert_eq!(v["shapes"].as_array().unwrap().len(), 2);
    assert!(!v["positions"].as_array().unwrap().is_empty());
}

#[test]
fn eg_generators() {
    let (code, out) = ptorus(&["eg", "--word", "RL", "--op", "q", "--m", "3", "--n", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("CBC"), "{out}");
    let (_, out) = ptorus(&["eg", "--word", "RLLRRRLLLL", "--op", "slope", "--m", "1", "--n", "1"]);
    assert!(out.contains("slope P 1/0") && out.contains("slope Q 1/1"), "{out}");
}

#[test]
fn output_is_deterministic() {
    for args in [&["solve", "--word", "R^2L^3", "--json"][..], &["render", "--word", "RL"][..]] {
        assert_eq!(ptorus(args), ptorus(args));
    }
}

#[test]
fn render_writes_files() {
    let dir = std::env::temp_dir().join(format!("ptorus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("rl.svg");
    let json = dir.join("rl.json");
    assert_eq!(ptorus(&["render", "--word", "RL", "--out", svg.to_str().unwrap()]).0, 0);
    assert_eq!(ptorus(&["render", "--word", "RL", "--out", json.to_str().unwrap()]).0, 0);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["word"], "RL");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_is_read() {
    let path = std::env::temp_dir().join(format!("ptorus-cli-{}.toml", std::process::id()));
    std::fs::write(&path, "word = \"LR\"\njson = true\n").unwrap();
    let (code, out) = ptorus(&["normalize", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(last_json(&out)["word"], "RL");
    std::fs::write(&path, "colour = 1\n").unwrap();
    let (code, out) = ptorus(&["normalize", "--word", "RL", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(last_json(&out)["kind"], "config");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn errors_are_json() {
    let (code, out) = ptorus(&["normalize", "--word", "RRRR"]);
    assert_eq!(code, EXIT_USAGE);
    let v = last_json(&out);
    assert_eq!((v["status"].as_str(), v["kind"].as_str()), (Some("error"), Some("word")));
    let (code, out) = ptorus(&["complexes", "--word", "RL", "--nwin", "3:1"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(last_json(&out)["kind"], "window");
    let (code, out) = ptorus(&["solve", "--word", "RLLRRRLLLL", "--max-iter", "1", "--tol", "1e-300"]);
    assert_eq!(code, EXIT_FAILURE);
    assert_eq!(last_json(&out)["status"], "fail");
    let (code, _) = ptorus(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn number_formatting() {
    assert_eq!(trim(-0.0), "0");
    assert_eq!(trim(0.5), "0.5");
    assert_eq!(format_complex(num_complex::Complex64::new(1.0, -2.25)), "1-2.25i");
}
