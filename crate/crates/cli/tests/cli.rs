//! End-to-end tests driving the built binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use plr_core::format::parse_rect;
use plr_core::rect::LatinSquare;
use plr_core::samples;

fn plr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_fixture(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("plr-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("fixture dir");
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("fixture written");
    path
}

fn example_a_path() -> PathBuf {
    write_fixture("a.plr", &samples::embeds_at_8().to_string())
}

#[test]
fn check_cruse_prints_witness_and_passes() {
    let path = example_a_path();
    let out = plr(&["check", "cruse", path.to_str().unwrap(), "--n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("status: yes"), "{text}");
    // the witness is printed and parseable
    let body: String = text
        .lines()
        .skip(1)
        .take_while(|l| !l.starts_with("diagnostics"))
        .map(|l| format!("{l}\n"))
        .collect();
    let witness = parse_rect(&body).expect("witness parses");
    assert!(witness.extends(&samples::embeds_at_8()));
    assert!(text.contains("A4"));
}

#[test]
fn complete_at_7_reports_symbol_deficit() {
    let path = example_a_path();
    let out = plr(&["complete", path.to_str().unwrap(), "--n", "7"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("status: no"), "{text}");
    assert!(text.contains("A3"));
    assert!(text.contains("symbol 1"));
}

#[test]
fn complete_at_8_text_and_json_agree() {
    let path = example_a_path();
    let text_out = plr(&["complete", path.to_str().unwrap(), "--n", "8"]);
    assert_eq!(text_out.status.code(), Some(0));
    let text = stdout(&text_out);
    assert!(text.starts_with("status: completed"));
    let body: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let from_text = parse_rect(&body).expect("square parses");

    let json_out = plr(&["complete", path.to_str().unwrap(), "--n", "8", "--json"]);
    assert_eq!(json_out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&json_out)).expect("valid json");
    assert_eq!(value["status"], "completed");
    let grid: Vec<Vec<usize>> = value["payload"]["grid"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_u64().unwrap() as usize - 1)
                .collect()
        })
        .collect();
    let from_json = LatinSquare::from_rows(grid).expect("json grid is a latin square");
    assert_eq!(from_json.as_rect(), from_text);
    assert!(from_json.as_rect().extends(&samples::embeds_at_8()));
}

#[test]
fn saturate_and_type_scan() {
    let path = example_a_path();
    let out = plr(&[
        "saturate",
        path.to_str().unwrap(),
        "--target",
        "6,6,7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body: String = stdout(&out).lines().skip(1).map(|l| format!("{l}\n")).collect();
    let sat = parse_rect(&body).unwrap();
    assert_eq!(sat.shape(), (6, 6, 7));
    assert!(sat.is_saturated());
    assert!(sat.extends(&samples::embeds_at_8()));

    let out = plr(&[
        "sat",
        "types",
        path.to_str().unwrap(),
        "--caps",
        "7,7,7",
        "--jobs",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(lines, vec!["5 5 7", "5 6 7", "6 5 7", "6 6 7"]);
}

#[test]
fn kplex_scan_all_found() {
    let out = plr(&["kplex", "scan", "--order", "4", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(lines.len(), 4, "{text}");
    for line in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(fields[1], "1");
        assert_eq!(fields[2], "3");
        assert_eq!(fields[3], "true");
    }
    // job count must not change the canonical output
    let parallel = plr(&["kplex", "scan", "--order", "4", "--k", "1", "--jobs", "4"]);
    assert_eq!(stdout(&parallel), text);
}

#[test]
fn kplex_embed_agrees_outside_the_deleted_plex() {
    let cyc = LatinSquare::cyclic(5);
    let path = write_fixture("cyc5.plr", &cyc.to_string());
    let out = plr(&["kplex", "embed", path.to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let body: String = stdout(&out).lines().skip(1).map(|l| format!("{l}\n")).collect();
    let embedded = parse_rect(&body).unwrap();
    assert_eq!(embedded.shape(), (7, 7, 7));
    let agree = (0..5)
        .flat_map(|r| (0..5).map(move |c| (r, c)))
        .filter(|&(r, c)| embedded.get(r, c) == Some(cyc.get(r, c)))
        .count();
    assert!(agree >= 25 - 2 * 3, "{agree} agreements");
}

#[test]
fn freq_complete_example() {
    let freq_text = "3 4 3\n2 2 0\n2 2 1\n1 2 1 .\n. 2 1 2\n2 . 2 1\n";
    let path = write_fixture("f.freq", freq_text);
    let out = plr(&["freq", "complete", path.to_str().unwrap(), "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("status: completed"));
    // a lambda override narrows the classes
    let freq2 = "3 4 2\n2 2\n2 3\n1 2 1 .\n. 2 1 2\n2 . 2 1\n";
    let path = write_fixture("f2.freq", freq2);
    let out = plr(&[
        "freq",
        "complete",
        path.to_str().unwrap(),
        "--n",
        "5",
        "--lambda",
        "2,3",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn oracle_commands() {
    let path = example_a_path();
    let out = plr(&["oracle", "complete", path.to_str().unwrap(), "--n", "7"]);
    assert_eq!(out.status.code(), Some(1));
    let out = plr(&["oracle", "complete", path.to_str().unwrap(), "--n", "8"]);
    assert_eq!(out.status.code(), Some(0));

    let out = plr(&["oracle", "enum", "--order", "4", "--count-only"]);
    assert_eq!(stdout(&out).lines().nth(1), Some("576"));
    let out = plr(&["oracle", "enum", "--order", "4", "--reduced", "--count-only"]);
    assert_eq!(stdout(&out).lines().nth(1), Some("4"));
}

#[test]
fn sampling_is_seed_deterministic() {
    let run = |seed: &str| {
        stdout(&plr(&[
            "oracle", "enum", "--order", "5", "--sample", "3", "--seed", seed,
        ]))
    };
    let a = run("11");
    let b = run("11");
    let c = run("12");
    assert_eq!(a, b, "same seed, same squares");
    assert_ne!(a, c, "different seed, different squares");
    // every emitted block is a valid latin square
    let blocks: Vec<&str> = a.split("\n\n").filter(|b| b.contains('\n')).collect();
    assert_eq!(blocks.len(), 3);
    for block in blocks {
        let body: String = block
            .lines()
            .filter(|l| !l.starts_with("status"))
            .map(|l| format!("{l}\n"))
            .collect();
        let rect = parse_rect(&body).unwrap();
        LatinSquare::try_from_rect(&rect).expect("sampled square is latin");
    }
}

#[test]
fn parse_errors_exit_2_with_position() {
    let path = write_fixture("bad.plr", "2 2 2\n1 x\n2 1\n");
    let out = plr(&["complete", path.to_str().unwrap(), "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("'x'"), "{err}");

    // shape errors are input errors too
    let path = example_a_path();
    let out = plr(&["complete", path.to_str().unwrap(), "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown flags are usage errors
    let out = plr(&["complete", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_sat_reports_conditions() {
    let path = example_a_path();
    let out = plr(&[
        "check",
        "sat",
        path.to_str().unwrap(),
        "--target",
        "6,6,7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("C3d"));
    assert!(text.contains("g:"));

    let out = plr(&[
        "check",
        "sat",
        path.to_str().unwrap(),
        "--target",
        "5,7,7",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
