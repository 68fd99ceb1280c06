//! Golden transcripts of CLI runs, shared by the golden and acceptance tests.

use std::path::{Path, PathBuf};
use std::process::Command;

pub const CASES: &[(&str, &[&str])] = &[
    ("parse", &["parse", "data/aba.gp"]),
    ("parse_error", &["parse", "data/broken.gp"]),
    ("print", &["print", "data/aab.gp"]),
    ("prefixes_aba", &["prefixes", "data/aba.gp"]),
    ("prefixes_aab", &["prefixes", "data/aab.gp"]),
    ("ru_prefixes", &["ru-prefixes", "data/ru.inv"]),
    ("transform_mon2gp", &["transform", "mon2gp", "data/commute.mon"]),
    ("transform_star", &["transform", "star", "--subset", "a", "data/z3.gp"]),
    ("transform_freegen", &["transform", "freegen", "data/z3.gp"]),
    ("transform_restrict", &["transform", "restrict", "data/restrict.gp"]),
    ("transform_mt", &["transform", "mt", "data/rc_ab_ac.mon"]),
    ("transform_mqw", &["transform", "mqw", "--words", "b, b^-1, z", "data/free_bz.gp"]),
    ("transform_hnn", &["transform", "hnn", "--words", "a", "data/free_ab.gp"]),
    ("eq_free", &["eq", "--structure", "free", "a b b^-1", "a"]),
    ("eq_cyclic", &["eq", "--structure", "cyclic:3", "a a a a", "a"]),
    ("eq_free_product", &["eq", "--structure", "fp:a=cyclic:3,s t=free", "s a a a s^-1", "1"]),
    ("eq_hnn", &["eq", "--structure", "hnn:a b/z/a", "z^-1 b z", "b"]),
    ("eq_unknown", &["eq", "--structure", "free", "--steps", "0", "a", "a"]),
    ("munn", &["munn", "b a a^-1 b^-1 a"]),
    ("ball_group", &["ball", "--radius", "3", "a, a^-1"]),
    ("ball_monogenic", &["ball", "--radius", "4", "a, a a"]),
    ("units", &["units", "a, a^-1, t, t a t^-1, t a^-1 t^-1"]),
    ("schutz_trivial", &["schutz", "a, a^-1, t", "t"]),
    ("schutz_given_units", &["schutz", "--units", "a, t a t^-1", "a, a^-1, t, t a t^-1, t a^-1 t^-1", "t"]),
    ("prove_group", &["prove", "data/z3.gp", "a a", "a^-1"]),
    ("prove_rejected", &["prove", "data/commute.mon", "a", "b"]),
    ("prove_rc", &["prove", "--rc", "data/rc_ab_b.mon", "a", "1"]),
    ("prove_rc_unknown", &["prove", "--rc", "--steps", "1000", "data/rc_ab_ac.mon", "b", "c"]),
    ("usage", &["frobnicate"]),
];

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Command line, stdout, stderr and exit code of one run from the workspace root.
pub fn transcript(args: &[&str]) -> String {
    let output = Command::new(env!("CARGO_BIN_EXE_prefmon"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("spawn prefmon");
    let quoted: Vec<String> =
        args.iter().map(|a| if a.contains([' ', ',']) || a.is_empty() { format!("\"{a}\"") } else { a.to_string() }).collect();
    let mut text = format!("$ prefmon {}\n", quoted.join(" "));
    text.push_str(&String::from_utf8_lossy(&output.stdout));
    let stderr = String::from_utf8_lossy(&output.stderr);
    if !stderr.is_empty() {
        text.push_str("--- stderr\n");
        text.push_str(&stderr);
    }
    text.push_str(&format!("--- exit {}\n", output.status.code().unwrap_or(-1)));
    text
}

/// Compares every case with its golden file; rewrites them when `update`.
pub fn check_all(update: bool) -> Vec<(&'static str, Result<(), String>)> {
    CASES
        .iter()
        .map(|&(name, args)| {
            let path = golden_dir().join(format!("{name}.txt"));
            let actual = transcript(args);
            if update {
                std::fs::write(&path, &actual).expect("write golden file");
                return (name, Ok(()));
            }
            let result = match std::fs::read_to_string(&path) {
                Ok(expected) if expected == actual => Ok(()),
                Ok(expected) => Err(format!("mismatch\n--- expected\n{expected}--- actual\n{actual}")),
                Err(e) => Err(format!("{}: {e}", path.display())),
            };
            (name, result)
        })
        .collect()
}
