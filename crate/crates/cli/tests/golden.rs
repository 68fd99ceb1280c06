mod support;

#[test]
fn golden_transcripts() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let failures: Vec<String> = support::check_all(update)
        .into_iter()
        .filter_map(|(name, r)| r.err().map(|e| format!("{name}: {e}")))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn repeated_runs_are_identical() {
    for &(_, args) in support::CASES {
        assert_eq!(support::transcript(args), support::transcript(args));
    }
}

#[test]
fn every_subcommand_has_a_golden_case() {
    let subcommands = ["parse", "print", "prefixes", "ru-prefixes", "transform", "eq", "munn", "ball", "units", "schutz", "prove"];
    for sub in subcommands {
        assert!(support::CASES.iter().any(|(_, args)| args[0] == sub), "{sub}");
    }
    for t in ["mon2gp", "star", "freegen", "restrict", "mt", "mqw", "hnn"] {
        assert!(support::CASES.iter().any(|(_, args)| args[0] == "transform" && args[1] == t), "{t}");
    }
}
