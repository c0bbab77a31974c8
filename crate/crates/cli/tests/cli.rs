//! End-to-end tests of the `moodnet` binary: fixture datasets go in, CSV/TSV
//! files come out, with documented exit codes and byte-stable outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn moodnet() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moodnet"))
}

fn run(args: &[&str]) -> Output {
    moodnet().args(args).output().expect("binary runs")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr),
    );
}

/// A four-user star: user 1 is friends with 2, 3, and 4. Post tallies put
/// the center at score +0.1 and the leaves at −0.2, −0.3, −0.4, so the
/// center scores above the leaf average while every leaf trails the center:
/// 3 of 4 comparisons hold.
fn write_star_fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let friends = dir.join("friends.tsv");
    fs::write(&friends, "1\t2\n1\t3\n1\t4\n").unwrap();
    let mut posts = String::new();
    let mut add = |user: u64, happy: usize, sad: usize| {
        for i in 0..happy {
            posts.push_str(&format!("{user}\t2004-02-{:02}\thappy\n", i % 28 + 1));
        }
        for i in 0..sad {
            posts.push_str(&format!("{user}\t2004-03-{:02}\tsad\n", i % 28 + 1));
        }
    };
    add(1, 11, 9); // (11 - 9) / 20 = +0.1
    add(2, 2, 3); // (2 - 3) / 5 = -0.2
    add(3, 7, 13); // (7 - 13) / 20 = -0.3
    add(4, 3, 7); // (3 - 7) / 10 = -0.4
    let posts_path = dir.join("posts.tsv");
    fs::write(&posts_path, posts).unwrap();
    (friends, posts_path)
}

fn star_paradox_args(fixture: &Path, out: &Path, extra: &[&str]) -> Vec<String> {
    let (friends, posts) = (fixture.join("friends.tsv"), fixture.join("posts.tsv"));
    let mut args = vec![
        "paradox".to_string(),
        "general".to_string(),
        "--friends".to_string(),
        friends.display().to_string(),
        "--posts".to_string(),
        posts.display().to_string(),
        "--connection".to_string(),
        "friends".to_string(),
        "--agg".to_string(),
        "mean".to_string(),
        "--out".to_string(),
        out.display().to_string(),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    args
}

#[test]
fn paradox_general_on_star_reports_three_quarters() {
    let fixture = tempfile::tempdir().unwrap();
    write_star_fixture(fixture.path());
    let out = tempfile::tempdir().unwrap();
    let args = star_paradox_args(
        fixture.path(),
        out.path(),
        &["--null-reps", "1000", "--seed", "7"],
    );
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let result = run(&argv);
    assert_success(&result);

    let csv = fs::read_to_string(out.path().join("paradox.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "kind,connection,aggregate,n_holds,n_does_not_hold,n_unknown,total,\
         magnitude,verdict,null_expected,surprise,empirical_p"
    );
    let row = lines.next().unwrap();
    assert!(
        row.starts_with("general,friends,mean,3,1,0,4,0.750000,strongly-holds,"),
        "unexpected row: {row}"
    );
    // null columns are populated when replicates are requested
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 12);
    assert!(!fields[9].is_empty() && !fields[10].is_empty() && !fields[11].is_empty());

    let manifest = fs::read_to_string(out.path().join("manifest.json")).unwrap();
    assert!(manifest.contains("\"paradox.csv\""));
    assert!(manifest.contains("\"seeds\""));
}

#[test]
fn null_columns_are_blank_when_replicates_disabled() {
    let fixture = tempfile::tempdir().unwrap();
    write_star_fixture(fixture.path());
    let out = tempfile::tempdir().unwrap();
    let args = star_paradox_args(fixture.path(), out.path(), &["--null-reps", "0"]);
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_success(&run(&argv));
    let csv = fs::read_to_string(out.path().join("paradox.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.ends_with(",,,"), "expected empty null columns: {row}");
}

#[test]
fn swb_scores_match_post_tallies() {
    let fixture = tempfile::tempdir().unwrap();
    write_star_fixture(fixture.path());
    let out = tempfile::tempdir().unwrap();
    let result = run(&[
        "swb",
        "--posts",
        fixture.path().join("posts.tsv").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_success(&result);
    let csv = fs::read_to_string(out.path().join("swb.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "user,n_positive,n_negative,n_neutral,swb,polarity");
    assert_eq!(lines[1], "1,11,9,0,0.100000,positive");
    assert_eq!(lines[2], "2,2,3,0,-0.200000,negative");
    assert_eq!(lines[3], "3,7,13,0,-0.300000,negative");
    assert_eq!(lines[4], "4,3,7,0,-0.400000,negative");
}

#[test]
fn synth_er_with_zero_probability_emits_empty_edge_file() {
    let out = tempfile::tempdir().unwrap();
    let result = run(&[
        "synth",
        "er",
        "--n",
        "100",
        "--p",
        "0",
        "--seed",
        "1",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_success(&result);
    assert_eq!(fs::read_to_string(out.path().join("friends.tsv")).unwrap(), "");
    assert_eq!(fs::read_to_string(out.path().join("follows.tsv")).unwrap(), "");
}

#[test]
fn synth_output_feeds_back_into_the_pipeline() {
    let data = tempfile::tempdir().unwrap();
    let result = run(&[
        "synth",
        "planted",
        "--k",
        "3",
        "--size",
        "10",
        "--p-intra",
        "0.8",
        "--seed",
        "5",
        "--out",
        data.path().to_str().unwrap(),
    ]);
    assert_success(&result);
    let out = tempfile::tempdir().unwrap();
    let result = run(&[
        "friendship",
        "--friends",
        data.path().join("friends.tsv").to_str().unwrap(),
        "--communities",
        data.path().join("communities.tsv").to_str().unwrap(),
        "--null-reps",
        "0",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_success(&result);
    let csv = fs::read_to_string(out.path().join("paradox.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("friendship,friends,mean,"));
}

/// Identical invocation (inputs, flags, seed) must reproduce every data
/// output byte for byte; only the manifest may differ (wall-clock field).
#[test]
fn repeated_runs_are_byte_identical() {
    let fixture = tempfile::tempdir().unwrap();
    write_star_fixture(fixture.path());
    let mut snapshots: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    for _ in 0..2 {
        let out = tempfile::tempdir().unwrap();
        let args = star_paradox_args(
            fixture.path(),
            out.path(),
            &["--null-reps", "500", "--seed", "7"],
        );
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_success(&run(&argv));
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(out.path())
            .unwrap()
            .map(|e| e.unwrap())
            .filter(|e| e.file_name() != "manifest.json")
            .map(|e| {
                (
                    e.file_name().to_string_lossy().into_owned(),
                    fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        snapshots.push(files);
    }
    assert_eq!(snapshots[0], snapshots[1]);
}

#[test]
fn every_subcommand_documents_itself() {
    for sub in [
        "ingest",
        "swb",
        "activity",
        "paradox",
        "sweep",
        "correlate",
        "trend",
        "friendship",
        "activity-paradox",
        "synth",
        "theorem1",
        "features",
        "predict",
    ] {
        let out = run(&[sub, "--help"]);
        assert!(
            out.status.success(),
            "{sub} --help exited {:?}",
            out.status.code()
        );
        assert!(!out.stdout.is_empty());
    }
    assert_success(&run(&["--help"]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["paradox", "general", "--bogus-flag"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-subcommand"]).status.code(), Some(2));
    assert_eq!(run(&["paradox", "not-a-kind"]).status.code(), Some(2));
}

#[test]
fn io_failures_exit_one() {
    let out = tempfile::tempdir().unwrap();
    let result = run(&[
        "paradox",
        "general",
        "--friends",
        "/nonexistent/friends.tsv",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1));
    assert!(!result.stderr.is_empty());
}

#[test]
fn features_and_predict_run_on_planted_data() {
    // planted communities with block-level sentiment make a small end-to-end
    // prediction exercise
    let data = tempfile::tempdir().unwrap();
    let result = run(&[
        "synth",
        "planted",
        "--k",
        "4",
        "--size",
        "20",
        "--p-intra",
        "0.4",
        "--p-inter",
        "0.02",
        "--seed",
        "11",
        "--out",
        data.path().to_str().unwrap(),
    ]);
    assert_success(&result);

    // hand-written posts: even communities lean happy, odd lean sad
    let mut posts = String::new();
    for u in 0..80u64 {
        let (happy, sad) = if (u / 20) % 2 == 0 { (3, 1) } else { (1, 3) };
        for i in 0..happy {
            posts.push_str(&format!("{u}\t2004-05-{:02}\thappy\n", i + 1));
        }
        for i in 0..sad {
            posts.push_str(&format!("{u}\t2004-06-{:02}\tsad\n", i + 1));
        }
    }
    fs::write(data.path().join("posts.tsv"), posts).unwrap();

    let out = tempfile::tempdir().unwrap();
    let result = run(&[
        "features",
        "--friends",
        data.path().join("friends.tsv").to_str().unwrap(),
        "--posts",
        data.path().join("posts.tsv").to_str().unwrap(),
        "--communities",
        data.path().join("communities.tsv").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_success(&result);
    let features = fs::read_to_string(out.path().join("features.csv")).unwrap();
    assert_eq!(features.lines().count(), 81); // header + 80 labeled users
    assert!(features.lines().next().unwrap().starts_with("user,"));
    assert!(features.lines().next().unwrap().ends_with(",label"));

    let result = run(&[
        "predict",
        "--friends",
        data.path().join("friends.tsv").to_str().unwrap(),
        "--posts",
        data.path().join("posts.tsv").to_str().unwrap(),
        "--communities",
        data.path().join("communities.tsv").to_str().unwrap(),
        "--folds",
        "4",
        "--seed",
        "3",
        "--groups",
        "general,community",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_success(&result);
    let eval: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("eval.json")).unwrap()).unwrap();
    assert_eq!(eval["folds"], 4);
    assert_eq!(eval["rows"], 80);
    for group in ["general", "community", "all-sentiment", "all"] {
        let auc = eval["groups"][group]["auc"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&auc), "{group} auc {auc}");
    }
}

#[test]
fn threads_flag_does_not_change_outputs() {
    let fixture = tempfile::tempdir().unwrap();
    write_star_fixture(fixture.path());
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = tempfile::tempdir().unwrap();
        let args = star_paradox_args(
            fixture.path(),
            out.path(),
            &["--null-reps", "500", "--seed", "9", "--threads", threads],
        );
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_success(&run(&argv));
        outputs.push(fs::read(out.path().join("paradox.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
