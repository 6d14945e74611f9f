use std::fs;
use std::path::Path;

use affinet_core::experiments::zachary;
use affinet_core::Partition;
use clap::CommandFactory;

use super::*;

fn call(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let mut argv = vec!["affinet"];
    argv.extend_from_slice(args);
    let code = execute(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn value(output: &str, key: &str) -> f64 {
    output
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {output:?}"))
        .parse()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_documents_every_flag() {
    assert_eq!(call(&["--help"]).0, 0);
    let mut cmd = Cli::command();
    for sub in ["affinity", "detect", "sweep", "eval"] {
        assert_eq!(call(&[sub, "--help"]).0, 0, "{sub}");
        let sc = cmd.find_subcommand_mut(sub).unwrap();
        let help = sc.render_long_help().to_string();
        for arg in sc.get_arguments() {
            if let Some(long) = arg.get_long() {
                assert!(help.contains(&format!("--{long}")), "{sub} --{long}");
                assert!(arg.get_help().is_some() || arg.get_long_help().is_some(), "{sub} --{long} undocumented");
            }
        }
    }
    assert_eq!(call(&[]).0, 1);
    assert_eq!(call(&["detect"]).0, 1);
}

#[test]
fn detect_zachary_louvain() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let (code, text) = call(&["detect", "--in", "zachary", "--algo", "louvain", "--out", path_str(&out)]);
    assert_eq!(code, 0);
    assert!((value(&text, "modularity") - 0.41).abs() < 0.02, "{text}");
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("node_label,community_id\n1,"));
    assert_eq!(csv.lines().count(), 35);
    let (code_again, text_again) = call(&["detect", "--in", "zachary", "--algo", "louvain", "--out", path_str(&out)]);
    assert_eq!((code_again, text_again), (0, text));
    assert_eq!(fs::read_to_string(&out).unwrap(), csv);
}

#[test]
fn detect_on_affinity_network_and_dendrogram() {
    let dir = tempfile::tempdir().unwrap();
    let dendro = dir.path().join("d.csv");
    let (code, text) = call(&[
        "detect",
        "--in",
        "zachary",
        "--algo",
        "greedy",
        "--fn",
        "combine(bf,bcf,alpha=0.25,beta=0.50)",
        "--dendrogram",
        path_str(&dendro),
    ]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("affinity: combine(bf,bcf,alpha=0.25,beta=0.50,sym=mean)"));
    assert!(value(&text, "modularity_adjacency").is_finite());
    let d = fs::read_to_string(&dendro).unwrap();
    assert!(d.starts_with("snapshot_index,k,modularity\n0,34,"));
    assert_eq!(d.lines().count(), 1 + 34);
}

#[test]
fn detect_errors_map_to_exit_codes() {
    assert_eq!(call(&["detect", "--in", "zachary", "--algo", "infomap"]).0, 1);
    assert_eq!(call(&["detect", "--in", "no/such/file.txt", "--algo", "louvain"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let edgeless = dir.path().join("edgeless.txt");
    fs::write(&edgeless, "a\nb\nc\n").unwrap();
    assert_eq!(call(&["detect", "--in", path_str(&edgeless), "--algo", "louvain"]).0, 3);
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "a b -1\n").unwrap();
    assert_eq!(call(&["detect", "--in", path_str(&bad), "--algo", "louvain"]).0, 1);
}

#[test]
fn affinity_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.csv");
    let spec = "combine(bf,bcf,alpha=0.25,beta=0.50,sym=mean)";
    assert_eq!(call(&["affinity", "--in", "zachary", "--fn", spec, "--out", path_str(&m)]).0, 0);
    let text = fs::read_to_string(&m).unwrap();
    assert_eq!(text.lines().count(), 35);

    let (code, edges) = call(&["affinity", "--in", "zachary", "--fn", "bf", "--format", "edgelist"]);
    assert_eq!(code, 0);
    let g = affinet_core::io::parse_edgelist(&edges).unwrap();
    assert_eq!(g.edge_count(), 78);
    assert!(edges.starts_with("# bf(sym=mean)\n"));

    assert_eq!(
        call(&["affinity", "--in", "zachary", "--fn", "combine(bf,bcf,alpha=0.7,beta=0.7,sym=mean)"]).0,
        1
    );
    assert_eq!(call(&["affinity", "--in", "zachary", "--fn", "bf(sym=max)", "--sym", "min"]).0, 1);
    assert_eq!(call(&["affinity", "--in", "missing.gml", "--fn", "bf"]).0, 2);
    assert_eq!(call(&["affinity", "--in", "zachary", "--fn", "bf", "--out", "/no/such/dir/m.csv"]).0, 2);
}

#[test]
fn sweep_row_counts_and_validation() {
    let (code, csv) = call(&["sweep", "--datasets", "zachary", "--algos", "all", "--step", "0.25"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().count(), 1 + 14 * 3);
    assert_eq!(call(&["sweep", "--step", "0"]).0, 1);
    assert_eq!(call(&["sweep", "--algos", "infomap"]).0, 1);
    assert_eq!(call(&["sweep", "--pair", "bf"]).0, 1);
    assert_eq!(call(&["sweep", "--jobs", "0"]).0, 1);
}

#[test]
fn sweep_baseline_rows_come_first() {
    let (code, csv) = call(&["sweep", "--step", "1", "--baseline"]);
    assert_eq!(code, 0);
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 3 + 2 * 3);
    for line in &lines[1..4] {
        assert!(line.starts_with("zachary,") && line.contains(",adjacency,,,"), "{line}");
    }
}

#[test]
fn sweep_config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    fs::write(&cfg, "# quarter grid\nstep = 0.25\nalgos = louvain\nseed = 7\n").unwrap();
    let (code, csv) = call(&["sweep", "--config", path_str(&cfg)]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().count(), 1 + 14);
    let (code, csv) = call(&["sweep", "--config", path_str(&cfg), "--step", "0.5"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().count(), 1 + 5);

    fs::write(&cfg, "stepsize = 0.25\n").unwrap();
    assert_eq!(call(&["sweep", "--config", path_str(&cfg)]).0, 1);
    assert_eq!(call(&["sweep", "--config", path_str(&dir.path().join("none.cfg"))]).0, 2);
}

#[test]
fn sweep_missing_dataset_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--datasets", "dolphin", "--step", "1", "--data-dir", path_str(dir.path())];
    assert_eq!(call(&args).0, 2);
    assert_eq!(call(&["sweep", "--datasets", "karate"]).0, 1);
}

#[test]
fn sweep_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let md = dir.path().join("summary.md");
    for (jobs, out) in [("1", &a), ("8", &b)] {
        let args = ["sweep", "--step", "0.25", "--jobs", jobs, "--out", path_str(out), "--markdown", path_str(&md)];
        assert_eq!(call(&args).0, 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(fs::read_to_string(&md).unwrap().contains("| zachary | Louvain |"));
}

#[test]
fn eval_against_ground_truth() {
    let dir = tempfile::tempdir().unwrap();
    let d = zachary();
    let truth = dir.path().join("truth.csv");
    fs::write(&truth, Partition::from(&d.labels).to_csv(&d.graph)).unwrap();

    let (code, text) = call(&["eval", "--partition", path_str(&truth), "--truth", "zachary"]);
    assert_eq!(code, 0);
    assert_eq!(value(&text, "nmi"), 1.0);
    assert!((value(&text, "modularity") - 0.358235).abs() < 1e-6);

    let (code, text) = call(&["eval", "--partition", path_str(&truth), "--truth", path_str(&truth)]);
    assert_eq!((code, value(&text, "nmi")), (0, 1.0));

    let greedy = dir.path().join("greedy.csv");
    assert_eq!(call(&["detect", "--in", "zachary", "--algo", "greedy", "--out", path_str(&greedy)]).0, 0);
    let (code, text) = call(&["eval", "--partition", path_str(&greedy), "--truth", "zachary"]);
    assert_eq!(code, 0);
    assert!((0.0..=1.0).contains(&value(&text, "nmi")));

    let partial = dir.path().join("partial.csv");
    fs::write(&partial, "node_label,community_id\n1,0\n2,0\n").unwrap();
    assert_eq!(call(&["eval", "--partition", path_str(&partial), "--truth", "zachary"]).0, 1);
    let foreign = dir.path().join("foreign.csv");
    fs::write(&foreign, "node_label,community_id\nx,0\n").unwrap();
    assert_eq!(call(&["eval", "--partition", path_str(&foreign), "--truth", path_str(&partial)]).0, 1);
}
