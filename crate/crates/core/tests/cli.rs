use std::path::Path;
use std::process::{Command, Output};

fn dynsep(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynsep")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_then_run_every_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dynsep(dir.path(), &["--seed", "4", "gen", "gnp", "--n", "24", "--p", "0.3", "-o", "g.txt", "--trace", "t.jsonl"]);
    assert!(gen.status.success());
    let text = std::fs::read_to_string(dir.path().join("g.txt")).unwrap();
    let header: Vec<usize> = text.lines().next().unwrap().split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(header[0], 24);
    assert_eq!(text.lines().count(), header[1] + 1);

    for alg in ["mis", "decr-triangle", "clique-pivot", "clique3", "mccc"] {
        let o = dynsep(dir.path(), &["mccc", "g.txt", "--trace", "t.jsonl"].map(|a| if a == "mccc" { alg } else { a }));
        assert!(o.status.success(), "{alg}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("mismatches=0"), "{alg}: {}", stdout(&o));
    }
}

#[test]
fn csv_is_deterministic_up_to_timing() {
    let dir = tempfile::tempdir().unwrap();
    assert!(dynsep(dir.path(), &["gen", "k4-lattice", "--rows", "2", "--cols", "3", "-o", "g.txt"]).status.success());
    let run = |name: &str| {
        let o = dynsep(dir.path(), &["--seed", "9", "--csv", name, "clique3", "g.txt", "--policy", "kill-active"]);
        assert!(o.status.success());
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        // Drop the trailing wall-clock column.
        text.lines().map(|l| l.rsplit_once(',').unwrap().0.to_owned()).collect::<Vec<_>>()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert!(a[0].starts_with("seed,step,op,u,v,output"));
    assert!(a.len() > 1);
    assert_eq!(a, b);
}

#[test]
fn reductions_from_files() {
    let dir = tempfile::tempdir().unwrap();
    assert!(dynsep(dir.path(), &["gen", "tripartite", "--n", "30", "--p", "0.4", "-o", "t.txt"]).status.success());
    let o = dynsep(dir.path(), &["--csv", "aetd.csv", "reduce", "aetd", "t.txt"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = std::fs::read_to_string(dir.path().join("aetd.csv")).unwrap();
    assert!(rows.starts_with("reduction,item,answer,expected"));

    std::fs::write(dir.path().join("m.txt"), "0100\n0000\n0010\n0000\n").unwrap();
    let o = dynsep(dir.path(), &["reduce", "oumv", "m.txt", "--queries", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // An online batch holds at most n queries.
    assert_eq!(dynsep(dir.path(), &["reduce", "oumv", "m.txt", "--queries", "8"]).status.code(), Some(2));

    std::fs::write(dir.path().join("c5.txt"), "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n").unwrap();
    for which in ["tri-fdmc", "tri-incmis"] {
        let o = dynsep(dir.path(), &["reduce", which, "c5.txt"]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("triangle=false"), "{which}: {}", stdout(&o));
    }
}

#[test]
fn errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "3 1\n0 0\n").unwrap();
    let o = dynsep(dir.path(), &["stats", "bad.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));

    std::fs::write(dir.path().join("g.txt"), "3 1\n0 1\n").unwrap();
    let o = dynsep(dir.path(), &["mis", "g.txt", "--policy", "kill-active"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(dynsep(dir.path(), &["stats", "missing.txt"]).status.code(), Some(2));
}

#[test]
fn bench_repeats_over_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = dynsep(dir.path(), &["--csv", "b.csv", "bench", "mis", "gnp", "--n", "16", "--reps", "3", "--steps", "50"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("algorithm=mis")).count(), 3);
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 51);
}
