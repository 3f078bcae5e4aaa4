use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn sstkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sstkit"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sstkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn eval_prints_output() {
    for word in ["0111", "0 1 1 1", "0,1,1,1"] {
        let o = sstkit(&["eval", &fixture("t1.sst"), "--word", word]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), "e e e f f f");
    }
    let o = sstkit(&["eval", &fixture("t1.sst"), "--word", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not in the domain"));
}

#[test]
fn equivalence_exit_codes() {
    let (t1, t2) = (fixture("t1.sst"), fixture("t2.sst"));
    assert_eq!(sstkit(&["equiv", &t1, &t1]).status.code(), Some(0));
    assert_eq!(sstkit(&["equiv", &t1, &t2]).status.code(), Some(0));
    let bounded = sstkit(&["equiv", &t1, &t2, "--engine", "bounded", "--max-len", "6"]);
    assert_eq!(bounded.status.code(), Some(2));
    assert!(stdout(&bounded).contains("valid up to 6"));
}

#[test]
fn counterexample_exits_one_and_json_parses() {
    let mutated = std::fs::read_to_string(fixture("example.hdt0l"))
        .unwrap()
        .replace("c -> a c b", "c -> b c a");
    let path = scratch("mutated.hdt0l");
    std::fs::write(&path, mutated).unwrap();
    let o = sstkit(&["hdt0l", "decide", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdict"], "counterexample");
    assert_eq!(report["witness"]["kind"], "sequence");

    let o = sstkit(&["hdt0l", "decide", &fixture("example.hdt0l"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdict"], "holds");
}

#[test]
fn reduce_round_trip_through_files() {
    let (out1, out2) = (scratch("r1.sst"), scratch("r2.sst"));
    let o = sstkit(&[
        "reduce",
        "to-sst",
        &fixture("example.hdt0l"),
        "-o",
        out1.to_str().unwrap(),
        out2.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&out1).unwrap(),
        std::fs::read_to_string(fixture("t1.sst")).unwrap()
    );
    let product = scratch("product.sst");
    let o = sstkit(&[
        "product",
        out1.to_str().unwrap(),
        out2.to_str().unwrap(),
        "-o",
        product.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        sstkit(&["diagonal", product.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let o = sstkit(&["reduce", "to-hdt0l", product.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("hdt0l"));
}

#[test]
fn input_errors_exit_three() {
    assert_eq!(sstkit(&["equiv", "--bogus"]).status.code(), Some(3));
    assert_eq!(
        sstkit(&["eval", "/nonexistent/file.sst", "--word", "0"])
            .status
            .code(),
        Some(3)
    );
    let bad = scratch("bad.sst");
    std::fs::write(&bad, "sst\ninput: 0 1\nstates: q0\n").unwrap();
    let o = sstkit(&["copyless", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
    let o = sstkit(&["eval", &fixture("t1.sst"), "--word", "0 2"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(sstkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn copyless_reports_duplicated_variable() {
    let o = sstkit(&["copyless", &fixture("t1.sst")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not copyless"));
    assert_eq!(
        sstkit(&["copyless", &fixture("t2.sst")]).status.code(),
        Some(1)
    );
    let swap = scratch("swap.sst");
    std::fs::write(
        &swap,
        "sst\ninput: a\noutput: e\nstates: q\ninitial: q\nfinal: q\nvars: X Y\n\
         trans: q a q { X := Y e ; Y := X }\nout: q = X Y\n",
    )
    .unwrap();
    let o = sstkit(&["copyless", swap.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}
