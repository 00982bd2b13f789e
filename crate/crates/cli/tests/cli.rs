use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn btorsion(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btorsion")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn workdir(files: &[(&str, &str)]) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

const TWO_TERM: &str = r#"{"dims":[1,1],"differentials":[[[[3,0]]]],"grams":[[[[1,0]]],[[[1,0]]]]}"#;
const TREFOIL: &str = r#"{"generators":["x","y"],"relators":["x y x Y X Y"]}"#;

#[test]
fn finite_two_term() {
    let dir = workdir(&[("two_term_a3.json", TWO_TERM)]);
    let o = btorsion(&["torsion", "finite", "two_term_a3.json"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("0.111111"), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("+ 0i"));
}

#[test]
fn trefoil_polynomial() {
    let dir = workdir(&[("trefoil.json", TREFOIL)]);
    let o = btorsion(&["alexander", "trefoil.json"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "t^2 - t + 1");
}

#[test]
fn schema_error_exits_two() {
    let dir = workdir(&[("bad.json", r#"{"dims":[1,1],"differentials":"oops","grams":[]}"#)]);
    let o = btorsion(&["torsion", "finite", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("differentials"));
}

#[test]
fn missing_file_exits_two() {
    let dir = workdir(&[]);
    assert_eq!(btorsion(&["alexander", "absent.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_one() {
    // Trivial holonomy has cohomology, outside the comparison's domain.
    let dir = workdir(&[("c.json", r#"{"lambda":[1,0]}"#)]);
    assert_eq!(btorsion(&["spectral", "c.json", "--op", "bz"], dir.path()).status.code(), Some(1));
}

#[test]
fn csv_replay_is_byte_identical() {
    let dir = workdir(&[("two_term_a3.json", TWO_TERM), ("c.json", r#"{"lambda":[2,0],"N":32}"#)]);
    for args in
        [vec!["--seed", "11", "torsion", "finite", "two_term_a3.json"], vec!["spectral", "c.json", "--op", "spectrum"]]
    {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let name = format!("run{run}.csv");
            let mut full = args.clone();
            full.extend(["--out", &name]);
            assert!(btorsion(&full, dir.path()).status.success());
            outputs.push(fs::read(dir.path().join(&name)).unwrap());
        }
        assert_eq!(outputs[0], outputs[1]);
        assert!(outputs[0].starts_with(b"experiment,params,value_re,value_im,tolerance,pass\n"));
    }
}

#[test]
fn bz_row_passes() {
    let dir = workdir(&[("c.json", r#"{"lambda":[2,0],"phi":{"kind":"sin","amp":0.2}}"#)]);
    let o = btorsion(&["spectral", "c.json", "--op", "bz", "--out", "bz.csv"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("bz.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("bz,"));
    assert!(row.ends_with(",true"));
}

#[test]
fn json_output() {
    let dir = workdir(&[("c.json", r#"{"lambda":[2,0]}"#)]);
    let o = btorsion(&["spectral", "c.json", "--op", "zetadet", "--out", "z.json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("z.json")).unwrap()).unwrap();
    // (λ - 1)² / λ at λ = 2
    assert!((v[0]["value"][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v[0]["value"][1].as_f64(), Some(0.0));
}

#[test]
fn turaev_on_circle() {
    let dir = workdir(&[("m.json", r#"{"circle":{"pairs":2,"lambda":[3,0]}}"#)]);
    let o = btorsion(&["torsion", "turaev", "m.json", "--euler", "c0:0,0,0,0"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("Euler class"));
}
