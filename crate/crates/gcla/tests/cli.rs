//! End-to-end tests of the `gcla` binary: generation, multiplication,
//! verification (including mutation detection), benchmarks, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gcla(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcla"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_ip3_multiply_verify_roundtrip() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gcla(
        &["gen", "ip3", "--A", "1", "--B", "2", "--C", "3", "--U", "3", "--out", "b"],
        tmp.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("kind ip3"));
    assert!(text.contains("N 6"));
    assert!(text.contains("expected 0 YES"));

    let manifest = tmp.path().join("b/bundle.manifest");
    assert!(manifest.exists());

    let out = gcla(&["multiply", "--manifest", "b/bundle.manifest"], tmp.path());
    assert!(out.status.success());
    let ip: u64 = stdout(&out).trim().parse().unwrap();
    assert!(ip >= 1);

    let out = gcla(&["verify", "b/bundle.manifest"], tmp.path());
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("all"));

    // direct vector files too
    let out = gcla(
        &["multiply", "--a", "b/vector_0.slp", "--b", "b/vector_1.slp", "--strategy", "rle"],
        tmp.path(),
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), ip.to_string());
}

#[test]
fn gen_ipk_and_verify() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gcla(
        &[
            "gen", "ipk", "--set", "1", "--set", "1", "--set", "1", "--set", "3", "--U", "3",
            "--out", "k",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains("expected 0 YES")); // 1+1+1 = 3
    let out = gcla(&["multiply", "--manifest", "k/bundle.manifest"], tmp.path());
    assert!(out.status.success());
    assert!(stdout(&out).trim().parse::<u64>().unwrap() >= 1);
    let out = gcla(&["verify", "k/bundle.manifest"], tmp.path());
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn gen_rejects_element_out_of_universe() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gcla(
        &["gen", "ip3", "--A", "9", "--B", "2", "--C", "3", "--U", "3", "--out", "b"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn multiply_dimension_mismatch_fails() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("a.slp"), "slp v1 1 0\nT 0\n").unwrap();
    fs::write(tmp.path().join("b.slp"), "slp v1 2 1\nT 0\nC 0 0\n").unwrap();
    let out = gcla(&["multiply", "--a", "a.slp", "--b", "b.slp"], tmp.path());
    assert_eq!(out.status.code(), Some(2));

    // zero vectors multiply to 0
    fs::write(tmp.path().join("z.rle"), "rle v1 1\n0 2\n").unwrap();
    let out = gcla(&["multiply", "--a", "b.slp", "--b", "z.rle"], tmp.path());
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn verify_detects_mutation() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gcla(
        &["gen", "ip3", "--A", "1,2", "--B", "2,3", "--C", "3,5", "--U", "6", "--out", "b"],
        tmp.path(),
    );
    assert!(out.status.success());
    let victim = tmp.path().join("b/vector_1.slp");
    let text = fs::read_to_string(&victim).unwrap();
    fs::write(&victim, text.replacen("T 0", "T 1", 1)).unwrap();
    let out = gcla(&["verify", "b/bundle.manifest"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    assert!(stdout(&out).contains("vector_1.slp"));
}

#[test]
fn verify_empty_manifest_warns_and_passes() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("bundle.manifest"), "manifest v1 ip3\n").unwrap();
    let out = gcla(&["verify", "bundle.manifest"], tmp.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("WARN"));
}

#[test]
fn generation_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(
        tmp.path().join("inst.sum"),
        "sum v1 3 2 8\n1 5\n2 3\n4 8\n",
    )
    .unwrap();
    for dir in ["x", "y"] {
        let out = gcla(
            &["gen", "selfred", "--inst", "inst.sum", "--s", "1", "--out", dir, "--seed", "7"],
            tmp.path(),
        );
        assert!(out.status.success(), "{out:?}");
        let out = gcla(
            &["gen", "unired", "--inst", "inst.sum", "--trials", "6", "--out", dir, "--seed", "7"],
            tmp.path(),
        );
        // unired overwrites its own files in the same dir; keep bundles apart
        assert!(out.status.success(), "{out:?}");
    }
    let list = |d: &str| -> Vec<String> {
        let mut names: Vec<String> = fs::read_dir(tmp.path().join(d))
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        names
    };
    assert_eq!(list("x"), list("y"));
    for name in list("x") {
        let a = fs::read(tmp.path().join("x").join(&name)).unwrap();
        let b = fs::read(tmp.path().join("y").join(&name)).unwrap();
        assert_eq!(a, b, "file {name} differs between identical runs");
    }
}

#[test]
fn selfred_and_unired_verify() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("inst.sum"), "sum v1 3 3 9\n1 2 3\n2 4 6\n3 5 9\n").unwrap();
    let out = gcla(
        &["gen", "selfred", "--inst", "inst.sum", "--s", "2", "--out", "sr"],
        tmp.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let out = gcla(&["verify", "sr/bundle.manifest"], tmp.path());
    assert!(out.status.success(), "{}", stdout(&out));

    let out = gcla(
        &["gen", "unired", "--inst", "inst.sum", "--trials", "8", "--out", "ur", "--seed", "3"],
        tmp.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let out = gcla(&["verify", "ur/bundle.manifest"], tmp.path());
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn mv_bundle_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("i0.sum"), "sum v1 3 1 1 3\n1\n1\n1\n").unwrap();
    fs::write(tmp.path().join("i1.sum"), "sum v1 3 1 1 3\n1\n1\n1\n").unwrap();
    let out = gcla(
        &["gen", "mv", "--inst", "i0.sum", "--inst", "i1.sum", "--out", "mv"],
        tmp.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let out = gcla(&["multiply", "--manifest", "mv/bundle.manifest"], tmp.path());
    assert!(out.status.success());
    let entries: Vec<u64> =
        stdout(&out).lines().map(|l| l.trim().parse().unwrap()).collect();
    assert_eq!(entries, vec![1, 1]); // 1+1+1 = 3 in both instances
    let out = gcla(&["verify", "mv/bundle.manifest"], tmp.path());
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn mm_bundle_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gcla(&["gen", "mm", "--ell", "2", "--out", "mm"], tmp.path());
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("N 20"));
    assert!(text.contains("distinct-substrings 16"));
    let out = gcla(&["verify", "mm/bundle.manifest"], tmp.path());
    assert!(out.status.success(), "{}", stdout(&out));

    let out = gcla(&["info", "mm/a_strong.slp", "mm/a_rows.rlemat"], tmp.path());
    assert!(out.status.success());
    let info = stdout(&out);
    assert!(info.contains("N=400")); // 20 x 20 flattening
    assert!(info.contains("rlemat"));
}

#[test]
fn bench_writes_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let out = gcla(
        &[
            "bench",
            "--family",
            "alternating",
            "--sizes",
            "256,1024",
            "--strategy",
            "rle",
            "--reps",
            "3",
            "--out",
            "bench.csv",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let csv = fs::read_to_string(tmp.path().join("bench.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "family,N,n_slp,n_rle,strategy,wall_time_ms,merge_steps");
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7);
        assert_eq!(fields[0], "alternating");
        let n_rle: usize = fields[3].parse().unwrap();
        let steps: usize = fields[6].parse().unwrap();
        assert!(steps <= 2 * n_rle);
    }
}

#[test]
fn info_describes_files() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("g.slp"), "slp v1 5 4\nT 0\nT 1\nC 0 1\nC 2 2\nC 3 3\n").unwrap();
    fs::write(tmp.path().join("r.rle"), "rle v1 2\n0 3\n1 5\n").unwrap();
    fs::write(tmp.path().join("i.sum"), "sum v1 3 1 5\n1\n2\n3\n").unwrap();
    let out = gcla(&["info", "g.slp", "r.rle", "i.sum"], tmp.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("slp, 5 rules, N=8"));
    assert!(text.contains("rle, 2 runs, N=8"));
    assert!(text.contains("sum instance, k=3, m=1, U=5"));
}
