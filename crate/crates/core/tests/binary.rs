use std::process::Command;

fn pgm(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pgm"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = pgm(&[
        "--porcelain",
        "verify",
        "--group",
        "cyclic:6",
        "--cross",
        "--group",
        "quaternion",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("verdict=SYMMETRIC").count(), 2);
    let (code, _, err) = pgm(&["verify", "--group", "cyclic:5"]);
    assert_eq!(code, 2);
    assert!(err.contains("ChainTooShort"));
    let (code, _, _) = pgm(&["verify"]);
    assert_eq!(code, 2);
}

#[test]
fn porcelain_is_deterministic() {
    let args = [
        "--porcelain",
        "verify",
        "--group",
        "cyclic:2xcyclic:4",
        "--cross",
        "--seed",
        "3",
        "--seed",
        "8",
    ];
    assert_eq!(pgm(&args).1, pgm(&args).1);
}

#[test]
fn psquare_three() {
    let (code, out, err) = pgm(&["--porcelain", "psquare", "--p", "3"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("part1.verdict=PROPER_IMPRIMITIVE"));
    assert!(out.contains("part2.order=362880"));
}

#[test]
fn degree_limit_is_enforced() {
    let (code, _, err) = pgm(&["--degree-limit", "8", "group", "make", "cyclic:12"]);
    assert_eq!(code, 2);
    assert!(err.contains("OrderOverflow"), "{err}");
}
