//! End-to-end runs of the binary: canonical outputs, file round-trips,
//! determinism, and the documented exit codes (0 ok, 1 domain, 2 I/O or
//! syntax).

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thetaplane"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, content: &str) {
    std::fs::write(dir.join(name), content).unwrap();
}

const THETA_CFG: &str = "n 2\ntheta 2 1 1/2pi\n";

#[test]
fn normalize_prints_the_canonical_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["normalize", "-n", "2", "-e", "zb2*z1"]);
    assert_eq!(stdout(&out), "L[2,1]^-1 * z1*zb2\n");
}

#[test]
fn star_conjugates_coefficients_and_swaps_letters() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["star", "-n", "1", "-e", "(1/2 + i) * z1^2"]);
    assert_eq!(stdout(&out), "(1/2 - i) * zb1^2\n");
}

#[test]
fn eval_applies_the_deformation_angles() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "th.cfg", THETA_CFG);
    let out = run_in(
        dir.path(),
        &["--theta", "th.cfg", "eval", "-n", "2", "-e", "zb2*z1"],
    );
    // lambda_{2,1} = e^{i pi/2} = i, so the normal form carries 1/i = -i
    assert_eq!(stdout(&out), "-i * z1*zb2\n");
}

#[test]
fn element_files_are_processed_line_by_line() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "elems.txt",
        "# two named elements\na = z1*zb1\nb = zb2*z1\n",
    );
    let out = run_in(dir.path(), &["normalize", "-n", "2", "-f", "elems.txt"]);
    assert_eq!(stdout(&out), "a = z1*zb1\nb = L[2,1]^-1 * z1*zb2\n");
}

#[test]
fn mul_multiplies_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "A.mat",
        "matrix N=2 m=4 mode=exact\n[1,1] z1\n[2,2] z2\n",
    );
    write(
        dir.path(),
        "B.mat",
        "matrix N=2 m=4 mode=exact\n[1,1] zb1\n[2,2] zb2\n",
    );
    let out = run_in(dir.path(), &["mul", "A.mat", "B.mat"]);
    assert_eq!(
        stdout(&out),
        "matrix N=2 m=4 mode=exact\n[1,1] z1*zb1\n[2,2] z2*zb2\n"
    );
}

#[test]
fn projcheck_answers_yes_and_no() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "good.mat",
        "matrix N=2 m=4 mode=exact\n[1,1] 1\n",
    );
    let out = run_in(dir.path(), &["projcheck", "good.mat"]);
    assert_eq!(stdout(&out), "yes\n");

    write(
        dir.path(),
        "bad.mat",
        "matrix N=2 m=4 mode=exact\n[1,1] z1\n",
    );
    let out = run_in(dir.path(), &["projcheck", "bad.mat"]);
    let text = stdout(&out);
    assert!(text.starts_with("no\n"), "{text}");
    assert!(
        text.contains("cell [1,1], index (2,0;0,0)"),
        "leading violation should be the squared term: {text}"
    );
}

#[test]
fn trivialize_writes_the_unitary_and_reports_exact_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run_in(
        dir.path(),
        &[
            "--degree", "3", "--seed", "9", "gen-test", "-n", "2", "-N", "2", "-r", "1", "-o",
            "P.mat",
        ],
    );
    assert_eq!(
        stdout(&gen),
        "wrote P.mat: size=2 rank=1 degree=3 seed=9\n"
    );

    let out = run_in(
        dir.path(),
        &["--degree", "3", "trivialize", "P.mat", "-o", "U.mat"],
    );
    assert_eq!(stdout(&out), "rank=1 degree=3 residual_P=0 residual_U=0\n");

    let u_text = std::fs::read_to_string(dir.path().join("U.mat")).unwrap();
    let u = theta_plane::parse_matrix(&u_text, None).unwrap();
    let ctx = theta_plane::JetContext::exact(3);
    assert!(u.is_unitary_mod(&ctx).unwrap());

    let p_text = std::fs::read_to_string(dir.path().join("P.mat")).unwrap();
    let p = theta_plane::parse_matrix(&p_text, None).unwrap();
    let conj = u.mul(&p, Some(&ctx)).unwrap().mul(&u.adjoint(), Some(&ctx)).unwrap();
    let std1 = theta_plane::AlgMatrix::standard_projector(p.sig().clone(), 2, 1);
    assert!(conj.eq_mod(&std1, &ctx));
}

#[test]
fn k0_prints_the_rank_as_an_integer() {
    let dir = tempfile::tempdir().unwrap();
    run_in(
        dir.path(),
        &[
            "--degree", "3", "--seed", "4", "gen-test", "-n", "2", "-N", "3", "-r", "2", "-o",
            "P.mat",
        ],
    );
    let out = run_in(dir.path(), &["--degree", "3", "k0", "P.mat"]);
    assert_eq!(stdout(&out), "2\n");
}

#[test]
fn gram_prints_one_diagonal_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "P.mat",
        "matrix N=1 m=2 mode=exact\n[1,1] z1 + zb1\n",
    );
    let out = run_in(dir.path(), &["gram", "P.mat", "-k", "1", "-M", "1"]);
    assert_eq!(stdout(&out), "2\n");
}

#[test]
fn outputs_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--degree", "3", "--seed", "31", "gen-test", "-n", "2", "-N", "2", "-r", "1", "-o",
        "P.mat",
    ];
    run_in(dir.path(), &args);
    let first = std::fs::read(dir.path().join("P.mat")).unwrap();
    run_in(dir.path(), &args);
    let second = std::fs::read(dir.path().join("P.mat")).unwrap();
    assert_eq!(first, second);

    let other = tempfile::tempdir().unwrap();
    let mut changed = args;
    changed[3] = "32";
    run_in(other.path(), &changed);
    let third = std::fs::read(other.path().join("P.mat")).unwrap();
    assert_ne!(first, third, "different seeds must give different projectors");
}

#[test]
fn numeric_mode_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "th.cfg", THETA_CFG);
    run_in(
        dir.path(),
        &[
            "--theta", "th.cfg", "--mode", "numeric", "--degree", "2", "--seed", "6", "gen-test",
            "-N", "2", "-r", "1", "-o", "P.mat",
        ],
    );
    let out = run_in(
        dir.path(),
        &["--theta", "th.cfg", "--degree", "2", "k0", "P.mat"],
    );
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn missing_files_and_syntax_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["k0", "nosuch.mat"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    write(dir.path(), "bad.mat", "matrix N=1 m=2 mode=exact\n[1,1] z1 +\n");
    let out = run_in(dir.path(), &["k0", "bad.mat"]);
    assert_eq!(out.status.code(), Some(2));

    write(
        dir.path(),
        "dup.mat",
        "matrix N=1 m=2 mode=exact\n[1,1] 1\n[1,1] 1\n",
    );
    let out = run_in(dir.path(), &["projcheck", "dup.mat"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate matrix cell"));
}

#[test]
fn domain_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "np.mat", "matrix N=1 m=2 mode=exact\n[1,1] z1\n");
    let out = run_in(dir.path(), &["k0", "np.mat"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a projector"));

    let out = run_in(dir.path(), &["trivialize", "np.mat"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // numeric mode without a deformation config
    let out = run_in(dir.path(), &["--mode", "numeric", "normalize", "-n", "1", "-e", "z1"]);
    assert_eq!(out.status.code(), Some(2));

    // element command without -n in exact mode
    let out = run_in(dir.path(), &["normalize", "-e", "z1"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown subcommand (clap reports usage)
    let out = run_in(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // negative exponents only exist on phase literals
    let out = run_in(dir.path(), &["normalize", "-n", "1", "-e", "z1^-1"]);
    assert_eq!(out.status.code(), Some(2));
}
