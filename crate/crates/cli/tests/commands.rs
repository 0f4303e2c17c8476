use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lcgraph::clifford::LocalCliffordOp;
use lcgraph::decomposition::LcSequence;
use lcgraph::gf2::{BitMatrix, BitVec};
use lcgraph::graphs::{parse_graph_bundle, Graph};
use lcgraph::reduction::{verify_witness, ReductionWitness};
use lcgraph::stabilizer::StabilizerGenMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn lcgraph(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcgraph"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn setup() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("path3.graph", Graph::path(3).to_edge_list()),
        ("triangle.graph", Graph::complete(3).to_edge_list()),
        ("empty4.graph", Graph::empty(4).to_edge_list()),
        ("edge.graph", Graph::path(2).to_edge_list()),
        ("empty2.graph", Graph::empty(2).to_edge_list()),
        ("zeros3.stab", "ZII\nIZI\nIIZ\n".to_string()),
    ];
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn equivalent_graphs_write_a_witness() {
    let dir = setup();
    let o = lcgraph(dir.path(), &["equiv", "path3.graph", "triangle.graph"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "equivalent\n");
    let q =
        LocalCliffordOp::parse(&fs::read_to_string(dir.path().join("witness.clifford")).unwrap())
            .unwrap();
    let image = q
        .apply_to_stabilizer(&StabilizerGenMatrix::from_graph(&Graph::path(3)))
        .unwrap();
    assert!(image.same_subspace(&StabilizerGenMatrix::from_graph(&Graph::complete(3))));
}

#[test]
fn equivalence_exit_codes() {
    let dir = setup();
    let o = lcgraph(
        dir.path(),
        &["equiv", "edge.graph", "empty2.graph", "--no-witness"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "inequivalent\n");

    let o = lcgraph(
        dir.path(),
        &["equiv", "path3.graph", "path3.graph", "--cap", "0"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "indeterminate\n");

    let o = lcgraph(dir.path(), &["equiv", "path3.graph", "empty4.graph"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).starts_with("error: data:"));
}

#[test]
fn equivalence_accepts_stabilizer_files() {
    let dir = setup();
    let o = lcgraph(
        dir.path(),
        &[
            "--verify",
            "equiv",
            "zeros3.stab",
            "triangle.graph",
            "--witness",
            "-",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    let plus = StabilizerGenMatrix::from_graph(&Graph::empty(3));
    fs::write(dir.path().join("plus.stab"), plus.to_pauli_text()).unwrap();
    let o = lcgraph(
        dir.path(),
        &[
            "--verify",
            "equiv",
            "zeros3.stab",
            "plus.stab",
            "--witness",
            "-",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let q = LocalCliffordOp::parse(text.strip_prefix("equivalent\n").unwrap()).unwrap();
    let zeros = StabilizerGenMatrix::parse("ZII\nIZI\nIIZ\n").unwrap();
    assert!(q.apply_to_stabilizer(&zeros).unwrap().same_subspace(&plus));
    assert!(stderr(&o).contains("verified on statevectors"));
}

#[test]
fn orbit_reports() {
    let dir = setup();
    let o = lcgraph(dir.path(), &["orbit", "empty4.graph"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("1 member"));

    let o = lcgraph(
        dir.path(),
        &[
            "orbit",
            "triangle.graph",
            "--members-out",
            "members.txt",
            "--dot-out",
            "members.dot",
            "--iso",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("4 members\ncanonical:\n3\n1 3\n2 3\n"));
    assert!(out.contains("isomorphism classes: 2"));
    let members =
        parse_graph_bundle(&fs::read_to_string(dir.path().join("members.txt")).unwrap()).unwrap();
    assert_eq!(members.len(), 4);
    assert!(members.contains(&Graph::complete(3)));
    let dot = fs::read_to_string(dir.path().join("members.dot")).unwrap();
    assert_eq!(dot.matches("graph member").count(), 4);

    let o = lcgraph(dir.path(), &["orbit", "triangle.graph", "--cap", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: cap:"));
}

#[test]
fn canonical_forms_agree_across_an_orbit() {
    let dir = setup();
    let a = lcgraph(dir.path(), &["canon", "path3.graph"]);
    let b = lcgraph(dir.path(), &["canon", "triangle.graph"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    fs::write(dir.path().join("canon.graph"), stdout(&a)).unwrap();
    let c = lcgraph(dir.path(), &["canon", "canon.graph"]);
    assert_eq!(stdout(&c), stdout(&a));
}

#[test]
fn reduce_computational_basis_state() {
    let dir = setup();
    let o = lcgraph(
        dir.path(),
        &[
            "--verify",
            "reduce",
            "zeros3.stab",
            "--clifford-out",
            "q.clifford",
            "--basis-out",
            "r.matrix",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "3\n");
    let q = LocalCliffordOp::parse(&fs::read_to_string(dir.path().join("q.clifford")).unwrap())
        .unwrap();
    assert_eq!(q, LocalCliffordOp::hadamard_all(3));
    let r = BitMatrix::parse(&fs::read_to_string(dir.path().join("r.matrix")).unwrap()).unwrap();
    assert_eq!(r, BitMatrix::identity(3));
}

#[test]
fn reduce_random_states() {
    let dir = setup();
    for seed in 0..5 {
        let s = StabilizerGenMatrix::random(6, seed);
        let input = if seed % 2 == 0 {
            s.to_pauli_text()
        } else {
            s.matrix().to_string()
        };
        fs::write(dir.path().join("s.stab"), input).unwrap();
        let o = lcgraph(
            dir.path(),
            &[
                "reduce",
                "s.stab",
                "-o",
                "g.graph",
                "--clifford-out",
                "q.clifford",
                "--basis-out",
                "r.matrix",
                "--quiet",
            ],
        );
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty() && o.stderr.is_empty());
        let read = |name: &str| fs::read_to_string(dir.path().join(name)).unwrap();
        let w = ReductionWitness {
            graph: Graph::parse_edge_list(&read("g.graph")).unwrap(),
            q: LocalCliffordOp::parse(&read("q.clifford")).unwrap(),
            r: BitMatrix::parse(&read("r.matrix")).unwrap(),
        };
        assert!(verify_witness(&s, &w));
    }
}

#[test]
fn decompose_then_apply() {
    let dir = setup();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 5 {
        let g = Graph::random(6, &mut rng);
        let c = BitVec::from_bools((0..6).map(|_| rng.random()));
        let d = BitVec::from_bools((0..6).map(|_| rng.random()));
        let Ok(q) = LocalCliffordOp::complete_lower_blocks(&g, &c, &d) else {
            continue;
        };
        fs::write(dir.path().join("g.graph"), g.to_edge_list()).unwrap();
        fs::write(dir.path().join("q.clifford"), q.to_text()).unwrap();
        let o = lcgraph(
            dir.path(),
            &[
                "--verify",
                "decompose",
                "q.clifford",
                "g.graph",
                "-o",
                "seq.txt",
            ],
        );
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        LcSequence::parse(&fs::read_to_string(dir.path().join("seq.txt")).unwrap()).unwrap();
        let o = lcgraph(
            dir.path(),
            &["apply", "g.graph", "seq.txt", "--check", "q.clifford"],
        );
        assert_eq!(o.status.code(), Some(0));
        let image = Graph::parse_edge_list(&stdout(&o)).unwrap();
        assert_eq!(Some(image), q.graph_action(&g).unwrap().image);
        assert!(stderr(&o).contains("match"));
        done += 1;
    }
}

#[test]
fn decompose_and_apply_failures() {
    let dir = setup();
    fs::write(
        dir.path().join("h.clifford"),
        LocalCliffordOp::hadamard_all(3).to_text(),
    )
    .unwrap();
    fs::write(dir.path().join("empty3.graph"), "3\n").unwrap();
    let o = lcgraph(dir.path(), &["decompose", "h.clifford", "empty3.graph"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).starts_with("error: data:"));

    fs::write(
        dir.path().join("id.clifford"),
        LocalCliffordOp::identity(3).to_text(),
    )
    .unwrap();
    fs::write(dir.path().join("seq.txt"), "g 2\n").unwrap();
    let o = lcgraph(
        dir.path(),
        &["apply", "path3.graph", "seq.txt", "--check", "id.clifford"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        Graph::parse_edge_list(&stdout(&o)).unwrap(),
        Graph::complete(3)
    );
}

#[test]
fn error_reporting() {
    let dir = setup();
    fs::write(dir.path().join("bad.graph"), "3\n1 4\n").unwrap();
    let o = lcgraph(dir.path(), &["canon", "bad.graph"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).starts_with("error: parse: bad.graph: line 2, column 3:"));

    fs::write(dir.path().join("bad.stab"), "XZ\nZQ\n").unwrap();
    let o = lcgraph(dir.path(), &["reduce", "bad.stab"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(stderr(&o).contains("line 2, column 2"));

    let o = lcgraph(dir.path(), &["canon", "missing.graph"]);
    assert_eq!(o.status.code(), Some(66));
    assert!(stderr(&o).starts_with("error: input:"));

    for args in [
        &["frobnicate"][..],
        &["canon"],
        &["canon", "path3.graph", "--cap", "many"],
        &[],
    ] {
        let o = lcgraph(dir.path(), args);
        assert_eq!(o.status.code(), Some(64), "{args:?}");
        assert!(stderr(&o).starts_with("error: usage:"));
    }

    let o = lcgraph(dir.path(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equiv"));
    assert!(!stdout(&o).contains("oracle-check"));
}

#[test]
fn export_dot() {
    let dir = setup();
    let o = lcgraph(dir.path(), &["export-dot", "edge.graph", "--name", "E"]);
    assert_eq!(stdout(&o), "graph E {\n  1;\n  2;\n  1 -- 2;\n}\n");
    fs::write(dir.path().join("bundle.txt"), "2\n1 2\n\n3\n").unwrap();
    let o = lcgraph(
        dir.path(),
        &["export-dot", "bundle.txt", "-o", "b.dot", "-q"],
    );
    assert_eq!(o.status.code(), Some(0));
    let dot = fs::read_to_string(dir.path().join("b.dot")).unwrap();
    assert_eq!(dot.matches("graph G").count(), 2);
}

#[test]
fn oracle_check_is_reproducible() {
    let dir = setup();
    fs::write(dir.path().join("c5.graph"), Graph::cycle(5).to_edge_list()).unwrap();
    let a = lcgraph(dir.path(), &["oracle-check", "c5.graph", "--seed", "9"]);
    let b = lcgraph(dir.path(), &["oracle-check", "c5.graph", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("local complementation at vertex"));

    fs::write(
        dir.path().join("s.stab"),
        StabilizerGenMatrix::random(4, 2).to_pauli_text(),
    )
    .unwrap();
    let a = lcgraph(
        dir.path(),
        &["oracle-check", "s.stab", "--seed", "1", "--samples", "4"],
    );
    let b = lcgraph(
        dir.path(),
        &["oracle-check", "s.stab", "--seed", "1", "--samples", "4"],
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).matches(": ok").count(), 6);
}

#[test]
fn inputs_are_not_modified() {
    let dir = setup();
    fs::write(dir.path().join("seq.txt"), "g 1\ngg 2 3\n").unwrap();
    fs::write(
        dir.path().join("id.clifford"),
        LocalCliffordOp::identity(3).to_text(),
    )
    .unwrap();
    let snapshot = |dir: &Path| {
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    fs::read(&p).unwrap(),
                )
            })
            .collect();
        files.sort();
        files
    };
    let before = snapshot(dir.path());
    let runs: [&[&str]; 8] = [
        &["reduce", "zeros3.stab"],
        &["decompose", "id.clifford", "path3.graph"],
        &["apply", "path3.graph", "seq.txt", "--check", "id.clifford"],
        &["orbit", "triangle.graph"],
        &["equiv", "path3.graph", "triangle.graph", "--no-witness"],
        &["canon", "path3.graph"],
        &["export-dot", "triangle.graph"],
        &["oracle-check", "zeros3.stab"],
    ];
    for args in runs {
        lcgraph(dir.path(), args);
    }
    assert_eq!(snapshot(dir.path()), before);
}

#[test]
fn in_process_runner_matches_binary() {
    let dir = setup();
    let path = dir.path().join("triangle.graph");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = lcgraph_cli::run_with(
        ["lcgraph", "canon", path.to_str().unwrap()],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    let binary = lcgraph(dir.path(), &["canon", "triangle.graph"]);
    assert_eq!(out, binary.stdout);
}
