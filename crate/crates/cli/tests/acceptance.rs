//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when any
//! criterion fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use hypertournament::criteria::{
    check_losing_lists, check_score_lists, check_single_part, losing_to_scores, scores_to_losing,
};
use hypertournament::oracle::{
    achievable_both, candidate_lists, random_hypertournament, GenerationMode, DEFAULT_BUDGET,
};
use hypertournament::realize::{realize_flow, realize_inductive};
use hypertournament::{Count, Error, ScoreKind, ScoreLists, Shape, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn shape(n: &[usize], alpha: &[usize]) -> Shape {
    Shape::new(n.to_vec(), alpha.to_vec()).unwrap()
}

fn target_shapes() -> Vec<Shape> {
    vec![
        shape(&[2, 2], &[1, 1]),
        shape(&[3, 2], &[1, 1]),
        shape(&[3, 2], &[2, 1]),
        shape(&[2, 2, 2], &[1, 1, 1]),
    ]
}

/// Every shape with k <= 3, n_i <= 4 and at most 10^4 arcs.
fn random_corpus_shapes() -> Vec<Shape> {
    let parts: Vec<(usize, usize)> = (1..=4).flat_map(|n| (1..=n).map(move |a| (n, a))).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<(usize, usize)>> = parts.iter().map(|&p| vec![p]).collect();
    while let Some(current) = stack.pop() {
        let (n, alpha): (Vec<usize>, Vec<usize>) = current.iter().copied().unzip();
        if let Ok(s) = Shape::new(n, alpha) {
            if s.total_arcs() <= 10_000 {
                out.push(s);
            }
        }
        if current.len() < 3 {
            for &p in &parts {
                let mut next = current.clone();
                next.push(p);
                stack.push(next);
            }
        }
    }
    out.sort_by(|a, b| (a.sizes(), a.arities()).cmp(&(b.sizes(), b.arities())));
    out
}

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn exact_losing_side() -> Outcome {
    let mut sizes = Vec::new();
    for s in target_shapes() {
        let (achievable, _) = achievable_both(&s, DEFAULT_BUDGET, 1).map_err(|e| e.to_string())?;
        let mut accepted = BTreeSet::new();
        for r in candidate_lists(&s, ScoreKind::Losing) {
            if check_losing_lists(&s, &r).map_err(|e| e.to_string())?.valid {
                accepted.insert(r);
            }
        }
        ensure(accepted == achievable.lists, || {
            format!(
                "{s}: accepted {} vs achievable {} lists",
                accepted.len(),
                achievable.len()
            )
        })?;
        sizes.push(achievable.len());
    }
    ensure(sizes[0] == 7, || {
        format!("n=(2,2) has {} achievable lists, expected 7", sizes[0])
    })?;
    Ok(format!(
        "accepted == achievable on 4 shapes, sizes {sizes:?}"
    ))
}

fn exact_score_side() -> Outcome {
    let mut sizes = Vec::new();
    for s in target_shapes() {
        let (losing, scores) = achievable_both(&s, DEFAULT_BUDGET, 1).map_err(|e| e.to_string())?;
        let via_complement: BTreeSet<ScoreLists> = losing
            .lists
            .iter()
            .map(|r| losing_to_scores(&s, r))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(via_complement == scores.lists, || {
            format!(
                "{s}: complement of achievable losing lists differs from enumerated score lists"
            )
        })?;
        let mut accepted = BTreeSet::new();
        for c in candidate_lists(&s, ScoreKind::Score) {
            if check_score_lists(&s, &c).map_err(|e| e.to_string())?.valid {
                accepted.insert(c);
            }
        }
        ensure(accepted == scores.lists, || {
            format!(
                "{s}: accepted {} vs achievable {} score lists",
                accepted.len(),
                scores.len()
            )
        })?;
        sizes.push(scores.len());
    }
    Ok(format!(
        "accepted == achievable on 4 shapes, sizes {sizes:?}"
    ))
}

fn realizer_round_trip() -> Outcome {
    let mut count = 0;
    for s in target_shapes() {
        for r in candidate_lists(&s, ScoreKind::Losing) {
            if !check_losing_lists(&s, &r).map_err(|e| e.to_string())?.valid {
                continue;
            }
            let inductive = realize_inductive(&s, &r)
                .map_err(|e| format!("{s} {:?}: inductive: {e}", r.lists()))?;
            let flow =
                realize_flow(&s, &r).map_err(|e| format!("{s} {:?}: flow: {e}", r.lists()))?;
            for (name, m) in [("inductive", inductive), ("flow", flow)] {
                let table = m.losing_score_table().map_err(|e| e.to_string())?;
                ensure(table.per_part == r.lists(), || {
                    format!(
                        "{s} {:?}: {name} witness has {:?}",
                        r.lists(),
                        table.per_part
                    )
                })?;
            }
            count += 1;
        }
    }
    Ok(format!(
        "{count} accepted lists, both realizers exact, no realization gap"
    ))
}

/// 1000 seeded random hypertournaments over the corpus shapes.
fn random_corpus() -> Vec<(Shape, u64, GenerationMode)> {
    let shapes = random_corpus_shapes();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..1000)
        .map(|i| {
            let s = shapes.choose(&mut rng).unwrap().clone();
            let mode = if i % 2 == 0 {
                GenerationMode::LoserOnly
            } else {
                GenerationMode::FullPermutation
            };
            (s, rng.gen(), mode)
        })
        .collect()
}

fn total_identities() -> Outcome {
    let corpus = random_corpus();
    let shapes: BTreeSet<String> = corpus.iter().map(|(s, _, _)| s.to_string()).collect();
    for (s, seed, mode) in &corpus {
        let m = random_hypertournament(s, *seed, *mode).map_err(|e| e.to_string())?;
        let losing = m.losing_score_table().map_err(|e| e.to_string())?.total();
        let scores = m.score_table().map_err(|e| e.to_string())?.total();
        let t = s.total_arcs();
        ensure(losing == t, || {
            format!("{s} seed {seed}: losing total {losing} != {t}")
        })?;
        let expected = (s.arc_len() as Count - 1) * t;
        ensure(scores == expected, || {
            format!("{s} seed {seed}: score total {scores} != {expected}")
        })?;
    }
    Ok(format!(
        "1000 hypertournaments over {} shapes",
        shapes.len()
    ))
}

fn per_vertex_identity() -> Outcome {
    let mut vertices = 0;
    for (s, seed, mode) in random_corpus() {
        let m = random_hypertournament(&s, seed, mode).map_err(|e| e.to_string())?;
        let losing = m.losing_score_table().map_err(|e| e.to_string())?;
        let scores = m.score_table().map_err(|e| e.to_string())?;
        for v in s.vertices() {
            let sum = losing.get(v) + scores.get(v);
            ensure(sum == s.arcs_through(v.part), || {
                format!("{s} seed {seed}: vertex {v} has {sum}")
            })?;
            vertices += 1;
        }
    }
    Ok(format!("{vertices} vertex checks"))
}

fn check_equivalence() -> Outcome {
    let mut shapes = target_shapes();
    shapes.extend([
        shape(&[4, 3], &[2, 1]),
        shape(&[3, 3, 2], &[2, 1, 1]),
        shape(&[6], &[3]),
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut valid, mut total) = (0, 0);
    for s in &shapes {
        for i in 0..1000 {
            // Half uniform bounded lists, half scores of random hypertournaments.
            let lists = if i % 2 == 0 {
                let lists = (0..s.k())
                    .map(|p| {
                        (0..s.size(p))
                            .map(|_| rng.gen_range(0..=s.arcs_through(p)))
                            .collect()
                    })
                    .collect();
                ScoreLists::sorted(ScoreKind::Score, lists)
            } else {
                let m = random_hypertournament(s, rng.gen(), GenerationMode::LoserOnly)
                    .map_err(|e| e.to_string())?;
                m.scores().map_err(|e| e.to_string())?
            };
            let losing = scores_to_losing(s, &lists).map_err(|e| e.to_string())?;
            let by_scores = check_score_lists(s, &lists)
                .map_err(|e| e.to_string())?
                .valid;
            let by_losing = check_losing_lists(s, &losing)
                .map_err(|e| e.to_string())?
                .valid;
            ensure(by_scores == by_losing, || {
                format!("{s} {:?}: verdicts differ", lists.lists())
            })?;
            let back = losing_to_scores(s, &losing).map_err(|e| e.to_string())?;
            ensure(back == lists, || {
                format!("{s} {:?}: conversion does not round-trip", lists.lists())
            })?;
            valid += usize::from(by_scores);
            total += 1;
        }
    }
    Ok(format!(
        "{total} lists on {} shapes ({valid} valid), verdicts and conversions agree",
        shapes.len()
    ))
}

fn monotone_lists(len: usize, max: Count) -> Vec<Vec<Count>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|l: Vec<Count>| {
                let low = l.last().copied().unwrap_or(0);
                (low..=max).map(move |x| {
                    let mut next = l.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    out
}

fn single_part_reduction() -> Outcome {
    let mut count = 0;
    for n in 2..=6 {
        for arity in [2, 3].into_iter().filter(|&a| a <= n) {
            let s = shape(&[n], &[arity]);
            for r in monotone_lists(n, s.arcs_through(0)) {
                let lists = ScoreLists::new(ScoreKind::Losing, vec![r.clone()])
                    .map_err(|e| e.to_string())?;
                let general = check_losing_lists(&s, &lists)
                    .map_err(|e| e.to_string())?
                    .valid;
                let single = check_single_part(n, arity, &r)
                    .map_err(|e| e.to_string())?
                    .valid;
                ensure(general == single, || {
                    format!("n={n} arity={arity} {r:?}: {general} vs {single}")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} lists agree exhaustively"))
}

fn swap_contract() -> Outcome {
    let shapes: Vec<Shape> = random_corpus_shapes()
        .into_iter()
        .filter(|s| s.arc_len() >= 2 && s.total_arcs() <= 2000)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..500 {
        let s = shapes.choose(&mut rng).unwrap();
        let m = random_hypertournament(s, rng.gen(), GenerationMode::FullPermutation)
            .map_err(|e| e.to_string())?;
        // An eligible pair: b loses some arc, a is another vertex of it.
        let arc = m.arc(rng.gen_range(0..s.total_arcs())).unwrap();
        let b = arc.loser().unwrap();
        let others: Vec<VertexId> = arc.order().iter().copied().filter(|&v| v != b).collect();
        let a = *others.choose(&mut rng).unwrap();
        let swapped = m
            .arc_swap(a, b)
            .map_err(|e| format!("trial {trial}: {e}"))?;
        let changed = m
            .arcs()
            .iter()
            .zip(swapped.arcs())
            .filter(|(x, y)| x != y)
            .count();
        ensure(changed == 1, || {
            format!("trial {trial}: {changed} arcs changed")
        })?;
        let before = m.losing_score_table().map_err(|e| e.to_string())?;
        let after = swapped.losing_score_table().map_err(|e| e.to_string())?;
        for v in s.vertices() {
            let expected = if v == a {
                before.get(v) + 1
            } else if v == b {
                before.get(v) - 1
            } else {
                before.get(v)
            };
            ensure(after.get(v) == expected, || {
                format!("trial {trial}: vertex {v} changed wrongly")
            })?;
        }
        let back = match swapped.arc_swap(b, a) {
            Ok(back) => back,
            Err(Error::NoEligibleArc { .. }) => {
                return Err(format!("trial {trial}: inverse swap found no arc"))
            }
            Err(e) => return Err(e.to_string()),
        };
        let restored = back.losing_score_table().map_err(|e| e.to_string())?;
        ensure(restored == before, || {
            format!("trial {trial}: inverse swap did not restore")
        })?;
    }
    Ok("500 swaps: one arc and two entries change, inverse restores".to_string())
}

fn binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypertournament"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs a command twice and requires exit 0 and identical output.
fn stable(args: &[&str]) -> Result<Vec<u8>, String> {
    let first = binary(args);
    let second = binary(args);
    ensure(first.status.code() == Some(0), || {
        format!(
            "{args:?} exited {:?}: {}",
            first.status.code(),
            String::from_utf8_lossy(&first.stderr)
        )
    })?;
    ensure(first.stdout == second.stdout, || {
        format!("{args:?} output is not byte-stable")
    })?;
    Ok(first.stdout)
}

fn verify_witness(dir: &Path, name: &str, witness: &[u8]) -> Result<Value, String> {
    let path = dir.join(name);
    std::fs::write(&path, witness).map_err(|e| e.to_string())?;
    let report = stable(&["verify", path.to_str().unwrap()])?;
    let report: Value = serde_json::from_slice(&report).map_err(|e| e.to_string())?;
    ensure(
        report["valid"] == true && report["claimed_match"] == true,
        || format!("{name}: verify report {report}"),
    )?;
    Ok(report)
}

fn cli_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/instances");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&fixtures)
        .map_err(|e| e.to_string())?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    files.sort();
    let mut runs = 0;
    for file in &files {
        let path = file.to_str().unwrap();
        let name = file.file_name().unwrap().to_string_lossy();
        stable(&["check", path])?;
        for method in ["inductive", "flow"] {
            for emit in ["losers", "arcs"] {
                let witness = stable(&["realize", path, "--method", method, "--emit", emit])?;
                let doc: Value = serde_json::from_slice(&witness).map_err(|e| e.to_string())?;
                let report = verify_witness(
                    dir.path(),
                    &format!("{name}.{method}.{emit}.json"),
                    &witness,
                )?;
                if let Some(scores) = doc.get("converted_from_score") {
                    ensure(&report["score_lists"] == scores, || {
                        format!("{name}: score lists not reproduced")
                    })?;
                }
                runs += 1;
            }
        }
    }
    for seed in ["1", "2", "3"] {
        let witness = stable(&[
            "random", "--n", "3,2,2", "--alpha", "2,1,1", "--seed", seed, "--emit", "arcs",
        ])?;
        verify_witness(dir.path(), &format!("random{seed}.json"), &witness)?;
    }
    Ok(format!(
        "{} fixtures, {runs} realize/verify runs plus 3 seeded random witnesses",
        files.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "exact characterization, losing side",
            Duration::from_secs(10),
            exact_losing_side,
        ),
        (
            "exact characterization, score side",
            Duration::from_secs(10),
            exact_score_side,
        ),
        (
            "realizer round-trip",
            Duration::from_secs(30),
            realizer_round_trip,
        ),
        (
            "total score identities",
            Duration::from_secs(10),
            total_identities,
        ),
        (
            "per-vertex identity",
            Duration::from_secs(10),
            per_vertex_identity,
        ),
        (
            "score/losing check equivalence",
            Duration::from_secs(30),
            check_equivalence,
        ),
        (
            "single-part reduction",
            Duration::from_secs(30),
            single_part_reduction,
        ),
        ("arc swap contract", Duration::from_secs(30), swap_contract),
        ("cli round-trip", Duration::from_secs(60), cli_round_trip),
    ];
    let mut failures = 0;
    for (i, (title, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(detail) => println!("PASS [{}] {title}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{}] {title}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
