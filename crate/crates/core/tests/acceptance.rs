//! Acceptance suite. Each criterion prints one `PASS` or `FAIL` line with
//! its measured quantities and pinned limits, then asserts.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tagcalc::calculus::{build_reduction, builtin, AxiomGroup, FreshVars};
use tagcalc::closure::{audit_shapes, cd_step, cd_witness, is_short_code, saturate, search_height};
use tagcalc::encode::{alphabetic_formulas, nest_over, triangle, triangle_over, Direction};
use tagcalc::formula::{parse, print, Formula};
use tagcalc::proof::{
    check, deduction_elaborate, disjunction_intro_left, disjunction_intro_right,
    halting_completion, identity_proof, prove_alphabetic, shift_assoc, simulate_trace,
    write_proof, Proof, Step,
};
use tagcalc::tagsys::{Letter, TagSystem};
use tagcalc::unify::unifiable;
use tagcalc::Variable;

const SEED: u64 = 0x7a67_6361_6c63;
const LEMMA4_TIME_LIMIT: Duration = Duration::from_secs(10);
const PIPELINE_TIME_LIMIT: Duration = Duration::from_secs(30);

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("[{status}] criterion {criterion}: {name}: {detail}");
}

fn t1() -> TagSystem {
    TagSystem::new(2, &[('a', "ab"), ('b', "b")]).unwrap()
}

fn t2() -> TagSystem {
    TagSystem::new(2, &[('a', "aa")]).unwrap()
}

fn conclusion(p: &Proof) -> Option<Formula> {
    check(p).conclusion().cloned()
}

/// Random formula over four variables with implication depth at most `depth`.
fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    const VARS: [&str; 4] = ["x", "y", "z", "x0"];
    if depth == 0 || rng.gen_bool(0.25) {
        return Formula::var(VARS[rng.gen_range(0..VARS.len())]);
    }
    Formula::imp(random_formula(rng, depth - 1), random_formula(rng, depth - 1))
}

fn random_word(rng: &mut ChaCha8Rng, m: usize, max: usize) -> Vec<Letter> {
    let len = rng.gen_range(1..=max);
    (0..len).map(|_| Letter::new(rng.gen_range(1..=m)).unwrap()).collect()
}

#[test]
fn criterion_1_alphabetic_formulas_pairwise_non_unifiable() {
    let x0 = Variable::named("x0");
    let start = Instant::now();
    let all = alphabetic_formulas(2, 4, &x0);
    let mut pairs = 0;
    let mut failures = 0;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            pairs += 1;
            if unifiable(&all[i], &all[j]) {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = all.len() == 102 && pairs == 5151 && failures == 0 && elapsed < LEMMA4_TIME_LIMIT;
    report(
        1,
        "alphabetic formulas are pairwise non-unifiable",
        pass,
        &format!(
            "{} formulas, {pairs} pairs (expect 5151), {failures} unifiable (expect 0), {:.2?} (limit {:?})",
            all.len(),
            elapsed,
            LEMMA4_TIME_LIMIT
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_2_guard_does_not_unify_with_guarded_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let tri = triangle(&Variable::named("x0"));
    let mut failures = 0;
    let trials = 1000;
    for _ in 0..trials {
        let a = random_formula(&mut rng, 8);
        let b = random_formula(&mut rng, 8);
        let c = random_formula(&mut rng, 8);
        let guarded = Formula::imp(tri.clone(), a);
        let rule = Formula::imp(Formula::imp(tri.clone(), b), c);
        if unifiable(&tri, &guarded) || unifiable(&tri, &rule) {
            failures += 1;
        }
    }
    let pass = failures == 0;
    report(
        2,
        "the guard unifies with neither guarded shape",
        pass,
        &format!("{trials} random triples at depth <= 8 (seed {SEED:#x}), {failures} failures (expect 0)"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_alphabetic_proofs_and_elaborations() {
    let int = builtin("int_impl").unwrap();
    let x0 = Variable::named("x0");
    let all = alphabetic_formulas(2, 4, &x0);
    let valid = all
        .iter()
        .filter(|f| {
            prove_alphabetic(f, &int)
                .ok()
                .and_then(|p| conclusion(&p))
                .as_ref()
                == Some(*f)
        })
        .count();

    let left = disjunction_intro_left(&int).ok().and_then(|p| conclusion(&p));
    let right = disjunction_intro_right(&int).ok().and_then(|p| conclusion(&p));
    let a = parse("x -> y").unwrap();
    let identity = identity_proof(&int, &a).ok().and_then(|p| conclusion(&p));
    let lemmas_ok = left == Some(parse("x -> (x -> y) -> y").unwrap())
        && right == Some(parse("y -> (x -> y) -> y").unwrap())
        && identity == Some(Formula::imp(a.clone(), a.clone()));

    // the elaborator output stays within the textbook bound
    let hyp = Proof {
        calculus: int.clone(),
        hypotheses: vec![parse("x").unwrap(), parse("x -> y").unwrap()],
        steps: vec![Step::Hyp(0), Step::Hyp(1), Step::MP(1, 0)],
        conclusion: 2,
    };
    let once = deduction_elaborate(&hyp).unwrap();
    let bound_ok = once.len() <= 5 * hyp.len() + 5;

    let pass = all.len() == 102 && valid == 102 && lemmas_ok && bound_ok;
    report(
        3,
        "alphabetic formulas and disjunction lemmas are provable",
        pass,
        &format!(
            "{valid}/{} alphabetic proofs valid (expect 102), x->x|y, y->x|y, A->A: {}, elaboration size {} <= {}",
            all.len(),
            if lemmas_ok { "valid" } else { "INVALID" },
            once.len(),
            5 * hyp.len() + 5
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_simulation_and_step_law() {
    let t = t1();
    let omega = t.parse_word("aaa").unwrap();
    let p0 = builtin("cl_impl").unwrap();
    let full = build_reduction(&t, &omega, &p0).unwrap();
    use AxiomGroup::*;
    let pt_omega = full.subsystem(&[W, T1, T2, R1, R2]).unwrap();

    let trace = t.run(&omega, 100).unwrap();
    let words: Vec<String> = trace.words.iter().map(|w| t.format_word(w)).collect();
    let trace_ok = words == ["aaa", "aab", "bab", "bb", "b"] && trace.halted;

    let base = Formula::Var(FreshVars::for_calculus(&p0).base);
    let target = Formula::imp(
        triangle_over(&base),
        nest_over(&t.parse_word("b").unwrap(), Direction::Forward, &base),
    );
    let proof = simulate_trace(&trace, &pt_omega).unwrap();
    let sim_ok = proof.hypotheses.is_empty() && conclusion(&proof) == Some(target);

    let abc = TagSystem::new(2, &[('a', "b"), ('b', "c"), ('c', "a")]).unwrap();
    let pt = build_reduction(&abc, &abc.parse_word("ab").unwrap(), &p0)
        .unwrap()
        .subsystem(&[T1, T2, R1, R2])
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut law_failures = 0;
    for _ in 0..100 {
        let xi = random_word(&mut rng, 3, 5);
        let beta = random_word(&mut rng, 3, 5);
        let zeta = random_word(&mut rng, 3, 5);
        let ok = shift_assoc(&xi, &beta, &zeta, &pt).is_ok_and(|p| {
            check(&p).is_valid()
                && p.mp_count() == beta.len() - 1
                && p.steps
                    .iter()
                    .filter_map(|s| match s {
                        Step::Axiom(l) => Some(AxiomGroup::of_label(l)),
                        _ => None,
                    })
                    .all(|g| g == R1)
        });
        if !ok {
            law_failures += 1;
        }
    }

    let pass = trace_ok && sim_ok && law_failures == 0;
    report(
        4,
        "tag runs are simulated by derivations",
        pass,
        &format!(
            "trace {} ({}), proof of the halting code: {} ({} steps), step law failures {law_failures}/100 (expect 0)",
            words.join(" -> "),
            if trace.halted { "halted" } else { "not halted" },
            if sim_ok { "valid" } else { "INVALID" },
            proof.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_halting_run_derives_p0() {
    let start = Instant::now();
    let t = t1();
    let omega = t.parse_word("aaa").unwrap();
    let p0 = builtin("cl_impl").unwrap();
    let full = build_reduction(&t, &omega, &p0).unwrap();
    let trace = t.run(&omega, 100).unwrap();
    let proofs = halting_completion(&trace, &full).unwrap();
    let got: Vec<Option<Formula>> = proofs.iter().map(conclusion).collect();
    let want: Vec<Option<Formula>> = p0.axioms().iter().map(|a| Some(a.formula.clone())).collect();
    let hypothesis_free = proofs.iter().all(|p| p.hypotheses.is_empty());
    let elapsed = start.elapsed();
    let pass = got == want && hypothesis_free && elapsed < PIPELINE_TIME_LIMIT;
    report(
        5,
        "a halting run derives every axiom of cl_impl",
        pass,
        &format!(
            "{}/3 proofs valid with the right conclusion, {:.2?} (limit {:?})",
            got.iter().zip(&want).filter(|(g, w)| g == w).count(),
            elapsed,
            PIPELINE_TIME_LIMIT
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_shape_audit() {
    let p0 = builtin("cl_impl").unwrap();

    let t = t1();
    let omega = t.parse_word("aaa").unwrap();
    let search = search_height(&t, &omega, &p0, 10, 10_000).unwrap();
    let height = search.height;
    let audit = audit_shapes(&search.set, &t, &omega, &search.calculus, 100).unwrap();
    let trace = t.run(&omega, 100).unwrap();
    let decoded_reachable = search.word().is_some_and(|w| trace.words.contains(&w));
    let halting_ok = height.is_some()
        && audit.violations() == 0
        && audit.inconclusive() == 0
        && audit.overlaps.is_empty()
        && decoded_reachable;

    let u = t2();
    let aa = u.parse_word("aa").unwrap();
    let loop_search = search_height(&u, &aa, &p0, 10, 10_000).unwrap();
    let short = loop_search
        .set
        .schemes
        .iter()
        .filter(|s| is_short_code(&s.formula, u.deletion()))
        .count();
    let loop_audit = audit_shapes(&loop_search.set, &u, &aa, &loop_search.calculus, 100).unwrap();
    let loop_ok = loop_search.height.is_none()
        && short == 0
        && !loop_search.set.truncated
        && loop_audit.overlaps.is_empty()
        && loop_audit.violations() == 0;

    let pass = halting_ok && loop_ok;
    report(
        6,
        "closure up to the critical depth has only the expected shapes",
        pass,
        &format!(
            "halting: height {:?}, {} schemes, {} violations, {} overlaps, decoded word {}; looping: {} schemes, {short} short-word codes to depth 10 (size cap 10000, expect 0)",
            height,
            search.set.len(),
            audit.violations(),
            audit.overlaps.len(),
            search
                .word()
                .map(|w| t.format_word(&w))
                .unwrap_or_else(|| "none".into()),
            loop_search.set.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_calculus_generator_counts_and_freshness() {
    let t = t1();
    let p0 = builtin("cl_impl").unwrap();
    let full = build_reduction(&t, &t.parse_word("aaa").unwrap(), &p0).unwrap();
    let counts: Vec<usize> = AxiomGroup::REDUCTION
        .iter()
        .map(|g| full.group(*g).count())
        .collect();
    let fresh = FreshVars::for_calculus(&p0);
    let fresh_vars = [&fresh.base, &fresh.y, &fresh.z, &fresh.u];
    let distinct: BTreeSet<_> = fresh_vars.iter().collect();
    let p0_vars = p0.vars();
    let fresh_ok = distinct.len() == 4 && fresh_vars.iter().all(|v| !p0_vars.contains(*v));
    // the variables of the generated axioms outside H are exactly the fresh ones
    let used: BTreeSet<Variable> = full
        .axioms()
        .iter()
        .filter(|a| a.group != AxiomGroup::H)
        .flat_map(|a| a.formula.vars())
        .collect();
    let used_ok = used.iter().all(|v| fresh_vars.contains(&v));

    let pass = full.len() == 19 && counts == [1, 4, 4, 6, 2, 2] && fresh_ok && used_ok;
    report(
        7,
        "reduction calculus size and fresh variables",
        pass,
        &format!(
            "{} axioms (expect 19), groups {:?} (expect [1, 4, 4, 6, 2, 2]), fresh {}, {}, {}, {} disjoint from P0: {fresh_ok}",
            full.len(),
            counts,
            fresh.base,
            fresh.y,
            fresh.z,
            fresh.u
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_kernel_surrogates() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    // condensed-detachment results re-derived as five-line proofs
    let mut pool: Vec<Formula> = builtin("int_impl")
        .unwrap()
        .axioms()
        .iter()
        .chain(builtin("cl_impl").unwrap().axioms())
        .map(|a| a.formula.clone())
        .collect();
    pool.extend(saturate(&builtin("int_impl").unwrap(), 2, 200).schemes.into_iter().map(|s| s.formula));
    let mut witnessed = 0;
    let mut cd_failures = 0;
    let mut attempts = 0;
    while witnessed < 200 && attempts < 100_000 {
        attempts += 1;
        let major = &pool[rng.gen_range(0..pool.len())];
        let minor = &pool[rng.gen_range(0..pool.len())];
        let Some(result) = cd_step(major, minor) else {
            continue;
        };
        witnessed += 1;
        let ok = cd_witness(major, minor)
            .is_some_and(|w| w.len() == 5 && conclusion(&w) == Some(result.clone()));
        if !ok {
            cd_failures += 1;
        }
    }

    // printer/parser round trip
    let mut parse_failures = 0;
    for _ in 0..1000 {
        let f = random_formula(&mut rng, 8);
        if parse(&print(&f)).ok() != Some(f) {
            parse_failures += 1;
        }
    }

    // proof files written by the binary re-check in fresh processes
    let dir = tempfile::tempdir().unwrap();
    let tag = dir.path().join("t1.tag");
    std::fs::write(&tag, t1().to_string()).unwrap();
    let out_dir = dir.path().join("out");
    let bin = env!("CARGO_BIN_EXE_tagcalc");
    let prove = Command::new(bin)
        .args(["prove", tag.to_str().unwrap(), "aaa", "--p0", "cl_impl", "--dir"])
        .arg(&out_dir)
        .output()
        .unwrap();
    let mut rechecked = 0;
    let mut recheck_failures = 0;
    let files = ["a1", "a2", "peirce"];
    for name in files {
        let path = out_dir.join(format!("{name}.proof"));
        let out = Command::new(bin).arg("check").arg(&path).output().unwrap();
        let stdout = String::from_utf8_lossy(&out.stdout);
        if out.status.code() == Some(0) && stdout.starts_with("valid") {
            rechecked += 1;
        } else {
            recheck_failures += 1;
        }
    }
    // a reduction-calculus proof file compared against an in-process proof
    let in_process = {
        let t = t1();
        let omega = t.parse_word("aaa").unwrap();
        let full = build_reduction(&t, &omega, &builtin("cl_impl").unwrap()).unwrap();
        write_proof(&halting_completion(&t.run(&omega, 100).unwrap(), &full).unwrap()[2])
    };
    let same_file = std::fs::read_to_string(out_dir.join("peirce.proof")).ok() == Some(in_process);

    let pass = prove.status.success()
        && witnessed == 200
        && cd_failures == 0
        && parse_failures == 0
        && rechecked == files.len()
        && recheck_failures == 0
        && same_file;
    report(
        8,
        "kernel surrogates",
        pass,
        &format!(
            "{witnessed} cd steps witnessed, {cd_failures} failures; 1000 round trips, {parse_failures} failures; {rechecked}/{} proof files valid in a fresh process, byte-identical to in-process: {same_file}",
            files.len()
        ),
    );
    assert!(pass);
}
