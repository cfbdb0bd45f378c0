//! The `tagcalc` command-line driver.
//!
//! [`dispatch`] parses arguments, runs one subcommand and returns the exit
//! status: 0 on success, 1 for usage errors and unreadable input, 2 when a
//! proof or an audit fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::calculus::{builtin, AxiomGroup, Calculus, CalculusError};
use crate::closure::{audit_shapes, saturate, search_height};
use crate::encode::{letter_code, word_codes, EncodeError};
use crate::formula::{parse, FormulaError, Variable};
use crate::proof::{
    check, halting_completion, inclusion_proof, parse_proof, proof_calculus_name, write_proof,
    ProofError, Verdict,
};
use crate::tagsys::{Letter, TagError, TagSystem, Word};
use crate::unify::{mgu, rename_apart};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error(transparent)]
    Tag(#[from] TagError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Parser, Debug)]
#[command(name = "tagcalc", version)]
#[command(about = "Encode tag systems as implicational calculi, build and check proofs")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tag-system utilities
    Tag {
        #[command(subcommand)]
        command: TagCommand,
    },
    /// Print the letter codes and word codes of a word
    Encode {
        word: String,
        /// Tag file whose alphabet numbers the letters (default: a, b, c, ...)
        #[arg(long)]
        tag: Option<PathBuf>,
        #[arg(long, default_value = "x0")]
        base: String,
    },
    /// Write the reduction calculus for a tag system and initial word
    Build {
        tagfile: PathBuf,
        word: String,
        /// Builtin calculus name or calculus file
        #[arg(long)]
        p0: String,
        #[arg(long, default_value = "out")]
        dir: PathBuf,
    },
    /// Derive the axioms of P0 from a halting run and write the proofs
    Prove {
        tagfile: PathBuf,
        word: String,
        #[arg(long)]
        p0: String,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        #[arg(long, default_value = "out")]
        dir: PathBuf,
    },
    /// Check a proof file
    Check {
        prooffile: PathBuf,
        /// Calculus file (default: builtin, else `<name>.calc` beside the proof)
        #[arg(long)]
        calc: Option<PathBuf>,
    },
    /// Decide whether two formulas have a common instance
    Unify { left: String, right: String },
    /// Saturate a calculus under condensed detachment
    Saturate {
        calcfile: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 10_000)]
        size: usize,
    },
    /// Run both directions of the reduction on one instance
    Roundtrip {
        tagfile: PathBuf,
        word: String,
        #[arg(long)]
        p0: String,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 10_000)]
        size: usize,
    },
}

#[derive(Subcommand, Debug)]
enum TagCommand {
    /// Run a tag system on a word
    Run {
        file: PathBuf,
        word: String,
        #[arg(long, default_value_t = 100)]
        fuel: usize,
    },
}

/// Runs the command line `args` (including the program name), writing to `out`.
pub fn dispatch<S: AsRef<str>>(args: &[S], out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args.iter().map(AsRef::as_ref)) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            1
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn input_error(path: &Path, e: impl ToString) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn load_tag(path: &Path) -> Result<TagSystem, CliError> {
    TagSystem::parse(&read(path)?).map_err(|e| input_error(path, e))
}

fn load_calculus(path: &Path) -> Result<Calculus, CliError> {
    Calculus::parse(&read(path)?).map_err(|e| input_error(path, e))
}

/// A builtin calculus name, or a path to a calculus file.
fn resolve_p0(spec: &str) -> Result<Calculus, CliError> {
    match builtin(spec) {
        Ok(c) => Ok(c),
        Err(_) if Path::new(spec).exists() => load_calculus(Path::new(spec)),
        Err(e) => Err(e.into()),
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Tag {
            command: TagCommand::Run { file, word, fuel },
        } => tag_run(&file, &word, fuel, out),
        Command::Encode { word, tag, base } => encode(&word, tag.as_deref(), &base, out),
        Command::Build {
            tagfile,
            word,
            p0,
            dir,
        } => {
            let t = load_tag(&tagfile)?;
            let w = t.parse_word(&word)?;
            let c = crate::calculus::build_reduction(&t, &w, &resolve_p0(&p0)?)?;
            let path = dir.join(format!("{}.calc", c.name()));
            write_file(&path, &c.to_string())?;
            writeln!(out, "wrote {} ({} axioms)", path.display(), c.len())?;
            Ok(0)
        }
        Command::Prove {
            tagfile,
            word,
            p0,
            fuel,
            dir,
        } => prove(&tagfile, &word, &p0, fuel, &dir, out),
        Command::Check { prooffile, calc } => check_file(&prooffile, calc.as_deref(), out),
        Command::Unify { left, right } => {
            let (a, b) = (parse(&left)?, parse(&right)?);
            let (b, _) = rename_apart(&b, &a.vars());
            match mgu(&a, &b) {
                Some(s) => {
                    writeln!(out, "unifiable")?;
                    writeln!(out, "mgu: {s}")?;
                    writeln!(out, "instance: {}", s.apply(&a))?;
                }
                None => writeln!(out, "not unifiable")?,
            }
            Ok(0)
        }
        Command::Saturate {
            calcfile,
            depth,
            size,
        } => {
            let c = load_calculus(&calcfile)?;
            let s = saturate(&c, depth, size);
            for (k, sc) in s.schemes.iter().enumerate() {
                let mark = if sc.active { "" } else { " (subsumed)" };
                writeln!(out, "scheme {} depth {}: {}{mark}", k + 1, sc.depth, sc.formula)?;
            }
            let status = if s.truncated {
                "truncated at the size cap"
            } else if s.saturated {
                "closed"
            } else {
                "depth bound reached"
            };
            writeln!(out, "{} schemes to depth {}; {status}", s.len(), s.depth)?;
            Ok(0)
        }
        Command::Roundtrip {
            tagfile,
            word,
            p0,
            fuel,
            depth,
            size,
        } => {
            let t = load_tag(&tagfile)?;
            let w = t.parse_word(&word)?;
            let p0 = resolve_p0(&p0)?;
            let ok = roundtrip(&t, &w, &p0, fuel, depth, size, out)?;
            Ok(if ok { 0 } else { 2 })
        }
    }
}

fn tag_run(file: &Path, word: &str, fuel: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let t = load_tag(file)?;
    let trace = t.run(&t.parse_word(word)?, fuel)?;
    for (k, w) in trace.words.iter().enumerate() {
        writeln!(out, "{k}: {}", t.format_word(w))?;
    }
    if trace.halted {
        writeln!(out, "HALTED after {} steps", trace.steps())?;
    } else {
        writeln!(out, "FUEL EXHAUSTED after {} steps", trace.steps())?;
    }
    Ok(0)
}

fn encode(
    word: &str,
    tag: Option<&Path>,
    base: &str,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let base = Variable::new(base)?;
    let (letters, label): (Word, Box<dyn Fn(Letter) -> char>) = match tag {
        Some(path) => {
            let t = load_tag(path)?;
            let w = t.parse_word(word)?;
            let alphabet = t.alphabet().to_vec();
            (w, Box::new(move |l: Letter| alphabet[l.index() - 1]))
        }
        None => {
            let w = word
                .chars()
                .map(|c| match c {
                    'a'..='z' => Ok(Letter::new(c as usize - 'a' as usize + 1).expect("positive")),
                    _ => Err(TagError::UnknownLetter(c)),
                })
                .collect::<Result<Word, _>>()?;
            let name = |l: Letter| (b'a' + (l.index() - 1) as u8) as char;
            (w, Box::new(name))
        }
    };
    let mut seen = Vec::new();
    for &l in &letters {
        if !seen.contains(&l) {
            seen.push(l);
            writeln!(out, "letter {}: {}", label(l), letter_code(l.index(), &base)?)?;
        }
    }
    for (ty, f) in word_codes(&letters, &base)? {
        writeln!(out, "code type={ty}: {f}")?;
    }
    Ok(0)
}

fn prove(
    tagfile: &Path,
    word: &str,
    p0: &str,
    fuel: usize,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let t = load_tag(tagfile)?;
    let w = t.parse_word(word)?;
    let p0 = resolve_p0(p0)?;
    let full = crate::calculus::build_reduction(&t, &w, &p0)?;
    let trace = t.run(&w, fuel)?;
    if !trace.halted {
        writeln!(out, "NO HALT within fuel {fuel}; nothing to prove")?;
        return Ok(2);
    }
    let calc_path = dir.join(format!("{}.calc", full.name()));
    write_file(&calc_path, &full.to_string())?;
    writeln!(out, "wrote {}", calc_path.display())?;
    let proofs = halting_completion(&trace, &full)?;
    let mut status = 0;
    for (axiom, proof) in p0.axioms().iter().zip(&proofs) {
        let path = dir.join(format!("{}.proof", axiom.label.to_lowercase()));
        write_file(&path, &write_proof(proof))?;
        let verdict = check(proof);
        if !verdict.is_valid() {
            status = 2;
        }
        writeln!(out, "wrote {} ({} steps): {verdict}", path.display(), proof.len())?;
    }
    Ok(status)
}

fn check_file(path: &Path, calc: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = read(path)?;
    let calculus = match calc {
        Some(c) => Some(load_calculus(c)?),
        None => match proof_calculus_name(&text) {
            Some(name) => match builtin(name) {
                Ok(c) => Some(c),
                Err(_) => {
                    let sibling = path
                        .parent()
                        .unwrap_or(Path::new("."))
                        .join(format!("{name}.calc"));
                    if sibling.exists() {
                        Some(load_calculus(&sibling)?)
                    } else {
                        None
                    }
                }
            },
            None => None,
        },
    };
    let proof = parse_proof(&text, |name| {
        calculus.filter(|c| c.name() == name)
    })
    .map_err(|e| input_error(path, e))?;
    match check(&proof) {
        Verdict::Valid { conclusion } => {
            writeln!(out, "valid")?;
            writeln!(out, "conclusion: {conclusion}")?;
            Ok(0)
        }
        v @ Verdict::Invalid { .. } => {
            writeln!(out, "{v}")?;
            Ok(2)
        }
    }
}

/// Both directions of the reduction on one instance. Returns whether every
/// check passed.
pub fn roundtrip(
    t: &TagSystem,
    omega: &[Letter],
    p0: &Calculus,
    fuel: usize,
    max_depth: usize,
    max_size: usize,
    out: &mut dyn Write,
) -> Result<bool, CliError> {
    let full = crate::calculus::build_reduction(t, omega, p0)?;
    let mut ok = true;
    let mut summary = Vec::new();

    // every axiom of the calculus is derivable in P0
    let int = builtin("int_impl")?;
    let mut included = 0;
    let mut skipped = 0;
    for a in full.axioms() {
        let host = if a.group == AxiomGroup::H { p0 } else { &int };
        match inclusion_proof(&a.formula, host) {
            Ok(proof) if check(&proof).conclusion() == Some(&a.formula) => included += 1,
            Ok(_) => {
                ok = false;
                writeln!(out, "inclusion: proof of {} is invalid", a.label)?;
            }
            Err(e) if a.group == AxiomGroup::H => {
                skipped += 1;
                writeln!(out, "inclusion: {} not checked ({e})", a.label)?;
            }
            Err(e) => {
                ok = false;
                writeln!(out, "inclusion: {} failed: {e}", a.label)?;
            }
        }
    }
    writeln!(
        out,
        "inclusion: {included} of {} axioms derived ({skipped} skipped)",
        full.len()
    )?;

    let trace = t.run(omega, fuel)?;
    if trace.halted {
        let last = t.format_word(trace.last());
        writeln!(out, "run: HALTS after {} steps at {last}", trace.steps())?;
        let proofs = halting_completion(&trace, &full)?;
        let mut valid = 0;
        for (a, proof) in p0.axioms().iter().zip(&proofs) {
            if check(proof).conclusion() == Some(&a.formula) {
                valid += 1;
            } else {
                ok = false;
                writeln!(out, "proof of {} is invalid", a.label)?;
            }
        }
        writeln!(out, "forward: {valid} of {} axiom proofs valid", p0.len())?;
        summary.push("HALTS".to_string());
        summary.push(format!("{valid} axiom proofs valid"));
    } else {
        writeln!(out, "run: NO HALT within fuel {fuel}")?;
        summary.push(format!("NO HALT within fuel {fuel}"));
    }

    let search = search_height(t, omega, p0, max_depth, max_size)?;
    let report = audit_shapes(&search.set, t, omega, &search.calculus, fuel)?;
    writeln!(
        out,
        "audit: {} schemes to depth {}, {} violations, {} inconclusive, {} overlaps{}",
        search.set.len(),
        search.set.depth,
        report.violations(),
        report.inconclusive(),
        report.overlaps.len(),
        if search.set.truncated { ", truncated" } else { "" }
    )?;
    if !report.is_clean() {
        ok = false;
        write!(out, "{}", report.render(t))?;
    }
    match (search.height, search.word()) {
        (Some(h), Some(w)) => {
            let reachable = trace.words.contains(&w);
            let matches_run = !trace.halted || trace.last() == &w[..];
            writeln!(
                out,
                "backward: height {h}, decoded word {} {}",
                t.format_word(&w),
                if reachable { "reachable" } else { "NOT reachable" }
            )?;
            if !reachable || !matches_run {
                ok = false;
            }
            summary.push("height found".into());
            summary.push(format!(
                "decoded word {} {}",
                t.format_word(&w),
                if reachable { "reachable" } else { "unreachable" }
            ));
        }
        _ => {
            // a closed set stays closed, so the bound is the requested depth
            let bound = if search.set.saturated { max_depth } else { search.set.depth };
            let closed = if search.set.saturated {
                format!(" (closed at depth {})", search.set.depth)
            } else {
                String::new()
            };
            writeln!(out, "backward: no short-word code to depth {bound}{closed}")?;
            summary.push(format!("no short-word code to depth {bound}"));
            if trace.halted {
                writeln!(out, "note: the run halts but the search bounds were too small")?;
            }
        }
    }
    writeln!(out, "{}", summary.join("; "))?;
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut full = vec!["tagcalc"];
        full.extend_from_slice(args);
        let code = dispatch(&full, &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    fn tag_file(dir: &Path, name: &str, text: &str) -> PathBuf {
        let path = dir.join(name);
        fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn unify_examples() {
        let (code, text) = run_cli(&["unify", "x -> x", "(y -> z) -> z"]);
        assert_eq!((code, text.as_str()), (0, "not unifiable\n"));
        let (code, text) = run_cli(&["unify", "x -> y", "y -> (x -> x)"]);
        assert_eq!(code, 0);
        assert!(text.starts_with("unifiable\n"));
    }

    #[test]
    fn tag_run_example() {
        let dir = tempfile::tempdir().unwrap();
        let t = tag_file(dir.path(), "t1.tag", "deletion: 2\na -> ab\nb -> b\n");
        let (code, text) = run_cli(&["tag", "run", t.to_str().unwrap(), "aaa", "--fuel", "100"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["0: aaa", "1: aab", "2: bab", "3: bb", "4: b", "HALTED after 4 steps"]);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_cli(&["frobnicate"]).0, 1);
        assert_eq!(run_cli(&["unify", "x ->", "y"]).0, 1);
        assert_eq!(run_cli(&["tag", "run", "/nonexistent.tag", "a"]).0, 1);
        assert_eq!(run_cli(&["--help"]).0, 0);
    }

    #[test]
    fn encode_prints_codes() {
        let (code, text) = run_cli(&["encode", "ab"]);
        assert_eq!(code, 0);
        assert!(text.contains("letter a: (x0 -> x0) -> x0 -> x0 -> x0\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("code type=")).count(), 1);
        let (_, text) = run_cli(&["encode", "abcd"]);
        assert!(text.contains("code type=1(2): "));
        assert!(text.contains("code type=3(3): "));
    }

    #[test]
    fn prove_then_check() {
        let dir = tempfile::tempdir().unwrap();
        let t = tag_file(dir.path(), "t1.tag", "deletion: 2\na -> ab\nb -> b\n");
        let out_dir = dir.path().join("out");
        let (code, text) = run_cli(&[
            "prove",
            t.to_str().unwrap(),
            "aaa",
            "--p0",
            "cl_impl",
            "--dir",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{text}");
        for name in ["a1", "a2", "peirce"] {
            let path = out_dir.join(format!("{name}.proof"));
            let (code, text) = run_cli(&["check", path.to_str().unwrap()]);
            assert_eq!(code, 0, "{text}");
            assert!(text.starts_with("valid\n"));
        }
        let peirce = out_dir.join("peirce.proof");
        let (_, text) = run_cli(&["check", peirce.to_str().unwrap()]);
        assert!(text.ends_with("conclusion: ((x -> y) -> x) -> x\n"));

        // tampering with a step is caught by the kernel
        let text = fs::read_to_string(&peirce).unwrap();
        let broken = text.replacen("MP ", "MP 1", 1);
        let bad = out_dir.join("bad.proof");
        fs::write(&bad, broken).unwrap();
        assert_eq!(run_cli(&["check", bad.to_str().unwrap()]).0, 2);
    }

    #[test]
    fn build_and_saturate() {
        let dir = tempfile::tempdir().unwrap();
        let t = tag_file(dir.path(), "t2.tag", "deletion: 2\na -> aa\n");
        let out_dir = dir.path().join("out");
        let (code, text) = run_cli(&[
            "build",
            t.to_str().unwrap(),
            "aa",
            "--p0",
            "cl_impl",
            "--dir",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{text}");
        let calc = out_dir.join("reduction_cl_impl.calc");
        assert!(text.contains("(8 axioms)"));
        let (code, text) = run_cli(&["saturate", calc.to_str().unwrap(), "--depth", "3"]);
        assert_eq!(code, 0);
        assert!(text.trim_end().ends_with("closed"));
    }

    #[test]
    fn roundtrip_examples() {
        let t1 = TagSystem::new(2, &[('a', "ab"), ('b', "b")]).unwrap();
        let p0 = builtin("cl_impl").unwrap();
        let mut out = Vec::new();
        let ok = roundtrip(&t1, &t1.parse_word("aaa").unwrap(), &p0, 100, 10, 10_000, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(ok, "{text}");
        assert!(text.ends_with("HALTS; 3 axiom proofs valid; height found; decoded word b reachable\n"));

        let t2 = TagSystem::new(2, &[('a', "aa")]).unwrap();
        let mut out = Vec::new();
        let ok = roundtrip(&t2, &t2.parse_word("aa").unwrap(), &p0, 100, 10, 10_000, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(ok, "{text}");
        assert!(text.ends_with("NO HALT within fuel 100; no short-word code to depth 10\n"), "{text}");
    }
}
