//! Command-line front end. [`run`] returns the exit status and captured
//! output so the binary stays a thin wrapper.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use crate::cipher::{decrypt, encrypt, keygen, PgmKey};
use crate::error::{Error, Result};
use crate::group::{make_group, GroupSpec, GroupTable, SubgroupChain, DEFAULT_DEGREE_LIMIT};
use crate::perm::Permutation;
use crate::permgroup::{
    analyze_with, brute_force_closure, factorial, format_block_systems, schreier_sims_with_degree,
    GroupFacts, BRUTE_FORCE_MAX_DEGREE,
};
use crate::transforms::{choose_subgroups, eh_generating_set, EhConfig};
use crate::witnesses::{
    is_member, mover_two_transitive, odd_parity_generator, psquare_extra_generator,
    three_cycle_odd, ProofContext, WitnessWord,
};

#[derive(Debug, Parser)]
#[command(
    name = "pgm",
    version,
    about = "PGM round functions and the permutation groups they generate"
)]
pub struct Cli {
    /// Largest group order accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_LIMIT)]
    pub degree_limit: usize,
    /// Stable key=value output.
    #[arg(long, global = true)]
    pub porcelain: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or check group tables.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Assemble the generating set and report the group it generates.
    Verify(VerifyArgs),
    /// Cyclic group of order p^2: before and after the extra generator.
    Psquare {
        #[arg(long)]
        p: usize,
    },
    /// Explicit words in the generating set.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Single-block encryption with signature keys.
    #[command(subcommand)]
    Cipher(CipherCmd),
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    /// Print the table of SPEC in the group file format.
    Make { spec: String },
    /// Check a group file.
    Validate { file: String },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Group descriptor; repeat to run several in parallel.
    #[arg(long = "group", required = true)]
    pub groups: Vec<String>,
    /// Include transforms through a second subgroup.
    #[arg(long)]
    pub cross: bool,
    /// Extra seeded cross transforms.
    #[arg(long = "seed")]
    pub seeds: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct GroupArg {
    #[arg(long)]
    pub group: String,
}

#[derive(Debug, Subcommand)]
pub enum WitnessCmd {
    /// Word sending (x, x2) to (y, y2).
    Move {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        x2: usize,
        #[arg(long)]
        y: usize,
        #[arg(long)]
        y2: usize,
        /// Also list the literal generator letters.
        #[arg(long)]
        expand: bool,
    },
    /// 3-cycle on a block (odd degree only).
    Threecycle {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value_t = 0)]
        block: usize,
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
    },
    /// An odd element of the generated group.
    Odd {
        #[command(flatten)]
        group: GroupArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum CipherCmd {
    /// Print a key file.
    Keygen {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Encrypt {
        #[arg(long)]
        key: String,
        #[arg(long)]
        m: usize,
    },
    Decrypt {
        #[arg(long)]
        key: String,
        #[arg(long)]
        c: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Symmetric,
    ProperImprimitive,
    Other,
}

impl Verdict {
    pub fn of(facts: &GroupFacts) -> Verdict {
        if facts.is_symmetric {
            Verdict::Symmetric
        } else if !facts.minimal_block_systems.is_empty() {
            Verdict::ProperImprimitive
        } else {
            Verdict::Other
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Symmetric => "SYMMETRIC",
            Verdict::ProperImprimitive => "PROPER_IMPRIMITIVE",
            Verdict::Other => "OTHER",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub group: String,
    pub n: usize,
    pub h: String,
    pub k: Option<String>,
    pub generators: usize,
    pub facts: GroupFacts,
    pub verdict: Verdict,
    pub elapsed_ms: u128,
}

impl ExperimentReport {
    pub fn render(&self, porcelain: bool) -> String {
        let k = self.k.clone().unwrap_or_else(|| "none".into());
        let rows = [
            ("group", self.group.clone()),
            ("n", self.n.to_string()),
            ("H", self.h.clone()),
            ("K", k),
            ("generators", self.generators.to_string()),
            ("order", self.facts.order.to_string()),
            ("factorial", factorial(self.n).to_string()),
            ("verdict", self.verdict.as_str().to_string()),
            ("transitivity", self.facts.transitivity.to_string()),
            (
                "blocks",
                format_block_systems(&self.facts.minimal_block_systems),
            ),
        ];
        let mut out = String::new();
        if porcelain {
            for (key, v) in rows {
                let _ = writeln!(out, "{key}={v}");
            }
        } else {
            for (key, v) in rows {
                let _ = writeln!(out, "{key:<13}{v}");
            }
            let _ = writeln!(out, "{:<13}{} ms", "elapsed", self.elapsed_ms);
        }
        out
    }
}

/// Exit status and text for stdout and stderr.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Outcome {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {}: {e}\n", error_name(e)),
        }
    }
}

fn error_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    execute(&cli).unwrap_or_else(|e| Outcome::error(&e))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let limit = cli.degree_limit;
    match &cli.command {
        Command::Group(GroupCmd::Make { spec }) => {
            Ok(Outcome::ok(build_group(spec, limit)?.to_text()))
        }
        Command::Group(GroupCmd::Validate { file }) => {
            let g = GroupTable::from_text(&read(file)?)?;
            let relabel = g
                .relabeled_from()
                .map_or_else(|| "none".to_string(), |i| i.to_string());
            Ok(Outcome::ok(format!(
                "valid=true\nn={}\nrelabeled_from={relabel}\n",
                g.order()
            )))
        }
        Command::Verify(v) => verify(v, limit, cli.porcelain),
        Command::Psquare { p } => psquare(*p, limit, cli.porcelain),
        Command::Witness(w) => witness(w, limit),
        Command::Cipher(c) => cipher(c, limit),
    }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::BadConfig(format!("cannot read {path}: {e}")))
}

fn build_group(spec: &str, limit: usize) -> Result<Arc<GroupTable>> {
    Ok(Arc::new(make_group(&spec.parse::<GroupSpec>()?, limit)?))
}

/// Builds the generating set for `spec` and analyzes it.
pub fn experiment(
    spec: &str,
    cross: bool,
    seeds: &[u64],
    limit: usize,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let group = build_group(spec, limit)?;
    let cfg = EhConfig::standard(group.clone(), cross, seeds.to_vec(), limit)?;
    let eh = eh_generating_set(&cfg)?;
    let gens = eh.permutations();
    let bsgs = schreier_sims_with_degree(&gens, eh.degree())?;
    let facts = analyze_with(&bsgs, &gens);
    Ok(ExperimentReport {
        group: spec.to_string(),
        n: group.order(),
        h: eh.subgroup().to_string(),
        k: if cross {
            eh.secondary_subgroup().map(ToString::to_string)
        } else {
            None
        },
        generators: gens.len(),
        verdict: Verdict::of(&facts),
        facts,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn verify(v: &VerifyArgs, limit: usize, porcelain: bool) -> Result<Outcome> {
    let reports: Vec<Result<ExperimentReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = v
            .groups
            .iter()
            .map(|g| s.spawn(|| experiment(g, v.cross, &v.seeds, limit)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verify worker panicked"))
            .collect()
    });
    let expected = if v.cross {
        Verdict::Symmetric
    } else {
        Verdict::ProperImprimitive
    };
    let mut out = Outcome::default();
    for (i, r) in reports.into_iter().enumerate() {
        if i > 0 {
            out.stdout.push('\n');
        }
        let r = r?;
        out.stdout.push_str(&r.render(porcelain));
        if r.verdict != expected {
            out.code = 1;
            let _ = writeln!(
                out.stderr,
                "mismatch for {}: expected verdict {}, computed {} (order {})",
                r.group,
                expected.as_str(),
                r.verdict.as_str(),
                r.facts.order
            );
        }
    }
    Ok(out)
}

fn psquare(p: usize, limit: usize, porcelain: bool) -> Result<Outcome> {
    let extra = psquare_extra_generator(p, limit)?;
    let n = p * p;
    let group = build_group(&format!("cyclic:{n}"), limit)?;
    let eh = eh_generating_set(&EhConfig::standard(group, false, vec![], limit)?)?;
    let mut gens = eh.permutations();
    let before = analyze_with(&schreier_sims_with_degree(&gens, n)?, &gens);
    gens.push(extra.clone());
    let after = analyze_with(&schreier_sims_with_degree(&gens, n)?, &gens);

    let mut out = Outcome::default();
    let mut mismatch = |what: &str, expected: String, computed: String| {
        out.code = 1;
        let _ = writeln!(
            out.stderr,
            "mismatch in {what}: expected {expected}, computed {computed}"
        );
    };
    if n <= BRUTE_FORCE_MAX_DEGREE {
        let closure = brute_force_closure(&eh.permutations(), n)?.len();
        if BigUint::from(closure) != before.order {
            mismatch(
                "part 1 order",
                closure.to_string(),
                before.order.to_string(),
            );
        }
    }
    let (v1, v2) = (Verdict::of(&before), Verdict::of(&after));
    if v1 != Verdict::ProperImprimitive {
        mismatch(
            "part 1 verdict",
            "PROPER_IMPRIMITIVE".into(),
            v1.as_str().into(),
        );
    }
    if v2 != Verdict::Symmetric {
        mismatch("part 2 verdict", "SYMMETRIC".into(), v2.as_str().into());
    }
    let rows = [
        ("p", p.to_string()),
        ("n", n.to_string()),
        ("factorial", factorial(n).to_string()),
        ("part1.order", before.order.to_string()),
        (
            "part1.blocks",
            format_block_systems(&before.minimal_block_systems),
        ),
        ("part1.transitivity", before.transitivity.to_string()),
        ("part1.verdict", v1.as_str().to_string()),
        ("extra_generator", extra.to_string()),
        ("part2.order", after.order.to_string()),
        ("part2.verdict", v2.as_str().to_string()),
    ];
    for (key, v) in rows {
        let _ = if porcelain {
            writeln!(out.stdout, "{key}={v}")
        } else {
            writeln!(out.stdout, "{key:<20}{v}")
        };
    }
    Ok(out)
}

/// Context with cross transforms whenever a second subgroup exists.
pub fn witness_context(spec: &str, limit: usize) -> Result<ProofContext> {
    let group = build_group(spec, limit)?;
    let (_, k) = choose_subgroups(&group, limit)?;
    ProofContext::standard(group, k.is_some(), vec![], limit)
}

fn witness(w: &WitnessCmd, limit: usize) -> Result<Outcome> {
    let (word, ctx, letters) = match w {
        WitnessCmd::Move {
            group,
            x,
            x2,
            y,
            y2,
            expand,
        } => {
            let ctx = witness_context(&group.group, limit)?;
            let word = mover_two_transitive(&ctx, *x, *x2, *y, *y2)?;
            let letters = if *expand {
                Some(ctx.expand(&word)?)
            } else {
                None
            };
            (word, ctx, letters)
        }
        WitnessCmd::Threecycle { group, block, a, b } => {
            let ctx = witness_context(&group.group, limit)?;
            (three_cycle_odd(&ctx, *block, *a, *b)?, ctx, None)
        }
        WitnessCmd::Odd { group } => {
            let ctx = witness_context(&group.group, limit)?;
            (odd_parity_generator(&ctx)?, ctx, None)
        }
    };
    let mut out = Outcome::ok(word.to_text());
    if let Some(letters) = letters {
        let folded = letters
            .iter()
            .fold(Permutation::identity(ctx.degree()), |acc, &l| {
                acc.then(&ctx.letter_perm(l))
            });
        for l in &letters {
            let _ = writeln!(
                out.stderr,
                "letter g{}{}",
                l.generator,
                if l.inverse { "^-1" } else { "" }
            );
        }
        if folded != word.product {
            out.code = 1;
            let _ = writeln!(
                out.stderr,
                "mismatch: expanded letters give {folded}, word gives {}",
                word.product
            );
        }
    }
    if !is_member(&ctx, &word)? {
        out.code = 1;
        let _ = writeln!(
            out.stderr,
            "mismatch: product {} is not in the generated group",
            word.product
        );
    }
    check_round_trip(&ctx, &word, &mut out);
    Ok(out)
}

fn check_round_trip(ctx: &ProofContext, word: &WitnessWord, out: &mut Outcome) {
    if WitnessWord::from_text(ctx, &word.to_text()).as_ref() != Ok(word) {
        out.code = 1;
        let _ = writeln!(out.stderr, "mismatch: witness text does not parse back");
    }
}

fn cipher(c: &CipherCmd, limit: usize) -> Result<Outcome> {
    match c {
        CipherCmd::Keygen { group, seed } => {
            let g = build_group(group, limit)?;
            let (h, _) = choose_subgroups(&g, limit)?;
            let chain = SubgroupChain::through(&g, &[h])?;
            Ok(Outcome::ok(keygen(g, &chain, *seed)?.to_text()))
        }
        CipherCmd::Encrypt { key, m } => {
            let k = PgmKey::from_text(&read(key)?)?;
            Ok(Outcome::ok(format!("{}\n", encrypt(&k, *m)?)))
        }
        CipherCmd::Decrypt { key, c } => {
            let k = PgmKey::from_text(&read(key)?)?;
            Ok(Outcome::ok(format!("{}\n", decrypt(&k, *c)?)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pgm(args: &str) -> Outcome {
        run(std::iter::once("pgm").chain(args.split_whitespace()))
    }

    fn value<'a>(out: &'a str, key: &str) -> &'a str {
        out.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}=")))
            .unwrap_or_else(|| panic!("no {key} in {out}"))
    }

    #[test]
    fn verify_cross_symmetric() {
        let o = pgm("--porcelain verify --group cyclic:6 --cross");
        assert_eq!(o.code, 0, "{o:?}");
        assert_eq!(value(&o.stdout, "verdict"), "SYMMETRIC");
        assert_eq!(value(&o.stdout, "order"), "720");
        assert!(!o.stdout.contains("elapsed"));
    }

    #[test]
    fn verify_prime_order_is_usage_error() {
        let o = pgm("verify --group cyclic:5");
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("ChainTooShort"), "{}", o.stderr);
        assert_eq!(pgm("verify --group nonsense").code, 2);
        assert_eq!(pgm("frobnicate").code, 2);
    }

    #[test]
    fn verify_without_cross_is_imprimitive() {
        let o = pgm("--porcelain verify --group cyclic:4 --group dihedral:3");
        assert_eq!(o.code, 0, "{o:?}");
        assert!(o.stdout.contains("blocks={{0,2},{1,3}}"));
        assert!(o.stdout.contains("order=48"));
    }

    #[test]
    fn psquare_two() {
        let o = pgm("--porcelain psquare --p 2");
        assert_eq!(o.code, 0, "{o:?}");
        assert_eq!(value(&o.stdout, "part1.order"), "8");
        assert_eq!(value(&o.stdout, "part1.blocks"), "{{0,2},{1,3}}");
        assert_eq!(value(&o.stdout, "part2.order"), "24");
        assert_eq!(pgm("psquare --p 4").code, 2);
    }

    #[test]
    fn witness_commands() {
        let o = pgm("witness move --group cyclic:6 --x 0 --x2 3 --y 1 --y2 5 --expand");
        assert_eq!(o.code, 0, "{o:?}");
        assert!(o.stdout.contains("cross("));
        let o = pgm("witness threecycle --group cyclic:9 --block 0 --a 0 --b 1");
        assert_eq!(o.stdout.lines().last(), Some("3 1 2 6 4 5 0 7 8"));
        assert_eq!(pgm("witness threecycle --group cyclic:6").code, 2);
        assert_eq!(pgm("witness odd --group quaternion").code, 0);
    }

    #[test]
    fn group_and_cipher_files() {
        let dir = tempfile::tempdir().unwrap();
        let gpath = dir.path().join("g.txt");
        std::fs::write(&gpath, pgm("group make dihedral:4").stdout).unwrap();
        let o = pgm(&format!("group validate {}", gpath.display()));
        assert_eq!(value(&o.stdout, "n"), "8");

        let kpath = dir.path().join("k.txt");
        std::fs::write(
            &kpath,
            pgm("cipher keygen --group cyclic:6 --seed 4").stdout,
        )
        .unwrap();
        let c = pgm(&format!("cipher encrypt --key {} --m 5", kpath.display())).stdout;
        let m = pgm(&format!(
            "cipher decrypt --key {} --c {}",
            kpath.display(),
            c.trim()
        ))
        .stdout;
        assert_eq!(m.trim(), "5");
        assert_eq!(
            pgm(&format!("cipher decrypt --key {} --c 6", kpath.display())).code,
            2
        );
    }
}
