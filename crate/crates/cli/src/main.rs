use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use snakelab::cache::CharCache;
use snakelab::imaginary::{certify, imaginary_weight, path_factorization_holds, ImaginaryInput};
use snakelab::inflation::InflationTriple;
use snakelab::paths::{enumerate_paths, paths_svg};
use snakelab::qcharacter::{
    enumerate_prime_snakes, ext_tsystem, snake_components, tensor_irreducible_kr, tsystem_pm_coefficient,
    verify_identity,
};
use snakelab::segments::{factorize, position};
use snakelab::verify::{run_criterion, run_suite, Profile, Report};
use snakelab::{exec, limits, Character, LWeight, PrimeSnake, Segment, SegmentContext};

#[derive(Parser)]
#[command(name = "snakelab", version, about = "Snake modules, segments and q-characters for quantum affine sl(n+1)")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Character cache directory (default: $SNAKELAB_CACHE_DIR, else no disk cache).
    #[arg(long, global = true, env = "SNAKELAB_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Keep characters in memory only.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, default_value_t = limits::DEFAULT_MAX_RANK, value_parser = clap::value_parser!(u32).range(1..))]
    max_rank: u32,
    /// Largest character, in terms, before a computation is refused.
    #[arg(long, global = true, default_value_t = limits::DEFAULT_MAX_TERMS, value_parser = positive)]
    max_terms: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args, Clone, Copy)]
struct Ctx {
    #[arg(long)]
    i: u32,
    #[arg(long)]
    n: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Split a multiset of shifts into segments in pairwise general position.
    Factorize {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(allow_negative_numbers = true, required = true)]
        shifts: Vec<i64>,
    },
    /// General or special position of two segments.
    Position {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        b: Vec<i64>,
    },
    /// The paths of a fundamental family.
    Paths {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        /// Also print the monomial of each path.
        #[arg(long)]
        monomials: bool,
        /// Write an SVG drawing of the paths.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// The q-character of a snake module.
    Qchar {
        #[arg(long)]
        n: u32,
        /// Factors as node:shift[,node:shift...].
        #[arg(long, allow_hyphen_values = true)]
        snake: String,
        /// Keep only some monomials: dominant, H:IBAR,N or H1:IBAR,N.
        #[arg(long)]
        truncate: Option<String>,
    },
    /// Whether the tensor product of the KR modules of some segments is simple.
    Tensor {
        #[command(flatten)]
        ctx: Ctx,
        /// One segment, comma separated; repeat for more.
        #[arg(long = "seg", allow_hyphen_values = true, required = true)]
        segs: Vec<String>,
    },
    /// Check the extended T-system relation for a pair of prime snakes.
    Tsys {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[arg(long, allow_hyphen_values = true)]
        omega2: String,
    },
    /// Apply the inflation map to a monomial.
    Inflate {
        #[arg(long)]
        ibar: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        monomial: String,
    },
    /// Highest ℓ-weight of the imaginary module attached to a segment.
    Imaginary {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: u32,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        b: Vec<i64>,
        /// Run every certificate check.
        #[arg(long)]
        certify: bool,
        #[arg(long = "type", value_enum, default_value_t = LieType::A)]
        lie_type: LieType,
    },
    /// Run acceptance checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LieType {
    A,
    D,
}

#[derive(Args, Clone, Copy)]
struct Triple {
    #[arg(long)]
    ibar: u32,
    #[arg(long)]
    i: u32,
    #[arg(long)]
    n: u32,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every criterion plus the determinism rerun.
    All {
        #[arg(long, default_value = "smoke")]
        profile: Profile,
    },
    /// A single criterion.
    Criterion {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=10))]
        id: u32,
        #[arg(long, default_value = "smoke")]
        profile: Profile,
    },
    /// Path inflation against the path model on small prime snakes.
    Inflpaths {
        #[command(flatten)]
        triple: Triple,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long, default_value_t = 8)]
        window: i64,
    },
    /// The first induction identity for every admissible index.
    Indstep {
        #[command(flatten)]
        triple: Triple,
    },
}

/// Failures that map to exit status 2.
struct Usage(String);

impl From<snakelab::Error> for Usage {
    fn from(e: snakelab::Error) -> Self {
        Usage(e.to_string())
    }
}

struct Out {
    text: String,
    json: Value,
    ok: bool,
}

impl Out {
    fn new(text: String, json: Value, ok: bool) -> Self {
        Out { text, json, ok }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    limits::set_max_rank(cli.max_rank);
    limits::set_max_terms(cli.max_terms);
    let threads = cli.threads;
    match exec::with_threads(threads, || run(&cli)) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn context(c: Ctx) -> Result<SegmentContext, Usage> {
    limits_rank(c.n)?;
    Ok(SegmentContext::new(c.i, c.n)?)
}

fn limits_rank(n: u32) -> Result<(), Usage> {
    if n > limits::max_rank() {
        return Err(snakelab::Error::RankCap { rank: n, cap: limits::max_rank() }.into());
    }
    Ok(())
}

fn seg_text(s: &Segment) -> String {
    let e: Vec<String> = s.entries().iter().map(|x| x.to_string()).collect();
    format!("({})", e.join(","))
}

fn cache(cli: &Cli) -> CharCache {
    match (&cli.cache_dir, cli.no_cache) {
        (Some(d), false) => CharCache::open(d),
        _ => CharCache::memory_only(),
    }
}

/// The character of `V(x)` for a snake `x`, one prime piece at a time.
fn snake_character(cache: &CharCache, x: &LWeight) -> Result<Character, Usage> {
    let pieces = snake_components(x)?;
    let chars = pieces.iter().map(|p| cache.snake_char(p)).collect::<snakelab::Result<Vec<_>>>()?;
    Ok(Character::product(x.rank(), &chars)?)
}

fn character_text(c: &Character) -> String {
    let mut s = String::new();
    for (m, k) in c.terms() {
        if k == 1 {
            s.push_str(&format!("{m}\n"));
        } else {
            s.push_str(&format!("{k} {m}\n"));
        }
    }
    s
}

fn parse_triple(t: Triple) -> Result<InflationTriple, Usage> {
    limits_rank(t.n)?;
    Ok(InflationTriple::new(t.ibar, t.i, t.n)?)
}

type Filter = Box<dyn Fn(&LWeight) -> bool>;

fn truncation(spec: &str, n: u32) -> Result<Filter, Usage> {
    if spec == "dominant" {
        return Ok(Box::new(|m: &LWeight| m.is_dominant()));
    }
    let bad = || Usage(format!("bad truncation `{spec}`, expected dominant, H:IBAR,N or H1:IBAR,N"));
    let (kind, args) = spec.split_once(':').ok_or_else(bad)?;
    let level_one = match kind {
        "H" => false,
        "H1" => true,
        _ => return Err(bad()),
    };
    let (ibar, rank) = args.split_once(',').ok_or_else(bad)?;
    let ibar: u32 = ibar.trim().parse().map_err(|_| bad())?;
    let rank: u32 = rank.trim().parse().map_err(|_| bad())?;
    if rank != n {
        return Err(Usage(format!("truncation is for rank {rank} but the snake has rank {n}")));
    }
    if !(n + 1).is_multiple_of(ibar + 1) {
        return Err(Usage(format!("ibar+1 = {} does not divide n+1 = {}", ibar + 1, n + 1)));
    }
    let t = InflationTriple::new(ibar, (n + 1) / (ibar + 1), n)?;
    Ok(Box::new(move |m: &LWeight| t.in_h(m, level_one)))
}

fn report_out(r: Report) -> Out {
    let ok = r.passed();
    let json = serde_json::to_value(&r).expect("serializable");
    Out::new(r.render(), json, ok)
}

fn run(cli: &Cli) -> Result<Out, Usage> {
    match &cli.cmd {
        Cmd::Factorize { ctx, shifts } => {
            let c = context(*ctx)?;
            let segs = factorize(&c, shifts);
            let text: String = segs.iter().map(|s| seg_text(s) + "\n").collect();
            let json = json!({"i": ctx.i, "n": ctx.n, "segments": segs});
            Ok(Out::new(text, json, true))
        }
        Cmd::Position { ctx, a, b } => {
            let c = context(*ctx)?;
            let (sa, sb) = (Segment::new(&c, a.clone())?, Segment::new(&c, b.clone())?);
            let p = position(&c, &sa, &sb);
            let text = match &p {
                snakelab::segments::Position::General { reason } => format!("general ({reason:?})\n"),
                snakelab::segments::Position::Special { evidence } => {
                    format!("special (longer segment {})\n", seg_text(evidence))
                }
            };
            let json = json!({"a": sa, "b": sb, "verdict": p});
            Ok(Out::new(text, json, true))
        }
        Cmd::Paths { ctx, a, monomials, plot } => {
            limits_rank(ctx.n)?;
            let ps = enumerate_paths(ctx.i, *a, ctx.n)?;
            if let Some(f) = plot {
                std::fs::write(f, paths_svg(&ps)).map_err(|e| Usage(format!("cannot write {}: {e}", f.display())))?;
            }
            let mut text = String::new();
            let mut rows = Vec::new();
            for p in &ps {
                let vals: Vec<String> = p.values().iter().map(|v| v.to_string()).collect();
                let m = p.monomial();
                text.push_str(&format!("({})", vals.join(",")));
                if *monomials {
                    text.push_str(&format!("  {m}"));
                }
                text.push('\n');
                rows.push(json!({"values": p.values(), "monomial": m}));
            }
            Ok(Out::new(text, json!({"i": ctx.i, "a": a, "n": ctx.n, "paths": rows}), true))
        }
        Cmd::Qchar { n, snake, truncate } => {
            limits_rank(*n)?;
            let w = LWeight::parse_compact(*n, snake)?;
            let mut c = snake_character(&cache(cli), &w)?;
            if let Some(spec) = truncate {
                let keep = truncation(spec, *n)?;
                c = c.truncate(|m| keep(m));
            }
            let json = json!({"n": n, "snake": w, "terms": c.len(), "character": c});
            Ok(Out::new(character_text(&c), json, true))
        }
        Cmd::Tensor { ctx, segs } => {
            let c = context(*ctx)?;
            let segments = group_segments(&c, segs)?;
            let simple = tensor_irreducible_kr(&c, &segments);
            let text = format!("{}\n", if simple { "irreducible" } else { "reducible" });
            Ok(Out::new(text, json!({"segments": segments, "irreducible": simple}), simple))
        }
        Cmd::Tsys { n, omega, omega2 } => {
            limits_rank(*n)?;
            let w = PrimeSnake::from_lweight(&LWeight::parse_compact(*n, omega)?)?;
            let w2 = PrimeSnake::from_lweight(&LWeight::parse_compact(*n, omega2)?)?;
            let t = ext_tsystem(&w, &w2)?;
            let holds = verify_identity(&t.lhs, &t.rhs)?;
            let coeff = tsystem_pm_coefficient(&t)?;
            let ok = holds && coeff == 0;
            let text = format!(
                "lhs: {}\nrhs: {}\nidentity: {}\ncoefficient of omega+ omega- in the first product: {coeff}\n",
                t.lhs,
                t.rhs,
                if holds { "holds" } else { "fails" }
            );
            let json = json!({"tsystem": t, "identity_holds": holds, "pm_coefficient": coeff, "passed": ok});
            Ok(Out::new(text, json, ok))
        }
        Cmd::Inflate { ibar, i, n, monomial } => {
            let t = parse_triple(Triple { ibar: *ibar, i: *i, n: *n })?;
            let x = LWeight::parse_compact(*ibar, monomial)?;
            let y = t.phi(&x)?;
            Ok(Out::new(format!("{y}\n"), json!({"input": x, "image": y}), true))
        }
        Cmd::Imaginary { n, i, b, certify: full, lie_type } => {
            if let LieType::D = lie_type {
                return Err(Usage(
                    "type D is not supported: only type A constructions are implemented (see the README)".into(),
                ));
            }
            limits_rank(*n)?;
            let input = ImaginaryInput::new(*n, *i, b.clone())?;
            if *full {
                let cert = certify(&input)?;
                let ok = cert.all_pass();
                let verdict = if ok { "imaginary: every certificate passes" } else { "uncertified" };
                let json = json!({
                    "omega": cert.omega,
                    "certificates": {
                        "dominant": cert.dominant,
                        "path_factorization": cert.path_factorization,
                        "dim_one": cert.dim_one,
                        "dim_one_squared": cert.dim_one_squared,
                        "classification": if cert.classification.passes { "pass" } else { "fail" },
                        "targets": cert.classification.targets,
                    },
                    "verdict": verdict,
                });
                let text = format!(
                    "omega: {}\ndominant: {}\npath factorization: {}\ndim one: {}\ndim one (square): {}\nclassification: {}\n{verdict}\n",
                    cert.omega,
                    cert.dominant,
                    cert.path_factorization,
                    cert.dim_one,
                    cert.dim_one_squared,
                    if cert.classification.passes { "pass" } else { "fail" },
                );
                Ok(Out::new(text, json, ok))
            } else {
                let w = imaginary_weight(&input);
                let pf = path_factorization_holds(&input)?;
                let json = json!({"omega": w, "certificates": {"dominant": w.is_dominant(), "path_factorization": pf}});
                Ok(Out::new(format!("{w}\n"), json, true))
            }
        }
        Cmd::Verify { what } => verify(what),
    }
}

fn group_segments(c: &SegmentContext, raw: &[String]) -> Result<Vec<Segment>, Usage> {
    let mut out = Vec::new();
    for s in raw {
        let xs = s
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| Usage(format!("bad segment entry `{x}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(Segment::new(c, xs)?);
    }
    Ok(out)
}

fn verify(what: &VerifyCmd) -> Result<Out, Usage> {
    match what {
        VerifyCmd::All { profile } => Ok(report_out(run_suite(*profile))),
        VerifyCmd::Criterion { id, profile } => {
            Ok(report_out(Report { profile: *profile, criteria: vec![run_criterion(*id, *profile)] }))
        }
        VerifyCmd::Inflpaths { triple, max_len, window } => {
            let t = parse_triple(*triple)?;
            let snakes = enumerate_prime_snakes(triple.ibar, *max_len, *window);
            let results = exec::map(&snakes, |s| t.verify_inflpaths(s));
            let mut failures = Vec::new();
            for (s, r) in snakes.iter().zip(results) {
                if !r? {
                    failures.push(s.to_lweight());
                }
            }
            let ok = failures.is_empty();
            let text = format!(
                "inflpaths {}: {} snakes, {} failures\n",
                if ok { "PASS" } else { "FAIL" },
                snakes.len(),
                failures.len()
            );
            let json = json!({"triple": t, "snakes": snakes.len(), "failures": failures, "passed": ok});
            Ok(Out::new(text, json, ok))
        }
        VerifyCmd::Indstep { triple } => {
            let t = parse_triple(*triple)?;
            let mut rows = Vec::new();
            let mut text = String::new();
            let mut ok = true;
            for p in t.index_set() {
                let holds = t.verify_indstep_i(p)?;
                ok &= holds;
                text.push_str(&format!("p={p}: {}\n", if holds { "holds" } else { "fails" }));
                rows.push(json!({"p": p, "holds": holds}));
            }
            Ok(Out::new(text, json!({"triple": t, "checks": rows, "passed": ok}), ok))
        }
    }
}
