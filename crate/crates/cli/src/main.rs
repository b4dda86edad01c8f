use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bspaths::checks::{verify_suite, VerifyOptions};
use bspaths::hereditary::{
    chain_bs2, max_tail, member, separation_witness, structural_flags, Descriptor, TailBound,
};
use bspaths::ktheory::{fixed_point_k_groups, k_groups};
use bspaths::lattice::{
    exhaustive, join, join_oracle, lfe_witness, meets, presentation, quasi_lattice_generator,
    GroupElementPair, JoinResult,
};
use bspaths::odometer::{b_action, phi, PrefixSeq};
use bspaths::{normalize, parse_grid, parse_word, to_form_r, BSParams, Case, EventuallyPeriodicSeq, PathL};

#[derive(Parser, Debug)]
#[command(name = "bspaths", version, about = "Normal forms, joins, odometers and K-theory for Baumslag-Solitar monoids")]
struct Cli {
    #[arg(long, global = true)]
    c: Option<u32>,
    #[arg(long, global = true)]
    d: Option<u32>,
    /// Use the relation a b^c a^-1 = b^-d.
    #[arg(long, global = true)]
    negative: bool,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Search depth for oracle cross-checks.
    #[arg(long, global = true)]
    depth: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form (L) of a word.
    Normalize { word: String },
    /// Normal form (R) of a word.
    Formr { word: String },
    /// Whether two elements have a common extension.
    Meets { w1: String, w2: String },
    /// Minimal common extension of two elements.
    Join { w1: String, w2: String },
    /// Generator of t Λ ∩ Λ for t = w1 w2^-1.
    Qlgen { w1: String, w2: String },
    /// Whether every element meets one of the given elements.
    Exhaustive {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// phi on a finite prefix, with its carries.
    Phi { seq: String },
    /// The action of b^n on a finite prefix.
    Orbit {
        seq: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Membership of a word in a directed hereditary set given as JSON.
    Member { desc: String, word: String },
    /// The infinite-height sets attached to a boundary sequence.
    ClassifySigma { seq: String },
    /// The chain C_0 ⊊ ... ⊊ C_inf for d > c.
    Chain { seq: String },
    /// An extension separating two elements.
    Witness { w1: String, w2: String },
    /// Generators and relations of the boundary algebra.
    Present,
    /// K-groups of the boundary algebra and of its fixed-point algebra.
    Ktheory,
    /// Seeded self-checks over a grid of parameters.
    Verify {
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

struct Response {
    json: Value,
    text: String,
    ok: bool,
}

impl Response {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Response {
            json,
            text: text.into(),
            ok: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let output = cli.output;
    match run(cli) {
        Ok(Err(usage)) => {
            eprintln!("error: {usage}");
            ExitCode::from(2)
        }
        Ok(Ok(r)) => {
            match output {
                Output::Json => println!("{}", r.json),
                Output::Text => println!("{}", r.text),
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match output {
                Output::Json => println!("{}", json!({ "error": format!("{e:#}") })),
                Output::Text => eprintln!("error: {e:#}"),
            }
            ExitCode::from(1)
        }
    }
}

/// The outer error is a domain error, the inner one a usage error.
fn run(cli: Cli) -> Result<std::result::Result<Response, String>> {
    if let Command::Verify { grid, seed, samples } = &cli.command {
        let grid = match grid {
            Some(g) => parse_grid(g).map_err(|e| anyhow!(e)).context("bad --grid")?,
            None => BSParams::default_grid(),
        };
        if grid.is_empty() {
            return Ok(Err("empty grid".into()));
        }
        let opts = VerifyOptions {
            seed: *seed,
            samples: *samples,
            ..VerifyOptions::default()
        };
        let report = verify_suite(&grid, &opts);
        let lines: Vec<Value> = report
            .lines
            .iter()
            .map(|l| json!({"params": l.params, "check": l.name, "passed": l.passed, "detail": l.detail}))
            .collect();
        let ok = report.all_passed();
        return Ok(Ok(Response {
            json: json!({"passed": ok, "checks": lines}),
            text: report.to_string(),
            ok,
        }));
    }

    let (Some(c), Some(d)) = (cli.c, cli.d) else {
        return Ok(Err("--c and --d are required".into()));
    };
    let p = if cli.negative {
        BSParams::negative(c, d)
    } else {
        BSParams::positive(c, d)
    };
    let p = p.map_err(|e| anyhow!(e))?;
    dispatch(p, cli.depth, cli.command).map(Ok)
}

fn word(p: BSParams, text: &str) -> Result<PathL> {
    let w = parse_word(text).with_context(|| format!("cannot parse {text:?}"))?;
    normalize(&w, p).with_context(|| format!("{text:?}"))
}

fn path_json(a: &PathL) -> Value {
    serde_json::to_value(a).expect("paths serialize")
}

fn prefix(p: BSParams, text: &str) -> Result<PrefixSeq> {
    PrefixSeq::parse(p, text).with_context(|| format!("bad sequence {text:?}"))
}

fn digits(s: &PrefixSeq) -> String {
    s.entries()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn boundary_seq(p: BSParams, text: &str) -> Result<EventuallyPeriodicSeq> {
    let i = EventuallyPeriodicSeq::parse(text)?;
    i.check_bound(p.d())?;
    Ok(i)
}

fn tail_profile(d: &Descriptor, p: BSParams, heights: usize) -> Result<Vec<Value>> {
    (0..heights)
        .map(|h| Ok(serde_json::to_value(max_tail(d, p, h)?)?))
        .collect()
}

fn profile_text(d: &Descriptor, p: BSParams, heights: usize) -> Result<String> {
    let v: Result<Vec<String>> = (0..heights)
        .map(|h| Ok(max_tail(d, p, h)?.to_string()))
        .collect();
    Ok(v?.join(" "))
}

fn dispatch(p: BSParams, depth: Option<u64>, cmd: Command) -> Result<Response> {
    Ok(match cmd {
        Command::Normalize { word: w } => {
            let a = word(p, &w)?;
            Response::new(path_json(&a), a.to_string())
        }
        Command::Formr { word: w } => {
            let r = to_form_r(&word(p, &w)?);
            let json = json!({"lead": r.lead().to_string(), "letters": r.letters()});
            Response::new(json, r.to_string())
        }
        Command::Meets { w1, w2 } => {
            let m = meets(&word(p, &w1)?, &word(p, &w2)?)?;
            Response::new(json!({ "meets": m }), m.to_string())
        }
        Command::Join { w1, w2 } => {
            let (a, b) = (word(p, &w1)?, word(p, &w2)?);
            let j = join(&a, &b)?;
            let mut json = serde_json::to_value(&j)?;
            let mut text = match &j {
                JoinResult::Disjoint => "disjoint".to_string(),
                JoinResult::Join(g) => g.to_string(),
            };
            if let Some(depth) = depth {
                let oracle = join_oracle(&a, &b, depth)?;
                let agrees = oracle.as_slice() == j.value().cloned().as_slice();
                json["oracle_agrees"] = json!(agrees);
                text.push_str(&format!("\noracle at depth {depth}: {}", if agrees { "agrees" } else { "differs" }));
            }
            Response::new(json, text)
        }
        Command::Qlgen { w1, w2 } => {
            let t = GroupElementPair::new(word(p, &w1)?, word(p, &w2)?)?;
            if p.case() == Case::BS3 && p.c() > 1 {
                let f = lfe_witness(&t)?;
                let text = f.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
                Response::new(json!({ "lfe": f.iter().map(path_json).collect::<Vec<_>>() }), format!("finitely exhaustible by {{{text}}}"))
            } else {
                match quasi_lattice_generator(&t)? {
                    Some(g) => Response::new(json!({ "generator": path_json(&g) }), g.to_string()),
                    None => Response::new(json!({ "generator": null }), "empty"),
                }
            }
        }
        Command::Exhaustive { words } => {
            let f = words.iter().map(|w| word(p, w)).collect::<Result<Vec<_>>>()?;
            let e = exhaustive(&f);
            Response::new(json!({ "exhaustive": e }), e.to_string())
        }
        Command::Phi { seq } => {
            let i = prefix(p, &seq)?;
            let (f, r) = phi(&i);
            let carries: Vec<String> = r.entries.iter().map(ToString::to_string).collect();
            let json = json!({"phi": f.entries(), "carries": carries, "signs": r.signs});
            Response::new(json, format!("{}\ncarries {}", digits(&f), carries.join(",")))
        }
        Command::Orbit { seq, n } => {
            let i = prefix(p, &seq)?;
            let out = b_action(&i, &n.into());
            Response::new(json!({ "entries": out.entries() }), digits(&out))
        }
        Command::Member { desc, word: w } => {
            let d: Descriptor = serde_json::from_str(&desc).context("descriptor is not valid JSON")?;
            d.validate(p)?;
            let m = member(&d, &word(p, &w)?)?;
            Response::new(json!({ "member": m }), m.to_string())
        }
        Command::ClassifySigma { seq } => classify(p, &boundary_seq(p, &seq)?)?,
        Command::Chain { seq } => {
            let i = boundary_seq(p, &seq)?;
            let (s, m) = chain_bs2(p, &i)?;
            let text = if m == 0 {
                format!("s = {s}: C_0 = C_inf")
            } else {
                format!("s = {s}, m = {m}: {} distinct sets", m + 1)
            };
            Response::new(json!({"s": s, "m": m, "length": m + 1}), text)
        }
        Command::Witness { w1, w2 } => {
            let g = separation_witness(&word(p, &w1)?, &word(p, &w2)?)?;
            Response::new(json!({ "witness": path_json(&g) }), g.to_string())
        }
        Command::Present => {
            let pr = presentation(p);
            let mut text = format!("generators: {}", pr.generators.join(", "));
            for r in &pr.relations {
                text.push_str(&format!("\n({}) {}", r.label, r.text));
                if r.redundant {
                    text.push_str(&format!("  [relation ({}) is redundant]", r.label));
                }
            }
            Response::new(serde_json::to_value(&pr)?, text)
        }
        Command::Ktheory => {
            let k = k_groups(p);
            let fp = fixed_point_k_groups(p);
            let flags = structural_flags(p);
            let mut json = serde_json::to_value(&k)?;
            json["fixed_point"] = serde_json::to_value(&fp)?;
            json["flags"] = serde_json::to_value(flags)?;
            let text = format!(
                "K0 = {}\nK1 = {}\n[1] = {}\nfixed-point algebra: K0 = {}, K1 = {}",
                k.k0, k.k1, k.identity_class, fp.k0, fp.k1
            );
            Response::new(json, text)
        }
        Command::Verify { .. } => bail!("verify is handled before parameter parsing"),
    })
}

fn classify(p: BSParams, i: &EventuallyPeriodicSeq) -> Result<Response> {
    const HEIGHTS: usize = 4;
    let mut sets: Vec<Descriptor> = Vec::new();
    let mut note = String::new();
    match p.case() {
        Case::BS1 => {
            sets.push(Descriptor::C0 { i: i.clone() });
            sets.push(Descriptor::CInf { i: i.clone() });
            note = "between them: C_n(i) for every carry sequence n satisfying the inequalities".into();
        }
        Case::BS2 => {
            let (_, m) = chain_bs2(p, i)?;
            if m == 0 {
                sets.push(Descriptor::C0 { i: i.clone() });
            }
            for n in 0..m {
                sets.push(Descriptor::Cn2 { i: i.clone(), n });
            }
            sets.push(Descriptor::CInf { i: i.clone() });
        }
        Case::BS3 => {
            sets.push(Descriptor::CInf { i: i.clone() });
            note = "no non-maximal infinite-height sets".into();
        }
    }
    // drop sets that coincide with an earlier one on the stored heights
    let mut distinct: Vec<(Descriptor, Vec<TailBound>)> = Vec::new();
    for d in sets {
        let prof = (0..HEIGHTS).map(|h| max_tail(&d, p, h)).collect::<bspaths::Result<Vec<_>>>()?;
        if !distinct.iter().any(|(_, q)| *q == prof) {
            distinct.push((d, prof));
        }
    }
    let mut json_sets = Vec::new();
    let mut text = format!("case {}", p.case());
    for (d, _) in &distinct {
        json_sets.push(json!({"descriptor": d, "max_tail": tail_profile(d, p, HEIGHTS)?}));
        text.push_str(&format!(
            "\n{}: max tails {}",
            serde_json::to_string(d)?,
            profile_text(d, p, HEIGHTS)?
        ));
    }
    if !note.is_empty() {
        text.push_str(&format!("\n{note}"));
    }
    Ok(Response::new(
        json!({"case": p.case().to_string(), "sets": json_sets, "note": note}),
        text,
    ))
}
