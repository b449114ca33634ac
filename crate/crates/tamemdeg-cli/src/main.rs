//! `tamemdeg`: multidegrees of tame automorphisms from the command line.

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use tamemdeg::aut2;
use tamemdeg::construct3;
use tamemdeg::decide3::{self, Classification};
use tamemdeg::gallery;
use tamemdeg::json::{read_map, verify_witness_json, MapJson, WitnessJson};
use tamemdeg::numsg::SemigroupPair;
use tamemdeg::parse::default_var_names;
use tamemdeg::sample::{self, ChainSpec};
use tamemdeg::su_checks;
use tamemdeg::{Error, PolyMap};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;

#[derive(Parser)]
#[command(
    name = "tamemdeg",
    version,
    about = "Multidegrees of tame polynomial automorphisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a triple; the exit code encodes the verdict.
    Decide {
        d1: u64,
        d2: u64,
        d3: u64,
        /// Build and verify a witness when realizable.
        #[arg(long)]
        witness: bool,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Build a verified witness and print it as JSON.
    Construct { d1: u64, d2: u64, d3: u64 },
    /// Re-compose a witness file and compare its multidegree with the target.
    Verify {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Classify every sorted triple with d3 <= max.
    Enumerate {
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
        /// Worker threads; defaults to TAMEMDEG_JOBS, then to the CPU count.
        #[arg(long, env = "TAMEMDEG_JOBS")]
        jobs: Option<usize>,
        /// Print counts per status and rule instead of the rows.
        #[arg(long)]
        summary: bool,
    },
    /// Membership, gaps and Frobenius number of d1·N + d2·N.
    Semigroup {
        d1: u64,
        d2: u64,
        k: Option<u64>,
        #[arg(long)]
        gaps: bool,
        /// Smallest gap to list.
        #[arg(long, default_value_t = 0)]
        min: u64,
        #[arg(long)]
        json: bool,
    },
    /// Length, decomposition and inverse of an automorphism of the plane.
    Analyze2 {
        #[arg(long)]
        map: String,
        /// Map to use when the file holds several: a name in a document, an index in a list.
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        decompose: bool,
        #[arg(long)]
        json: bool,
    },
    /// Search an elementary reduction of one component of a map of C^3.
    Reduce {
        #[arg(long)]
        map: String,
        #[arg(long)]
        name: Option<String>,
        /// Component to reduce, 1-based.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3))]
        target: u64,
        #[arg(long, default_value_t = 4)]
        degy_bound: u32,
        #[arg(long, default_value_t = 12)]
        deg_bound: u32,
        #[arg(long)]
        json: bool,
    },
    /// Named example maps; without a name, list them.
    Gallery {
        name: Option<String>,
        /// Print only the multidegree.
        #[arg(long)]
        mdeg: bool,
        #[arg(long)]
        json: bool,
    },
    /// Seeded random automorphisms of the plane as map JSON.
    Sample2 {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 64)]
        max_total_degree: u32,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::InvalidArgument(_) | Error::UnknownGallery(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure {
            code: EXIT_DATA,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Decide {
            d1,
            d2,
            d3,
            witness,
            json,
            csv,
        } => decide(d1, d2, d3, witness, json, csv),
        Command::Construct { d1, d2, d3 } => construct(d1, d2, d3),
        Command::Verify { file, json } => verify(&file, json),
        Command::Enumerate {
            max,
            format,
            json,
            csv,
            jobs,
            summary,
        } => {
            let format = match (json, csv) {
                (true, _) => Format::Json,
                (_, true) => Format::Csv,
                _ => format,
            };
            enumerate(max, format, jobs, summary)
        }
        Command::Semigroup {
            d1,
            d2,
            k,
            gaps,
            min,
            json,
        } => semigroup(d1, d2, k, gaps, min, json),
        Command::Analyze2 {
            map,
            name,
            inverse,
            decompose,
            json,
        } => analyze2(&load_map(&map, name.as_deref())?, inverse, decompose, json),
        Command::Reduce {
            map,
            name,
            target,
            degy_bound,
            deg_bound,
            json,
        } => reduce(
            &load_map(&map, name.as_deref())?,
            target as usize - 1,
            degy_bound,
            deg_bound,
            json,
        ),
        Command::Gallery { name, mdeg, json } => show_gallery(name.as_deref(), mdeg, json),
        Command::Sample2 {
            seed,
            count,
            max_total_degree,
        } => sample2(seed, count, max_total_degree),
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_NO_INPUT,
        message: format!("{path}: {e}"),
    })
}

fn load_map(path: &str, name: Option<&str>) -> Result<PolyMap, Failure> {
    read_map(&read_file(path)?, name).map_err(|e| Failure {
        message: format!("{path}: {e}"),
        ..Failure::from(e)
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn triple(d: [u64; 3]) -> String {
    format!("({}, {}, {})", d[0], d[1], d[2])
}

fn csv_row(c: &Classification) -> String {
    let [a, b, d] = c.sorted;
    let [x, y, z] = c.input;
    format!("{a},{b},{d},{},{},{x} {y} {z}", c.status, c.rule.tag())
}

const CSV_HEADER: &str = "d1,d2,d3,status,rule,original";

fn classification_json(c: &Classification) -> Result<Value, Failure> {
    let mut v = serde_json::to_value(c)?;
    v["rule_description"] = json!(c.rule.description());
    v["exit_code"] = json!(c.status.exit_code());
    Ok(v)
}

fn decide(d1: u64, d2: u64, d3: u64, witness: bool, as_json: bool, csv: bool) -> Outcome {
    let c = decide3::classify(d1, d2, d3)?;
    let w = if witness {
        construct3::witness_for(&c)?
    } else {
        None
    };
    if as_json {
        let mut v = classification_json(&c)?;
        if let Some(w) = &w {
            v["witness"] = serde_json::to_value(WitnessJson::from(w))?;
        }
        print_json(&v)?;
    } else if csv {
        println!("{CSV_HEADER}");
        println!("{}", csv_row(&c));
        if let Some(w) = &w {
            print_json(&WitnessJson::from(w))?;
        }
    } else {
        println!("{}: {}", triple(c.input), c.status);
        println!("rule: {} {}", c.rule.tag(), c.rule.description());
        for n in &c.notes {
            println!("note: {n}");
        }
        if let Some(w) = &w {
            print_json(&WitnessJson::from(w))?;
        }
    }
    Ok(c.status.exit_code() as u8)
}

fn construct(d1: u64, d2: u64, d3: u64) -> Outcome {
    let c = decide3::classify(d1, d2, d3)?;
    match construct3::witness_for(&c)? {
        Some(w) => {
            print_json(&WitnessJson::from(&w))?;
            Ok(0)
        }
        None => {
            eprintln!(
                "{} is {} ({}); no witness",
                triple(c.input),
                c.status,
                c.rule.tag()
            );
            Ok(c.status.exit_code() as u8)
        }
    }
}

fn verify(path: &str, as_json: bool) -> Outcome {
    let report = verify_witness_json(&read_file(path)?)?;
    if as_json {
        print_json(&report)?;
    } else {
        let verdict = if report.ok { "ok" } else { "MISMATCH" };
        println!(
            "{verdict}: target {:?}, measured {}, {} factors",
            report.target, report.found, report.factors
        );
    }
    Ok(if report.ok { 0 } else { 1 })
}

fn enumerate(max: u64, format: Format, jobs: Option<usize>, summary: bool) -> Outcome {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().map_err(|e| Failure {
        code: EXIT_USAGE,
        message: e.to_string(),
    })?;
    let items = pool.install(|| decide3::enumerate(max))?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let io_err = |e: io::Error| Failure {
        code: EXIT_DATA,
        message: e.to_string(),
    };
    if summary {
        let s = decide3::summarize(&items);
        match format {
            Format::Json => {
                writeln!(out, "{}", serde_json::to_string_pretty(&s)?).map_err(io_err)?
            }
            _ => {
                writeln!(out, "total {}", s.total).map_err(io_err)?;
                for (status, n) in &s.by_status {
                    writeln!(out, "status {status} {n}").map_err(io_err)?;
                }
                for (rule, n) in &s.by_rule {
                    writeln!(out, "rule {} {n}", rule.tag()).map_err(io_err)?;
                }
            }
        }
        return Ok(0);
    }
    match format {
        Format::Json => {
            let rows: Vec<Value> = items
                .iter()
                .map(classification_json)
                .collect::<Result<_, _>>()?;
            writeln!(out, "{}", serde_json::to_string_pretty(&rows)?).map_err(io_err)?;
        }
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}").map_err(io_err)?;
            for c in &items {
                writeln!(out, "{}", csv_row(c)).map_err(io_err)?;
            }
        }
        Format::Text => {
            for c in &items {
                writeln!(out, "{} {} {}", triple(c.sorted), c.status, c.rule.tag())
                    .map_err(io_err)?;
            }
        }
    }
    out.flush().map_err(io_err)?;
    Ok(0)
}

fn semigroup(d1: u64, d2: u64, k: Option<u64>, gaps: bool, min: u64, as_json: bool) -> Outcome {
    let s = SemigroupPair::new(d1, d2)?;
    let frobenius = s.frobenius().ok();
    let gap_list = if gaps { Some(s.gaps(min)?) } else { None };
    let member = k.map(|k| s.member(k));
    if as_json {
        let mut v = json!({
            "d1": s.d1(),
            "d2": s.d2(),
            "k": k,
            "member": member.map(|m| m.is_some()),
            "decomposition": member.flatten().map(|(a, b)| [a, b]),
            "frobenius": frobenius,
        });
        if let Some(g) = &gap_list {
            v["gaps"] = json!(g);
        }
        print_json(&v)?;
        return Ok(0);
    }
    if let Some(g) = gap_list {
        let parts: Vec<String> = g.iter().map(u64::to_string).collect();
        println!("{}", parts.join(","));
    }
    if let (Some(k), Some(m)) = (k, member) {
        match m {
            Some((a, b)) => println!("{k} = {a}*{} + {b}*{}", s.d1(), s.d2()),
            None => println!("{k} is not in {}N + {}N", s.d1(), s.d2()),
        }
    }
    if !gaps && k.is_none() {
        match frobenius {
            Some(f) => println!("frobenius {f}"),
            None => println!("gcd {} > 1: infinitely many gaps", s.gcd()),
        }
    }
    Ok(0)
}

fn map_lines(m: &PolyMap) -> Vec<String> {
    m.to_strings(&default_var_names(m.n()))
}

fn analyze2(f: &PolyMap, want_inverse: bool, decompose: bool, as_json: bool) -> Outcome {
    let d = aut2::peel(f)?;
    let md = f.mdeg().finite().ok_or(Error::ZeroPolynomial)?;
    let length = d.length();
    let bound = aut2::length_bound(md[0], md[1])?;
    let prediction: Vec<(u64, u64)> = aut2::inverse_mdeg_prediction(md[0], md[1], length)?
        .into_iter()
        .collect();
    let inverse = if want_inverse {
        Some(aut2::inverse(f)?)
    } else {
        None
    };
    if as_json {
        let mut v = json!({
            "mdeg": md,
            "length": length,
            "length_bound": bound,
            "factor_degrees": d.factor_degrees,
            "inverse_mdeg_prediction": prediction,
        });
        if decompose {
            let chain: Vec<MapJson> = d
                .chain()
                .iter()
                .map(|g| MapJson::from_map(&g.to_map()))
                .collect();
            v["factors"] = serde_json::to_value(chain)?;
        }
        if let Some(g) = &inverse {
            v["inverse"] = serde_json::to_value(MapJson::from_map(g))?;
            v["inverse_mdeg"] = json!(g.mdeg());
        }
        print_json(&v)?;
        return Ok(0);
    }
    println!("mdeg ({}, {})", md[0], md[1]);
    println!("length {length} (bound {bound})");
    println!("factor degrees {:?}", d.factor_degrees);
    let pred: Vec<String> = prediction
        .iter()
        .map(|(a, b)| format!("({a}, {b})"))
        .collect();
    println!("inverse mdeg in {{{}}}", pred.join(", "));
    if decompose {
        let chain = d.chain();
        let last = chain.len() - 1;
        for (i, g) in chain.iter().enumerate() {
            let label = match i {
                0 => "L1".to_string(),
                i if i == last => "L2".to_string(),
                i => format!("T{i}"),
            };
            println!("{label} = ({})", map_lines(&g.to_map()).join(", "));
        }
    }
    if let Some(g) = &inverse {
        println!("inverse mdeg {}", g.mdeg());
        for (i, c) in map_lines(g).iter().enumerate() {
            println!("G{} = {c}", i + 1);
        }
    }
    Ok(0)
}

fn reduce(f: &PolyMap, i: usize, degy: u32, deg: u32, as_json: bool) -> Outcome {
    let found = su_checks::bounded_reduction_search(f, i, degy, deg)?;
    let check = match &found {
        Some(c) => Some(su_checks::check_elementary_reduction(f, c)?),
        None => None,
    };
    let g_text = found.as_ref().map(|c| c.g.to_string());
    if as_json {
        print_json(&json!({
            "target": i + 1,
            "degy_bound": degy,
            "deg_bound": deg,
            "found": found.is_some(),
            "g": g_text,
            "check": check,
        }))?;
    } else {
        match (&g_text, &check) {
            (Some(g), Some(r)) => println!(
                "F{} - g(others) lowers the degree {} -> {} with g = {g}",
                i + 1,
                r.original,
                r.achieved
            ),
            _ => println!(
                "no elementary reduction of F{} with degY <= {degy}, deg <= {deg}",
                i + 1
            ),
        }
    }
    Ok(if found.is_some() { 0 } else { 1 })
}

fn show_gallery(name: Option<&str>, mdeg: bool, as_json: bool) -> Outcome {
    let Some(name) = name else {
        for n in gallery::gallery_names() {
            println!("{n}: {}", gallery::gallery_description(n).unwrap_or(""));
        }
        return Ok(0);
    };
    let m = gallery::gallery(name)?;
    if mdeg {
        let parts: Vec<String> = m.mdeg().0.iter().map(|d| d.to_string()).collect();
        println!("{}", parts.join(" "));
    } else if as_json {
        print_json(&MapJson::from_map(&m))?;
    } else {
        for (i, c) in map_lines(&m).iter().enumerate() {
            println!("F{} = {c}", i + 1);
        }
    }
    Ok(0)
}

fn sample2(seed: u64, count: usize, max_total_degree: u32) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = ChainSpec {
        max_total_degree,
        ..ChainSpec::default()
    };
    let maps = (0..count)
        .map(|_| {
            sample::random_plane_chain(&mut rng, &spec)
                .map()
                .map(|m| MapJson::from_map(&m))
        })
        .collect::<tamemdeg::Result<Vec<_>>>()?;
    print_json(&maps)?;
    Ok(0)
}
