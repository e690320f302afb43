//! `klocal`: compute height-one spectral sequences and draw their charts.

mod chart;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use chart::ChartRange;
use klocal_core::cohomology::bar::continuous_cohomology_oracle;
use klocal_core::cohomology::total::cohomology_units_total;
use klocal_core::cohomology::{CohomologyRequest, Coefficient, GroupKind};
use klocal_core::height_one::{
    ass_pages, brauer_from_run, pic_from_run, picard_pages, picard_run, Flag, HeightOneData, TransportedArrow,
    GROUPS_WINDOW,
};
use klocal_core::ss::filtered::{decalage_check, decalage_check_corrupted, random_corpus, Mismatch};
use klocal_core::ss::{CollapseStatus, Page, PageJson, Window};
use klocal_core::{AbGroup, Error};

/// Exit status for a result that is computed but not certified.
const EXIT_FLAGGED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "klocal", version, about = "Descent and Picard spectral sequences of the K(1)-local sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continuous cohomology of a subgroup of Z_p^× with p-adic coefficients
    Cohomology(CohomologyArgs),
    /// Descent spectral sequence pages and charts
    Ass(ChartArgs),
    /// Picard spectral sequence pages and charts
    Picard(ChartArgs),
    /// Pic_1, its algebraic and exotic parts, and the Brauer bound
    Groups(GroupsArgs),
    /// Check the décalage shift on seeded random filtered complexes
    Decalage(DecalageArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Group {
    /// Z_p^×
    Units,
    /// the order-m subgroup of the roots of unity in Z_p^×
    Cyclic,
    /// the principal units 1 + pZ_p (1 + 4Z_2 at p = 2)
    Procyclic,
}

#[derive(Args, Debug)]
struct CohomologyArgs {
    #[arg(long, value_enum, default_value = "units")]
    group: Group,
    #[arg(short, long, default_value_t = 2)]
    p: u64,
    /// Order of the cyclic group
    #[arg(short, long)]
    m: Option<u64>,
    /// e.g. "Zp(2)", "Z/9(1)", "Z/2", "mu", "units", or a sum "Zp(0) + Z/2"
    #[arg(long)]
    coeff: String,
    #[arg(short, long)]
    s: u32,
    /// Recompute with an independent method and report agreement
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ChartArgs {
    #[arg(short, long)]
    p: u64,
    /// Stem range `a:b`
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-8:16")]
    window: (i64, i64),
    /// Highest filtration drawn
    #[arg(long, default_value_t = 12)]
    s_max: i64,
    /// Directory for e<r>.json, e<r>.svg, e<r>.txt and einf.*
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GroupsArgs {
    #[arg(short, long)]
    p: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct DecalageArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// Primes to sample, comma separated
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    primes: Vec<u64>,
    /// Check pages 1..=r_max
    #[arg(long, default_value_t = 3)]
    r_max: i64,
    /// Shift the filtration index by one before comparing; every nontrivial complex should fail
    #[arg(long)]
    corrupt: bool,
    #[arg(long)]
    json: bool,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let n = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((n(a)?, n(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cohomology(a) => cmd_cohomology(&a),
        Command::Ass(a) => cmd_chart(&a, Kind::Ass),
        Command::Picard(a) => cmd_chart(&a, Kind::Picard),
        Command::Groups(a) => cmd_groups(&a),
        Command::Decalage(a) => cmd_decalage(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = matches!(e.downcast_ref::<Error>(), Some(Error::Parse(_) | Error::NotPrime(_)));
            ExitCode::from(if usage { EXIT_USAGE } else { EXIT_FLAGGED })
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

#[derive(Serialize)]
struct CohomologyOut {
    request: CohomologyRequest,
    result: AbGroup,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleOut>,
}

#[derive(Serialize)]
struct OracleOut {
    method: &'static str,
    /// The oracle only sees the `p`-primary part.
    p_primary_only: bool,
    result: AbGroup,
    agrees: bool,
}

fn cmd_cohomology(a: &CohomologyArgs) -> anyhow::Result<ExitCode> {
    let coefficient = Coefficient::parse(&a.coeff, a.p)?;
    let group = match a.group {
        Group::Units => GroupKind::Units { p: a.p },
        Group::Procyclic => GroupKind::Procyclic { p: a.p },
        Group::Cyclic => GroupKind::FiniteCyclic {
            p: a.p,
            m: a.m.ok_or_else(|| Error::Parse("--group cyclic needs -m".into()))?,
        },
    };
    let request = CohomologyRequest {
        group,
        coefficient,
        degree: a.s,
    };
    let result = request.compute()?;
    let oracle = if a.oracle { Some(oracle(&request, &result)?) } else { None };
    let agrees = oracle.as_ref().map_or(true, |o| o.agrees);
    if a.json {
        print_json(&CohomologyOut { request, result, oracle })?;
    } else {
        println!("{result}");
        if let Some(o) = &oracle {
            let verdict = if o.agrees { "agrees" } else { "DISAGREES" };
            let part = if o.p_primary_only { " (p-primary part)" } else { "" };
            println!("oracle ({}): {}{part} {verdict}", o.method, o.result);
        }
    }
    Ok(ExitCode::from(if agrees { 0 } else { EXIT_FLAGGED }))
}

fn oracle(request: &CohomologyRequest, result: &AbGroup) -> anyhow::Result<OracleOut> {
    let GroupKind::Units { p } = request.group else {
        bail!("the oracles cover Z_p^× only");
    };
    let (c, s) = (&request.coefficient, request.degree);
    match continuous_cohomology_oracle(p, c, s) {
        Ok(m) => {
            let got = AbGroup::from_module(p, m)?;
            let agrees = got == AbGroup::from_module(p, result.component(p))?;
            Ok(OracleOut {
                method: "bar complex",
                p_primary_only: true,
                result: got,
                agrees,
            })
        }
        Err(Error::TooLarge(_) | Error::Unsupported(_)) => {
            let got = cohomology_units_total(p, c, s)?;
            let agrees = got == *result;
            Ok(OracleOut {
                method: "total complex",
                p_primary_only: false,
                result: got,
                agrees,
            })
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ass,
    Picard,
}

#[derive(Serialize)]
struct RunSummary {
    prime: u64,
    window: Window,
    pages: Vec<i64>,
    certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    vanishing_line: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    flagged: Vec<Flag>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    undetermined: Vec<TransportedArrow>,
}

fn cmd_chart(a: &ChartArgs, kind: Kind) -> anyhow::Result<ExitCode> {
    let data = HeightOneData::from_env()?;
    let range = ChartRange {
        stem_min: a.window.0,
        stem_max: a.window.1,
        s_max: a.s_max,
    };
    let name = match kind {
        Kind::Ass => "descent",
        Kind::Picard => "Picard",
    };
    if range.is_empty() {
        let page = Page::new(a.p, 2, Window::new(0, -1, -1));
        print!("{}", chart::ascii(&page, &range, &format!("{name} spectral sequence, p = {}: empty window", a.p)));
        if let Some(dir) = &a.out {
            fs::create_dir_all(dir)?;
            write(dir, "einf.svg", &chart::svg(&page, &range, "empty window"))?;
        }
        return Ok(ExitCode::SUCCESS);
    }
    let core = Window {
        t_min: range.stem_min,
        t_max: range.stem_max + range.s_max,
        s_min: 0,
        s_max: range.s_max,
    };
    let (pages, summary) = match kind {
        Kind::Ass => {
            let run = ass_pages(a.p, &core, &data)?;
            let pages = run.core_pages();
            let certified = run.collapse.status == CollapseStatus::Collapsed;
            let summary = RunSummary {
                prime: a.p,
                window: core,
                pages: pages.iter().map(Page::r).collect(),
                certified,
                vanishing_line: run.collapse.vanishing_line,
                flagged: Vec::new(),
                undetermined: Vec::new(),
            };
            (pages, summary)
        }
        Kind::Picard => {
            let run = picard_pages(a.p, &core, &data)?;
            let pages = run.core_pages();
            let summary = RunSummary {
                prime: a.p,
                window: core,
                pages: pages.iter().map(Page::r).collect(),
                certified: !pages.last().expect("pages").has_truncation(),
                vanishing_line: None,
                flagged: run.flagged,
                undetermined: run.undetermined,
            };
            (pages, summary)
        }
    };
    let last = pages.last().expect("at least one page");
    let title = |r: &str| format!("{name} spectral sequence, p = {}, E_{r}", a.p);
    print!("{}", chart::ascii(last, &range, &title("inf")));
    if !summary.certified {
        eprintln!("warning: some cells depend on data outside the window and are drawn as ?");
    }
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut files: Vec<(String, &Page)> = pages.iter().map(|p| (format!("e{}", p.r()), p)).collect();
        files.push(("einf".into(), last));
        for (stem, page) in files {
            let r = stem.trim_start_matches('e');
            let json: PageJson = page.to_json();
            write(dir, &format!("{stem}.json"), &(serde_json::to_string_pretty(&json)? + "\n"))?;
            write(dir, &format!("{stem}.svg"), &chart::svg(page, &range, &title(r)))?;
            write(dir, &format!("{stem}.txt"), &chart::ascii(page, &range, &title(r)))?;
        }
        write(dir, "run.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
    }
    Ok(ExitCode::from(if summary.certified { 0 } else { EXIT_FLAGGED }))
}

fn write(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct GroupsOut {
    prime: u64,
    pic: AbGroup,
    pic_alg: AbGroup,
    kappa: AbGroup,
    brauer_upper_order: u128,
    brauer_certain: AbGroup,
    brauer_unknown: Vec<TransportedArrow>,
    /// Justifications for the extensions used in the 0-stem.
    extension_cites: Vec<String>,
}

fn cmd_groups(a: &GroupsArgs) -> anyhow::Result<ExitCode> {
    let data = HeightOneData::from_env()?;
    let run = picard_run(a.p, &GROUPS_WINDOW, &data)?;
    let pic = pic_from_run(&run, &data)?;
    let br = brauer_from_run(&run)?;
    let out = GroupsOut {
        prime: a.p,
        pic: pic.pic,
        pic_alg: pic.pic_alg,
        kappa: pic.kappa,
        brauer_upper_order: br.upper_order,
        brauer_certain: br.certain_subquotient,
        brauer_unknown: br.unknown_differentials,
        extension_cites: data
            .extensions
            .records
            .iter()
            .filter(|r| r.prime.matches(a.p) && r.stem == 0)
            .map(|r| r.cite.clone())
            .collect(),
    };
    if a.json {
        print_json(&out)?;
        return Ok(ExitCode::SUCCESS);
    }
    println!("p = {}", a.p);
    println!("Pic_1     = {}", out.pic);
    println!("Pic_1^alg = {}   (filtrations 0 and 1)", out.pic_alg);
    println!("kappa_1   = {}   (filtration 2 and above)", out.kappa);
    println!("Br_1^0    : order divides {}, contains a subquotient {}", out.brauer_upper_order, out.brauer_certain);
    for c in &out.extension_cites {
        println!("  extension: {c}");
    }
    for u in &out.brauer_unknown {
        println!(
            "  undetermined d_{} from ({},{}): {}",
            u.page, u.source.s, u.source.t, u.cite
        );
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DecalageOut {
    seed: u64,
    count: usize,
    corrupt: bool,
    checked: usize,
    failures: Vec<DecalageFailure>,
}

#[derive(Serialize)]
struct DecalageFailure {
    prime: u64,
    index: usize,
    r: i64,
    mismatches: Vec<Mismatch>,
}

fn cmd_decalage(a: &DecalageArgs) -> anyhow::Result<ExitCode> {
    let mut out = DecalageOut {
        seed: a.seed,
        count: a.count,
        corrupt: a.corrupt,
        checked: 0,
        failures: Vec::new(),
    };
    for &p in &a.primes {
        for (index, fc) in random_corpus(p, a.seed, a.count)?.iter().enumerate() {
            for r in 1..=a.r_max {
                let rep = if a.corrupt {
                    decalage_check_corrupted(fc, r)?
                } else {
                    decalage_check(fc, r)?
                };
                out.checked += rep.checked;
                if !rep.passed() {
                    out.failures.push(DecalageFailure {
                        prime: p,
                        index,
                        r,
                        mismatches: rep.mismatches,
                    });
                }
            }
        }
    }
    if a.json {
        print_json(&out)?;
    } else {
        let complexes = a.count * a.primes.len();
        if out.failures.is_empty() {
            println!("pass: {complexes} complexes, pages 1..={}, {} cells compared", a.r_max, out.checked);
        } else {
            println!("FAIL: {} (complex, page) pairs disagree out of {complexes} complexes", out.failures.len());
            for f in out.failures.iter().take(10) {
                println!("  p = {} #{} r = {}: {} cells", f.prime, f.index, f.r, f.mismatches.len());
            }
        }
    }
    Ok(ExitCode::from(if out.failures.is_empty() { 0 } else { EXIT_FLAGGED }))
}
