//! Command-line front end: load and validate module files, print
//! decomposition and Tate cohomology reports, run verification campaigns,
//! and diff the lattice path against the brute-force oracle.
//!
//! Exit codes: 0 success, 1 a mathematical identity failed to hold,
//! 2 usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use grmod::error::Error;
use grmod::group::{enumerate_subgroups, FiniteAbelianGroup, Subgroup};
use grmod::io::{module_to_json, parse_module};
use grmod::module::GModule;
use grmod::random::{random_module, RandomModuleSpec};
use grmod::report::{Format, TateReport};
use grmod::verify::{
    abelian_decomposition, campaign, cyclic_decomposition, single_module_oracle_diff, Caps,
    TheoremId,
};

#[derive(Parser)]
#[command(
    name = "grmod",
    version,
    about = "Exact isotypic decomposition and Tate cohomology of finite modules over abelian group rings",
    after_help = "Caps may be overridden with the env var GRMOD_CAPS, e.g. \
GRMOD_CAPS=max-order=1000000,oracle=10000,subgroup=512,perm=64. All randomness \
flows from --seed; identical invocations produce byte-identical output."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a module file against the module axioms.
    Validate {
        /// Module file (JSON).
        path: PathBuf,
        /// Output format: table or json.
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Per-character decomposition table with the order-formula verdicts.
    Decompose {
        path: PathBuf,
        /// Generator for cyclic groups, as comma-separated exponents (default "1,...,1").
        #[arg(long)]
        generator: Option<String>,
        #[arg(long, default_value = "table")]
        format: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tate cohomology H^0 and H^-1 of a subgroup.
    Tate {
        path: PathBuf,
        /// Subgroup: generators "g1;g2" (comma-separated exponents each) or
        /// selector "order:p". Default: the whole group.
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long, default_value = "table")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded verification campaign for a named identity.
    Verify {
        /// One of: thm2.2 thm3.1 thm4.4 thm4.6 thm4.10 cor4.11 thm4.12
        /// prop4.2 herbrand duality oracle-diff.
        id: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "table")]
        format: String,
        /// Override the lattice-path order cap.
        #[arg(long)]
        max_order: Option<String>,
        /// Minimum number of non-vacuous instances required to pass.
        #[arg(long, default_value_t = 0)]
        min_true: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random module file, deterministically from the seed.
    Random {
        /// Cyclic orders separated by 'x', e.g. "2x4".
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long, default_value_t = 2)]
        modulus: u64,
        #[arg(long, default_value_t = 0)]
        relations: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Ring conductor override (multiple of the group exponent).
        #[arg(long)]
        ring_exponent: Option<u64>,
        #[arg(long)]
        max_order: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare every lattice-path order against the enumeration oracle.
    OracleDiff {
        /// Module file; when omitted, runs a seeded random campaign.
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "table")]
        format: String,
        #[arg(long)]
        max_order: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match caps_from_env() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(cli, caps) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn caps_from_env() -> Result<Caps, String> {
    let mut caps = Caps::default();
    let Ok(spec) = std::env::var("GRMOD_CAPS") else {
        return Ok(caps);
    };
    for part in spec.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("GRMOD_CAPS entry `{part}` is not key=value"))?;
        match key {
            "max-order" => {
                caps.max_order = value
                    .parse()
                    .map_err(|_| format!("bad max-order `{value}`"))?;
            }
            "oracle" => {
                caps.oracle_order = value
                    .parse()
                    .map_err(|_| format!("bad oracle cap `{value}`"))?;
            }
            "subgroup" => {
                caps.subgroup_group = value
                    .parse()
                    .map_err(|_| format!("bad subgroup cap `{value}`"))?;
            }
            "perm" => {
                caps.perm_rank = value
                    .parse()
                    .map_err(|_| format!("bad perm cap `{value}`"))?;
            }
            _ => return Err(format!("unknown GRMOD_CAPS key `{key}`")),
        }
    }
    Ok(caps)
}

fn parse_format(s: &str) -> Result<Format, Error> {
    Format::parse(s).ok_or_else(|| Error::Parse(format!("unknown format `{s}` (table|json|csv)")))
}

fn apply_max_order(caps: &mut Caps, flag: &Option<String>) -> Result<(), Error> {
    if let Some(v) = flag {
        caps.max_order = v
            .parse()
            .map_err(|_| Error::Parse(format!("bad --max-order value `{v}`")))?;
    }
    Ok(())
}

fn read_module(path: &Path) -> Result<GModule, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_module(&text)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_exponents(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad exponent `{t}`")))
        })
        .collect()
}

fn parse_group_spec(s: &str) -> Result<FiniteAbelianGroup, Error> {
    let orders: Vec<u64> = s
        .split('x')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad group spec `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    FiniteAbelianGroup::new(orders)
}

fn resolve_subgroups(
    m: &GModule,
    spec: &Option<String>,
    caps: &Caps,
) -> Result<Vec<Subgroup>, Error> {
    match spec {
        None => Ok(vec![Subgroup::whole(m.group())]),
        Some(s) => {
            if let Some(order_str) = s.strip_prefix("order:") {
                let target: u64 = order_str
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad order selector `{s}`")))?;
                let all = enumerate_subgroups(m.group(), false, caps.subgroup_group)?;
                let matching: Vec<Subgroup> =
                    all.into_iter().filter(|h| h.order() == target).collect();
                if matching.is_empty() {
                    return Err(Error::Parse(format!("no subgroup of order {target}")));
                }
                Ok(matching)
            } else {
                let gens: Vec<Vec<u64>> = s
                    .split(';')
                    .map(parse_exponents)
                    .collect::<Result<_, _>>()?;
                Ok(vec![Subgroup::generated_by(m.group(), &gens)?])
            }
        }
    }
}

fn ensure_valid(module: &GModule) -> Result<(), Error> {
    let validation = module.validate();
    if validation.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidModule(validation.violations.join("; ")))
    }
}

fn run(cli: Cli, mut caps: Caps) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Validate { path, format } => {
            let fmt = parse_format(&format)?;
            let module = read_module(&path)?;
            let report = module.validate();
            let rendered = match fmt {
                Format::Json => report.to_json(),
                _ => report.to_table(),
            };
            print!("{rendered}");
            Ok(if report.is_valid() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Decompose {
            path,
            generator,
            format,
            out,
        } => {
            let fmt = parse_format(&format)?;
            let module = read_module(&path)?;
            ensure_valid(&module)?;
            if module.group().is_cyclic() {
                let tau = match &generator {
                    Some(s) => parse_exponents(s)?,
                    None => module.group().diagonal_generator(),
                };
                let rep = cyclic_decomposition(&module, &tau)?;
                emit(&out, &rep.render(fmt))?;
                Ok(if rep.all_holds() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            } else {
                let order: Vec<usize> = (0..module.group().factor_count()).collect();
                let rep = abelian_decomposition(&module, &order)?;
                emit(&out, &rep.render(fmt))?;
                Ok(if rep.all_holds() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            }
        }
        Command::Tate {
            path,
            subgroup,
            format,
            out,
        } => {
            let fmt = parse_format(&format)?;
            let module = read_module(&path)?;
            ensure_valid(&module)?;
            let subgroups = resolve_subgroups(&module, &subgroup, &caps)?;
            let reports: Vec<TateReport> = subgroups
                .iter()
                .map(|h| {
                    module.tate_cohomology(h).map(|report| TateReport {
                        subgroup_elements: h.elements().to_vec(),
                        report,
                    })
                })
                .collect::<Result<_, _>>()?;
            let rendered = match fmt {
                Format::Json => {
                    let items: Vec<String> = reports.iter().map(|r| r.to_json()).collect();
                    format!("[{}]\n", items.join(","))
                }
                Format::Csv => {
                    let mut s = String::new();
                    for (i, r) in reports.iter().enumerate() {
                        let body = r.to_csv();
                        if i == 0 {
                            s.push_str(&body);
                        } else if let Some((_, rest)) = body.split_once('\n') {
                            s.push_str(rest);
                        }
                    }
                    s
                }
                Format::Table => reports.iter().map(|r| r.to_table()).collect(),
            };
            emit(&out, &rendered)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            id,
            count,
            seed,
            format,
            max_order,
            min_true,
            out,
        } => {
            let fmt = parse_format(&format)?;
            apply_max_order(&mut caps, &max_order)?;
            let theorem = TheoremId::parse(&id)?;
            let rep = campaign(theorem, count, seed, &caps)?;
            emit(&out, &rep.render(fmt))?;
            Ok(if rep.passed(min_true) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Random {
            group,
            rank,
            modulus,
            relations,
            seed,
            ring_exponent,
            max_order,
            out,
        } => {
            apply_max_order(&mut caps, &max_order)?;
            let group = parse_group_spec(&group)?;
            let spec = RandomModuleSpec {
                seed,
                group,
                ring_exponent,
                rank,
                modulus,
                extra_relations: relations,
            };
            let module = random_module(&spec, &caps.max_order)?;
            emit(&out, &module_to_json(&module))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleDiff {
            path,
            count,
            seed,
            format,
            max_order,
            out,
        } => {
            let fmt = parse_format(&format)?;
            apply_max_order(&mut caps, &max_order)?;
            let rep = match path {
                Some(p) => {
                    let module = read_module(&p)?;
                    ensure_valid(&module)?;
                    single_module_oracle_diff(&module, &caps)?
                }
                None => campaign(TheoremId::OracleDiff, count, seed, &caps)?,
            };
            emit(&out, &rep.render(fmt))?;
            Ok(if rep.passed(0) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
