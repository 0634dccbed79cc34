//! Command-line front end shared by the `kummer` binary and the tests.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::cohomology::{self, GModule};
use crate::error::Error;
use crate::kummer::{self, ArborealDescriptor};
use crate::matgroup::{self, CartanData, GroupDescriptor, DEFAULT_CAP};
use crate::suites::{self, SCHEMA_VERSION, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILURE: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "kummer", version, about = "Finite-level Kummer theory for elliptic curves")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a Cartan subgroup of GL₂(Z/ℓ^k) and optionally its normaliser.
    Cartan {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, default_value_t = 0)]
        gamma: u8,
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        #[arg(long)]
        normaliser: bool,
    },
    /// First cohomology of a matrix group acting on (Z/ℓ^k)².
    H1 {
        group: PathBuf,
        #[arg(long = "module-level")]
        module_level: Option<u32>,
        /// The prime ℓ, when the group level is not a prime power.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Kummer degrees and failures of an arboreal group.
    Kummer { group: PathBuf },
    /// Run a named verification suite.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GroupTooLarge { .. } => EXIT_CAP,
        Error::Parse(_) => EXIT_PARSE,
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_INCONSISTENT,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, value: serde_json::Value) -> Result<(), Error> {
    writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serialisable")).map_err(|e| Error::Inconsistent(e.to_string()))
}

fn line(out: &mut dyn Write, s: String) -> Result<(), Error> {
    writeln!(out, "{s}").map_err(|e| Error::Inconsistent(e.to_string()))
}

pub fn format_factors(factors: &[u64]) -> String {
    if factors.is_empty() {
        "0".to_string()
    } else {
        factors.iter().map(|f| format!("Z/{f}")).collect::<Vec<_>>().join(" x ")
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    match &cli.command {
        Command::Cartan { prime, level, gamma, delta, normaliser } => {
            let data = CartanData::new(*prime, *level, *gamma, *delta)?;
            let c = matgroup::cartan(&data)?;
            let norm = if *normaliser { Some(matgroup::cartan_normaliser(&c, &data)?) } else { None };
            let scalars = c.scalars_in().order();
            if cli.json {
                emit(
                    out,
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "modulus": data.modulus(),
                        "order": c.order(),
                        "abelian": c.is_abelian(),
                        "scalar_order": scalars,
                        "normaliser_order": norm.as_ref().map(|n| n.order()),
                        "descriptor": c.to_descriptor(),
                        "normaliser_descriptor": norm.as_ref().map(|n| n.to_descriptor()),
                    }),
                )?;
            } else {
                line(out, format!("schema_version  {SCHEMA_VERSION}"))?;
                line(out, format!("cartan          ({prime}^{level}, gamma={gamma}, delta={delta})"))?;
                line(out, format!("order           {}", c.order()))?;
                line(out, format!("abelian         {}", c.is_abelian()))?;
                line(out, format!("scalars         {scalars}"))?;
                if let Some(n) = &norm {
                    line(out, format!("normaliser      {}", n.order()))?;
                }
                line(out, format!("descriptor      {}", serde_json::to_string(&c.to_descriptor()).expect("serialisable")))?;
            }
            Ok(EXIT_OK)
        }
        Command::H1 { group, module_level, prime } => {
            let desc: GroupDescriptor = read_json(group)?;
            if desc.generators.len() > 64 {
                return Err(Error::InvalidArgument("too many generators".into()));
            }
            let n = desc.modulus;
            let factors = crate::residue::Modulus::new(n)?.factors().to_vec();
            let ell = match (prime, factors.as_slice()) {
                (Some(p), _) => *p,
                (None, [(p, _)]) => *p,
                (None, _) => return Err(Error::InvalidArgument(format!("level {n} is not a prime power; pass --prime"))),
            };
            let max_k = factors.iter().find(|(p, _)| *p == ell).map(|(_, e)| *e).ok_or(Error::NotDivisor(ell, n))?;
            let k = module_level.unwrap_or(max_k);
            let g = desc.build(cohomology::COHOMOLOGY_CAP)?;
            let m = GModule::new(ell, k)?;
            let r = cohomology::h1(&g, &m)?;
            if cli.json {
                emit(
                    out,
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "group_order": g.order(),
                        "module": format!("(Z/{})^2", m.q()),
                        "h1": r,
                    }),
                )?;
            } else {
                line(out, format!("schema_version  {SCHEMA_VERSION}"))?;
                line(out, format!("group order     {}", g.order()))?;
                line(out, format!("module          (Z/{})^2", m.q()))?;
                line(out, format!("H1 = {}", format_factors(&r.invariant_factors)))?;
                line(out, format!("order           {}", r.order))?;
                line(out, format!("exponent        {}", r.exponent))?;
            }
            Ok(EXIT_OK)
        }
        Command::Kummer { group } => {
            let desc: ArborealDescriptor = read_json(group)?;
            let g = desc.build(DEFAULT_CAP)?;
            let r = kummer::total_failure_identity_check(&g)?;
            if cli.json {
                emit(out, json!({"schema_version": SCHEMA_VERSION, "report": r}))?;
            } else {
                line(out, format!("schema_version  {SCHEMA_VERSION}"))?;
                line(out, format!("N               {}", r.modulus))?;
                line(out, format!("#H_N            {}", r.torsion_order))?;
                line(out, format!("#V_N            {}", r.degree))?;
                line(out, format!("{:>6} {:>3} {:>10} {:>10}", "ell", "n", "A", "B"))?;
                for f in &r.per_prime {
                    line(out, format!("{:>6} {:>3} {:>10} {:>10}", f.ell, f.n, f.a, f.b))?;
                }
                line(out, format!("N^2/#V_N        {}", r.total_failure))?;
                line(out, format!("prod A*B        {}", r.product_of_failures))?;
                line(out, format!("identity        {}", if r.identity_holds { "holds" } else { "FAILS" }))?;
            }
            Ok(if r.identity_holds { EXIT_OK } else { EXIT_SUITE_FAILURE })
        }
        Command::Verify { suite, seed, instances } => {
            let r = suites::run_suite(suite, *seed, *instances)?;
            if cli.json {
                emit(out, serde_json::to_value(&r).expect("serialisable"))?;
            } else {
                line(out, format!("schema_version  {SCHEMA_VERSION}"))?;
                line(out, format!("suite           {} (seed {})", r.suite, r.seed))?;
                for o in &r.outcomes {
                    line(out, format!("{:>4} {} {}", o.index, if o.passed { "pass" } else { "FAIL" }, o.detail))?;
                    if !o.passed {
                        line(out, format!("     seed {} instance {}", o.seed, o.instance))?;
                    }
                }
                for (k, v) in &r.statistics {
                    line(out, format!("{k:<24}{v}"))?;
                }
                line(out, format!("{}/{} pass", r.passed, r.instances))?;
            }
            Ok(if r.all_passed() { EXIT_OK } else { EXIT_SUITE_FAILURE })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["kummer"];
        full.extend_from_slice(args);
        let code = run_from(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn cartan_command() {
        let (code, out, _) = run(&["cartan", "--prime", "5", "--level", "1", "--gamma", "0", "--delta", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("order           24"));
        let (_, out, _) = run(&["cartan", "--prime", "5", "--delta", "2", "--normaliser"]);
        assert!(out.contains("normaliser      48"));
        let (code, _, _) = run(&["cartan", "--prime", "2", "--gamma", "1", "--delta", "-1"]);
        assert_eq!(code, 0);
        let (code, _, _) = run(&["cartan", "--prime", "5", "--gamma", "1", "--delta", "2"]);
        assert!(code == EXIT_USAGE || code == EXIT_INCONSISTENT);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
        assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn json_output_carries_schema_version() {
        let (_, out, _) = run(&["--json", "cartan", "--prime", "3", "--delta", "1"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema_version"], 1);
        let d: GroupDescriptor = serde_json::from_value(v["descriptor"].clone()).unwrap();
        assert_eq!(d.build(DEFAULT_CAP).unwrap().order(), 4);
    }
}
