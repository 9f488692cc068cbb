//! The `polydiv` command line. `run` is the whole program minus process
//! plumbing, so tests drive it directly.

use std::collections::BTreeSet;
use std::io::Read;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::divisor::{PolyhedralDivisor, Properness};
use crate::error::Error;
use crate::examples;
use crate::lattice::LatticeVector;
use crate::random;
use crate::semigroup::{hilbert_basis, MonomialSemigroup, DEFAULT_BOX_CAP};
use crate::toroidal::{fan_from_divisor, verify_theorem1, Verdict, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "polydiv",
    version,
    about = "Exact polyhedral divisors, homogenization and glued toroidal fans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Properness report (exit 0 proper, 2 inconclusive).
    Check {
        /// Divisor file, or "-" for standard input.
        file: String,
    },
    /// Evaluate D(u) = sum of min <u, Delta_P> [P].
    Eval {
        file: String,
        /// Weight as comma-separated integers, e.g. "-1,0".
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Round coefficients down.
        #[arg(long)]
        floor: bool,
    },
    /// Glued fan of homogenized coefficients.
    Fan {
        file: String,
        /// Build the fan even when properness is inconclusive.
        #[arg(long)]
        allow_inconclusive: bool,
    },
    /// Compare the semigroup-enumeration cone with the homogenization at
    /// every nontrivial point (exit 0 equal, 3 undetermined, 4 different).
    Verify {
        /// Divisor file; omit with --fuzz.
        file: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BOX_CAP)]
        box_cap: u32,
        /// Verify random divisors generated from this seed instead.
        #[arg(long, conflicts_with = "file")]
        fuzz: Option<u64>,
        /// Number of random divisors (seeds fuzz, fuzz+1, ...).
        #[arg(long, default_value_t = 1, requires = "fuzz")]
        count: u64,
    },
    /// Irreducible elements of the monomial semigroup at a point.
    Hilbert {
        file: String,
        #[arg(long)]
        point: String,
        #[arg(long = "box", default_value_t = 3)]
        box_bound: u32,
    },
    /// Print a built-in divisor file.
    Example { name: String },
}

/// A divisor document: the divisor itself plus an optional set `U` of
/// points kept trivial and an optional description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorFile {
    #[serde(flatten)]
    pub divisor: PolyhedralDivisor,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub trivial: Option<BTreeSet<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl DivisorFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        // Syntax errors first, so the position refers to the raw text.
        serde_json::from_str::<serde_json::Value>(text).map_err(|e| format!("invalid JSON: {e}"))?;
        let f: DivisorFile =
            serde_json::from_str(text).map_err(|e| format!("invalid divisor: {e}"))?;
        if let Some(u) = &f.trivial {
            if let Some(l) = u.iter().find(|l| !f.divisor.is_trivial_at(l)) {
                return Err(Error::NontrivialInU { label: l.clone() }.to_string());
            }
        }
        Ok(f)
    }
}

/// Everything one invocation produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub command: Vec<String>,
    /// SHA-256 of the input document, when one was read.
    pub input_digest: Option<String>,
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
}

/// Sorted keys, two-space indentation, arrays of scalars on one line,
/// trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable output");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push_str(&format!("[{}]", parts.join(", ")));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

pub fn parse_weight(s: &str) -> Result<LatticeVector, String> {
    s.split(',')
        .map(|x| {
            BigInt::from_str(x.trim().replace('\u{2212}', "-").as_str())
                .map_err(|_| format!("invalid weight entry {x:?} in {s:?}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(LatticeVector::new)
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    digest: Option<String>,
    stderr: String,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, String> {
        let text = if path == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?
        };
        self.digest = Some(format!("{:x}", Sha256::digest(text.as_bytes())));
        Ok(text)
    }

    fn load(&mut self, path: &str) -> Result<DivisorFile, String> {
        let text = self.read(path)?;
        DivisorFile::parse(&text).map_err(|e| format!("{path}: {e}"))
    }
}

type Outcome = Result<(String, i32), String>;

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Equal => EXIT_OK,
        Verdict::Undetermined => EXIT_UNDETERMINED,
        Verdict::Different => EXIT_MISMATCH,
    }
}

#[derive(Serialize)]
struct FuzzRun {
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    divisor: Option<PolyhedralDivisor>,
    report: VerificationReport,
}

#[derive(Serialize)]
struct FuzzSummary {
    count: u64,
    overall: bool,
    runs: Vec<FuzzRun>,
    verdict: Verdict,
}

fn fuzz(seed: u64, count: u64, cap: u32) -> (String, i32) {
    let runs: Vec<FuzzRun> = (seed..seed.saturating_add(count))
        .map(|s| {
            let d = random::divisor_from_seed(s);
            let report = verify_theorem1(&d, cap);
            FuzzRun {
                seed: s,
                divisor: (!report.overall).then_some(d),
                report,
            }
        })
        .collect();
    let verdict = if runs.iter().any(|r| r.report.verdict == Verdict::Different) {
        Verdict::Different
    } else if runs.iter().any(|r| r.report.verdict == Verdict::Undetermined) {
        Verdict::Undetermined
    } else {
        Verdict::Equal
    };
    let summary = FuzzSummary {
        count,
        overall: runs.iter().all(|r| r.report.overall),
        runs,
        verdict,
    };
    (canonical_json(&summary), verdict_exit(verdict))
}

fn dispatch(cmd: Command, io: &mut Io) -> Outcome {
    match cmd {
        Command::Check { file } => {
            let f = io.load(&file)?;
            let report = f.divisor.check_proper();
            let code = match report.verdict {
                Properness::Proper => EXIT_OK,
                Properness::Inconclusive => EXIT_INCONCLUSIVE,
            };
            Ok((canonical_json(&report), code))
        }
        Command::Eval { file, u, floor } => {
            let f = io.load(&file)?;
            let u = parse_weight(&u)?;
            let out = if floor {
                canonical_json(&f.divisor.evaluate_floor(&u).map_err(|e| e.to_string())?)
            } else {
                canonical_json(&f.divisor.evaluate(&u).map_err(|e| e.to_string())?)
            };
            Ok((out, EXIT_OK))
        }
        Command::Fan {
            file,
            allow_inconclusive,
        } => {
            let f = io.load(&file)?;
            let report = f.divisor.check_proper();
            if report.verdict == Properness::Inconclusive && !allow_inconclusive {
                io.stderr.push_str(&format!(
                    "properness is inconclusive ({}); pass --allow-inconclusive to build the fan anyway\n",
                    report.reasons.join("; ")
                ));
                return Ok((canonical_json(&report), EXIT_INCONCLUSIVE));
            }
            let fan = fan_from_divisor(&f.divisor, f.trivial.as_ref()).map_err(|e| e.to_string())?;
            Ok((canonical_json(&fan), EXIT_OK))
        }
        Command::Verify {
            file,
            box_cap,
            fuzz: seed,
            count,
        } => match (file, seed) {
            (_, Some(seed)) => Ok(fuzz(seed, count, box_cap)),
            (Some(file), None) => {
                let f = io.load(&file)?;
                let report = verify_theorem1(&f.divisor, box_cap);
                let code = verdict_exit(report.verdict);
                Ok((canonical_json(&report), code))
            }
            (None, None) => Err("verify needs a divisor file or --fuzz <seed>".into()),
        },
        Command::Hilbert {
            file,
            point,
            box_bound,
        } => {
            let f = io.load(&file)?;
            let d = &f.divisor;
            if !d.base().has_point(&point) && !d.coefficients().contains_key(&point) {
                io.stderr.push_str(&format!(
                    "note: {point:?} is not listed on the base curve; treated as an unmarked point\n"
                ));
            }
            let hb = hilbert_basis(&MonomialSemigroup::at(d, &point), box_bound);
            if !hb.complete {
                io.stderr.push_str(&format!(
                    "warning: box {box_bound} is too small for a complete basis\n"
                ));
            }
            Ok((canonical_json(&hb), EXIT_OK))
        }
        Command::Example { name } => match examples::by_name(&name) {
            Some(d) => {
                let file = DivisorFile {
                    divisor: d,
                    trivial: None,
                    description: examples::description(&name).map(str::to_string),
                };
                Ok((canonical_json(&file), EXIT_OK))
            }
            None => Err(format!(
                "unknown example {name:?}; available: {}",
                examples::NAMES.join(", ")
            )),
        },
    }
}

/// Runs one invocation. `args[0]` is the program name.
pub fn run(args: &[String], stdin: &mut dyn Read) -> RunResult {
    let mut result = RunResult {
        command: args.to_vec(),
        input_digest: None,
        stdout: String::new(),
        stderr: String::new(),
        exit: EXIT_OK,
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                result.stderr = text;
                result.exit = EXIT_MALFORMED;
            } else {
                result.stdout = text;
            }
            return result;
        }
    };
    let mut io = Io {
        stdin,
        digest: None,
        stderr: String::new(),
    };
    let outcome = dispatch(cli.command, &mut io);
    result.input_digest = io.digest;
    result.stderr = io.stderr;
    match outcome {
        Ok((out, code)) => {
            result.stdout = out;
            result.exit = code;
        }
        Err(msg) => {
            result.stderr.push_str(&format!("error: {msg}\n"));
            result.exit = EXIT_MALFORMED;
        }
    }
    result
}
