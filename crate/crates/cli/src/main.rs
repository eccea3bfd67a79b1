//! `qdepth`: synthesize, simulate and verify constant-depth fanout, parity
//! and MOD_q circuits.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 the
//! register exceeds the simulation cap.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qdepth::ir::json::{from_json, to_json};
use qdepth::simulator::{run, StateVector};
use qdepth::synthesis::{CatBuilder, ClassicalCircuit, Construction, Request, Synthesized};
use qdepth::verify::{depth_scaling_table, identity_suite, verify_synthesized, VerifyError};
use qdepth::LayeringDiscipline;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "qdepth", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a circuit and write it as JSON.
    Synth {
        #[command(flatten)]
        build: Build,
        /// Output file; JSON goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a circuit file on a basis input and print the state.
    Sim {
        circuit: PathBuf,
        /// Bits listed qubit 0 first (e.g. `1100` sets qubits 0 and 1), or
        /// `plus@i` for (|0>+|1>)/sqrt2 on qubit i.
        input: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// Check a construction against its brute-force oracle.
    Verify {
        #[command(flatten)]
        build: Build,
        /// Verify this circuit file instead of a fresh synthesis.
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Report depth and ancillae without simulating.
        #[arg(long)]
        structural_only: bool,
        #[arg(long, env = "QDEPTH_TOL", default_value_t = qdepth::verify::DEFAULT_TOL)]
        tolerance: f64,
        #[command(flatten)]
        limits: Limits,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate depth, width and ancillae over a range of n.
    Scale {
        construction: Construction,
        n_min: usize,
        n_max: usize,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, default_value = "wf")]
        discipline: LayeringDiscipline,
        #[arg(long, default_value = "fanout")]
        builder: CatBuilder,
        /// Also verify every row that fits under the simulation cap.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        limits: Limits,
        #[arg(long)]
        json: bool,
    },
    /// Check the Hadamard conjugation identities.
    Identities {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Build {
    /// cat, fanout, parity-fanout, parity-cat, modq-seq, modq-const, ctrl-u
    /// or rev-embed.
    construction: Construction,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// strict or wf.
    #[arg(long, default_value = "wf")]
    discipline: LayeringDiscipline,
    /// Cat-state circuit used by parity-cat: fanout or log-cat.
    #[arg(long, default_value = "fanout")]
    builder: CatBuilder,
    /// Phase of the diag(1, e^{i theta}) unitary for ctrl-u.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    theta: f64,
    /// Boolean circuit JSON for rev-embed; a seeded random one otherwise.
    #[arg(long)]
    classical: Option<PathBuf>,
    /// Seed and layer count of the random Boolean circuit.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    layers: usize,
}

#[derive(Args)]
struct Limits {
    /// Largest register simulated.
    #[arg(long, env = "QDEPTH_SIM_CAP", default_value_t = qdepth::verify::DEFAULT_SIM_CAP)]
    cap: usize,
}

impl Build {
    fn request(&self) -> Result<Request> {
        let classical = match (&self.classical, self.construction) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Some(
                    serde_json::from_str::<ClassicalCircuit>(&text)
                        .context("parsing Boolean circuit")?,
                )
            }
            (None, Construction::RevEmbed) => {
                let n = self.n.context("rev-embed needs --n or --classical")?;
                if n == 0 || self.layers == 0 {
                    bail!("rev-embed needs n >= 1 and layers >= 1");
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                Some(ClassicalCircuit::random(&mut rng, n, self.layers, 3, 4))
            }
            (None, _) => None,
        };
        let n = match (self.n, &classical) {
            (Some(n), _) => n,
            (None, Some(c)) => c.inputs(),
            (None, None) => bail!("--n is required for {}", self.construction),
        };
        let mut r = Request::new(self.construction, n)
            .with_discipline(self.discipline)
            .with_builder(self.builder);
        r.theta = self.theta;
        r.q = self.q;
        r.classical = classical;
        Ok(r)
    }
}

fn summary(s: &Synthesized) -> String {
    format!(
        "depth={} ancillae={} work={} width={}",
        s.circuit.depth(),
        s.reported_ancillae(),
        s.work_qubits,
        s.circuit.width()
    )
}

fn read_circuit(path: &PathBuf) -> Result<qdepth::Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_input(input: &str, width: usize) -> Result<StateVector> {
    if let Some(q) = input.strip_prefix("plus@") {
        let q: usize = q.parse().context("plus@ needs a qubit index")?;
        if q >= width {
            bail!("qubit {q} is outside the {width}-qubit register");
        }
        return Ok(StateVector::plus(width, q));
    }
    if input.len() != width {
        bail!(
            "input has {} bits but the circuit has {width} qubits",
            input.len()
        );
    }
    let mut index = 0;
    for (q, ch) in input.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => index |= 1 << q,
            _ => bail!("input bits must be 0 or 1, found '{ch}'"),
        }
    }
    Ok(StateVector::basis(width, index))
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Synth { build, out } => {
            let s = build.request()?.synthesize()?;
            let json = to_json(&s.circuit);
            match out {
                Some(path) => {
                    fs::write(&path, json)
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("{}", summary(&s));
                }
                None => println!("{json}"),
            }
        }
        Command::Sim {
            circuit,
            input,
            limits,
        } => {
            let c = read_circuit(&circuit)?;
            if c.width() > limits.cap {
                return Err(VerifyError::CapExceeded {
                    width: c.width(),
                    cap: limits.cap,
                }
                .into());
            }
            let state = run(&c, parse_input(&input, c.width())?)?;
            print!("{}", state.dump());
        }
        Command::Verify {
            build,
            circuit,
            structural_only,
            tolerance,
            limits,
            json,
        } => {
            let mut s = build.request()?.synthesize()?;
            if let Some(path) = circuit {
                s.circuit = read_circuit(&path)?;
            }
            let report = verify_synthesized(&s, tolerance, limits.cap, structural_only)?;
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                print!("{}", report.text());
            }
            if !structural_only && !report.pass {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Scale {
            construction,
            n_min,
            n_max,
            q,
            discipline,
            builder,
            check,
            limits,
            json,
        } => {
            if n_min == 0 || n_min > n_max {
                bail!("need 1 <= n_min <= n_max");
            }
            if construction == Construction::RevEmbed {
                bail!("rev-embed has no size family to scale");
            }
            let mut template = Request::new(construction, n_min)
                .with_discipline(discipline)
                .with_builder(builder);
            template.q = q;
            let table = depth_scaling_table(&template, n_min..=n_max, check.then_some(limits.cap))?;
            if json {
                println!("{}", serde_json::to_string(&table)?);
            } else {
                print!("{}", table.tsv());
                println!("verdict={}", table.growth.name());
            }
            if table.rows.iter().any(|r| r.verified == Some(false)) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Identities { json } => {
            let results = identity_suite()?;
            if json {
                println!("{}", serde_json::to_string(&results)?);
            } else {
                for r in &results {
                    let verdict = if r.pass { "PASS" } else { "FAIL" };
                    println!("{verdict} {} max_error={:e}", r.name, r.max_error);
                }
            }
            if results.iter().any(|r| !r.pass) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<VerifyError>() {
        Some(VerifyError::CapExceeded { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
