//! `resform`: command-line access to every module of the library.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check
//! fails (or the search budget runs out), 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use resform::charsums::{gauss_sum, jacobi_sum, sigma_sum, weil_check, CharacterGroup};
use resform::chartransform::{e_function, tilde_identity_suite, uncertainty_product, ChiSystem};
use resform::diffsets::{in_class_d, is_multiplicative_group, multiplier_theorem_instances, multipliers, pds_lambda, singer_construction};
use resform::funcspace::energy_k;
use resform::identities::{random_complex, run_suite};
use resform::search::{classify_with_budget, verify_range, SearchConfig, DEFAULT_MAX_NODES};
use resform::sumsets::{
    diagnostics, e2_decomposition, epsilon_profile, paley_clique, represents_r, restricted_structure, sumset,
    sumset_for_mode, z_decomposition, EpsilonVariant,
};
use resform::{CFunction, Error, FSet, Mode, PrimeField};

const OUTPUT_SCHEMA: &str = "resform-out/1";

#[derive(Parser)]
#[command(name = "resform", version, about = "Sumsets equal to the quadratic residues: computations and checks")]
struct Cli {
    /// Emit a JSON envelope instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PrimeArg {
    #[arg(short = 'p', long = "prime")]
    p: u64,
}

#[derive(Args)]
struct SetArg {
    /// Comma-separated elements, reduced modulo the modulus.
    #[arg(long, value_parser = parse_set, allow_hyphen_values = true)]
    set: Elems,
}

/// A comma-separated list of integers, optionally wrapped in brackets.
#[derive(Clone, Debug)]
struct Elems(Vec<i64>);

#[derive(Args)]
struct SeedArg {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Quadratic residues and non-residues.
    Residues(PrimeArg),
    /// Legendre symbol of x, via table and Euler's criterion.
    Legendre {
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(short = 'x', long, allow_hyphen_values = true)]
        x: i64,
    },
    /// Gauss sum of the Legendre symbol.
    Gauss(PrimeArg),
    /// Jacobi sum of two characters given by index.
    Jacobi {
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long)]
        phi: u64,
        #[arg(long)]
        psi: u64,
    },
    /// Σ_x χ(x)χ(x+s_1)…χ(x+s_k) against k√p.
    Weil {
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long, value_delimiter = ',', required = true)]
        shifts: Vec<u64>,
    },
    /// Σ_{x∈B, y∈A} ψ(x+y) against its bounds.
    Sigma {
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long, value_parser = parse_set, allow_hyphen_values = true)]
        a: Elems,
        #[arg(long, value_parser = parse_set, allow_hyphen_values = true)]
        b: Elems,
        /// Character index; the Legendre symbol by default.
        #[arg(long)]
        character: Option<u64>,
    },
    /// Additive energy E_k(A) in Z_m.
    Energy {
        #[arg(short = 'm', long)]
        modulus: usize,
        #[command(flatten)]
        set: SetArg,
        #[arg(short = 'k', long, default_value_t = 2)]
        k: u32,
    },
    /// Perfect difference set test.
    Pds {
        #[arg(short = 'm', long)]
        modulus: usize,
        #[command(flatten)]
        set: SetArg,
    },
    /// Multiplier group and fixed translates.
    Multipliers {
        #[arg(short = 'm', long)]
        modulus: usize,
        #[command(flatten)]
        set: SetArg,
    },
    /// Singer difference set for a prime q.
    Singer {
        #[arg(short = 'q', long)]
        q: u64,
    },
    /// Sumset or restricted sumset compared with R.
    Sumset {
        #[command(flatten)]
        prime: PrimeArg,
        #[command(flatten)]
        set: SetArg,
        #[arg(long, default_value = "standard")]
        mode: Mode,
    },
    /// Diagnostics, defect profiles and decompositions of A.
    Diagnostics {
        #[command(flatten)]
        prime: PrimeArg,
        #[command(flatten)]
        set: SetArg,
        /// Second set for the circ defect profile; A by default.
        #[arg(long, value_parser = parse_set, allow_hyphen_values = true)]
        other: Option<Elems>,
    },
    /// Paley clique number against its bound.
    Clique(PrimeArg),
    /// Identity suite of the transform on random inputs.
    TildeCheck {
        #[command(flatten)]
        prime: PrimeArg,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// E_A = A ∘ χ and its properties.
    Efun {
        #[command(flatten)]
        prime: PrimeArg,
        #[command(flatten)]
        set: SetArg,
    },
    /// |supp g|·|supp g̃| for the indicator of a set or a random sparse g.
    Uncertainty {
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long, value_parser = parse_set, allow_hyphen_values = true)]
        set: Option<Elems>,
        #[arg(long, default_value_t = 3)]
        support: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// All A with A+A = R or A+̂A = R.
    Classify {
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long, default_value = "restricted")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        budget: u64,
    },
    /// Classify over a prime range and write a certificate.
    Verify {
        #[arg(long, default_value_t = 3)]
        p_min: u64,
        #[arg(long, default_value_t = 100)]
        p_max: u64,
        #[arg(long, default_value = "restricted")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Classify primes one after another.
        #[arg(long)]
        serial: bool,
    },
    /// Full identity suite for one prime or a range.
    Identities {
        #[arg(short = 'p', long = "prime", conflicts_with_all = ["p_min", "p_max"])]
        p: Option<u64>,
        #[arg(long)]
        p_min: Option<u64>,
        #[arg(long)]
        p_max: Option<u64>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => CliError::Failure(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

struct Outcome {
    params: Value,
    result: Value,
    /// Name and inputs of every failed check.
    failures: Vec<String>,
}

impl Outcome {
    fn new(params: Value, result: impl Serialize) -> Self {
        Outcome { params, result: to_value(result), failures: Vec::new() }
    }

    fn check(mut self, ok: bool, what: impl Into<String>) -> Self {
        if !ok {
            self.failures.push(what.into());
        }
        self
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    params: &'a Value,
    result: &'a Value,
    schema: &'static str,
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("payloads serialize")
}

fn parse_set(s: &str) -> Result<Elems, String> {
    s.trim()
        .trim_start_matches(['[', '{'])
        .trim_end_matches([']', '}'])
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<_, _>>()
        .map(Elems)
}

fn field(p: u64) -> Result<PrimeField, CliError> {
    Ok(PrimeField::new(p)?)
}

fn fset(modulus: usize, xs: &Elems) -> Result<FSet, CliError> {
    Ok(FSet::from_residues(modulus, xs.0.iter().copied())?)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Residues(_) => "residues",
        Command::Legendre { .. } => "legendre",
        Command::Gauss(_) => "gauss",
        Command::Jacobi { .. } => "jacobi",
        Command::Weil { .. } => "weil",
        Command::Sigma { .. } => "sigma",
        Command::Energy { .. } => "energy",
        Command::Pds { .. } => "pds",
        Command::Multipliers { .. } => "multipliers",
        Command::Singer { .. } => "singer",
        Command::Sumset { .. } => "sumset",
        Command::Diagnostics { .. } => "diagnostics",
        Command::Clique(_) => "clique",
        Command::TildeCheck { .. } => "tilde-check",
        Command::Efun { .. } => "efun",
        Command::Uncertainty { .. } => "uncertainty",
        Command::Classify { .. } => "classify",
        Command::Verify { .. } => "verify",
        Command::Identities { .. } => "identities",
    }
}

fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Residues(PrimeArg { p }) => {
            let f = field(*p)?;
            Ok(Outcome::new(json!({ "p": p }), json!({ "R": f.residue_set(), "N": f.nonresidue_set() })))
        }
        Command::Legendre { prime: PrimeArg { p }, x } => {
            let f = field(*p)?;
            let table = f.legendre(f.reduce(*x));
            let euler = f.euler_criterion(x.rem_euclid(*p as i64) as u64);
            Ok(Outcome::new(json!({ "p": p, "x": x }), json!({ "legendre": table, "euler": euler }))
                .check(table == euler, format!("legendre table disagrees with Euler's criterion at p={p} x={x}")))
        }
        Command::Gauss(PrimeArg { p }) => {
            let g = gauss_sum(&field(*p)?);
            let ok = g.matches_closed_form();
            Ok(Outcome::new(json!({ "p": p }), &g).check(ok, format!("gauss sum closed form at p={p}")))
        }
        Command::Jacobi { prime: PrimeArg { p }, phi, psi } => {
            let group = CharacterGroup::new(field(*p)?);
            let (a, b) = (group.character(*phi)?, group.character(*psi)?);
            let value = jacobi_sum(&a, &b)?;
            let pf = *p as f64;
            let tol = 1e-6 * pf;
            let product_principal = (phi + psi) % group.order() == 0;
            let (expected, ok) = if a.is_principal() || b.is_principal() {
                ("none", true)
            } else if product_principal {
                let want = -b.eval(-1);
                ("-psi(-1)", (value - want).norm() <= tol)
            } else {
                ("|J|^2 = p", (value.norm_sqr() - pf).abs() <= tol)
            };
            Ok(Outcome::new(json!({ "p": p, "phi": phi, "psi": psi }), json!({ "value": value, "expected": expected }))
                .check(ok, format!("jacobi sum at p={p} phi={phi} psi={psi}")))
        }
        Command::Weil { prime: PrimeArg { p }, shifts } => {
            let r = weil_check(&field(*p)?, shifts)?;
            let ok = r.pass;
            Ok(Outcome::new(json!({ "p": p, "shifts": shifts }), &r).check(ok, format!("weil bound at p={p} shifts={shifts:?}")))
        }
        Command::Sigma { prime: PrimeArg { p }, a, b, character } => {
            let f = field(*p)?;
            let m = f.modulus();
            let (sa, sb) = (fset(m, a)?, fset(m, b)?);
            let group = CharacterGroup::new(f);
            let chi = match character {
                Some(i) => group.character(*i)?,
                None => group.legendre(),
            };
            let r = sigma_sum(&sa, &sb, &chi)?;
            let ok = r.de_pass && r.sharp_pass;
            Ok(Outcome::new(json!({ "p": p, "a": sa, "b": sb, "character": chi.index() }), &r)
                .check(ok, format!("sigma bounds at p={p} A={sa} B={sb} character={}", chi.index())))
        }
        Command::Energy { modulus, set, k } => {
            let a = fset(*modulus, &set.set)?;
            let e = energy_k(&a, *k)?;
            Ok(Outcome::new(json!({ "modulus": modulus, "set": a, "k": k }), json!({ "energy": e })))
        }
        Command::Pds { modulus, set } => {
            let a = fset(*modulus, &set.set)?;
            let r = pds_lambda(&a);
            let class_d = in_class_d(&a.indicator());
            Ok(Outcome::new(json!({ "modulus": modulus, "set": a }), json!({ "is_pds": r.is_pds, "lambda": r.lambda, "class_d": class_d }))
                .check(class_d == r.is_pds, format!("class D disagrees with difference-set test for {a}")))
        }
        Command::Multipliers { modulus, set } => {
            let a = fset(*modulus, &set.set)?;
            let group = multipliers(&a);
            let is_group = is_multiplicative_group(&group);
            let instances = multiplier_theorem_instances(&a);
            let fixed = instances.as_ref().is_none_or(|v| v.iter().all(|i| i.translate.is_some()));
            Ok(Outcome::new(json!({ "modulus": modulus, "set": a }), json!({ "multipliers": group, "is_group": is_group, "theorem_instances": instances }))
                .check(is_group, format!("multipliers of {a} do not form a group"))
                .check(fixed, format!("no fixed translate for some multiplier of {a}")))
        }
        Command::Singer { q } => {
            let (spec, set) = singer_construction(*q)?;
            let lambda = pds_lambda(&set).lambda;
            let ok = lambda == Some(1) && set.len() as u64 == q + 1;
            Ok(Outcome::new(json!({ "q": q }), json!({ "spec": spec, "set": set, "lambda": lambda }))
                .check(ok, format!("singer set for q={q} is not a λ=1 difference set of size q+1")))
        }
        Command::Sumset { prime: PrimeArg { p }, set, mode } => {
            let f = field(*p)?;
            let a = fset(f.modulus(), &set.set)?;
            let s = sumset_for_mode(&a, *mode);
            Ok(Outcome::new(json!({ "p": p, "set": a, "mode": mode }), json!({ "sumset": s, "represents_r": represents_r(&f, &a, *mode) })))
        }
        Command::Diagnostics { prime: PrimeArg { p }, set, other } => {
            let f = field(*p)?;
            let a = fset(f.modulus(), &set.set)?;
            let b = match other {
                Some(xs) => fset(f.modulus(), xs)?,
                None => a.clone(),
            };
            let d = diagnostics(&f, &a)?;
            let circ = epsilon_profile(&f, &a, &b, EpsilonVariant::Circ)?;
            let star = epsilon_profile(&f, &a, &a, EpsilonVariant::Star)?;
            let z = z_decomposition(&f, &a)?;
            let e2 = e2_decomposition(&f, &a)?;
            let structure = represents_r(&f, &a, Mode::Restricted).then(|| restricted_structure(&f, &a)).transpose()?;
            let structure_ok = structure.as_ref().is_none_or(|s| s.holds());
            let ok = [circ.holds(), star.holds(), z.holds(), e2.holds()];
            Ok(Outcome::new(
                json!({ "p": p, "set": a, "other": b }),
                json!({
                    "diagnostics": d,
                    "sumset_ab": sumset(&a, &b)?,
                    "epsilon_circ": circ,
                    "epsilon_star": star,
                    "z": z,
                    "e2": e2,
                    "restricted_structure": structure,
                }),
            )
            .check(ok[0], format!("circ defect profile at p={p} A={a} B={b}"))
            .check(ok[1], format!("star defect profile at p={p} A={a}"))
            .check(ok[2], format!("Z decomposition at p={p} A={a}"))
            .check(ok[3], format!("E2 decomposition at p={p} A={a}"))
            .check(structure_ok, format!("restricted structure at p={p} A={a}")))
        }
        Command::Clique(PrimeArg { p }) => {
            let r = paley_clique(&field(*p)?);
            let ok = r.bound_holds;
            Ok(Outcome::new(json!({ "p": p }), &r).check(ok, format!("clique bound at p={p}")))
        }
        Command::TildeCheck { prime: PrimeArg { p }, seed: SeedArg { seed }, trials } => {
            let sys = ChiSystem::new(field(*p)?);
            let m = sys.field().modulus();
            let pi = *p as i64;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut worst: Vec<(&'static str, f64, f64)> = Vec::new();
            let mut failures = Vec::new();
            for trial in 0..*trials {
                let phi = random_complex(&mut rng, m);
                let psi = random_complex(&mut rng, m);
                let (l, mu, s) = (rng.gen_range(1..pi), rng.gen_range(1..pi), rng.gen_range(0..pi));
                let r = tilde_identity_suite(&sys, &phi, &psi, l, mu, s)?;
                for c in &r.checks {
                    match worst.iter_mut().find(|w| w.0 == c.name) {
                        Some(w) => w.1 = w.1.max(c.max_error / c.tolerance),
                        None => worst.push((c.name, c.max_error / c.tolerance, 0.0)),
                    }
                    if !c.pass {
                        failures.push(format!("{} at p={p} seed={seed} trial={trial} λ={l} μ={mu} s={s}", c.name));
                    }
                }
            }
            let result: Vec<Value> = worst.iter().map(|(n, ratio, _)| json!({ "identity": n, "worst_error_over_tolerance": ratio, "pass": *ratio <= 1.0 })).collect();
            let mut out = Outcome::new(json!({ "p": p, "seed": seed, "trials": trials }), result);
            out.failures = failures;
            Ok(out)
        }
        Command::Efun { prime: PrimeArg { p }, set } => {
            let sys = ChiSystem::new(field(*p)?);
            let a = fset(sys.field().modulus(), &set.set)?;
            let e = e_function(&sys, &a)?;
            let ok = e.holds();
            Ok(Outcome::new(json!({ "p": p, "set": a }), &e).check(ok, format!("E_A properties at p={p} A={a}")))
        }
        Command::Uncertainty { prime: PrimeArg { p }, set, support, seed: SeedArg { seed } } => {
            let sys = ChiSystem::new(field(*p)?);
            let m = sys.field().modulus();
            let g = match set {
                Some(xs) => fset(m, xs)?.indicator().to_complex(),
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    let mut g = CFunction::zeros(m);
                    for _ in 0..(*support).max(1) {
                        let x = rng.gen_range(0..m);
                        g.set(x, num_complex_unit(&mut rng));
                    }
                    g
                }
            };
            let r = uncertainty_product(&sys, &g)?;
            let ok = r.pass;
            Ok(Outcome::new(json!({ "p": p, "set": set.as_ref().map(|e| &e.0), "support": support, "seed": seed }), &r)
                .check(ok, format!("uncertainty principle at p={p} seed={seed}")))
        }
        Command::Classify { prime: PrimeArg { p }, mode, budget } => {
            let f = field(*p)?;
            let out = classify_with_budget(&f, *mode, *budget)?;
            let ok = out.solutions.iter().all(|a| represents_r(&f, a, *mode));
            Ok(Outcome::new(json!({ "p": p, "mode": mode, "budget": budget, "nodes": out.nodes }), &out.solutions)
                .check(ok, format!("classify at p={p} returned a set that does not represent R")))
        }
        Command::Verify { p_min, p_max, mode, budget, out, serial } => {
            let config = SearchConfig { mode: *mode, p_min: *p_min, p_max: *p_max, max_nodes: *budget, parallel: !serial };
            let cert = verify_range(&config)?;
            if let Some(path) = out {
                fs::write(path, cert.to_json()).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            let solutions: Vec<Value> = cert
                .primes
                .iter()
                .filter(|e| !e.solutions.is_empty())
                .map(|e| json!({ "p": e.p, "sets": e.solutions }))
                .collect();
            let mut outcome = Outcome::new(
                json!({ "p_min": p_min, "p_max": p_max, "mode": mode, "budget": budget, "out": out }),
                json!({
                    "pass": cert.pass,
                    "primes_checked": cert.primes.len(),
                    "nodes": cert.primes.iter().map(|e| e.nodes).sum::<u64>(),
                    "solutions": solutions,
                    "checks": cert.checks,
                }),
            );
            outcome.failures = cert.checks.failures.clone();
            Ok(outcome)
        }
        Command::Identities { p, p_min, p_max, seed: SeedArg { seed }, trials } => {
            let (lo, hi) = match (p, p_min, p_max) {
                (Some(p), _, _) => (*p, *p),
                (None, Some(lo), Some(hi)) => (*lo, *hi),
                _ => return Err(CliError::Usage("give -p or both --p-min and --p-max".into())),
            };
            if hi < lo {
                return Err(CliError::Usage(format!("p_max {hi} is below p_min {lo}")));
            }
            if lo == hi {
                field(lo)?;
            } else if lo < 3 {
                return Err(CliError::Usage(format!("p_min must be at least 3, got {lo}")));
            }
            let report = run_suite(lo, hi, *seed, *trials)?;
            let failures = report
                .failures()
                .map(|(p, r)| format!("{} at p={p} seed={seed}: {}", r.name, r.detail.as_deref().unwrap_or("")))
                .collect();
            let mut outcome = Outcome::new(json!({ "p_min": lo, "p_max": hi, "seed": seed, "trials": trials }), &report);
            outcome.failures = failures;
            Ok(outcome)
        }
    }
}

fn num_complex_unit(rng: &mut ChaCha8Rng) -> num_complex::Complex64 {
    num_complex::Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn render_table(command: &str, params: &Value, result: &Value, pass: bool) -> String {
    let mut out = format!("{command}\n");
    if let Value::Object(map) = params {
        for (k, v) in map {
            out.push_str(&format!("  {k:<12} {v}\n"));
        }
    }
    match result {
        Value::Object(map) => {
            for (k, v) in map {
                out.push_str(&format!("{k:<22} {v}\n"));
            }
        }
        other => out.push_str(&format!("{other}\n")),
    }
    out.push_str(if pass { "status                 PASS\n" } else { "status                 FAIL\n" });
    out
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
    let name = command_name(&cli.command);
    match run(&cli.command) {
        Ok(outcome) => {
            let pass = outcome.failures.is_empty();
            if cli.json {
                let env = Envelope { command: name, params: &outcome.params, result: &outcome.result, schema: OUTPUT_SCHEMA };
                println!("{}", serde_json::to_string(&env).expect("envelope serializes"));
            } else {
                print!("{}", render_table(name, &outcome.params, &outcome.result, pass));
            }
            for f in &outcome.failures {
                eprintln!("assertion failed: {f}");
            }
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(1)
        }
    }
}
