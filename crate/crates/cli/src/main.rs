//! linset: explore F_q-linear sets of rank n on PG(1,q^n).
//!
//! Every command emits a reproducible report: a JSON envelope with the
//! field specification in the header and an exact-integer body, or CSV for
//! tabular bodies. Exit codes: 0 success, 2 budget refusal, 3 when a
//! verified classification statement is contradicted, 1 for other errors.

use clap::{Args, Parser, Subcommand};
use linset_core::classify::{
    gl_class, nonsimple_criterion, semilinear_equivalence, zgl_class, Budget, Falsification,
    SemilinearMap,
};
use linset_core::error::Error;
use linset_core::field::{build_field, FElem, FieldCtx, FieldSpec};
use linset_core::geometry::{
    blocking_checks, project_subgeometry, realize_as_projection, redei_blocking_set,
    transversal_spaces, transversal_spaces_full_sweep, ProjectionConfig,
};
use linset_core::mrd::{code_equivalent_smallscale, code_from_poly, is_mrd, rank_distribution};
use linset_core::projline::{profile_of_poly, subspace_of_poly, LinearSetProfile};
use linset_core::qpoly::{format_coeffs, parse_coeffs, QPoly};
use linset_core::verify::{run_criterion, CriterionOutcome, SEED};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "linset",
    version,
    about = "Linear sets of rank n on PG(1,q^n): profiles, equivalence classes, rank-metric codes, blocking sets, projections"
)]
struct Cli {
    /// Worker threads for the parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Candidate budget for exhaustive searches (default 2^27, or
    /// LINSET_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Output format: json (default) or csv for tabular bodies.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    /// Characteristic (prime).
    #[arg(long)]
    p: u64,
    /// q = p^e.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Extension degree of F_{q^n} over F_q.
    #[arg(long)]
    n: u32,
    /// Modulus coefficients c0,c1,...,c_en (monic irreducible over F_p);
    /// defaults to the smallest-encoding irreducible.
    #[arg(long)]
    modulus: Option<String>,
}

impl FieldArgs {
    fn build(&self) -> Result<FieldCtx, Error> {
        let modulus = self.modulus.as_deref().map(parse_u64_list).transpose()?;
        build_field(self.p, self.e, self.n, modulus.as_deref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Point count, weight spectrum and scatteredness of L_f.
    Profile {
        #[command(flatten)]
        field: FieldArgs,
        /// Coefficients "a0,a1,..." or trace | pseudoregulus:s |
        /// sheekey:delta | ltz:s,delta.
        #[arg(long)]
        f: String,
    },
    /// ZGammaL- and GammaL-class of L_f with witnesses.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        f: String,
    },
    /// Search for a semilinear map carrying U_f onto U_g.
    Equiv {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Sweep delta for the twisted family delta*x^q + x^(q^(n-1)); report
    /// which delta certify non-simplicity.
    NonsimpleScan {
        #[command(flatten)]
        field: FieldArgs,
        /// Check a single delta (encoding) instead of sweeping.
        #[arg(long)]
        delta: Option<u64>,
    },
    /// Rank distribution and MRD check of the code {a x + b f(x)}.
    Mrd {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        f: String,
        /// Also test matrix-code equivalence against this polynomial.
        #[arg(long)]
        equiv_with: Option<String>,
        /// Allow transposition in the equivalence search.
        #[arg(long, default_value_t = false)]
        allow_transpose: bool,
    },
    /// Redei-type blocking set of PG(2,q^n) spanned by U_f and w.
    Blocking {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        f: String,
        /// Affine point w0,w1,w2 outside the line (default 0,0,1).
        #[arg(long)]
        w: Option<String>,
    },
    /// Realize L_f as a projection of the rational subgeometry (or project
    /// an explicit center/axis configuration).
    Project {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        f: Option<String>,
        /// Center vectors "c0,c1,..;c0,c1,.." (n-2 vectors of length n).
        #[arg(long)]
        gamma: Option<String>,
        /// Axis vectors "c0,..;c0,.." (2 vectors of length n).
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Count subspaces defining L_f up to scaling; cross-check against the
    /// coefficient-space classification.
    Transversal {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        f: String,
        /// Use the full echelon-form subspace sweep instead of graph
        /// enumeration.
        #[arg(long, default_value_t = false)]
        full_sweep: bool,
    },
    /// Run the verification battery (all criteria, or a subset).
    VerifySuite {
        /// Comma-separated criterion ids, e.g. "1,2,7".
        #[arg(long)]
        criteria: Option<String>,
    },
}

// ---- report envelope ----------------------------------------------------------

#[derive(Serialize)]
struct Header {
    tool: &'static str,
    version: &'static str,
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<FieldSpec>,
    budget: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    header: Header,
    body: T,
    falsified: bool,
}

struct Emitter {
    out: Option<std::path::PathBuf>,
    format: String,
    command: String,
    budget: u128,
}

impl Emitter {
    fn emit<T: Serialize>(
        &self,
        field: Option<FieldSpec>,
        seed: Option<u64>,
        body: T,
        falsified: bool,
        csv: Option<String>,
    ) -> Result<(), Error> {
        let bytes = match self.format.as_str() {
            "json" => {
                let report = Report {
                    header: Header {
                        tool: "linset",
                        version: env!("CARGO_PKG_VERSION"),
                        command: self.command.clone(),
                        field,
                        budget: self.budget,
                        seed,
                    },
                    body,
                    falsified,
                };
                let mut s = serde_json::to_string_pretty(&report)
                    .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
                s.push('\n');
                s.into_bytes()
            }
            "csv" => csv
                .ok_or_else(|| {
                    Error::Parse("csv output is only available for tabular bodies".into())
                })?
                .into_bytes(),
            other => return Err(Error::Parse(format!("unknown format {other:?}"))),
        };
        match &self.out {
            Some(path) => std::fs::write(path, bytes)
                .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?,
            None => {
                use std::io::Write;
                std::io::stdout()
                    .write_all(&bytes)
                    .map_err(|e| Error::Parse(format!("stdout: {e}")))?;
            }
        }
        Ok(())
    }
}

// ---- helpers -------------------------------------------------------------------

fn parse_u64_list(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

fn parse_vector(ctx: &FieldCtx, s: &str) -> Result<Vec<FElem>, Error> {
    parse_u64_list(s)?
        .into_iter()
        .map(|enc| ctx.elem(enc))
        .collect()
}

/// Coefficient lists plus the named constructors of the recognized
/// families.
fn parse_poly(ctx: &FieldCtx, s: &str) -> Result<QPoly, Error> {
    use linset_core::mrd::{family, CodeFamily};
    if s == "trace" {
        return Ok(QPoly::trace(ctx));
    }
    if s == "gabidulin" || s == "pseudoregulus" {
        return family(ctx, CodeFamily::Gabidulin, 0, None);
    }
    if let Some(rest) = s.strip_prefix("pseudoregulus:") {
        let exp: u32 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
        return family(ctx, CodeFamily::GenGabidulin, exp, None);
    }
    if let Some(rest) = s.strip_prefix("sheekey:") {
        let enc: u64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad delta in {s:?}")))?;
        return family(ctx, CodeFamily::Sheekey, 0, Some(ctx.elem(enc)?));
    }
    if let Some(rest) = s.strip_prefix("ltz:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("ltz wants s,delta; got {s:?}")));
        }
        let exp: u32 = parts[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
        let enc: u64 = parts[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad delta in {s:?}")))?;
        return family(ctx, CodeFamily::Ltz, exp, Some(ctx.elem(enc)?));
    }
    parse_coeffs(ctx, s)
}

fn budget_from(cli_budget: Option<u128>) -> Budget {
    let from_env = std::env::var("LINSET_BUDGET")
        .ok()
        .and_then(|v| v.parse::<u128>().ok());
    match cli_budget.or(from_env) {
        Some(max_candidates) => Budget { max_candidates },
        None => Budget::default(),
    }
}

// ---- command bodies -------------------------------------------------------------

#[derive(Serialize)]
struct ClassifyBody {
    zgl_class: usize,
    gl_class: usize,
    simple: bool,
    representatives: Vec<String>,
    witnesses: Vec<WitnessBody>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    falsifications: Vec<Falsification>,
}

#[derive(Serialize)]
struct WitnessBody {
    from: usize,
    to: usize,
    #[serde(rename = "A")]
    a: u64,
    #[serde(rename = "B")]
    b: u64,
    #[serde(rename = "C")]
    c: u64,
    #[serde(rename = "D")]
    d: u64,
    k: u32,
}

impl WitnessBody {
    fn new(from: usize, to: usize, m: &SemilinearMap) -> WitnessBody {
        WitnessBody {
            from,
            to,
            a: m.a.0,
            b: m.b.0,
            c: m.c.0,
            d: m.d.0,
            k: m.k,
        }
    }
}

#[derive(Serialize)]
struct EquivBody {
    equivalent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessBody>,
}

#[derive(Serialize)]
struct ScanEntry {
    delta: u64,
    is_generator: bool,
}

#[derive(Serialize)]
struct ScanBody {
    q: u64,
    n: u32,
    certifying_count: usize,
    certifying: Vec<ScanEntry>,
    generators_all_certify: bool,
}

#[derive(Serialize)]
struct MrdBody {
    n: u32,
    q: u64,
    #[serde(rename = "A")]
    a: Vec<u64>,
    mrd: bool,
    /// Encodings of the F_q-basis g^0..g^(n-1) realizing maps as matrices;
    /// equivalence witnesses depend on this choice.
    matrix_basis: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equivalence: Option<serde_json::Value>,
}

#[derive(Serialize)]
struct BlockingBody {
    plane: String,
    size: u64,
    is_blocking: bool,
    #[serde(rename = "N")]
    n_secant: u64,
    redei_lines: u64,
}

#[derive(Serialize)]
struct ProjectBody {
    gamma: Vec<Vec<u64>>,
    lambda: Vec<Vec<u64>>,
    size: usize,
    profile: LinearSetProfile,
}

#[derive(Serialize)]
struct TransversalBody {
    count: usize,
    zgl_class: usize,
    agree: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    falsifications: Vec<Falsification>,
}

#[derive(Serialize)]
struct SuiteBody {
    criteria: Vec<CriterionOutcome>,
    all_passed: bool,
}

// ---- main ------------------------------------------------------------------------

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let budget = budget_from(cli.budget);
    let emitter = Emitter {
        out: cli.out.clone(),
        format: cli.format.clone(),
        command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
        budget: budget.max_candidates,
    };
    match run(&cli.command, &budget, &emitter) {
        Ok(falsified) => std::process::exit(if falsified { 3 } else { 0 }),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::BudgetExceeded { .. } => 2,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}

fn run(cmd: &Command, budget: &Budget, emitter: &Emitter) -> Result<bool, Error> {
    match cmd {
        Command::Profile { field, f } => {
            let ctx = field.build()?;
            let f = parse_poly(&ctx, f)?;
            let prof = profile_of_poly(&ctx, &f);
            emitter.emit(Some(ctx.spec()), None, &prof, false, None)?;
            Ok(false)
        }
        Command::Classify { field, f } => {
            let ctx = field.build()?;
            let fp = parse_poly(&ctx, f)?;
            let report = gl_class(&ctx, &fp, budget)?;
            let mut falsifications = Vec::new();
            if ctx.n() == 4 && report.gl_class != 1 {
                falsifications.push(Falsification::new(
                    &ctx,
                    "every rank-4 set with maximum field of linearity F_q is simple",
                    &fp,
                    None,
                    format!("gl={}", report.gl_class),
                ));
            }
            if fp == QPoly::trace(&ctx) && (report.zgl_class != 1 || report.gl_class != 1) {
                falsifications.push(Falsification::new(
                    &ctx,
                    "the trace-defined set has scaling and semilinear class one",
                    &fp,
                    None,
                    format!("zgl={} gl={}", report.zgl_class, report.gl_class),
                ));
            }
            let falsified = !falsifications.is_empty();
            let body = ClassifyBody {
                zgl_class: report.zgl_class,
                gl_class: report.gl_class,
                simple: report.simple,
                representatives: report.representatives.iter().map(format_coeffs).collect(),
                witnesses: report
                    .witnesses
                    .iter()
                    .map(|w| WitnessBody::new(w.from, w.to, &w.map))
                    .collect(),
                falsifications,
            };
            emitter.emit(Some(ctx.spec()), None, &body, falsified, None)?;
            Ok(falsified)
        }
        Command::Equiv { field, f, g } => {
            let ctx = field.build()?;
            let fp = parse_poly(&ctx, f)?;
            let gp = parse_poly(&ctx, g)?;
            let sweep = ctx.en() as u128 * (ctx.size() as u128).pow(2);
            budget.check("semilinear witness candidates", sweep)?;
            let witness = semilinear_equivalence(&ctx, &fp, &gp);
            let body = EquivBody {
                equivalent: witness.is_some(),
                witness: witness.map(|m| WitnessBody::new(0, 1, &m)),
            };
            emitter.emit(Some(ctx.spec()), None, &body, false, None)?;
            Ok(false)
        }
        Command::NonsimpleScan { field, delta } => {
            let ctx = field.build()?;
            budget.check("delta sweep", ctx.size() as u128 * ctx.en() as u128)?;
            let deltas: Vec<FElem> = match delta {
                Some(enc) => vec![ctx.elem(*enc)?],
                None => ctx.nonzero_elements().collect(),
            };
            let certifying: Vec<ScanEntry> = deltas
                .iter()
                .filter(|&&d| nonsimple_criterion(&ctx, d))
                .map(|&d| ScanEntry {
                    delta: d.0,
                    is_generator: ctx.is_generator(d),
                })
                .collect();
            let generators_all_certify = deltas
                .iter()
                .filter(|&&d| ctx.is_generator(d))
                .all(|&d| nonsimple_criterion(&ctx, d));
            let mut csv = String::from("delta,is_generator\n");
            for e in &certifying {
                csv.push_str(&format!("{},{}\n", e.delta, e.is_generator));
            }
            let body = ScanBody {
                q: ctx.q(),
                n: ctx.n(),
                certifying_count: certifying.len(),
                certifying,
                generators_all_certify,
            };
            emitter.emit(Some(ctx.spec()), None, &body, false, Some(csv))?;
            Ok(false)
        }
        Command::Mrd {
            field,
            f,
            equiv_with,
            allow_transpose,
        } => {
            let ctx = field.build()?;
            let fp = parse_poly(&ctx, f)?;
            let code = code_from_poly(&ctx, &fp)?;
            let dist = rank_distribution(&ctx, &code, budget)?;
            let mrd = is_mrd(&ctx, &code, budget)?;
            let equivalence = match equiv_with {
                Some(g) => {
                    let gp = parse_poly(&ctx, g)?;
                    let other = code_from_poly(&ctx, &gp)?;
                    let w =
                        code_equivalent_smallscale(&ctx, &code, &other, *allow_transpose, budget)?;
                    Some(serde_json::json!({
                        "equivalent": w.is_some(),
                        "witness": w,
                    }))
                }
                None => None,
            };
            let mut csv = String::from("r,count\n");
            for (r, c) in dist.counts.iter().enumerate() {
                csv.push_str(&format!("{r},{c}\n"));
            }
            let body = MrdBody {
                n: ctx.n(),
                q: ctx.q(),
                a: dist.counts.clone(),
                mrd,
                matrix_basis: ctx.qn_basis().iter().map(|b| b.0).collect(),
                equivalence,
            };
            emitter.emit(Some(ctx.spec()), None, &body, false, Some(csv))?;
            Ok(false)
        }
        Command::Blocking { field, f, w } => {
            let ctx = field.build()?;
            let fp = parse_poly(&ctx, f)?;
            let u = subspace_of_poly(&ctx, &fp);
            let wv = match w {
                Some(s) => {
                    let v = parse_vector(&ctx, s)?;
                    if v.len() != 3 {
                        return Err(Error::Parse("w needs three coordinates".into()));
                    }
                    [v[0], v[1], v[2]]
                }
                None => [
                    linset_core::field::ZERO,
                    linset_core::field::ZERO,
                    linset_core::field::ONE,
                ],
            };
            let b = redei_blocking_set(&ctx, &u, &wv)?;
            let report = blocking_checks(&ctx, &b, budget)?;
            let body = BlockingBody {
                plane: format!("PG(2,{})", ctx.size()),
                size: report.size,
                is_blocking: report.is_blocking,
                n_secant: report.n_secant,
                redei_lines: report.redei_lines,
            };
            emitter.emit(Some(ctx.spec()), None, &body, false, None)?;
            Ok(false)
        }
        Command::Project {
            field,
            f,
            gamma,
            lambda,
        } => {
            let ctx = field.build()?;
            let cfg = match (f, gamma, lambda) {
                (Some(f), None, None) => {
                    let fp = parse_poly(&ctx, f)?;
                    realize_as_projection(&ctx, &fp)?
                }
                (None, Some(g), Some(l)) => {
                    let gamma: Result<Vec<Vec<FElem>>, Error> =
                        g.split(';').map(|v| parse_vector(&ctx, v)).collect();
                    let lambda: Result<Vec<Vec<FElem>>, Error> =
                        l.split(';').map(|v| parse_vector(&ctx, v)).collect();
                    let lambda = lambda?;
                    if lambda.len() != 2 {
                        return Err(Error::Parse("lambda needs exactly two vectors".into()));
                    }
                    ProjectionConfig {
                        gamma: gamma?,
                        lambda: [lambda[0].clone(), lambda[1].clone()],
                    }
                }
                _ => {
                    return Err(Error::Parse(
                        "give either --f, or both --gamma and --lambda".into(),
                    ))
                }
            };
            let out = project_subgeometry(&ctx, &cfg)?;
            let body = ProjectBody {
                gamma: cfg
                    .gamma
                    .iter()
                    .map(|v| v.iter().map(|c| c.0).collect())
                    .collect(),
                lambda: cfg
                    .lambda
                    .iter()
                    .map(|v| v.iter().map(|c| c.0).collect())
                    .collect(),
                size: out.points.len(),
                profile: out.profile,
            };
            emitter.emit(Some(ctx.spec()), None, &body, false, None)?;
            Ok(false)
        }
        Command::Transversal {
            field,
            f,
            full_sweep,
        } => {
            let ctx = field.build()?;
            let fp = parse_poly(&ctx, f)?;
            let u = subspace_of_poly(&ctx, &fp);
            let count = if *full_sweep {
                transversal_spaces_full_sweep(&ctx, &u, budget)?
            } else {
                transversal_spaces(&ctx, &u, budget)?
            };
            let (zgl, _) = zgl_class(&ctx, &fp, budget)?;
            let mut falsifications = Vec::new();
            if count != zgl {
                falsifications.push(Falsification::new(
                    &ctx,
                    "transversal count disagrees with the coefficient-space classification",
                    &fp,
                    None,
                    format!("count={count} zgl={zgl}"),
                ));
            }
            let falsified = !falsifications.is_empty();
            let body = TransversalBody {
                count,
                zgl_class: zgl,
                agree: count == zgl,
                falsifications,
            };
            emitter.emit(Some(ctx.spec()), None, &body, falsified, None)?;
            Ok(falsified)
        }
        Command::VerifySuite { criteria } => {
            let ids: Vec<u32> = match criteria {
                Some(s) => s
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad criterion id {t:?}")))
                    })
                    .collect::<Result<_, _>>()?,
                None => (1..=11).collect(),
            };
            let mut outcomes = Vec::new();
            for id in ids {
                let out = run_criterion(id)?;
                eprintln!(
                    "criterion {:2} [{}] {}",
                    out.id,
                    if out.passed { "PASS" } else { "FAIL" },
                    out.name
                );
                outcomes.push(out);
            }
            let all_passed = outcomes.iter().all(|o| o.passed);
            let body = SuiteBody {
                criteria: outcomes,
                all_passed,
            };
            emitter.emit(None, Some(SEED), &body, !all_passed, None)?;
            Ok(!all_passed)
        }
    }
}
