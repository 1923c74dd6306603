//! `nc`: command-line front end. Reports are JSON on standard output.
//! Exit codes: 0 success, 1 property violation, 2 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nc_core::algebra::{check_algebra, check_lie, Bimodule, FiniteAlgebra};
use nc_core::calculi::{a_dual, bidual_map, diagonal_test, diagram_check, is_central, omega_diag, omega_u, omega_z, DerCalculus};
use nc_core::complex::{check_gda, verify_operation, GradedDiffAlgebra};
use nc_core::connections::{
    first_order_symbols, flat_classify, random_bimodule, random_first_order, random_non_first_order, SmallAlgebra, Symplectic,
};
use nc_core::hochschild::{basic_cohomology, cyclic_cohomology, hochschild_cohomology, invariant_cohomology};
use nc_core::io;
use nc_core::lie_weil::{ce_complex, weil_basic_cohomology, weil_build, weil_invariant_cohomology, LieModule};
use nc_core::ym::{flow_many, FlowConfig, YmModel};
use nc_core::NcError;

#[derive(Parser, Serialize)]
#[command(name = "nc", version, about = "Exact noncommutative differential calculus on finite-dimensional algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum CohomologyKind {
    Hochschild,
    Cyclic,
    Basic,
    Invariant,
    Ce,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum CalculusKind {
    U,
    Z,
    Diag,
    Der,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum AlgebraChoice {
    M2,
    Dual,
}

impl AlgebraChoice {
    fn small(self) -> SmallAlgebra {
        match self {
            AlgebraChoice::M2 => SmallAlgebra::M2,
            AlgebraChoice::Dual => SmallAlgebra::DualNumbers,
        }
    }
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "verb", rename_all = "kebab-case")]
enum Command {
    /// Axiom checks for an algebra or Lie algebra file.
    Check { file: PathBuf },
    /// Cohomology dimensions of an algebra (or of a Lie algebra for `ce`).
    Cohomology {
        #[arg(long, value_enum)]
        kind: CohomologyKind,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        /// Coefficient bimodule for `hochschild`; the algebra itself by default.
        #[arg(long)]
        module: Option<PathBuf>,
        file: PathBuf,
    },
    /// Dimensions, cohomology and structure checks of a differential calculus.
    Calculus {
        #[arg(long, value_enum)]
        kind: CalculusKind,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Also compare all four calculi through the canonical maps.
        #[arg(long)]
        diagram: bool,
        /// Include the graded differential algebra itself.
        #[arg(long)]
        emit_gda: bool,
        file: PathBuf,
    },
    /// The Weil algebra of a Lie algebra file.
    Weil {
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        file: PathBuf,
    },
    /// The symplectic structure on the derivation calculus of `M_n`.
    Symplectic {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Flat connections on `M_K (x) M_n` up to gauge.
    Flat {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long = "K")]
        #[serde(rename = "K")]
        k: Option<usize>,
        /// Connection file to classify instead of enumerating.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Reject non-antihermitian input.
        #[arg(long)]
        hermitian: bool,
    },
    /// Gradient flow of the matrix Yang-Mills potential from seeded random starts.
    YmFlow {
        #[arg(long = "K")]
        #[serde(rename = "K")]
        k: usize,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol_grad: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol_flat: f64,
        #[arg(long, default_value_t = 20_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 2.5)]
        init_scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A-dual, bidual and diagonality of a bimodule (the algebra itself by default).
    Dual {
        #[arg(long)]
        module: Option<PathBuf>,
        file: PathBuf,
    },
    /// First-order test and symbols of an operator, or a random census.
    Symbols {
        /// Left algebra file; with `--operator` defaults to the right one.
        #[arg(long)]
        left: Option<PathBuf>,
        #[arg(long)]
        right: Option<PathBuf>,
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        operator: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = AlgebraChoice::M2)]
        a: AlgebraChoice,
        #[arg(long, value_enum, default_value_t = AlgebraChoice::Dual)]
        b: AlgebraChoice,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Input(String),
    Property(String),
}

impl From<NcError> for Failure {
    fn from(e: NcError) -> Self {
        if e.is_input() {
            Failure::Input(e.to_string())
        } else {
            Failure::Property(e.to_string())
        }
    }
}

/// A report and whether every property in it holds.
type Outcome = Result<(Value, bool), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn algebra(path: &Path) -> Result<FiniteAlgebra, Failure> {
    Ok(io::load_algebra(&read_json(path)?)?)
}

fn module_or_regular(path: Option<&Path>, a: &FiniteAlgebra) -> Result<Bimodule, Failure> {
    match path {
        Some(p) => Ok(io::load_bimodule(&read_json(p)?, a, a)?),
        None => Ok(Bimodule::regular(a)),
    }
}

fn gda_dump(g: &GradedDiffAlgebra) -> Value {
    let d: Vec<Value> = g
        .differentials()
        .iter()
        .map(|m| {
            let mut rows = Vec::new();
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let x = m.get(i, j);
                    if !x.is_zero() {
                        rows.push(json!([i, j, x.re.to_string(), x.im.to_string()]));
                    }
                }
            }
            Value::Array(rows)
        })
        .collect();
    json!({ "dims": g.dims(), "d": d })
}

fn check(file: &Path) -> Outcome {
    let v = read_json(file)?;
    if v.get("bracket").is_some() {
        let r = check_lie(&io::parse_lie(&v)?);
        return Ok((to_value(&r), r.ok()));
    }
    let r = check_algebra(&io::parse_algebra(&v)?);
    Ok((to_value(&r), r.ok()))
}

fn cohomology(kind: CohomologyKind, max_degree: usize, module: Option<&Path>, file: &Path) -> Outcome {
    if let CohomologyKind::Ce = kind {
        let g = io::load_lie(&read_json(file)?)?;
        let r = ce_complex(&g, &LieModule::trivial(&g), max_degree)?.cohomology()?;
        return Ok((json!({ "dims": r.dims, "truncated": r.truncated }), true));
    }
    let a = algebra(file)?;
    let v = match kind {
        CohomologyKind::Hochschild => {
            let r = hochschild_cohomology(&a, &module_or_regular(module, &a)?, max_degree)?;
            json!({ "dims": r.dims, "normalized_dims": r.normalized_dims, "truncated": r.truncated })
        }
        CohomologyKind::Cyclic => {
            let r = cyclic_cohomology(&a, max_degree)?;
            json!({ "dims": r.dims, "cochain_dims": r.cochain_dims, "truncated": r.truncated })
        }
        CohomologyKind::Basic => to_value(&basic_cohomology(&a, max_degree)?),
        CohomologyKind::Invariant => to_value(&invariant_cohomology(&a, max_degree)?),
        CohomologyKind::Ce => unreachable!("handled above"),
    };
    Ok((v, true))
}

fn calculus(kind: CalculusKind, max_degree: usize, diagram: bool, emit_gda: bool, file: &Path) -> Outcome {
    let a = algebra(file)?;
    let gda = match kind {
        CalculusKind::U => omega_u(&a, max_degree)?.gda().clone(),
        CalculusKind::Z => omega_z(&a, max_degree)?.gda().clone(),
        CalculusKind::Diag => omega_diag(&a, max_degree)?.gda().clone(),
        CalculusKind::Der => DerCalculus::new(&a, max_degree)?.gda().clone(),
    };
    let h = gda.as_complex().cohomology()?;
    let report = check_gda(&gda);
    let mut ok = report.ok();
    let mut v = json!({
        "dims": gda.dims(),
        "cohomology": h.dims,
        "truncated": h.truncated,
        "checks": to_value(&report),
    });
    if diagram {
        let d = diagram_check(&a, max_degree)?;
        ok &= d.ok();
        v["diagram"] = to_value(&d);
    }
    if emit_gda {
        v["gda"] = gda_dump(&gda);
    }
    Ok((v, ok))
}

fn weil(max_degree: usize, file: &Path) -> Outcome {
    let g = io::load_lie(&read_json(file)?)?;
    let (w, op) = weil_build(&g, max_degree)?;
    let gda = check_gda(&w.gda);
    let operation = verify_operation(&w.gda, &op);
    let h = w.gda.as_complex().cohomology()?;
    let invariant = weil_invariant_cohomology(&g, max_degree)?;
    let basic = weil_basic_cohomology(&g, max_degree)?;
    let trivial = |dims: &[usize], truncated: bool| {
        let exact = if truncated { &dims[..dims.len() - 1] } else { dims };
        exact.first() == Some(&1) && exact[1..].iter().all(|&x| x == 0)
    };
    let ok = gda.ok()
        && operation.ok()
        && trivial(&h.dims, h.truncated)
        && trivial(&invariant.dims, invariant.truncated)
        && basic.matches();
    let v = json!({
        "dims": w.gda.dims(),
        "checks": to_value(&gda),
        "operation": to_value(&operation),
        "cohomology": to_value(&h),
        "invariant_cohomology": to_value(&invariant),
        "basic_cohomology": to_value(&basic),
    });
    Ok((v, ok))
}

fn symplectic(n: usize, samples: usize, seed: u64) -> Outcome {
    let s = Symplectic::new(n)?;
    let r = s.report()?;
    let identity = s.poisson_identity_check(samples, seed)?;
    let ok = r.ok() && identity;
    Ok((json!({ "report": to_value(&r), "samples": samples, "poisson_identity": identity }), ok))
}

fn flat(n: usize, k: Option<usize>, input: Option<&Path>, hermitian: bool) -> Outcome {
    let (k, given) = match input {
        Some(p) => {
            let (fk, fnn, a) = io::load_connection(&read_json(p)?)?;
            if fnn != n || k.is_some_and(|k| k != fk) {
                return Err(Failure::Input("connection file disagrees with --n/--K".into()));
            }
            (fk, Some(a))
        }
        None => (k.ok_or_else(|| Failure::Input("--K is required without --input".into()))?, None),
    };
    let r = flat_classify(n, k, given.as_deref(), hermitian)?;
    let ok = if given.is_some() { r.classes.iter().all(|c| c.flat && c.label.is_some()) } else { r.ok() };
    let v = json!({
        "n": r.n,
        "K": r.k,
        "classes": r.classes.len(),
        "representatives": to_value(&r.classes),
        "labels_distinct": r.labels_distinct,
    });
    Ok((v, ok))
}

fn ym_flow(cfg: FlowConfig, seeds: u64, out: Option<&Path>) -> Outcome {
    if cfg.k == 0 {
        return Err(Failure::Input("need K >= 1".into()));
    }
    let model = YmModel::pauli()?;
    let seed_list: Vec<u64> = (0..seeds).collect();
    let census = flow_many(&model, &cfg, &seed_list);
    let v = to_value(&census);
    if let Some(p) = out {
        let text = serde_json::to_string_pretty(&v).expect("json");
        std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    }
    let ok = census.runs.iter().all(|r| !r.converged || r.class_label.is_resolved() || r.saddle);
    Ok((v, ok))
}

fn dual(module: Option<&Path>, file: &Path) -> Outcome {
    let a = algebra(file)?;
    let m = module_or_regular(module, &a)?;
    let d = a_dual(&a, &m);
    let b = bidual_map(&a, &m)?;
    let diagonal = diagonal_test(&a, &m);
    let v = json!({
        "module_dim": m.dim(),
        "a_dual_dim": d.homs.dim(),
        "bidual_dim": b.bidual.homs.dim(),
        "evaluation_rank": b.c.rank(),
        "diagonal": diagonal,
        "central": is_central(&a, &m),
    });
    Ok((v, true))
}

struct SymbolsArgs<'a> {
    left: Option<&'a Path>,
    right: Option<&'a Path>,
    source: Option<&'a Path>,
    target: Option<&'a Path>,
    operator: Option<&'a Path>,
    a: AlgebraChoice,
    b: AlgebraChoice,
    count: usize,
    seed: u64,
}

fn need<'a>(p: Option<&'a Path>, what: &str) -> Result<&'a Path, Failure> {
    p.ok_or_else(|| Failure::Input(format!("--{what} is required")))
}

fn symbols(s: SymbolsArgs<'_>) -> Outcome {
    if let Some(op) = s.operator {
        let right = algebra(s.right.or(s.left).ok_or_else(|| Failure::Input("--right is required".into()))?)?;
        let left = match s.left {
            Some(p) => algebra(p)?,
            None => right.clone(),
        };
        let m = io::load_bimodule(&read_json(need(s.source, "source")?)?, &left, &right)?;
        let n = io::load_bimodule(&read_json(need(s.target, "target")?)?, &left, &right)?;
        let d = io::load_matrix(&read_json(op)?)?;
        let r = first_order_symbols(&left, &right, &m, &n, &d)?;
        let ok = !r.is_first_order || (r.residual_zero && r.sigma_bimodule_maps);
        return Ok((to_value(&r), ok));
    }
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s.seed);
    let (ka, kb) = (s.a.small(), s.b.small());
    let (alg_a, alg_b) = (ka.algebra(), kb.algebra());
    let (mut recovered, mut rejected, mut tried) = (0, 0, 0);
    let mut done = 0;
    while done < s.count {
        let m = random_bimodule(&mut rng, ka, kb)?;
        let n = random_bimodule(&mut rng, ka, kb)?;
        let (Some(good), Some(bad)) = (random_first_order(&mut rng, &m, &n), random_non_first_order(&mut rng, &m, &n)) else {
            continue;
        };
        tried += 1;
        let r = first_order_symbols(&alg_a, &alg_b, &m, &n, &good)?;
        recovered += usize::from(r.is_first_order && r.residual_zero && r.sigma_bimodule_maps);
        rejected += usize::from(!first_order_symbols(&alg_a, &alg_b, &m, &n, &bad)?.is_first_order);
        done += 1;
    }
    let v = json!({ "pairs": tried, "first_order_recovered": recovered, "non_first_order_rejected": rejected });
    Ok((v, recovered == s.count && rejected == s.count))
}

fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Check { file } => check(file),
        Command::Cohomology { kind, max_degree, module, file } => cohomology(*kind, *max_degree, module.as_deref(), file),
        Command::Calculus { kind, max_degree, diagram, emit_gda, file } => calculus(*kind, *max_degree, *diagram, *emit_gda, file),
        Command::Weil { max_degree, file } => weil(*max_degree, file),
        Command::Symplectic { n, samples, seed } => symplectic(*n, *samples, *seed),
        Command::Flat { n, k, input, hermitian } => flat(*n, *k, input.as_deref(), *hermitian),
        Command::YmFlow { k, seeds, tol_grad, tol_flat, max_iter, init_scale, out } => {
            let cfg = FlowConfig { k: *k, max_iter: *max_iter, tol_grad: *tol_grad, tol_flat: *tol_flat, init_scale: *init_scale };
            ym_flow(cfg, *seeds, out.as_deref())
        }
        Command::Dual { module, file } => dual(module.as_deref(), file),
        Command::Symbols { left, right, source, target, operator, a, b, count, seed } => symbols(SymbolsArgs {
            left: left.as_deref(),
            right: right.as_deref(),
            source: source.as_deref(),
            target: target.as_deref(),
            operator: operator.as_deref(),
            a: *a,
            b: *b,
            count: *count,
            seed: *seed,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = to_value(&cli.command);
    let (report, code) = match run(&cli.command) {
        Ok((mut v, ok)) => {
            if let Value::Object(map) = &mut v {
                map.insert("ok".into(), Value::Bool(ok));
                map.insert("config".into(), config);
            }
            (v, if ok { 0 } else { 1 })
        }
        Err(Failure::Property(e)) => (json!({ "config": config, "error": e, "kind": "property" }), 1),
        Err(Failure::Input(e)) => (json!({ "config": config, "error": e, "kind": "input" }), 2),
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    ExitCode::from(code)
}
