use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use shiftvar::enumeration::{
    ball, bound_report_with_points, compute_delta, difference_set, rational_points,
    NeighborhoodReport, PointSet, VarietyInstance, CSV_HEADER_COMMENT, DEFAULT_BUDGET,
};
use shiftvar::families::{self, FamilyKind, FamilySpec};
use shiftvar::hardness::{solve_via_shiftfreeness, EssInstance};
use shiftvar::shift::{full_cylinder_reduction, shift_kernel};
use shiftvar::{parse_poly, Error, MPoly, PrimeField, Result};

const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Verb {
    Kernel,
    Normalize,
    Delta,
    Bounds,
    Family,
    Reduce,
    Sweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

/// Shift-invariance and discrete neighborhoods of varieties over prime fields.
#[derive(Parser, Debug)]
#[command(name = "shiftvar", version)]
struct Cli {
    verb: Verb,
    /// Prime modulus (comma list for sweep).
    #[arg(long, value_delimiter = ',')]
    p: Vec<u64>,
    /// Ambient dimension or degree, depending on the family (comma list for sweep).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Neighborhood radius (comma list for sweep).
    #[arg(long, value_delimiter = ',')]
    h: Vec<u64>,
    /// Polynomial in x1..xn; repeat for systems.
    #[arg(long)]
    poly: Vec<String>,
    /// Variety JSON: {"p", "n", "polys", "metadata"}.
    #[arg(long)]
    polys_file: Option<PathBuf>,
    #[arg(long)]
    kind: Option<String>,
    /// Number of hyperplanes (comma list for sweep).
    #[arg(long, value_delimiter = ',')]
    d: Vec<u32>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    ell: Option<u32>,
    /// Equal subset sum instance, comma separated.
    #[arg(long, value_delimiter = ',')]
    a: Vec<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Samples drawn by the decomposable sampler.
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,
    #[arg(long)]
    out_file: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn single<T: Copy>(v: &[T], flag: &str) -> Result<T> {
    match v {
        [x] => Ok(*x),
        [] => Err(invalid(format!("--{flag} is required"))),
        _ => Err(invalid(format!(
            "--{flag} takes a single value for this verb"
        ))),
    }
}

fn opt_single<T: Copy>(v: &[T], flag: &str, default: T) -> Result<T> {
    if v.is_empty() {
        Ok(default)
    } else {
        single(v, flag)
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| invalid(format!("--{flag} is required")))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

/// The variety from `--polys-file` or `--p/--n/--poly`, plus an optional
/// declared shift-freeness flag.
fn load_variety(cli: &Cli) -> Result<(VarietyInstance, Option<bool>)> {
    if let Some(path) = &cli.polys_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        let v = VarietyInstance::from_json(&text)?;
        let raw: Value = serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
        return Ok((v, raw.get("shiftFree").and_then(Value::as_bool)));
    }
    let field = PrimeField::new(single(&cli.p, "p")?)?;
    let n = single(&cli.n, "n")?;
    if cli.poly.is_empty() {
        return Err(invalid("--poly or --polys-file is required"));
    }
    let polys = cli
        .poly
        .iter()
        .map(|s| parse_poly(s, n, field))
        .collect::<Result<Vec<_>>>()?;
    Ok((VarietyInstance::new(field, n, polys, None)?, None))
}

fn single_poly(cli: &Cli) -> Result<MPoly> {
    let field = PrimeField::new(single(&cli.p, "p")?)?;
    let n = single(&cli.n, "n")?;
    let [text] = cli.poly.as_slice() else {
        return Err(invalid("exactly one --poly is required"));
    };
    parse_poly(text, n, field)
}

/// No nonzero `w ∈ U − U` fixes the single defining polynomial.
fn shift_free_against(v: &VarietyInstance, u: &PointSet) -> Result<bool> {
    let [f] = v.polys.as_slice() else {
        return Ok(false);
    };
    if f.is_zero() || f.degree().is_some_and(|d| d as u64 >= v.field.modulus()) {
        return Ok(false);
    }
    let kernel = shift_kernel(f)?;
    Ok(difference_set(u)
        .iter()
        .all(|w| w.iter().all(|&c| c == 0) || !kernel.contains(w)))
}

fn kernel_cmd(cli: &Cli) -> Result<String> {
    let f = single_poly(cli)?;
    let k = shift_kernel(&f)?;
    Ok(match cli.out {
        OutFormat::Json => pretty(&json!({
            "p": f.field().modulus(), "n": f.nvars(), "poly": f.to_text(),
            "dim": k.dim(), "basis": k.balanced_basis(),
        })),
        OutFormat::Csv => format!(
            "p,n,poly,dim\n{},{},\"{}\",{}\n",
            f.field().modulus(),
            f.nvars(),
            f,
            k.dim()
        ),
    })
}

fn normalize_cmd(cli: &Cli) -> Result<String> {
    let f = single_poly(cli)?;
    let form = full_cylinder_reduction(&f)?;
    let s = form.summary();
    Ok(match cli.out {
        OutFormat::Json => {
            let mut v = serde_json::to_value(&s).expect("json");
            v["poly"] = json!(f.to_text());
            pretty(&v)
        }
        OutFormat::Csv => format!(
            "poly,m,reduced\n\"{}\",{},\"{}\"\n",
            f, form.m, form.reduced
        ),
    })
}

fn delta_cmd(cli: &Cli) -> Result<String> {
    let (v, _) = load_variety(cli)?;
    let h = opt_single(&cli.h, "h", 1)?;
    let u = ball(h, v.n, v.field)?;
    let x = rational_points(&v, cli.budget)?;
    let c = compute_delta(&x, &u)?;
    let p = v.field.modulus();
    Ok(match cli.out {
        OutFormat::Json => pretty(&json!({
            "p": p, "n": v.n, "h": h, "countX": c.count_x, "countU": c.count_u,
            "countSumset": c.count_sumset, "delta": c.delta,
        })),
        OutFormat::Csv => format!(
            "p,n,h,countX,countU,countSumset,delta\n{p},{},{h},{},{},{},{}\n",
            v.n, c.count_x, c.count_u, c.count_sumset, c.delta
        ),
    })
}

fn report_for(
    v: &VarietyInstance,
    h: u64,
    declared: Option<bool>,
    budget: u64,
) -> Result<NeighborhoodReport> {
    v.metadata()?;
    let u = ball(h, v.n, v.field)?;
    let shift_free = match declared {
        Some(b) => b,
        None => shift_free_against(v, &u)?,
    };
    let x = rational_points(v, budget)?;
    bound_report_with_points(v, &x, &u, shift_free)
}

fn render_reports(reports: &[NeighborhoodReport], extra: Option<Value>, out: OutFormat) -> String {
    match out {
        OutFormat::Json => {
            let mut v = json!(reports[0]);
            if let (Some(Value::Object(extra)), Value::Object(obj)) = (extra, &mut v) {
                obj.extend(extra);
            }
            pretty(&v)
        }
        OutFormat::Csv => {
            let mut s = format!(
                "{CSV_HEADER_COMMENT}\n{}\n",
                NeighborhoodReport::csv_header()
            );
            for r in reports {
                writeln!(s, "{}", r.csv_row()).expect("string write");
            }
            s
        }
    }
}

fn bounds_cmd(cli: &Cli) -> Result<String> {
    let (v, declared) = load_variety(cli)?;
    let h = opt_single(&cli.h, "h", 1)?;
    let mut r = report_for(&v, h, declared, cli.budget)?;
    r.family = "custom".into();
    Ok(render_reports(&[r], None, cli.out))
}

fn parse_kind(s: &str) -> Result<FamilyKind> {
    Ok(match s.replace('-', "_").as_str() {
        "parallel_hyperplanes" | "hyperplanes" => FamilyKind::ParallelHyperplanes,
        "graph" => FamilyKind::Graph,
        "determinantal" => FamilyKind::Determinantal,
        "discriminant" => FamilyKind::Discriminant,
        "resultant" => FamilyKind::Resultant,
        "decomposable_sample" | "decomposable" => FamilyKind::DecomposableSample,
        "ess_linear_form" => FamilyKind::EssLinearForm,
        other => return Err(invalid(format!("unknown family kind {other:?}"))),
    })
}

/// Builds a family from scalar parameters.
fn build_family(
    cli: &Cli,
    kind: FamilyKind,
    p: u64,
    n: Option<usize>,
    d: Option<u32>,
) -> Result<FamilySpec> {
    let field = PrimeField::new(p)?;
    match kind {
        FamilyKind::ParallelHyperplanes => {
            families::parallel_hyperplanes(need(d, "d")?, n.unwrap_or(2), field)
        }
        FamilyKind::Graph => {
            let n = need(n, "n")?;
            if n < 2 {
                return Err(invalid("graph varieties need n >= 2"));
            }
            let [g] = cli.poly.as_slice() else {
                return Err(invalid("graph needs exactly one --poly g in x1..x(n-1)"));
            };
            families::graph_variety(&parse_poly(g, n - 1, field)?)
        }
        FamilyKind::Determinantal => families::determinantal_minors(
            need(cli.m, "m")?,
            need(n, "n")?,
            need(cli.s, "s")?,
            field,
        ),
        FamilyKind::Discriminant => families::generic_discriminant(need(n, "n")?, field),
        FamilyKind::Resultant => {
            families::generic_resultant(need(n, "n")?, need(cli.m, "m")?, field)
        }
        FamilyKind::EssLinearForm => families::ess_linear_form(&cli.a, field),
        FamilyKind::DecomposableSample => Err(invalid(
            "the decomposable sampler has no variety to report on",
        )),
    }
}

fn family_label(spec: &FamilySpec) -> String {
    let mut params: Vec<String> = spec
        .parameters
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    if let Some(Value::String(g)) = spec.predictions.get("g") {
        params.push(format!("g={}", g.replace(' ', "")));
    }
    format!("{}:{}", spec.kind.name(), params.join(";"))
}

/// Compares every numeric prediction that has a measured counterpart.
fn prediction_match(spec: &FamilySpec, r: &NeighborhoodReport) -> Value {
    if spec.predictions.get("valid") == Some(&json!(false)) {
        return Value::Null;
    }
    let measured = [
        ("countX", r.count_x),
        ("countSumset", r.count_sumset),
        ("delta", r.delta),
    ];
    let mut any = false;
    let mut ok = true;
    for (key, got) in measured {
        if let Some(want) = spec.predictions.get(key).and_then(Value::as_u64) {
            any = true;
            ok &= want == got;
        }
    }
    if any {
        json!(ok)
    } else {
        Value::Null
    }
}

fn decomposable_cmd(cli: &Cli, p: u64) -> Result<String> {
    let field = PrimeField::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let pts = families::decomposable_sample(
        need(cli.ell, "ell")?,
        need(cli.m, "m")? as u32,
        field,
        cli.count,
        &mut rng,
    )?;
    Ok(match cli.out {
        OutFormat::Json => {
            pretty(&json!({"p": p, "ell": cli.ell, "m": cli.m, "points": pts.balanced()}))
        }
        OutFormat::Csv => {
            let mut s = String::new();
            for row in pts.balanced() {
                let cells: Vec<String> = row.iter().map(i64::to_string).collect();
                writeln!(s, "{}", cells.join(",")).expect("string write");
            }
            s
        }
    })
}

fn family_cmd(cli: &Cli) -> Result<String> {
    let kind = parse_kind(
        cli.kind
            .as_deref()
            .ok_or_else(|| invalid("--kind is required"))?,
    )?;
    let p = single(&cli.p, "p")?;
    if kind == FamilyKind::DecomposableSample {
        return decomposable_cmd(cli, p);
    }
    let n = if cli.n.is_empty() {
        None
    } else {
        Some(single(&cli.n, "n")?)
    };
    let d = if cli.d.is_empty() {
        None
    } else {
        Some(single(&cli.d, "d")?)
    };
    let h = opt_single(&cli.h, "h", 1)?;
    let mut spec = build_family(cli, kind, p, n, d)?;
    spec.predict_for_radius(h);
    let mut r = report_for(&spec.instance, h, Some(spec.shift_free), cli.budget)?;
    r.family = family_label(&spec);
    let extra =
        json!({"spec": spec.to_json_value(), "predictionMatch": prediction_match(&spec, &r)});
    Ok(render_reports(&[r], Some(extra), cli.out))
}

fn reduce_cmd(cli: &Cli) -> Result<String> {
    if cli.a.is_empty() {
        return Err(invalid("--a is required"));
    }
    let inst = EssInstance::new(cli.a.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let r = solve_via_shiftfreeness(&inst, Some(&mut rng), cli.budget)?;
    Ok(match cli.out {
        OutFormat::Json => pretty(&json!(r)),
        OutFormat::Csv => {
            let list = |v: &Option<Vec<String>>| v.as_ref().map_or(String::new(), |v| v.join(" "));
            let u = r.u.as_ref().map(|u| u.iter().map(i64::to_string).collect());
            let s =
                r.s.as_ref()
                    .map(|s| s.iter().map(usize::to_string).collect());
            let t =
                r.t.as_ref()
                    .map(|t| t.iter().map(usize::to_string).collect());
            format!(
                "p,f,u,S,T\n{},\"{}\",{},{},{}\n",
                r.p,
                r.f,
                list(&u),
                list(&s),
                list(&t)
            )
        }
    })
}

fn sweep_cmd(cli: &Cli) -> Result<String> {
    let kind = parse_kind(
        cli.kind
            .as_deref()
            .ok_or_else(|| invalid("--kind is required"))?,
    )?;
    if cli.p.is_empty() {
        return Err(invalid("--p is required"));
    }
    let hs = if cli.h.is_empty() {
        vec![1]
    } else {
        cli.h.clone()
    };
    let ns: Vec<Option<usize>> = if cli.n.is_empty() {
        vec![None]
    } else {
        cli.n.iter().copied().map(Some).collect()
    };
    let ds: Vec<Option<u32>> = if cli.d.is_empty() {
        vec![None]
    } else {
        cli.d.iter().copied().map(Some).collect()
    };
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for &p in &cli.p {
        for &n in &ns {
            for &d in &ds {
                for &h in &hs {
                    let cell = build_family(cli, kind, p, n, d).and_then(|spec| {
                        let mut r =
                            report_for(&spec.instance, h, Some(spec.shift_free), cli.budget)?;
                        r.family = family_label(&spec);
                        Ok(r)
                    });
                    match cell {
                        Ok(r) => reports.push(r),
                        Err(e) if e.is_budget() => return Err(e),
                        Err(e) => skipped.push(format!("p={p} n={n:?} d={d:?} h={h}: {e}")),
                    }
                }
            }
        }
    }
    if cli.out == OutFormat::Json {
        return Ok(pretty(&json!({"reports": reports, "skipped": skipped})));
    }
    let mut out = render_reports(&reports, None, cli.out);
    for s in skipped {
        writeln!(out, "# skipped {s}").expect("string write");
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<String> {
    match cli.verb {
        Verb::Kernel => kernel_cmd(cli),
        Verb::Normalize => normalize_cmd(cli),
        Verb::Delta => delta_cmd(cli),
        Verb::Bounds => bounds_cmd(cli),
        Verb::Family => family_cmd(cli),
        Verb::Reduce => reduce_cmd(cli),
        Verb::Sweep => sweep_cmd(cli),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.out_file {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!(
                        "{{\"error\": \"Io\", \"message\": {}}}",
                        json!(e.to_string())
                    );
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json!({"error": e.code(), "message": e.to_string()}));
            ExitCode::from(if e.is_budget() { 2 } else { 1 })
        }
    }
}
