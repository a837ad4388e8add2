mod space;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use reeb_forge::catalog::{make_bouquet, product, BouquetDesc, ManifoldDesc};
use reeb_forge::engine::{infer_source_homology, run_script, BubblingScript, ReebProfile};
use reeb_forge::oracle::{validate_bouquet, validate_catalog_entry, CatalogCheck};
use reeb_forge::planner::{
    check_torsion_gap, plan_bundle_bubbling, plan_euler_target, plan_finite_torsion_products,
    plan_free_realization, plan_torsion_free_wedge, single_op_feasibility,
    verify_necessary_conditions, Direction, FindingStatus, PlanReport, TargetSpec,
};
use reeb_forge::{FGModule, GradedModule, ManifoldSpec, Ring};
use serde::Serialize;

use space::parse_space;

/// Reeb-space homology under bubbling operations.
#[derive(Parser, Debug)]
#[command(name = "reeb-forge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the JSON result here.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Free target via spheres and points, one normal op each.
    PlanFree {
        #[arg(long)]
        ambient: usize,
        /// Ranks g_0,...,g_n.
        #[arg(long, value_delimiter = ',', required = true)]
        ranks: Vec<usize>,
        /// Coefficient ring the target is read over (Z, Q, F{p}).
        #[arg(long, default_value = "Z")]
        ring: Ring,
        #[command(flatten)]
        out: Output,
    },
    /// Script reaching a prescribed Euler characteristic.
    PlanEuler {
        #[arg(long)]
        ambient: usize,
        #[arg(long, allow_hyphen_values = true)]
        target: i64,
        #[command(flatten)]
        out: Output,
    },
    /// Free target via bouquets of spheres.
    PlanWedge {
        #[arg(long)]
        ambient: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        ranks: Vec<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Finite torsion via products of 3-manifolds and spheres.
    PlanTorsion {
        #[arg(long)]
        ambient: usize,
        /// g_0,...,g_{n-7}, each >= -1.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        gs: Vec<i64>,
        /// Finite groups separated by ';', e.g. "Z/3;Z/2+Z/4;0".
        #[arg(long)]
        groups: String,
        #[command(flatten)]
        out: Output,
    },
    /// One normal op along a sphere-bundle total space.
    PlanBundle {
        #[arg(long)]
        ambient: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        /// Base manifold, JSON or compact form.
        #[arg(long)]
        base: String,
        #[command(flatten)]
        out: Output,
    },
    /// Run a script, the script of a plan report, or re-read a profile.
    Apply {
        script: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check a profile against necessary conditions.
    Verify {
        profile: PathBuf,
        /// Structural conditions on H_0, H_n, the lowest degree and H_{n-1} (default).
        #[arg(long, conflicts_with_all = ["torsion_gap", "single_op"])]
        structure: bool,
        /// Torsion-gap condition instead; needs --i0.
        #[arg(long, requires = "i0")]
        torsion_gap: bool,
        /// Duality test for realizing the profile with one normal op.
        #[arg(long, conflicts_with = "torsion_gap")]
        single_op: bool,
        #[arg(long)]
        i0: Option<usize>,
        #[arg(long, default_value = "below")]
        direction: Direction,
        #[command(flatten)]
        out: Output,
    },
    /// Torsion-gap condition with witnesses.
    TorsionGap {
        profile: PathBuf,
        #[arg(long)]
        i0: usize,
        #[arg(long, default_value = "below")]
        direction: Direction,
        #[command(flatten)]
        out: Output,
    },
    /// List the built-in catalog grid.
    Catalog {
        /// Cross-check each entry against the cellular oracle.
        #[arg(long)]
        validate: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Compare closed-form and cellular homology for one space.
    OracleCheck {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        out: Output,
    },
    /// Source-manifold homology in the low degrees.
    InferSource {
        profile: PathBuf,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: Output,
    },
}

enum Failure {
    /// Preconditions of a construction fail, or a check came out negative.
    Negative(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<reeb_forge::Error> for Failure {
    fn from(e: reeb_forge::Error) -> Self {
        if e.is_infeasible() {
            Failure::Negative(e.to_string())
        } else {
            Failure::Input(e.into())
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn write_json<T: Serialize>(out: &Output, value: &T) -> anyhow::Result<()> {
    if let Some(path) = &out.output {
        let text = serde_json::to_string_pretty(value)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn read_json(path: &Path) -> anyhow::Result<serde_json::Value> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Script from a script file or a plan report.
fn load_script(path: &Path) -> anyhow::Result<BubblingScript> {
    let mut value = read_json(path)?;
    if let Some(script) = value.get_mut("script") {
        value = script.take();
    }
    serde_json::from_value(value).with_context(|| format!("{} is not a script", path.display()))
}

/// Profile from a profile file, a script or a plan report.
fn load_profile(path: &Path) -> anyhow::Result<ReebProfile> {
    let value = read_json(path)?;
    if value.get("homology").is_some() {
        return serde_json::from_value(value)
            .with_context(|| format!("{} is not a profile", path.display()));
    }
    Ok(run_script(&load_script(path)?)?)
}

fn torsion_text(m: &FGModule) -> String {
    if m.torsion().is_empty() {
        "-".into()
    } else {
        m.torsion()
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn homology_table(h: &GradedModule) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>6}  {:>4}  torsion", "degree", "rank");
    for (i, m) in h.degrees().iter().enumerate() {
        let _ = writeln!(s, "{i:>6}  {:>4}  {}", m.rank(), torsion_text(m));
    }
    let _ = writeln!(s, "χ = {}", h.euler_characteristic());
    s
}

fn print_plan(report: &PlanReport) {
    println!(
        "script: {} ops in R^{}",
        report.script.ops.len(),
        report.script.ambient
    );
    for (i, op) in report.script.ops.iter().enumerate() {
        let flag = if op.assume_embedded {
            "  (embedding assumed)"
        } else {
            ""
        };
        println!("  {i:>3}  {}{flag}", op.label());
    }
    print!("{}", homology_table(&report.achieved));
    println!("target met: {}", report.target_met);
    for note in &report.notes {
        println!("note: {note}");
    }
}

fn finish_plan(report: PlanReport, out: &Output) -> Outcome {
    print_plan(&report);
    write_json(out, &report)?;
    if report.target_met {
        Ok(())
    } else {
        Err(Failure::Negative("plan does not meet its target".into()))
    }
}

fn parse_groups(text: &str) -> anyhow::Result<Vec<FGModule>> {
    text.split(';')
        .map(|g| {
            g.trim()
                .parse::<FGModule>()
                .map_err(|e| anyhow!("group {g:?}: {e}"))
        })
        .collect()
}

fn bouquet_or_manifold(spec: &ManifoldSpec) -> anyhow::Result<Either> {
    Ok(match spec {
        ManifoldSpec::Bouquet { .. } => Either::Bouquet(BouquetDesc::from_spec(spec)?),
        other => Either::Manifold(ManifoldDesc::from_spec(other)?),
    })
}

enum Either {
    Manifold(ManifoldDesc),
    Bouquet(BouquetDesc),
}

#[derive(Serialize)]
struct OracleRow {
    label: String,
    status: &'static str,
    formula: Option<GradedModule>,
    oracle: Option<GradedModule>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    mismatched_degrees: Vec<usize>,
}

fn oracle_row(label: String, check: CatalogCheck) -> OracleRow {
    match check {
        CatalogCheck::Pass { formula, oracle } => OracleRow {
            label,
            status: "pass",
            formula: Some(formula),
            oracle: Some(oracle),
            mismatched_degrees: Vec::new(),
        },
        CatalogCheck::Fail {
            formula,
            oracle,
            mismatched_degrees,
        } => OracleRow {
            label,
            status: "fail",
            formula: Some(formula),
            oracle: Some(oracle),
            mismatched_degrees,
        },
        CatalogCheck::NotOracleExpressible => OracleRow {
            label,
            status: "no cell model",
            formula: None,
            oracle: None,
            mismatched_degrees: Vec::new(),
        },
    }
}

fn catalog_grid() -> Vec<Either> {
    let mut singles = vec![ManifoldDesc::point()];
    singles.extend((1..=6).filter_map(|k| ManifoldDesc::sphere(k).ok()));
    singles.extend((0..=4).map(ManifoldDesc::surface));
    for p in 2..=7 {
        for q in 1..p {
            if let Ok(l) = ManifoldDesc::lens(p, q) {
                singles.push(l);
            }
        }
    }
    let mut grid: Vec<Either> = singles.iter().cloned().map(Either::Manifold).collect();
    for (i, a) in singles.iter().enumerate() {
        for b in &singles[i..] {
            if !a.is_point() && !b.is_point() && a.dim() + b.dim() <= 6 {
                grid.push(Either::Manifold(product(a, b)));
            }
        }
    }
    for dims in [vec![1, 1], vec![1, 2], vec![2, 2, 3], vec![1, 2, 3, 4]] {
        let parts: Vec<_> = dims
            .iter()
            .filter_map(|&k| ManifoldDesc::sphere(k).ok())
            .collect();
        if let Ok(b) = make_bouquet(&parts) {
            grid.push(Either::Bouquet(b));
        }
    }
    grid
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::PlanFree {
            ambient,
            ranks,
            ring,
            out,
        } => {
            let t = TargetSpec::new(ambient, ranks)?;
            finish_plan(plan_free_realization(&t, ring)?, &out)
        }
        Command::PlanEuler {
            ambient,
            target,
            out,
        } => finish_plan(plan_euler_target(ambient, target)?, &out),
        Command::PlanWedge {
            ambient,
            ranks,
            out,
        } => {
            let t = TargetSpec::new(ambient, ranks)?;
            finish_plan(plan_torsion_free_wedge(&t)?, &out)
        }
        Command::PlanTorsion {
            ambient,
            gs,
            groups,
            out,
        } => {
            let groups = parse_groups(&groups)?;
            finish_plan(plan_finite_torsion_products(ambient, &gs, &groups)?, &out)
        }
        Command::PlanBundle {
            ambient,
            k,
            l,
            base,
            out,
        } => {
            let s = ManifoldDesc::from_spec(&parse_space(&base)?)?;
            finish_plan(plan_bundle_bubbling(ambient, k, l, &s)?, &out)
        }
        Command::Apply { script, out } => {
            let p = load_profile(&script)?;
            println!(
                "history: {} ops in R^{}",
                p.history().ops.len(),
                p.ambient()
            );
            print!("{}", homology_table(p.homology()));
            write_json(&out, &p)?;
            Ok(())
        }
        Command::Verify {
            profile,
            torsion_gap,
            single_op,
            i0,
            direction,
            out,
            ..
        } => {
            let p = load_profile(&profile)?;
            if torsion_gap {
                let i0 = i0.ok_or_else(|| anyhow!("--torsion-gap needs --i0"))?;
                return gap(&p, i0, direction, &out);
            }
            if single_op {
                let r = single_op_feasibility(p.ambient(), p.homology())?;
                for v in &r.verdicts {
                    match (&v.required, &v.reason) {
                        (Some(h), None) => println!("dim {:>2}: feasible, S would have {h}", v.dim),
                        (_, Some(why)) => println!("dim {:>2}: ruled out, {why}", v.dim),
                        (None, None) => {}
                    }
                }
                write_json(&out, &r)?;
                return if r.feasible_dims().is_empty() {
                    Err(Failure::Negative("no generating dimension passes".into()))
                } else {
                    Ok(())
                };
            }
            let r = verify_necessary_conditions(&p);
            for f in &r.findings {
                let tag = match f.status {
                    FindingStatus::Pass => "pass",
                    FindingStatus::Fail => "FAIL",
                    FindingStatus::NotApplicable => "n/a ",
                };
                println!("{tag}  {}  ({})", f.condition, f.detail);
            }
            write_json(&out, &r)?;
            if r.all_passed() {
                Ok(())
            } else {
                Err(Failure::Negative("necessary conditions violated".into()))
            }
        }
        Command::TorsionGap {
            profile,
            i0,
            direction,
            out,
        } => gap(&load_profile(&profile)?, i0, direction, &out),
        Command::Catalog { validate, out } => {
            let mut rows = Vec::new();
            let mut failed = 0;
            println!(
                "{:<28} {:>3} {:>5} {:>4}  homology",
                "label", "dim", "embed", "χ"
            );
            for entry in catalog_grid() {
                let (label, dim, embed, h, check) = match &entry {
                    Either::Manifold(m) => (
                        m.label().to_string(),
                        m.dim(),
                        m.embed_dim().to_string(),
                        m.homology().clone(),
                        validate.then(|| validate_catalog_entry(m)),
                    ),
                    Either::Bouquet(b) => (
                        b.label(),
                        b.dim(),
                        "-".to_string(),
                        b.homology().clone(),
                        validate.then(|| validate_bouquet(b)),
                    ),
                };
                let mut line = format!(
                    "{label:<28} {dim:>3} {embed:>5} {:>4}  {h}",
                    h.euler_characteristic()
                );
                if let Some(check) = check {
                    let row = oracle_row(label, check?);
                    if row.status == "fail" {
                        failed += 1;
                    }
                    line.push_str(&format!("  [{}]", row.status));
                    rows.push(row);
                }
                println!("{line}");
            }
            write_json(&out, &rows)?;
            if failed > 0 {
                return Err(Failure::Negative(format!(
                    "{failed} entries disagree with the oracle"
                )));
            }
            Ok(())
        }
        Command::OracleCheck { space, out } => {
            let spec = parse_space(&space)?;
            let (label, check) = match bouquet_or_manifold(&spec)? {
                Either::Manifold(m) => (m.label().to_string(), validate_catalog_entry(&m)?),
                Either::Bouquet(b) => (b.label(), validate_bouquet(&b)?),
            };
            let row = oracle_row(label, check);
            write_json(&out, &row)?;
            println!("{}: {}", row.label, row.status);
            if let (Some(f), Some(o)) = (&row.formula, &row.oracle) {
                println!("formula {f}");
                println!("oracle  {o}");
            }
            match row.status {
                "pass" => Ok(()),
                "fail" => Err(Failure::Negative(format!(
                    "mismatch in degrees {:?}",
                    row.mismatched_degrees
                ))),
                _ => Err(Failure::Input(anyhow!(
                    "{} has no cellular model",
                    row.label
                ))),
            }
        }
        Command::InferSource { profile, m, out } => {
            let p = load_profile(&profile)?;
            let s = infer_source_homology(&p, m)?;
            for (j, h) in s.degrees.iter().enumerate() {
                println!("H_{j}(M) = {h}");
            }
            for a in &s.assumptions {
                println!("assuming {a}");
            }
            write_json(&out, &s)?;
            Ok(())
        }
    }
}

fn gap(p: &ReebProfile, i0: usize, direction: Direction, out: &Output) -> Outcome {
    let r = check_torsion_gap(p, i0, direction)?;
    for w in &r.witnesses {
        match w.offset {
            Some(a) => println!("H_{} finite, rank in degree offset {a}", w.degree),
            None => println!("H_{} finite, no free degree within {i0}", w.degree),
        }
    }
    println!("longest finite run: {}", r.longest_run);
    println!("holds: {}", r.holds);
    write_json(out, &r)?;
    if r.holds {
        Ok(())
    } else {
        Err(Failure::Negative("torsion-gap condition fails".into()))
    }
}
