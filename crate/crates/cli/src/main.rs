mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use buildings_core::exact::{NamedAngle, Rational};
use buildings_core::rootsys::DEFAULT_ORBIT_CAP;
use buildings_core::titsdiagram::{
    catalog, classify_applicability_with_cap, long_root_vertex_check, lookup, relative_rank,
    DiagramError, DiagramJson, TitsDiagram, MINIMAL_ANGLE_DEFINITION,
};
use buildings_core::treefold::{
    fold_quotient, gen_config1, gen_config2, gen_config3, gen_random, gen_tripod, random_template,
    retraction_invariance_check, validate, verify_tree_axioms, Instance, InstanceJson,
    QuotientTree, QuotientTreeJson, TreeFoldError,
};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use report::{approx, write_atomic, CliError, Exit};

#[derive(Parser)]
#[command(
    name = "buildings",
    version,
    about = "Tits-diagram angles and tree folding with exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal angle, relative rank and verdict for a Tits diagram.
    Classify {
        #[arg(
            long,
            conflicts_with = "catalog_id",
            required_unless_present = "catalog_id"
        )]
        diagram: Option<PathBuf>,
        #[arg(long)]
        catalog_id: Option<String>,
    },
    /// List the built-in diagrams with their verdicts.
    Catalog,
    /// Write a corner table built from a template.
    Gen {
        #[arg(long, value_enum)]
        template: Template,
        /// Comma-separated `key=value` pairs; values are integers or `p/q`.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fold a corner table into its quotient tree.
    Fold {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Validate, fold and check the tree axioms and retractions.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        /// Check this stored tree instead of folding the instance.
        #[arg(long)]
        tree: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Template {
    Tripod,
    Config1,
    Config2,
    Config3,
    Random,
}

fn orbit_cap() -> Result<usize, CliError> {
    match std::env::var("BUILDINGS_ORBIT_CAP") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("BUILDINGS_ORBIT_CAP is not a count: {s:?}"))),
        Err(_) => Ok(DEFAULT_ORBIT_CAP),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let j: InstanceJson = read_json(path)?;
    Instance::from_json(&j).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn diagram_error(e: DiagramError) -> CliError {
    CliError::input(e.to_string())
}

fn angle_name(named: Option<NamedAngle>) -> Value {
    named.map_or(Value::Null, |a| json!(a.label()))
}

fn classify_one(d: &TitsDiagram, cap: usize) -> Result<Value, CliError> {
    let app = classify_applicability_with_cap(d, cap).map_err(diagram_error)?;
    let long_root = match long_root_vertex_check(d) {
        Ok(b) => json!(b),
        Err(DiagramError::NotRankOne(_)) => Value::Null,
        Err(e) => return Err(diagram_error(e)),
    };
    let a = &app.angle;
    Ok(json!({
        "diagram": DiagramJson::from(d),
        "realization": format!("{:?}", d.realization()).to_lowercase(),
        "relative_rank": relative_rank(d),
        "minimal_angle": {
            "cos_sign": a.min_cos.sign,
            "cos_squared": a.min_cos.cos_squared,
            "named": angle_name(a.named),
            "radians_approx": approx(a.min_cos.approx_radians()),
            "witness_node": a.witness_node + 1,
            "witness_pair": [a.witness_pair.0, a.witness_pair.1],
            "residue_nodes": a.residue_nodes.iter().map(|n| n + 1).collect::<Vec<_>>(),
            "orbit_size": a.orbit_size,
        },
        "long_root_vertex_check": long_root,
        "verdict": format!("{:?}", app.verdict),
        "definition": MINIMAL_ANGLE_DEFINITION,
    }))
}

fn cmd_classify(diagram: Option<PathBuf>, catalog_id: Option<String>) -> Result<Exit, CliError> {
    let cap = orbit_cap()?;
    let (d, input) = match (diagram, catalog_id) {
        (Some(path), _) => {
            let j: DiagramJson = read_json(&path)?;
            (
                TitsDiagram::try_from(j).map_err(diagram_error)?,
                json!({ "diagram": path }),
            )
        }
        (None, Some(id)) => (
            lookup(&id).map_err(diagram_error)?.diagram,
            json!({ "catalog_id": id }),
        ),
        (None, None) => return Err(CliError::input("give --diagram or --catalog-id")),
    };
    let result = classify_one(&d, cap)?;
    Ok(Exit::ok(
        json!({ "command": "classify", "inputs": input, "orbit_cap": cap, "result": result }),
    ))
}

fn cmd_catalog() -> Result<Exit, CliError> {
    let cap = orbit_cap()?;
    let mut entries = Vec::new();
    for e in catalog() {
        let mut v = classify_one(&e.diagram, cap)?;
        v["id"] = json!(e.id);
        v["group"] = json!(format!("{:?}", e.group));
        entries.push(v);
    }
    Ok(Exit::ok(
        json!({ "command": "catalog", "orbit_cap": cap, "entries": entries }),
    ))
}

fn parse_params(s: &str) -> Result<Vec<(String, String)>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| CliError::input(format!("parameter {p:?} is not key=value")))
        })
        .collect()
}

struct Params(Vec<(String, String)>);

impl Params {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn rational(&self, key: &str) -> Result<Rational, CliError> {
        let v = self
            .raw(key)
            .ok_or_else(|| CliError::input(format!("missing parameter {key}")))?;
        v.parse()
            .map_err(|_| CliError::input(format!("parameter {key}={v} is not a rational")))
    }

    fn only(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.0.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            Some((k, _)) => Err(CliError::input(format!(
                "unknown parameter {k}; expected {}",
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }
}

fn template_error(e: TreeFoldError) -> CliError {
    CliError::input(e.to_string())
}

fn cmd_gen(template: Template, params: &str, seed: u64, out: &Path) -> Result<Exit, CliError> {
    let p = Params(parse_params(params)?);
    let drawn = p.0.is_empty();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (name, inst) = match template {
        Template::Tripod => {
            p.only(&["l"])?;
            (
                "tripod",
                gen_tripod(p.rational("l")?).map_err(template_error)?,
            )
        }
        Template::Config1 if drawn => (
            "config1",
            random_template(&mut rng, 0).map_err(template_error)?,
        ),
        Template::Config1 => {
            p.only(&["a1", "ls", "a2", "lr"])?;
            let inst = gen_config1(
                p.rational("a1")?,
                p.rational("ls")?,
                p.rational("a2")?,
                p.rational("lr")?,
            );
            ("config1", inst.map_err(template_error)?)
        }
        Template::Config2 if drawn => (
            "config2",
            random_template(&mut rng, 1).map_err(template_error)?,
        ),
        Template::Config2 => {
            p.only(&["u", "lbig"])?;
            (
                "config2",
                gen_config2(p.rational("u")?, p.rational("lbig")?).map_err(template_error)?,
            )
        }
        Template::Config3 if drawn => (
            "config3",
            random_template(&mut rng, 2).map_err(template_error)?,
        ),
        Template::Config3 => {
            p.only(&["lbig", "ls", "a"])?;
            let inst = gen_config3(p.rational("lbig")?, p.rational("ls")?, p.rational("a")?);
            ("config3", inst.map_err(template_error)?)
        }
        Template::Random => {
            p.only(&["n"])?;
            let n = match p.raw("n") {
                Some(v) => v
                    .parse()
                    .map_err(|_| CliError::input(format!("n={v} is not a count")))?,
                None => 4,
            };
            ("random", gen_random(seed, n).map_err(template_error)?)
        }
    };
    let report = validate(&inst);
    let inputs = json!({ "template": name, "params": params, "seed": seed });
    if let Some(e) = report.primary_error() {
        return Err(CliError::validation(e));
    }
    let text = serde_json::to_string_pretty(&inst.to_json()).expect("instance serializes");
    write_atomic(out, &text)?;
    let classes: Vec<Value> = report
        .classes
        .iter()
        .map(|c| json!({ "ends": c.roles.map(|e| inst.name(e).to_string()), "tag": format!("{:?}", c.tag) }))
        .collect();
    Ok(Exit::ok(json!({
        "command": "gen",
        "inputs": inputs,
        "out": out,
        "ends": inst.names(),
        "classes": classes,
    })))
}

fn fold_valid(inst: &Instance) -> Result<QuotientTree, CliError> {
    if let Some(e) = validate(inst).primary_error() {
        return Err(CliError::validation(e));
    }
    fold_quotient(inst).map_err(|e| CliError::validation(&e))
}

fn tree_summary(t: &QuotientTree) -> Value {
    let degrees: Vec<usize> = (0..t.node_count()).map(|v| t.degree(v)).collect();
    json!({
        "nodes": t.node_count(),
        "edges": t.edges.len(),
        "branch_points": degrees.iter().filter(|&&d| d >= 3).count(),
        "max_degree": degrees.iter().copied().max().unwrap_or(0),
    })
}

fn cmd_fold(instance: &Path, out: &Path, dot: Option<&Path>) -> Result<Exit, CliError> {
    let inst = read_instance(instance)?;
    let t = fold_valid(&inst)?;
    write_atomic(
        out,
        &serde_json::to_string_pretty(&t.to_json()).expect("tree serializes"),
    )?;
    if let Some(d) = dot {
        write_atomic(d, &t.to_dot())?;
    }
    Ok(Exit::ok(json!({
        "command": "fold",
        "inputs": { "instance": instance },
        "out": out,
        "dot": dot,
        "tree": tree_summary(&t),
    })))
}

fn cmd_verify(instance: &Path, tree: Option<&Path>) -> Result<Exit, CliError> {
    let inst = read_instance(instance)?;
    let folded = fold_valid(&inst)?;
    let t = match tree {
        Some(path) => {
            let j: QuotientTreeJson = read_json(path)?;
            QuotientTree::from_json(&j)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
        }
        None => folded,
    };
    let axioms = verify_tree_axioms(&inst, &t);
    let retraction = retraction_invariance_check(&inst).map_err(|e| CliError::validation(&e))?;
    let passed = axioms.all_passed() && retraction.passed();
    let report = json!({
        "command": "verify",
        "inputs": { "instance": instance, "tree": tree },
        "validation": "passed",
        "tree": tree_summary(&t),
        "axioms": axioms.checks,
        "retraction": retraction,
        "status": if passed { "passed" } else { "violation" },
    });
    Ok(if passed {
        Exit::ok(report)
    } else {
        Exit::violation(report)
    })
}

fn run(cli: Cli) -> Result<Exit, CliError> {
    match cli.command {
        Command::Classify {
            diagram,
            catalog_id,
        } => cmd_classify(diagram, catalog_id),
        Command::Catalog => cmd_catalog(),
        Command::Gen {
            template,
            params,
            seed,
            out,
        } => cmd_gen(template, &params, seed, &out),
        Command::Fold { instance, out, dot } => cmd_fold(&instance, &out, dot.as_deref()),
        Command::Verify { instance, tree } => cmd_verify(&instance, tree.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let exit = run(cli).unwrap_or_else(Exit::from);
    exit.emit()
}
