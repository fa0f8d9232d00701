//! `matchable` command-line front end. Reads a JSON file, runs one operation
//! and prints a JSON verdict on stdout.
//!
//! Exit codes: 0 when a verdict was computed, 1 on an internal audit failure,
//! 2 on input errors, 3 when a size bound is exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use matchable::dyson::{certificate_for_unmatched, verify_certificate, ViolationCertificate};
use matchable::linear_matching::{
    construct_matched_basis, has_linear_matching_property, is_matched_basis, is_matched_characterization,
    verify_linear_violation, violation_from_rado,
};
use matchable::matching::{characterization_check, count_matchings, find_matching, has_matching_property};
use matchable::sweep::{field_sweep, group_sweep, small_groups};
use matchable::{
    Element, ElementSet, FieldSpec, FieldTower, GroupSpec, Limits, LinearInstance, LinearStrategy, MatchInstance,
    Strategy,
};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "matchable", version, about = "Matchings in abelian groups and field extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print compact single-line JSON instead of pretty-printed JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(clap::Args)]
struct Input {
    /// JSON input file.
    path: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a group instance has a matching.
    GroupCheck {
        #[command(flatten)]
        input: Input,
        /// Characterization strategy: `reduced` or `exhaustive`.
        #[arg(long, default_value = "reduced")]
        strategy: Strategy,
    },
    /// Count the matchings of a group instance.
    GroupCount {
        #[command(flatten)]
        input: Input,
    },
    /// Emit a Dyson certificate for an unmatchable group instance.
    GroupCertify {
        #[command(flatten)]
        input: Input,
        /// Verify this certificate against the instance instead of building one.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Decide the matching property for a group.
    GroupProperty {
        #[command(flatten)]
        input: Input,
    },
    /// Seeded three-way agreement sweep over finite groups.
    GroupSweep {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest |A|.
        #[arg(long, default_value_t = 8)]
        max_size: usize,
    },
    /// Decide whether a subspace instance has a matched basis.
    FieldCheck {
        #[command(flatten)]
        input: Input,
        /// Characterization strategy: `subfield`, `frame` or `exhaustive`.
        #[arg(long, default_value = "subfield")]
        strategy: LinearStrategy,
    },
    /// Build a basis of B matched to the echelon basis of A.
    FieldConstruct {
        #[command(flatten)]
        input: Input,
    },
    /// Decide the linear matching property for a field extension.
    FieldLmp {
        #[command(flatten)]
        input: Input,
    },
    /// Seeded strategy agreement sweep over subspace instances.
    FieldSweep {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest subspace dimension.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
}

/// Input of `group-sweep`: an explicit group list or every finite abelian
/// group up to an order.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFamily {
    #[serde(default)]
    groups: Option<Vec<GroupSpec>>,
    #[serde(default)]
    max_order: Option<u64>,
    count: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFamily {
    tower: FieldSpec,
    count: usize,
    #[serde(default)]
    strategies: Option<Vec<String>>,
}

/// An input problem, reported with exit code 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())).into())
}

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn pairs(inst: &MatchInstance, m: &[usize]) -> Vec<(Element, Element)> {
    m.iter().enumerate().map(|(i, &j)| (inst.a()[i].clone(), inst.b()[j].clone())).collect()
}

fn pick(v: &[Element], idx: &[usize]) -> ElementSet {
    idx.iter().map(|&i| v[i].clone()).collect()
}

fn group_check(inst: &MatchInstance, strategy: Strategy) -> Result<Value> {
    let res = find_matching(inst);
    let witness = res.witness.as_ref().map(|w| {
        json!({
            "S": pick(inst.a(), &w.s),
            "neighborhood": pick(inst.b(), &w.neighborhood),
            "U": pick(inst.b(), &w.u),
        })
    });
    let characterization = if inst.one_not_in_b() {
        let c = characterization_check(inst, strategy, &Limits::default())?;
        json!({
            "strategy": strategy,
            "holds": c.holds,
            "violation": c.violation.map(|(s, r)| json!({ "S": s, "R": r })),
        })
    } else {
        Value::Null
    };
    Ok(json!({
        "exists": res.exists,
        "matching": res.matching.map(|m| pairs(inst, &m)),
        "witness": witness,
        "characterization": characterization,
    }))
}

fn group_certify(inst: &MatchInstance, verify: Option<&Path>) -> Result<Value> {
    if let Some(path) = verify {
        let cert: ViolationCertificate = read_json(path)?;
        return Ok(json!({ "valid": verify_certificate(inst, &cert) }));
    }
    if find_matching(inst).exists {
        return Ok(json!({ "exists": true }));
    }
    let (cert, trace) = certificate_for_unmatched(inst)?;
    let mut out = serde_json::to_value(&cert)?;
    out["exists"] = json!(false);
    out["steps"] = json!(trace.steps());
    out["trace"] = serde_json::to_value(&trace)?;
    Ok(out)
}

fn group_sweep_cmd(family: GroupFamily, seed: u64, max_size: usize) -> Result<Value> {
    let groups = match (family.groups, family.max_order) {
        (Some(g), None) => g,
        (None, Some(n)) => small_groups(n),
        _ => return Err(input_error("give exactly one of \"groups\" and \"max_order\"")),
    };
    let report = group_sweep(&groups, family.count, max_size, seed, &Limits::default())?;
    let mut out = serde_json::to_value(&report)?;
    out["clean"] = json!(report.clean());
    Ok(out)
}

fn field_check(inst: &LinearInstance, strategy: LinearStrategy) -> Result<Value> {
    let c = is_matched_characterization(inst, strategy, &Limits::default())?;
    Ok(json!({ "strategy": strategy, "matched": c.matched, "violation": c.violation }))
}

fn field_construct(inst: &LinearInstance) -> Result<Value> {
    let a_basis = inst.a().basis();
    let res = construct_matched_basis(inst, &a_basis)?;
    let mut out = serde_json::to_value(&res)?;
    if let Some(b) = &res.b_basis {
        out["verified"] = json!(is_matched_basis(inst, &a_basis, b)?);
    }
    if let Some(j) = &res.rado_witness {
        let (v, trace) = violation_from_rado(inst, &a_basis, j)?;
        out["verified"] = json!(verify_linear_violation(inst, &v));
        out["violation"] = serde_json::to_value(&v)?;
        out["steps"] = json!(trace.steps());
    }
    Ok(out)
}

fn field_sweep_cmd(family: FieldFamily, seed: u64, max_dim: usize) -> Result<Value> {
    let tower = FieldTower::from_spec(&family.tower)?;
    let strategies = match family.strategies {
        Some(names) => names.iter().map(|s| s.parse()).collect::<matchable::Result<Vec<LinearStrategy>>>()?,
        None => vec![LinearStrategy::Exhaustive, LinearStrategy::Subfield, LinearStrategy::Frame],
    };
    let report = field_sweep(&tower, family.count, max_dim, seed, &strategies, &Limits::default())?;
    let mut out = serde_json::to_value(&report)?;
    out["clean"] = json!(report.clean());
    Ok(out)
}

fn run(cmd: Command) -> Result<Value> {
    let limits = Limits::default();
    match cmd {
        Command::GroupCheck { input, strategy } => group_check(&read_json(&input.path)?, strategy),
        Command::GroupCount { input } => {
            let inst: MatchInstance = read_json(&input.path)?;
            Ok(json!({ "count": count_matchings(&inst, &limits)?.to_string() }))
        }
        Command::GroupCertify { input, verify } => group_certify(&read_json(&input.path)?, verify.as_deref()),
        Command::GroupProperty { input } => {
            let g: GroupSpec = read_json(&input.path)?;
            let report = has_matching_property(&g, limits.subgroup_order)?;
            Ok(json!({ "group": g.to_string(), "holds": report.holds, "counterexample": report.counterexample }))
        }
        Command::GroupSweep { input, seed, max_size } => group_sweep_cmd(read_json(&input.path)?, seed, max_size),
        Command::FieldCheck { input, strategy } => field_check(&read_json(&input.path)?, strategy),
        Command::FieldConstruct { input } => field_construct(&read_json(&input.path)?),
        Command::FieldLmp { input } => {
            let spec: FieldSpec = read_json(&input.path)?;
            let tower = FieldTower::from_spec(&spec)?;
            let report = has_linear_matching_property(&tower, &limits)?;
            let mut out = serde_json::to_value(&report)?;
            out["modulus"] = json!(tower.modulus());
            Ok(out)
        }
        Command::FieldSweep { input, seed, max_size } => field_sweep_cmd(read_json(&input.path)?, seed, max_size),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InputError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<matchable::Error>() {
        Some(e) if e.is_bound() => 3,
        Some(matchable::Error::Audit(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli.command).and_then(|v| {
        if cli.json {
            serde_json::to_string(&v)
        } else {
            serde_json::to_string_pretty(&v)
        }
        .context("serializing output")
    });
    match outcome {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
