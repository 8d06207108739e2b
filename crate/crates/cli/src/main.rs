//! `orbiform`: JSON in, JSON or text tables out.
//!
//! Exit codes: 0 success, 2 invalid input, 3 budget exceeded, 4 numerical
//! accuracy not met.

mod input;
mod render;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use orbiform::canonical::is_balanced;
use orbiform::fuchsian::{
    coset_enumerate, induced_signature, low_index_subgroups_with_budget, presentation, Word, DEFAULT_MAX_COSETS,
    DEFAULT_SEARCH_BUDGET,
};
use orbiform::orb_poset::{enumerate_models, hyperbolic_prosystem_edges, quotient_evidence, resolve_with_multipliers};
use orbiform::parahoric::{classify_residue, mp_grading, pullback_type, pushout_sl2_to_psl2};
use orbiform::triangle::{hypergeometric_monodromy_with, MonodromyOptions, DEFAULT_CHECK_TOL, DEFAULT_INTEG_TOL};
use orbiform::{
    canonical_type_system, maximality_certificate, triangle_data, CosetTable, ErrorClass, LocalType, OrbifoldModel,
    ParahoricBundleData, RamifiedCoverData, ResidueDatum, Sector, Signature,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use input::{parse, InputError};
use render::{pairs, Table};

#[derive(Parser)]
#[command(
    name = "orbiform",
    version,
    about = "Orbifold signatures, Fuchsian coverings, parahoric degrees and triangle monodromy"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output_format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// JSON arguments are inline text, `@path`, or `-` for stdin.
#[derive(Subcommand)]
enum Command {
    /// Euler characteristic and sector of a signature.
    Classify {
        /// {"genus": g, "orders": [m...], "cusps": s}
        signature: String,
    },
    /// Standard presentation of the orbifold fundamental group.
    Present { signature: String },
    /// Todd–Coxeter enumeration of the cosets of a subgroup.
    Cosets {
        /// {"signature": {...}, "subgroup": [[signed generator indices]...]}
        input: String,
        #[arg(long, env = "ORBIFORM_MAX_COSETS", default_value_t = DEFAULT_MAX_COSETS as u64,
              value_parser = clap::value_parser!(u64).range(1..))]
        max_cosets: u64,
    },
    /// Conjugacy classes of subgroups up to a given index.
    Lowindex {
        signature: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_index: u64,
        #[arg(long, env = "ORBIFORM_SEARCH_BUDGET", default_value_t = DEFAULT_SEARCH_BUDGET as u64,
              value_parser = clap::value_parser!(u64).range(1..))]
        search_budget: u64,
    },
    /// Signature of the cover attached to a coset table.
    CoverSignature {
        /// {"signature": {...}, "table": {"index": n, "perms": {...}}}
        input: String,
    },
    /// Moy–Prasad grading of a local type.
    MpGrading {
        /// {"group": "GL", "weights": [...]} or {"group": "SL2"|"PSL2", "coeff": "p/q"}
        local_type: String,
    },
    /// Parahoric degree of bundle data.
    Pdeg {
        /// {"degree": d, "points": [{"point": "x", "weights": [...]}]}
        bundle: String,
    },
    /// Algebraic, log or not-adjusted residue.
    ResidueClassify {
        /// {"lambda": "p/q", "type": {...}, "nilpotent": [[...]]}
        residue: String,
    },
    /// Pullback of a local type or of bundle data along a cover.
    Pullback {
        /// {"type": {...}, "e": n} or {"bundle": {...}, "degree": n, "profiles": {"x": [e...]}}
        input: String,
    },
    /// Pushout of an SL2 type to PSL2.
    Pushout { local_type: String },
    /// Canonical PSL2 types and maximality bookkeeping.
    CanonicalType { signature: String },
    /// Monodromy of the hypergeometric equation of a hyperbolic triangle.
    Triangle {
        p: u64,
        q: u64,
        r: u64,
        /// Integration tolerance.
        #[arg(long, default_value_t = DEFAULT_INTEG_TOL)]
        tol: f64,
        /// Tolerance for the trace, relation and reality checks.
        #[arg(long, default_value_t = DEFAULT_CHECK_TOL)]
        check_tol: f64,
        #[arg(long, default_value_t = 0.5)]
        basepoint: f64,
    },
    /// Étale resolution of a ramified cover.
    Resolve {
        /// {"degree": n, "branches": [{"point": "x", "profile": [e...]}]}
        cover: String,
        /// {"x": k, ...}: use k·lcm instead of the lcm at x.
        #[arg(long)]
        multipliers: Option<String>,
    },
    /// Enumerate orbifold models with their sectors.
    OrbEnumerate {
        #[arg(long, default_value_t = 0)]
        genus: u64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        max_order: u64,
        #[arg(long, value_enum)]
        sector: Option<SectorArg>,
    },
    /// Refinement poset (Hasse diagram) of hyperbolic models.
    OrbPoset {
        /// JSON array of models; defaults to the enumerated hyperbolic models.
        models: Option<String>,
        #[arg(long, default_value_t = 0)]
        genus: u64,
        #[arg(long, default_value_t = 3)]
        points: usize,
        #[arg(long, default_value_t = 7)]
        max_order: u64,
        /// Attach subgroup-class counts up to this index to each node.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        evidence: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SectorArg {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl From<SectorArg> for Sector {
    fn from(s: SectorArg) -> Sector {
        match s {
            SectorArg::Spherical => Sector::Spherical,
            SectorArg::Euclidean => Sector::Euclidean,
            SectorArg::Hyperbolic => Sector::Hyperbolic,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CosetsInput {
    signature: Signature,
    #[serde(default)]
    subgroup: Vec<Word>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverInput {
    signature: Signature,
    table: CosetTable,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PullbackInput {
    Type {
        #[serde(rename = "type")]
        local_type: LocalType,
        e: u64,
    },
    Bundle {
        bundle: ParahoricBundleData,
        degree: u64,
        #[serde(default)]
        profiles: BTreeMap<String, Vec<u64>>,
    },
}

enum Failure {
    Input(InputError),
    Core(orbiform::Error),
    /// A report was produced but its checks failed.
    Checks(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<orbiform::Error> for Failure {
    fn from(e: orbiform::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Core(e) => match e.class() {
                ErrorClass::Validation => 2,
                ErrorClass::Resource => 3,
                ErrorClass::Numerical => 4,
            },
            Failure::Checks(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(e) => e.to_string(),
            Failure::Core(e) => e.to_string(),
            Failure::Checks(m) => m.clone(),
        }
    }
}

/// A command's result: the JSON value and its text rendering.
struct Output {
    json: Value,
    table: Table,
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Classify { signature } => {
            let s: Signature = parse(signature)?;
            let chi = s.euler_char();
            let json = json!({ "chi": chi.to_string(), "sector": s.sector() });
            Ok(Output {
                table: pairs(&format!("signature {s}"), [("chi", chi.to_string()), ("sector", s.sector().to_string())]),
                json,
            })
        }
        Command::Present { signature } => {
            let s: Signature = parse(signature)?;
            let p = presentation(&s);
            let mut table = Table::new(["relator", "word"]).titled(p.presentation.to_string());
            for (i, r) in p.presentation.relators.iter().enumerate() {
                table.row([format!("r{}", i + 1), p.presentation.format_word(r)]);
            }
            Ok(Output { json: to_json(&p), table })
        }
        Command::Cosets { input, max_cosets } => {
            let inp: CosetsInput = parse(input)?;
            let pres = presentation(&inp.signature);
            for w in &inp.subgroup {
                pres.presentation.check_word(w)?;
            }
            let t = coset_enumerate(&pres, &inp.subgroup, budget(*max_cosets))?;
            Ok(Output { table: table_of_cosets(&t), json: to_json(&t) })
        }
        Command::Lowindex { signature, max_index, search_budget } => {
            let s: Signature = parse(signature)?;
            let tables = low_index_subgroups_with_budget(
                &presentation(&s).presentation,
                budget(*max_index),
                budget(*search_budget),
            )?;
            let mut records = Vec::new();
            let mut table = Table::new(["index", "signature", "chi", "normal"]).titled(format!("subgroups of {s}"));
            for t in tables {
                let rec = induced_signature(&s, &t)?;
                table.row([
                    rec.index.to_string(),
                    rec.induced_sig.to_string(),
                    rec.induced_sig.euler_char().to_string(),
                    t.is_normal().to_string(),
                ]);
                records.push(json!({
                    "index": rec.index,
                    "induced_signature": rec.induced_sig,
                    "normal": t.is_normal(),
                    "table": t,
                }));
            }
            table.note(format!("{} conjugacy classes", records.len()));
            Ok(Output { json: Value::Array(records), table })
        }
        Command::CoverSignature { input } => {
            let inp: CoverInput = parse(input)?;
            let rec = induced_signature(&inp.signature, &inp.table)?;
            let mut table = Table::new(["point", "cycle lengths"])
                .titled(format!("index {} cover of {}: {}", rec.index, inp.signature, rec.induced_sig));
            for lc in &rec.ramification {
                table.row([lc.point.to_string(), format!("{:?}", lc.cycle_lengths)]);
            }
            table.note(format!("chi = {}", rec.induced_sig.euler_char()));
            Ok(Output { json: to_json(&rec), table })
        }
        Command::MpGrading { local_type } => {
            let t: LocalType = parse(local_type)?;
            let g = mp_grading(&t);
            let mut table = Table::new(["element", "grade"]).titled(format!("{} type {t}", t.group_name()));
            for e in &g.entries {
                table.row([e.label.clone(), e.grade.to_string()]);
            }
            table.note(format!("positive part: {}", g.positive_part().join(" ")));
            let json = json!({
                "type": t,
                "entries": g.entries,
                "positive_part": g.positive_part(),
            });
            Ok(Output { json, table })
        }
        Command::Pdeg { bundle } => {
            let b: ParahoricBundleData = parse(bundle)?;
            let pdeg = b.pdeg();
            let mut table =
                Table::new(["point", "weights", "sum"]).titled(format!("rank {} degree {}", b.rank(), b.degree()));
            for p in b.points() {
                let w: Vec<String> = p.filtration.weights().iter().map(ToString::to_string).collect();
                table.row([p.point.clone(), w.join(" "), p.filtration.weight_sum().to_string()]);
            }
            table.note(format!("pdeg = {pdeg}"));
            let json = json!({ "rank": b.rank(), "degree": b.degree(), "pdeg": pdeg.to_string() });
            Ok(Output { json, table })
        }
        Command::ResidueClassify { residue } => {
            let r: ResidueDatum = parse(residue)?;
            let flag = classify_residue(&r)?;
            let w: Vec<String> = r.model.weights().iter().map(ToString::to_string).collect();
            let table = pairs(
                "residue",
                [("lambda", r.lambda.to_string()), ("model weights", w.join(" ")), ("flag", flag.to_string())],
            );
            Ok(Output { json: json!({ "flag": flag }), table })
        }
        Command::Pullback { input } => match parse::<PullbackInput>(input)? {
            PullbackInput::Type { local_type, e } => {
                let t = pullback_type(&local_type, e)?;
                let table = pairs(
                    "pullback",
                    [("type", local_type.to_string()), ("e", e.to_string()), ("pullback", t.to_string())],
                );
                Ok(Output { json: to_json(&t), table })
            }
            PullbackInput::Bundle { bundle, degree, profiles } => {
                let pulled = bundle.pullback(degree, &profiles)?;
                let mut table = Table::new(["point", "weights"]).titled(format!(
                    "pullback of degree {degree}: pdeg {} -> {}",
                    bundle.pdeg(),
                    pulled.pdeg()
                ));
                for p in pulled.points() {
                    let w: Vec<String> = p.filtration.weights().iter().map(ToString::to_string).collect();
                    table.row([p.point.clone(), w.join(" ")]);
                }
                let json = json!({ "bundle": pulled, "pdeg": pulled.pdeg().to_string() });
                Ok(Output { json, table })
            }
        },
        Command::Pushout { local_type } => {
            let t: LocalType = parse(local_type)?;
            let out = pushout_sl2_to_psl2(&t)?;
            let table = pairs("pushout SL2 -> PSL2", [("SL2", t.to_string()), ("PSL2", out.to_string())]);
            Ok(Output { json: to_json(&out), table })
        }
        Command::CanonicalType { signature } => {
            let s: Signature = parse(signature)?;
            let sys = canonical_type_system(&s)?;
            let cert = maximality_certificate(&s)?;
            let mut table =
                Table::new(["point", "kind", "kappa", "PSL2 type", "SL2 lift", "denominator", "mp>0 nonzero"])
                    .titled(format!("canonical types on {s}"));
            for p in &sys.points {
                table.row([
                    p.label.clone(),
                    p.kind.to_string(),
                    p.kappa.to_string(),
                    p.psl2_type.to_string(),
                    LocalType::SL2(p.sl2_half_weight.clone()).to_string(),
                    p.denominator.to_string(),
                    p.positive_mp_nonzero.to_string(),
                ]);
            }
            table.note(format!(
                "deg omega = {}, pardeg Theta = {}, rank-2 pdeg = {}, maximal = {}, balanced = {}",
                cert.deg_omega,
                cert.pardeg_theta,
                cert.rank2_pdeg,
                cert.maximal,
                is_balanced(&cert)
            ));
            Ok(Output { json: json!({ "signature": s, "points": sys.points, "maximality": cert }), table })
        }
        Command::Triangle { p, q, r, tol, check_tol, basepoint } => {
            let data = triangle_data(*p, *q, *r)?;
            let opts = MonodromyOptions { integ_tol: *tol, check_tol: *check_tol, basepoint: *basepoint };
            let rep = hypergeometric_monodromy_with(&data, &opts)?;
            let mut table = Table::new(["generator", "trace", "|trace| oracle", "trace defect", "order defect"])
                .titled(format!("triangle ({p},{q},{r}), basepoint {basepoint}, tol {tol:e}"));
            for (k, name) in ["M0", "M1", "Minf"].iter().enumerate() {
                table.row([
                    name.to_string(),
                    format!("{:.12} {:+.3e}i", rep.traces[k].re, rep.traces[k].im),
                    format!("{:.12}", rep.oracle_traces[k]),
                    format!("{:.3e}", rep.trace_defects[k]),
                    format!("{:.3e}", rep.order_defects[k]),
                ]);
            }
            table.note(format!(
                "relation defect {:.3e}, reality defect {:.3e}",
                rep.relation_defect, rep.reality_defect
            ));
            table.note(format!(
                "traces {}, relations {}, reality {}, determinants {}: {}",
                pass(rep.traces_pass),
                pass(rep.relations_pass),
                pass(rep.reality_pass),
                pass(rep.determinants_pass),
                pass(rep.all_pass)
            ));
            let out = Output { json: to_json(&rep), table };
            if rep.all_pass {
                Ok(out)
            } else {
                emit(cli.output_format, &out);
                Err(Failure::Checks(format!("monodromy checks failed, largest defect {:.3e}", rep.max_defect())))
            }
        }
        Command::Resolve { cover, multipliers } => {
            let c: RamifiedCoverData = parse(cover)?;
            let mult: BTreeMap<String, u64> = match multipliers {
                Some(m) => parse(m)?,
                None => BTreeMap::new(),
            };
            let res = resolve_with_multipliers(&c, &mult)?;
            let mut table =
                Table::new(["point", "profile", "m_x", "m_y"]).titled(format!("degree {} cover", c.degree()));
            for b in c.branches() {
                match res.target.get(&b.point) {
                    Some(m) => table.row([
                        b.point.clone(),
                        format!("{:?}", b.profile),
                        m.to_string(),
                        format!("{:?}", res.sources[&b.point]),
                    ]),
                    None => table.row([
                        b.point.clone(),
                        format!("{:?}", b.profile),
                        "cusp".into(),
                        format!("{} cusps", b.profile.len()),
                    ]),
                }
            }
            Ok(Output { json: to_json(&res), table })
        }
        Command::OrbEnumerate { genus, points, max_order, sector } => {
            let models = enumerate_models(*genus, *points, *max_order)?;
            let keep: Vec<_> = models.into_iter().filter(|m| sector.is_none_or(|s| m.sector == s.into())).collect();
            let mut table = Table::new(["model", "signature", "chi", "sector"]).titled(format!("genus {genus} models"));
            for m in &keep {
                table.row([
                    model_label(&m.model),
                    m.signature.to_string(),
                    m.signature.euler_char().to_string(),
                    m.sector.to_string(),
                ]);
            }
            table.note(format!("{} models", keep.len()));
            Ok(Output { json: to_json(&keep), table })
        }
        Command::OrbPoset { models, genus, points, max_order, evidence } => {
            let list: Vec<OrbifoldModel> = match models {
                Some(m) => parse(m)?,
                None => enumerate_models(*genus, *points, *max_order)?
                    .into_iter()
                    .filter(|m| m.sector == Sector::Hyperbolic)
                    .map(|m| m.model)
                    .collect(),
            };
            let sys = hyperbolic_prosystem_edges(&list)?;
            let mut json = to_json(&sys);
            let mut table = Table::new(["id", "model", "signature", "refines"]).titled("refinement poset");
            let mut counts = Vec::new();
            for n in &sys.nodes {
                let coarser: Vec<String> =
                    sys.edges.iter().filter(|e| e.fine == n.id).map(|e| e.coarse.to_string()).collect();
                table.row([n.id.to_string(), model_label(&n.model), n.signature.to_string(), coarser.join(" ")]);
                if let Some(k) = evidence {
                    counts.push(quotient_evidence(&n.model, budget(*k))?);
                }
            }
            if evidence.is_some() {
                for (node, c) in json["nodes"].as_array_mut().expect("nodes array").iter_mut().zip(&counts) {
                    node["subgroup_classes"] = to_json(c);
                }
            }
            table.note(format!("{} nodes, {} edges", sys.nodes.len(), sys.edges.len()));
            Ok(Output { json, table })
        }
    }
}

fn budget(v: u64) -> usize {
    v.to_usize().unwrap_or(usize::MAX)
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn model_label(m: &OrbifoldModel) -> String {
    if m.orders().is_empty() {
        return "trivial".into();
    }
    m.orders().iter().map(|(x, o)| format!("{x}:{o}")).collect::<Vec<_>>().join(" ")
}

fn table_of_cosets(t: &CosetTable) -> Table {
    let mut table = Table::new(std::iter::once("coset".to_string()).chain(t.generators().iter().cloned()))
        .titled(format!("index {}", t.index()));
    for c in 0..t.index() {
        let mut row = vec![(c + 1).to_string()];
        row.extend((0..t.generators().len()).map(|g| (t.perm(g)[c] + 1).to_string()));
        table.row(row);
    }
    table
}

fn emit(format: Format, out: &Output) {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("values serialize") + "\n",
        Format::Table => out.table.render(),
    };
    // a closed pipe downstream is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(cli.output_format, &out);
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
