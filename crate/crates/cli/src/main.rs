use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use veechkit::affine::{
    act, enumerate_group, membership, redecompose_by, refine_rational, vertex_tables, GroupLimits, MembershipOptions,
    Verdict,
};
use veechkit::document::{parse_document, parse_document_unchecked, to_json_string, to_value};
use veechkit::exact::{parse_matrix, Mat2};
use veechkit::geometry::RedecomposeOutcome;
use veechkit::invariants::{double_cover, invariants_report, surface_type, Origami};
use veechkit::iso::{canonical_form, find_isomorphism};
use veechkit::origami::format_cycles;
use veechkit::pdec::PDecomposition;
use veechkit::Error;

const SUCCESS: u8 = 0;
const NEGATIVE: u8 = 1;
const UNKNOWN: u8 = 2;
const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "veechkit", version, about = "Veech groups of flat surfaces given as extended origamis")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// JSON document describing the decomposition.
    file: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check the origami axioms.
    Validate(Input),
    /// Genus, singularities, cylinder spectra and vertex classes.
    Info(Input),
    /// Canonical form up to relabelling.
    Canon {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        marked: bool,
    },
    /// Decide whether two origamis are isomorphic.
    Iso {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        marked: bool,
    },
    /// Apply a matrix to the frame.
    Act {
        #[command(flatten)]
        input: Input,
        /// Matrix "a,b;c,d".
        #[arg(short = 'm', long = "matrix", allow_hyphen_values = true)]
        matrix: String,
    },
    /// Decide whether a matrix lies in the Veech group.
    Member {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'm', long = "matrix", allow_hyphen_values = true)]
        matrix: String,
        /// Respect the marked points.
        #[arg(long)]
        marked: bool,
        /// Segment budget per separatrix (default from VEECHKIT_BUDGET or the surface).
        #[arg(long)]
        budget: Option<usize>,
        /// Skip the cylinder prefilter.
        #[arg(long)]
        no_prefilter: bool,
        /// Also report where the marked points go.
        #[arg(long)]
        tables: bool,
    },
    /// Enumerate the Veech group of a square-tiled surface as a coset graph.
    Group {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        marked: bool,
        /// Maximal number of cosets.
        #[arg(long, default_value_t = 2000)]
        limit: usize,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Subdivide commensurable sides into congruent cells.
    Refine(Input),
    /// The orientation double cover as an ordinary origami.
    DoubleCover(Input),
    /// Graphviz rendering of the coset graph.
    Dot {
        #[command(flatten)]
        input: Input,
        /// Plain coset graph (the default).
        #[arg(long, conflicts_with = "schreier")]
        coset: bool,
        /// Spanning tree solid, Schreier-generator edges dashed.
        #[arg(long)]
        schreier: bool,
        #[arg(long)]
        marked: bool,
        #[arg(long, default_value_t = 2000)]
        limit: usize,
    },
}

struct Report {
    code: u8,
    json: Value,
    text: String,
}

impl Report {
    fn new(code: u8, json: Value, text: impl Into<String>) -> Self {
        Report { code, json, text: text.into() }
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<PDecomposition, Error> {
    parse_document(&read(path)?)
}

fn matrix(text: &str, p: &PDecomposition) -> Result<Mat2, Error> {
    parse_matrix(text, p.field())
}

fn env_budget() -> Result<Option<usize>, Error> {
    match std::env::var("VEECHKIT_BUDGET") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Error::Input(format!("VEECHKIT_BUDGET={v} is not a count"))),
        Err(_) => Ok(None),
    }
}

fn origami_text(o: &Origami) -> String {
    let cycles = |p: &[usize]| {
        let mut seen = vec![false; p.len()];
        let mut out = Vec::new();
        for s in 0..p.len() {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                c.push(i as i64 + 1);
                i = p[i];
            }
            out.push(c);
        }
        format_cycles(&out)
    };
    format!("x={} y={}", cycles(&o.x), cycles(&o.y))
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Validate(i) => {
            let p = parse_document_unchecked(&read(&i.file)?)?;
            let failures = p.origami.validate().failures();
            let list: Vec<Value> =
                failures.iter().map(|(a, w)| json!({ "axiom": format!("{a:?}"), "witness": w })).collect();
            let mut text = String::new();
            for (a, w) in &failures {
                text.push_str(&format!("{a:?}: {w}\n"));
            }
            let valid = failures.is_empty() && load(&i.file).is_ok();
            if valid {
                text.push_str("valid");
            } else if failures.is_empty() {
                text.push_str(&load(&i.file).expect_err("checked").to_string());
            }
            let code = if valid { SUCCESS } else { NEGATIVE };
            Ok(Report::new(code, json!({ "valid": valid, "failures": list }), text.trim_end()))
        }
        Command::Info(i) => {
            let p = load(&i.file)?;
            let report = invariants_report(&p.origami)?;
            let t = surface_type(&p.origami)?;
            let text = format!(
                "{}\ntype ({}, {})\norders {:?}\nabelian {}\nspectra x {} y {}",
                p,
                t.genus,
                t.punctures,
                t.orders,
                report["abelian"],
                report["spectra"]["x"],
                report["spectra"]["y"]
            );
            Ok(Report::new(SUCCESS, report, text))
        }
        Command::Canon { input, marked } => {
            let p = load(&input.file)?;
            let form = canonical_form(&p.origami, marked.then_some(&p.marks))?;
            let code = form.encode();
            Ok(Report::new(SUCCESS, json!({ "canonical": code }), code))
        }
        Command::Iso { file1, file2, marked } => {
            let (p, q) = (load(file1)?, load(file2)?);
            let marks = marked.then_some((&p.marks, &q.marks));
            Ok(match find_isomorphism(&p.origami, &q.origami, marks)? {
                Some(iso) => {
                    let j = iso.to_json();
                    Report::new(SUCCESS, json!({ "isomorphic": true, "isomorphism": j }), format!("isomorphic\n{j}"))
                }
                None => Report::new(NEGATIVE, json!({ "isomorphic": false }), "not isomorphic"),
            })
        }
        Command::Act { input, matrix: m } => {
            let p = load(&input.file)?;
            let q = act(&matrix(m, &p)?, &p)?;
            Ok(Report::new(SUCCESS, to_value(&q), to_json_string(&q)))
        }
        Command::Member { input, matrix: m, marked, budget, no_prefilter, tables } => {
            let p = load(&input.file)?;
            let a = matrix(m, &p)?;
            let budget = match budget {
                Some(b) => Some(*b),
                None => env_budget()?,
            };
            let opts = MembershipOptions { marked: *marked, budget, prefilter: !no_prefilter };
            let r = membership(&p, &a, &opts)?;
            let mut out = r.to_json();
            let mut text = match r.verdict {
                Verdict::Member => "Member".to_string(),
                Verdict::NotMember(reason) => format!("NotMember ({})", reason.as_str()),
                Verdict::Unknown { budget } => format!("Unknown (budget {budget})"),
            };
            if let Some(w) = &r.witness {
                text.push_str(&format!("\nwitness: {w}"));
            }
            if let Some(c) = &r.certificate {
                text.push_str(&format!("\ncertificate: {}", c.isomorphism.to_json()));
            }
            if let Some(q) = &r.redecomposed {
                text.push_str(&format!("\nredecomposed: {}", q.origami));
            }
            if *tables {
                if let RedecomposeOutcome::Done(q) = redecompose_by(&p, &a, budget)? {
                    let t = vertex_tables(&p, &q.decomposition)?;
                    for (k, table) in t.iter().enumerate() {
                        let row: Vec<String> = table.iter().map(|(l, c)| format!("{l}->{c}")).collect();
                        text.push_str(&format!("\ntable {k}: {}", row.join(" ")));
                    }
                    out["vertex_tables"] = json!(t);
                }
            }
            let code = match r.verdict {
                Verdict::Member => SUCCESS,
                Verdict::NotMember(_) => NEGATIVE,
                Verdict::Unknown { .. } => UNKNOWN,
            };
            Ok(Report::new(code, out, text))
        }
        Command::Group { input, marked, limit, budget } => {
            let p = load(&input.file)?;
            let budget = match budget {
                Some(b) => Some(*b),
                None => env_budget()?,
            };
            let g = enumerate_group(&p, *marked, GroupLimits { max_nodes: *limit, budget })?;
            let j = g.to_json();
            let text = match g.index() {
                Some(i) => {
                    let gens: Vec<String> = j["generators"]
                        .as_array()
                        .expect("array")
                        .iter()
                        .map(|g| format!("{} = {}", g["word"].as_str().unwrap_or(""), g["matrix"]))
                        .collect();
                    format!("index {i}\ncosets {}\ngenerators\n  {}", j["cosets"], gens.join("\n  "))
                }
                None => format!(
                    "incomplete after {} cosets{}",
                    g.nodes.len(),
                    g.unknown.as_deref().map(|u| format!(": {u}")).unwrap_or_default()
                ),
            };
            let code = if g.is_complete() { SUCCESS } else { UNKNOWN };
            Ok(Report::new(code, j, text))
        }
        Command::Refine(i) => {
            let q = refine_rational(&load(&i.file)?)?;
            Ok(Report::new(SUCCESS, to_value(&q), to_json_string(&q)))
        }
        Command::DoubleCover(i) => {
            let p = load(&i.file)?;
            let d = double_cover(&p.origami);
            let perm = |o: &Origami| json!({ "x": o.x.iter().map(|v| v + 1).collect::<Vec<_>>(), "y": o.y.iter().map(|v| v + 1).collect::<Vec<_>>() });
            let j = json!({
                "cover": perm(&d.cover),
                "genus": d.cover.genus(),
                "connected": d.connected,
                "sheet": d.sheet.as_ref().map(perm),
            });
            let mut text = format!(
                "cover ({} squares, signed cell i+ is 2i-1, i- is 2i): {}\ngenus {}\nconnected {}",
                d.cover.n(),
                origami_text(&d.cover),
                d.cover.genus(),
                d.connected
            );
            if let Some(s) = &d.sheet {
                text.push_str(&format!("\nsheet: {}", origami_text(s)));
            }
            Ok(Report::new(SUCCESS, j, text))
        }
        Command::Dot { input, coset: _, schreier, marked, limit } => {
            let p = load(&input.file)?;
            let g = enumerate_group(&p, *marked, GroupLimits { max_nodes: *limit, budget: env_budget()? })?;
            let dot = g.to_dot(*schreier);
            let code = if g.is_complete() { SUCCESS } else { UNKNOWN };
            Ok(Report::new(code, json!({ "dot": dot }), dot.trim_end()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { SUCCESS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(r) => {
            let out = if cli.json { serde_json::to_string_pretty(&r.json).expect("values serialize") } else { r.text };
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::from(r.code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
