//! Command-line front end. [`run`] never panics on user input and maps
//! every outcome to an exit code.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::budget::Budget;
use crate::derivation::extract_forest;
use crate::elimination::{hd_exact_with, shd_exact_with, strictify, validate_ef, validate_strict_ef};
use crate::error::{Error, Result};
use crate::families::{enumerate_hypergraphs_with, EnumerationBounds, FamilySpec};
use crate::gc::{eval, is_rgc, parse, sentence_pool, wellformed_gck, Interpretation};
use crate::homcount::{count_homs, Semantics};
use crate::homvec::{hom_vector_over, indistinguishable_over, ClassKind, ClassTruncation, Indistinguishability};
use crate::io::{read_ef, read_hg, write_ef, write_hg};
use crate::repro;
use crate::script::{parse_script, replay};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILED: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

const SCHEMA: &str = "shdepth/1";

#[derive(Parser, Debug)]
#[command(name = "shdepth", version, about = "Hypertree depth, homomorphism counts and guarded counting logic")]
struct Cli {
    /// Output style for data lines.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Hd,
    Shd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SemanticsArg {
    Hypergraph,
    Incidence,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Hypergraph => Semantics::Hypergraph,
            SemanticsArg::Incidence => Semantics::Incidence,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Exact depth with a witness forest, or validation of a given forest.
    Depth {
        #[arg(long, value_enum, default_value_t = Mode::Shd)]
        mode: Mode,
        /// Validate this forest instead of searching.
        #[arg(long)]
        forest: Option<PathBuf>,
        /// Turn the given (or found) forest strict before printing.
        #[arg(long)]
        strictify: bool,
        input: PathBuf,
    },
    /// Number of homomorphisms from SOURCE to TARGET.
    Hom {
        #[arg(long, value_enum, default_value_t = SemanticsArg::Hypergraph)]
        semantics: SemanticsArg,
        source: PathBuf,
        target: PathBuf,
    },
    /// Counts from every member of a truncated class into one target.
    Homvec {
        #[command(flatten)]
        class: ClassArgs,
        target: PathBuf,
    },
    /// Compares two targets over a truncated class.
    Indist {
        #[command(flatten)]
        class: ClassArgs,
        left: PathBuf,
        right: PathBuf,
    },
    /// Replays a derivation script.
    Gli {
        /// Overrides the script's `K` line.
        #[arg(long)]
        k: Option<usize>,
        /// Write the forest read off the last derivation here.
        #[arg(long)]
        forest_out: Option<PathBuf>,
        script: PathBuf,
    },
    /// Guarded counting logic.
    Gck {
        #[command(subcommand)]
        action: GckAction,
    },
    /// Named instances and enumeration.
    Families {
        #[command(subcommand)]
        action: FamiliesAction,
    },
    /// Recomputes a named claim and prints one row per item.
    Repro {
        /// A check id, a group (`skew-k1`) or `all`.
        #[arg(long, default_value = "all")]
        check: String,
    },
}

#[derive(Args, Debug)]
struct ClassArgs {
    /// SHD, HD, ISHD or IHD.
    #[arg(long)]
    class: ClassKind,
    #[arg(long)]
    k: usize,
    #[arg(long = "maxE", default_value_t = 3)]
    max_edges: usize,
    #[arg(long = "maxV", default_value_t = 6)]
    max_vertices: usize,
    /// Keep connected members only.
    #[arg(long)]
    connected: bool,
}

impl ClassArgs {
    fn truncation(&self) -> ClassTruncation {
        ClassTruncation::new(self.class.clone(), self.k, EnumerationBounds::new(self.max_edges, self.max_vertices, self.connected))
    }
}

#[derive(Subcommand, Debug)]
enum GckAction {
    /// Evaluates a formula on a model.
    Eval {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Vertex assignments `i=id`, comma separated.
        #[arg(long, value_delimiter = ',')]
        nu_v: Vec<String>,
        /// Edge assignments `j=id`, comma separated.
        #[arg(long, value_delimiter = ',')]
        nu_e: Vec<String>,
    },
    /// Syntactic checks: well-formedness, guard depth, restricted shape.
    Check {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        formula: PathBuf,
    },
    /// Prints a seeded pool of well-formed sentences.
    Pool {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 25)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
enum FamiliesAction {
    /// Writes a named instance (pairs write two files).
    Emit {
        /// g, h, path, skew, skew-prime, skew-dist or skew-prime-dist.
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Number of hyperedges for `path`.
        #[arg(long, default_value_t = 7)]
        n: usize,
        /// Vertex index of the second singleton in `skew-prime-dist`.
        #[arg(long)]
        attach: Option<usize>,
        /// Output files; stdout when absent.
        #[arg(long, num_args = 1..)]
        out: Vec<PathBuf>,
    },
    /// Counts or lists every hypergraph within bounds, up to isomorphism.
    Enumerate {
        #[arg(long = "maxE")]
        max_edges: usize,
        #[arg(long = "maxV")]
        max_vertices: usize,
        #[arg(long)]
        connected: bool,
        /// Print each instance, not only the count.
        #[arg(long)]
        list: bool,
    },
}

/// What a verb produced, in every output style.
struct Report {
    code: i32,
    text: String,
    tsv: String,
    json: Value,
}

impl Report {
    fn new(code: i32, text: String, tsv: String, json: Value) -> Self {
        Report { code, text, tsv, json }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// Parses `argv` (program name first), runs the verb and writes to `out`
/// and `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let config = format!("{:?}", cli.verb);
    let _ = writeln!(err, "# config: format={:?} {config}", cli.format);
    let budget = Budget::unlimited().from_env();
    let report = match dispatch(&cli.verb, &budget) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if cli.format == Format::Json {
                let _ = writeln!(out, "{}", json!({"schema": SCHEMA, "config": config, "error": e.to_string()}));
            }
            return exit_code(&e);
        }
    };
    let written = match cli.format {
        Format::Text => write!(out, "{}", report.text),
        Format::Tsv => write!(out, "{}", report.tsv),
        Format::Json => {
            let mut v = json!({"schema": SCHEMA, "config": config});
            if let (Value::Object(m), Value::Object(extra)) = (&mut v, report.json) {
                m.extend(extra);
            }
            writeln!(out, "{v}")
        }
    };
    if written.is_err() {
        return EXIT_USAGE;
    }
    report.code
}

fn dispatch(verb: &Verb, budget: &Budget) -> Result<Report> {
    match verb {
        Verb::Depth { mode, forest, strictify, input } => depth(*mode, forest.as_deref(), *strictify, input, budget),
        Verb::Hom { semantics, source, target } => hom(*semantics, source, target),
        Verb::Homvec { class, target } => homvec(class, target, budget),
        Verb::Indist { class, left, right } => indist(class, left, right, budget),
        Verb::Gli { k, forest_out, script } => gli(*k, forest_out.as_deref(), script),
        Verb::Gck { action } => gck(action),
        Verb::Families { action } => families(action, budget),
        Verb::Repro { check } => run_repro(check),
    }
}

fn depth(mode: Mode, forest: Option<&Path>, make_strict: bool, input: &Path, budget: &Budget) -> Result<Report> {
    let i = read_hg(input)?.to_incidence();
    let (depth, ef, valid) = match forest {
        Some(path) => {
            let ef = read_ef(path)?;
            let verdict = match mode {
                Mode::Hd => validate_ef(&i, &ef)?,
                Mode::Shd => validate_strict_ef(&i, &ef)?,
            };
            if !verdict.is_ok() {
                let lines: Vec<String> = verdict.violations.iter().map(ToString::to_string).collect();
                let text = format!("invalid\n{}\n", lines.join("\n"));
                let tsv: String = lines.iter().map(|l| format!("violation\t{l}\n")).collect();
                return Ok(Report::new(EXIT_FAILED, text, tsv, json!({"valid": false, "violations": lines})));
            }
            (ef.height(), ef, true)
        }
        None => {
            let w = match mode {
                Mode::Hd => hd_exact_with(&i, budget)?,
                Mode::Shd => shd_exact_with(&i, budget)?,
            };
            (w.depth, w.forest, true)
        }
    };
    let ef = if make_strict { strictify(&i, &ef)? } else { ef };
    let text = format!("{depth}\n{}", write_ef(&ef));
    let tsv = format!("depth\t{depth}\nheight\t{}\n", ef.height());
    let json = json!({"depth": depth, "valid": valid, "forest": write_ef(&ef)});
    Ok(Report::new(EXIT_OK, text, tsv, json))
}

fn hom(sem: SemanticsArg, source: &Path, target: &Path) -> Result<Report> {
    let (s, t) = (read_hg(source)?.to_incidence(), read_hg(target)?.to_incidence());
    let n = count_homs(&s, &t, sem.into())?;
    Ok(Report::new(EXIT_OK, format!("{n}\n"), format!("count\t{n}\n"), json!({"count": n.to_string()})))
}

fn homvec(class: &ClassArgs, target: &Path, budget: &Budget) -> Result<Report> {
    let ct = class.truncation();
    let sources = ct.sources_with(budget)?;
    let v = hom_vector_over(&sources, ct.kind.semantics(), &read_hg(target)?.to_incidence())?;
    let text = format!("# {ct}: {} sources\n{}", v.len(), v.to_tsv());
    let entries: Vec<Value> = v.entries.iter().map(|(k, c)| json!({"key": k.to_string(), "count": c.to_string()})).collect();
    Ok(Report::new(EXIT_OK, text, v.to_tsv(), json!({"class": ct.to_string(), "entries": entries})))
}

fn indist(class: &ClassArgs, left: &Path, right: &Path, budget: &Budget) -> Result<Report> {
    let ct = class.truncation();
    let sources = ct.sources_with(budget)?;
    let (a, b) = (read_hg(left)?.to_incidence(), read_hg(right)?.to_incidence());
    Ok(match indistinguishable_over(&sources, ct.kind.semantics(), &a, &b)? {
        Indistinguishability::Equal { sources } => Report::new(
            EXIT_OK,
            format!("equal up to bounds ({ct}, {sources} sources)\n"),
            format!("equal\t{ct}\t{sources}\n"),
            json!({"verdict": "equal", "class": ct.to_string(), "sources": sources}),
        ),
        Indistinguishability::Distinguished { source, key, left, right } => {
            let witness = write_hg(&source.to_hypergraph());
            Report::new(
                EXIT_FAILED,
                format!("distinguished ({ct}): {left} vs {right} homomorphisms from\n{witness}"),
                format!("distinguished\t{ct}\t{key}\t{left}\t{right}\n"),
                json!({"verdict": "distinguished", "class": ct.to_string(), "key": key.to_string(),
                       "left": left.to_string(), "right": right.to_string(), "witness": witness}),
            )
        }
    })
}

fn gli(k: Option<usize>, forest_out: Option<&Path>, script: &Path) -> Result<Report> {
    let dir = script.parent().unwrap_or(Path::new(".")).to_path_buf();
    let parsed = parse_script(&std::fs::read_to_string(script)?)?;
    let steps = replay(&parsed, k, |f| read_hg(&dir.join(f)))?;
    let (mut text, mut tsv, mut rows) = (String::new(), String::new(), Vec::new());
    for s in &steps {
        let l = s.derivation.result();
        let (reds, blues) = (l.skeleton().num_reds(), l.skeleton().num_blues());
        let _ = writeln!(text, "{:<8} line {:<3} cost {}  |V| {reds} |E| {blues}", s.name, s.line, s.cost);
        let _ = writeln!(tsv, "{}\t{}\t{}\t{reds}\t{blues}", s.name, s.line, s.cost);
        rows.push(json!({"name": s.name, "line": s.line, "cost": s.cost, "vertices": reds, "hyperedges": blues}));
    }
    if let (Some(path), Some(last)) = (forest_out, steps.last()) {
        let skeleton = last.derivation.result().skeleton();
        let ef = extract_forest(&last.derivation).to_elimination_forest(skeleton)?;
        std::fs::write(path, write_ef(&ef))?;
    }
    Ok(Report::new(EXIT_OK, text, tsv, json!({"steps": rows})))
}

fn assignments(raw: &[String], what: &str) -> Result<Vec<(usize, String)>> {
    raw.iter()
        .map(|a| {
            let (i, id) = a.split_once('=').ok_or_else(|| Error::InvalidArgument(format!("{what} assignment `{a}` is not `i=id`")))?;
            let i = i.trim().parse().map_err(|_| Error::InvalidArgument(format!("`{i}` is not a variable index")))?;
            Ok((i, id.trim().to_string()))
        })
        .collect()
}

fn gck(action: &GckAction) -> Result<Report> {
    match action {
        GckAction::Eval { k, formula, model, nu_v, nu_e } => {
            let f = parse(&std::fs::read_to_string(formula)?)?;
            let bad = wellformed_gck(&f, *k);
            if !bad.is_empty() {
                let msg: Vec<String> = bad.iter().map(ToString::to_string).collect();
                return Err(Error::InvalidArgument(format!("formula is not in GC with {k} edge variables: {}", msg.join("; "))));
            }
            let g = read_hg(model)?.to_incidence();
            let (nv, ne) = (assignments(nu_v, "vertex")?, assignments(nu_e, "edge")?);
            let nv: Vec<(usize, &str)> = nv.iter().map(|(i, s)| (*i, s.as_str())).collect();
            let ne: Vec<(usize, &str)> = ne.iter().map(|(i, s)| (*i, s.as_str())).collect();
            let value = eval(&f, &Interpretation::with_ids(&g, &nv, &ne)?)?;
            Ok(Report::new(EXIT_OK, format!("{value}\n"), format!("value\t{value}\n"), json!({"value": value})))
        }
        GckAction::Check { k, formula } => {
            let f = parse(&std::fs::read_to_string(formula)?)?;
            let bad: Vec<String> = wellformed_gck(&f, *k).iter().map(ToString::to_string).collect();
            let rgc = match is_rgc(&f, *k) {
                Ok(_) => "yes".to_string(),
                Err(why) => format!("no ({why})"),
            };
            let ok = bad.is_empty();
            let mut text = format!(
                "well-formed: {}\nguard depth: {}\nsize: {}\nsentence: {}\nrestricted: {rgc}\n",
                if ok { "yes" } else { "no" },
                f.guard_depth(),
                f.size(),
                f.is_sentence()
            );
            bad.iter().for_each(|b| text.push_str(&format!("  {b}\n")));
            let tsv = format!(
                "wellformed\t{ok}\nguard_depth\t{}\nsize\t{}\nsentence\t{}\nrestricted\t{rgc}\n",
                f.guard_depth(),
                f.size(),
                f.is_sentence()
            );
            let json = json!({"wellformed": ok, "violations": bad, "guard_depth": f.guard_depth(), "size": f.size(),
                              "sentence": f.is_sentence(), "restricted": rgc});
            Ok(Report::new(if ok { EXIT_OK } else { EXIT_FAILED }, text, tsv, json))
        }
        GckAction::Pool { k, depth, size, seed, count } => {
            let pool = sentence_pool(*k, *depth, *size, *seed, *count);
            let lines: Vec<String> = pool.iter().map(|f| f.render()).collect();
            let text: String = lines.iter().map(|l| format!("{l}\n")).collect();
            Ok(Report::new(EXIT_OK, text.clone(), text, json!({"sentences": lines})))
        }
    }
}

fn family(name: &str, k: usize, n: usize, attach: Option<usize>) -> Result<FamilySpec> {
    Ok(match name {
        "g" => FamilySpec::ExampleG,
        "h" => FamilySpec::ExampleH,
        "path" => FamilySpec::Path(n),
        "skew" => FamilySpec::Skew(k),
        "skew-prime" => FamilySpec::SkewPrime(k),
        "skew-dist" => FamilySpec::SkewDistinguisher(k),
        "skew-prime-dist" => FamilySpec::SkewPrimeDistinguisher { k, attach },
        other => return Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
    })
}

fn families(action: &FamiliesAction, budget: &Budget) -> Result<Report> {
    match action {
        FamiliesAction::Emit { name, k, n, attach, out } => {
            let graphs = family(name, *k, *n, *attach)?.build()?;
            if !out.is_empty() && out.len() != graphs.len() {
                return Err(Error::InvalidArgument(format!("`{name}` yields {} file(s) but {} were given", graphs.len(), out.len())));
            }
            let texts: Vec<String> = graphs.iter().map(write_hg).collect();
            for (path, t) in out.iter().zip(&texts) {
                std::fs::write(path, t)?;
            }
            let text = if out.is_empty() { texts.join("\n") } else { out.iter().map(|p| format!("wrote {}\n", p.display())).collect() };
            Ok(Report::new(EXIT_OK, text.clone(), text, json!({"graphs": texts})))
        }
        FamiliesAction::Enumerate { max_edges, max_vertices, connected, list } => {
            let b = EnumerationBounds::new(*max_edges, *max_vertices, *connected);
            let all = enumerate_hypergraphs_with(&b, budget)?;
            let mut text = format!("{} hypergraphs with <= {max_edges} hyperedges on <= {max_vertices} vertices\n", all.len());
            let texts: Vec<String> = all.iter().map(write_hg).collect();
            if *list {
                for (n, t) in texts.iter().enumerate() {
                    let _ = write!(text, "\n# {}\n{t}", n + 1);
                }
            }
            let tsv = format!("count\t{}\n", all.len());
            let json = if *list { json!({"count": all.len(), "graphs": texts}) } else { json!({"count": all.len()}) };
            Ok(Report::new(EXIT_OK, text, tsv, json))
        }
    }
}

fn run_repro(check: &str) -> Result<Report> {
    let reports = repro::repro(check)?;
    let (mut text, mut tsv, mut rows) = (String::new(), String::new(), Vec::new());
    for r in &reports {
        let _ = writeln!(text, "[{}] {}", r.check, if r.passed() { "pass" } else { "FAIL" });
        for row in &r.rows {
            let mark = if row.pass { "pass" } else { "FAIL" };
            let _ = writeln!(text, "  {mark}  {}: {}\n        expected {} / computed {}", row.item, row.claim, row.expected, row.computed);
            rows.push(json!({"check": r.check, "item": row.item, "claim": row.claim, "expected": row.expected,
                             "computed": row.computed, "pass": row.pass}));
        }
        tsv.push_str(&r.to_tsv());
    }
    let ok = reports.iter().all(|r| r.passed());
    Ok(Report::new(if ok { EXIT_OK } else { EXIT_FAILED }, text, tsv, json!({"pass": ok, "rows": rows})))
}
