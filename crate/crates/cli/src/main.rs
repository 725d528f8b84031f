//! `prostd`: command-line access to formal group laws, standard groups,
//! word maps, transversal extensions and the conciseness probe.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use prostd_core::atlas::{
    action_defect, builtin_extension, coset_word_series, marginality_check, validate_transversal, BuiltinExtension,
    TransversalData, ValidationMode, DEFAULT_SEED,
};
use prostd_core::fgl::{formal_inverse, verify_fgl, BuiltinLaw, FormalGroupLaw};
use prostd_core::group::{FiniteGroup, Group};
use prostd_core::json::{self as pj, RawLaw};
use prostd_core::specialise::{concision_probe, grid, LevelStatus};
use prostd_core::stdgrp::{GroupElement, StandardGroup};
use prostd_core::words::{
    block_var_name, eval_word, marginal_subgroup, parse_word, verbal_subgroup, word_image, word_series,
};
use prostd_core::{enum_bound, CoeffMap, Error, RingSpec, Specialisation};

#[derive(Parser, Debug)]
#[command(name = "prostd", version, about = "Formal group laws, standard groups and word maps")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Formal group laws.
    #[command(subcommand)]
    Fgl(FglCmd),
    /// Standard groups and their finite quotients.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Word maps.
    #[command(subcommand)]
    Word(WordCmd),
    /// Transversal extensions `T x L`.
    #[command(subcommand)]
    Atlas(AtlasCmd),
    /// Search for the least l with w^l trivial on a transversal extension.
    Probe(ProbeArgs),
}

#[derive(Args, Debug, Clone)]
struct LawArgs {
    /// Builtin law (additive, additive:D, multiplicative, heisenberg) or a law JSON file.
    #[arg(long, default_value = "additive")]
    law: String,
    /// Coefficient ring for builtin laws: padic:p:K, eqchar:p:K or nested:m:Dt:<base>.
    #[arg(long, default_value = "padic:2:5")]
    ring: String,
    /// Truncation degree D for builtin laws.
    #[arg(long, default_value_t = 5)]
    degree: u32,
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    #[command(flatten)]
    law: LawArgs,
    /// Level N of the standard group (m^N)^d.
    #[arg(long, default_value_t = 1)]
    level: u32,
    /// Group JSON file; overrides --law and --level.
    #[arg(long)]
    group: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct ExtensionArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Builtin extension (c2-trivial, c2-inverse, c2-sign:+-..) or an extension JSON file.
    #[arg(long, default_value = "c2-trivial")]
    extension: String,
}

#[derive(Subcommand, Debug)]
enum FglCmd {
    /// Check the unit and associativity identities.
    Check {
        /// Law JSON file; defaults to --law.
        file: Option<PathBuf>,
        #[command(flatten)]
        law: LawArgs,
    },
    /// Compute the formal inverse I with F(X, I(X)) = 0.
    Inverse {
        file: Option<PathBuf>,
        #[command(flatten)]
        law: LawArgs,
    },
    /// Apply a coefficient map to the law.
    Transport {
        file: Option<PathBuf>,
        #[command(flatten)]
        law: LawArgs,
        /// Specialisation point a1,..,am (nested rings).
        #[arg(long, conflicts_with = "reduce")]
        point: Option<String>,
        /// Reduce to a coarser ring of the same kind.
        #[arg(long)]
        reduce: Option<String>,
    },
    /// Print the law as canonical JSON.
    Show {
        file: Option<PathBuf>,
        #[command(flatten)]
        law: LawArgs,
        /// Include the formal inverse.
        #[arg(long)]
        inverse: bool,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    /// Product of the given elements, left to right.
    Mul {
        #[command(flatten)]
        group: GroupArgs,
        /// Element as comma-separated coordinates; repeat for each factor.
        #[arg(short, long = "element", required = true)]
        elements: Vec<String>,
    },
    /// Inverse of an element.
    Inv {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated coordinates.
        #[arg(short, long = "element")]
        element: String,
    },
    /// Integer power of an element.
    Pow {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated coordinates.
        #[arg(short, long = "element")]
        element: String,
        /// Exponent, possibly negative.
        #[arg(long, allow_hyphen_values = true)]
        exp: i64,
    },
    /// Conjugation series C_g of x -> g^-1 x g.
    Conj {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated coordinates.
        #[arg(short, long = "element")]
        element: String,
    },
    /// The finite quotient (m^N / m^M)^d.
    Quotient {
        #[command(flatten)]
        group: GroupArgs,
        /// Quotient level M > N.
        #[arg(long = "quotient-level", short = 'M')]
        level_m: u32,
        /// List the elements.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand, Debug)]
enum WordCmd {
    /// Evaluate a word at group elements.
    Eval {
        #[command(flatten)]
        group: GroupArgs,
        /// Word, e.g. "x1^3 [x2,x1]^2".
        #[arg(long)]
        word: String,
        /// One element per variable, comma-separated coordinates.
        #[arg(short, long = "element", required = true)]
        elements: Vec<String>,
    },
    /// The word map as a series tuple in d*k variables.
    Series {
        #[command(flatten)]
        law: LawArgs,
        /// Word, e.g. "x1^3 [x2,x1]^2".
        #[arg(long)]
        word: String,
    },
    /// Word values and verbal subgroup in a finite quotient.
    Image {
        #[command(flatten)]
        group: GroupArgs,
        /// Word, e.g. "x1^3 [x2,x1]^2".
        #[arg(long)]
        word: String,
        /// Quotient level M > N.
        #[arg(long = "quotient-level", short = 'M')]
        level_m: u32,
        /// Also compute the marginal subgroup.
        #[arg(long)]
        marginal: bool,
        /// List the word values.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand, Debug)]
enum AtlasCmd {
    /// Check the group axioms of T x L pointwise.
    Validate {
        #[command(flatten)]
        ext: ExtensionArgs,
        /// Enumerate all triples of the quotient at level M.
        #[arg(long, conflicts_with = "samples")]
        exhaustive: Option<u32>,
        /// Check this many random triples at full precision.
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for --samples.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Word series on a product of cosets.
    Wordmap {
        #[command(flatten)]
        ext: ExtensionArgs,
        /// Word, e.g. "x1^3 [x2,x1]^2".
        #[arg(long)]
        word: String,
        /// Comma-separated coset names, one per variable.
        #[arg(long)]
        cosets: String,
    },
    /// Constancy of the word map on every tuple of cosets.
    Marginal {
        #[command(flatten)]
        ext: ExtensionArgs,
        /// Word, e.g. "x1^3 [x2,x1]^2".
        #[arg(long)]
        word: String,
    },
    /// Print the extension as canonical JSON.
    Show {
        #[command(flatten)]
        ext: ExtensionArgs,
    },
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[command(flatten)]
    ext: ExtensionArgs,
    /// Word, e.g. "x1^2".
    #[arg(long)]
    word: String,
    /// Largest power l tried.
    #[arg(long, default_value_t = 4)]
    lmax: u32,
    /// Specialisation grid: p^(depth-1) points per t-variable.
    #[arg(long, default_value_t = 2)]
    grid_depth: u32,
}

/// A failed check: printed normally, exit code 1.
struct Outcome {
    value: Value,
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(value: Value, text: String) -> Self {
        Outcome { value, text, ok: true }
    }
}

fn load_raw(file: &Option<PathBuf>, args: &LawArgs) -> Result<RawLaw, Error> {
    if let Some(path) = file {
        return pj::load_raw_law(path);
    }
    match args.law.parse::<BuiltinLaw>() {
        Ok(name) => {
            let spec = pj::parse_ring_shorthand(&args.ring)?;
            Ok(RawLaw {
                law: name.series(&spec, args.degree),
                inverse: None,
            })
        }
        Err(e) => {
            let path = Path::new(&args.law);
            if path.exists() {
                pj::load_raw_law(path)
            } else {
                Err(e)
            }
        }
    }
}

fn load_law(file: &Option<PathBuf>, args: &LawArgs) -> Result<FormalGroupLaw, Error> {
    load_raw(file, args)?.into_law()
}

fn load_group(args: &GroupArgs) -> Result<StandardGroup, Error> {
    match &args.group {
        Some(path) => pj::load_group(path),
        None => StandardGroup::new(load_law(&None, &args.law)?, args.level),
    }
}

fn load_extension(args: &ExtensionArgs) -> Result<TransversalData, Error> {
    match args.extension.parse::<BuiltinExtension>() {
        Ok(ext) => builtin_extension(&ext, load_group(&args.group)?),
        Err(e) => {
            let path = Path::new(&args.extension);
            if path.exists() {
                pj::load_extension(path)
            } else {
                Err(e)
            }
        }
    }
}

fn parse_element(g: &StandardGroup, s: &str) -> Result<GroupElement, Error> {
    let coords: Vec<&str> = s.split(',').collect();
    g.parse_element(&coords)
}

fn law_names(d: usize) -> impl Fn(usize) -> String {
    move |v| block_var_name(d, v)
}

fn render_elem(g: &StandardGroup, x: &GroupElement) -> String {
    x.render(g.spec())
}

fn fgl_cmd(cmd: &FglCmd) -> Result<Outcome, Error> {
    match cmd {
        FglCmd::Check { file, law } => {
            let raw = load_raw(file, law)?;
            let report = verify_fgl(&raw.law)?;
            let mut lines: Vec<String> = report
                .checks
                .iter()
                .map(|c| match &c.witness {
                    None => format!("{}: pass", c.axiom),
                    Some(w) => format!(
                        "{}: fail at component {}, monomial {}",
                        c.axiom,
                        w.component + 1,
                        w.monomial.render(&law_names(raw.law.len()))
                    ),
                })
                .collect();
            lines.push(format!("law: {}", if report.passed() { "pass" } else { "fail" }));
            Ok(Outcome {
                value: pj::fgl_report_to_json(&report, raw.law.len()),
                text: lines.join("\n"),
                ok: report.passed(),
            })
        }
        FglCmd::Inverse { file, law } => {
            let raw = load_raw(file, law)?;
            let report = verify_fgl(&raw.law)?;
            if let Some(f) = report.first_failure() {
                return Err(Error::NotALaw(format!("{} fails", f.axiom)));
            }
            let inv = formal_inverse(&raw.law)?;
            let d = inv.len();
            Ok(Outcome::ok(
                json!({ "I": pj::tuple_to_json(&inv) }),
                format!("I = {}", inv.render(&law_names(d))),
            ))
        }
        FglCmd::Transport {
            file,
            law,
            point,
            reduce,
        } => {
            let f = load_law(file, law)?;
            let map = match (point, reduce) {
                (Some(p), None) => {
                    let entries: Vec<&str> = p.split(',').collect();
                    CoeffMap::Specialise(Specialisation::parse(f.spec(), &entries)?)
                }
                (None, Some(r)) => CoeffMap::Reduce(pj::parse_ring_shorthand(r)?),
                _ => CoeffMap::Identity,
            };
            let moved = f.transport(&map)?;
            let d = moved.dim();
            Ok(Outcome::ok(
                pj::fgl_to_json(&moved, false),
                format!("ring: {}\nF = {}", moved.spec(), moved.law().render(&law_names(d))),
            ))
        }
        FglCmd::Show { file, law, inverse } => {
            let f = load_law(file, law)?;
            let d = f.dim();
            let mut text = format!(
                "ring: {}\nD: {}\nF = {}",
                f.spec(),
                f.cutoff(),
                f.law().render(&law_names(d))
            );
            if *inverse {
                text.push_str(&format!("\nI = {}", f.inverse().render(&law_names(d))));
            }
            Ok(Outcome::ok(pj::fgl_to_json(&f, *inverse), text))
        }
    }
}

fn group_cmd(cmd: &GroupCmd) -> Result<Outcome, Error> {
    match cmd {
        GroupCmd::Mul { group, elements } => {
            let g = load_group(group)?;
            let xs = elements
                .iter()
                .map(|s| parse_element(&g, s))
                .collect::<Result<Vec<_>, _>>()?;
            let mut acc = g.identity();
            for x in &xs {
                acc = g.g_mul(&acc, x)?;
            }
            Ok(Outcome::ok(pj::element_to_json(&g, &acc), render_elem(&g, &acc)))
        }
        GroupCmd::Inv { group, element } => {
            let g = load_group(group)?;
            let y = g.g_inv(&parse_element(&g, element)?)?;
            Ok(Outcome::ok(pj::element_to_json(&g, &y), render_elem(&g, &y)))
        }
        GroupCmd::Pow { group, element, exp } => {
            let g = load_group(group)?;
            let y = g.g_pow(&parse_element(&g, element)?, *exp)?;
            Ok(Outcome::ok(pj::element_to_json(&g, &y), render_elem(&g, &y)))
        }
        GroupCmd::Conj { group, element } => {
            let g = load_group(group)?;
            let c = g.conj_series(&parse_element(&g, element)?)?;
            Ok(Outcome::ok(
                json!({ "C": pj::tuple_to_json(&c) }),
                format!("C = {}", c.render(&law_names(g.dim()))),
            ))
        }
        GroupCmd::Quotient { group, level_m, list } => {
            let g = load_group(group)?;
            let q = g.quotient(*level_m, enum_bound())?;
            let mut v = json!({ "N": g.level(), "M": level_m, "order": q.order() });
            let mut text = format!("order: {}", q.order());
            if *list {
                v["elements"] = q.elements().iter().map(|x| pj::element_to_json(&g, x)).collect();
                for x in q.elements() {
                    text.push('\n');
                    text.push_str(&render_elem(&g, x));
                }
            }
            Ok(Outcome::ok(v, text))
        }
    }
}

fn word_cmd(cmd: &WordCmd) -> Result<Outcome, Error> {
    match cmd {
        WordCmd::Eval { group, word, elements } => {
            let g = load_group(group)?;
            let w = parse_word(word)?;
            let xs = elements
                .iter()
                .map(|s| parse_element(&g, s))
                .collect::<Result<Vec<_>, _>>()?;
            let y = eval_word(&w, &g, &xs)?;
            Ok(Outcome::ok(pj::element_to_json(&g, &y), render_elem(&g, &y)))
        }
        WordCmd::Series { law, word } => {
            let f = load_law(&None, law)?;
            let w = parse_word(word)?;
            let ws = word_series(&w, &f)?;
            let d = f.dim();
            let names: Vec<String> = (0..d * w.k()).map(|v| block_var_name(d, v)).collect();
            Ok(Outcome::ok(
                json!({
                    "word": w.to_string(),
                    "variables": names,
                    "series": pj::tuple_to_json(&ws.series),
                }),
                format!("W = {}", ws.series.render(&law_names(d))),
            ))
        }
        WordCmd::Image {
            group,
            word,
            level_m,
            marginal,
            list,
        } => {
            let g = load_group(group)?;
            let w = parse_word(word)?;
            let bound = enum_bound();
            let q = g.quotient(*level_m, bound)?;
            let image = word_image(&w, &q, bound)?;
            let verbal = verbal_subgroup(&w, &q, bound)?;
            let mut v = json!({
                "word": w.to_string(),
                "M": level_m,
                "order": q.order(),
                "image_size": image.len(),
                "verbal_size": verbal.len(),
            });
            let mut text = format!(
                "order: {}\nimage size: {}\nverbal subgroup size: {}",
                q.order(),
                image.len(),
                verbal.len()
            );
            if *marginal {
                let m = marginal_subgroup(&w, &q, bound)?;
                v["marginal_size"] = json!(m.len());
                text.push_str(&format!("\nmarginal subgroup size: {}", m.len()));
            }
            if *list {
                v["image"] = image.iter().map(|x| pj::element_to_json(&g, x)).collect();
                for x in &image {
                    text.push('\n');
                    text.push_str(&render_elem(&g, x));
                }
            }
            Ok(Outcome::ok(v, text))
        }
    }
}

fn atlas_cmd(cmd: &AtlasCmd) -> Result<Outcome, Error> {
    match cmd {
        AtlasCmd::Validate {
            ext,
            exhaustive,
            samples,
            seed,
        } => {
            let data = load_extension(ext)?;
            let bound = enum_bound();
            if data.is_split() {
                if let Some(msg) = action_defect(&data)? {
                    return Ok(Outcome {
                        value: json!({ "passed": false, "failure": { "kind": "action", "witness": msg } }),
                        text: format!("action: fail: {msg}"),
                        ok: false,
                    });
                }
            }
            let mode = match (exhaustive, samples) {
                (Some(m), _) => ValidationMode::Exhaustive { level_m: *m },
                (None, Some(n)) => ValidationMode::Sampled {
                    samples: *n,
                    seed: *seed,
                },
                (None, None) => match ValidationMode::default_for(&data, bound) {
                    ValidationMode::Sampled { samples, .. } => ValidationMode::Sampled { samples, seed: *seed },
                    m => m,
                },
            };
            let report = validate_transversal(&data, mode, bound)?;
            let v = pj::validation_to_json(&data, &report);
            let mode_text = match mode {
                ValidationMode::Exhaustive { level_m } => format!("exhaustive, M = {level_m}"),
                ValidationMode::Sampled { samples, seed } => format!("{samples} samples, seed {seed}"),
            };
            let mut text = format!("mode: {mode_text}\nelements: {}", report.elements);
            match &report.failure {
                None => text.push_str("\nvalidation: pass"),
                Some(_) => text.push_str(&format!("\nvalidation: fail\nfailure: {}", v["failure"])),
            }
            Ok(Outcome {
                value: v,
                text,
                ok: report.passed(),
            })
        }
        AtlasCmd::Wordmap { ext, word, cosets } => {
            let data = load_extension(ext)?;
            let w = parse_word(word)?;
            let t = data.transversal();
            let cs = cosets
                .split(',')
                .map(|c| t.index_of(c))
                .collect::<Result<Vec<_>, _>>()?;
            let cws = coset_word_series(&w, &data, &cs)?;
            let d = data.group().dim();
            Ok(Outcome::ok(
                json!({
                    "word": w.to_string(),
                    "cosets": cs.iter().map(|&c| t.name(c)).collect::<Vec<_>>(),
                    "target": t.name(cws.target),
                    "series": pj::tuple_to_json(&cws.series.series),
                }),
                format!(
                    "target coset: {}\nW = {}",
                    t.name(cws.target),
                    cws.series.series.render(&law_names(d))
                ),
            ))
        }
        AtlasCmd::Marginal { ext, word } => {
            let data = load_extension(ext)?;
            let w = parse_word(word)?;
            let m = marginality_check(&w, &data, enum_bound())?;
            let v = pj::marginality_to_json(&data, &w.to_string(), &m);
            let text = marginal_text(&v);
            Ok(Outcome::ok(v, text))
        }
        AtlasCmd::Show { ext } => {
            let data = load_extension(ext)?;
            let v = pj::extension_to_json(&data);
            let t = data.transversal();
            let d = data.group().dim();
            let mut text = format!(
                "L: dimension {}, level {}, ring {}\nT: {}",
                d,
                data.group().level(),
                data.group().spec(),
                t.names().join(" ")
            );
            for (i, c) in data.conj().iter().enumerate() {
                text.push_str(&format!("\nC_{} = {}", t.name(i), c.render(&law_names(d))));
            }
            Ok(Outcome::ok(v, text))
        }
    }
}

fn marginal_text(v: &Value) -> String {
    let coset_list = |x: &Value| -> String {
        x.as_array()
            .map(|a| a.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(","))
            .unwrap_or_default()
    };
    if v["status"] == "constant" {
        let mut lines = vec![format!(
            "all coset tuples constant; |w{{H}}| <= {}",
            v["image_bound"].as_str().unwrap_or("")
        )];
        for e in v["entries"].as_array().into_iter().flatten() {
            lines.push(format!(
                "({}) -> coset {}, constant ({})",
                coset_list(&e["cosets"]),
                e["target"].as_str().unwrap_or(""),
                coset_list(&e["constant"])
            ));
        }
        lines.join("\n")
    } else {
        let w = &v["witness"];
        format!(
            "non-constant on cosets ({}): component {}, monomial {}, coefficient {}",
            coset_list(&w["cosets"]),
            w["component"],
            w["monomial"].as_str().unwrap_or(""),
            w["coefficient"].as_str().unwrap_or("")
        )
    }
}

fn probe_cmd(args: &ProbeArgs) -> Result<Outcome, Error> {
    let data = load_extension(&args.ext)?;
    let w = parse_word(&args.word)?;
    let spec: &RingSpec = data.group().spec();
    let base = spec
        .base()
        .ok_or_else(|| Error::InvalidSpec(format!("the probe needs a nested coefficient ring, got {spec}")))?;
    let bound = enum_bound();
    let pts = grid(base, spec.t_vars(), args.grid_depth, bound)?;
    let report = concision_probe(&w, &data, args.lmax, &pts, bound)?;
    let v = pj::probe_to_json(&data, &report);
    let mut lines = vec![format!("word: {}", report.word), format!("grid points: {}", pts.len())];
    for lv in &report.levels {
        lines.push(match &lv.status {
            LevelStatus::NonConstant(wit) => format!(
                "l = {}: non-constant on cosets ({}), monomial {}",
                lv.l,
                wit.cosets
                    .iter()
                    .map(|&c| data.transversal().name(c))
                    .collect::<Vec<_>>()
                    .join(","),
                wit.monomial
            ),
            LevelStatus::Constant(c) => format!(
                "l = {}: constant, {}{}, {} of {} grid points in m_l, coherent: {}",
                lv.l,
                c.class,
                if c.is_law() { ", law" } else { "" },
                c.members.len(),
                pts.len(),
                c.coherent.iter().all(|&b| b)
            ),
        });
    }
    lines.push(match report.min_l {
        Some(l) => format!("min l: {l}"),
        None => format!("min l: none <= {}", report.lmax),
    });
    Ok(Outcome::ok(v, lines.join("\n")))
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidSpec(_) => "invalid-spec",
        Error::SpecMismatch { .. } => "spec-mismatch",
        Error::Shape(_) => "shape",
        Error::NonZeroConstant(_) => "non-zero-constant",
        Error::OutsideMaximalIdeal(_) => "outside-maximal-ideal",
        Error::Parse { .. } => "parse",
        Error::BoundExceeded { .. } => "bound-exceeded",
        Error::ExactRepresentationRequired(_) => "exact-representation-required",
        Error::Unknown(_) => "unknown",
        Error::Transversal(_) => "transversal",
        Error::NotALaw(_) => "not-a-law",
        Error::Map(_) => "map",
        Error::Grid(_) => "grid",
        Error::Invalid(_) => "invalid",
        Error::Io(_) => "io",
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotALaw(_) | Error::Transversal(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fgl(c) => fgl_cmd(c),
        Command::Group(c) => group_cmd(c),
        Command::Word(c) => word_cmd(c),
        Command::Atlas(c) => atlas_cmd(c),
        Command::Probe(a) => probe_cmd(a),
    };
    match result {
        Ok(out) => {
            match cli.format {
                Format::Json => print!("{}", pj::to_canonical_string(&out.value)),
                Format::Text => println!("{}", out.text),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            match cli.format {
                Format::Json => eprintln!("{}", json!({ "error": { "kind": error_kind(&e), "message": msg } })),
                Format::Text => eprintln!("error[{}]: {msg}", error_kind(&e)),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
