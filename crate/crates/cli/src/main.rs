mod dot;
mod schema;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use npc_core::arith::ScalarGrammar;
use npc_core::blocks::{classify_element, kernel_torsion_check, simultaneous_blocks, split_direct_factor, theta};
use npc_core::building::{
    ball, classify_isometry, family_models, stabilizer_elements, standard_product_point,
    IsometryClass, LatticeClass, LocalModel,
};
use npc_core::distortion::{
    abelian_distortion, estimate_tau, uniform_lower_bound_scan, AbelianEmbedding, Caps, CayleyBall,
};
use npc_core::error::{Error, Result};
use npc_core::group::parse_word;
use npc_core::valuations::{build_valuation_family, enumerate_bounded, Val1};

/// Exact computations with finitely generated matrix groups: valuation
/// families, tree actions with stabilizer bounds, commuting block
/// decompositions, and word-metric distortion estimators.
#[derive(Parser)]
#[command(name = "npc", version, disable_help_subcommand = true)]
struct Cli {
    /// Seed for randomized routines (NPC_SEED overrides)
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate ring elements with all family valuations >= m
    Valuate(EnumArgs),
    /// Alias of `valuate`
    Enumerate(EnumArgs),
    /// Tree balls, isometry classification, product-point stabilizers
    Building {
        #[command(subcommand)]
        cmd: BuildingCmd,
    },
    /// Simultaneous block decomposition and the theta table of a family
    Decompose {
        /// group JSON path or fixture:<name>
        #[arg(long)]
        group: String,
        /// exponent radius for the kernel sample
        #[arg(long, default_value_t = 3)]
        word_radius: i64,
        /// cap for exact order computation
        #[arg(long, default_value_t = 1_000_000)]
        order_cap: u64,
    },
    /// Order/unipotency class of a single matrix
    Classify {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 1_000_000)]
        order_cap: u64,
    },
    /// Direct-factor split of an abelian presentation
    Split {
        #[arg(long)]
        presentation: String,
    },
    /// Word-metric estimators
    Distortion {
        #[command(subcommand)]
        cmd: DistortionCmd,
    },
    /// Shipped example groups
    Fixtures {
        #[command(subcommand)]
        cmd: FixturesCmd,
    },
}

#[derive(Args)]
struct EnumArgs {
    /// ring description JSON
    #[arg(long)]
    ring: String,
    /// lower bound for every valuation in the family
    #[arg(long)]
    m: i64,
    /// print the elements (default)
    #[arg(long, conflicts_with = "count")]
    list: bool,
    /// print only the count
    #[arg(long)]
    count: bool,
    /// candidate cap
    #[arg(long, default_value_t = 1_000_000)]
    cap: usize,
}

#[derive(Subcommand)]
enum BuildingCmd {
    /// Ball of the tree for SL(2) at one valuation
    Ball {
        /// base characteristic p
        #[arg(long = "char")]
        characteristic: u64,
        /// valuation: a monic irreducible polynomial in t, or "mu0"
        #[arg(long)]
        val: String,
        #[arg(long)]
        radius: u64,
        /// write DOT here ("-" for stdout)
        #[arg(long)]
        dot: Option<String>,
    },
    /// Elliptic/hyperbolic certificate for a word in a group
    Classify {
        #[arg(long)]
        group: String,
        /// word as generator indices, e.g. "0 1 0"
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "t")]
        val: String,
        #[arg(long, default_value_t = 6)]
        radius: u64,
        /// retry with doubled radius this many times on an inconclusive search
        #[arg(long, default_value_t = 2)]
        retries: u32,
    },
    /// Finite stabilizer of the standard product point over a ring's family
    Stabilizer {
        #[arg(long)]
        group: String,
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum DistortionCmd {
    /// Translation-length estimate for a word
    Tau {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
        #[arg(long = "N", default_value_t = 16)]
        n: u32,
        /// BFS radius cap
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
    /// Distortion table of an abelian subgroup over an exponent box
    Abelian {
        #[arg(long)]
        group: String,
        #[arg(long)]
        basis: String,
        #[arg(long = "box")]
        box_radius: i64,
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
    /// Minimal tau estimate over a word ball
    Scan {
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: u64,
        #[arg(long = "N", default_value_t = 16)]
        n: u32,
        #[arg(long)]
        cap: Option<u64>,
        /// write the scanned Cayley ball as DOT ("-" for stdout)
        #[arg(long)]
        dot: Option<String>,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    /// List fixture names and descriptions
    List,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // usage problems exit 1; --help/--version exit 0
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let seed = std::env::var("NPC_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .or(cli.seed)
        .unwrap_or(npc_core::DEFAULT_SEED);
    match run(cli.cmd, seed) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse(_) | Error::Domain(_) => 2,
                Error::CapExceeded(_) | Error::Inconclusive(_) => 3,
                Error::Unsupported(_) => 4,
            };
            std::process::exit(code);
        }
    }
}

fn run(cmd: Cmd, seed: u64) -> Result<()> {
    match cmd {
        Cmd::Valuate(args) | Cmd::Enumerate(args) => cmd_enumerate(args),
        Cmd::Building { cmd } => match cmd {
            BuildingCmd::Ball { characteristic, val, radius, dot } => {
                cmd_ball(characteristic, &val, radius, dot.as_deref(), seed)
            }
            BuildingCmd::Classify { group, word, val, radius, retries } => {
                cmd_building_classify(&group, &word, &val, radius, retries, seed)
            }
            BuildingCmd::Stabilizer { group, ring, cap } => cmd_stabilizer(&group, &ring, cap),
        },
        Cmd::Decompose { group, word_radius, order_cap } => {
            cmd_decompose(&group, word_radius, order_cap, seed)
        }
        Cmd::Classify { matrix, order_cap } => cmd_classify(&matrix, order_cap, seed),
        Cmd::Split { presentation } => cmd_split(&presentation),
        Cmd::Distortion { cmd } => match cmd {
            DistortionCmd::Tau { group, word, n, cap, format } => {
                cmd_tau(&group, &word, n, cap, format, seed)
            }
            DistortionCmd::Abelian { group, basis, box_radius, cap, format } => {
                cmd_abelian(&group, &basis, box_radius, cap, format, seed)
            }
            DistortionCmd::Scan { group, radius, n, cap, dot } => {
                cmd_scan(&group, radius, n, cap, dot.as_deref(), seed)
            }
        },
        Cmd::Fixtures { cmd: FixturesCmd::List } => {
            for f in npc_core::distortion::fixtures::fixture_list() {
                println!("{}\t{}", f.name, f.description);
            }
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string(value)
        .map_err(|e| Error::parse(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

// ---------------------------------------------------------------------------
// valuate / enumerate
// ---------------------------------------------------------------------------

fn cmd_enumerate(args: EnumArgs) -> Result<()> {
    let file: schema::RingFile = schema::load_json(&args.ring)?;
    let ring = file.into_ring()?;
    let fam = build_valuation_family(&ring)?;
    let out = enumerate_bounded(&ring, &fam, args.m, args.cap)?;
    if args.count {
        println!("{}", out.len());
    } else {
        let mut strings: Vec<String> = out.iter().map(|e| e.canon_string(&ring.vars)).collect();
        strings.sort();
        print_json(&strings)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// building
// ---------------------------------------------------------------------------

fn parse_val(grammar: &ScalarGrammar, spec: &str, seed: u64) -> Result<Val1> {
    if spec == "mu0" {
        return Ok(Val1::Mu0);
    }
    Ok(Val1::Prime(grammar.parse_monic_irreducible(spec, "t", seed)?))
}

#[derive(Serialize)]
struct BallSummary {
    characteristic: u64,
    val: String,
    radius: u64,
    layers: Vec<usize>,
    vertices: usize,
    edges: usize,
}

fn cmd_ball(p: u64, val: &str, radius: u64, dot_path: Option<&str>, seed: u64) -> Result<()> {
    let grammar = ScalarGrammar::for_char(p)?;
    let v = parse_val(&grammar, val, seed)?;
    let model = LocalModel::new(v, p)?;
    let center = LatticeClass::standard(&model, 2);
    let b = ball(&center, radius, &model)?;
    let summary = BallSummary {
        characteristic: p,
        val: val.to_string(),
        radius,
        layers: b.layer_sizes.clone(),
        vertices: b.vertices.len(),
        edges: b.edges.len(),
    };
    print_json(&summary)?;
    if let Some(path) = dot_path {
        let graph = dot::Graph {
            labels: b.vertices.iter().map(LatticeClass::label).collect(),
            edges: b.edges.clone(),
        }
        .canonicalize();
        dot::emit(&graph, path, "ball")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassifySummary {
    word: String,
    val: String,
    class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    translation_length: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertex: Option<String>,
}

fn cmd_building_classify(
    group_src: &str,
    word: &str,
    val: &str,
    radius: u64,
    retries: u32,
    seed: u64,
) -> Result<()> {
    let group = schema::load_group(group_src)?;
    let p = group.field.characteristic;
    if p == 0 {
        return Err(Error::unsupported(
            "tree actions need positive characteristic (no valuations on Q here)",
        ));
    }
    let grammar = ScalarGrammar::for_char(p)?;
    let v = parse_val(&grammar, val, seed)?;
    let model = LocalModel::new(v, p)?;
    let g = group.eval_word(&parse_word(word)?)?;
    let mut r = radius;
    let mut last_err = None;
    for _ in 0..=retries {
        match classify_isometry(&g, &model, r) {
            Ok(class) => {
                let summary = match class {
                    IsometryClass::Elliptic { fixed } => ClassifySummary {
                        word: word.to_string(),
                        val: val.to_string(),
                        class: "elliptic",
                        translation_length: None,
                        vertex: Some(fixed.label()),
                    },
                    IsometryClass::EllipticEdge { edge } => ClassifySummary {
                        word: word.to_string(),
                        val: val.to_string(),
                        class: "elliptic_inverted_edge",
                        translation_length: None,
                        vertex: Some(edge.0.label()),
                    },
                    IsometryClass::Hyperbolic { translation_length, axis_vertex } => {
                        ClassifySummary {
                            word: word.to_string(),
                            val: val.to_string(),
                            class: "hyperbolic",
                            translation_length: Some(translation_length),
                            vertex: Some(axis_vertex.label()),
                        }
                    }
                };
                return print_json(&summary);
            }
            Err(e @ Error::Inconclusive(_)) => {
                last_err = Some(e);
                r *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Inconclusive("classification failed".into())))
}

#[derive(Serialize)]
struct StabilizerSummary {
    family_size: usize,
    count: usize,
    elements: Vec<String>,
}

fn cmd_stabilizer(group_src: &str, ring_path: &str, cap: usize) -> Result<()> {
    let group = schema::load_group(group_src)?;
    let file: schema::RingFile = schema::load_json(ring_path)?;
    let ring = file.into_ring()?;
    let fam = build_valuation_family(&ring)?;
    let models = family_models(&fam, ring.p)?;
    let point = standard_product_point(&models, group.dim());
    let stab = stabilizer_elements(&group, &point, &ring, &fam, cap)?;
    let summary = StabilizerSummary {
        family_size: fam.len(),
        count: stab.len(),
        elements: stab.iter().map(|m| m.to_string()).collect(),
    };
    print_json(&summary)
}

// ---------------------------------------------------------------------------
// decompose / classify / split
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DecomposeSummary {
    field: FieldOut,
    block_sizes: Vec<usize>,
    basis: Vec<Vec<String>>,
    theta: Vec<Vec<String>>,
    kernel_sample: KernelOut,
}

#[derive(Serialize)]
struct FieldOut {
    characteristic: u64,
    extension_degree: u32,
}

#[derive(Serialize)]
struct KernelOut {
    words_checked: usize,
    theta_trivial: usize,
    violations: Vec<String>,
    hypothesis_flags: Vec<String>,
}

fn cmd_decompose(group_src: &str, word_radius: i64, order_cap: u64, seed: u64) -> Result<()> {
    let group = schema::load_group(group_src)?;
    let decomp = simultaneous_blocks(group.gens(), seed)?;
    let theta_rows = group
        .gens()
        .iter()
        .map(|g| {
            Ok(theta(g, &decomp)?
                .components
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let report = kernel_torsion_check(group.gens(), &decomp, word_radius, order_cap, seed)?;
    let n = decomp.dim();
    let mut basis_rows = vec![];
    for i in 0..n {
        basis_rows.push((0..n).map(|j| decomp.basis.at(i, j).to_string()).collect());
    }
    let summary = DecomposeSummary {
        field: FieldOut {
            characteristic: decomp.field.characteristic,
            extension_degree: decomp.field.extension_degree,
        },
        block_sizes: decomp.block_sizes.clone(),
        basis: basis_rows,
        theta: theta_rows,
        kernel_sample: KernelOut {
            words_checked: report.words_checked,
            theta_trivial: report.theta_trivial,
            violations: report.violations,
            hypothesis_flags: report.hypothesis_flags,
        },
    };
    print_json(&summary)
}

fn cmd_classify(matrix_path: &str, order_cap: u64, seed: u64) -> Result<()> {
    let file: schema::MatrixFile = schema::load_json(matrix_path)?;
    let (m, _) = file.into_matrix()?;
    let class = classify_element(&m, order_cap, seed)?;
    println!("{class}");
    Ok(())
}

#[derive(Serialize)]
struct SplitSummary {
    index: String,
    projection: Vec<Vec<String>>,
}

fn cmd_split(path: &str) -> Result<()> {
    let file: schema::PresentationFile = schema::load_json(path)?;
    let pres = file.into_presentation()?;
    let split = split_direct_factor(&pres)?;
    let mut projection = vec![];
    for i in 0..split.projection.rows {
        projection.push(
            (0..split.projection.cols)
                .map(|j| split.projection.at(i, j).to_string())
                .collect(),
        );
    }
    print_json(&SplitSummary { index: split.index.to_string(), projection })
}

// ---------------------------------------------------------------------------
// distortion
// ---------------------------------------------------------------------------

fn caps_for(group: &npc_core::group::MatGroup, cap: Option<u64>, n: u32, seed: u64) -> Caps {
    let mut caps = Caps::default_for(group.gens().len()).with_power_n(n).with_seed(seed);
    if let Some(c) = cap {
        caps = caps.with_radius(c);
    }
    caps
}

#[derive(Serialize)]
struct TauSummary {
    word: String,
    samples: Vec<SampleOut>,
    tau_hat: String,
}

#[derive(Serialize)]
struct SampleOut {
    n: u32,
    length: u64,
}

fn cmd_tau(
    group_src: &str,
    word: &str,
    n: u32,
    cap: Option<u64>,
    format: OutputFormat,
    seed: u64,
) -> Result<()> {
    let group = schema::load_group(group_src)?;
    let caps = caps_for(&group, cap, n, seed);
    let g = group.eval_word(&parse_word(word)?)?;
    let mut ball = CayleyBall::new(&group);
    let est = estimate_tau(&group, &g, n, &caps, &mut ball)?;
    match format {
        OutputFormat::Json => print_json(&TauSummary {
            word: word.to_string(),
            samples: est.samples.iter().map(|&(n, l)| SampleOut { n, length: l }).collect(),
            tau_hat: est.tau_hat.to_string(),
        }),
        OutputFormat::Csv => {
            println!("n,length,ratio");
            for &(n, l) in &est.samples {
                let ratio = num::BigRational::new((l as i64).into(), (n as i64).into());
                println!("{n},{l},{ratio}");
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct AbelianSummary {
    fitted_k: Option<String>,
    rows: Vec<AbelianRow>,
}

#[derive(Serialize)]
struct AbelianRow {
    point: Vec<i64>,
    l1: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    word_length: Option<u64>,
}

fn cmd_abelian(
    group_src: &str,
    basis_path: &str,
    box_radius: i64,
    cap: Option<u64>,
    format: OutputFormat,
    seed: u64,
) -> Result<()> {
    let group = schema::load_group(group_src)?;
    let file: schema::BasisFile = schema::load_json(basis_path)?;
    let emb = AbelianEmbedding::new(file.into_matrices()?)?;
    let caps = caps_for(&group, cap, 16, seed);
    let table = abelian_distortion(&group, &emb, box_radius, &caps)?;
    match format {
        OutputFormat::Json => print_json(&AbelianSummary {
            fitted_k: table.fitted_k.as_ref().map(|k| k.to_string()),
            rows: table
                .rows
                .iter()
                .map(|r| AbelianRow {
                    point: r.point.clone(),
                    l1: r.l1,
                    word_length: r.word_length,
                })
                .collect(),
        }),
        OutputFormat::Csv => {
            println!("point,l1,word_length");
            for r in &table.rows {
                let pt = r
                    .point
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                match r.word_length {
                    Some(l) => println!("\"{pt}\",{},{l}", r.l1),
                    None => println!("\"{pt}\",{},", r.l1),
                }
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ScanSummary {
    radius: u64,
    scanned: usize,
    skipped_finite: usize,
    min_tau_hat: Option<String>,
    witness: Option<String>,
    witness_samples: Vec<SampleOut>,
}

fn cmd_scan(
    group_src: &str,
    radius: u64,
    n: u32,
    cap: Option<u64>,
    dot_path: Option<&str>,
    seed: u64,
) -> Result<()> {
    let group = schema::load_group(group_src)?;
    let caps = caps_for(&group, cap, n, seed);
    let report = uniform_lower_bound_scan(&group, radius, n, &caps)?;
    let summary = ScanSummary {
        radius,
        scanned: report.scanned,
        skipped_finite: report.skipped_finite,
        min_tau_hat: report.min_tau_hat.as_ref().map(|k| k.to_string()),
        witness: report.witness.as_ref().map(|m| m.to_string()),
        witness_samples: report
            .witness_samples
            .iter()
            .map(|&(n, l)| SampleOut { n, length: l })
            .collect(),
    };
    print_json(&summary)?;
    if let Some(path) = dot_path {
        let mut ball = CayleyBall::new(&group);
        ball.extend_to(radius)?;
        let elements: Vec<npc_core::Matrix> = ball.layers.iter().flatten().cloned().collect();
        let mut edges = vec![];
        for (i, a) in elements.iter().enumerate() {
            for s in group.symmetric_gens() {
                let b = a.mul(&s);
                if let Some(j) = elements.iter().position(|x| x == &b) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let graph = dot::Graph {
            labels: elements.iter().map(|m| m.to_string()).collect(),
            edges,
        }
        .canonicalize();
        dot::emit(&graph, path, "cayley_ball")?;
    }
    Ok(())
}
