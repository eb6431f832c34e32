//! `enriques`: command-line access to the lattice, embedding, existence and
//! class-group computations of `enriques-core`.

mod input;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use enriques_core::accept;
use enriques_core::cm;
use enriques_core::embed::{
    self, brauer_image_kummer, complement_in_n, count_roots, embedding_from_images, im_phi_upper_bound, pullback_epsilon,
    theorem_a_embedding, vectors_of_norm, Character, PrimitiveEmbedding, TheoremALabel, TheoremAParams,
};
use enriques_core::matrix::IntMatrix;
use enriques_core::nikulin::{
    self, check_embedding_datum, condition_star, datum_from_embedding, existence_report, index_p_sublattice, EmbeddingDatum,
};
use enriques_core::lattice::{sublattice_from_gram_change, Sublattice};
use enriques_core::standard::{self, is_twice_even, StandardTag, N_RANK};
use enriques_core::{Error, FiniteQuadraticForm, Lattice};

use input::{basis_matrix, gram_argument, int_list, lattice_from_rows, BasisJson, EmbeddingJson, InputDigest, LatticeJson};

const DEFAULT_FIXTURES: &str = include_str!("../fixtures/reference_constants.json");

#[derive(Parser)]
#[command(name = "enriques", version, about = "Lattices, Enriques embeddings and Brauer labels")]
struct Cli {
    /// Print the JSON report envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 20240611)]
    seed: u64,
    /// Cap on enumerated vectors.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap: usize,
    /// Fixture file with reference constants.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    /// Record wall-clock time in the envelope (otherwise 0).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a primitive embedding into N given by a JSON file.
    VerifyEmbedding { file: PathBuf },
    /// Construct the labelled embedding for Picard rank 17..20.
    TheoremA {
        #[arg(long)]
        rho: u8,
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        #[arg(long)]
        label: String,
    },
    /// Pull back epsilon along every labelled embedding.
    BrauerImage {
        #[arg(long)]
        rho: u8,
        #[arg(long, allow_hyphen_values = true)]
        params: String,
    },
    /// Characters vanishing on every class of norm 2 mod 4.
    ImPhiBound {
        #[arg(long, allow_hyphen_values = true)]
        gram: Option<String>,
        #[arg(long)]
        gram_file: Option<PathBuf>,
    },
    /// Vectors of a given norm in a definite lattice.
    Roots {
        #[arg(long, allow_hyphen_values = true)]
        gram: Option<String>,
        #[arg(long)]
        gram_file: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true, default_value_t = -2)]
        norm: i64,
    },
    /// Decide whether an even lattice with given signature and form exists.
    NikulinExists {
        /// `t+,t-`.
        #[arg(long)]
        sig: String,
        #[arg(long)]
        fqf: Option<PathBuf>,
        /// Use the discriminant form of this Gram matrix instead of `--fqf`.
        #[arg(long, allow_hyphen_values = true)]
        gram: Option<String>,
    },
    /// Evaluate condition (*) for a sublattice.
    ConditionStar {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        sublattice: PathBuf,
    },
    /// The index-p sublattice with cyclic p-part of order p^2.
    Sublattice {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        lattice: PathBuf,
    },
    /// Transfer an embedding datum to a sublattice or back to the lattice.
    Transfer {
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        sublattice: PathBuf,
        /// Datum for the source side (L when going down, L' when going up).
        #[arg(long)]
        datum: Option<PathBuf>,
        /// Embedding of L into N to extract the datum from (down only).
        #[arg(long)]
        embedding: Option<PathBuf>,
    },
    /// Reduced forms and class number of a negative fundamental discriminant.
    ClassGroup {
        #[arg(short = 'D', allow_hyphen_values = true)]
        discriminant: i64,
    },
    /// CM checks for a rank-2 transcendental lattice `[[2a,b],[b,2c]]`.
    TheoremC {
        #[arg(long, allow_hyphen_values = true)]
        gram: String,
    },
    /// The canonical character of N on a vector.
    Epsilon {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Gram matrix and invariants of a fixed lattice.
    StandardLattice {
        #[arg(long)]
        name: String,
    },
    /// Run acceptance criteria: all, theorem-a, lemmas, nikulin, theorem-c, oracles.
    Accept {
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Down,
    Up,
}

struct Outcome {
    verdicts: Vec<(String, bool)>,
    payload: Value,
    text: String,
}

impl Outcome {
    fn new(payload: Value) -> Self {
        Outcome { verdicts: Vec::new(), text: render(&payload), payload }
    }

    fn verdict(mut self, name: &str, value: bool) -> Self {
        self.verdicts.push((name.to_string(), value));
        self
    }

    fn text(mut self, text: String) -> Self {
        self.text = text;
        self
    }
}

fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value")
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::VerifyEmbedding { .. } => "verify-embedding",
        Command::TheoremA { .. } => "theorem-a",
        Command::BrauerImage { .. } => "brauer-image",
        Command::ImPhiBound { .. } => "im-phi-bound",
        Command::Roots { .. } => "roots",
        Command::NikulinExists { .. } => "nikulin-exists",
        Command::ConditionStar { .. } => "condition-star",
        Command::Sublattice { .. } => "sublattice",
        Command::Transfer { .. } => "transfer",
        Command::ClassGroup { .. } => "class-group",
        Command::TheoremC { .. } => "theorem-c",
        Command::Epsilon { .. } => "epsilon",
        Command::StandardLattice { .. } => "standard-lattice",
        Command::Accept { .. } => "accept",
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut digest = InputDigest::new(&args[1..]);
    let start = Instant::now();
    let name = command_name(&cli.command);
    match run(&cli, &mut digest) {
        Ok(out) => {
            let ok = out.verdicts.iter().all(|(_, v)| *v);
            if cli.json {
                let envelope = json!({
                    "command": name,
                    "inputs_digest": digest.finish(),
                    "verdicts": out.verdicts.iter().map(|(n, v)| json!({"name": n, "value": v})).collect::<Vec<_>>(),
                    "payload": out.payload,
                    "runtime_ms": if cli.timing { start.elapsed().as_millis() as u64 } else { 0 },
                });
                println!("{}", render(&envelope));
            } else {
                println!("{}", out.text);
                for (n, v) in &out.verdicts {
                    println!("{n}: {v}");
                }
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[derive(Deserialize)]
struct Fixtures {
    nonzero_brauer_classes: Vec<BrauerCount>,
    single_enriques_quotient: SingleQuotient,
}

#[derive(Deserialize)]
struct BrauerCount {
    rho: u8,
    count: usize,
}

#[derive(Deserialize)]
struct SingleQuotient {
    grams: Vec<Vec<Vec<i64>>>,
}

fn fixtures(cli: &Cli, digest: &mut InputDigest) -> Result<Fixtures> {
    let text = match &cli.fixtures {
        Some(p) => digest.read(p)?,
        None => DEFAULT_FIXTURES.to_string(),
    };
    serde_json::from_str(&text).context("parsing fixtures")
}

fn run(cli: &Cli, digest: &mut InputDigest) -> Result<Outcome> {
    match &cli.command {
        Command::VerifyEmbedding { file } => verify_embedding(digest, file),
        Command::TheoremA { rho, params, label } => theorem_a(cli, *rho, params, label),
        Command::BrauerImage { rho, params } => brauer_image(cli, digest, *rho, params),
        Command::ImPhiBound { gram, gram_file } => im_phi_bound(cli, digest, gram.as_deref(), gram_file.as_deref()),
        Command::Roots { gram, gram_file, norm } => {
            let l = gram_argument(digest, gram.as_deref(), gram_file.as_deref())?;
            let vs = vectors_of_norm(&l, *norm, cli.cap)?;
            Ok(Outcome::new(json!({"norm": norm, "count": vs.len(), "vectors": vs})).text(format!("{} vectors of norm {norm}", vs.len())))
        }
        Command::NikulinExists { sig, fqf, gram } => nikulin_exists(digest, sig, fqf.as_deref(), gram.as_deref()),
        Command::ConditionStar { lattice, sublattice } => {
            let l = read_lattice(digest, lattice)?;
            let s = read_sublattice(digest, &l, sublattice)?;
            let r = condition_star(&l, &s)?;
            Ok(Outcome::new(serde_json::to_value(&r)?).verdict("condition_star", r.verdict()))
        }
        Command::Sublattice { p, lattice } => {
            let l = read_lattice(digest, lattice)?;
            let s = index_p_sublattice(&l, *p)?;
            let r = condition_star(&l, &s)?;
            Ok(Outcome::new(json!({
                "p": p,
                "basis": s.basis.columns(),
                "gram": s.lattice.gram().to_rows(),
                "index": s.index,
                "lattice": lattice_report(&s.lattice),
                "condition_star": r,
            }))
            .verdict("condition_star", r.verdict()))
        }
        Command::Transfer { direction, lattice, sublattice, datum, embedding } => {
            transfer(digest, *direction, lattice, sublattice, datum.as_deref(), embedding.as_deref())
        }
        Command::ClassGroup { discriminant } => {
            let g = cm::class_group(*discriminant)?;
            let ray = cm::ray_class2_order(*discriminant)?;
            let two = cm::prime2_splitting(*discriminant)?;
            let text = format!("D = {}: h = {}, ambiguous classes {}, |Cl_2| = {ray}, 2 {two}", g.discriminant, g.class_number, g.ambiguous_count);
            let mut payload = serde_json::to_value(&g)?;
            payload["ray_class2_order"] = json!(ray);
            payload["two_behavior"] = json!(two);
            Ok(Outcome::new(payload).text(text))
        }
        Command::TheoremC { gram } => {
            let r = cm::theorem_c_report(&input::matrix(gram)?)?;
            Ok(Outcome::new(serde_json::to_value(&r)?))
        }
        Command::Epsilon { vector } => {
            let v = int_list(vector)?;
            let e = standard::epsilon(&v)?;
            Ok(Outcome::new(json!({"vector": v, "value": e})).text(e.to_string()))
        }
        Command::StandardLattice { name } => {
            let tag: StandardTag = name.parse()?;
            let l = standard::standard_lattice(tag);
            Ok(Outcome::new(json!({
                "name": tag.name(),
                "basis_order": tag.basis_order(),
                "gram": l.gram().to_rows(),
                "lattice": lattice_report(&l),
            })))
        }
        Command::Accept { suite } => {
            let ids = accept::suite(suite).with_context(|| format!("unknown suite `{suite}`"))?;
            let outcomes = accept::run_suite(ids, cli.seed);
            let text = outcomes.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("\n");
            let mut out = Outcome::new(serde_json::to_value(&outcomes)?).text(text);
            for o in &outcomes {
                out = out.verdict(&format!("criterion_{}", o.id), o.passed);
            }
            Ok(out)
        }
    }
}

fn lattice_report(l: &Lattice) -> Value {
    let (p, m) = l.signature();
    json!({
        "rank": l.rank(),
        "signature": [p, m],
        "even": l.is_even(),
        "discr": l.discriminant_order().to_string(),
        "det": l.det().to_string(),
    })
}

fn read_lattice(digest: &mut InputDigest, path: &Path) -> Result<Lattice> {
    lattice_from_rows(&digest.read_json::<LatticeJson>(path)?.gram)
}

fn read_sublattice(digest: &mut InputDigest, l: &Lattice, path: &Path) -> Result<Sublattice> {
    let b: BasisJson = digest.read_json(path)?;
    Ok(sublattice_from_gram_change(l, &basis_matrix(&b, l.rank())?)?)
}

fn embedding_report(emb: &PrimitiveEmbedding, cap: usize) -> Result<(Value, bool)> {
    let label = pullback_epsilon(emb);
    let k = complement_in_n(emb)?;
    let twice_even = is_twice_even(&k);
    let roots = match count_roots(&k, cap) {
        Ok(n) => json!(n),
        Err(Error::CapExceeded { count }) => json!(format!(">= {count}")),
        Err(e) => return Err(e.into()),
    };
    Ok((
        json!({
            "source_gram": emb.source().gram().to_rows(),
            "images": emb.image_vectors(),
            "label": label.values,
            "complement": lattice_report(&k),
            "complement_gram": k.gram().to_rows(),
            "complement_twice_even": twice_even,
            "complement_roots": roots,
        }),
        label.is_zero() || twice_even,
    ))
}

fn verify_embedding(digest: &mut InputDigest, file: &Path) -> Result<Outcome> {
    let e: EmbeddingJson = digest.read_json(file)?;
    let source = lattice_from_rows(&e.source_gram)?;
    let images = IntMatrix::from_columns(N_RANK, &e.images)?;
    match embedding_from_images(&source, &images) {
        Ok(emb) => {
            let (payload, twice_even_ok) = embedding_report(&emb, 1_000_000)?;
            Ok(Outcome::new(payload).verdict("gram_preserved", true).verdict("primitive", true).verdict("complement_twice_even", twice_even_ok))
        }
        Err(err @ Error::GramMismatch) => Ok(Outcome::new(json!({"error": err.to_string()})).verdict("gram_preserved", false)),
        Err(err @ Error::NotPrimitive { .. }) => {
            Ok(Outcome::new(json!({"error": err.to_string()})).verdict("gram_preserved", true).verdict("primitive", false))
        }
        Err(other) => Err(other.into()),
    }
}

fn parse_label(rho: u8, s: &str) -> Result<TheoremALabel> {
    let bits = int_list(s)?;
    if bits.iter().any(|&b| !(0..=1).contains(&b)) {
        bail!("label bits must be 0 or 1");
    }
    Ok(TheoremALabel::new(rho, bits.into_iter().map(|b| b as u8).collect())?)
}

fn theorem_a(cli: &Cli, rho: u8, params: &str, label: &str) -> Result<Outcome> {
    let p = TheoremAParams::from_values(rho, &int_list(params)?)?;
    let l = parse_label(rho, label)?;
    let emb = theorem_a_embedding(&p, &l)?;
    let (mut payload, twice_even) = embedding_report(&emb, cli.cap)?;
    payload["params"] = serde_json::to_value(p)?;
    let matches = pullback_epsilon(&emb) == l.character();
    Ok(Outcome::new(payload)
        .verdict("gram_preserved", true)
        .verdict("primitive", true)
        .verdict("label_matches", matches)
        .verdict("complement_twice_even", twice_even))
}

fn brauer_image(cli: &Cli, digest: &mut InputDigest, rho: u8, params: &str) -> Result<Outcome> {
    let p = TheoremAParams::from_values(rho, &int_list(params)?)?;
    let t = p.source()?;
    let image = brauer_image_kummer(&t, &p)?;
    let want = (1usize << p.rank()) - 1;
    let chars: Vec<String> = image.iter().map(Character::to_string).collect();
    let fx = fixtures(cli, digest)?;
    let expected = fx.nonzero_brauer_classes.iter().find(|c| c.rho == rho).map(|c| c.count);
    let mut out = Outcome::new(json!({"rho": rho, "params": p, "characters": chars, "count": image.len(), "expected_count": expected}))
        .text(format!("{} non-zero characters: {}", image.len(), chars.join(" ")))
        .verdict("all_nonzero_realized", image.len() == want && image.iter().all(|c| !c.is_zero()));
    if let Some(n) = expected {
        out = out.verdict("count_matches_fixture", n == image.len());
    }
    Ok(out)
}

fn im_phi_bound(cli: &Cli, digest: &mut InputDigest, gram: Option<&str>, file: Option<&Path>) -> Result<Outcome> {
    let t = gram_argument(digest, gram, file)?;
    let b = im_phi_upper_bound(&t)?;
    let elements: Vec<String> = b.elements().iter().map(Character::to_string).collect();
    let rows = t.gram().to_rows();
    let fx = fixtures(cli, digest)?;
    let single = fx.single_enriques_quotient.grams.contains(&rows);
    let mut out = Outcome::new(json!({
        "basis": b.basis.iter().map(|c| c.values.clone()).collect::<Vec<_>>(),
        "elements": elements,
        "order": b.order(),
        "full": b.is_full(),
        "trivial": b.is_trivial(),
    }))
    .text(format!("order {}: {}", b.order(), elements.join(" ")));
    if single {
        out = out.verdict("trivial_for_single_quotient_fixture", b.is_trivial());
    }
    Ok(out)
}

fn nikulin_exists(digest: &mut InputDigest, sig: &str, fqf: Option<&Path>, gram: Option<&str>) -> Result<Outcome> {
    let s = int_list(sig)?;
    if s.len() != 2 {
        bail!("--sig takes two integers t+,t-");
    }
    let f: FiniteQuadraticForm = match (fqf, gram) {
        (Some(p), None) => digest.read_json(p)?,
        (None, Some(g)) => Lattice::from_gram(input::matrix(g)?)?.discriminant_form()?,
        _ => bail!("give exactly one of --fqf and --gram"),
    };
    let r = existence_report((s[0], s[1]), &f)?;
    Ok(Outcome::new(json!({"signature": s, "report": r})).verdict("exists", r.verdict()))
}

fn transfer(
    digest: &mut InputDigest,
    direction: Direction,
    lattice: &Path,
    sublattice: &Path,
    datum: Option<&Path>,
    embedding: Option<&Path>,
) -> Result<Outcome> {
    let l = read_lattice(digest, lattice)?;
    let s = read_sublattice(digest, &l, sublattice)?;
    let d: EmbeddingDatum = match (datum, embedding, direction) {
        (Some(p), None, _) => digest.read_json(p)?,
        (None, Some(p), Direction::Down) => {
            let e: EmbeddingJson = digest.read_json(p)?;
            let src = lattice_from_rows(&e.source_gram)?;
            if src != l {
                bail!("embedding source does not match --lattice");
            }
            datum_from_embedding(&embed::embedding_from_images(&src, &IntMatrix::from_columns(N_RANK, &e.images)?)?)?
        }
        (None, Some(_), Direction::Up) => bail!("--embedding is only accepted with --direction down"),
        _ => bail!("give exactly one of --datum and --embedding"),
    };
    let (from, to) = match direction {
        Direction::Down => (&l, &s.lattice),
        Direction::Up => (&s.lattice, &l),
    };
    let input_ok = check_embedding_datum(from, &d);
    let result = match direction {
        Direction::Down => nikulin::transfer_datum_down(&l, &s, &d),
        Direction::Up => nikulin::transfer_datum_up(&s, &l, &d),
    };
    let mut out = match &result {
        Ok(nd) => {
            let output_ok = check_embedding_datum(to, nd).is_ok();
            Outcome::new(json!({"datum": nd, "k_discriminant_order": nd.q_k.order()})).verdict("output_datum_valid", output_ok)
        }
        Err(e) => Outcome::new(json!({"error": e.to_string()})).verdict("transfer_succeeded", false),
    };
    out.verdicts.insert(0, ("input_datum_valid".into(), input_ok.is_ok()));
    Ok(out)
}
