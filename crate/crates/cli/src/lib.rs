//! Argument handling and output rendering for the `ckhopf` binary.
//!
//! [`run`] never prints; it returns the exit code and the text to show, so
//! the whole command surface can be tested in-process.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use ckhopf::birkhoff::birkhoff_decompose;
use ckhopf::coeff_series::{LaurentSeries, Precision};
use ckhopf::error::Error;
use ckhopf::forests::{enumerate_trees, parse_tree, Forest, Tree};
use ckhopf::hopf::{coproduct, parse_element};
use ckhopf::matrix_rep::{
    aplus_flow_check, coproduct_matrix, psi, scattering_limit, scattering_prelimit, CoidealBasis,
    Matrix, MatrixEntry, TriMatrix,
};
use ckhopf::registry::Strategies;
use ckhopf::verify::{verify, VerifyOptions};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "CKHOPF_CONFIG";

const DEFAULT_SEEDS: [&str; 2] = ["[[][][]]", "[[[]]]"];
const RNG_SEED: u64 = 2006;

#[derive(Parser, Debug)]
#[command(
    name = "ckhopf",
    version,
    about = "Exact renormalization Hopf algebra calculator"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// TOML file with default settings.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Working degree N.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// Highest power of z kept in truncated results.
    #[arg(long, global = true)]
    z_hi: Option<i32>,
    /// Highest power of tau kept in flow expansions.
    #[arg(long, global = true)]
    tau_cap: Option<u32>,
    /// Seed tree for coideal-based commands; repeatable.
    #[arg(long, global = true)]
    seed: Vec<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the rooted trees of one degree.
    Trees {
        #[arg(long)]
        degree: usize,
    },
    /// Coproduct of an element such as "[[][]]" or "2 [] [[]] - []".
    Coproduct { element: String },
    /// Antipode of an element.
    Antipode {
        element: String,
        #[arg(long, default_value = "memo")]
        method: String,
    },
    /// Value of a character on a tree.
    CharEval { character: String, tree: String },
    /// Counterterm and renormalized value of a character on a tree.
    Birkhoff { character: String, tree: String },
    /// Coproduct matrix of the coideal generated by the seed.
    CoproductMatrix,
    /// Birkhoff factors of the matrix of a character.
    MatrixBirkhoff {
        #[arg(long, default_value = "toy")]
        character: String,
        #[arg(long, default_value = "atkinson")]
        method: String,
    },
    /// The constant beta matrix.
    Beta {
        #[arg(long, default_value = "toy")]
        character: String,
        #[arg(long, default_value = "conjugation")]
        method: String,
    },
    /// Flow equations in tau for the matrix of a character.
    FlowCheck {
        #[arg(long, default_value = "toy")]
        character: String,
    },
    /// The U -> 0 limit that recovers the counterterm matrix.
    ScatteringCheck {
        #[arg(long, default_value = "toy")]
        character: String,
    },
    /// Run the full identity suite.
    Verify,
}

/// Settings read from the config file; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    max_degree: Option<usize>,
    z_hi: Option<i32>,
    tau_cap: Option<u32>,
    seeds: Option<Vec<String>>,
    format: Option<Format>,
}

/// Resolved settings after defaults, config file and flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub max_degree: usize,
    pub z_hi: i32,
    pub tau_cap: u32,
    pub seeds: Vec<Tree>,
    pub format: Format,
}

impl Config {
    pub fn precision(&self) -> Precision {
        Precision {
            z_hi: self.z_hi,
            tau_cap: self.tau_cap,
            pole_bound: self.max_degree as i32,
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.max_degree < 1 {
            return Err("max-degree must be at least 1".into());
        }
        if self.z_hi < self.max_degree as i32 {
            return Err(format!(
                "z-hi ({}) must be at least max-degree ({})",
                self.z_hi, self.max_degree
            ));
        }
        if self.tau_cap < 2 {
            return Err("tau-cap must be at least 2".into());
        }
        if self.seeds.is_empty() {
            return Err("at least one seed tree is needed".into());
        }
        Ok(())
    }
}

fn read_file_config(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

fn resolve(g: &GlobalArgs) -> Result<Config, String> {
    let file = match &g.config {
        Some(p) => read_file_config(p)?,
        None => FileConfig::default(),
    };
    let seed_text: Vec<String> = if !g.seed.is_empty() {
        g.seed.clone()
    } else if let Some(s) = file.seeds {
        s
    } else {
        DEFAULT_SEEDS.iter().map(|s| s.to_string()).collect()
    };
    let seeds = seed_text
        .iter()
        .map(|s| parse_tree(s).map_err(|e| format!("bad seed {s:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = Config {
        max_degree: g.max_degree.or(file.max_degree).unwrap_or(5),
        z_hi: g.z_hi.or(file.z_hi).unwrap_or(6),
        tau_cap: g.tau_cap.or(file.tau_cap).unwrap_or(4),
        seeds,
        format: g.format.or(file.format).unwrap_or(Format::Text),
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Parse `args` (including the program name), run the command, and return
/// the exit code with the output. Exit codes: 0 success, 1 a failed identity
/// or computation, 2 bad usage or input.
pub fn run<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let cfg = match resolve(&cli.global) {
        Ok(c) => c,
        Err(msg) => return (2, format!("error: {msg}\n")),
    };
    match execute(&cli.command, &cfg) {
        Ok(out) => out,
        Err(e) => {
            let code = match e {
                Error::Parse { .. } | Error::UnknownStrategy { .. } | Error::Precondition(_) => 2,
                _ => 1,
            };
            (code, format!("error: {e}\n"))
        }
    }
}

/// Text or pretty JSON, chosen by the config.
fn emit(cfg: &Config, text: String, value: Value) -> String {
    match cfg.format {
        Format::Text => text,
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(&value).expect("json");
            s.push('\n');
            s
        }
    }
}

fn matrix_text<T: MatrixEntry>(title: &str, m: &Matrix<T>) -> String {
    format!("{title}:\n{m}")
}

/// The coideal of the first seed, with the precision raised to cover it.
fn seed_basis(cfg: &Config) -> (CoidealBasis, Precision) {
    let basis = CoidealBasis::closure(&cfg.seeds[..1]);
    let top = basis.degrees().into_iter().max().unwrap_or(0) as i32;
    let mut prec = cfg.precision();
    prec.pole_bound = prec.pole_bound.max(top);
    prec.z_hi = prec.z_hi.max(top);
    (basis, prec)
}

/// Drop coefficients above `z_hi` for display; short exact values stay exact.
fn clip_series(v: &LaurentSeries, cfg: &Config) -> LaurentSeries {
    let short = v.is_exact() && v.coeffs().all(|(k, _)| k <= cfg.z_hi);
    if short {
        v.clone()
    } else {
        v.truncate(cfg.z_hi)
    }
}

/// [`clip_series`] on every entry.
fn clip(m: &TriMatrix, cfg: &Config) -> TriMatrix {
    m.map(|v| clip_series(v, cfg))
}

fn basis_labels(basis: &CoidealBasis) -> Vec<String> {
    basis.elements().iter().map(Forest::to_text).collect()
}

fn execute(cmd: &Command, cfg: &Config) -> ckhopf::error::Result<(i32, String)> {
    let st = Strategies::default();
    let prec = cfg.precision();
    let out = match cmd {
        Command::Trees { degree } => {
            let trees: Vec<String> = enumerate_trees(*degree)
                .iter()
                .map(Tree::to_bracket)
                .collect();
            let mut text = trees.join("\n");
            text.push('\n');
            emit(cfg, text, json!(trees))
        }
        Command::Coproduct { element } => {
            let d = coproduct(&parse_element(element)?);
            emit(cfg, format!("{d}\n"), d.to_json())
        }
        Command::Antipode { element, method } => {
            let s = st.antipodes.get(method)?.apply(&parse_element(element)?);
            emit(cfg, format!("{s}\n"), s.to_json())
        }
        Command::CharEval { character, tree } => {
            let t = parse_tree(tree)?;
            let phi = st.characters.get(character)?.build(prec);
            let v = clip_series(&phi.evaluate_tree(&t)?, cfg);
            emit(cfg, format!("{v}\n"), v.to_json())
        }
        Command::Birkhoff { character, tree } => {
            let t = parse_tree(tree)?;
            let mut p = prec;
            p.pole_bound = p.pole_bound.max(t.degree() as i32);
            let phi = st.characters.get(character)?.build(p);
            let pair = birkhoff_decompose(&phi, t.degree())?;
            let (v, m, pl) = (
                clip_series(&phi.evaluate_tree(&t)?, cfg),
                clip_series(&pair.minus.evaluate_tree(&t)?, cfg),
                clip_series(&pair.plus.evaluate_tree(&t)?, cfg),
            );
            let text = format!("phi = {v}\nphi_minus = {m}\nphi_plus = {pl}\n");
            emit(
                cfg,
                text,
                json!({ "phi": v.to_json(), "phi_minus": m.to_json(), "phi_plus": pl.to_json() }),
            )
        }
        Command::CoproductMatrix => {
            let (basis, _) = seed_basis(cfg);
            let m = coproduct_matrix(&basis)?;
            let labels = basis_labels(&basis);
            let text = format!("basis: {}\n{}", labels.join(", "), matrix_text("M", &m));
            emit(cfg, text, json!({ "basis": labels, "matrix": m.to_json() }))
        }
        Command::MatrixBirkhoff { character, method } => {
            let (basis, p) = seed_basis(cfg);
            let phi_hat = psi(
                &st.characters.get(character)?.build(p),
                &coproduct_matrix(&basis)?,
            )?;
            let (minus, plus) = st.matrix_birkhoff.get(method)?.factor(&phi_hat)?;
            let (minus, plus) = (clip(&minus, cfg), clip(&plus, cfg));
            let labels = basis_labels(&basis);
            let text = format!(
                "basis: {}\n{}{}",
                labels.join(", "),
                matrix_text("phi_minus", &minus),
                matrix_text("phi_plus", &plus)
            );
            emit(
                cfg,
                text,
                json!({ "basis": labels, "phi_minus": minus.to_json(), "phi_plus": plus.to_json() }),
            )
        }
        Command::Beta { character, method } => {
            let (basis, p) = seed_basis(cfg);
            let phi_hat = psi(
                &st.characters.get(character)?.build(p),
                &coproduct_matrix(&basis)?,
            )?;
            let (minus, _) = st.matrix_birkhoff.get("atkinson")?.factor(&phi_hat)?;
            let b = st.betas.get(method)?.compute(&minus, &basis.degrees())?;
            let labels = basis_labels(&basis);
            let text = format!("basis: {}\n{}", labels.join(", "), matrix_text("beta", &b));
            emit(
                cfg,
                text,
                json!({ "basis": labels, "method": method, "beta": b.to_json() }),
            )
        }
        Command::FlowCheck { character } => {
            let (basis, p) = seed_basis(cfg);
            let phi_hat = psi(
                &st.characters.get(character)?.build(p),
                &coproduct_matrix(&basis)?,
            )?;
            let checks = aplus_flow_check(&phi_hat, &basis.degrees(), &p)?;
            let ok = checks.iter().all(|c| c.holds);
            let mut text = String::new();
            for c in &checks {
                let tag = if c.holds { "ok  " } else { "FAIL" };
                text.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
            }
            let value = json!({
                "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                "passed": ok,
            });
            return Ok((if ok { 0 } else { 1 }, emit(cfg, text, value)));
        }
        Command::ScatteringCheck { character } => {
            let (basis, p) = seed_basis(cfg);
            let phi_hat = psi(
                &st.characters.get(character)?.build(p),
                &coproduct_matrix(&basis)?,
            )?;
            let (minus, _) = st.matrix_birkhoff.get("atkinson")?.factor(&phi_hat)?;
            let d = basis.degrees();
            let pre = scattering_prelimit(&minus, &d)?;
            let lim = scattering_limit(&minus, &d)?;
            let ok = lim.eq_within(&minus)?;
            let verdict = if ok {
                "limit U -> 0 equals phi_minus"
            } else {
                "FAIL: limit U -> 0 differs from phi_minus"
            };
            let (pre, lim) = (clip(&pre, cfg), clip(&lim, cfg));
            let text = format!("{}{}\n", matrix_text("before the limit", &pre), verdict);
            let value = json!({
                "prelimit": pre.to_json(),
                "limit": lim.to_json(),
                "equals_phi_minus": ok,
            });
            return Ok((if ok { 0 } else { 1 }, emit(cfg, text, value)));
        }
        Command::Verify => {
            let opts = VerifyOptions {
                max_degree: cfg.max_degree,
                prec,
                seeds: cfg.seeds.clone(),
                samples: 100,
                rng_seed: RNG_SEED,
            };
            let report = verify(&opts);
            let code = if report.all_passed() { 0 } else { 1 };
            return Ok((code, emit(cfg, report.to_text(), report.to_json())));
        }
    };
    Ok((0, out))
}
