//! Command-line driver: ring and braid flags, cocycle selection, and the
//! reproduction subcommands for the two torus-link families.
//!
//! Exit codes: 0 on success (including checks that pass), 1 on domain
//! errors or failed checks, 2 on usage errors. When a selected cochain is
//! not a cocycle, the invariant-producing subcommands warn on stderr and
//! continue; `cocycle-check` and `ybe` are the verdicts themselves.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use qv_core::arith::GroundRing;
use qv_core::cochain::{basis_h2, basis_h3, named_cocycle, parse_cochain, CochainError, CochainPoly};
use qv_core::coloring::{enumerate_colorings, ColoringPolicy};
use qv_core::diagram::{BraidWord, LinkDiagram};
use qv_core::expansion::{
    singular_vassiliev_unchecked, vassiliev_coeffs, CocycleConfig, HbarSeries,
    SubstitutionParams, SumDegree, VassilievReport,
};
use qv_core::invariant::{state_sum_2_detailed, state_sum_3_detailed};
use qv_core::quandle::AlexanderQuandle;
use qv_core::rmatrix::{build_r_matrix_unchecked, operator_invariant};

use crate::io::{emit_groupring, read_groupring};

#[derive(Parser, Debug)]
#[command(
    name = "qv",
    version,
    about = "Quandle cocycle state-sum invariants of braid closures and their Vassiliev residues"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

/// Ground ring and quandle flags shared by most subcommands.
#[derive(Args, Debug)]
struct RingArgs {
    /// Characteristic of the ground ring F_p[w]/(h(w))
    #[arg(long)]
    p: u64,
    /// Coefficients of h, constant first, comma separated (e.g. 1,1,1)
    #[arg(long, value_name = "C0,C1,..", allow_hyphen_values = true)]
    h: String,
    /// omega as an element expression (default: the class of w)
    #[arg(long, value_name = "EXPR")]
    w: Option<String>,
}

impl RingArgs {
    fn h_ints(&self) -> Result<Vec<i64>> {
        self.h
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<i64>()
                    .with_context(|| format!("bad coefficient '{tok}' in --h"))
            })
            .collect()
    }

    fn ring(&self) -> Result<GroundRing> {
        Ok(GroundRing::new(self.p, &self.h_ints()?)?)
    }

    fn quandle(&self) -> Result<AlexanderQuandle> {
        let ring = self.ring()?;
        let omega = match &self.w {
            Some(expr) => ring.parse_element(expr)?,
            None => ring.omega(),
        };
        Ok(AlexanderQuandle::new(ring, omega)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the quandle axioms of an Alexander quandle
    Axioms {
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Print the 2- or 3-cocycle basis over a finite field
    Basis {
        /// Cohomology degree
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        deg: u8,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Verify the cocycle condition of a named or file cochain
    CocycleCheck {
        /// Cocycle name (mochizuki-p3, example111, basis2:.., basis3:..) or file
        #[arg(long)]
        cocycle: String,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Dump arcs, crossings and regions of a braid-closure diagram
    Diagram {
        /// Braid word, e.g. "2 ; 1 1 1"
        #[arg(long)]
        braid: String,
    },
    /// Count colorings of a braid closure
    Color {
        #[arg(long)]
        braid: String,
        #[command(flatten)]
        ring: RingArgs,
        /// sum-all | fix-arc:<id>=<expr> | fix-arc-region:<id>=<expr>,<expr>
        #[arg(long, default_value = "sum-all")]
        policy: String,
    },
    /// Compute the cocycle state-sum invariant in the group-ring format
    Invariant {
        #[arg(long)]
        braid: String,
        /// State-sum degree: 2 (arc weights) or 3 (shadow weights)
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        deg: u8,
        #[arg(long)]
        cocycle: String,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value = "sum-all")]
        policy: String,
        /// Also write the output to this path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append per-coloring symbolic exponents as comments
        #[arg(long)]
        diag: bool,
    },
    /// Trace of the braid representation built from a 2-cocycle
    Operator {
        #[arg(long)]
        braid: String,
        #[arg(long)]
        cocycle: String,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the Yang-Baxter equation and Markov conditions of the braiding operator
    Ybe {
        #[arg(long)]
        cocycle: String,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Expand a group-ring file at t = e^{a hbar}, w = e^{b hbar}
    Expand {
        /// Group-ring file to expand
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        /// Truncation degree
        #[arg(long = "D", default_value_t = 8)]
        degree: usize,
        /// Integer relation for omega (default: the file's h coefficients).
        /// Signs matter numerically: the ring modulus 1,2,1 mod 3 validates
        /// only as 1,-1,1.
        #[arg(long, value_name = "C0,C1,..", allow_hyphen_values = true)]
        h: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vassiliev residue table of a braid word, singular letters allowed
    Vassiliev {
        #[arg(long)]
        braid: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        deg: u8,
        #[arg(long)]
        cocycle: String,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value = "sum-all")]
        policy: String,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long = "D", default_value_t = 8)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce a torus-link family computation end to end
    Repro {
        /// Which worked family to reproduce
        #[arg(value_parser = ["example111", "example110"])]
        example: String,
        /// Number of positive crossings in the 2-strand torus braid
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses argv, dispatches, prints, and maps errors to exit codes.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    let (text, code, out) = match cmd {
        Command::Axioms { ring } => (cmd_axioms(&ring)?, 0, None),
        Command::Basis { deg, ring } => (cmd_basis(deg, &ring)?, 0, None),
        Command::CocycleCheck { cocycle, ring } => {
            let (text, ok) = cmd_cocycle_check(&cocycle, &ring)?;
            (text, if ok { 0 } else { 1 }, None)
        }
        Command::Diagram { braid } => (cmd_diagram(&braid)?, 0, None),
        Command::Color {
            braid,
            ring,
            policy,
        } => (cmd_color(&braid, &ring, &policy)?, 0, None),
        Command::Invariant {
            braid,
            deg,
            cocycle,
            ring,
            policy,
            out,
            diag,
        } => (cmd_invariant(&braid, deg, &cocycle, &ring, &policy, diag)?, 0, out),
        Command::Operator {
            braid,
            cocycle,
            ring,
            out,
        } => (cmd_operator(&braid, &cocycle, &ring)?, 0, out),
        Command::Ybe { cocycle, ring } => {
            let (text, ok) = cmd_ybe(&cocycle, &ring)?;
            (text, if ok { 0 } else { 1 }, None)
        }
        Command::Expand {
            input,
            a,
            b,
            degree,
            h,
            out,
        } => (cmd_expand(&input, a, b, degree, h.as_deref())?, 0, out),
        Command::Vassiliev {
            braid,
            deg,
            cocycle,
            ring,
            policy,
            a,
            b,
            degree,
            out,
        } => (
            cmd_vassiliev(&braid, deg, &cocycle, &ring, &policy, a, b, degree)?,
            0,
            out,
        ),
        Command::Repro { example, n, out } => (cmd_repro(&example, n)?, 0, out),
    };
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(&path, &text)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(code)
}

/// Resolves a cocycle selector: first as a named cocycle, then as a file of
/// polynomial expressions in `x, y, z, w` (one per line, summed). The result
/// is padded to `want` variables when it uses fewer.
fn resolve_cochain(
    selector: &str,
    quandle: &AlexanderQuandle,
    want: Option<usize>,
) -> Result<CochainPoly> {
    let parsed = match named_cocycle(selector, quandle) {
        Ok(c) => c,
        Err(CochainError::UnknownCocycle(_)) => {
            let text = std::fs::read_to_string(selector).with_context(|| {
                format!("'{selector}' is neither a known cocycle name nor a readable file")
            })?;
            let p = quandle.ring().p();
            let mut acc: Option<CochainPoly> = None;
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let c = parse_cochain(p, line)?;
                acc = Some(match acc {
                    None => c,
                    Some(prev) => {
                        let n = prev.nvars().max(c.nvars());
                        prev.embed(n, 0).add(&c.embed(n, 0))
                    }
                });
            }
            acc.with_context(|| format!("'{selector}' contains no expressions"))?
        }
        Err(e) => return Err(e.into()),
    };
    match want {
        Some(n) if parsed.nvars() < n => Ok(parsed.embed(n, 0)),
        Some(n) if parsed.nvars() > n => {
            bail!(
                "cochain has {} variables but the requested degree needs {n}",
                parsed.nvars()
            )
        }
        _ => Ok(parsed),
    }
}

fn parse_policy(text: &str, ring: &GroundRing) -> Result<ColoringPolicy> {
    if text == "sum-all" {
        return Ok(ColoringPolicy::SumAll);
    }
    if let Some(rest) = text.strip_prefix("fix-arc-region:") {
        let (arc, exprs) = rest
            .split_once('=')
            .context("expected fix-arc-region:<id>=<expr>,<expr>")?;
        let (color, region) = exprs
            .split_once(',')
            .context("expected two comma-separated element expressions")?;
        return Ok(ColoringPolicy::FixArcAndRegion {
            arc: arc.trim().parse().context("bad arc id")?,
            color: ring.parse_element(color.trim())?,
            region: ring.parse_element(region.trim())?,
        });
    }
    if let Some(rest) = text.strip_prefix("fix-arc:") {
        let (arc, color) = rest
            .split_once('=')
            .context("expected fix-arc:<id>=<expr>")?;
        return Ok(ColoringPolicy::FixArc {
            arc: arc.trim().parse().context("bad arc id")?,
            color: ring.parse_element(color.trim())?,
        });
    }
    bail!("unknown policy '{text}' (sum-all, fix-arc:.., fix-arc-region:..)")
}

fn warn_if_not_cocycle(c: &CochainPoly, quandle: &AlexanderQuandle) -> bool {
    let ok = c.is_cocycle(quandle);
    if !ok {
        eprintln!(
            "warning: the cochain is not a cocycle over this quandle; \
             the state sum is not a link invariant"
        );
    }
    ok
}

fn ring_line(ring: &GroundRing) -> String {
    let h: Vec<String> = ring.h_coeffs().iter().map(|c| c.to_string()).collect();
    format!("F_{}[w]/({})", ring.p(), h.join(" "))
}

fn cmd_axioms(args: &RingArgs) -> Result<String> {
    let quandle = args.quandle()?;
    let ring = quandle.ring();
    let report = quandle.check_axioms();
    let mut out = String::new();
    writeln!(out, "ring: {}", ring_line(ring)).unwrap();
    writeln!(out, "order: {}", ring.order()).unwrap();
    writeln!(out, "omega: {}", ring.element_string(quandle.omega())).unwrap();
    writeln!(out, "trivial: {}", quandle.is_trivial()).unwrap();
    match report.witness {
        None => writeln!(out, "axioms: ok").unwrap(),
        Some(w) => {
            writeln!(out, "axioms: fail").unwrap();
            writeln!(out, "witness: {w}").unwrap();
        }
    }
    Ok(out)
}

fn cmd_basis(deg: u8, args: &RingArgs) -> Result<String> {
    let quandle = args.quandle()?;
    let basis = match deg {
        2 => basis_h2(&quandle)?,
        _ => basis_h3(&quandle)?,
    };
    let mut out = String::new();
    writeln!(out, "count: {}", basis.len()).unwrap();
    for (name, poly) in &basis {
        writeln!(out, "{name} = {poly}").unwrap();
    }
    Ok(out)
}

fn cmd_cocycle_check(selector: &str, args: &RingArgs) -> Result<(String, bool)> {
    let quandle = args.quandle()?;
    let c = resolve_cochain(selector, &quandle, None)?;
    let ok = c.is_cocycle(&quandle);
    let mut out = String::new();
    writeln!(out, "cochain: {c}").unwrap();
    writeln!(out, "arity: {}", c.nvars()).unwrap();
    writeln!(out, "is_cocycle: {ok}").unwrap();
    Ok((out, ok))
}

fn cmd_diagram(braid: &str) -> Result<String> {
    let word = BraidWord::parse(braid)?;
    let d = LinkDiagram::new(&word)?;
    let mut out = String::new();
    writeln!(out, "word: {word}").unwrap();
    writeln!(out, "strands: {}", d.strands()).unwrap();
    writeln!(out, "rows: {}", d.rows()).unwrap();
    writeln!(out, "arcs: {}", d.num_arcs()).unwrap();
    writeln!(out, "components: {}", d.components()).unwrap();
    writeln!(
        out,
        "regions: {} (unbounded: {})",
        d.num_regions(),
        d.unbounded_region()
    )
    .unwrap();
    for r in 0..d.rows() + 1 {
        let arcs: Vec<String> = (0..d.strands()).map(|j| d.arc_at(r, j).to_string()).collect();
        writeln!(out, "slice {r}: arcs [{}]", arcs.join(", ")).unwrap();
    }
    for (i, c) in d.crossings().iter().enumerate() {
        writeln!(
            out,
            "crossing {i}: sign={:+} over={} under_in={} under_out={} row={} lane={} \
             corners=[{}, {}, {}, {}]",
            c.sign,
            c.over,
            c.under_in,
            c.under_out,
            c.row,
            c.lane,
            c.corners[0],
            c.corners[1],
            c.corners[2],
            c.corners[3]
        )
        .unwrap();
    }
    Ok(out)
}

fn cmd_color(braid: &str, args: &RingArgs, policy: &str) -> Result<String> {
    let quandle = args.quandle()?;
    let word = BraidWord::parse(braid)?;
    let policy = parse_policy(policy, quandle.ring())?;
    let (_, colorings) = enumerate_colorings(&word, &quandle, &policy)?;
    Ok(format!("{}\n", colorings.len()))
}

fn cmd_invariant(
    braid: &str,
    deg: u8,
    cocycle: &str,
    args: &RingArgs,
    policy: &str,
    diag: bool,
) -> Result<String> {
    let quandle = args.quandle()?;
    let word = BraidWord::parse(braid)?;
    let policy = parse_policy(policy, quandle.ring())?;
    let c = resolve_cochain(cocycle, &quandle, Some(deg as usize))?;
    warn_if_not_cocycle(&c, &quandle);
    let (g, detail) = match deg {
        2 => state_sum_2_detailed(&word, &c, &quandle, &policy)?,
        _ => state_sum_3_detailed(&word, &c, &quandle, &policy)?,
    };
    let mut out = emit_groupring(&g);
    if diag {
        let ring = quandle.ring();
        for (i, (class, sym)) in detail.per_coloring.iter().enumerate() {
            writeln!(
                out,
                "# state {i}: exp_in_S=\"{}\" symbolic=\"{sym}\"",
                ring.element_string(class)
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn cmd_operator(braid: &str, cocycle: &str, args: &RingArgs) -> Result<String> {
    let quandle = args.quandle()?;
    let word = BraidWord::parse(braid)?;
    let c = resolve_cochain(cocycle, &quandle, Some(2))?;
    warn_if_not_cocycle(&c, &quandle);
    let r = build_r_matrix_unchecked(&c, &quandle)?;
    let g = operator_invariant(&word, &r)?;
    Ok(emit_groupring(&g))
}

fn cmd_ybe(cocycle: &str, args: &RingArgs) -> Result<(String, bool)> {
    let quandle = args.quandle()?;
    let c = resolve_cochain(cocycle, &quandle, Some(2))?;
    let is_cocycle = c.is_cocycle(&quandle);
    let r = build_r_matrix_unchecked(&c, &quandle)?;
    let ybe = r.check_yang_baxter();
    let markov = r.markov_conditions();
    let mut out = String::new();
    writeln!(out, "is_cocycle: {is_cocycle}").unwrap();
    writeln!(out, "yang_baxter: {ybe}").unwrap();
    writeln!(out, "markov: {markov}").unwrap();
    Ok((out, ybe && markov))
}

fn residue_table(series: &HbarSeries, report: &VassilievReport) -> String {
    let mut out = String::from("d | u_d | d!*u_d mod p | flags\n");
    for (d, coeff) in series.coeffs().iter().enumerate() {
        let (residue, flags) = match report.residues[d] {
            Some(v) => (v.to_string(), ""),
            None => ("-".to_string(), "non-p-integral"),
        };
        writeln!(out, "{d} | {coeff} | {residue} | {flags}").unwrap();
    }
    out
}

fn cmd_expand(
    input: &std::path::Path,
    a: i64,
    b: i64,
    degree: usize,
    h_override: Option<&str>,
) -> Result<String> {
    let g = read_groupring(input)?;
    let h: Vec<i64> = match h_override {
        Some(text) => text
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<i64>()
                    .with_context(|| format!("bad coefficient '{tok}' in --h"))
            })
            .collect::<Result<_>>()?,
        None => g.ring().h_coeffs().iter().map(|&c| c as i64).collect(),
    };
    let params = SubstitutionParams {
        a,
        b,
        p: g.ring().p(),
        h,
        degree,
    };
    let series = qv_core::expansion::expand(&g, &params)?;
    let report = vassiliev_coeffs(&series, params.p);
    Ok(residue_table(&series, &report))
}

#[allow(clippy::too_many_arguments)]
fn cmd_vassiliev(
    braid: &str,
    deg: u8,
    cocycle: &str,
    args: &RingArgs,
    policy: &str,
    a: i64,
    b: i64,
    degree: usize,
) -> Result<String> {
    let quandle = args.quandle()?;
    let word = BraidWord::parse(braid)?;
    let policy = parse_policy(policy, quandle.ring())?;
    let c = resolve_cochain(cocycle, &quandle, Some(deg as usize))?;
    warn_if_not_cocycle(&c, &quandle);
    let params = SubstitutionParams {
        a,
        b,
        p: quandle.ring().p(),
        h: args.h_ints()?,
        degree,
    };
    let config = CocycleConfig {
        quandle,
        cochain: c,
        degree: if deg == 2 { SumDegree::Two } else { SumDegree::Three },
        policy,
    };
    let series = singular_vassiliev_unchecked(&word, &config, &params)?;
    let report = vassiliev_coeffs(&series, params.p);
    Ok(residue_table(&series, &report))
}

fn cmd_repro(example: &str, n: usize) -> Result<String> {
    let word = BraidWord::torus(n);
    let (quandle, cochain, policy, params) = match example {
        "example111" => {
            let ring = GroundRing::new(2, &[1, 1, 1])?;
            let omega = ring.omega();
            let quandle = AlexanderQuandle::new(ring, omega)?;
            let cochain = named_cocycle("example111", &quandle)?;
            (
                quandle,
                cochain,
                ColoringPolicy::SumAll,
                SubstitutionParams::new(3, 2, 2, &[1, 1, 1]).with_degree(7),
            )
        }
        _ => {
            let ring = GroundRing::new(3, &[1, -1, 1])?;
            let omega = ring.omega();
            let quandle = AlexanderQuandle::new(ring, omega)?;
            let cochain = named_cocycle("mochizuki-p3", &quandle)?;
            let zero = quandle.ring().zero();
            (
                quandle,
                cochain,
                ColoringPolicy::FixArcAndRegion {
                    arc: 0,
                    color: zero.clone(),
                    region: zero,
                },
                SubstitutionParams::new(2, 1, 3, &[1, -1, 1]).with_degree(7),
            )
        }
    };
    warn_if_not_cocycle(&cochain, &quandle);
    let (g, _) = if cochain.nvars() == 2 {
        state_sum_2_detailed(&word, &cochain, &quandle, &policy)?
    } else {
        state_sum_3_detailed(&word, &cochain, &quandle, &policy)?
    };
    let series = qv_core::expansion::expand(&g, &params)?;
    let report = vassiliev_coeffs(&series, params.p);
    let mut out = String::new();
    writeln!(out, "example: {example}").unwrap();
    writeln!(out, "braid: {word}").unwrap();
    writeln!(out, "Phi = {g}").unwrap();
    writeln!(out, "Phi(t=1) = {}", g.eval_t1()).unwrap();
    out.push('\n');
    out.push_str(&emit_groupring(&g));
    out.push('\n');
    out.push_str(&residue_table(&series, &report));
    Ok(out)
}
