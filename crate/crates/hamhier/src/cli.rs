//! Argument parsing and the verbs.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use hamhier_core::diffpoly::{parse_diffpoly, VarNames};
use hamhier_core::drspin::{
    assemble_hamiltonian, builtin_g11, enumerate_profiles, hain_expand, pair_with_table, APoly, IntegralTable,
    Pairing, Profile,
};
use hamhier_core::gdhier::{reference, GDContext};
use hamhier_core::hamops::MiuraMap;
use hamhier_core::quantize::{f_r_map, weyl_commutator, weyl_star, CommRule, WeylElement};
use hamhier_core::reconstruct::{
    check_string_dilaton, recursion_residual, rspin_eta, special_solution, verify_theorem_main, Bounds,
    GenusZeroData,
};
use hamhier_core::{DiffPoly, LocalFunctional};
use serde::Serialize;
use serde_json::json;

use crate::render::{self, Format};
use crate::schema::{
    APolyJson, DiffPolyJson, OperatorJson, ProfileJson, PSeriesJson, SolutionJson, TableJson, VerdictJson,
};
use crate::CliError;

/// Process exit status; each failure class has its own code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitStatus {
    Ok = 0,
    VerdictFailed = 1,
    BadOptions = 2,
    UnknownVerb = 3,
    MissingFile = 4,
    TableMiss = 5,
    BadInput = 6,
    ComputeError = 7,
}

#[derive(Debug, Parser)]
#[command(name = "hamhier", version, about = "Exact computations with hamiltonian hierarchies")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Vars {
    U,
    W,
    F,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Gelfand–Dickey Hamiltonian h_m (in the Lax coefficients f).
    Gd {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=8))]
        r: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        /// Fixed depth of the Lax root; provisioned automatically when absent.
        #[arg(long)]
        depth: Option<u32>,
        /// Also print the Hamiltonian operator.
        #[arg(long)]
        operator: bool,
    },
    /// r-spin operator and Hamiltonian h_{alpha,d} in normal coordinates w.
    Rspin {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=8))]
        r: u32,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Degree profiles allowed by the selection rule.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=12))]
        r: u32,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
    /// Pairs the DR expansion with an integral table.
    HainPair {
        #[arg(long)]
        table_file: PathBuf,
        /// Direct route: marking 1 has zero weight and carries psi^d.
        #[arg(long)]
        d: Option<u32>,
        #[command(flatten)]
        policy: Policy,
    },
    /// Assembles the Hamiltonian contribution of one or more tables.
    Assemble {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=12))]
        r: u32,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long = "table-file", required = true)]
        table_files: Vec<PathBuf>,
        #[command(flatten)]
        policy: Policy,
    },
    /// Built-in first descendant Hamiltonian of the DR hierarchy.
    DrG11 {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=5))]
        r: u32,
    },
    /// Checks that a Miura map relates the DR and r-spin data.
    VerifyMain {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=5))]
        r: u32,
        /// Highest power of eps kept (default 2(r-1)).
        #[arg(long)]
        eps_order: Option<u16>,
        /// Use the identity map instead of the built-in one.
        #[arg(long)]
        identity: bool,
    },
    /// Special solution via the string/dilaton recursion.
    Reconstruct {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=5))]
        r: u32,
        #[arg(long, default_value_t = 3)]
        t_max: u16,
        /// Total degree in the times.
        #[arg(long, default_value_t = 4)]
        t_degree: u16,
        #[arg(long, default_value_t = 4)]
        eps_order: u16,
        /// Use the r-spin h_{1,1} instead of the built-in DR one.
        #[arg(long)]
        from_gd: bool,
    },
    /// Associativity and f_r homomorphism checks on generators of the mode algebra.
    QuantizeCheck {
        #[arg(long, value_parser = clap::value_parser!(u32).range(4..=5))]
        r: u32,
        /// Modes p_k with |k| <= window.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(i32).range(1..=4))]
        window: i32,
    },
    /// Renders a differential polynomial given as JSON on stdin or as an expression.
    Render {
        #[arg(long, value_enum, default_value_t = Vars::U)]
        vars: Vars,
        /// Number of fields for --expr.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Expression in text form instead of JSON input.
        #[arg(long)]
        expr: Option<String>,
        /// Read JSON from this file instead of stdin.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, clap::Args)]
pub struct Policy {
    /// Missing table entries are errors.
    #[arg(long, conflicts_with = "default_zero")]
    strict: bool,
    /// Missing table entries read as zero.
    #[arg(long)]
    default_zero: bool,
}

impl Policy {
    fn apply(&self, t: &mut IntegralTable) {
        if self.strict {
            t.default_zero = false;
        } else if self.default_zero {
            t.default_zero = true;
        }
    }
}

/// Parses `args` (including the program name) and runs the verb.
pub fn run(args: &[String], stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e);
                    return ExitStatus::Ok;
                }
                ErrorKind::InvalidSubcommand => ExitStatus::UnknownVerb,
                _ => ExitStatus::BadOptions,
            };
            let _ = write!(err, "{}", e);
            return status;
        }
    };
    match execute(&cli, stdin) {
        Ok((text, pass)) => {
            let _ = out.write_all(text.as_bytes());
            if pass {
                ExitStatus::Ok
            } else {
                ExitStatus::VerdictFailed
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            e.status()
        }
    }
}

type Outcome = Result<(String, bool), CliError>;

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn lines(ls: Vec<String>) -> String {
    let mut s = ls.join("\n");
    s.push('\n');
    s
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    let fmt = cli.format;
    let latex = fmt == Format::Latex;
    match &cli.verb {
        Verb::Gd { r, m, depth, operator } => {
            let ctx = context(*r, *depth)?;
            let h = ctx.gd_hamiltonian(*m)?;
            let k = if *operator { Some(ctx.gd_operator()?.clone()) } else { None };
            let names = VarNames::f(*r as usize - 1);
            if fmt == Format::Json {
                let op = k.as_ref().map(OperatorJson::from_operator).transpose()?;
                let v = json!({ "r": r, "m": m, "hamiltonian": DiffPolyJson::from_functional(&h)?, "operator": op });
                return Ok((to_json(&v)?, true));
            }
            let mut ls = vec![format!("h_{} = {}", m, render::functional(&h, &names, latex))];
            if let Some(k) = k {
                ls.push(render::operator(&k, &names, latex));
            }
            Ok((lines(ls), true))
        }
        Verb::Rspin { r, alpha, d, depth } => {
            if *alpha == 0 || *alpha >= *r {
                return Err(CliError::Options(format!("alpha must lie in 1..={}", r - 1)));
            }
            let ctx = context(*r, *depth)?;
            let (k, h) = ctx.rspin_system(*alpha, *d)?;
            let names = VarNames::w(*r as usize - 1);
            if fmt == Format::Json {
                let v = json!({
                    "r": r, "alpha": alpha, "d": d,
                    "operator": OperatorJson::from_operator(&k)?,
                    "hamiltonian": DiffPolyJson::from_functional(&h)?,
                });
                return Ok((to_json(&v)?, true));
            }
            Ok((
                lines(vec![
                    render::operator(&k, &names, latex),
                    format!("h_{{{},{}}} = {}", alpha, d, render::functional(&h, &names, latex)),
                ]),
                true,
            ))
        }
        Verb::Enumerate { r, alpha, d } => {
            let ps = enumerate_profiles(*r, *alpha, *d)?;
            if fmt == Format::Json {
                return Ok((to_json(&ps.iter().map(ProfileJson::from).collect::<Vec<_>>())?, true));
            }
            let mut ls: Vec<String> = ps.iter().map(|p| profile_line(p, latex)).collect();
            ls.push(format!("{} profiles", ps.len()));
            Ok((lines(ls), true))
        }
        Verb::HainPair { table_file, d, policy } => {
            let mut table = load_table(table_file)?;
            policy.apply(&mut table);
            let (exp, route) = match d {
                None => (hain_expand(table.g, table.n(), None), Pairing::Dilaton),
                Some(d) => (hain_expand(table.g, table.n(), Some(1)), Pairing::Direct { d: *d }),
            };
            let p = pair_with_table(&exp, &table, route)?;
            if fmt == Format::Json {
                return Ok((to_json(&APolyJson::from(&p))?, true));
            }
            Ok((lines(vec![apoly_text(&p, latex)]), true))
        }
        Verb::Assemble { r, alpha, d, table_files, policy } => {
            let tables = table_files.iter().map(|f| load_table(f)).collect::<Result<Vec<_>, _>>()?;
            let mut contributions = Vec::new();
            for mut t in tables {
                policy.apply(&mut t);
                contributions.push(contribution(*r, *alpha, *d, &t)?);
            }
            let h = assemble_hamiltonian(*r, &contributions)?;
            functional_output(&h, &VarNames::u(*r as usize - 1), fmt, "T")
        }
        Verb::DrG11 { r } => {
            let g = builtin_g11(*r)?;
            let names = VarNames::u(*r as usize - 1);
            if fmt == Format::Json {
                return Ok((to_json(&DiffPolyJson::from_functional(&g)?)?, true));
            }
            let body = render::poly(g.density(), &names, latex);
            Ok((lines(vec![if latex { format!("\\bar g_{{1,1}} = \\int \\left({}\\right) dx", body) } else { format!("g_{{1,1}} = ∫ ({}) dx", body) }]), true))
        }
        Verb::VerifyMain { r, eps_order, identity } => {
            let e = eps_order.unwrap_or(2 * (*r as u16 - 1));
            let map = if *identity || *r == 3 { MiuraMap::identity(*r as usize - 1) } else { reference::theorem_miura(*r)? };
            let v = verify_theorem_main(*r, &map, e, &builtin_g11(*r)?)?;
            let pass = v.holds();
            if fmt == Format::Json {
                return Ok((to_json(&VerdictJson::from_verdict(&v)?)?, pass));
            }
            let names = VarNames::u(*r as usize - 1);
            let mut ls = vec![
                format!("r = {}, eps order {}", r, e),
                format!("map: {}", map_text(&map, &names)),
                format!("condition 1 (dw/du1 = e_1): {}", v.conditions[0]),
                format!("condition 2 (operator): {}", v.conditions[1]),
                format!("condition 3 (h_{{1,1}}): {}", v.conditions[2]),
            ];
            for (a, p) in v.derivative_diffs.iter().enumerate() {
                if !p.is_zero() {
                    ls.push(format!("  dw{}/du1 - delta: {}", a + 1, render::poly(p, &names, latex)));
                }
            }
            for (a, b, op) in &v.operator_diffs {
                for (k, c) in op.coeffs() {
                    ls.push(format!("  K[{},{}] dx^{} diff: {}", a + 1, b + 1, k, render::poly(c, &names, latex)));
                }
            }
            if !v.hamiltonian_diff.is_zero() {
                ls.push(format!("  h_{{1,1}} diff: {}", render::poly(&v.hamiltonian_diff, &names, latex)));
            }
            ls.push(format!("verdict: {}", if pass { "PASS" } else { "FAIL" }));
            Ok((lines(ls), pass))
        }
        Verb::Reconstruct { r, t_max, t_degree, eps_order, from_gd } => {
            let bounds = Bounds { t_max: *t_max, degree: *t_degree, eps: *eps_order };
            hamhier_core::reconstruct::TSeries::check_bounds(*r as usize - 1, bounds)
                .map_err(|e| CliError::Options(e.to_string()))?;
            let ctx = GDContext::new(*r)?;
            let h11 = if *from_gd || *r == 2 { ctx.rspin_hamiltonian(1, 1)? } else { builtin_g11(*r)? };
            let g0 = GenusZeroData::from_gd(&ctx, *t_max)?;
            let sol = special_solution(&h11, &g0, bounds)?;
            let report = check_string_dilaton(&sol)?;
            let rec_ok = recursion_residual(&h11, &g0, &sol)?.iter().all(|s| s.is_zero());
            let pass = report.is_zero() && rec_ok;
            if fmt == Format::Json {
                let v = json!({
                    "solution": SolutionJson::from_solution(&sol)?,
                    "string_dilaton_zero": report.is_zero(),
                    "recursion_closed": rec_ok,
                    "residuals": report.locations(),
                });
                return Ok((to_json(&v)?, pass));
            }
            let mut s = sol.to_text();
            for l in report.locations() {
                s.push_str(&l);
                s.push('\n');
            }
            s.push_str(&format!(
                "string/dilaton residuals: {}\nrecursion: {}\n",
                if report.is_zero() { "zero" } else { "NONZERO" },
                if rec_ok { "closed" } else { "NOT closed" }
            ));
            Ok((s, pass))
        }
        Verb::QuantizeCheck { r, window } => quantize_check(*r, *window, fmt),
        Verb::Render { vars, n, expr, input } => {
            let (p, integrated) = match expr {
                Some(e) => (parse_diffpoly(e, &names_for(*vars, *n))?, false),
                None => {
                    let mut s = String::new();
                    match input {
                        Some(path) => s = read_file(path)?,
                        None => {
                            stdin.read_to_string(&mut s).map_err(|e| CliError::Input(e.to_string()))?;
                        }
                    }
                    let j: DiffPolyJson =
                        serde_json::from_str(&s).map_err(|e| CliError::Input(format!("diffpoly JSON: {}", e)))?;
                    (j.to_poly()?, j.is_integrated())
                }
            };
            let names = names_for(*vars, p.n_fields());
            if fmt == Format::Json {
                let mut j = DiffPolyJson::from_poly(&p)?;
                j.integrated = integrated.then_some(true);
                return Ok((to_json(&j)?, true));
            }
            let body = render::poly(&p, &names, latex);
            let s = match (integrated, latex) {
                (false, _) => body,
                (true, false) => format!("∫ ({}) dx", body),
                (true, true) => format!("\\int \\left({}\\right) dx", body),
            };
            Ok((lines(vec![s]), true))
        }
    }
}

fn context(r: u32, depth: Option<u32>) -> Result<GDContext, CliError> {
    Ok(match depth {
        Some(d) => GDContext::with_depth(r, d)?,
        None => GDContext::new(r)?,
    })
}

fn names_for(v: Vars, n: usize) -> VarNames {
    match v {
        Vars::U => VarNames::u(n),
        Vars::W => VarNames::w(n),
        Vars::F => VarNames::f(n),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::MissingFile(format!("{}: {}", path.display(), e)))
}

fn load_table(path: &Path) -> Result<IntegralTable, CliError> {
    let s = read_file(path)?;
    let j: TableJson = serde_json::from_str(&s)
        .map_err(|e| CliError::Input(format!("table {}: {}", path.display(), e)))?;
    j.to_table()
}

/// The profile read off a table: labels are the ordinary markings (dilaton route) or
/// marking 1 carries `alpha` and the rest are ordinary (direct route).
fn contribution(r: u32, alpha: u32, d: u32, t: &IntegralTable) -> Result<(Profile, APoly), CliError> {
    let dilaton = (alpha, d) == (1, 1);
    let ordinary: &[u32] = if dilaton {
        &t.labels
    } else {
        match t.labels.split_first() {
            Some((&first, rest)) if first == alpha => rest,
            _ => return Err(CliError::Options(format!("direct route needs marking 1 labelled {}", alpha))),
        }
    };
    let mut counts = vec![0u32; r as usize - 1];
    for &l in ordinary {
        if l == 0 || l >= r {
            return Err(CliError::Options(format!("label {} outside 1..={}", l, r - 1)));
        }
        counts[l as usize - 1] += 1;
    }
    if ordinary.windows(2).any(|w| w[0] > w[1]) {
        return Err(CliError::Options("table labels must be sorted".into()));
    }
    let poly = if dilaton {
        pair_with_table(&hain_expand(t.g, t.n(), None), t, Pairing::Dilaton)?
    } else {
        pair_with_table(&hain_expand(t.g, t.n(), Some(1)), t, Pairing::Direct { d })?
    };
    Ok((Profile { g: t.g, counts, alpha, d }, poly))
}

fn functional_output(h: &LocalFunctional, names: &VarNames, fmt: Format, label: &str) -> Outcome {
    if fmt == Format::Json {
        return Ok((to_json(&DiffPolyJson::from_functional(h)?)?, true));
    }
    Ok((lines(vec![format!("{} = {}", label, render::functional(h, names, fmt == Format::Latex))]), true))
}

fn profile_line(p: &Profile, latex: bool) -> String {
    let c: Vec<String> = p.counts.iter().map(|c| c.to_string()).collect();
    if latex {
        format!("g = {},\\ (n_1, \\dots, n_{{{}}}) = ({})", p.g, p.counts.len(), c.join(", "))
    } else {
        format!("g={} n=({})", p.g, c.join(","))
    }
}

fn apoly_text(p: &APoly, latex: bool) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (e, v) in p.terms.iter().rev() {
        let mut f: Vec<String> = Vec::new();
        for (i, k) in e.iter().enumerate() {
            match (k, latex) {
                (0, _) => {}
                (1, false) => f.push(format!("a{}", i + 1)),
                (_, false) => f.push(format!("a{}^{}", i + 1, k)),
                (1, true) => f.push(format!("a_{{{}}}", i + 1)),
                (_, true) => f.push(format!("a_{{{}}}^{{{}}}", i + 1, k)),
            }
        }
        let coeff = v.to_string();
        parts.push(match (f.is_empty(), coeff.as_str()) {
            (true, _) => coeff,
            (false, "1") => f.join(if latex { " " } else { "*" }),
            (false, "-1") => format!("-{}", f.join(if latex { " " } else { "*" })),
            (false, _) if latex => format!("{} {}", coeff, f.join(" ")),
            (false, _) => format!("{}*{}", coeff, f.join("*")),
        });
    }
    parts.join(" + ").replace("+ -", "- ")
}

fn map_text(m: &MiuraMap, names: &VarNames) -> String {
    let w = VarNames::w(names.n);
    m.images()
        .iter()
        .enumerate()
        .map(|(a, p)| {
            let lhs = hamhier_core::diffpoly::render_text(&DiffPoly::var(names.n, a as u16, 0), &w);
            format!("{} = {}", lhs, render::poly(p, names, false))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn generators(n: usize, window: i32) -> Result<Vec<WeylElement>, CliError> {
    let mut out = Vec::new();
    for a in 0..n as u16 {
        for k in -window..=window {
            out.push(WeylElement::var(n, window, a, k)?);
        }
    }
    Ok(out)
}

fn quantize_check(r: u32, window: i32, fmt: Format) -> Outcome {
    let n = r as usize - 1;
    let def = CommRule::deformed(r)?;
    let std_rule = CommRule::standard(rspin_eta(r));
    let gens = generators(n, window)?;
    let mut quad = gens.clone();
    for i in 0..gens.len() {
        for j in i..gens.len() {
            quad.push(gens[i].symbol_mul(&gens[j])?);
        }
    }
    let mut assoc_fail = 0usize;
    let mut assoc_total = 0usize;
    for a in &gens {
        for b in &gens {
            let ab = weyl_star(a, b, &def)?;
            for c in &gens {
                let lhs = weyl_star(&ab, c, &def)?;
                let rhs = weyl_star(a, &weyl_star(b, c, &def)?, &def)?;
                assoc_total += 1;
                if lhs != rhs {
                    assoc_fail += 1;
                }
            }
        }
    }
    let mut hom_fail = 0usize;
    let mut hom_total = 0usize;
    for a in &gens {
        let fa = f_r_map(r, a)?;
        for b in &quad {
            let lhs = f_r_map(r, &weyl_star(a, b, &def)?)?;
            let rhs = weyl_star(&fa, &f_r_map(r, b)?, &std_rule)?;
            hom_total += 1;
            if lhs != rhs {
                hom_fail += 1;
            }
        }
    }
    let mut table: Vec<(String, WeylElement)> = Vec::new();
    for a in 0..n as u16 {
        for b in 0..n as u16 {
            for k in 1..=window {
                let c = weyl_commutator(&WeylElement::var(n, window, a, k)?, &WeylElement::var(n, window, b, -k)?, &def)?;
                if !c.is_zero() {
                    table.push((format!("[p{}_{}, p{}_{}]", a + 1, k, b + 1, -k), c));
                }
            }
        }
    }
    let pass = assoc_fail == 0 && hom_fail == 0;
    if fmt == Format::Json {
        let tag = format!("deformed-r{}", r);
        let entries = table
            .iter()
            .map(|(k, v)| Ok(json!({ "bracket": k, "value": PSeriesJson::from_weyl(v, &tag)? })))
            .collect::<Result<Vec<_>, CliError>>()?;
        let v = json!({
            "r": r, "window": window,
            "associativity": { "checked": assoc_total, "failed": assoc_fail },
            "homomorphism": { "checked": hom_total, "failed": hom_fail },
            "commutators": entries,
        });
        return Ok((to_json(&v)?, pass));
    }
    let mut ls = vec![
        format!("r = {}, window {}", r, window),
        format!("associativity: {}/{} triples agree", assoc_total - assoc_fail, assoc_total),
        format!("f_{} homomorphism: {}/{} pairs agree", r, hom_total - hom_fail, hom_total),
    ];
    for (k, v) in &table {
        ls.push(format!("{} = {}", k, v.to_text()));
    }
    ls.push(format!("verdict: {}", if pass { "PASS" } else { "FAIL" }));
    Ok((lines(ls), pass))
}
