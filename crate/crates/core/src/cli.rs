//! Command-line front end and the built-in scenario catalog.
//!
//! Every command writes a human-readable report followed by `key=value`
//! trailer lines. Exit codes: 0 when all checks pass, 1 for a failed or
//! undecided verification, 2 for bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adjfun::{mackey_check, restrict};
use crate::decomp::{classify, indecomposable_summands, ClassRegistry};
use crate::error::{Error, Result};
use crate::green::{
    check_dagger, default_dagger_basket, green_f, green_g, harvest_basket, parse_scenario, stable_hom_correspondence,
    verify_round_trip, BasketSpec, GreenPair, Scenario, ScenarioSpec,
};
use crate::grp::{are_conjugate, parse_group, sylow, PermGroup, Subgroup, DEFAULT_ORDER_CAP};
use crate::relhom::{
    check_cone, is_relatively_projective, relative_cone, sylow_starts, vertex, vertex_from, SubgroupFamily,
};
use crate::repmod::{direct_sum, hom_space, is_isomorphic, module_seed, parse_module, random_coords, Module};

/// Built-in group files, by name.
pub const CATALOG_GROUPS: &[(&str, &str)] = &[
    ("s3.grp", include_str!("../catalog/s3.grp")),
    ("s4.grp", include_str!("../catalog/s4.grp")),
    ("a4.grp", include_str!("../catalog/a4.grp")),
    ("s5.grp", include_str!("../catalog/s5.grp")),
];

/// Built-in scenarios in report order.
pub const CATALOG_SCENARIOS: &[(&str, &str)] = &[
    ("s3_p2", include_str!("../catalog/s3_p2.scn")),
    ("s4_p3", include_str!("../catalog/s4_p3.scn")),
    ("s4_p2", include_str!("../catalog/s4_p2.scn")),
    ("a4_p2_degenerate", include_str!("../catalog/a4_p2_degenerate.scn")),
    ("f20_in_s5_p5", include_str!("../catalog/f20_in_s5_p5.scn")),
];

/// Random maps per scenario in the relative-triangle checks of `verify`.
const VERIFY_CONE_MAPS: usize = 5;

#[derive(Parser, Debug)]
#[command(name = "greencorr", version, about = "Green correspondence for finite group algebras over GF(p)")]
pub struct Cli {
    /// Run seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print only the trailer lines.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Largest group order accepted when enumerating.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    pub max_order: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order and generators of a group; optionally its p-subgroups.
    GroupInfo {
        group: PathBuf,
        /// Count p-subgroups by order for this prime.
        #[arg(long)]
        p_subgroups: Option<u32>,
    },
    /// Decompose a module into indecomposable summand classes.
    Decompose { group: PathBuf, module: PathBuf },
    /// Vertex of an indecomposable module.
    Vertex {
        group: PathBuf,
        module: PathBuf,
        /// Must match the prime of the module file.
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Green correspondents over a scenario (a .scn path or a catalog name).
    Green {
        scenario: String,
        /// A single module over H instead of the basket.
        #[arg(long)]
        module: Option<PathBuf>,
    },
    /// Full verification of one scenario or of the whole catalog.
    Verify {
        scenario: Option<String>,
        #[arg(long)]
        catalog: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Pass,
    Fail,
    BadInput,
}

/// Accumulated report text and exit status.
pub struct Report {
    body: String,
    trailer: Vec<String>,
    status: Status,
    quiet: bool,
}

impl Report {
    fn new(quiet: bool) -> Self {
        Report { body: String::new(), trailer: Vec::new(), status: Status::Pass, quiet }
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.body.push_str(text.as_ref());
        self.body.push('\n');
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.trailer.push(format!("{key}={value}"));
    }

    fn check(&mut self, key: &str, ok: bool, detail: impl std::fmt::Display) {
        if !ok {
            self.status = self.status.max(Status::Fail);
        }
        self.kv(key, format!("{} {detail}", if ok { "PASS" } else { "FAIL" }));
    }

    /// Records an error under `key`; input errors set exit code 2.
    fn error(&mut self, key: &str, e: &Error) {
        let status = if e.is_input_error() { Status::BadInput } else { Status::Fail };
        self.status = self.status.max(status);
        self.line(format!("error: {e}"));
        self.kv(key, format!("FAIL {}", one_line(&e.to_string())));
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::BadInput => 2,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.quiet {
            out.push_str(&self.body);
            out.push('\n');
        }
        for t in &self.trailer {
            out.push_str(t);
            out.push('\n');
        }
        let verdict = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::BadInput => "INPUT_ERROR",
        };
        let _ = writeln!(out, "verdict={verdict}");
        out
    }
}

fn one_line(s: &str) -> String {
    s.replace('\n', " ")
}

/// Parses `args` and runs the command, returning the exit code and the
/// report text.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let mut report = Report::new(cli.quiet);
    report.line(format!("command: {}", command_echo(&cli.command)));
    report.line(format!("seed: {}", cli.seed));
    report.kv("seed", cli.seed);
    let result = match &cli.command {
        Command::GroupInfo { group, p_subgroups } => cmd_group_info(&cli, group, *p_subgroups, &mut report),
        Command::Decompose { group, module } => cmd_decompose(&cli, group, module, &mut report),
        Command::Vertex { group, module, prime } => cmd_vertex(&cli, group, module, *prime, &mut report),
        Command::Green { scenario, module } => cmd_green(&cli, scenario, module.as_deref(), &mut report),
        Command::Verify { scenario, catalog } => cmd_verify(&cli, scenario.as_deref(), *catalog, &mut report),
    };
    if let Err(e) = result {
        report.error("error", &e);
    }
    (report.exit_code(), report.render())
}

fn command_echo(c: &Command) -> String {
    match c {
        Command::GroupInfo { group, p_subgroups } => match p_subgroups {
            Some(p) => format!("group-info {} --p-subgroups {p}", group.display()),
            None => format!("group-info {}", group.display()),
        },
        Command::Decompose { group, module } => format!("decompose {} {}", group.display(), module.display()),
        Command::Vertex { group, module, .. } => format!("vertex {} {}", group.display(), module.display()),
        Command::Green { scenario, module } => match module {
            Some(m) => format!("green {scenario} --module {}", m.display()),
            None => format!("green {scenario}"),
        },
        Command::Verify { scenario, catalog } => match (scenario, catalog) {
            (_, true) => "verify --catalog".to_string(),
            (Some(s), false) => format!("verify {s}"),
            (None, false) => "verify".to_string(),
        },
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "module".into())
}

fn load_group(cli: &Cli, path: &Path) -> Result<Arc<PermGroup>> {
    parse_group(&read(path)?, cli.max_order)
}

fn cmd_group_info(cli: &Cli, path: &Path, p: Option<u32>, r: &mut Report) -> Result<()> {
    let g = load_group(cli, path)?;
    r.line(format!("degree: {}", g.degree()));
    r.line(format!("order: {}", g.order()));
    for (i, s) in g.generators().iter().enumerate() {
        r.line(format!("gen {i}: {s}"));
    }
    r.kv("degree", g.degree());
    r.kv("order", g.order());
    if let Some(p) = p {
        crate::ffmat::PrimeField::new(p)?;
        let fam = SubgroupFamily::closure(&g, &[sylow(&g, p as usize)])?;
        let mut counts: Vec<(usize, usize)> = Vec::new();
        for m in fam.members() {
            match counts.last_mut() {
                Some((o, c)) if *o == m.order() => *c += 1,
                _ => counts.push((m.order(), 1)),
            }
        }
        r.line(format!("{p}-subgroups by order:"));
        for (o, c) in &counts {
            r.line(format!("  order {o:>4}: {c}"));
        }
        let list: Vec<String> = counts.iter().map(|(o, c)| format!("{o}:{c}")).collect();
        r.kv("p_subgroups", list.join(","));
    }
    Ok(())
}

fn cmd_decompose(cli: &Cli, gpath: &Path, mpath: &Path, r: &mut Report) -> Result<()> {
    let g = load_group(cli, gpath)?;
    let m = parse_module(&read(mpath)?, &g, &stem(mpath))?;
    r.line(format!("module {} of dimension {} over GF({})", m.label(), m.dim(), m.prime()));
    let dec = indecomposable_summands(&m, cli.seed)?;
    let mut reg = ClassRegistry::new(cli.seed);
    let classes = classify(&dec, &mut reg)?;
    r.line(format!("{:>5}  {:>5}  {:>12}", "class", "dim", "multiplicity"));
    for (id, mult) in &classes {
        r.line(format!("{id:>5}  {:>5}  {mult:>12}", reg.representative(*id).dim()));
    }
    let dims: Vec<String> = classes
        .iter()
        .map(|(id, mult)| format!("{}x{mult}", reg.representative(*id).dim()))
        .collect();
    r.kv("summands", dec.summands.len());
    r.kv("classes", dims.join(","));
    Ok(())
}

fn describe(s: &Subgroup) -> String {
    format!("order {} <{}>", s.order(), s.generators_display())
}

fn cmd_vertex(cli: &Cli, gpath: &Path, mpath: &Path, prime: Option<u32>, r: &mut Report) -> Result<()> {
    let g = load_group(cli, gpath)?;
    let m = parse_module(&read(mpath)?, &g, &stem(mpath))?;
    if let Some(p) = prime {
        if p != m.prime() {
            return Err(Error::input(format!("--prime {p} does not match the module's prime {}", m.prime())));
        }
    }
    let dec = indecomposable_summands(&m, cli.seed)?;
    if dec.summands.len() != 1 {
        let dims: Vec<String> = dec.dims().iter().map(ToString::to_string).collect();
        r.line(format!("{} is decomposable; summand dimensions: {}", m.label(), dims.join(", ")));
        return Err(Error::input("vertex needs an indecomposable module"));
    }
    let v = vertex(&m, cli.seed)?;
    r.line(format!("vertex: {}", describe(&v.vertex)));
    r.line(format!("sylow start: {}", describe(&v.sylow_start)));
    r.line("chain:");
    for (s, ok) in &v.chain {
        r.line(format!("  {:<40} {}", describe(s), if *ok { "projective" } else { "not projective" }));
    }
    r.kv("vertex_order", v.vertex.order());
    r.kv("vertex", format!("<{}>", v.vertex.generators_display()));
    Ok(())
}

/// A scenario with its source files resolved.
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub spec: ScenarioSpec,
    pub base: Option<PathBuf>,
}

fn catalog_group(name: &str) -> Result<&'static str> {
    CATALOG_GROUPS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::input(format!("catalog has no group file {name}")))
}

pub fn load_catalog_scenario(name: &str, max_order: usize) -> Result<LoadedScenario> {
    let (_, text) = CATALOG_SCENARIOS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::input(format!("no catalog scenario {name}")))?;
    let spec = parse_scenario(text)?;
    let g = parse_group(catalog_group(&spec.group_file)?, max_order)?;
    Ok(LoadedScenario { scenario: spec.build(name, &g)?, spec, base: None })
}

/// A path to a `.scn` file, or else the name of a catalog scenario.
pub fn load_scenario(arg: &str, max_order: usize) -> Result<LoadedScenario> {
    let path = Path::new(arg);
    if !path.exists() && CATALOG_SCENARIOS.iter().any(|(n, _)| *n == arg) {
        return load_catalog_scenario(arg, max_order);
    }
    let spec = parse_scenario(&read(path)?)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let g = parse_group(&read(&base.join(&spec.group_file))?, max_order)?;
    Ok(LoadedScenario { scenario: spec.build(&stem(path), &g)?, spec, base: Some(base) })
}

fn scenario_basket(ls: &LoadedScenario, seed: u64) -> Result<Vec<Module>> {
    match &ls.spec.basket {
        BasketSpec::Auto => harvest_basket(&ls.scenario, seed),
        BasketSpec::Files(files) => {
            let base = ls.base.as_ref().ok_or_else(|| Error::input("catalog scenarios use automatic baskets"))?;
            files
                .iter()
                .map(|f| {
                    let p = base.join(f);
                    parse_module(&read(&p)?, ls.scenario.h.group(), &stem(&p))
                })
                .collect()
        }
    }
}

fn scenario_header(s: &Scenario, r: &mut Report) {
    r.line(format!("scenario {}", s.name));
    r.line(format!(
        "  |G| = {}, p = {}, D {}, H {}",
        s.group.order(),
        s.field.prime(),
        describe(&s.d),
        describe(&s.h)
    ));
    let orders = |f: &SubgroupFamily| -> String {
        if f.is_empty() {
            "empty".to_string()
        } else {
            let o: Vec<String> = f.maximal().iter().map(|m| m.order().to_string()).collect();
            format!("maximal orders [{}]", o.join(", "))
        }
    };
    r.line(format!("  Y family over H: {} members, {}", s.yfam.members().len(), orders(&s.yfam)));
    r.line(format!("  X family over G: {} members, {}", s.xfam.members().len(), orders(&s.xfam)));
}

fn discarded_text(p: &GreenPair) -> String {
    if p.discarded.is_empty() {
        return "-".to_string();
    }
    let parts: Vec<String> = p
        .discarded
        .iter()
        .map(|d| format!("{}x{}@{}", d.module.dim(), d.multiplicity, d.vertex.order()))
        .collect();
    parts.join(" ")
}

fn dagger_section(s: &Scenario, seed: u64, key: &str, r: &mut Report) -> Result<()> {
    let dagger = check_dagger(s, &default_dagger_basket(s), seed)?;
    r.line("  dagger condition:");
    if dagger.pieces.is_empty() {
        r.line("    no Y-projective summands in the test basket");
    }
    for piece in &dagger.pieces {
        let classes = if piece.classes.is_empty() {
            "tested whole".to_string()
        } else {
            let c: Vec<String> = piece
                .classes
                .iter()
                .map(|c| format!("{}x{}@{}", c.dim, c.multiplicity, c.vertex.as_ref().map_or(0, Subgroup::order)))
                .collect();
            c.join(" ")
        };
        r.line(format!(
            "    {:<16} dim {:>3} -> {:>4}  {}  {}",
            piece.source,
            piece.y_dim,
            piece.tested_dim,
            if piece.projective { "ok" } else { "NOT Y-projective" },
            classes
        ));
    }
    r.check(key, dagger.passed(), format!("pieces={}", dagger.pieces.len()));
    Ok(())
}

fn cmd_green(cli: &Cli, arg: &str, module: Option<&Path>, r: &mut Report) -> Result<()> {
    let ls = load_scenario(arg, cli.max_order)?;
    let s = &ls.scenario;
    scenario_header(s, r);
    dagger_section(s, cli.seed, "dagger", r)?;
    let basket = match module {
        Some(p) => vec![parse_module(&read(p)?, s.h.group(), &stem(p))?],
        None => scenario_basket(&ls, cli.seed)?,
    };
    r.line(format!("  {:<18} {:>5} {:>6} {:>7}  {}", "N", "dim N", "dim gN", "|vx gN|", "discarded (dim x mult @ |vertex|)"));
    let mut ok = 0;
    for n in &basket {
        let g_pair = green_g(n, s, cli.seed)?;
        let f_pair = green_f(&g_pair.over_g, s, cli.seed)?;
        let back = is_isomorphic(&f_pair.over_h, n, module_seed(cli.seed, n.label(), n.dim()))?.is_some();
        r.line(format!(
            "  {:<18} {:>5} {:>6} {:>7}  {}",
            n.label(),
            n.dim(),
            g_pair.over_g.dim(),
            g_pair.vertex.order(),
            discarded_text(&g_pair)
        ));
        r.line(format!("  {:<18} f(gN) dim {}, discarded {}, f(gN) = N: {back}", "", f_pair.over_h.dim(), discarded_text(&f_pair)));
        if !back {
            return Err(Error::Violation(format!("f(g({0})) is not isomorphic to {0}", n.label())));
        }
        ok += 1;
    }
    r.check("pairs", ok == basket.len(), format!("{ok}/{}", basket.len()));
    Ok(())
}

fn cmd_verify(cli: &Cli, scenario: Option<&str>, catalog: bool, r: &mut Report) -> Result<()> {
    let names: Vec<String> = match (scenario, catalog) {
        (_, true) => CATALOG_SCENARIOS.iter().map(|(n, _)| n.to_string()).collect(),
        (Some(s), false) => vec![s.to_string()],
        (None, false) => return Err(Error::input("verify needs a scenario or --catalog")),
    };
    let mut summary = Vec::new();
    for name in &names {
        let ls = match if catalog { load_catalog_scenario(name, cli.max_order) } else { load_scenario(name, cli.max_order) } {
            Ok(ls) => ls,
            Err(e) => {
                r.error(&format!("{name}.load"), &e);
                summary.push((name.clone(), false));
                continue;
            }
        };
        let before = r.status;
        r.status = Status::Pass;
        verify_scenario(&ls, cli.seed, r);
        summary.push((ls.scenario.name.clone(), r.status == Status::Pass));
        r.status = r.status.max(before);
    }
    r.line("");
    r.line("summary:");
    for (name, ok) in &summary {
        r.line(format!("  {name:<20} {}", if *ok { "PASS" } else { "FAIL" }));
    }
    Ok(())
}

/// Runs every check on one scenario; each section records its own verdict.
fn verify_scenario(ls: &LoadedScenario, seed: u64, r: &mut Report) {
    let s = &ls.scenario;
    let key = |k: &str| format!("{}.{k}", s.name);
    r.line("");
    scenario_header(s, r);
    if let Err(e) = dagger_section(s, seed, &key("dagger"), r) {
        r.error(&key("dagger"), &e);
    }
    let basket = match scenario_basket(ls, seed) {
        Ok(b) => b,
        Err(e) => return r.error(&key("basket"), &e),
    };
    let labels: Vec<String> = basket.iter().map(|m| format!("{}({})", m.label(), m.dim())).collect();
    r.line(format!("  basket: {}", labels.join(" ")));
    r.kv(&key("basket"), basket.len());

    let pairs = match round_trip_section(s, &basket, seed, r) {
        Ok(p) => {
            r.check(&key("round_trips"), true, format!("{}/{}", p.len(), basket.len()));
            p
        }
        Err(e) => return r.error(&key("round_trips"), &e),
    };
    let sections: [(&str, &dyn Fn(&mut Report) -> Result<(bool, String)>); 5] = [
        ("stable_hom", &|r| stable_hom_section(s, &pairs, r)),
        ("higman", &|r| higman_section(s, &pairs, r)),
        ("vertices", &|r| vertex_section(s, &pairs, seed, r)),
        ("mackey", &|r| mackey_section(s, &pairs, seed, r)),
        ("triangles", &|r| triangle_section(s, &pairs, seed, r)),
    ];
    for (name, f) in sections {
        match f(r) {
            Ok((ok, detail)) => r.check(&key(name), ok, detail),
            Err(e) => r.error(&key(name), &e),
        }
    }
}

fn round_trip_section(s: &Scenario, basket: &[Module], seed: u64, r: &mut Report) -> Result<Vec<GreenPair>> {
    r.line("  round trips:");
    r.line(format!("    {:<18} {:>5} {:>6} {:>7}  {}", "N", "dim N", "dim gN", "|vx gN|", "discarded from N^G | from (gN)_H"));
    let trips = verify_round_trip(s, basket, seed)?;
    for t in &trips {
        r.line(format!(
            "    {:<18} {:>5} {:>6} {:>7}  {} | {}",
            t.n.label(),
            t.n.dim(),
            t.g_pair.over_g.dim(),
            t.g_pair.vertex.order(),
            discarded_text(&t.g_pair),
            discarded_text(&t.f_pair)
        ));
    }
    Ok(trips.into_iter().map(|t| t.g_pair).collect())
}

fn stable_hom_section(s: &Scenario, pairs: &[GreenPair], r: &mut Report) -> Result<(bool, String)> {
    r.line("  stable homs (d_H / d_G):");
    let mut count = 0;
    for p1 in pairs {
        let mut row = format!("    {:<18}", p1.over_h.label());
        for p2 in pairs {
            let rep = stable_hom_correspondence(s, p1, p2)?;
            let _ = write!(row, " {}/{}", rep.d_h, rep.d_g);
            count += 1;
        }
        r.line(row);
    }
    Ok((true, format!("pairs={count}")))
}

/// Subgroups tested against each module: everything below a Sylow subgroup
/// plus the whole group.
fn higman_subgroups(g: &Arc<PermGroup>, p: usize) -> Result<Vec<Subgroup>> {
    let mut subs = crate::grp::all_subgroups(&sylow(g, p))?;
    if !subs.last().is_some_and(Subgroup::is_whole) {
        subs.push(Subgroup::whole(g));
    }
    Ok(subs)
}

fn higman_section(s: &Scenario, pairs: &[GreenPair], r: &mut Report) -> Result<(bool, String)> {
    let p = s.field.prime() as usize;
    let (mut tested, mut both, mut projective) = (0, 0, 0);
    let sub_h = higman_subgroups(s.h.group(), p)?;
    let sub_g = higman_subgroups(&s.group, p)?;
    for pair in pairs {
        for (m, subs) in [(&pair.over_h, &sub_h), (&pair.over_g, &sub_g)] {
            for q in subs {
                let cert = is_relatively_projective(m, q)?;
                tested += 1;
                both += usize::from(cert.counit_splits.is_some());
                projective += usize::from(cert.projective);
            }
        }
    }
    r.line(format!("  Higman deciders: {tested} tests, {both} with both deciders, {projective} projective"));
    Ok((true, format!("tests={tested} both={both}")))
}

fn vertex_section(s: &Scenario, pairs: &[GreenPair], seed: u64, r: &mut Report) -> Result<(bool, String)> {
    let p = s.field.prime() as usize;
    let mut ok = true;
    let mut runs = 0;
    for pair in pairs {
        for m in [&pair.over_h, &pair.over_g] {
            let mut found: Vec<Subgroup> = Vec::new();
            for start in sylow_starts(m.group(), p)? {
                for sd in [seed, seed.wrapping_add(1)] {
                    found.push(vertex_from(m, &start, sd)?.vertex);
                    runs += 1;
                }
            }
            for v in &found[1..] {
                ok &= are_conjugate(v, &found[0])?.is_some();
            }
        }
    }
    r.line(format!("  vertices: {runs} descents, all conjugate: {ok}"));
    Ok((ok, format!("descents={runs}")))
}

fn mackey_section(s: &Scenario, pairs: &[GreenPair], seed: u64, r: &mut Report) -> Result<(bool, String)> {
    let syl = sylow(&s.group, s.field.prime() as usize);
    let subs = [("H", &s.h), ("D", &s.d), ("P", &syl)];
    let mut sources = vec![Module::trivial(&s.group, s.field)];
    if let Some(p) = pairs.first() {
        sources.push(p.over_g.clone());
    }
    let mut ok = true;
    let mut count = 0;
    for (hn, h) in subs {
        for (kn, k) in subs {
            for src in &sources {
                let m = restrict(src, h)?;
                let rep = mackey_check(&m, h, k, seed)?;
                ok &= rep.passed();
                count += 1;
                r.line(format!(
                    "  mackey {hn}->{kn} {:<14} double cosets {:>2}, dim {:>3} = {:>3}, isomorphic {}",
                    src.label(),
                    rep.double_cosets,
                    rep.restricted_dim,
                    rep.expected_dim,
                    rep.isomorphic
                ));
            }
        }
    }
    Ok((ok, format!("checks={count}")))
}

fn triangle_section(s: &Scenario, pairs: &[GreenPair], seed: u64, r: &mut Report) -> Result<(bool, String)> {
    let mut mods = vec![Module::trivial(&s.group, s.field)];
    mods.extend(pairs.iter().take(3).map(|p| p.over_g.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(module_seed(seed, &s.name, mods.len()));
    let p = s.field.prime();
    let mut ok = true;
    let mut count = 0;
    for i in 0..VERIFY_CONE_MAPS {
        let m = &mods[i % mods.len()];
        let n = &mods[(i + 1) % mods.len()];
        let hom = hom_space(m, n)?;
        let f = hom.combine(&random_coords(&mut rng, p, hom.dim()));
        let (_, check) = check_cone(&f, &s.h)?;
        ok &= check.passed();
        count += 1;
    }
    let m = &mods[mods.len() - 1];
    let zero = crate::repmod::ModuleMap::zero(m, &mods[0]);
    let c0 = relative_cone(&zero, &s.h)?;
    let split = direct_sum(&[mods[0].clone(), c0.omega_inv.clone()])?.module;
    let zero_ok = is_isomorphic(&c0.cone, &split, seed)?.is_some();
    let cid = relative_cone(&crate::repmod::ModuleMap::identity(m), &s.h)?;
    let id_ok = is_relatively_projective(&cid.cone, &s.h)?.projective;
    r.line(format!("  relative triangles: {count} random maps, C(0) split {zero_ok}, C(id) H-projective {id_ok}"));
    Ok((ok && zero_ok && id_ok, format!("maps={count}")))
}

