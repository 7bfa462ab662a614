//! End-to-end runs: scheme, closure, centralizer, characters, idempotents
//! and the reconciliation checks that decide a run's exit status.

use std::fmt::Write as _;

use log::{info, warn};
use serde::Serialize;

use crate::centralizer::OrbitalAlgebra;
use crate::chars::{
    centralizer_wedderburn, char_table_for, multiplicities, perm_char_h1, row_sums, CharError, CharTable,
    MultiplicityVector, PermChar, Sign, SignedPartition,
};
use crate::exactla::{choose_primes, FieldCtx, LaError};
use crate::groups::{build_group, inversion_closed, GroupDescriptor, GroupError, Partition};
use crate::orbitals::{burnside_orbital_count, H1Action, OrbitalError, Orbitals, DEFAULT_PAIR_BUDGET};
use crate::scheme::{build_scheme, conj_centralizer_dim, intersection_numbers, verify_axioms, AxiomMode, ClassScheme, IntersectionTensor};
use crate::switching::{run_to_stationary, triple_regularity, ClosureRun, OrbitalRoute, RawRoute, SwitchingError, TripleRegularity};
use crate::tables::{BlockTable, GrowthTable, TableFormat};
use crate::wedderburn::{
    cpi_membership, decompose_t, module_block_dims, thinness, CPIdem, CpiContext, IdempotentChecks, ThinReport,
    WedderburnError, WedderburnReport,
};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("groups: {0}")]
    Group(#[from] GroupError),
    #[error("exactla: {0}")]
    Linear(#[from] LaError),
    #[error("switching: {0}")]
    Switching(#[from] SwitchingError),
    #[error("orbitals: {0}")]
    Orbital(#[from] OrbitalError),
    #[error("chars: {0}")]
    Char(#[from] CharError),
    #[error("wedderburn: {0}")]
    Wedderburn(#[from] WedderburnError),
    #[error("config: {0}")]
    Config(String),
    #[error("exactla: primes {primes:?} give three different closures")]
    PrimeDisagreement { primes: Vec<u64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Closure over orbital coordinates of the centralizer algebra.
    #[default]
    Orbital,
    /// Closure over explicit submatrices; only practical for small groups.
    Raw,
}

impl std::str::FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "orbital" => Ok(Self::Orbital),
            "raw" => Ok(Self::Raw),
            other => Err(format!("unknown route {other:?} (expected orbital or raw)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub group: GroupDescriptor,
    /// Zero, one or two explicit primes; the rest are drawn from `seed`.
    pub primes: Vec<u64>,
    pub seed: u64,
    pub max_width: usize,
    pub use_bounds: bool,
    pub route: Route,
}

impl RunConfig {
    pub fn new(group: GroupDescriptor) -> Self {
        Self { group, primes: Vec::new(), seed: 0, max_width: 6, use_bounds: true, route: Route::Orbital }
    }

    fn validate(&self) -> Result<(), ReportError> {
        if self.max_width == 0 {
            return Err(ReportError::Config("max width must be at least 1".into()));
        }
        if self.primes.len() > 2 {
            return Err(ReportError::Config(format!("at most two primes, got {}", self.primes.len())));
        }
        if self.primes.len() == 2 && self.primes[0] == self.primes[1] {
            return Err(ReportError::Config("primes must be distinct".into()));
        }
        Ok(())
    }

    /// The two working primes: explicit ones first, then seeded draws.
    pub fn working_primes(&self, group_order: usize) -> Result<Vec<FieldCtx>, ReportError> {
        self.validate()?;
        let modulus = 2 * group_order as u64;
        let mut primes = self.primes.clone();
        primes.extend(choose_primes(self.seed, 2 - primes.len(), modulus, &self.primes));
        Ok(primes.into_iter().map(|p| FieldCtx::for_group(p, modulus)).collect::<Result<_, _>>()?)
    }
}

/// Which parts of the pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stages {
    pub characters: bool,
    pub centralizer: bool,
    pub closure: bool,
    pub wedderburn: bool,
}

impl Stages {
    pub const ALL: Self = Self { characters: true, centralizer: true, closure: true, wedderburn: true };
    pub const NONE: Self = Self { characters: false, centralizer: false, closure: false, wedderburn: false };
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemeSection {
    pub order: usize,
    pub labels: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub inversion_closed: bool,
    pub axiom_pairs_checked: usize,
    pub axioms_passed: bool,
    pub dim_t0: usize,
    pub conj_centralizer_dim: u64,
    pub intersection_numbers: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterSection {
    pub partitions: Vec<String>,
    /// `values[λ][μ]`, rows and columns in class order.
    pub values: Vec<Vec<i128>>,
    pub degrees: Vec<i128>,
    pub row_sums: Vec<i128>,
    pub perm_plus: Vec<u64>,
    pub perm_minus: Vec<u64>,
    pub multiplicities: Vec<(String, u64)>,
    pub tilde_sum: String,
    pub tilde_dim: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralizerSection {
    pub table: BlockTable,
    pub total: usize,
    pub burnside: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureSection {
    pub route: Route,
    pub primes: Vec<u64>,
    /// `dim T_ℓ` for `ℓ = 0, 1, ..` up to the first repeat.
    pub level_dims: Vec<usize>,
    pub level_tables: Vec<BlockTable>,
    /// Growth from `T_{ℓ-1}` to `T_ℓ`, for every level that grew.
    pub growth: Vec<GrowthTable>,
    pub width: usize,
    pub dim_t: usize,
    pub triple: TripleRegularity,
}

impl ClosureSection {
    pub fn final_table(&self) -> &BlockTable {
        self.level_tables.last().expect("at least T0")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WedderburnSection {
    pub membership: Vec<(String, bool)>,
    pub report: WedderburnReport,
    pub display: String,
    pub thin: ThinReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConjectureCheck {
    pub t_block: usize,
    pub tilde_block: usize,
    pub strict: bool,
}

impl ConjectureCheck {
    /// Compares the `([n-1,1],[n-1,1])` entries of two tables.
    pub fn from_tables(n: u32, t: &BlockTable, tilde: &BlockTable) -> Option<Self> {
        if n < 2 {
            return None;
        }
        let label = Partition::hook_one(n).to_string();
        let t_block = t.at(&label, &label)?;
        let tilde_block = tilde.at(&label, &label)?;
        Some(Self { t_block, tilde_block, strict: t_block < tilde_block })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub group: String,
    pub scheme: SchemeSection,
    pub characters: Option<CharacterSection>,
    pub centralizer: Option<CentralizerSection>,
    pub closure: Option<ClosureSection>,
    pub wedderburn: Option<WedderburnSection>,
    pub conjecture: Option<ConjectureCheck>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn symmetric_degree(desc: &GroupDescriptor) -> Option<u32> {
    match desc {
        GroupDescriptor::Symmetric(n) => Some(*n),
        GroupDescriptor::CayleyTable(_) => None,
    }
}

fn scheme_section(scheme: &ClassScheme, tensor: &IntersectionTensor, checks: &mut Vec<Check>) -> SchemeSection {
    let mode = if scheme.order() <= 720 { AxiomMode::Full } else { AxiomMode::Sampled { pairs: 20_000, seed: 0 } };
    let axioms = verify_axioms(scheme, mode);
    checks.push(Check::new("scheme axioms", axioms.passed(), format!("{} pairs", axioms.pairs_checked)));
    SchemeSection {
        order: scheme.order(),
        labels: scheme.labels(),
        class_sizes: scheme.classes.sizes.clone(),
        inversion_closed: inversion_closed(&scheme.classes),
        axiom_pairs_checked: axioms.pairs_checked,
        axioms_passed: axioms.passed(),
        dim_t0: tensor.dim_t0(),
        conj_centralizer_dim: conj_centralizer_dim(&scheme.classes),
        intersection_numbers: tensor.to_json(),
    }
}

fn character_section(table: &CharTable, pi: &PermChar, mults: &MultiplicityVector) -> CharacterSection {
    let tilde = centralizer_wedderburn(mults);
    CharacterSection {
        partitions: table.partitions.iter().map(|p| p.to_string()).collect(),
        values: table.values.clone(),
        degrees: (0..table.partitions.len()).map(|l| table.degree(l)).collect(),
        row_sums: row_sums(table),
        perm_plus: pi.plus.clone(),
        perm_minus: pi.minus.clone(),
        multiplicities: mults.nonzero().map(|(sp, m)| (sp.to_string(), m)).collect(),
        tilde_sum: mults.display_sum(),
        tilde_dim: tilde.dim,
    }
}

fn closure_under(
    cfg: &RunConfig,
    scheme: &ClassScheme,
    algebra: &OrbitalAlgebra<'_>,
    field: FieldCtx,
    bounds: Option<&BlockTable>,
) -> Result<(ClosureRun<Vec<u32>>, Vec<Vec<Vec<usize>>>), ReportError> {
    let orbital = || run_to_stationary(&OrbitalRoute { algebra }, field, cfg.max_width, bounds);
    match cfg.route {
        Route::Orbital => {
            let run = orbital()?;
            let history = run.basis.history().to_vec();
            Ok((run, history))
        }
        Route::Raw => {
            let raw = run_to_stationary(&RawRoute { group: &scheme.group, classes: &scheme.classes }, field, cfg.max_width, bounds)?;
            let run = orbital()?;
            Ok((run, raw.basis.history().to_vec()))
        }
    }
}

/// Runs the closure under each working prime. If the two disagree, a third
/// prime decides; the pair that agrees is kept.
fn agreed_closures(
    cfg: &RunConfig,
    scheme: &ClassScheme,
    algebra: &OrbitalAlgebra<'_>,
    bounds: Option<&BlockTable>,
    checks: &mut Vec<Check>,
) -> Result<Vec<(FieldCtx, ClosureRun<Vec<u32>>, Vec<Vec<Vec<usize>>>)>, ReportError> {
    let fields = cfg.working_primes(scheme.order())?;
    let mut runs = Vec::new();
    for f in fields {
        info!("closure under p = {}", f.prime());
        let (run, history) = closure_under(cfg, scheme, algebra, f, bounds)?;
        runs.push((f, run, history));
    }
    if runs[0].2 != runs[1].2 {
        let used: Vec<u64> = runs.iter().map(|r| r.0.prime()).collect();
        let modulus = 2 * scheme.order() as u64;
        let third = FieldCtx::for_group(choose_primes(cfg.seed.wrapping_add(1), 1, modulus, &used)[0], modulus)?;
        warn!("primes {used:?} disagree; retrying with {}", third.prime());
        let (run, history) = closure_under(cfg, scheme, algebra, third, bounds)?;
        let keep = match runs.iter().position(|r| r.2 == history) {
            Some(i) => i,
            None => return Err(ReportError::PrimeDisagreement { primes: vec![used[0], used[1], third.prime()] }),
        };
        runs.swap_remove(1 - keep);
        runs.push((third, run, history));
        checks.push(Check::new("third prime", true, format!("{} replaced by {}", used[1 - keep], third.prime())));
    }
    checks.push(Check::new(
        "two-prime closure agreement",
        runs[0].2 == runs[1].2 && runs[0].1.width == runs[1].1.width,
        format!("p = {}, {}", runs[0].0.prime(), runs[1].0.prime()),
    ));
    Ok(runs)
}

fn closure_section(
    cfg: &RunConfig,
    labels: &[String],
    history: &[Vec<Vec<usize>>],
    width: usize,
    primes: Vec<u64>,
    dim_t0: usize,
    conj_dim: u64,
) -> ClosureSection {
    let level_tables: Vec<BlockTable> = history.iter().map(|h| BlockTable::new(labels.to_vec(), h.clone())).collect();
    let growth = level_tables
        .windows(2)
        .map(|w| GrowthTable::between(&w[0], &w[1]))
        .filter(|g| g.total_growth() > 0)
        .collect();
    let level_dims: Vec<usize> = level_tables.iter().map(BlockTable::total).collect();
    let dim_t = *level_dims.last().expect("at least T0");
    ClosureSection {
        route: cfg.route,
        primes,
        level_dims,
        level_tables,
        growth,
        width,
        dim_t,
        triple: triple_regularity(dim_t0, dim_t, conj_dim),
    }
}

fn wedderburn_under(
    ctx: &CpiContext<'_>,
    checker: &IdempotentChecks<'_>,
    mults: &MultiplicityVector,
    run: &ClosureRun<Vec<u32>>,
    field: FieldCtx,
    dim_tilde: u64,
    checks: &mut Vec<Check>,
) -> Result<(Vec<(String, bool)>, WedderburnReport), ReportError> {
    let p = field.prime();
    let es: Vec<CPIdem> = mults.nonzero().map(|(sp, m)| ctx.build_cpi(sp, m, &field)).collect::<Result<_, _>>()?;
    let idempotent = es.iter().all(|e| checker.is_idempotent(e, &field));
    let orthogonal = (0..es.len()).all(|a| (a + 1..es.len()).all(|b| checker.orthogonal(&es[a], &es[b], &field)));
    let complete = checker.sums_to_identity(&es, ctx, &field);
    let traces = es.iter().all(|e| e.trace(ctx, &field) as u64 == field.from_u64(e.multiplicity * e.degree) as u64);
    let central = checker.commutes_with_factors(&es, &field).iter().all(|&c| c);
    checks.push(Check::new(
        "idempotents",
        idempotent && orthogonal && complete && traces && central,
        format!(
            "p = {p}: idempotent {idempotent}, orthogonal {orthogonal}, complete {complete}, trace {traces}, central {central}"
        ),
    ));
    let membership = es
        .iter()
        .map(|e| Ok((e.label.to_string(), cpi_membership(&e.blocks, &run.basis)?)))
        .collect::<Result<Vec<_>, LaError>>()?;
    let report = decompose_t(&es, &run.basis, ctx.algebra, dim_tilde)?;
    Ok((membership, report))
}

pub fn run_report(cfg: &RunConfig, stages: Stages) -> Result<Report, ReportError> {
    let group = build_group(&cfg.group)?;
    let scheme = build_scheme(group);
    let tensor = intersection_numbers(&scheme);
    let mut checks = Vec::new();
    let scheme_sec = scheme_section(&scheme, &tensor, &mut checks);
    let labels = scheme.labels();
    let degree = symmetric_degree(&cfg.group);

    let need_orbitals = stages.centralizer || stages.closure || stages.wedderburn;
    let need_chars = degree.is_some() && (stages.characters || stages.wedderburn);

    let chars = if need_chars {
        let table = char_table_for(&scheme.classes)?;
        let pi = perm_char_h1(&scheme.group, &scheme.classes)?;
        let mults = multiplicities(&pi, &table)?;
        let sums = row_sums(&table);
        let row_ok = table.partitions.iter().enumerate().all(|(l, lambda)| {
            let plus = mults.get(&SignedPartition::new(lambda.clone(), Sign::Plus));
            let minus = mults.get(&SignedPartition::new(lambda.clone(), Sign::Minus));
            (plus + minus) as i128 == sums[l]
        });
        checks.push(Check::new("multiplicities split row sums", row_ok, ""));
        Some((table, pi, mults))
    } else {
        None
    };
    let character_sec = chars.as_ref().filter(|_| stages.characters).map(|(t, pi, m)| character_section(t, pi, m));

    let mut centralizer_sec = None;
    let mut closure_sec = None;
    let mut wedderburn_sec = None;
    let mut conjecture = None;

    if need_orbitals {
        let action = H1Action::new(&scheme.group, &scheme.classes);
        let orbitals = Orbitals::compute(&scheme.group, &scheme.classes, &action, DEFAULT_PAIR_BUDGET)?;
        let tilde_table = orbitals.table(labels.clone());
        let dim_tilde = orbitals.total() as u64;
        info!("dim T~ = {dim_tilde}");
        if stages.centralizer {
            let burnside = burnside_orbital_count(&scheme.group, &scheme.classes)?;
            checks.push(Check::new("burnside", burnside == dim_tilde, format!("{burnside} vs {dim_tilde}")));
            if action.with_inversion() {
                checks.push(Check::new("point orbits are classes", orbitals.point_orbits_are_classes(&scheme.classes), ""));
            }
            if let Some((_, _, mults)) = &chars {
                let sq = centralizer_wedderburn(mults).dim;
                checks.push(Check::new("orbitals vs multiplicities", sq == dim_tilde, format!("{sq} vs {dim_tilde}")));
            }
            centralizer_sec = Some(CentralizerSection { total: tilde_table.total(), table: tilde_table.clone(), burnside });
        }

        if stages.closure || stages.wedderburn {
            let algebra = OrbitalAlgebra::new(&scheme.group, &scheme.classes, &orbitals);
            let bounds = cfg.use_bounds.then_some(&tilde_table);
            let runs = agreed_closures(cfg, &scheme, &algebra, bounds, &mut checks)?;
            let primes = runs.iter().map(|r| r.0.prime()).collect();
            let sec = closure_section(
                cfg,
                &labels,
                &runs[0].2,
                runs[0].1.width,
                primes,
                scheme_sec.dim_t0,
                scheme_sec.conj_centralizer_dim,
            );
            let t_final = sec.final_table();
            checks.push(Check::new(
                "T within centralizer",
                t_final.dominated_by(&tilde_table),
                format!("{} <= {}", sec.dim_t, dim_tilde),
            ));
            checks.push(Check::new(
                "dimension sandwich",
                scheme_sec.dim_t0 <= sec.dim_t && sec.dim_t as u64 <= dim_tilde,
                format!("{} <= {} <= {}", scheme_sec.dim_t0, sec.dim_t, dim_tilde),
            ));
            if let Some(n) = degree {
                conjecture = ConjectureCheck::from_tables(n, t_final, &tilde_table);
            }

            if stages.wedderburn {
                if let Some((table, _, mults)) = &chars {
                    let ctx = CpiContext::new(&algebra, table);
                    let checker = IdempotentChecks::new(&algebra);
                    let mut outcomes = Vec::new();
                    for (field, run, _) in &runs {
                        outcomes.push(wedderburn_under(&ctx, &checker, mults, run, *field, dim_tilde, &mut checks)?);
                    }
                    checks.push(Check::new(
                        "two-prime membership agreement",
                        outcomes[0].0 == outcomes[1].0 && outcomes[0].1 == outcomes[1].1,
                        "",
                    ));
                    let (membership, report) = outcomes.swap_remove(0);
                    checks.push(Check::new(
                        "wedderburn ledger",
                        report.total == sec.dim_t as u64,
                        format!("sum of squares {} vs dim T {}", report.total, sec.dim_t),
                    ));
                    let dims = module_block_dims(&ctx, mults)?;
                    let thin = thinness(&dims, &report)?;
                    let pigeonhole = thin.centralizer_modules.iter().all(|m| !(m.thin && m.dim > labels.len() as u64));
                    checks.push(Check::new("thinness pigeonhole", pigeonhole, ""));
                    wedderburn_sec = Some(WedderburnSection { membership, display: report.display_sum(), report, thin });
                }
            }
            if stages.closure {
                closure_sec = Some(sec);
            }
        }
    }

    Ok(Report {
        group: cfg.group.to_string(),
        scheme: scheme_sec,
        characters: character_sec,
        centralizer: centralizer_sec,
        closure: closure_sec,
        wedderburn: wedderburn_sec,
        conjecture,
        checks,
    })
}

/// Block dimensions of `T` and `T̃` at `([n-1,1],[n-1,1])` for `S_n`.
pub fn conjecture_check(n: u32, cfg: &RunConfig) -> Result<ConjectureCheck, ReportError> {
    let cfg = RunConfig { group: GroupDescriptor::Symmetric(n), ..cfg.clone() };
    let stages = Stages { closure: true, ..Stages::NONE };
    run_report(&cfg, stages)?
        .conjecture
        .ok_or_else(|| ReportError::Config(format!("S{n} has no [n-1,1] class")))
}

/// Restricts a table to the given class labels, keeping the table's order.
pub fn filter_table(table: &BlockTable, labels: &[String]) -> Result<BlockTable, ReportError> {
    let mut idx = labels
        .iter()
        .map(|l| table.index_of(l).ok_or_else(|| ReportError::Config(format!("unknown class label {l}"))))
        .collect::<Result<Vec<_>, _>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(table.restrict(&idx))
}

impl Report {
    /// Renders every computed section. Tables honour `format`; the rest is
    /// markdown prose, except for [`TableFormat::Json`], which serializes the
    /// whole report.
    pub fn render(&self, format: TableFormat, blocks: Option<&[String]>) -> Result<String, ReportError> {
        if format == TableFormat::Json {
            return Ok(serde_json::to_string_pretty(&self.to_json(blocks)?).expect("serializable"));
        }
        let pick = |t: &BlockTable| -> Result<BlockTable, ReportError> {
            match blocks {
                Some(b) => filter_table(t, b),
                None => Ok(t.clone()),
            }
        };
        let mut out = String::new();
        let s = &self.scheme;
        let _ = writeln!(out, "# {}\n", self.group);
        let _ = writeln!(out, "order {}, {} classes, inversion-closed {}", s.order, s.labels.len(), s.inversion_closed);
        let _ = writeln!(out, "dim T0 = {}", s.dim_t0);
        let _ = writeln!(out, "dim End_G(V) = {}\n", s.conj_centralizer_dim);

        if let Some(c) = &self.characters {
            let _ = writeln!(out, "## characters\n");
            let mut header = String::from("| χ |");
            for p in &c.partitions {
                let _ = write!(header, " {p} |");
            }
            let _ = writeln!(out, "{header} degree | row sum |");
            let _ = writeln!(out, "{}|", "|---".repeat(c.partitions.len() + 3));
            for l in (0..c.partitions.len()).rev() {
                let _ = write!(out, "| {} |", c.partitions[l]);
                for v in &c.values[l] {
                    let _ = write!(out, " {v} |");
                }
                let _ = writeln!(out, " {} | {} |", c.degrees[l], c.row_sums[l]);
            }
            let _ = writeln!(out, "\npermutation character = {}", c.tilde_sum);
            let _ = writeln!(out, "sum of squared multiplicities = {}\n", c.tilde_dim);
        }

        if let Some(c) = &self.centralizer {
            let _ = writeln!(out, "## centralizer\n");
            let _ = writeln!(out, "dim T~ = {} (Burnside {})\n", c.total, c.burnside);
            out.push_str(&pick(&c.table)?.render(format, "T~"));
            out.push('\n');
        }

        if let Some(c) = &self.closure {
            let _ = writeln!(out, "## closure\n");
            let _ = writeln!(out, "primes {:?}", c.primes);
            let chain: Vec<String> = c.level_dims.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "dims {}", chain.join(" -> "));
            let _ = writeln!(out, "dim T = {}, width {}", c.dim_t, c.width);
            let _ = writeln!(
                out,
                "triply regular {}, triply transitive {}\n",
                c.triple.triply_regular, c.triple.triply_transitive
            );
            out.push_str(&pick(c.final_table())?.render(format, "T"));
            out.push('\n');
            for (level, g) in c.growth.iter().enumerate() {
                let title = format!("T{} -> T{}", level, level + 1);
                let rendered = match blocks {
                    Some(b) => {
                        let idx: Vec<usize> = b.iter().filter_map(|l| g.labels.iter().position(|x| x == l)).collect();
                        restrict_growth(g, &idx).render(format, &title)
                    }
                    None => g.render(format, &title),
                };
                out.push_str(&rendered);
                out.push('\n');
            }
        }

        if let Some(w) = &self.wedderburn {
            let _ = writeln!(out, "## wedderburn\n");
            let non: Vec<String> = w.report.non_members.iter().map(|l| l.to_string()).collect();
            let _ = writeln!(out, "idempotents outside T: {}", if non.is_empty() { "none".into() } else { non.join(", ") });
            for s in &w.report.splits {
                let _ = writeln!(out, "split: {} with ideal dimension {}", s.label, s.ideal_dim);
            }
            let _ = writeln!(out, "T = {}", w.display);
            let _ = writeln!(out, "{} components, sum of squares {}\n", w.report.components.len(), w.report.total);
            let _ = writeln!(out, "| module | dim | block dims | thin |\n|---|---|---|---|");
            for m in &w.thin.t_modules {
                let labels: Vec<String> = m.labels.iter().map(|l| l.to_string()).collect();
                let dims: Vec<String> = m.block_dims.iter().map(|d| d.to_string()).collect();
                let _ = writeln!(out, "| {} | {} | {} | {} |", labels.join(" + "), m.dim, dims.join(" "), m.thin);
            }
            out.push('\n');
        }

        if let Some(c) = &self.conjecture {
            let _ = writeln!(out, "## conjecture\n");
            let _ = writeln!(out, "T block {}, T~ block {}, strict {}\n", c.t_block, c.tilde_block, c.strict);
        }

        let _ = writeln!(out, "## checks\n");
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            if c.detail.is_empty() {
                let _ = writeln!(out, "- {mark}: {}", c.name);
            } else {
                let _ = writeln!(out, "- {mark}: {} ({})", c.name, c.detail);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self, blocks: Option<&[String]>) -> Result<serde_json::Value, ReportError> {
        let mut value = serde_json::to_value(self).expect("serializable");
        if let Some(w) = &self.wedderburn {
            value["wedderburn"]["components"] = w.report.to_json();
        }
        if let Some(b) = blocks {
            if let Some(c) = &self.centralizer {
                value["centralizer"]["table"] = serde_json::to_value(filter_table(&c.table, b)?).expect("serializable");
            }
            if let Some(c) = &self.closure {
                let tables = c.level_tables.iter().map(|t| filter_table(t, b)).collect::<Result<Vec<_>, _>>()?;
                value["closure"]["level_tables"] = serde_json::to_value(tables).expect("serializable");
            }
        }
        Ok(value)
    }
}

fn restrict_growth(g: &GrowthTable, idx: &[usize]) -> GrowthTable {
    GrowthTable {
        labels: idx.iter().map(|&i| g.labels[i].clone()).collect(),
        base: idx.iter().map(|&i| idx.iter().map(|&k| g.base[i][k]).collect()).collect(),
        growth: idx.iter().map(|&i| idx.iter().map(|&k| g.growth[i][k]).collect()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(n: u32) -> Report {
        run_report(&RunConfig::new(GroupDescriptor::Symmetric(n)), Stages::ALL).unwrap()
    }

    #[test]
    fn s4_report() {
        let r = report(4);
        assert!(r.passed(), "{:?}", r.checks);
        let c = r.closure.as_ref().unwrap();
        assert_eq!(c.level_dims, vec![42, 43, 43]);
        assert_eq!(c.width, 1);
        assert_eq!(r.wedderburn.as_ref().unwrap().report.sizes(), vec![5, 2, 3, 2, 1]);
        assert!(!r.conjecture.unwrap().strict);
    }

    #[test]
    fn deterministic_rendering() {
        let a = report(3).render(TableFormat::Markdown, None).unwrap();
        let b = report(3).render(TableFormat::Markdown, None).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("T = M_3(C) ⊕ C ⊕ C"));
    }

    #[test]
    fn raw_route_agrees() {
        let mut cfg = RunConfig::new(GroupDescriptor::Symmetric(4));
        cfg.route = Route::Raw;
        let raw = run_report(&cfg, Stages { closure: true, ..Stages::NONE }).unwrap();
        let orbital = report(4);
        assert_eq!(raw.closure.unwrap().level_tables, orbital.closure.unwrap().level_tables);
    }

    #[test]
    fn explicit_primes_are_validated() {
        let mut cfg = RunConfig::new(GroupDescriptor::Symmetric(3));
        cfg.primes = vec![3];
        assert!(matches!(run_report(&cfg, Stages::ALL), Err(ReportError::Linear(LaError::PrimeDividesOrder { .. }))));
        cfg.primes = vec![7, 7];
        assert!(matches!(run_report(&cfg, Stages::ALL), Err(ReportError::Config(_))));
        cfg.primes = vec![1_000_003];
        let r = run_report(&cfg, Stages { closure: true, ..Stages::NONE }).unwrap();
        assert_eq!(r.closure.unwrap().primes[0], 1_000_003);
    }

    #[test]
    fn block_filter() {
        let r = report(4);
        let md = r.render(TableFormat::Markdown, Some(&["[3,1]".to_string()])).unwrap();
        assert!(md.contains("| T | [3,1] |"));
        assert!(r.render(TableFormat::Csv, Some(&["[9]".to_string()])).is_err());
    }
}
