//! Subcommands. Each one produces a format-independent [`Report`].

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use bwbforge_core::bwbcohom::{self, FilteredBundle};
use bwbforge_core::classify::{self, ClassifyOptions, EnumOptions, HodgeLevel, Scope};
use bwbforge_core::hodge;
use bwbforge_core::koszul::{self, ZeroLocus};
use bwbforge_core::repcalc;
use bwbforge_core::rootdata::{self, Chamber};
use bwbforge_core::{BundleSum, CohomologyTable, DimValue, HomSpace, IrrDecomp, RootSystemSpec, Weight};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::grammar::{parse_bundle, parse_weight, print_bundle, print_weight};
use crate::report::{Format, Report, Status};

#[derive(Debug, Parser)]
#[command(name = "bwbforge", version, about = "Borel-Weil-Bott cohomology on G/P and Calabi-Yau zero loci")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,
    /// Cache directory; defaults to $BWBFORGE_CACHE, then ~/.cache/bwbforge.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Exit with 2 instead of 1 when some value is only bounded.
    #[arg(long, global = true)]
    pub allow_bounds: bool,
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Exceptional,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HodgeArg {
    None,
    Rows,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cartan matrix and positive roots.
    Roots { group: String },
    /// Dimension, Fano index and minimal embedding.
    Dim { space: String },
    /// `det E_λ = O(dex)`.
    Dex { space: String, weight: String },
    /// Cohomology of one irreducible bundle.
    Bwb { space: String, weight: String },
    /// `Λ^p F`.
    Ext { space: String, bundle: String, p: usize },
    /// `H^*(X, F)`, or `H^*(Z, E|_Z)` for the zero locus `Z` of `F`.
    Cohomology {
        space: String,
        bundle: String,
        /// A bundle expression, or Omega / Omega2 for the ambient forms.
        #[arg(long)]
        restrict: Option<String>,
    },
    /// Hodge numbers of the zero locus of a general section.
    Hodge {
        space: String,
        bundle: String,
        #[arg(long)]
        d: usize,
    },
    /// Calabi-Yau zero loci on spaces of Picard number one.
    Classify {
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "exceptional")]
        family: FamilyArg,
        #[arg(long)]
        no_exceptions: bool,
        /// Brute-force search without the dex/rank ratio bound.
        #[arg(long)]
        no_ratio_prune: bool,
        #[arg(long, value_enum, default_value = "full")]
        hodge: HodgeArg,
        /// One row per isomorphism class.
        #[arg(long)]
        distinct: bool,
    },
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    Stats,
    Clear,
}

fn space(s: &str) -> Result<HomSpace> {
    s.parse().with_context(|| format!("bad space {s:?}; expected e.g. E6/P3"))
}

fn bundle(expr: &str, x: &HomSpace) -> Result<BundleSum> {
    parse_bundle(expr, x).with_context(|| format!("in bundle expression {expr:?}"))
}

fn weight(expr: &str, x: &HomSpace) -> Result<Weight> {
    parse_weight(expr, x).with_context(|| format!("in weight {expr:?}"))
}

/// JSON number when it fits, string otherwise.
fn num(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(n) => json!(n),
        Err(_) => json!(v.to_string()),
    }
}

fn dimval(v: &DimValue) -> Value {
    match v {
        DimValue::Exact(n) => num(n),
        b => json!(b.to_string()),
    }
}

fn irr_bundle(rep: &IrrDecomp) -> BundleSum {
    BundleSum::new(rep.iter().map(|(w, c)| (w.clone(), usize::try_from(c).expect("nonnegative"))))
}

/// Canonical request text: the cache key material.
pub fn request(cmd: &Command) -> Result<Option<String>> {
    Ok(Some(match cmd {
        Command::Roots { group } => format!("roots {}", group.parse::<RootSystemSpec>()?),
        Command::Dim { space: s } => format!("dim {}", space(s)?),
        Command::Dex { space: s, weight: w } => {
            let x = space(s)?;
            format!("dex {x} {}", weight(w, &x)?)
        }
        Command::Bwb { space: s, weight: w } => {
            let x = space(s)?;
            format!("bwb {x} {}", weight(w, &x)?)
        }
        Command::Ext { space: s, bundle: b, p } => {
            let x = space(s)?;
            format!("ext {x} {} {p}", print_bundle(&bundle(b, &x)?, &x))
        }
        Command::Cohomology { space: s, bundle: b, restrict } => {
            let x = space(s)?;
            let r = match restrict.as_deref() {
                None => String::new(),
                Some(e @ ("Omega" | "Omega2")) => e.to_string(),
                Some(e) => print_bundle(&bundle(e, &x)?, &x),
            };
            format!("cohomology {x} {} | {r}", print_bundle(&bundle(b, &x)?, &x))
        }
        Command::Hodge { space: s, bundle: b, d } => {
            let x = space(s)?;
            format!("hodge {x} {} {d}", print_bundle(&bundle(b, &x)?, &x))
        }
        Command::Classify { d, family, no_exceptions, no_ratio_prune, hodge, distinct } => {
            format!("classify {d} {family:?} {no_exceptions} {no_ratio_prune} {hodge:?} {distinct}")
        }
        Command::Cache { .. } => return Ok(None),
    }))
}

pub fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Roots { group } => roots(group),
        Command::Dim { space: s } => dim(&space(s)?),
        Command::Dex { space: s, weight: w } => {
            let x = space(s)?;
            dex(&x, &weight(w, &x)?)
        }
        Command::Bwb { space: s, weight: w } => {
            let x = space(s)?;
            bwb(&x, &weight(w, &x)?)
        }
        Command::Ext { space: s, bundle: b, p } => {
            let x = space(s)?;
            ext(&x, &bundle(b, &x)?, *p)
        }
        Command::Cohomology { space: s, bundle: b, restrict } => {
            let x = space(s)?;
            cohomology(&x, &bundle(b, &x)?, restrict.as_deref())
        }
        Command::Hodge { space: s, bundle: b, d } => {
            let x = space(s)?;
            hodge_cmd(&x, &bundle(b, &x)?, *d)
        }
        Command::Classify { d, family, no_exceptions, no_ratio_prune, hodge, distinct } => {
            let opts = ClassifyOptions {
                enumeration: EnumOptions { ratio_fast_path: !no_ratio_prune, exceptions: !no_exceptions },
                hodge: match hodge {
                    HodgeArg::None => HodgeLevel::None,
                    HodgeArg::Rows => HodgeLevel::Rows,
                    HodgeArg::Full => HodgeLevel::Full,
                },
                scope: match family {
                    FamilyArg::Exceptional => Scope::Exceptional,
                    FamilyArg::All => Scope::All,
                },
            };
            classify_cmd(*d, opts, *distinct)
        }
        Command::Cache { .. } => bail!("cache commands are handled by the driver"),
    }
}

fn roots(group: &str) -> Result<Report> {
    let g: RootSystemSpec = group.parse()?;
    let data = g.data();
    let pos = data.positive_roots();
    let highest = pos.last().expect("nonempty root system");
    let mut r = Report::new("roots", Status::Exact);
    r.space = Some(g.to_string());
    r.summary = vec![format!("{g} rank={} positive_roots={} highest={highest}", g.rank(), pos.len())];
    r.summary.extend(data.cartan().iter().map(|row| {
        format!("  {}", row.iter().map(|c| format!("{c:>3}")).collect::<String>())
    }));
    r.header = vec!["root".into(), "height".into(), "weight".into()];
    r.rows = pos
        .iter()
        .zip(data.root_weights())
        .map(|(a, w)| vec![a.to_string(), a.height().to_string(), w.to_string()])
        .collect();
    r.results = json!({
        "rank": g.rank(),
        "cartan": data.cartan(),
        "positive_roots": pos.iter().map(|a| a.coords().to_vec()).collect::<Vec<_>>(),
        "highest_root": highest.coords(),
    });
    Ok(r)
}

fn dim(x: &HomSpace) -> Result<Report> {
    let (d, i, e) = (x.dimension(), x.fano_index(), x.minimal_embedding_dim());
    let mut r = Report::new("dim", Status::Exact);
    r.space = Some(x.to_string());
    r.summary = vec![format!("dim={d} index={i} embed=P^{e}")];
    r.header = vec!["space".into(), "dim".into(), "index".into(), "embed".into()];
    r.rows = vec![vec![x.to_string(), d.to_string(), i.to_string(), e.to_string()]];
    r.grid = false;
    r.results = json!({"dim": d, "index": i, "embedding_dim": num(&e)});
    Ok(r)
}

fn dex(x: &HomSpace, w: &Weight) -> Result<Report> {
    let rank = repcalc::weyl_dim(&x.levi(), w)?;
    let dex = x.dex(w)?;
    let mut r = Report::new("dex", Status::Exact);
    r.space = Some(x.to_string());
    r.bundle = Some(print_weight(w, x));
    r.summary = vec![format!("dex={dex} rank={rank}")];
    r.header = vec!["weight".into(), "rank".into(), "dex".into()];
    r.rows = vec![vec![w.to_string(), rank.to_string(), dex.to_string()]];
    r.grid = false;
    r.results = json!({"weight": w.coords(), "rank": num(&rank), "dex": dex});
    r.citations = vec!["dex from the sum of the weights of the Levi module".into()];
    Ok(r)
}

fn bwb(x: &HomSpace, w: &Weight) -> Result<Report> {
    let shifted = w.add(&Weight::rho(x.rank()));
    let chamber = rootdata::to_dominant_chamber(x.group, &shifted);
    let table = bwbcohom::bwb(x, w)?;
    let mut r = Report::new("bwb", Status::Exact);
    r.space = Some(x.to_string());
    r.bundle = Some(print_weight(w, x));
    r.citations = vec!["Borel-Weil-Bott".into()];
    r.header = vec!["q".into(), "module".into(), "dim".into()];
    match &chamber {
        Chamber::Singular => {
            r.summary = vec![format!("{shifted} = λ+ρ is singular: all cohomology vanishes")];
            r.results = json!({"chamber": "singular", "shifted": shifted.coords()});
        }
        Chamber::Regular { dominant, word } => {
            let mu = dominant.sub(&Weight::rho(x.rank()));
            let (q, terms) = table.entries.iter().next().expect("regular weight has one module");
            let dim = &terms[0].dim;
            r.summary = vec![format!("H^{q} = V{mu}^* dim={dim} (length {})", word.length())];
            r.rows = vec![vec![q.to_string(), format!("V{mu}^*"), dim.to_string()]];
            r.results = json!({
                "chamber": "regular",
                "shifted": shifted.coords(),
                "degree": q,
                "word": word.word,
                "module": mu.coords(),
                "dim": num(dim),
            });
        }
    }
    Ok(r)
}

fn ext(x: &HomSpace, f: &BundleSum, p: usize) -> Result<Report> {
    let levi = x.levi();
    let power = repcalc::exterior_power(&levi, &f.to_irr(), p)?;
    let rank = power.dim(&levi)?;
    let mut r = Report::new("ext", Status::Exact);
    r.space = Some(x.to_string());
    r.bundle = Some(print_bundle(f, x));
    let b = irr_bundle(&power);
    r.summary = vec![format!("rank={rank}"), format!("L^{p} F = {}", print_bundle(&b, x))];
    r.header = vec!["summand".into(), "mult".into(), "rank".into(), "dex".into()];
    let mut list = Vec::new();
    for (w, c) in power.iter() {
        let rk = repcalc::weyl_dim(&levi, w)?;
        let dx = x.dex(w)?;
        r.rows.push(vec![print_weight(w, x), c.to_string(), rk.to_string(), dx.to_string()]);
        list.push(json!({"weight": w.coords(), "mult": c.to_string(), "rank": num(&rk), "dex": dx}));
    }
    r.results = json!({"p": p, "rank": num(&rank), "summands": list});
    Ok(r)
}

fn table_rows(r: &mut Report, t: &CohomologyTable) {
    r.header = vec!["q".into(), "dim".into(), "modules".into()];
    for (q, d) in t.dims.iter().enumerate() {
        if d.exact().is_some_and(|v| *v == BigInt::from(0)) {
            continue;
        }
        let mods = t
            .entries
            .get(&q)
            .map(|ts| {
                ts.iter()
                    .map(|c| if c.mult == 1 { format!("V{}", c.weight) } else { format!("V{}^{}", c.weight, c.mult) })
                    .collect::<Vec<_>>()
                    .join(" + ")
            })
            .unwrap_or_default();
        r.rows.push(vec![q.to_string(), d.to_string(), mods]);
    }
}

fn cohomology(x: &HomSpace, f: &BundleSum, restrict: Option<&str>) -> Result<Report> {
    let mut r = Report::new("cohomology", Status::Exact);
    r.space = Some(x.to_string());
    r.bundle = Some(print_bundle(f, x));
    let (table, target) = match restrict {
        None => {
            r.citations = vec!["Borel-Weil-Bott".into()];
            (bwbcohom::bundle_cohomology(x, &f.to_irr())?, "X".to_string())
        }
        Some(e) => {
            let z = ZeroLocus::new(*x, f.clone())?;
            let (fb, label) = match e {
                "Omega" => (x.cotangent(), "Omega_X".to_string()),
                "Omega2" => (x.cotangent().wedge2(x)?, "Omega2_X".to_string()),
                expr => {
                    let b = bundle(expr, x)?;
                    (FilteredBundle::completely_reducible(b.to_irr()), print_bundle(&b, x))
                }
            };
            r.citations = vec!["Borel-Weil-Bott".into(), "Koszul resolution of O_Z".into()];
            (koszul::restricted_cohomology(&z, &fb)?, format!("Z (d={}), {label}|Z", z.d))
        }
    };
    if !table.is_exact() {
        r.status = Status::Ambiguous;
    }
    let dims: Vec<String> = table.dims.iter().map(ToString::to_string).collect();
    r.summary = vec![format!("H^*({target}) = ({})", dims.join(", "))];
    table_rows(&mut r, &table);
    r.results = json!({
        "target": target,
        "dims": table.dims.iter().map(dimval).collect::<Vec<_>>(),
        "euler_characteristic": table.euler_characteristic().map(|v| num(&v)),
    });
    Ok(r)
}

fn hodge_cmd(x: &HomSpace, f: &BundleSum, d: usize) -> Result<Report> {
    let z = ZeroLocus::new(*x, f.clone())?;
    if z.d != d {
        bail!("{} on {x} cuts out a {}-fold, not a {d}-fold", print_bundle(f, x), z.d);
    }
    let (dia, chase) = hodge::assemble(&z)?;
    let s = hodge::summary(&dia);
    let mut r = Report::new("hodge", if dia.is_exact() { Status::Exact } else { Status::Ambiguous });
    r.space = Some(x.to_string());
    r.bundle = Some(print_bundle(f, x));
    r.citations = vec![
        "Koszul resolution of O_Z".into(),
        "conormal sequence and its second exterior power".into(),
        "Hodge symmetry and Serre duality".into(),
    ];
    let nums: Vec<String> = s.numbers.iter().map(|(k, v)| format!("{k}={v}")).collect();
    r.summary = vec![nums.join(" ")];
    let chi = s.chi.as_ref().map_or("?".to_string(), ToString::to_string);
    r.summary.push(format!("chi={chi} hyperkahler={}", if s.hyperkahler { "yes" } else { "no" }));
    if let Some(c) = hodge::threefold_chi(&dia) {
        r.summary.push(format!("2(h11-h12)={c}"));
    }
    r.summary.extend(chase.notes.iter().cloned());
    r.header = std::iter::once("p\\q".to_string()).chain((0..=d).map(|q| q.to_string())).collect();
    r.rows = (0..=d)
        .map(|p| std::iter::once(p.to_string()).chain((0..=d).map(|q| dia.get(p, q).to_string())).collect())
        .collect();
    r.results = json!({
        "d": d,
        "hodge": s.numbers.iter().map(|(k, v)| (k.clone(), dimval(v))).collect::<serde_json::Map<_, _>>(),
        "chi": s.chi.as_ref().map(num),
        "hyperkahler": s.hyperkahler,
        "diamond": (0..=d).map(|p| (0..=d).map(|q| dimval(dia.get(p, q))).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "notes": chase.notes,
    });
    Ok(r)
}

/// The Hodge columns shown for a `d`-fold.
fn columns(d: usize, level: HodgeLevel) -> Vec<&'static str> {
    match (d, level) {
        (_, HodgeLevel::None) => vec![],
        (3, _) => vec!["h01", "h02", "h11", "h12", "chi"],
        (4, HodgeLevel::Rows) => vec!["h02", "h11", "h13"],
        (4, _) => vec!["h02", "h11", "h13", "h22", "chi"],
        _ => vec!["h01", "h02", "h11"],
    }
}

fn classify_cmd(d: usize, opts: ClassifyOptions, distinct: bool) -> Result<Report> {
    if d == 0 {
        bail!("d must be positive");
    }
    let rep = classify::classify(d, opts)?;
    let mut r = Report::new("classify", Status::Exact);
    let cols = columns(d, opts.hodge);
    let mut classes: Vec<String> = Vec::new();
    r.header = ["No.", "class", "G/P", "dim", "index", "F"].iter().map(|s| s.to_string()).collect();
    r.header.extend(cols.iter().map(|c| c.to_string()));
    if opts.scope == Scope::All {
        r.header.push("verified".into());
    }
    let mut rows_json = Vec::new();
    let rows = if distinct { &rep.distinct } else { &rep.rows };
    for (i, row) in rows.iter().enumerate() {
        let class = match classes.iter().position(|t| *t == row.pair.tag) {
            Some(j) => j + 1,
            None => {
                classes.push(row.pair.tag.clone());
                classes.len()
            }
        };
        let x = row.pair.space;
        let f = print_bundle(&row.pair.bundle, &x);
        let mut cells = vec![(i + 1).to_string(), class.to_string(), x.to_string(), row.dim.to_string(), row.index.to_string(), f.clone()];
        let mut hj = serde_json::Map::new();
        if let Some(h) = &row.hodge {
            for c in &cols {
                let v = if *c == "chi" {
                    h.chi.as_ref().map(|v| DimValue::Exact(v.clone()))
                } else {
                    h.numbers.get(*c).cloned()
                };
                let v = v.ok_or_else(|| anyhow!("{c} missing"));
                match v {
                    Ok(v) => {
                        if !v.is_exact() {
                            r.status = Status::Ambiguous;
                        }
                        cells.push(v.to_string());
                        hj.insert(c.to_string(), dimval(&v));
                    }
                    Err(_) => {
                        r.status = Status::Ambiguous;
                        cells.push("?".into());
                        hj.insert(c.to_string(), Value::Null);
                    }
                }
            }
        }
        if opts.scope == Scope::All {
            cells.push(if row.verified_scope { "yes" } else { "unverified" }.into());
        }
        r.rows.push(cells);
        rows_json.push(json!({
            "no": i + 1,
            "class": class,
            "space": x.to_string(),
            "bundle": f,
            "dim": row.dim,
            "index": row.index,
            "hodge": hj,
            "notes": row.pair.notes,
            "verified": row.verified_scope,
        }));
    }
    r.summary = vec![format!(
        "d={d}: {} rows, {} up to identification",
        rep.rows.len(),
        rep.distinct.len()
    )];
    for (p, why) in &rep.excluded {
        r.summary.push(format!("excluded {} {}: {why}", p.space, print_bundle(&p.bundle, &p.space)));
    }
    if !opts.enumeration.exceptions {
        r.summary.push("exception list disabled".into());
    }
    r.citations = vec!["identification: E6 diagram automorphism; F4/P4 as hyperplane section of E6/P1".into()];
    if opts.enumeration.exceptions {
        for e in classify::exception_list() {
            r.citations.push(format!("exception {} {}: {} [{}]", e.space, print_weight(&e.weight, &e.space), e.reason, e.citation));
        }
    }
    if opts.scope == Scope::All {
        r.citations.push("classical families: unverified against an independent classification".into());
    }
    r.results = json!({
        "d": d,
        "rows": rows_json,
        "distinct": rep.distinct.len(),
        "excluded": rep.excluded.iter().map(|(p, why)| json!({
            "space": p.space.to_string(),
            "bundle": print_bundle(&p.bundle, &p.space),
            "reason": why,
        })).collect::<Vec<_>>(),
        "ratio_rejected": rep.ratio_rejected.iter().map(|(x, why)| json!({"space": x.to_string(), "reason": why})).collect::<Vec<_>>(),
    });
    Ok(r)
}
