//! The subcommands.  Each returns the rendered report; `main` only prints.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use sextic_lattice::classify::{classify_ade, group_kples, ClassSets, EnumerateOptions, Inventory};
use sextic_lattice::criterion::{pre_z_split_test, SplitCurveSpec};
use sextic_lattice::discriminant::rat_mod;
use sextic_lattice::specialize::{find_certified, geometric_embeddings, marked_image, SearchBudget};
use sextic_lattice::{demo, ADEType, Component, ALGORITHM_VERSION};

use crate::dto::*;
use crate::{CliError, Format, Report, RunConfig};

/// Embeddings listed by `specialize` on unmarked data unless the search ends first.
pub const MAX_LISTED: usize = 16;

fn to_json<T: serde::Serialize>(x: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(s)
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Schema(e.to_string()))?;
    for r in rows {
        w.write_record(&r).map_err(|e| CliError::Schema(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Schema(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn list<T: ToString>(v: &[T]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", s.join(","))
}

// ---------------------------------------------------------------- classify

/// The classification document of `r`, from the cache when present.
pub fn classify_doc(r: &ADEType, cfg: &RunConfig) -> Result<ClassifyDoc, CliError> {
    let ade = r.to_string();
    if let Some(body) = cfg.cache.as_ref().and_then(|c| c.get(&ade)) {
        if let Ok(doc) = serde_json::from_str::<ClassifyDoc>(&body) {
            if doc.ade == ade && doc.version == ALGORITHM_VERSION {
                return Ok(doc);
            }
        }
    }
    let doc = compute_classify_doc(r)?;
    if let Some(c) = &cfg.cache {
        c.put(&ade, &to_json(&doc)?)?;
    }
    Ok(doc)
}

pub fn compute_classify_doc(r: &ADEType) -> Result<ClassifyDoc, CliError> {
    let recs = classify_ade(r)?;
    let types: Vec<TypeDoc> =
        recs.iter().enumerate().map(|(i, t)| profile_to_doc(i, &t.data, &t.profile, &t.fingerprint.0)).collect();
    Ok(ClassifyDoc {
        ade: r.to_string(),
        mu: r.mu(),
        glue: types.first().map(|t| t.glue.clone()).unwrap_or_default(),
        version: ALGORITHM_VERSION.into(),
        types,
    })
}

pub fn render_classify(doc: &ClassifyDoc, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(doc),
        Format::Csv => csv_rows(
            &["index", "g", "f", "degs", "z1", "z2", "zariski", "fingerprint"],
            doc.types.iter().map(|t| {
                vec![
                    t.index.to_string(),
                    list(&t.g),
                    list(&t.f),
                    list(&t.degs),
                    t.z1.to_string(),
                    t.z2.to_string(),
                    t.zariski_flag.to_string(),
                    t.fingerprint.clone(),
                ]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "{} (mu = {}): {} lattice type(s)", doc.ade, doc.mu, doc.types.len()).unwrap();
            for t in &doc.types {
                let order: u64 = t.g.iter().product();
                writeln!(
                    s,
                    "type {}: |G| = {order} G = {} F = {} degs = {} z1 = {} z2 = {}{}",
                    t.index,
                    list(&t.g),
                    list(&t.f),
                    list(&t.degs),
                    t.z1,
                    t.z2,
                    if t.zariski_flag { " (k-ple)" } else { "" }
                )
                .unwrap();
                for g in &t.glue {
                    writeln!(s, "  glue      {}", list(g)).unwrap();
                }
                for c in &t.classes {
                    write!(s, "  {:<16} {} order {}", c.role, list(&c.coords), c.class_order).unwrap();
                    if let Some(tau) = &c.tau {
                        let parts: Vec<String> = tau.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        write!(s, " tau {{{}}}", parts.join(", ")).unwrap();
                    }
                    s.push('\n');
                }
            }
            Ok(s)
        }
    }
}

pub fn run_classify(ade: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let r = ADEType::parse(ade)?;
    let doc = classify_doc(&r, cfg)?;
    Ok(Report::ok(render_classify(&doc, cfg.format)?))
}

// --------------------------------------------------------------- enumerate

pub fn enumerate_doc(max_mu: usize, cfg: &RunConfig) -> Result<EnumerateDoc, CliError> {
    if max_mu > 19 {
        return Err(CliError::Schema(format!("max-mu {max_mu} exceeds 19")));
    }
    let ades: Vec<ADEType> = (0..=max_mu).flat_map(ADEType::all_of_rank).collect();
    let per = ades
        .par_iter()
        .map(|r| {
            let types = classify_doc(r, cfg)?.summaries();
            let kples = group_kples(&types);
            Ok((types, kples))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let inv = Inventory::from_parts(max_mu, per, &EnumerateOptions::default());
    Ok(EnumerateDoc {
        max_mu,
        version: ALGORITHM_VERSION.into(),
        rows: inv
            .rows
            .iter()
            .map(|r| MuRowDoc { mu: r.mu, lattice_types: r.lattice_types, config_types: r.config_types })
            .collect(),
        kples: inv.kples.iter().map(kple_doc).collect(),
    })
}

pub fn run_enumerate(max_mu: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    let doc = enumerate_doc(max_mu, cfg)?;
    let body = match cfg.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => csv_rows(
            &["mu", "lattice_types", "config_types"],
            doc.rows.iter().map(|r| vec![r.mu.to_string(), r.lattice_types.to_string(), r.config_types.to_string()]),
        )?,
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "{:>3} {:>8} {:>8}", "mu", "lattice", "config").unwrap();
            for r in &doc.rows {
                writeln!(s, "{:>3} {:>8} {:>8}", r.mu, r.lattice_types, r.config_types).unwrap();
            }
            writeln!(s, "{} k-ple(s)", doc.kples.len()).unwrap();
            for k in &doc.kples {
                let m: Vec<String> =
                    k.members.iter().map(|m| format!("#{} (z1={}, z2={}, |G|={})", m.index, m.z1, m.z2, m.g_order)).collect();
                writeln!(s, "  {}: {}{}", k.ade, m.join(" "), if k.g_orders_differ { "  |G| differs" } else { "" })
                    .unwrap();
            }
            s
        }
    };
    Ok(Report::ok(body))
}

// -------------------------------------------------------------- specialize

pub fn read_lattice_doc(path: &Path) -> Result<LatticeDataDoc, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn specialize_doc(src: &LatticeDataDoc, dst: &LatticeDataDoc, cfg: &RunConfig) -> Result<SpecializeDoc, CliError> {
    let mut budget = SearchBudget::default();
    if let Some(n) = cfg.budget {
        budget.max_nodes = n;
    }
    let s = src.to_data()?;
    let t = dst.to_data()?;
    let (embeddings, complete, nodes) = match (src.to_extended()?, dst.to_extended()?) {
        (Some(xs), Some(xt)) => {
            let (e, complete, nodes) = find_certified(&xs, &xt, budget)?;
            let e: Vec<EmbeddingDoc> = e
                .iter()
                .map(|e| {
                    let mut d = EmbeddingDoc::new(e, Some(&xs.v_plus));
                    if marked_image(e, &xs, &xt).is_none() {
                        return Err(CliError::Core(sextic_lattice::Error::Consistency(
                            "certified embedding without marked image".into(),
                        )));
                    }
                    d.flags.marked_class_condition = e.flags.marked_class_condition;
                    Ok(d)
                })
                .collect::<Result<_, CliError>>()?;
            (e, complete, nodes)
        }
        (None, None) => {
            budget.max_results = MAX_LISTED;
            let r = geometric_embeddings(&s, &t, budget)?;
            let complete = r.complete || r.embeddings.len() == MAX_LISTED;
            (r.embeddings.iter().map(|e| EmbeddingDoc::new(e, None)).collect(), complete, r.nodes)
        }
        _ => return Err(CliError::Schema("either both files or neither must carry a marked class".into())),
    };
    Ok(SpecializeDoc { source: src.clone(), target: dst.clone(), complete, nodes, embeddings })
}

pub fn run_specialize(src: &Path, dst: &Path, cfg: &RunConfig) -> Result<Report, CliError> {
    let doc = specialize_doc(&read_lattice_doc(src)?, &read_lattice_doc(dst)?, cfg)?;
    let body = match cfg.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => csv_rows(
            &["embedding", "isometric", "h_preserving", "monoid", "primitive", "marked", "vanishing_h1"],
            doc.embeddings.iter().enumerate().map(|(i, e)| {
                let o = |b: Option<bool>| b.map(|b| b.to_string()).unwrap_or_default();
                vec![
                    i.to_string(),
                    e.flags.isometric.to_string(),
                    e.flags.h_preserving.to_string(),
                    e.flags.monoid_condition.to_string(),
                    e.flags.primitive.to_string(),
                    o(e.flags.marked_class_condition),
                    o(e.flags.vanishing_h1),
                ]
            }),
        )?,
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "{} -> {}: {} embedding(s), search {} after {} nodes",
                doc.source.ade,
                doc.target.ade,
                doc.embeddings.len(),
                if doc.complete { "complete" } else { "incomplete" },
                doc.nodes
            )
            .unwrap();
            for (i, e) in doc.embeddings.iter().enumerate() {
                writeln!(s, "embedding {i}: {:?}", e.flags).unwrap();
                if let Some(m) = &e.marked_image {
                    writeln!(s, "  sigma(v+) = {}", list(m)).unwrap();
                }
            }
            s
        }
    };
    let code = if !doc.embeddings.is_empty() {
        crate::exit::OK
    } else if doc.complete {
        crate::exit::NOT_FOUND
    } else {
        crate::exit::BUDGET
    };
    Ok(Report { body, code })
}

// --------------------------------------------------------------- criterion

/// `TYPE:TAU`, e.g. `A2:1`.
pub fn parse_sing(s: &str) -> Result<(Component, usize), CliError> {
    let (ty, tau) = s.split_once(':').ok_or_else(|| CliError::Schema(format!("expected TYPE:TAU, got {s:?}")))?;
    let r = ADEType::parse(ty)?;
    let [c] = r.components() else {
        return Err(CliError::Schema(format!("{ty:?} is not a single singularity")));
    };
    let tau = tau.trim().parse().map_err(|_| CliError::Schema(format!("bad tau {tau:?}")))?;
    Ok((*c, tau))
}

pub fn run_criterion(deg: u32, t: u32, sing: &[String], cfg: &RunConfig) -> Result<Report, CliError> {
    let incidences = sing.iter().map(|s| parse_sing(s)).collect::<Result<Vec<_>, _>>()?;
    let spec = SplitCurveSpec { degree: deg, t_gamma: t, incidences };
    let lhs = spec.lhs()?;
    let res = pre_z_split_test(&spec)?;
    let body = match cfg.format {
        Format::Json => to_json(&serde_json::json!({
            "degree": deg,
            "t": t,
            "lhs": rat_str(&lhs),
            "result": res.as_str(),
        }))?,
        Format::Csv => csv_rows(&["degree", "t", "lhs", "result"], [vec![
            deg.to_string(),
            t.to_string(),
            rat_str(&lhs),
            res.as_str().to_string(),
        ]])?,
        Format::Text => format!("deg^2/2 + sum sigma_P = {} vs t = {t}: {}\n", rat_str(&lhs), res.as_str()),
    };
    Ok(Report::ok(body))
}

// -------------------------------------------------------------------- demo

pub fn run_demo(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut s = String::new();
    let r = ADEType::parse(demo::TARGET_ADE)?;
    let base = demo::target_lattice(0)?;
    writeln!(s, "R = {r}, mu = {}", r.mu()).unwrap();
    let names = ["t3", "e7", "e'7", "h"];
    let mut q = Vec::new();
    for (i, n) in names.iter().enumerate() {
        let mut g = [0i64; 4];
        g[i] = 1;
        let x = demo::last_node_coords(&r, &g);
        let e = base.engine();
        let ord = e.element_order(e.class_of(&x));
        // Representative in (-1, 1].
        let mut v = rat_mod(&base.inner(&x, &x), 2);
        if v > sextic_lattice::Rat::from_integer(1.into()) {
            v -= sextic_lattice::Rat::from_integer(2.into());
        }
        q.push(format!("{} (order {ord}): q = {} mod 2", n, rat_str(&v)));
    }
    writeln!(s, "discriminant group generators:\n  {}", q.join("\n  ")).unwrap();

    let doc = classify_doc(&r, cfg)?;
    writeln!(s, "{} lattice types; orders {}", doc.types.len(), list(&doc.types.iter().map(|t| t.g.iter().product::<u64>()).collect::<Vec<_>>())).unwrap();
    for i in 0..4 {
        let l = demo::target_lattice(i)?;
        let sets = ClassSets::compute(&l);
        let has = |v: &[i64], set: &[Vec<i64>]| set.iter().any(|x| x == v);
        writeln!(
            s,
            "H{i}: |H| = {} (expected {}), |L| = {}, |C| = {}, u in C: {}, v in L: {}, w in C: {}",
            l.g_order(),
            demo::H_ORDERS[i],
            sets.lines.len(),
            sets.conics.len(),
            has(&demo::U, &sets.conics),
            has(&demo::V, &sets.lines),
            has(&demo::W, &sets.conics),
        )
        .unwrap();
    }

    let mut sigma = demo::sigma()?;
    let xs = demo::source_extended()?;
    let xt = demo::target_extended()?;
    sextic_lattice::specialize::certify(&mut sigma, &xs, &xt)?;
    writeln!(s, "sigma: {} -> {} (H3), flags {:?}", demo::SOURCE_ADE, demo::TARGET_ADE, sigma.flags).unwrap();
    if let Some((k, mp, _)) = marked_image(&sigma, &xs, &xt) {
        let img: Vec<String> = sigma.apply(&xs.v_plus).iter().map(rat_str).collect();
        writeln!(s, "  sigma(w') = [{}] = {} + {}", img.join(", "), if k == 0 { "w" } else { "iota(w)" }, list(&mp)).unwrap();
    }
    let body = match cfg.format {
        Format::Json => to_json(&serde_json::json!({ "demo": s }))?,
        _ => s,
    };
    Ok(Report::ok(body))
}
