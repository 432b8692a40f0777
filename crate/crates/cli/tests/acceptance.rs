//! Acceptance suite: one PASS/FAIL line per criterion.  Every comparison is
//! exact; the runtime limits below are the only non-exact pins.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};

use sextic_lattice::classify::{
    canonical_tau_data, classify_ade, enumerate_all, tau_data, ClassSets, EnumerateOptions, Role, TypeRecord,
};
use sextic_lattice::criterion::{pre_z_split_test, spec_from_class, CriterionResult, SplitCurveSpec};
use sextic_lattice::discriminant::{disc_form, isotropic_orbits, overlattice, rat_mod, span};
use sextic_lattice::k3::embeds_in_k3;
use sextic_lattice::lattice::{vectors_in_coset_with_norm, Basis};
use sextic_lattice::specialize::{
    certify, find_certified, lineage_check, lineage_family, marked_image, positive_roots, ExtendedLatticeData,
    SearchBudget,
};
use sextic_lattice::{demo, ADEType, Component, EvenLattice, Family, Int, Rat};

type Outcome = Result<String, String>;

const LIMIT_C1: Duration = Duration::from_secs(60);
const LIMIT_C2: Duration = Duration::from_secs(300);
const LIMIT_C4: Duration = Duration::from_secs(600);
const LIMIT_C7: Duration = Duration::from_secs(120);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn core<T>(r: sextic_lattice::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn q(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Classified types, shared by the criteria that inspect them.
struct Pool {
    by_ade: BTreeMap<String, Vec<TypeRecord>>,
}

impl Pool {
    fn get(&mut self, ade: &str) -> Result<&[TypeRecord], String> {
        let r = core(ADEType::parse(ade))?;
        let key = r.to_string();
        if !self.by_ade.contains_key(&key) {
            let recs = core(classify_ade(&r))?;
            self.by_ade.insert(key.clone(), recs);
        }
        Ok(&self.by_ade[&key])
    }

    fn all(&self) -> impl Iterator<Item = &TypeRecord> {
        self.by_ade.values().flatten()
    }
}

struct Suite {
    failed: usize,
    total: usize,
}

impl Suite {
    fn run(&mut self, id: &str, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let mut r = f();
        let dt = t.elapsed();
        if let (Ok(_), Some(l)) = (&r, limit) {
            if dt > l {
                r = Err(format!("took {dt:.1?}, limit {l:?}"));
            }
        }
        self.total += 1;
        let lim = limit.map(|l| format!(", limit {}s", l.as_secs())).unwrap_or_default();
        match r {
            Ok(d) => println!("PASS {id} {title} [exact{lim}; {dt:.1?}] {d}"),
            Err(d) => {
                self.failed += 1;
                println!("FAIL {id} {title} [exact{lim}; {dt:.1?}] {d}");
            }
        }
    }
}

// ------------------------------------------------------------------ C1

fn c1(pool: &mut Pool) -> Outcome {
    let recs = pool.get(demo::TARGET_ADE)?;
    ensure(recs.len() == 4, format!("{} types", recs.len()))?;
    let mut orders: Vec<usize> = recs.iter().map(|t| t.data.g_order()).collect();
    orders.sort_unstable();
    ensure(orders == [1, 2, 4, 8], format!("orders {orders:?}"))?;
    // each printed subgroup matches exactly one computed type
    for i in 0..4 {
        let h = core(demo::target_lattice(i))?;
        ensure(h.g_order() == demo::H_ORDERS[i], format!("H{i} has order {}", h.g_order()))?;
        let hits = recs.iter().filter(|t| t.data.engine().equivalent(&t.data.glue().elements, &h.glue().elements)).count();
        ensure(hits == 1, format!("H{i} matches {hits} computed types"))?;
    }
    // discriminant form against the printed formula, on all 512 elements
    let r = core(ADEType::parse(demo::TARGET_ADE))?;
    let sigma = r.sigma_lattice();
    let form = disc_form(&sigma);
    ensure(form.order() == Int::from(512), "discriminant group order")?;
    for w in 0..4i64 {
        for x in 0..8i64 {
            for y in 0..8i64 {
                for z in 0..2i64 {
                    let d = demo::last_node_coords(&r, &[w, x, y, z]);
                    let v = core(sigma.vector_i64(&d, Basis::Dual))?;
                    let got = core(form.q(&v))?;
                    let want = q(-3, 4) * q(w * w, 1) - q(7, 8) * q(x * x, 1) - q(7, 8) * q(y * y, 1) + q(z * z, 2);
                    ensure(rat_mod(&got, 2) == rat_mod(&want, 2), format!("q({w},{x},{y},{z}) = {got}"))?;
                }
            }
        }
    }
    // L and C of the printed subgroups
    let iota = |l: &sextic_lattice::classify::LatticeData, v: &[i64]| l.iota_dual(v);
    let expect: [(Vec<Vec<i64>>, Vec<Vec<i64>>); 4] = {
        let h2 = core(demo::target_lattice(2))?;
        let h3 = core(demo::target_lattice(3))?;
        [
            (vec![], vec![]),
            (vec![], vec![demo::U.to_vec()]),
            (vec![demo::V.to_vec(), iota(&h2, &demo::V)], vec![demo::U.to_vec()]),
            (vec![], vec![demo::U.to_vec(), demo::W.to_vec(), iota(&h3, &demo::W)]),
        ]
    };
    for (i, (lines, conics)) in expect.into_iter().enumerate() {
        let h = core(demo::target_lattice(i))?;
        let s = ClassSets::compute(&h);
        let sorted = |mut v: Vec<Vec<i64>>| {
            v.sort();
            v
        };
        ensure(sorted(s.lines.clone()) == sorted(lines), format!("L(H{i}) = {:?}", s.lines))?;
        ensure(sorted(s.conics.clone()) == sorted(conics), format!("C(H{i}) = {:?}", s.conics))?;
    }
    Ok("4 types |G| {1,2,4,8} match up to Aut; q formula on 512 elements; L, C = u, v, w".into())
}

// ------------------------------------------------------------------ C2 / C3

struct Row {
    label: char,
    z1: usize,
    z2: usize,
    g: &'static [u64],
    f: &'static [u64],
}

struct ConfigType {
    name: &'static str,
    ade: &'static str,
    degs: &'static [u32],
    rows: &'static [Row],
}

const fn row(label: char, z1: usize, z2: usize, g: &'static [u64], f: &'static [u64]) -> Row {
    Row { label, z1, z2, g, f }
}

const CONFIG_TYPES: &[ConfigType] = &[
    ConfigType { name: "A", ade: "3A5", degs: &[3, 3], rows: &[row('l', 1, 0, &[6], &[3]), row('n', 0, 0, &[2], &[])] },
    ConfigType {
        name: "B",
        ade: "A3+2A7",
        degs: &[2, 4],
        rows: &[row('l', 1, 0, &[8], &[4]), row('c', 0, 1, &[4], &[2]), row('n', 0, 0, &[2], &[])],
    },
    ConfigType { name: "C", ade: "2A4+A9", degs: &[1, 5], rows: &[row('l', 1, 0, &[10], &[5]), row('n', 0, 0, &[2], &[])] },
    ConfigType { name: "D", ade: "A3+A5+A11", degs: &[2, 4], rows: &[row('l', 1, 1, &[12], &[6])] },
    ConfigType { name: "a", ade: "6A2", degs: &[6], rows: &[row('c', 0, 1, &[3], &[3]), row('n', 0, 0, &[], &[])] },
    ConfigType { name: "b", ade: "2A1+4A3", degs: &[2, 4], rows: &[row('c', 0, 1, &[4], &[2]), row('n', 0, 0, &[2], &[])] },
    ConfigType { name: "c", ade: "4A4", degs: &[6], rows: &[row('c', 0, 2, &[5], &[5]), row('n', 0, 0, &[], &[])] },
    ConfigType {
        name: "d",
        ade: "2A1+2A2+2A5",
        degs: &[2, 4],
        rows: &[row('c', 0, 2, &[6], &[3]), row('n', 0, 0, &[2], &[])],
    },
    ConfigType { name: "e", ade: "3A6", degs: &[6], rows: &[row('c', 0, 3, &[7], &[7]), row('n', 0, 0, &[], &[])] },
    ConfigType {
        name: "f",
        ade: "A1+A3+2A7",
        degs: &[2, 4],
        rows: &[row('c', 0, 3, &[8], &[4]), row('l', 1, 0, &[8], &[4]), row('n', 0, 0, &[4], &[2])],
    },
];

/// `(class order, τ)` per conic of the printed conic table.
const CONIC_TAU: &[(&str, &[(usize, &[usize])])] = &[
    ("a", &[(3, &[1, 1, 1, 1, 1, 1])]),
    ("b", &[(4, &[1, 1, 1, 1, 1, 1])]),
    ("c", &[(5, &[1, 1, 2, 2]), (5, &[2, 2, 4, 4])]),
    ("d", &[(6, &[1, 1, 2, 2, 1, 1]), (3, &[0, 0, 1, 1, 2, 2])]),
    ("e", &[(7, &[1, 2, 3]), (7, &[2, 4, 6]), (7, &[3, 6, 2])]),
    ("f", &[(8, &[1, 1, 1, 5]), (4, &[0, 2, 2, 2]), (8, &[1, 3, 3, 7])]),
];

/// The types forming the configuration type: a fingerprint class whose
/// invariants are exactly the printed rows.  Returns `(label, record index)`.
fn match_config(recs: &[TypeRecord], ct: &ConfigType) -> Result<Vec<(char, usize)>, String> {
    let mut classes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, t) in recs.iter().enumerate() {
        if t.profile.degs == ct.degs {
            classes.entry(t.fingerprint.0.as_str()).or_default().push(i);
        }
    }
    let key = |z1: usize, z2: usize, g: &[u64], f: &[u64]| (z1, z2, g.to_vec(), f.to_vec());
    let mut want: Vec<_> = ct.rows.iter().map(|r| key(r.z1, r.z2, r.g, r.f)).collect();
    want.sort();
    for members in classes.values() {
        let mut got: Vec<_> = members
            .iter()
            .map(|&i| {
                let p = &recs[i].profile;
                key(p.z1, p.z2, &p.g_structure, &p.f_structure)
            })
            .collect();
        got.sort();
        if got == want {
            let mut out = Vec::new();
            for r in ct.rows {
                let i = members
                    .iter()
                    .copied()
                    .find(|&i| {
                        let p = &recs[i].profile;
                        key(p.z1, p.z2, &p.g_structure, &p.f_structure) == key(r.z1, r.z2, r.g, r.f)
                    })
                    .expect("matched");
                out.push((r.label, i));
            }
            return Ok(out);
        }
    }
    let seen: Vec<String> = classes
        .values()
        .map(|m| {
            let v: Vec<String> = m
                .iter()
                .map(|&i| {
                    let p = &recs[i].profile;
                    format!("({},{},{:?},{:?})", p.z1, p.z2, p.g_structure, p.f_structure)
                })
                .collect();
            v.join(" ")
        })
        .collect();
    Err(format!("gamma_{} ({} {:?}): no configuration with the printed rows; found {:?}", ct.name, ct.ade, ct.degs, seen))
}

fn c2(pool: &mut Pool) -> Outcome {
    let mut n = 0;
    for ct in CONFIG_TYPES {
        let recs = pool.get(ct.ade)?;
        n += match_config(recs, ct)?.len();
    }
    Ok(format!("10 configuration types, {n} lattice-type rows match"))
}

fn c3(pool: &mut Pool) -> Outcome {
    for (name, conics) in CONIC_TAU {
        let ct = CONFIG_TYPES.iter().find(|c| c.name == *name).unwrap();
        let recs = pool.get(ct.ade)?;
        let (_, i) = *match_config(recs, ct)?.iter().find(|(l, _)| *l == 'c').unwrap();
        let t = &recs[i];
        let e = t.data.engine();
        let got = tau_data(&t.profile, &t.data, Role::ConicLift);
        let printed: Vec<(usize, Vec<usize>)> = conics.iter().map(|(o, tau)| (*o, tau.to_vec())).collect();
        ensure(got.len() == printed.len(), format!("{name}: {} conics, printed {}", got.len(), printed.len()))?;
        let a = canonical_tau_data(e, &got);
        let b = canonical_tau_data(e, &printed);
        ensure(a == b, format!("{name}: computed {a:?} vs printed {b:?}"))?;
    }
    Ok("6 conic tau lists agree up to Aut(E) x lift swap".into())
}

// ------------------------------------------------------------------ C4

fn c4() -> Outcome {
    let inv = core(enumerate_all(8, &EnumerateOptions::default()))?;
    let lat: Vec<usize> = inv.rows.iter().map(|r| r.lattice_types).collect();
    let cfg: Vec<usize> = inv.rows.iter().map(|r| r.config_types).collect();
    let want = [1, 1, 2, 3, 6, 10, 18, 30, 53];
    ensure(lat == want, format!("lattice counts {lat:?}"))?;
    ensure(cfg == want, format!("config counts {cfg:?}"))?;
    ensure(inv.kples.is_empty(), format!("{} k-ples below mu 9", inv.kples.len()))?;
    Ok(format!("counts {lat:?} for both lattice and configuration types"))
}

fn c4_stretch() -> Outcome {
    let inv = core(enumerate_all(12, &EnumerateOptions::default()))?;
    let r = &inv.rows[12];
    ensure((r.lattice_types, r.config_types) == (416, 415), format!("mu 12 row {}/{}", r.lattice_types, r.config_types))?;
    let k: Vec<_> = inv.kples.iter().filter(|k| k.mu == 12).collect();
    ensure(k.len() == 1, format!("{} k-ples at mu 12", k.len()))?;
    let k = k[0];
    ensure(k.ade == "6A2" && k.members.len() == 2 && k.g_orders_differ, format!("{k:?}"))?;
    let mut z2: Vec<usize> = k.members.iter().map(|m| m.z2).collect();
    let mut g: Vec<u64> = k.members.iter().map(|m| m.g_order).collect();
    z2.sort_unstable();
    g.sort_unstable();
    ensure(z2 == [0, 1] && g == [1, 3], format!("{k:?}"))?;
    Ok("mu 12: 416/415, unique k-ple 6A2 with z2 {0,1}, |G| {1,3}".into())
}

// ------------------------------------------------------------------ C5 / C6

fn all_conic_lift_orders(t: &TypeRecord, d: usize) -> Result<usize, String> {
    let c: Vec<_> = t.profile.classes_with(Role::ConicLift).collect();
    for x in &c {
        ensure(x.class_order == d, format!("conic lift of order {}", x.class_order))?;
    }
    Ok(c.len())
}

fn c5(pool: &mut Pool) -> Outcome {
    let recs = pool.get("9A2")?;
    ensure(recs.len() == 1, format!("9A2: {} types", recs.len()))?;
    let p = &recs[0].profile;
    ensure(p.g_structure == [3, 3, 3] && p.z2 == 12, format!("9A2: G {:?} z2 {}", p.g_structure, p.z2))?;
    let n = all_conic_lift_orders(&recs[0], 3)?;
    ensure(n == 24, format!("9A2: {n} conic lifts"))?;
    let recs = pool.get("6A3")?;
    let t: Vec<_> = recs.iter().filter(|t| t.profile.degs == [2, 2, 2]).collect();
    ensure(t.len() == 1, format!("6A3: {} types with degs [2,2,2]", t.len()))?;
    let p = &t[0].profile;
    ensure(p.g_structure == [4, 4] && p.z2 == 6, format!("6A3: G {:?} z2 {}", p.g_structure, p.z2))?;
    let n = all_conic_lift_orders(t[0], 4)?;
    ensure(n == 12, format!("6A3: {n} conic lifts"))?;
    Ok("9A2: G (Z/3)^3, z2 12, 24 lifts of order 3; 6A3 [2,2,2]: G (Z/4)^2, z2 6, order 4".into())
}

const QC: ConfigType = ConfigType {
    name: "QC",
    ade: "3A1+4A3",
    degs: &[2, 4],
    rows: &[row('c', 0, 1, &[4], &[2]), row('n', 0, 0, &[4], &[2])],
};

fn c6(pool: &mut Pool) -> Outcome {
    let recs = pool.get(QC.ade)?;
    // other [2,4] types put some A1 on the conic: a different configuration
    let m = match_config(recs, &QC)?;
    let fp = &recs[m[0].1].fingerprint.0;
    let class: Vec<&TypeRecord> = recs.iter().filter(|t| &t.fingerprint.0 == fp).collect();
    ensure(class.len() == 2, format!("{} types in the configuration", class.len()))?;
    let t: Vec<&TypeRecord> = m.iter().map(|&(_, i)| &recs[i]).collect();
    for x in &t {
        let conic = x.profile.classes_with(Role::ConicComponent).next().ok_or("no conic component")?;
        let tau = conic.tau.as_ref().ok_or("conic component without τ")?;
        for (comp, &j) in x.data.ade().components().iter().zip(tau) {
            ensure(comp.rank != 1 || j == 0, "conic passes through an A1 point")?;
        }
    }
    let t0 = t.iter().find(|t| t.profile.z2 == 0).unwrap();
    let e = t0.data.engine();
    let cubic_lifts = &t0.sets.cubics_lift;
    ensure(cubic_lifts.len() == 2, format!("|G^l| = {}", cubic_lifts.len()))?;
    let gens: Vec<u32> = cubic_lifts.iter().map(|x| e.class_of(x)).collect();
    ensure(e.span(&gens).len() == t0.data.g_order(), "G^l does not generate G")?;
    Ok("two types (0,1), (0,0); G Z/4, |F| 2; |G^l| = 2 generates G".into())
}

// ------------------------------------------------------------------ C7

fn c7(pool: &mut Pool) -> Outcome {
    let mut sigma = core(demo::sigma())?;
    ensure(sigma.flags.base_valid(), format!("base flags {:?}", sigma.flags))?;
    let s = core(demo::source_extended())?;
    let s0 = core(demo::target_extended())?;
    core(certify(&mut sigma, &s, &s0))?;
    ensure(sigma.flags.certified(), format!("flags {:?}", sigma.flags))?;
    let (k, mp, _) = marked_image(&sigma, &s, &s0).ok_or("no marked image")?;
    let mut want = vec![0i64; 17];
    want[1] = 1; // t₂
    want[11] = 1; // e′₂
    ensure(k == 0 && mp == want, format!("sigma(w') = marked[{k}] + {mp:?}"))?;

    // rediscovery between the classified types
    let b = CONFIG_TYPES.iter().find(|c| c.name == "b").unwrap();
    let recs = pool.get(b.ade)?;
    let (_, ib) = *match_config(recs, b)?.iter().find(|(l, _)| *l == 'c').unwrap();
    let src = &recs[ib];
    let src_x = core(ExtendedLatticeData::new(src.data.clone(), src.sets.conics_lift[0].clone()))?;
    let h3 = core(demo::target_lattice(3))?;
    let recs = pool.get(demo::TARGET_ADE)?;
    let tgt = recs
        .iter()
        .find(|t| t.data.engine().equivalent(&t.data.glue().elements, &h3.glue().elements))
        .ok_or("no computed type for H3")?;
    let tgt_x = core(ExtendedLatticeData::new(tgt.data.clone(), tgt.sets.conics_lift[0].clone()))?;
    let (found, complete, nodes) = core(find_certified(&src_x, &tgt_x, SearchBudget::default()))?;
    ensure(found.is_some(), format!("no certified embedding (complete {complete}, {nodes} nodes)"))?;
    Ok(format!("fixture certified, sigma(w') = w + t2 + e2'; search found one after {nodes} nodes"))
}

// ------------------------------------------------------------------ C8

/// `(degree, class order, ADE of the originator, configuration name)`.
const LINEAGES: &[(i64, usize, &str, &str)] =
    &[(1, 6, "3A5", "A"), (1, 8, "A3+2A7", "B"), (1, 10, "2A4+A9", "C"), (1, 12, "A3+A5+A11", "D"), (2, 4, "2A1+4A3", "b")];

fn c8(pool: &mut Pool) -> Outcome {
    let mut notes = Vec::new();
    for &(n, d, ade, name) in LINEAGES {
        let max_mu = if n == 1 { 16 } else { 15 };
        let (mins, fam) = core(lineage_family(n, d, max_mu))?;
        let orig = mins.first().ok_or(format!("d={d}: no members up to mu 19"))?;
        ensure(orig.base.ade().to_string() == ade, format!("d={d}: originator {}", orig.base.ade()))?;
        // the originator's lattice type is the printed one
        let ct = CONFIG_TYPES.iter().find(|c| c.name == name).unwrap();
        let want = if n == 1 { 'l' } else { 'c' };
        let recs = pool.get(ade)?;
        let (_, i) = *match_config(recs, ct)?.iter().find(|(l, _)| *l == want).unwrap();
        let t = &recs[i];
        ensure(
            t.data.engine().equivalent(&t.data.glue().elements, &orig.base.glue().elements),
            format!("d={d}: originator is not lambda_{name},{want}"),
        )?;
        let rep = core(lineage_check(&fam, orig, SearchBudget::default()))?;
        if !rep.passed() {
            let f: Vec<String> = rep.failures().map(|m| format!("{} mu={} {:?}", m.ade, m.mu, m.outcome)).collect();
            return Err(format!("d={d}: unique minimal {}, failures {f:?}", rep.originator_unique_minimal));
        }
        notes.push(format!("{}d={d}: {ade} (mu {}), {} member(s)", if n == 1 { "line " } else { "conic " }, orig.mu(), fam.len()));
    }
    Ok(notes.join("; "))
}

// ------------------------------------------------------------------ C9

fn c9(pool: &Pool) -> Outcome {
    let torus = SplitCurveSpec { degree: 2, t_gamma: 0, incidences: vec![(Component::a(2), 1); 6] };
    ensure(core(pre_z_split_test(&torus))? == CriterionResult::Equality, "torus conic")?;
    let line = SplitCurveSpec { degree: 1, t_gamma: 3, incidences: vec![] };
    ensure(core(pre_z_split_test(&line))? == CriterionResult::StrictInequality, "triple tangent line")?;
    let mut n = 0;
    for t in pool.all() {
        for x in &t.sets.conics_lift {
            let spec = core(spec_from_class(&t.data, x, 2))?;
            let r = core(pre_z_split_test(&spec))?;
            ensure(r == CriterionResult::Equality, format!("{} conic {x:?}: {}", t.data.ade(), r.as_str()))?;
            n += 1;
        }
    }
    Ok(format!("torus equality, line strict; {n} conic lifts give equality"))
}

// ------------------------------------------------------------------ C10

fn root_count(c: Component) -> usize {
    let r = c.rank;
    match c.family {
        Family::A => r * (r + 1),
        Family::D => 2 * r * (r - 1),
        Family::E => [72, 126, 240][r - 6],
    }
}

/// Roots by exhausting the box `[-b, b]^r` of simple-root coefficients.
fn naive_roots(c: Component, b: i64) -> usize {
    let g = c.gram();
    let r = c.rank;
    let mut x = vec![-b; r];
    let mut n = 0;
    loop {
        let mut s = 0i64;
        for i in 0..r {
            for j in 0..r {
                s += x[i] * g[i][j] * x[j];
            }
        }
        if s == -2 {
            n += 1;
        }
        let mut k = 0;
        loop {
            if k == r {
                return n;
            }
            x[k] += 1;
            if x[k] <= b {
                break;
            }
            x[k] = -b;
            k += 1;
        }
    }
}

fn components_up_to(rank: usize) -> Vec<Component> {
    let mut v: Vec<Component> = (1..=rank).map(Component::a).collect();
    v.extend((4..=rank).map(Component::d));
    v.extend((6..=rank.min(8)).map(Component::e));
    v
}

fn c10_roots() -> Result<String, String> {
    for c in components_up_to(8) {
        let l = EvenLattice::from_i64(&c.gram(), (0..c.rank).map(|i| format!("e{i}")).collect()).unwrap();
        let zero = l.vector_i64(&vec![0; c.rank], Basis::Primal).unwrap();
        let n = core(vectors_in_coset_with_norm(&l, &zero, &q(-2, 1)))?.len();
        ensure(n == root_count(c), format!("{c}: {n} roots"))?;
        ensure(2 * positive_roots(c).len() == n, format!("{c}: positive roots"))?;
        if c.rank <= 6 {
            // highest-root coefficients are at most 3 in rank ≤ 6
            ensure(naive_roots(c, 3) == n, format!("{c}: box oracle"))?;
        }
    }
    Ok("root counts rank <= 8".into())
}

/// Lattice types of `r` through the generic discriminant-form path with the
/// two root/isotropic conditions read off coset short vectors.
fn oracle_types(r: &ADEType) -> Result<Vec<usize>, String> {
    let mu = r.mu();
    let sigma = r.sigma_lattice();
    let form = disc_form(&sigma);
    let roots = r.root_lattice();
    let auts: Vec<Vec<usize>> = r
        .aut_generators()
        .into_iter()
        .map(|mut p| {
            p.push(mu);
            p
        })
        .collect();
    let mut out = Vec::new();
    for h in core(isotropic_orbits(&form, &auts))? {
        let mut ok = true;
        for el in span(&form, &h.generators) {
            if el.iter().all(|c| c.is_zero()) {
                continue;
            }
            let v = core(sigma.to_basis(&form.element(&el), Basis::Dual))?;
            let e_part = core(roots.vector(v.coords[..mu].to_vec(), Basis::Dual))?;
            let hc = v.coords[mu].to_integer();
            let odd = (hc % Int::from(2)) != Int::zero();
            let target = if odd { q(-1, 2) } else { q(-2, 1) };
            if !core(vectors_in_coset_with_norm(&roots, &e_part, &target))?.is_empty() {
                ok = false;
                break;
            }
        }
        if ok {
            let lam = core(core(overlattice(&form, &h.generators))?.to_even_lattice())?;
            if core(embeds_in_k3(&lam))? {
                out.push(h.order.to_usize().unwrap());
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn c10_oracle() -> Result<String, String> {
    let mut n = 0;
    for mu in 0..=6 {
        for r in ADEType::all_of_rank(mu) {
            let want = oracle_types(&r)?;
            let mut got: Vec<usize> = core(sextic_lattice::classify::lattice_types(&r))?.iter().map(|l| l.g_order()).collect();
            got.sort_unstable();
            ensure(got == want, format!("{r}: engine {got:?} vs oracle {want:?}"))?;
            n += 1;
        }
    }
    Ok(format!("oracle agrees on {n} ADE types"))
}

/// Phase `k` of a Gauss sum `Σ exp(πi q(x)) = √|A| · exp(2πik/8)`.
fn gauss_phase(qs: impl Iterator<Item = Rat>, order: f64) -> Result<i64, String> {
    let (mut re, mut im) = (0f64, 0f64);
    for x in qs {
        let t = std::f64::consts::PI * rat_mod(&x, 2).to_f64().unwrap();
        re += t.cos();
        im += t.sin();
    }
    let s = order.sqrt();
    let k = (im.atan2(re) / (std::f64::consts::PI / 4.0)).round();
    let (er, ei) = ((k * std::f64::consts::PI / 4.0).cos() * s, (k * std::f64::consts::PI / 4.0).sin() * s);
    ensure((re - er).abs() < 1e-6 && (im - ei).abs() < 1e-6, "Gauss sum is not an eighth root of unity times sqrt|A|")?;
    Ok((k as i64).rem_euclid(8))
}

fn form_phase(l: &EvenLattice) -> Result<i64, String> {
    let f = disc_form(l);
    let n = f.small_order().ok_or("large group")?;
    gauss_phase(f.elements().iter().map(|c| f.q_coords(c)), n as f64)
}

fn c10_milgram() -> Result<String, String> {
    let mut local: BTreeMap<String, i64> = BTreeMap::new();
    for c in components_up_to(19) {
        let l = ADEType::new(vec![c]).root_lattice();
        local.insert(c.to_string(), form_phase(&l)?);
    }
    let h = form_phase(&EvenLattice::from_i64(&[vec![2]], vec!["h".into()]).unwrap())?;
    let mut n = 0;
    let mut direct = 0;
    for mu in 0..=19 {
        for r in ADEType::all_of_rank(mu) {
            let k = r.components().iter().map(|c| local[&c.to_string()]).sum::<i64>() + h;
            ensure((k - (1 - mu as i64)).rem_euclid(8) == 0, format!("{r}: phase {k}"))?;
            // the whole form directly, where it is small enough
            if mu <= 12 && r.components().iter().map(|c| c.det()).product::<u64>() <= 256 {
                let kd = form_phase(&r.sigma_lattice())?;
                ensure((kd - (1 - mu as i64)).rem_euclid(8) == 0, format!("{r}: direct phase {kd}"))?;
                direct += 1;
            }
            n += 1;
        }
    }
    Ok(format!("Milgram on {n} ADE types ({direct} summed directly)"))
}

fn c10_types(pool: &Pool) -> Result<String, String> {
    let mut n = 0;
    for t in pool.all() {
        let l = &t.data;
        let s = &t.sets;
        let e = l.engine();
        let name = l.ade().to_string();
        ensure(l.glue().elements.iter().all(|&x| l.glue().contains(e.iota(x))), format!("{name}: H not ι-stable"))?;
        for (set, lifts) in [(&s.lines, &s.lines_lift), (&s.conics, &s.conics_lift), (&s.cubics, &s.cubics_lift)] {
            for x in set.iter() {
                ensure(set.contains(&l.iota_dual(x)), format!("{name}: class set not ι-stable"))?;
            }
            ensure(lifts.len() % 2 == 0, format!("{name}: odd lift count"))?;
            ensure(lifts.iter().all(|x| l.iota_dual(x) != *x), format!("{name}: ι fixes a lift"))?;
        }
        for c in &t.profile.classes {
            if let Some(tau) = &c.tau {
                for (comp, &j) in l.ade().components().iter().zip(tau) {
                    if j > 0 {
                        ensure(core(comp.even_multiplicity(j))?, format!("{name}: odd multiplicity at {comp} τ={j}"))?;
                    }
                }
            }
            match c.role {
                Role::LineLift => ensure([6, 8, 10, 12].contains(&c.class_order), format!("{name}: line order {}", c.class_order))?,
                Role::ConicLift => ensure((3..=8).contains(&c.class_order), format!("{name}: conic order {}", c.class_order))?,
                _ => {}
            }
        }
        ensure(t.profile.z1 <= 1 && t.profile.z2 <= 12, format!("{name}: z1 {} z2 {}", t.profile.z1, t.profile.z2))?;
        // Λ = Θ + ⟨𝒵₁⟩ + ⟨𝒵₂⟩ + ⟨𝒵₃⟩, on glue classes
        let gens: Vec<u32> = s
            .theta_vectors()
            .iter()
            .chain(&s.lines_lift)
            .chain(&s.conics_lift)
            .chain(&s.cubics_lift)
            .map(|x| e.class_of(x))
            .collect();
        ensure(e.span(&gens) == l.glue().elements, format!("{name}: generation identity fails"))?;
        n += 1;
    }
    Ok(format!("ι-stability, parity, ranges, generation identity on {n} types"))
}

fn c10(pool: &mut Pool) -> Outcome {
    // every type up to total rank 10 joins the named ones
    for mu in 0..=10 {
        for r in ADEType::all_of_rank(mu) {
            pool.get(&r.to_string())?;
        }
    }
    let parts = [c10_roots()?, c10_oracle()?, c10_milgram()?, c10_types(pool)?];
    Ok(parts.join("; "))
}

fn main() -> ExitCode {
    let mut pool = Pool { by_ade: BTreeMap::new() };
    let mut s = Suite { failed: 0, total: 0 };
    s.run("C1", "A3+2A7 demonstration", Some(LIMIT_C1), || c1(&mut pool));
    s.run("C2", "configuration types with lifts", Some(LIMIT_C2), || c2(&mut pool));
    s.run("C3", "conic tau data", None, || c3(&mut pool));
    s.run("C4", "type counts mu <= 8", Some(LIMIT_C4), c4);
    s.run("C5", "9A2 and 6A3", None, || c5(&mut pool));
    s.run("C6", "3A1+4A3 [2,4]", None, || c6(&mut pool));
    s.run("C7", "specialization certificate", Some(LIMIT_C7), || c7(&mut pool));
    s.run("C8", "lineages at reduced scale", None, || c8(&mut pool));
    s.run("C9", "pre-Z-splitting criterion", None, || c9(&pool));
    s.run("C10", "property suites", None, || c10(&mut pool));
    let t = Instant::now();
    match c4_stretch() {
        Ok(d) => println!("INFO C4-stretch (not gating) [exact; {:.1?}] {d}", t.elapsed()),
        Err(d) => println!("INFO C4-stretch (not gating) [exact; {:.1?}] not met: {d}", t.elapsed()),
    }
    println!("{} of {} criteria passed", s.total - s.failed, s.total);
    if s.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
