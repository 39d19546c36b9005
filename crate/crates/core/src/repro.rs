//! One-shot reproduction checks. Each check recomputes a claim from scratch
//! and reports one row per item with the expected and computed value.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::{IteratorRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::canon::canonical_form;
use crate::derivation::{build_from_strict_ef, extract_forest};
use crate::elimination::{hd_exact_with, shd_bruteforce, shd_exact_with, strictify, validate_strict_ef};
use crate::error::{Error, Result};
use crate::families::{
    drawn_forests, enumerate_hypergraphs_with, example_g, example_h, p7_letters, skew_pair, skew_pair_prime, EnumerationBounds,
};
use crate::gc::{eval, phi_g, sentence_pool, wellformed_gck, Formula, Interpretation};
use crate::homcount::{count_homs, naive, surjective_hom_exists, Semantics};
use crate::homvec::{indistinguishable_over, ClassKind, ClassTruncation, Indistinguishability};
use crate::hypergraph::{Hypergraph, IncidenceGraph};
use crate::io::parse_hg;
use crate::script::{parse_script, replay};

/// Check ids in run order, each with a one-line description.
pub const CHECKS: [(&str, &str); 12] = [
    ("hd-paths", "hypertree depth of the paths P_1 .. P_15"),
    ("examples", "depths of the small worked examples and their drawn forests"),
    ("depth-sandwich", "hd <= shd <= hd + 1 and strictification on every small connected instance"),
    ("oracles", "exact search and hom counting against brute-force references"),
    ("strict-roundtrip", "strict forest to derivation and back on every small instance of shd <= 3"),
    ("p7-derivation", "replay of the scripted P_7 derivation"),
    ("skew-k1-hom", "G_1 and H_1: equal on SHD_1, told apart by HD_1"),
    ("skew-k1-incidence", "G'_1 and H'_1: equal on HD_1, told apart by IHD_1"),
    ("closures", "local merging keeps depth bounds; pumping does not"),
    ("logic", "the sentence describing G, and isomorphism invariance of evaluation"),
    ("logic-probe", "no small sentence of one edge variable tells G_1 from H_1"),
    ("surjective", "no small bounded-depth instance maps onto a long path"),
];

/// Group ids that expand to several checks.
pub const GROUPS: [(&str, &[&str]); 2] = [("skew-k1", &["skew-k1-hom", "skew-k1-incidence"]), ("all", &[])];

const SMALL: EnumerationBounds = EnumerationBounds { max_edges: 4, max_vertices: 6, connected_only: true };
const SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReproRow {
    pub item: String,
    /// The statement being checked.
    pub claim: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ReproReport {
    pub check: &'static str,
    pub rows: Vec<ReproRow>,
    pub elapsed: Duration,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Tab-separated rows; no timing so repeated runs match byte for byte.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let verdict = if r.pass { "pass" } else { "FAIL" };
            let _ = writeln!(s, "{}\t{}\t{}\t{}\t{}\t{}", self.check, r.item, r.claim, r.expected, r.computed, verdict);
        }
        s
    }
}

fn row(item: impl Into<String>, claim: &str, expected: impl ToString, computed: impl ToString) -> ReproRow {
    let (expected, computed) = (expected.to_string(), computed.to_string());
    ReproRow { item: item.into(), claim: claim.into(), pass: expected == computed, expected, computed }
}

fn hd(h: &Hypergraph, b: &Budget) -> Result<usize> {
    Ok(hd_exact_with(&h.to_incidence(), b)?.depth)
}

fn shd(h: &Hypergraph, b: &Budget) -> Result<usize> {
    Ok(shd_exact_with(&h.to_incidence(), b)?.depth)
}

/// Resolves a check id or group to the checks it runs.
pub fn resolve(id: &str) -> Result<Vec<&'static str>> {
    if id == "all" {
        return Ok(CHECKS.iter().map(|c| c.0).collect());
    }
    if let Some((_, members)) = GROUPS.iter().find(|g| g.0 == id) {
        return Ok(members.to_vec());
    }
    CHECKS.iter().find(|c| c.0 == id).map(|c| vec![c.0]).ok_or_else(|| Error::InvalidArgument(format!("unknown check `{id}`")))
}

/// Runs one check. Wall time is capped by `GH_BUDGET_MS` when set.
pub fn run_check(id: &str) -> Result<ReproReport> {
    let (check, _) = *CHECKS.iter().find(|c| c.0 == id).ok_or_else(|| Error::InvalidArgument(format!("unknown check `{id}`")))?;
    let budget = Budget::unlimited().from_env();
    let start = Instant::now();
    let rows = match check {
        "hd-paths" => hd_paths(&budget),
        "examples" => examples(&budget),
        "depth-sandwich" => depth_sandwich(&budget),
        "oracles" => oracles(&budget),
        "strict-roundtrip" => strict_roundtrip(&budget),
        "p7-derivation" => p7_derivation(),
        "skew-k1-hom" => skew_k1_hom(&budget),
        "skew-k1-incidence" => skew_k1_incidence(&budget),
        "closures" => closures(&budget),
        "logic" => logic(&budget),
        "logic-probe" => logic_probe(&budget),
        "surjective" => surjective(&budget),
        _ => unreachable!("every listed check is dispatched"),
    }?;
    Ok(ReproReport { check, rows, elapsed: start.elapsed() })
}

pub fn repro(id: &str) -> Result<Vec<ReproReport>> {
    resolve(id)?.into_iter().map(run_check).collect()
}

fn hd_paths(b: &Budget) -> Result<Vec<ReproRow>> {
    (1..=15)
        .map(|n| {
            let expected = (n as f64 + 2.0).log2().floor() as usize;
            Ok(row(format!("P_{n}"), "hd(P_n) = floor(log2(n+2))", expected, hd(&Hypergraph::path(n)?, b)?))
        })
        .collect()
}

fn strict_forest_row(item: &str, claim: &str, i: &IncidenceGraph, key: &str, height: usize) -> Result<ReproRow> {
    let forests = drawn_forests();
    let ef = &forests[key];
    let verdict = validate_strict_ef(i, ef)?;
    let computed = if verdict.is_ok() {
        format!("valid strict, height {}", ef.height())
    } else {
        let first = verdict.violations.first().map(ToString::to_string).unwrap_or_default();
        format!("invalid: {} violation(s), first: {first}", verdict.violations.len())
    };
    Ok(row(item, claim, format!("valid strict, height {height}"), computed))
}

fn examples(b: &Budget) -> Result<Vec<ReproRow>> {
    let (g, h, p15) = (example_g(), example_h(), Hypergraph::path(15)?);
    let witness = shd_exact_with(&g.to_incidence(), b)?;
    let witness_ok = validate_strict_ef(&g.to_incidence(), &witness.forest)?.is_ok();
    Ok(vec![
        row("hd(G)", "G has hypertree depth 1", 1, hd(&g, b)?),
        row("shd(G)", "G has strict hypertree depth 2", 2, shd(&g, b)?),
        row("shd(G) witness", "the search returns a valid strict witness", true, witness_ok),
        strict_forest_row(
            "forest for H",
            "the drawn forest for H is a strict elimination forest of height 2",
            &h.to_incidence(),
            "h-star",
            2,
        )?,
        row("shd(H)", "H has strict hypertree depth 2", 2, shd(&h, b)?),
        strict_forest_row("forest for P_15", "the drawn forest for P_15 is strict of height 4", &p15.to_incidence(), "p15-balanced", 4)?,
        row("shd(P_15)", "P_15 has strict hypertree depth 4", 4, shd(&p15, b)?),
    ])
}

fn depth_sandwich(b: &Budget) -> Result<Vec<ReproRow>> {
    let all = enumerate_hypergraphs_with(&SMALL, b)?;
    let (mut sandwich, mut strict, mut first) = (0usize, 0usize, None);
    for h in &all {
        let i = h.to_incidence();
        let plain = hd_exact_with(&i, b)?;
        let s = shd_exact_with(&i, b)?.depth;
        if !(plain.depth <= s && s <= plain.depth + 1) {
            sandwich += 1;
            first.get_or_insert_with(|| format!("hd {} shd {s}", plain.depth));
        }
        let st = strictify(&i, &plain.forest)?;
        let grow = st.height().checked_sub(plain.forest.height());
        if !validate_strict_ef(&i, &st)?.is_ok() || !matches!(grow, Some(0 | 1)) {
            strict += 1;
        }
    }
    let scope = format!("{} connected instances, <= 4 hyperedges, <= 6 vertices", all.len());
    Ok(vec![
        row(
            &scope,
            "hd <= shd <= hd + 1",
            "0 violations",
            format!("{sandwich} violations{}", first.map(|f| format!(" ({f})")).unwrap_or_default()),
        ),
        row(&scope, "strictify gives a strict forest at most one level taller", "0 violations", format!("{strict} violations")),
    ])
}

fn oracles(b: &Budget) -> Result<Vec<ReproRow>> {
    let all = enumerate_hypergraphs_with(&EnumerationBounds::new(4, 6, false), b)?;
    let mismatch = all
        .iter()
        .map(|h| {
            let i = h.to_incidence();
            Ok(shd_exact_with(&i, b)?.depth != shd_bruteforce(&i)?)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&x| x)
        .count();
    let sources = enumerate_hypergraphs_with(&EnumerationBounds::new(3, 5, false), b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut hg_bad, mut ig_bad) = (0, 0);
    for _ in 0..200 {
        let s = sources.choose(&mut rng).expect("nonempty enumeration").to_incidence();
        let t = all.choose(&mut rng).expect("nonempty enumeration").to_incidence();
        b.tick("hom oracle")?;
        if count_homs(&s, &t, Semantics::Hypergraph)? != naive::count(&s, &t, Semantics::Hypergraph)? {
            hg_bad += 1;
        }
        if count_homs(&s, &t, Semantics::Incidence)? != naive::count(&s, &t, Semantics::Incidence)? {
            ig_bad += 1;
        }
    }
    Ok(vec![
        row(
            format!("{} instances, <= 4 hyperedges", all.len()),
            "shd search equals brute force over all forests",
            "0 mismatches",
            format!("{mismatch} mismatches"),
        ),
        row("200 random pairs", "hypergraph hom counts equal full enumeration", "0 mismatches", format!("{hg_bad} mismatches")),
        row("200 random pairs", "incidence hom counts equal full enumeration", "0 mismatches", format!("{ig_bad} mismatches")),
    ])
}

fn strict_roundtrip(b: &Budget) -> Result<Vec<ReproRow>> {
    let all = enumerate_hypergraphs_with(&SMALL, b)?;
    let (mut tried, mut failures, mut first) = (0usize, 0usize, None);
    for h in &all {
        let i = h.to_incidence();
        let w = shd_exact_with(&i, b)?;
        if w.depth > 3 {
            continue;
        }
        tried += 1;
        let outcome = (|| -> Result<Option<String>> {
            let d = build_from_strict_ef(&i, &w.forest, 3)?;
            if !d.result().is_label_free() || d.cost() > 3 {
                return Ok(Some(format!("cost {} label-free {}", d.cost(), d.result().is_label_free())));
            }
            if canonical_form(d.result().skeleton())? != canonical_form(&i)? {
                return Ok(Some("skeleton not isomorphic".into()));
            }
            let back = extract_forest(&d);
            let ef = back.to_elimination_forest(d.result().skeleton())?;
            if !validate_strict_ef(d.result().skeleton(), &ef)?.is_ok() || ef.height() > 3 {
                return Ok(Some(format!("extracted forest invalid or height {}", ef.height())));
            }
            Ok(None)
        })()
        .unwrap_or_else(|e| Some(e.to_string()));
        if let Some(why) = outcome {
            failures += 1;
            first.get_or_insert(why);
        }
    }
    Ok(vec![row(
        format!("{tried} connected instances with shd <= 3"),
        "derivation of cost <= 3 with isomorphic skeleton, and its forest is strict of height <= 3",
        "0 failures",
        format!("{failures} failures{}", first.map(|f| format!(" ({f})")).unwrap_or_default()),
    )])
}

const P7_SCRIPT: &str = include_str!("../fixtures/p7/p7.gli");

fn p7_leaf(name: &str) -> Result<Hypergraph> {
    let text = match name {
        "leaf_t4.hg" => include_str!("../fixtures/p7/leaf_t4.hg"),
        "leaf_t5.hg" => include_str!("../fixtures/p7/leaf_t5.hg"),
        "leaf_t6.hg" => include_str!("../fixtures/p7/leaf_t6.hg"),
        "leaf_t7.hg" => include_str!("../fixtures/p7/leaf_t7.hg"),
        other => return Err(Error::Io(format!("no bundled file `{other}`"))),
    };
    parse_hg(text)
}

fn p7_derivation() -> Result<Vec<ReproRow>> {
    let steps = replay(&parse_script(P7_SCRIPT)?, None, p7_leaf)?;
    let last = steps.last().ok_or_else(|| Error::InvalidArgument("empty script".into()))?;
    let l = last.derivation.result();
    let iso = canonical_form(l.skeleton())? == canonical_form(&p7_letters().to_incidence())?;
    Ok(vec![
        row("cost", "the scripted derivation has cost 3", 3, last.cost),
        row("labels", "the final graph is label-free", true, l.is_label_free()),
        row("skeleton", "the final skeleton is isomorphic to P_7", true, iso),
    ])
}

fn sweep(
    kind: ClassKind,
    k: usize,
    bounds: EnumerationBounds,
    a: &IncidenceGraph,
    b: &IncidenceGraph,
    budget: &Budget,
) -> Result<(String, Indistinguishability)> {
    let ct = ClassTruncation::new(kind, k, bounds);
    let sources = ct.sources_with(budget)?;
    let sem = ct.kind.semantics();
    Ok((ct.to_string(), indistinguishable_over(&sources, sem, a, b)?))
}

fn verdict_text(v: &Indistinguishability) -> String {
    match v {
        Indistinguishability::Equal { sources } => format!("equal on {sources} sources"),
        Indistinguishability::Distinguished { source, left, right, .. } => {
            format!("distinguished by {} hyperedge(s) on {} vertices: {left} vs {right}", source.num_blues(), source.num_reds())
        }
    }
}

fn equal_row(scope: String, claim: &str, v: &Indistinguishability) -> ReproRow {
    ReproRow { item: scope, claim: claim.into(), expected: "equal".into(), computed: verdict_text(v), pass: v.is_equal() }
}

fn distinguished_row(scope: String, claim: &str, v: &Indistinguishability) -> ReproRow {
    ReproRow { item: scope, claim: claim.into(), expected: "distinguished".into(), computed: verdict_text(v), pass: !v.is_equal() }
}

fn skew_k1_hom(b: &Budget) -> Result<Vec<ReproRow>> {
    let (g, h) = skew_pair(1)?;
    let (g, h) = (g.to_incidence(), h.to_incidence());
    let bounds = EnumerationBounds::new(3, 6, false);
    let (s1, eq) = sweep(ClassKind::Shd, 1, bounds, &g, &h, b)?;
    let (s2, dist) = sweep(ClassKind::Hd, 1, bounds, &g, &h, b)?;
    Ok(vec![
        equal_row(s1, "G_1 and H_1 have equal counts from SHD_1", &eq),
        distinguished_row(s2, "some member of HD_1 tells G_1 and H_1 apart", &dist),
    ])
}

fn skew_k1_incidence(b: &Budget) -> Result<Vec<ReproRow>> {
    let (g, h) = skew_pair_prime(1)?;
    let (g, h) = (g.to_incidence(), h.to_incidence());
    let bounds = EnumerationBounds::new(3, 6, false);
    let (s1, eq) = sweep(ClassKind::Hd, 1, bounds, &g, &h, b)?;
    let (s2, dist) = sweep(ClassKind::Ihd, 1, bounds, &g, &h, b)?;
    Ok(vec![
        equal_row(s1, "G'_1 and H'_1 have equal counts from HD_1", &eq),
        distinguished_row(s2, "some incidence graph in IHD_1 tells I(G'_1) and I(H'_1) apart", &dist),
    ])
}

/// A random local merge of `h`, if some hyperedge has two vertices.
fn random_merge(h: &Hypergraph, rng: &mut ChaCha8Rng) -> Result<Option<Hypergraph>> {
    let Some(e) = (0..h.num_edges()).filter(|&e| h.content(e).len() >= 2).choose(rng) else {
        return Ok(None);
    };
    let pair: Vec<usize> = h.content(e).choose_multiple(rng, 2).copied().collect();
    let id = |v: usize| h.vertex_ids()[v].as_str();
    h.local_merge(&h.edge_ids()[e], id(pair[0]), id(pair[1])).map(Some)
}

fn closures(b: &Budget) -> Result<Vec<ReproRow>> {
    let all = enumerate_hypergraphs_with(&SMALL, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut sampled, mut hd_bad, mut shd_bad) = (0, 0, 0);
    while sampled < 100 {
        let h = all.choose(&mut rng).expect("nonempty enumeration");
        let Some(m) = random_merge(h, &mut rng)? else { continue };
        sampled += 1;
        if hd(&m, b)? > hd(h, b)? {
            hd_bad += 1;
        }
        if shd(&m, b)? > shd(h, b)? {
            shd_bad += 1;
        }
    }
    let (g1, _) = skew_pair(1)?;
    let pumped = g1.pump("f", "f_new")?;
    Ok(vec![
        row("100 sampled merges", "local merging never raises hd", "0 violations", format!("{hd_bad} violations")),
        row("100 sampled merges", "local merging never raises shd", "0 violations", format!("{shd_bad} violations")),
        row("G_1, pump singleton f", "pumping raises hd from 1 to 2", "1 -> 2", format!("{} -> {}", hd(&g1, b)?, hd(&pumped, b)?)),
    ])
}

fn random_relabel(i: &IncidenceGraph, rng: &mut ChaCha8Rng) -> IncidenceGraph {
    let mut reds: Vec<usize> = (0..i.num_reds()).collect();
    let mut blues: Vec<usize> = (0..i.num_blues()).collect();
    reds.shuffle(rng);
    blues.shuffle(rng);
    i.permuted(&reds, &blues)
}

fn logic(b: &Budget) -> Result<Vec<ReproRow>> {
    let phi = phi_g();
    let holds = |h: &Hypergraph| eval(&phi, &Interpretation::new(&h.to_incidence()));
    let pool = sentence_pool(2, 2, 20, SEED, 100);
    let targets = enumerate_hypergraphs_with(&EnumerationBounds::new(4, 5, false), b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    for f in &pool {
        let i = targets.choose(&mut rng).expect("nonempty enumeration").to_incidence();
        let j = random_relabel(&i, &mut rng);
        b.tick("eval")?;
        if eval(f, &Interpretation::new(&i))? != eval(f, &Interpretation::new(&j))? {
            bad += 1;
        }
    }
    Ok(vec![
        row("guard depth", "the sentence for G has guard depth 2", 2, phi.guard_depth()),
        row("well-formed", "the sentence for G lies in GC with one edge variable", "no violations", violations_text(&phi, 1)),
        row("G", "the sentence holds on G", true, holds(&example_g())?),
        row("H", "the sentence fails on H", false, holds(&example_h())?),
        row("100 random triples", "evaluation is invariant under relabelling", "0 mismatches", format!("{bad} mismatches")),
    ])
}

fn violations_text(f: &Formula, k: usize) -> String {
    let v = wellformed_gck(f, k);
    if v.is_empty() {
        "no violations".into()
    } else {
        format!("{} violation(s)", v.len())
    }
}

const PROBE_POOL: usize = 500;

fn logic_probe(b: &Budget) -> Result<Vec<ReproRow>> {
    let (g, h) = skew_pair(1)?;
    let (gi, hi) = (g.to_incidence(), h.to_incidence());
    let bounds = EnumerationBounds::new(3, 6, false);
    let (s1, shd_eq) = sweep(ClassKind::Shd, 1, bounds, &gi, &hi, b)?;
    let (s2, ishd_eq) = sweep(ClassKind::Ishd, 1, bounds, &gi, &hi, b)?;
    let pool = sentence_pool(1, 1, 25, SEED, PROBE_POOL);
    let mut split = Vec::new();
    for f in &pool {
        b.tick("probe")?;
        if eval(f, &Interpretation::new(&gi))? != eval(f, &Interpretation::new(&hi))? {
            split.push(f.render());
        }
    }
    Ok(vec![
        equal_row(s1, "G_1 and H_1 have equal counts from SHD_1", &shd_eq),
        equal_row(s2, "I(G_1) and I(H_1) have equal counts from ISHD_1", &ishd_eq),
        row(
            format!("{} sentences, guard depth <= 1, size <= 25", pool.len()),
            "no sentence with one edge variable tells G_1 from H_1",
            "0 distinguishing",
            match split.first() {
                None => "0 distinguishing".to_string(),
                Some(f) => format!("{} distinguishing, first: {f}", split.len()),
            },
        ),
    ])
}

fn surjective(b: &Budget) -> Result<Vec<ReproRow>> {
    let all = enumerate_hypergraphs_with(&SMALL, b)?;
    let depths = all.iter().map(|h| Ok((hd(h, b)?, shd(h, b)?))).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for k in 1..=2usize {
        let count = |pick: fn((usize, usize)) -> usize, n: usize| -> Result<(usize, usize)> {
            let members: Vec<&Hypergraph> = all.iter().zip(&depths).filter(|(_, &d)| pick(d) <= k).map(|(h, _)| h).collect();
            let mut hits = 0;
            for h in &members {
                b.tick("surjection")?;
                if surjective_hom_exists(h, n)? {
                    hits += 1;
                }
            }
            Ok((members.len(), hits))
        };
        let n = 1 << k;
        let (m, hits) = count(|d| d.1, n)?;
        rows.push(row(
            format!("k={k}: {m} members with shd <= {k}"),
            &format!("no surjective hom onto P_{n}"),
            "0 found",
            format!("{hits} found"),
        ));
        let n = (1 << (k + 1)) - 2;
        let (m, hits) = count(|d| d.0, n)?;
        rows.push(row(
            format!("k={k}: {m} members with hd <= {k}"),
            &format!("no surjective hom onto P_{n}"),
            "0 found",
            format!("{hits} found"),
        ));
    }
    Ok(rows)
}

/// Check ids that exist, for usage messages.
pub fn known_ids() -> BTreeSet<&'static str> {
    CHECKS.iter().map(|c| c.0).chain(GROUPS.iter().map(|g| g.0)).collect()
}
