//! The nine acceptance criteria, each checked exactly. Every criterion prints
//! one PASS/FAIL line; the test fails if any criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use charq::classify::{
    catalog, classify_dicyclic, dihedral_check, dihedral_equivalence, split_blocks, split_cover_construct,
    split_hypotheses, DihedralWitness, SplitWitness,
};
use charq::covers::{find_balanced_group_cover_with, find_lift};
use charq::cyclotomic::context;
use charq::{
    CayleyTable, CharacterLabel, CharacterTable, LiftOptions, MetacyclicParams, OrbitTable, RationalScalar, RootSum,
    SearchOptions, WeightedQuasigroup,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn desk_scale() -> Vec<MetacyclicParams> {
    MetacyclicParams::enumerate(48)
}

fn criterion_1() -> Outcome {
    let mut checked = 0usize;
    for p in desk_scale() {
        let ct = CharacterTable::new(p);
        let labels = ct.labels().to_vec();
        let deg2: usize = labels.iter().map(|&l| ct.degree(l).pow(2)).sum();
        ensure(deg2 == p.order(), || format!("{p}: sum of squared degrees {deg2}"))?;
        for (i, &x) in labels.iter().enumerate() {
            let cx = ct.character(x).map_err(|e| e.to_string())?;
            for (j, &y) in labels.iter().enumerate() {
                let cy = ct.character(y).map_err(|e| e.to_string())?;
                let ip = ct.inner_product(cx, cy).map_err(|e| e.to_string())?;
                let want = RationalScalar::integer((i == j) as i64);
                ensure(ip == want, || format!("{p}: <{x},{y}> = {ip}"))?;
            }
            let oracle = ct.induced_oracle(x).map_err(|e| e.to_string())?;
            for g in p.elements() {
                let v = ct.char_value(x, g).map_err(|e| e.to_string())?;
                let o = oracle.value(p.index(g)).reduce(ct.context());
                ensure(v == o, || format!("{p}: {x} at {g}: {v} vs induced {o}"))?;
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} groups"))
}

fn criterion_2() -> Outcome {
    // groups sharing a value table share the oracle decomposition
    let mut cache: HashMap<String, Vec<Vec<Vec<(CharacterLabel, i64)>>>> = HashMap::new();
    let (mut triples, mut hits) = (0usize, 0usize);
    for p in desk_scale() {
        let ct = CharacterTable::new(p);
        let labels = ct.labels().to_vec();
        let fingerprint = serde_json::to_string(&ct.to_json()["labels"]).unwrap();
        let oracle = match cache.get(&fingerprint) {
            Some(o) => {
                hits += 1;
                o.clone()
            }
            None => {
                let o = labels
                    .iter()
                    .map(|&x| labels.iter().map(|&y| ct.product_oracle(x, y)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())?;
                cache.insert(fingerprint, o.clone());
                o
            }
        };
        for (i, &x) in labels.iter().enumerate() {
            for (j, &y) in labels.iter().enumerate() {
                let closed = ct.product_closed_form(x, y).map_err(|e| e.to_string())?;
                let regrouped = ct.product_regrouped(x, y).map_err(|e| e.to_string())?;
                let want = &oracle[i][j];
                ensure(&closed == want, || format!("{p}: {x}*{y} closed form {closed:?} vs oracle {want:?}"))?;
                ensure(&regrouped == want, || format!("{p}: {x}*{y} regrouped {regrouped:?} vs oracle {want:?}"))?;
                for &z in &labels {
                    let c = ct.product_coeff(x, y, z).map_err(|e| e.to_string())?;
                    let o = want.iter().find(|(l, _)| *l == z).map_or(0, |e| e.1);
                    ensure(c == o, || format!("{p}: coefficient of {z} in {x}*{y}: {c} vs {o}"))?;
                    triples += 1;
                }
            }
        }
    }
    Ok(format!("{triples} label triples, 0 mismatches ({hits} oracle cache hits)"))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for p in desk_scale() {
        let w = WeightedQuasigroup::from_character_table(&CharacterTable::new(p)).map_err(|e| e.to_string())?;
        ensure(w.validate().is_none(), || format!("{p}: {}", w.validate().unwrap()))?;
        ensure(w.gross_weight() == p.order() as u64, || format!("{p}: gross weight {}", w.gross_weight()))?;
        checked += 1;
    }
    Ok(format!("{checked} quasigroups"))
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for p in MetacyclicParams::enumerate(16) {
        let w = WeightedQuasigroup::from_character_table(&CharacterTable::new(p)).map_err(|e| e.to_string())?;
        let opts = LiftOptions { budget: 10_000_000, ..LiftOptions::default() };
        let cov = find_lift(&w, &opts).map_err(|e| format!("{p}: {e}"))?;
        let report = cov.check();
        ensure(report.passed(), || format!("{p}: {report}"))?;
        ensure(cov.quasigroup().order() == p.order(), || format!("{p}: wrong order"))?;
        checked += 1;
    }
    Ok(format!("{checked} groups lifted"))
}

fn criterion_5() -> Outcome {
    let z2 = CayleyTable::cyclic(2);
    let z2_cubed = z2.direct_product(&z2).direct_product(&z2);
    // 000, 001 | 010, 011 | rest
    let w = DihedralWitness { table: z2_cubed, q: [0b000, 0b001, 0b010, 0b011], interior: vec![vec![4, 5, 6, 7]] };
    let r = dihedral_check(&w).map_err(|e| e.to_string())?;
    ensure(r.passed() && r.generic, || format!("Z2^3 witness: {r:?}"))?;
    let rows = dihedral_equivalence(4).map_err(|e| e.to_string())?;
    ensure(rows.len() == 5, || format!("{} groups of order 8", rows.len()))?;
    for c in &rows {
        ensure(c.conditions == c.generic, || format!("{}: conditions {} vs search {}", c.group, c.conditions, c.generic))?;
    }
    let covering: Vec<&str> = rows.iter().filter(|c| c.generic).map(|c| c.group.as_str()).collect();
    Ok(format!("witness passes; agreement on all 5 groups, covers: {}", covering.join(" ")))
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for l in 2..=6 {
        let c = classify_dicyclic(l).map_err(|e| e.to_string())?;
        let found: Vec<&str> = c.found().map(|o| o.group.as_str()).collect();
        summary.push(format!("l={l}: found {}", found.join(" ")));
        // every predicted group is found and every catalog outcome matches membership
        for o in c.mismatches() {
            let what = if o.predicted { "predicted, not found" } else { "found, not predicted" };
            failures.push(format!("l={l} {} {what}", o.group));
        }
    }
    if failures.is_empty() {
        Ok(summary.join("; "))
    } else {
        Err(format!("{} ({})", failures.join("; "), summary.join("; ")))
    }
}

fn criterion_7() -> Outcome {
    let mut constructed = 0;
    for p in desk_scale().into_iter().filter(|p| p.l() == 0) {
        for sigma in 0..p.m() as i64 {
            let c = split_cover_construct(p.n() as i64, p.m() as i64, p.k() as i64, sigma)
                .map_err(|e| format!("{p} sigma={sigma}: {e}"))?;
            ensure(c.hypotheses.passed(), || format!("{p} sigma={sigma}: {:?}", c.hypotheses))?;
            ensure(c.balanced, || format!("{p} sigma={sigma}: blocks are not a balanced cover"))?;
            constructed += 1;
        }
    }
    // Z/6 over S_3 with q = 3, T_0 = {0}, T_1 = {2, 4}
    let s3 = MetacyclicParams::validate(2, 0, 2, 3).unwrap();
    let orbits = OrbitTable::new(s3);
    let w = SplitWitness { table: CayleyTable::cyclic(6), q: 3, t: [(0, vec![0]), (1, vec![2, 4])].into() };
    let h = split_hypotheses(&w, &orbits);
    ensure(h.passed(), || format!("Z/6 witness: {h:?}"))?;
    let blocks = split_blocks(&w, &orbits);
    let ct = CharacterTable::new(s3);
    let target = WeightedQuasigroup::from_character_table(&ct).unwrap();
    let cov = blocks.to_covering(&w.table, &target).map_err(|e| e.to_string())?;
    ensure(cov.is_balanced().map_err(|e| e.to_string())?, || "Z/6 blocks not balanced".into())?;
    let opts = SearchOptions::default();
    let generic = find_balanced_group_cover_with(&s3, &w.table, &opts).map_err(|e| e.to_string())?;
    ensure(generic.is_some(), || "generic search finds no Z/6 cover of S_3".into())?;
    Ok(format!("{constructed} constructions; Z/6 covers S_3"))
}

fn criterion_8() -> Outcome {
    let mut identities = 0usize;
    for p in desk_scale() {
        let t = OrbitTable::new(p);
        let n = p.n();
        let ctx = context(n as u32);
        let reps = t.reps().to_vec();
        for &a in &reps {
            for &b in &reps {
                let mut weighted = 0;
                for c in 0..n {
                    let s = t.s_count(a, b, c);
                    for e in 0..p.m() {
                        let ck = c * charq_pow(p.k(), e, n) % n;
                        ensure(t.s_count(a, b, ck) == s, || format!("{p}: S({a},{b},{c}) != S({a},{b},{ck})"))?;
                    }
                }
                for &c in &reps {
                    let s = t.s_count(a, b, c);
                    weighted += t.r(c) * s;
                    if s != 0 {
                        // the fractional-part combination is an integer
                        t.frac_combination(a, b, c).map_err(|e| format!("{p}: ({a},{b},{c}): {e}"))?;
                        let modulus = t.twist_modulus() as i64;
                        for alpha in 0..t.s(a) {
                            for beta in 0..t.s(b) {
                                for gamma in 0..t.s(c) {
                                    let e = t.e_value(a, alpha).unwrap() + t.e_value(b, beta).unwrap()
                                        - t.e_value(c, gamma).unwrap();
                                    ensure(e.rem_euclid(modulus) == 0, || {
                                        format!("{p}: e({a},{alpha})+e({b},{beta})-e({c},{gamma}) = {e}")
                                    })?;
                                }
                            }
                        }
                    }
                    // sum_i sum_{s,r,t} w^((s+r-t)i) = n r_c S(a,b,c)
                    let mut sum = RootSum::zero(n as u32);
                    for &s in t.orbit(a) {
                        for &r in t.orbit(b) {
                            for &u in t.orbit(c) {
                                let e = (s + r + n - u) % n;
                                for i in 0..n {
                                    sum.push((e * i) as u64, 1);
                                }
                            }
                        }
                    }
                    let value = sum.reduce(&ctx).as_rational().map_err(|e| e.to_string())?;
                    let want = RationalScalar::integer((n * t.r(c) * s) as i64);
                    ensure(value == want, || format!("{p}: root sum ({a},{b},{c}) = {value}, want {want}"))?;
                    identities += 1;
                }
                ensure(weighted == t.r(a) * t.r(b), || format!("{p}: sum r_c S({a},{b},c) = {weighted}"))?;
            }
        }
    }
    Ok(format!("{identities} orbit triples"))
}

fn charq_pow(base: usize, exp: usize, modulus: usize) -> usize {
    (0..exp).fold(1 % modulus, |acc, _| acc * base % modulus)
}

fn criterion_9() -> Outcome {
    let mut runs = 0;
    for p in MetacyclicParams::enumerate(16) {
        let w = WeightedQuasigroup::from_character_table(&CharacterTable::new(p)).unwrap();
        for seed in [0, 7] {
            let lift = |threads| {
                let opts = LiftOptions { seed, threads: Some(threads), ..LiftOptions::default() };
                find_lift(&w, &opts).map(|c| (c.labels().to_vec(), c.quasigroup().rows()))
            };
            let (one, four) = (lift(1), lift(4));
            ensure(one == four, || format!("{p} seed {seed}: lift differs between 1 and 4 threads"))?;
            runs += 1;
        }
    }
    for order in [8, 12, 16] {
        for g in catalog(order).map_err(|e| e.to_string())? {
            for p in MetacyclicParams::enumerate(order).into_iter().filter(|p| p.order() == order) {
                let search = |threads| {
                    let opts = SearchOptions { threads: Some(threads), ..SearchOptions::default() };
                    find_balanced_group_cover_with(&p, &g.table, &opts)
                };
                let (one, four) = (search(1), search(4));
                ensure(one == four, || format!("{p} by {}: cover differs between 1 and 4 threads", g.name))?;
                runs += 1;
            }
        }
    }
    let one = classify_with_threads(1)?;
    let four = classify_with_threads(4)?;
    ensure(one == four, || "dicyclic classification differs between 1 and 4 threads".into())?;
    Ok(format!("{} searches identical across 1 and 4 workers", runs + 1))
}

fn classify_with_threads(threads: usize) -> Result<String, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    pool.install(|| classify_dicyclic(4).map(|c| c.to_json().to_string()).map_err(|e| e.to_string()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("character-theory soundness", criterion_1),
        ("product-formula equivalence", criterion_2),
        ("WCQ validity", criterion_3),
        ("lift existence", criterion_4),
        ("dihedral reproduction", criterion_5),
        ("dicyclic classification", criterion_6),
        ("split-metacyclic construction", criterion_7),
        ("number-theoretic property suites", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} [{secs:.1}s] {detail}", i + 1),
            Err(detail) => {
                println!("criterion {}: FAIL {name} [{secs:.1}s] {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
