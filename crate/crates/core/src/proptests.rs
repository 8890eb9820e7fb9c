use crate::characters::orbit_sum_multisets;
use crate::classify::dicyclic::half_fraction_violations;
use crate::classify::split_cover_construct;
use crate::covers::{find_lift, multiset_product};
use crate::{
    is_isomorphic, BlockAssignment, CayleyTable, CharacterTable, LiftOptions, MetacyclicParams, Multiset, OrbitTable,
    WeightedQuasigroup,
};
use proptest::prelude::*;
use proptest::sample::select;

fn params(max: usize) -> impl Strategy<Value = MetacyclicParams> {
    select(MetacyclicParams::enumerate(max))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn s_count_is_invariant_under_k(p in params(48), seed in any::<u64>()) {
        let t = OrbitTable::new(p);
        let reps = t.reps();
        let n = p.n();
        let a = reps[seed as usize % reps.len()];
        let b = reps[(seed >> 8) as usize % reps.len()];
        let c = (seed >> 16) as usize % n;
        let count = t.s_count(a, b, c);
        let mut ck = c;
        for _ in 0..p.m() {
            ck = ck * p.k() % n;
            prop_assert_eq!(t.s_count(a, b, ck), count);
        }
        let total: usize = reps.iter().map(|&c| t.r(c) * t.s_count(a, b, c)).sum();
        prop_assert_eq!(total, t.r(a) * t.r(b));
    }

    #[test]
    fn product_coefficients_are_multiplicities(p in params(32), i in any::<usize>(), j in any::<usize>()) {
        let ct = CharacterTable::new(p);
        let labels = ct.labels();
        let (x, y) = (labels[i % labels.len()], labels[j % labels.len()]);
        let decomposition = ct.product_closed_form(x, y).unwrap();
        let degrees: i64 = decomposition.iter().map(|&(z, c)| c * ct.degree(z) as i64).sum();
        prop_assert!(decomposition.iter().all(|&(_, c)| c > 0));
        prop_assert_eq!(degrees, (ct.degree(x) * ct.degree(y)) as i64);
    }

    #[test]
    fn regrouping_counts_agree(p in params(48), i in any::<usize>(), j in any::<usize>()) {
        let t = OrbitTable::new(p);
        let reps = t.reps();
        let (l, r) = orbit_sum_multisets(&t, reps[i % reps.len()], reps[j % reps.len()]);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn group_law(p in params(48), g in any::<usize>(), h in any::<usize>(), f in any::<usize>()) {
        let order = p.order();
        let (g, h, f) = (p.element(g % order), p.element(h % order), p.element(f % order));
        prop_assert_eq!(p.multiply(p.multiply(g, h), f), p.multiply(g, p.multiply(h, f)));
        prop_assert_eq!(p.multiply(g, p.inverse(g)), p.identity());
        let conj = p.multiply(p.inverse(p.y()), p.multiply(p.x(), p.y()));
        prop_assert_eq!(conj, p.pow(p.x(), p.k()));
    }

    #[test]
    fn relabelled_tables_are_isomorphic(p in params(24), seed in any::<u64>()) {
        let t = p.cayley();
        let n = t.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let mut inv = vec![0; n];
        for (i, &v) in perm.iter().enumerate() {
            inv[v] = i;
        }
        let rows: Vec<Vec<usize>> =
            (0..n).map(|a| (0..n).map(|b| perm[t.mul(inv[a], inv[b])]).collect()).collect();
        let relabelled = CayleyTable::from_rows(&rows).unwrap();
        let iso = is_isomorphic(&t, &relabelled).unwrap().expect("isomorphic");
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(relabelled.mul(iso[a], iso[b]), iso[t.mul(a, b)]);
            }
        }
    }

    #[test]
    fn multiset_products_have_product_size(p in params(24), s in prop::collection::vec(any::<usize>(), 1..6), t in prop::collection::vec(any::<usize>(), 1..6)) {
        let q = p.cayley();
        let n = q.order();
        let s: Vec<usize> = s.iter().map(|x| x % n).collect();
        let t: Vec<usize> = t.iter().map(|x| x % n).collect();
        let prod = multiset_product(&q, &Multiset::from_elements(n, &s), &Multiset::from_elements(n, &t));
        prop_assert_eq!(prod.total(), (s.len() * t.len()) as u64);
    }

    #[test]
    fn lifts_are_covers(p in params(12), seed in any::<u64>()) {
        let w = WeightedQuasigroup::from_character_table(&CharacterTable::new(p)).unwrap();
        let opts = LiftOptions { seed, ..LiftOptions::default() };
        let cov = find_lift(&w, &opts).unwrap();
        prop_assert!(cov.check().passed());
        let q = cov.quasigroup();
        for a in 0..q.order() {
            for b in 0..q.order() {
                prop_assert_eq!(q.mul(a, q.left_divide(a, b)), b);
                prop_assert_eq!(q.mul(q.right_divide(b, a), a), b);
            }
        }
        let blocks = BlockAssignment::from_covering(&cov);
        if let Ok(blocks) = blocks {
            prop_assert_eq!(BlockAssignment::from_json(&blocks.to_json()).unwrap(), blocks);
        }
    }

    #[test]
    fn split_constructions_are_balanced(p in params(48).prop_filter("split", |p| p.l() == 0), sigma in 0i64..12) {
        let c = split_cover_construct(p.n() as i64, p.m() as i64, p.k() as i64, sigma).unwrap();
        prop_assert!(c.hypotheses.passed());
        prop_assert!(c.balanced);
    }

    #[test]
    fn dicyclic_half_fractions(l in 1usize..=24) {
        prop_assert!(half_fraction_violations(l).unwrap().is_empty());
    }
}
