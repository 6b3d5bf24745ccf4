//! Property tests for the algebraic invariants that random inputs probe
//! well: smooth-sum structure over cyclic groups, agreement of the abelian
//! and non-abelian product paths, and the order relations between bounded
//! unions and the rho/lambda brackets.

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zerosum::arith::{unions_bounded, ArithContext};
use zerosum::atoms::SearchConfig;
use zerosum::group::{ElementSet, FiniteGroup, Group};
use zerosum::seq::Sequence;

fn cyclic(n: usize) -> Group {
    Arc::new(FiniteGroup::cyclic(n).unwrap())
}

proptest! {
    /// Sums of a sorted coefficient sequence with small total reach every
    /// multiple of g up to the total: picking l >= k/2 terms with
    /// m = sum n_i < k <= ord(g) forces the sum set {g, 2g, ..., mg}.
    #[test]
    fn ascending_coefficient_sums_form_an_interval(
        n in 3usize..=16,
        seed in any::<u64>(),
    ) {
        let g = cyclic(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // generator element and bounds
        let gen = (1..n).find(|&e| g.element_order(e) == n).unwrap();
        let k = rng.gen_range(2..=n);
        let l = rng.gen_range(k.div_ceil(2)..=k);
        // l coefficients, each >= 1, sum < k; feasible only when l < k
        if l >= k {
            return Ok(());
        }
        let mut coeffs = vec![1u32; l];
        let mut total = l;
        while total < k - 1 {
            let i = rng.gen_range(0..l);
            coeffs[i] += 1;
            total += 1;
            if rng.gen_bool(0.4) {
                break;
            }
        }
        let m: u32 = coeffs.iter().sum();
        prop_assert!((m as usize) < k);

        let mut counts = vec![0u32; n];
        for &c in &coeffs {
            let mut term = 0;
            for _ in 0..c {
                term = g.mul(term, gen);
            }
            counts[term] += 1;
        }
        let s = Sequence::new(&g, counts).unwrap();
        let sums = s.sigma(None).unwrap();
        let mut want = ElementSet::empty(n);
        let mut p = gen;
        for _ in 0..m {
            want.insert(p);
            p = g.mul(p, gen);
        }
        prop_assert_eq!(sums, want);

        // and the certificate recovers the coefficients
        let cert = s.smoothness(Some(gen)).unwrap().unwrap();
        let mut sorted = coeffs.clone();
        sorted.sort_unstable();
        prop_assert_eq!(cert.coefficients, sorted);
        prop_assert_eq!(cert.m, m);
    }

    /// The sum DP and the sub-multiset product table answer identically
    /// over abelian groups.
    #[test]
    fn abelian_sums_agree_with_subsequence_products(
        n in 2usize..=9,
        terms in proptest::collection::vec(0usize..9, 0..7),
    ) {
        let g = cyclic(n);
        let mut counts = vec![0u32; n];
        for t in terms {
            counts[t % n] += 1;
        }
        let s = Sequence::new(&g, counts).unwrap();
        if s.is_empty() {
            return Ok(());
        }
        prop_assert_eq!(
            s.sigma(None).unwrap(),
            s.subsequence_products(None).unwrap()
        );
        for r in 1..=s.len() {
            prop_assert_eq!(
                s.sigma(Some(r)).unwrap(),
                s.subsequence_products(Some(r)).unwrap()
            );
        }
    }

    /// Parsing the canonical text form is the identity on sequences.
    #[test]
    fn text_form_round_trips(
        terms in proptest::collection::vec(0usize..6, 1..8),
    ) {
        let g: Group = Arc::new(FiniteGroup::dihedral(3).unwrap());
        let mut counts = vec![0u32; 6];
        for t in terms {
            counts[t] += 1;
        }
        let s = Sequence::new(&g, counts).unwrap();
        let back = Sequence::parse(&g, &s.to_text()).unwrap();
        prop_assert_eq!(s, back);
    }
}

#[test]
fn bounded_unions_stay_inside_the_brackets() {
    let cfg = SearchConfig::default();
    for g in [
        cyclic(3),
        cyclic(5),
        Arc::new(FiniteGroup::dihedral(3).unwrap()),
    ] {
        let ctx = ArithContext::new(&g, &cfg).unwrap();
        for k in 1..=5usize {
            let u = unions_bounded(&g, k, 8, &cfg).unwrap();
            if u.lengths.is_empty() {
                continue;
            }
            let lo = ctx.lambda(k).unwrap().lower_bound;
            let hi = ctx.rho(k).unwrap().upper_bound;
            assert!(
                *u.lengths.first().unwrap() >= lo && *u.lengths.last().unwrap() <= hi,
                "{}: U_{k} within [{lo}, {hi}], got {:?}",
                g.kind(),
                u.lengths
            );
        }
    }
}

#[test]
fn bounded_union_membership_is_symmetric() {
    // k in U_m iff m in U_k; both sides realized by the same sequence, so
    // the bounded enumerations agree at a common length cap.
    let cfg = SearchConfig::default();
    for g in [cyclic(3), Arc::new(FiniteGroup::dihedral(3).unwrap())] {
        for k in 1..=4usize {
            let u = unions_bounded(&g, k, 8, &cfg).unwrap();
            for &m in &u.lengths {
                let back = unions_bounded(&g, m, 8, &cfg).unwrap();
                assert!(
                    back.lengths.contains(&k),
                    "{}: {m} in U_{k} but {k} not in U_{m}",
                    g.kind()
                );
            }
        }
    }
}

#[test]
fn reflection_atoms_have_even_length() {
    // scan complete censuses over the reflection coset
    let cfg = SearchConfig::default();
    for (g, rotations) in [
        (Arc::new(FiniteGroup::dihedral(4).unwrap()), 4usize),
        (Arc::new(FiniteGroup::dihedral(5).unwrap()), 5),
        (Arc::new(FiniteGroup::dicyclic(2).unwrap()), 4),
    ] {
        let refl = ElementSet::from_iter(g.order(), rotations..g.order());
        for len in 1..=g.order() {
            let census = zerosum::atoms::restricted_atom_census(&g, len, refl, &cfg).unwrap();
            if len % 2 == 1 && len > 1 {
                assert!(census.is_empty(), "{}: odd length {len}", g.kind());
            }
        }
    }
}

proptest! {
    /// The sequence text parser never panics: arbitrary input is either a
    /// valid sequence or a clean error.
    #[test]
    fn parser_is_total(text in "[ -~]{0,40}") {
        let g: Group = Arc::new(FiniteGroup::dihedral(4).unwrap());
        let _ = Sequence::parse(&g, &text);
    }
}
