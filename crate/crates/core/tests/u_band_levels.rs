use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use rigidcoh::tori::{band_group, IsogenyPair};
use rigidcoh::u_band::{alpha_level, h2_u_level, hom_u_to_z, transition_char, transition_h2, ULevel};
use rigidcoh::{Error, FiniteGroup, GroupMap};
use rigidcoh_testkit::{random_isogeny_pair, rng, test_groups};

/// Every surjection `g → ℤ/d`, found by extending generator images.
fn surjections_to_cyclic(g: &FiniteGroup, d: usize) -> Vec<GroupMap> {
    let target = FiniteGroup::cyclic(d);
    let gens = g.generators();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let mut img: HashMap<usize, usize> = HashMap::from([(g.identity(), 0)]);
        let mut stack = vec![g.identity()];
        while let Some(x) = stack.pop() {
            for (k, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                if !img.contains_key(&y) {
                    img.insert(y, (img[&x] + choice[k]) % d);
                    stack.push(y);
                }
            }
        }
        let images: Vec<usize> = (0..g.order()).map(|a| img[&a]).collect();
        if let Ok(m) = GroupMap::new(g, &target, images) {
            if m.is_surjective(&target) {
                out.push(m);
            }
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < d {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn character_module_order() {
    for (name, g) in test_groups(6) {
        for n in 1..=6u64 {
            let level = ULevel::new(g.clone(), n).unwrap();
            let expected = BigInt::from(n).pow(g.order() as u32 - 1);
            assert_eq!(level.char_module().order(), expected, "{name}, n = {n}");
        }
    }
}

#[test]
fn h2_is_cyclic_of_gcd_order() {
    for (name, g) in test_groups(8) {
        for n in 1..=12u64 {
            let level = ULevel::new(g.clone(), n).unwrap();
            let h2 = h2_u_level(&level).unwrap();
            let gcd = n.gcd(&(g.order() as u64));
            assert_eq!(h2.order().to_u64().unwrap(), gcd, "{name}, n = {n}");
            assert!(h2.invariant_factors().len() <= 1);
            // the invariants of the character module, computed directly
            let h0 = level.char_module().invariants();
            assert_eq!(h0.invariant_factors(), h2.invariant_factors(), "{name}, n = {n}");
        }
    }
}

#[test]
fn transitions_project_and_carry_alpha() {
    let mut checked = 0;
    for (name, g) in test_groups(8) {
        for d in 1..=g.order() {
            if g.order() % d != 0 {
                continue;
            }
            let coarse_group = Arc::new(FiniteGroup::cyclic(d));
            for p in surjections_to_cyclic(&g, d) {
                for n in 1..=12u64 {
                    for nc in (1..=n).filter(|c| n % c == 0) {
                        let fine = ULevel::new(g.clone(), n).unwrap();
                        let coarse = ULevel::new(coarse_group.clone(), nc).unwrap();
                        let t = transition_h2(&fine, &coarse, &p).unwrap_or_else(|e| panic!("{name} → ℤ/{d}, {n} → {nc}: {e}"));
                        let dst = h2_u_level(&coarse).unwrap();
                        // the natural projection sends 1 to 1
                        if !t.source.is_trivial() && !dst.is_trivial() {
                            assert_eq!(dst.reduce(&t.apply(&[BigInt::from(1)])), dst.reduce(&[BigInt::from(1)]));
                        }
                        assert_eq!(dst.reduce(&t.apply(&alpha_level(&fine))), dst.reduce(&alpha_level(&coarse)));
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn transition_requires_dividing_levels() {
    let g = Arc::new(FiniteGroup::cyclic(4));
    let fine = ULevel::new(g.clone(), 2).unwrap();
    let coarse = ULevel::new(g.clone(), 4).unwrap();
    assert!(transition_char(&fine, &coarse, &GroupMap::identity(&g)).is_err());
}

#[test]
fn band_homs_need_a_large_enough_level() {
    let mut r = rng(21);
    for (name, g) in test_groups(6) {
        for _ in 0..4 {
            let pair: IsogenyPair = random_isogeny_pair(&mut r, &g, 3, 36);
            let e = pair.cokernel().exponent().to_u64().unwrap();
            for n in [e, 2 * e, 6 * e] {
                let level = ULevel::new(g.clone(), n).unwrap();
                let h = hom_u_to_z(&level, &pair).unwrap();
                assert_eq!(h.invariant_factors(), band_group(&pair).invariant_factors(), "{name}");
            }
            if e > 1 {
                let level = ULevel::new(g.clone(), e - 1).unwrap();
                assert!(matches!(hom_u_to_z(&level, &pair), Err(Error::ExponentMismatch { .. })), "{name}");
            }
        }
    }
}
