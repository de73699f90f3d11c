use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use rigidcoh::galois::{h1_finite, h1_lattice, invariants_sublattice, tate_h0, tate_h_neg1, tate_h_neg2_finite};
use rigidcoh::{EquivariantMap, FinAbGroup, FiniteGaloisModule, FiniteGroup, GaloisLattice, GroupHom, Int, IntMatrix};
use rigidcoh_testkit::{random_finite_module, random_lattice, random_matrix, rng, test_groups};

fn factors(g: &FinAbGroup) -> Vec<u64> {
    g.invariant_factors().iter().map(|d| d.to_u64().unwrap()).collect()
}

fn all_vectors(orders: &[Int]) -> Vec<Vec<Int>> {
    let mut out = vec![Vec::new()];
    for d in orders {
        let d = d.to_i64().unwrap();
        out = out.into_iter().flat_map(|v| (0..d).map(move |x| {
            let mut w = v.clone();
            w.push(BigInt::from(x));
            w
        })).collect();
    }
    out
}

/// `|H¹(Γ, Q)|` by enumerating crossed homomorphisms.
///
/// A crossed homomorphism is fixed by its values on generators; every
/// candidate is extended along the Cayley graph and checked on all products.
fn h1_order_by_cocycles(q: &FiniteGaloisModule) -> u64 {
    let g = q.group();
    let gens = g.generators();
    let elems = all_vectors(q.orders());
    let add = |a: &[Int], b: &[Int]| q.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>());
    let mut cocycles = 0u64;
    let mut choice = vec![0usize; gens.len()];
    'outer: loop {
        let mut f: HashMap<usize, Vec<Int>> = HashMap::new();
        f.insert(g.identity(), q.reduce(&vec![BigInt::zero(); q.orders().len()]));
        let mut frontier = vec![g.identity()];
        let mut ok = true;
        while let Some(x) = frontier.pop() {
            for (k, &s) in gens.iter().enumerate() {
                // f(x·s) = f(x) + x·f(s)
                let y = g.mul(x, s);
                let val = add(&f[&x], &q.act(x, &elems[choice[k]]));
                match f.get(&y) {
                    Some(old) if *old != val => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        f.insert(y, val);
                        frontier.push(y);
                    }
                }
            }
            if !ok {
                break;
            }
        }
        if ok {
            let all = (0..g.order()).all(|a| {
                (0..g.order()).all(|b| f[&g.mul(a, b)] == add(&f[&a], &q.act(a, &f[&b])))
            });
            if all {
                cocycles += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                break 'outer;
            }
            choice[i] += 1;
            if choice[i] < elems.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
    let fixed = elems.iter().filter(|v| (0..g.order()).all(|s| q.act(s, v) == **v)).count() as u64;
    let coboundaries = elems.len() as u64 / fixed;
    assert_eq!(cocycles % coboundaries, 0);
    cocycles / coboundaries
}

/// `|H¹(Γ, M)| = |(M/nM)ᴳ| / n^{rank Mᴳ}` with `n = |Γ|`, from the long exact
/// sequence of `0 → M → M → M/nM → 0` and `n·H¹ = 0`.
fn h1_order_mod_n(m: &GaloisLattice) -> u64 {
    let n = m.group().order() as i64;
    let orders = vec![BigInt::from(n); m.rank()];
    let fixed = all_vectors(&orders)
        .into_iter()
        .filter(|v| {
            m.actions().iter().all(|a| {
                a.mul_vec(v).iter().zip(v).all(|(x, y)| (x - y).is_multiple_of(&BigInt::from(n)))
            })
        })
        .count() as u64;
    let r = invariants_sublattice(m).rank() as u32;
    assert_eq!(fixed % (n as u64).pow(r), 0);
    fixed / (n as u64).pow(r)
}

/// `Σ_σ ρ_N(σ)·B·ρ_M(σ⁻¹)`, an equivariant map `M → N`.
fn average(m: &GaloisLattice, n: &GaloisLattice, b: &IntMatrix) -> EquivariantMap {
    let g = m.group();
    let mut acc = IntMatrix::zeros(n.rank(), m.rank());
    for s in 0..g.order() {
        acc = &acc + &(&(n.action(s) * b) * m.action(g.inv(s)));
    }
    EquivariantMap::new(m.clone(), n.clone(), acc).unwrap()
}

fn same_hom(a: &GroupHom, b: &GroupHom, target: &FinAbGroup) {
    assert_eq!(a.images().len(), b.images().len());
    for (x, y) in a.images().iter().zip(b.images()) {
        assert_eq!(target.reduce(x), target.reduce(y));
    }
}

#[test]
fn induced_modules_are_acyclic() {
    let groups = test_groups(8);
    assert_eq!(groups.iter().map(|(_, g)| g.order()).filter(|&o| o <= 8).count(), 14);
    for (name, g) in &groups {
        for k in 1..=2 {
            let reg = GaloisLattice::regular(g.clone(), k);
            assert!(tate_h0(&reg).is_trivial(), "{name} Ĥ⁰");
            assert!(tate_h_neg1(&reg).is_trivial(), "{name} Ĥ⁻¹");
            assert!(h1_lattice(&reg).is_trivial(), "{name} H¹");
            for m in [2i64, 3] {
                let p = IntMatrix::identity(reg.rank()).scale(&BigInt::from(m));
                let q = FiniteGaloisModule::quotient(&reg, &p).unwrap();
                assert!(tate_h_neg2_finite(&q).is_trivial(), "{name} Ĥ⁻² mod {m}");
                assert!(h1_finite(&q).is_trivial(), "{name} H¹ mod {m}");
            }
        }
    }
}

#[test]
fn cyclic_periodicity() {
    let mut r = rng(3);
    for i in 0..200 {
        let m = 2 + i % 11;
        let g = Arc::new(FiniteGroup::cyclic(m));
        let l = random_lattice(&mut r, &g, 6);
        assert_eq!(factors(&tate_h_neg1(&l)), factors(&h1_lattice(&l)), "order {m}, case {i}");
    }
}

#[test]
fn lattice_h1_matches_reduction_oracle() {
    let mut r = rng(4);
    for (name, g) in test_groups(6) {
        for _ in 0..6 {
            let l = random_lattice(&mut r, &g, 3);
            if (g.order() as u64).pow(l.rank() as u32) > 5000 {
                continue;
            }
            assert_eq!(h1_lattice(&l).order().to_u64().unwrap(), h1_order_mod_n(&l), "{name}");
        }
    }
}

#[test]
fn tate_groups_are_killed_by_group_order() {
    let mut r = rng(5);
    for (name, g) in test_groups(12) {
        let n = BigInt::from(g.order());
        for _ in 0..8 {
            let l = random_lattice(&mut r, &g, 6);
            for h in [tate_h0(&l), tate_h_neg1(&l), h1_lattice(&l)] {
                for d in h.invariant_factors() {
                    assert!(n.is_multiple_of(d), "{name}: {d} ∤ {n}");
                }
            }
            let q = random_finite_module(&mut r, &g, 64);
            let bound = n.lcm(&q.exponent());
            for h in [tate_h_neg2_finite(&q), h1_finite(&q)] {
                for d in h.invariant_factors() {
                    assert!(bound.is_multiple_of(d), "{name}: {d} ∤ {bound}");
                }
            }
        }
    }
}

#[test]
fn duality_cardinality() {
    let mut r = rng(6);
    let groups = test_groups(6);
    for i in 0..100 {
        let (name, g) = &groups[i % groups.len()];
        let q = random_finite_module(&mut r, g, 64);
        let dual = q.dual_module();
        let h1 = h1_finite(&dual);
        assert_eq!(tate_h_neg2_finite(&q).order(), h1.order(), "{name}, case {i}");
        if i % 4 == 0 {
            assert_eq!(h1.order().to_u64().unwrap(), h1_order_by_cocycles(&dual), "{name}, case {i}");
        }
    }
}

#[test]
fn finite_h1_matches_cocycle_enumeration() {
    let mut r = rng(7);
    for (name, g) in test_groups(6) {
        for _ in 0..4 {
            let q = random_finite_module(&mut r, &g, 32);
            assert_eq!(h1_finite(&q).order().to_u64().unwrap(), h1_order_by_cocycles(&q), "{name}");
        }
    }
}

#[test]
fn induced_maps_respect_composition() {
    let mut r = rng(8);
    for (name, g) in test_groups(8) {
        for _ in 0..3 {
            let a = random_lattice(&mut r, &g, 4);
            let b = random_lattice(&mut r, &g, 4);
            let c = random_lattice(&mut r, &g, 4);
            let f = average(&a, &b, &random_matrix(&mut r, b.rank(), a.rank(), 2));
            let h = average(&b, &c, &random_matrix(&mut r, c.rank(), b.rank(), 2));
            let hf = f.compose(&h).unwrap();
            same_hom(&hf.induced_tate_h0(), &f.induced_tate_h0().compose(&h.induced_tate_h0()).unwrap(), &tate_h0(&c));
            same_hom(
                &hf.induced_tate_h_neg1(),
                &f.induced_tate_h_neg1().compose(&h.induced_tate_h_neg1()).unwrap(),
                &tate_h_neg1(&c),
            );
            same_hom(&hf.induced_h1(), &f.induced_h1().compose(&h.induced_h1()).unwrap(), &h1_lattice(&c));
            let id = EquivariantMap::identity(&a);
            assert!(id.induced_h1().is_isomorphism(), "{name}");
        }
    }
}
