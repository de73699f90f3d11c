use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use rigidcoh::endoscopy::{
    all_refined_lifts, endoscopic_subsystem, enlarge_center_invariance, lift_along_enlargement, lift_to_refined,
    characters_of_cokernel, plus_torsion_characters, restrict_to_y, transfer_pairing_term, validate_refined,
    InvariantClass, RefinedEndoscopicDatum,
};
use rigidcoh::qmodz::TorsionCharacter;
use rigidcoh::reductive::{catalogue, Form, ReductivePair, RootDatum};
use rigidcoh::tori::{rigid_h1_torus, IsogenyPair};
use rigidcoh::{Error, FiniteGroup, GaloisLattice, QModZ};

/// Characters of `Y` killing `I·Y`: zero, the torsion duals and their pairwise sums.
fn plus_characters_on_y(y: &GaloisLattice) -> Vec<TorsionCharacter> {
    let base = plus_torsion_characters(&IsogenyPair::trivial(y));
    let mut out = vec![TorsionCharacter::zero(y.rank())];
    out.extend(base.iter().cloned());
    for (i, a) in base.iter().enumerate() {
        for b in &base[i + 1..] {
            out.push(a.add(b));
        }
    }
    out
}

/// Characters of `Y` with values in `(1/k)ℤ/ℤ`, for split data.
fn all_characters(rank: usize, k: i64) -> Vec<TorsionCharacter> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<QModZ>| {
                (0..k).map(move |a| {
                    let mut w = v.clone();
                    w.push(QModZ::from_i64(a, k));
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(TorsionCharacter::new).collect()
}

fn split(rd: RootDatum, m: usize) -> RootDatum {
    rd.with_galois(GaloisLattice::trivial(Arc::new(FiniteGroup::cyclic(m)), rd.rank())).unwrap()
}

#[test]
fn endoscopic_subsystems_are_closed() {
    let data = [
        RootDatum::type_a(3, Form::SimplyConnected).unwrap(),
        RootDatum::type_a(4, Form::SimplyConnected).unwrap(),
        RootDatum::type_a(3, Form::Adjoint).unwrap(),
        RootDatum::from_cartan(&rigidcoh::reductive::cartan_matrix('C', 2).unwrap(), Form::SimplyConnected).unwrap(),
        RootDatum::from_cartan(&rigidcoh::reductive::cartan_matrix('B', 2).unwrap(), Form::SimplyConnected).unwrap(),
    ];
    let mut proper = 0;
    for rd in data {
        let pair = ReductivePair::trivial_center(split(rd.clone(), 2));
        for s in all_characters(rd.rank(), 4) {
            let h = endoscopic_subsystem(&pair, &s).unwrap();
            let kept: HashSet<&Vec<BigInt>> = h.coroots().iter().collect();
            let all: HashSet<&Vec<BigInt>> = rd.coroots().iter().collect();
            assert!(kept.is_subset(&all));
            for a in &kept {
                for b in &kept {
                    let sum: Vec<BigInt> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
                    if all.contains(&sum) {
                        assert!(kept.contains(&sum), "not closed under {a:?} + {b:?}");
                    }
                }
            }
            if !kept.is_empty() && kept.len() < all.len() {
                proper += 1;
            }
        }
    }
    assert!(proper > 0);
}

#[test]
fn lifts_form_a_torsor() {
    for e in catalogue() {
        let pair = &e.pair;
        let ip = pair.isogeny_pair();
        let index = ip.index().to_usize().unwrap();
        for s in plus_characters_on_y(ip.y()) {
            let lifts = all_refined_lifts(pair, &s).unwrap();
            assert_eq!(lifts.len(), index, "{}", e.name);
            let distinct: HashSet<&TorsionCharacter> = lifts.iter().collect();
            assert_eq!(distinct.len(), index, "{}", e.name);
            for l in &lifts {
                assert_eq!(restrict_to_y(ip, l), s, "{}", e.name);
                let datum = RefinedEndoscopicDatum::new(pair.clone(), l.clone()).unwrap();
                assert!(validate_refined(&datum).is_valid(), "{}: {:?}", e.name, validate_refined(&datum));
            }
            assert_eq!(characters_of_cokernel(ip).len(), index);
        }
    }
}

#[test]
fn lifting_rejects_characters_not_killing_iy() {
    let rd = RootDatum::type_a(2, Form::SimplyConnected).unwrap();
    let minus = rd.with_cyclic_action(2, &rd.coxeter_element()).unwrap();
    let pair = ReductivePair::full_center(minus).unwrap();
    // I·Y = 2Y here, so 1/4 does not vanish on it
    let s = TorsionCharacter::new(vec![QModZ::from_i64(1, 4)]);
    assert!(matches!(lift_to_refined(&pair, &s), Err(Error::CharacterNotPlus(_))));
    let s = TorsionCharacter::new(vec![QModZ::from_i64(1, 2)]);
    assert_eq!(all_refined_lifts(&pair, &s).unwrap().len(), 2);
}

#[test]
fn pairing_term_ignores_the_representative() {
    for e in catalogue() {
        let ip = e.pair.isogeny_pair();
        let rigid = rigid_h1_torus(ip);
        let chars = plus_torsion_characters(ip);
        let shifts = ip.iy_in_ybar().basis_vectors();
        for lift in rigid.generator_lifts() {
            let inv = InvariantClass::new(ip.clone(), lift.clone()).unwrap();
            for chi in &chars {
                let v = transfer_pairing_term(&inv, chi).unwrap();
                for d in &shifts {
                    let moved: Vec<BigInt> = lift.iter().zip(d).map(|(a, b)| a + b).collect();
                    let inv2 = InvariantClass::new(ip.clone(), moved).unwrap();
                    assert_eq!(transfer_pairing_term(&inv2, chi).unwrap(), v, "{}", e.name);
                }
            }
        }
    }
}

#[test]
fn enlargement_invariance_on_catalogue() {
    let entries = catalogue();
    let mut compared = 0;
    for chunk in entries.chunks(2) {
        let (small, large) = (&chunk[0], &chunk[1]);
        assert!(!small.full_center && large.full_center && small.twist == large.twist);
        let (pz, pzp) = (small.pair.isogeny_pair(), large.pair.isogeny_pair());
        let rigid = rigid_h1_torus(pz);
        let classes: Vec<Vec<BigInt>> = rigid.elements().iter().map(|c| rigid.lift(c)).collect();
        for s_dot in plus_characters_on_y(pz.ybar()) {
            let base = lift_along_enlargement(pz, pzp, &s_dot).unwrap();
            // every s̈ restricting to ṡ differs from the base by a character of Ȳ′/Y
            for chi in characters_of_cokernel(pzp) {
                let s_ddot = base.add(&chi);
                for rep in &classes {
                    let inv = InvariantClass::new(pz.clone(), rep.clone()).unwrap();
                    let r = enlarge_center_invariance(pz, pzp, &inv, &s_dot, &s_ddot).unwrap();
                    assert!(r.restricts && r.equal(), "{} vs {}: {r:?}", small.name, large.name);
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 50);
}
