//! Seeded generators shared by the test suites. Nothing here is part of the
//! library proper.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigidcoh::lattice::{solve_integer_matrix, SubLattice};
use rigidcoh::tori::IsogenyPair;
use rigidcoh::u_band::augmentation_lattice;
use rigidcoh::{EquivariantMap, FiniteGaloisModule, FiniteGroup, GaloisLattice, Int, IntMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::from_vec(rows, cols, data)
}

/// A product of elementary matrices and sign changes.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-2..=2));
        m.add_row_multiple(i, j, &c);
        if rng.gen_bool(0.1) {
            m.negate_row(i);
        }
    }
    m
}

/// Companion matrix of the `d`-th cyclotomic polynomial.
fn cyclotomic_companion(d: usize) -> IntMatrix {
    // coefficients of Φ_d by exact division of x^d − 1 by Φ_e for e | d, e < d
    fn phi(d: usize) -> Vec<i64> {
        let mut p = vec![0i64; d + 1];
        p[0] = -1;
        p[d] = 1;
        for e in 1..d {
            if d % e == 0 {
                let q = phi(e);
                p = divide(&p, &q);
            }
        }
        p
    }
    fn divide(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut a = a.to_vec();
        let db = b.len() - 1;
        let da = a.len() - 1;
        let mut q = vec![0i64; da - db + 1];
        for k in (0..=da - db).rev() {
            let c = a[k + db] / b[db];
            q[k] = c;
            for (i, &bi) in b.iter().enumerate() {
                a[k + i] -= c * bi;
            }
        }
        q
    }
    let p = phi(d);
    let n = p.len() - 1;
    let mut m = IntMatrix::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = BigInt::from(1);
    }
    for i in 0..n {
        m[(i, n - 1)] = BigInt::from(-p[i]);
    }
    m
}

fn euler_phi(d: usize) -> usize {
    (1..=d).filter(|k| num_gcd(*k, d) == 1).count()
}

fn num_gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// The basic lattices the random generator assembles, of rank at most `room`.
fn basic_blocks(group: &Arc<FiniteGroup>, room: usize) -> Vec<GaloisLattice> {
    let n = group.order();
    let mut out = vec![GaloisLattice::trivial(group.clone(), 1)];
    if n <= room {
        out.push(GaloisLattice::regular(group.clone(), 1));
    }
    if n >= 2 && n - 1 <= room {
        let aug = augmentation_lattice(group);
        out.push(aug.dual());
        out.push(aug);
    }
    if group.is_cyclic() && n >= 2 {
        let gen = (0..n).find(|&g| group.element_order(g) == n).expect("cyclic");
        for d in 2..=n {
            if n % d == 0 && euler_phi(d) <= room {
                let c = cyclotomic_companion(d);
                let images = [c.clone()];
                if let Ok(l) = GaloisLattice::from_generator_images(group.clone(), c.nrows(), &[gen], &images) {
                    out.push(l);
                }
            }
        }
    }
    out
}

/// `L` restated in a basis of a `Γ`-stable full-rank sublattice.
fn restrict_to(l: &GaloisLattice, sub: &SubLattice) -> GaloisLattice {
    let bt = sub.basis().transpose();
    let action = l.actions().iter().map(|a| solve_integer_matrix(&bt, &(a * &bt)).expect("stable sublattice")).collect();
    GaloisLattice::new(l.group_arc().clone(), l.rank(), action).expect("restriction of an action")
}

/// The `Γ`-stable lattice spanned by the orbits of a few random vectors and
/// `k·L`.
pub fn random_stable_sublattice<R: Rng>(rng: &mut R, l: &GaloisLattice, k: i64, vectors: usize) -> SubLattice {
    let r = l.rank();
    let mut gens: Vec<Vec<Int>> =
        (0..r).map(|i| (0..r).map(|j| BigInt::from(if i == j { k } else { 0 })).collect()).collect();
    for _ in 0..vectors {
        let v: Vec<Int> = (0..r).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
        for a in l.actions() {
            gens.push(a.mul_vec(&v));
        }
    }
    SubLattice::from_vectors(r, &gens)
}

/// A random lattice of rank `1..=max_rank`: a direct sum of basic blocks,
/// possibly passed to a stable sublattice, in a random basis.
pub fn random_lattice<R: Rng>(rng: &mut R, group: &Arc<FiniteGroup>, max_rank: usize) -> GaloisLattice {
    let mut parts: Vec<GaloisLattice> = Vec::new();
    let mut rank = 0;
    loop {
        let blocks = basic_blocks(group, max_rank - rank);
        let b = blocks.choose(rng).expect("the trivial block always fits").clone();
        rank += b.rank();
        parts.push(b);
        if rank >= max_rank || rng.gen_bool(0.4) {
            break;
        }
    }
    let mut l = parts[1..].iter().fold(parts[0].clone(), |acc, b| acc.direct_sum(b).expect("same group"));
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=3);
        let sub = random_stable_sublattice(rng, &l, k, 1);
        l = restrict_to(&l, &sub);
    }
    let u = random_unimodular(rng, l.rank(), 2 * l.rank());
    let u_inv = rigidcoh::lattice::unimodular_inverse(&u).expect("unimodular");
    l.rebase(&u, &u_inv)
}

/// `L₀/P` for a random lattice `L₀` of rank ≤ 3 and a stable sublattice `P`
/// of index at most `max_order` (resampled until it fits).
pub fn random_finite_module<R: Rng>(rng: &mut R, group: &Arc<FiniteGroup>, max_order: u64) -> FiniteGaloisModule {
    loop {
        let l0 = random_lattice(rng, group, 3);
        let k = rng.gen_range(2..=4);
        let vecs = rng.gen_range(0..=2);
        let p = random_stable_sublattice(rng, &l0, k, vecs);
        let index = p.index_in(&SubLattice::full(l0.rank())).expect("full rank");
        if index > BigInt::from(max_order) {
            continue;
        }
        return FiniteGaloisModule::quotient(&l0, &p.basis().transpose()).expect("stable full-rank sublattice");
    }
}

/// A random `Y ↪ Ȳ` of rank ≤ `max_rank` and index ≤ `max_index`.
pub fn random_isogeny_pair<R: Rng>(rng: &mut R, group: &Arc<FiniteGroup>, max_rank: usize, max_index: u64) -> IsogenyPair {
    loop {
        let ybar = random_lattice(rng, group, max_rank);
        let k = rng.gen_range(1..=3);
        let vecs = rng.gen_range(0..=2);
        let sub = random_stable_sublattice(rng, &ybar, k, vecs);
        let index = sub.index_in(&SubLattice::full(ybar.rank())).expect("full rank");
        if index > BigInt::from(max_index) {
            continue;
        }
        let y = restrict_to(&ybar, &sub);
        let m = sub.basis().transpose();
        return IsogenyPair::new(EquivariantMap::new(y, ybar, m).expect("inclusion is equivariant")).expect("nonsingular");
    }
}

/// Cyclic groups of order 1 to 12 and the non-cyclic groups of order ≤ 8.
pub fn test_groups(max_order: usize) -> Vec<(String, Arc<FiniteGroup>)> {
    FiniteGroup::small_groups_up_to_8()
        .into_iter()
        .filter(|(_, g)| g.order() <= max_order)
        .map(|(name, g)| (name, Arc::new(g)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_companions_have_the_right_order() {
        for d in 1..=12 {
            let c = cyclotomic_companion(d);
            assert_eq!(c.nrows(), euler_phi(d));
            assert!(c.pow(d as u32).is_identity());
            for e in 1..d {
                assert!(!c.pow(e as u32).is_identity());
            }
        }
    }

    #[test]
    fn generators_produce_valid_objects() {
        let mut r = rng(7);
        for (_, g) in test_groups(8) {
            let l = random_lattice(&mut r, &g, 6);
            assert!(l.rank() <= 6);
            let q = random_finite_module(&mut r, &g, 64);
            assert!(q.order() <= BigInt::from(64));
            let p = random_isogeny_pair(&mut r, &g, 4, 36);
            assert!(p.index() <= BigInt::from(36));
        }
    }
}
