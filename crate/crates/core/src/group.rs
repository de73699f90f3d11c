//! Finite groups given by Cayley tables.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

/// A finite group on the elements `0..order`, with `0` the identity.
///
/// `table[a][b]` is the index of the product `a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table: Latin square, identity `0`, associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInput("group table is empty".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidInput("group table is not square".into()));
            }
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                let (r, c) = (table[i][j], table[j][i]);
                if r >= n || c >= n || row_seen[r] || col_seen[c] {
                    return Err(Error::InvalidInput("group table is not a Latin square".into()));
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }
        if (0..n).any(|i| table[0][i] != i || table[i][0] != i) {
            return Err(Error::InvalidInput("element 0 is not the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidInput(format!("table is not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let inverses = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).expect("Latin square")).collect();
        Ok(FiniteGroup { table, inverses })
    }

    /// The group generated by permutations of `0..degree` (closure under composition).
    ///
    /// Element `0` is the identity; the rest follow breadth-first order from
    /// the generators. Composition is `(p·q)(x) = p(q(x))`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Self {
        let (perms, _) = close_permutations(degree, generators);
        let index: HashMap<&Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index[&compose(p, q)]).collect())
            .collect();
        Self::from_table(table).expect("permutation groups are groups")
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `G × H` with `(g, h)` stored at index `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (m, n) = (g.order(), h.order());
        let table = (0..m * n)
            .map(|a| (0..m * n).map(|b| g.mul(a / n, b / n) * n + h.mul(a % n, b % n)).collect())
            .collect();
        Self::from_table(table).expect("product table")
    }

    /// Dihedral group of order `2n`: `rᵏ` at index `k`, `rᵏs` at index `n + k`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let m = 2 * n;
        let elem = |i: usize| (i % n, i >= n);
        let table = (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| {
                        let (i, s) = elem(a);
                        let (j, t) = elem(b);
                        // r^i s^s · r^j s^t = r^(i ± j) s^(s+t)
                        let k = if s { (i + n - j) % n } else { (i + j) % n };
                        if s ^ t {
                            n + k
                        } else {
                            k
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("dihedral table")
    }

    /// Quaternion group `Q₈` as `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // index = 2·unit + sign, units 1, i, j, k
        let unit_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (u, neg) = unit_mul(a / 2, b / 2);
                        let sign = (a % 2) ^ (b % 2) ^ usize::from(neg);
                        2 * u + sign
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("quaternion table")
    }

    /// The symmetric group on `n` letters, generated by a transposition and an `n`-cycle.
    pub fn symmetric(n: usize) -> Self {
        if n <= 1 {
            return Self::trivial();
        }
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(n, &[swap, cycle])
    }

    /// One representative of every isomorphism type of order at most 8, with names.
    pub fn small_groups_up_to_8() -> Vec<(String, FiniteGroup)> {
        let c = Self::cyclic;
        vec![
            ("1".into(), c(1)),
            ("C2".into(), c(2)),
            ("C3".into(), c(3)),
            ("C4".into(), c(4)),
            ("C2xC2".into(), Self::direct_product(&c(2), &c(2))),
            ("C5".into(), c(5)),
            ("C6".into(), c(6)),
            ("S3".into(), Self::symmetric(3)),
            ("C7".into(), c(7)),
            ("C8".into(), c(8)),
            ("C4xC2".into(), Self::direct_product(&c(4), &c(2))),
            ("C2xC2xC2".into(), Self::direct_product(&Self::direct_product(&c(2), &c(2)), &c(2))),
            ("D4".into(), Self::dihedral(4)),
            ("Q8".into(), Self::quaternion()),
        ]
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([0]);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// A generating set, chosen greedily by adding the smallest element not
    /// yet generated. The identity is never included.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = vec![0];
        for a in 0..self.order() {
            if !sub.contains(&a) {
                gens.push(a);
                sub = self.generated_subgroup(&gens);
            }
            if sub.len() == self.order() {
                break;
            }
        }
        gens
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|a| self.element_order(a) == self.order())
    }
}

/// A homomorphism `G → H` given by the image of every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    images: Vec<usize>,
}

impl GroupMap {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() || images.iter().any(|&x| x >= target.order()) {
            return Err(Error::InvalidInput("group map has the wrong shape".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::InvalidInput("group map is not a homomorphism".into()));
                }
            }
        }
        Ok(GroupMap { images })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupMap { images: (0..g.order()).collect() }
    }

    /// The reduction `ℤ/m → ℤ/n` for `n | m`.
    pub fn cyclic_reduction(m: usize, n: usize) -> Result<Self> {
        if n == 0 || m % n != 0 {
            return Err(Error::NotSurjective);
        }
        Self::new(&FiniteGroup::cyclic(m), &FiniteGroup::cyclic(n), (0..m).map(|k| k % n).collect())
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_surjective(&self, target: &FiniteGroup) -> bool {
        let hit: BTreeSet<usize> = self.images.iter().copied().collect();
        hit.len() == target.order()
    }
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

fn close_permutations(degree: usize, generators: &[Vec<usize>]) -> (Vec<Vec<usize>>, HashMap<Vec<usize>, usize>) {
    let id: Vec<usize> = (0..degree).collect();
    let mut perms = vec![id.clone()];
    let mut index = HashMap::from([(id, 0)]);
    let mut i = 0;
    while i < perms.len() {
        for g in generators {
            let p = compose(&perms[i], g);
            if !index.contains_key(&p) {
                index.insert(p.clone(), perms.len());
                perms.push(p);
            }
        }
        i += 1;
    }
    (perms, index)
}
