//! Finite abelian groups presented as subquotients `B/A` of lattices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::SubLattice;
use crate::normal_form::smith_normal_form;
use crate::{Int, IntMatrix};

/// A finite abelian group `B/A ≅ ⊕ ℤ/dᵢ` in invariant-factor form.
///
/// Elements are coordinate vectors reduced modulo the invariant factors.
/// `class_of` maps any vector of `B` to its coordinates; the generator lifts
/// are vectors of `B` whose classes are the standard coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbGroup {
    invariant_factors: Vec<Int>,
    numerator: SubLattice,
    denominator: SubLattice,
    /// `k × t`: numerator coordinates (row) times this, reduced mod `dᵢ`.
    coord_map: IntMatrix,
    generator_lifts: Vec<Vec<Int>>,
}

impl FinAbGroup {
    /// The quotient `B/A`. Errors if `A ⊄ B` or the quotient is infinite.
    pub fn subquotient(numerator: &SubLattice, denominator: &SubLattice) -> Result<Self> {
        if numerator.ambient_rank() != denominator.ambient_rank() {
            return Err(Error::DimensionMismatch(format!(
                "ambient ranks {} and {}",
                numerator.ambient_rank(),
                denominator.ambient_rank()
            )));
        }
        if !numerator.contains_lattice(denominator) {
            return Err(Error::NotContained);
        }
        if denominator.rank() < numerator.rank() {
            return Err(Error::InfiniteQuotient { numerator: numerator.rank(), denominator: denominator.rank() });
        }
        let k = numerator.rank();
        let c = denominator.coordinates_matrix_in(numerator);
        let s = smith_normal_form(&c);
        let diag = s.diagonal();
        let keep: Vec<usize> = (0..k).filter(|&i| !diag[i].is_one()).collect();
        let invariant_factors: Vec<Int> = keep.iter().map(|&i| diag[i].clone()).collect();
        let coord_map = s.v.select_columns(&keep);
        let generator_lifts =
            keep.iter().map(|&i| numerator.combination(s.v_inv.row(i))).collect::<Vec<_>>();
        Ok(FinAbGroup {
            invariant_factors,
            numerator: numerator.clone(),
            denominator: denominator.clone(),
            coord_map,
            generator_lifts,
        })
    }

    /// `ℤ/d` presented as `ℤ/dℤ`. `d = 1` gives the trivial group.
    pub fn cyclic(d: &Int) -> Self {
        assert!(d >= &BigInt::one(), "cyclic group order must be positive");
        let num = SubLattice::full(1);
        let den = SubLattice::from_vectors(1, &[vec![d.clone()]]);
        Self::subquotient(&num, &den).expect("dℤ ⊆ ℤ")
    }

    /// `⊕ ℤ/dᵢ` for arbitrary positive `dᵢ` (canonicalized).
    pub fn from_orders(orders: &[Int]) -> Self {
        let n = orders.len();
        let num = SubLattice::full(n);
        let den = SubLattice::from_generators(n, &IntMatrix::diagonal(orders));
        Self::subquotient(&num, &den).expect("diagonal sublattice")
    }

    pub fn trivial() -> Self {
        Self::from_orders(&[])
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    pub fn ambient_rank(&self) -> usize {
        self.numerator.ambient_rank()
    }

    pub fn numerator(&self) -> &SubLattice {
        &self.numerator
    }

    pub fn denominator(&self) -> &SubLattice {
        &self.denominator
    }

    pub fn generator_lifts(&self) -> &[Vec<Int>] {
        &self.generator_lifts
    }

    /// Number of cyclic factors.
    pub fn ngens(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> Int {
        self.invariant_factors.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn exponent(&self) -> Int {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn zero(&self) -> Vec<Int> {
        vec![BigInt::zero(); self.ngens()]
    }

    pub fn reduce(&self, coords: &[Int]) -> Vec<Int> {
        coords.iter().zip(&self.invariant_factors).map(|(c, d)| c.mod_floor(d)).collect()
    }

    /// The class of an ambient vector lying in the numerator.
    pub fn class_of(&self, v: &[Int]) -> Result<Vec<Int>> {
        let x = self.numerator.coordinates(v).ok_or(Error::NotContained)?;
        Ok(self.reduce(&self.coord_map.vec_mul(&x)))
    }

    /// A lift in the numerator of the element with the given coordinates.
    pub fn lift(&self, coords: &[Int]) -> Vec<Int> {
        let mut out = vec![BigInt::zero(); self.ambient_rank()];
        for (c, g) in coords.iter().zip(&self.generator_lifts) {
            for (o, x) in out.iter_mut().zip(g) {
                *o += c * x;
            }
        }
        out
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        let s: Vec<Int> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[Int]) -> Vec<Int> {
        let s: Vec<Int> = a.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, a: &[Int], k: &Int) -> Vec<Int> {
        let s: Vec<Int> = a.iter().map(|x| x * k).collect();
        self.reduce(&s)
    }

    pub fn is_zero_element(&self, a: &[Int]) -> bool {
        self.reduce(a).iter().all(|x| x.is_zero())
    }

    /// Order of an element.
    pub fn element_order(&self, a: &[Int]) -> Int {
        let a = self.reduce(a);
        a.iter().zip(&self.invariant_factors).fold(BigInt::one(), |acc, (x, d)| {
            let o = d / x.gcd(d);
            acc.lcm(&o)
        })
    }

    /// The lattice `{x ∈ ℤᵗ}` of coordinate vectors of the subgroup generated
    /// by `elements`, together with the relations `dᵢ eᵢ`.
    pub fn subgroup_lattice(&self, elements: &[Vec<Int>]) -> SubLattice {
        let t = self.ngens();
        let mut rows: Vec<Vec<Int>> = elements.iter().map(|e| self.reduce(e)).collect();
        rows.extend(self.relations());
        SubLattice::from_vectors(t, &rows)
    }

    fn relations(&self) -> Vec<Vec<Int>> {
        let t = self.ngens();
        (0..t)
            .map(|i| {
                let mut r = vec![BigInt::zero(); t];
                r[i] = self.invariant_factors[i].clone();
                r
            })
            .collect()
    }

    /// The trivial subgroup as a coordinate lattice.
    pub fn zero_subgroup(&self) -> SubLattice {
        self.subgroup_lattice(&[])
    }

    /// The order of a subgroup given by its coordinate lattice.
    pub fn subgroup_order(&self, sub: &SubLattice) -> Int {
        let full = SubLattice::full(self.ngens());
        let index = sub.index_in(&full).expect("subgroup lattices contain the relations");
        self.order() / index
    }

    /// Every element, for small groups. Intended for tests and oracles.
    pub fn elements(&self) -> Vec<Vec<Int>> {
        let mut out = vec![Vec::new()];
        for d in &self.invariant_factors {
            let mut next = Vec::new();
            for e in &out {
                let mut i = BigInt::zero();
                while &i < d {
                    let mut f = e.clone();
                    f.push(i.clone());
                    next.push(f);
                    i += 1;
                }
            }
            out = next;
        }
        out
    }

    /// The canonical characters dual to the generators, as functions on the
    /// whole ambient lattice: `χⱼ(v) = (coordinate j of v) / dⱼ`.
    ///
    /// Requires the numerator to be saturated; returns one row of rational
    /// values (as `(numerator, dⱼ)` pairs per ambient basis vector) per generator.
    pub fn dual_basis_on_ambient(&self) -> Option<Vec<Vec<(Int, Int)>>> {
        let r = self.numerator.integral_right_inverse()?;
        let m = &r * &self.coord_map; // n × t
        Some(
            (0..self.ngens())
                .map(|j| {
                    (0..self.ambient_rank())
                        .map(|k| (m[(k, j)].mod_floor(&self.invariant_factors[j]), self.invariant_factors[j].clone()))
                        .collect()
                })
                .collect(),
        )
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("ℤ/{d}")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// A homomorphism of finite abelian groups, stored by the images of the
/// source generators in target coordinates.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: FinAbGroup,
    pub target: FinAbGroup,
    images: Vec<Vec<Int>>,
}

impl GroupHom {
    /// Checks that `dᵢ · image(gᵢ) = 0` for every generator.
    pub fn new(source: FinAbGroup, target: FinAbGroup, images: Vec<Vec<Int>>) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::DimensionMismatch("one image per source generator".into()));
        }
        let images: Vec<Vec<Int>> = images.iter().map(|i| target.reduce(i)).collect();
        for (img, d) in images.iter().zip(source.invariant_factors()) {
            if !target.is_zero_element(&target.scale(img, d)) {
                return Err(Error::InvalidInput("homomorphism is not well defined on the relations".into()));
            }
        }
        Ok(GroupHom { source, target, images })
    }

    /// The homomorphism induced by a lattice map sending numerator lifts of
    /// the source to numerator vectors of the target.
    pub fn induced<F>(source: &FinAbGroup, target: &FinAbGroup, f: F) -> Result<Self>
    where
        F: Fn(&[Int]) -> Result<Vec<Int>>,
    {
        let images = source
            .generator_lifts()
            .iter()
            .map(|g| f(g).and_then(|v| target.class_of(&v)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source.clone(), target.clone(), images)
    }

    pub fn images(&self) -> &[Vec<Int>] {
        &self.images
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        let mut out = self.target.zero();
        for (c, img) in x.iter().zip(&self.images) {
            for (o, v) in out.iter_mut().zip(img) {
                *o += c * v;
            }
        }
        self.target.reduce(&out)
    }

    /// Coordinate lattice of the kernel (contains the source relations).
    pub fn kernel(&self) -> SubLattice {
        let s = self.source.ngens();
        let t = self.target.ngens();
        if t == 0 {
            return SubLattice::full(s);
        }
        if s == 0 {
            return SubLattice::zero(0);
        }
        let f = IntMatrix::from_columns(t, &self.images);
        let rel = self.target.zero_subgroup();
        SubLattice::preimage(&f, &rel)
    }

    /// Coordinate lattice of the image in the target.
    pub fn image(&self) -> SubLattice {
        self.target.subgroup_lattice(&self.images)
    }

    pub fn kernel_order(&self) -> Int {
        self.source.subgroup_order(&self.kernel())
    }

    pub fn image_order(&self) -> Int {
        self.target.subgroup_order(&self.image())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_order().is_one()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_order() == self.target.order()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|i| self.target.is_zero_element(i))
    }

    pub fn compose(&self, then: &GroupHom) -> Result<GroupHom> {
        let images = self.images.iter().map(|i| then.apply(i)).collect();
        GroupHom::new(self.source.clone(), then.target.clone(), images)
    }
}

/// Exactness of `A --f--> B --g--> C` at `B`: `ker g = im f`.
pub fn exact_at(f: &GroupHom, g: &GroupHom) -> bool {
    f.image() == g.kernel()
}
