//! Root data with a Galois action, Weyl groups, the rigid cohomology group of
//! a reductive group with finite central subgroup, the dual-center component
//! group and the pairing between them.
//!
//! A datum carries one distinguished maximal torus `S`, whose cocharacter
//! lattice `Y` is the [`GaloisLattice`] of the datum. Roots are row vectors in
//! `X = Hom(Y, ℤ)` and `Γ` acts on `X` by `A(σ⁻¹)ᵀ`. Twisted tori are modelled
//! by changing the action, e.g. to a Weyl element times a diagram automorphism.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::finabgroup::{FinAbGroup, GroupHom};
use crate::galois::{invariants_sublattice, norm_matrix, GaloisLattice};
use crate::group::FiniteGroup;
use crate::lattice::SubLattice;
use crate::normal_form::row_lattice_basis;
use crate::qmodz::{QModZ, TorsionCharacter};
use crate::rational::{self, conjugate, to_integral};
use crate::tori::{rigid_h1_torus, IsogenyPair};
use crate::{Int, IntMatrix};

/// Default bound on the order of a Weyl group.
pub const DEFAULT_MAX_WEYL: usize = 1152;

/// Environment variable overriding [`DEFAULT_MAX_WEYL`].
pub const MAX_WEYL_ENV: &str = "RIGIDCOH_MAX_WEYL";

fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Which lattice a datum built from a Cartan matrix uses for `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    /// `Y` is the coroot lattice.
    SimplyConnected,
    /// `Y` is the coweight lattice.
    Adjoint,
}

/// Cartan matrix `C[i][j] = ⟨αᵢ, αⱼ^∨⟩` of type `A`, `B`, `C` or `D`.
pub fn cartan_matrix(family: char, rank: usize) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::InvalidInput(format!("no Cartan type {family}{rank}"));
    let min = match family {
        'A' => 1,
        'B' | 'C' => 2,
        'D' => 4,
        _ => return Err(bad()),
    };
    if rank < min {
        return Err(bad());
    }
    let mut c = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        c[i][i] = 2;
    }
    let chain = if family == 'D' { rank - 1 } else { rank };
    for i in 1..chain {
        c[i - 1][i] = -1;
        c[i][i - 1] = -1;
    }
    match family {
        'B' => c[rank - 2][rank - 1] = -2,
        'C' => c[rank - 1][rank - 2] = -2,
        'D' => {
            c[rank - 3][rank - 1] = -1;
            c[rank - 1][rank - 3] = -1;
        }
        _ => {}
    }
    Ok(c)
}

/// A root datum `(X, R, Y, R^∨)` with a base and an action of a finite group
/// on `Y`.
#[derive(Clone, Debug)]
pub struct RootDatum {
    rank: usize,
    roots: Vec<Vec<Int>>,
    coroots: Vec<Vec<Int>>,
    simple: Vec<usize>,
    positive: Vec<bool>,
    galois: GaloisLattice,
    based: bool,
    weyl: OnceLock<Result<Arc<Vec<IntMatrix>>>>,
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.roots == other.roots
            && self.coroots == other.coroots
            && self.simple == other.simple
            && self.galois == other.galois
    }
}

impl Eq for RootDatum {}

impl RootDatum {
    /// Validates the root datum axioms, the base and the compatibility of the
    /// action. A base need not be preserved by `Γ`; see [`RootDatum::is_based`].
    pub fn new(roots: Vec<Vec<Int>>, coroots: Vec<Vec<Int>>, simple: Vec<usize>, galois: GaloisLattice) -> Result<Self> {
        let rank = galois.rank();
        if roots.len() != coroots.len() {
            return Err(Error::DimensionMismatch("roots and coroots differ in number".into()));
        }
        if roots.iter().chain(&coroots).any(|v| v.len() != rank) {
            return Err(Error::DimensionMismatch(format!("roots and coroots must have length {rank}")));
        }
        let index: HashMap<&[Int], usize> = roots.iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();
        if index.len() != roots.len() {
            return Err(Error::InvalidInput("repeated root".into()));
        }
        let two = BigInt::from(2);
        for (a, c) in roots.iter().zip(&coroots) {
            if dot(a, c) != two {
                return Err(Error::InvalidInput("⟨α, α^∨⟩ ≠ 2".into()));
            }
        }
        for (a, ac) in roots.iter().zip(&coroots) {
            for (b, bc) in roots.iter().zip(&coroots) {
                let k = dot(b, ac);
                let sb: Vec<Int> = b.iter().zip(a).map(|(x, y)| x - &k * y).collect();
                let kc = dot(a, bc);
                let sbc: Vec<Int> = bc.iter().zip(ac).map(|(x, y)| x - &kc * y).collect();
                match index.get(sb.as_slice()) {
                    Some(&j) if coroots[j] == sbc => {}
                    _ => return Err(Error::InvalidInput("reflections do not permute the roots and coroots".into())),
                }
            }
        }
        let group = galois.group();
        for s in 0..group.order() {
            let a = galois.action(s);
            let a_inv = galois.action(group.inv(s));
            for (r, c) in roots.iter().zip(&coroots) {
                let sr = a_inv.vec_mul(r);
                let sc = a.mul_vec(c);
                match index.get(sr.as_slice()) {
                    Some(&j) if coroots[j] == sc => {}
                    _ => return Err(Error::NotEquivariant("Γ does not permute the roots and coroots".into())),
                }
            }
        }
        if simple.iter().any(|&i| i >= roots.len()) {
            return Err(Error::InvalidInput("simple root index out of range".into()));
        }
        let positive = positivity(&roots, &simple)?;
        let simple_set: HashSet<&[Int]> = simple.iter().map(|&i| roots[i].as_slice()).collect();
        let based = (0..group.order()).all(|s| {
            let a_inv = galois.action(group.inv(s));
            simple.iter().all(|&i| simple_set.contains(a_inv.vec_mul(&roots[i]).as_slice()))
        });
        Ok(RootDatum { rank, roots, coroots, simple, positive, galois, based, weyl: OnceLock::new() })
    }

    /// The split datum of a Cartan matrix, with the trivial group acting.
    ///
    /// Roots are listed positive first by height, then their negatives in the
    /// same order; the simple roots come first.
    pub fn from_cartan(cartan: &[Vec<i64>], form: Form) -> Result<Self> {
        let r = cartan.len();
        if cartan.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch("Cartan matrix must be square".into()));
        }
        let c = |i: usize, j: usize| BigInt::from(cartan[i][j]);
        // positive roots in simple-root coordinates, coroots in simple-coroot coordinates
        let unit = |i: usize| -> Vec<Int> { (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect() };
        let mut seen: HashMap<Vec<Int>, Vec<Int>> = HashMap::new();
        let mut queue: VecDeque<(Vec<Int>, Vec<Int>)> = VecDeque::new();
        for i in 0..r {
            seen.insert(unit(i), unit(i));
            queue.push_back((unit(i), unit(i)));
        }
        while let Some((rc, cc)) = queue.pop_front() {
            for i in 0..r {
                let k: Int = (0..r).map(|j| &rc[j] * c(j, i)).sum();
                let kc: Int = (0..r).map(|j| &cc[j] * c(i, j)).sum();
                let mut nr = rc.clone();
                nr[i] -= &k;
                let mut nc = cc.clone();
                nc[i] -= &kc;
                if nr.iter().all(|x| !x.is_negative()) && !seen.contains_key(&nr) {
                    if seen.len() > 4096 {
                        return Err(Error::InvalidInput("Cartan matrix is not of finite type".into()));
                    }
                    seen.insert(nr.clone(), nc.clone());
                    queue.push_back((nr, nc));
                }
            }
        }
        let mut pos: Vec<(Vec<Int>, Vec<Int>)> = seen.into_iter().collect();
        pos.sort_by(|a, b| {
            let ha: Int = a.0.iter().sum();
            let hb: Int = b.0.iter().sum();
            ha.cmp(&hb).then_with(|| b.0.cmp(&a.0))
        });
        let cm = IntMatrix::from_rows(r, (0..r).map(|i| (0..r).map(|j| c(i, j)).collect()).collect());
        let (to_x, to_y): (Box<dyn Fn(&[Int]) -> Vec<Int>>, Box<dyn Fn(&[Int]) -> Vec<Int>>) = match form {
            Form::SimplyConnected => (Box::new(|v| cm.vec_mul(v)), Box::new(|v| v.to_vec())),
            Form::Adjoint => (Box::new(|v| v.to_vec()), Box::new(|v| cm.mul_vec(v))),
        };
        let mut roots: Vec<Vec<Int>> = pos.iter().map(|(a, _)| to_x(a)).collect();
        let mut coroots: Vec<Vec<Int>> = pos.iter().map(|(_, b)| to_y(b)).collect();
        let neg = |v: &Vec<Int>| v.iter().map(|x| -x).collect::<Vec<Int>>();
        roots.extend(roots.clone().iter().map(neg));
        coroots.extend(coroots.clone().iter().map(neg));
        let galois = GaloisLattice::trivial(Arc::new(FiniteGroup::trivial()), r);
        Self::new(roots, coroots, (0..r).collect(), galois)
    }

    /// A torus: no roots.
    pub fn torus(galois: GaloisLattice) -> Self {
        Self::new(Vec::new(), Vec::new(), Vec::new(), galois).expect("a torus datum has nothing to check")
    }

    /// `SL_n` (`Form::SimplyConnected`) or `PGL_n` (`Form::Adjoint`), split.
    pub fn type_a(n: usize, form: Form) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("type A needs n ≥ 2".into()));
        }
        Self::from_cartan(&cartan_matrix('A', n - 1)?, form)
    }

    /// The same roots with a different action on `Y`.
    pub fn with_galois(&self, galois: GaloisLattice) -> Result<Self> {
        if galois.rank() != self.rank {
            return Err(Error::DimensionMismatch("action has the wrong rank".into()));
        }
        Self::new(self.roots.clone(), self.coroots.clone(), self.simple.clone(), galois)
    }

    /// `ℤ/m` acting on `Y` through powers of `generator`.
    pub fn with_cyclic_action(&self, m: usize, generator: &IntMatrix) -> Result<Self> {
        self.with_galois(GaloisLattice::cyclic(m, generator)?)
    }

    /// The automorphism of `Y` sending `α_i^∨` to `α_{π(i)}^∨` for a
    /// permutation `π` of the simple roots. Requires a semisimple datum.
    pub fn diagram_automorphism(&self, perm: &[usize]) -> Result<IntMatrix> {
        let s = self.simple.len();
        if perm.len() != s || (0..s).any(|i| !perm.contains(&i)) {
            return Err(Error::InvalidInput("not a permutation of the simple roots".into()));
        }
        if s != self.rank {
            return Err(Error::InvalidInput("diagram automorphisms need a semisimple datum".into()));
        }
        let cols: Vec<Vec<Int>> = self.simple.iter().map(|&i| self.coroots[i].clone()).collect();
        let c = IntMatrix::from_columns(self.rank, &cols);
        // A·C = C·P with P the permutation matrix of π
        let mut perm_matrix = IntMatrix::zeros(s, s);
        for (j, &p) in perm.iter().enumerate() {
            perm_matrix[(p, j)] = BigInt::one();
        }
        let a = conjugate(&c, &perm_matrix).ok_or_else(|| Error::InvalidInput("permutation is not integral on Y".into()))?;
        for i in 0..s {
            for j in 0..s {
                let a_ij = dot(&self.roots[self.simple[i]], &self.coroots[self.simple[j]]);
                let b_ij = dot(&self.roots[self.simple[perm[i]]], &self.coroots[self.simple[perm[j]]]);
                if a_ij != b_ij {
                    return Err(Error::InvalidInput("permutation is not a Dynkin diagram symmetry".into()));
                }
            }
        }
        Ok(a)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Vec<Int>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<Int>] {
        &self.coroots
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.positive[i]
    }

    pub fn cochar_lattice(&self) -> &GaloisLattice {
        &self.galois
    }

    pub fn char_lattice(&self) -> GaloisLattice {
        self.galois.dual()
    }

    /// Whether `Γ` preserves the chosen base.
    pub fn is_based(&self) -> bool {
        self.based
    }

    /// Whether the roots span `X ⊗ ℚ`.
    pub fn is_semisimple(&self) -> bool {
        rational::rank(&IntMatrix::from_rows(self.rank, self.roots.clone())) == self.rank
    }

    /// Whether the coroots span `Y`.
    pub fn is_simply_connected(&self) -> bool {
        coroot_sublattice(self) == SubLattice::full(self.rank)
    }

    /// `s_α` on `Y`: `y ↦ y − ⟨α, y⟩·α^∨`.
    pub fn reflection(&self, i: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(self.rank);
        for a in 0..self.rank {
            for b in 0..self.rank {
                m[(a, b)] -= &self.coroots[i][a] * &self.roots[i][b];
            }
        }
        m
    }

    /// Product of the simple reflections in order.
    pub fn coxeter_element(&self) -> IntMatrix {
        self.simple.iter().fold(IntMatrix::identity(self.rank), |acc, &i| &acc * &self.reflection(i))
    }

    /// Subsystem on the listed roots, with the positivity inherited from this
    /// datum and the inherited action. Fails with `NotGaloisStable` when `Γ`
    /// moves the selection.
    pub fn subsystem(&self, keep: &[usize]) -> Result<RootDatum> {
        let keep: Vec<usize> = {
            let mut k = keep.to_vec();
            k.sort_unstable();
            k.dedup();
            k
        };
        let chosen: HashSet<&[Int]> = keep.iter().map(|&i| self.coroots[i].as_slice()).collect();
        let group = self.galois.group();
        for s in 0..group.order() {
            let a = self.galois.action(s);
            if keep.iter().any(|&i| !chosen.contains(a.mul_vec(&self.coroots[i]).as_slice())) {
                return Err(Error::NotGaloisStable);
            }
        }
        let roots: Vec<Vec<Int>> = keep.iter().map(|&i| self.roots[i].clone()).collect();
        let coroots: Vec<Vec<Int>> = keep.iter().map(|&i| self.coroots[i].clone()).collect();
        let pos: Vec<usize> = (0..keep.len()).filter(|&k| self.positive[keep[k]]).collect();
        let pos_set: HashSet<&[Int]> = pos.iter().map(|&k| coroots[k].as_slice()).collect();
        // indecomposable positive coroots form the base of the closed coroot subsystem
        let simple: Vec<usize> = pos
            .iter()
            .copied()
            .filter(|&k| {
                !pos.iter().any(|&l| {
                    let diff: Vec<Int> = coroots[k].iter().zip(&coroots[l]).map(|(x, y)| x - y).collect();
                    l != k && pos_set.contains(diff.as_slice())
                })
            })
            .collect();
        RootDatum::new(roots, coroots, simple, self.galois.clone())
    }
}

/// Positivity of each root relative to the simple roots; fails unless every
/// root is an integral combination of simple roots with coefficients of one sign.
fn positivity(roots: &[Vec<Int>], simple: &[usize]) -> Result<Vec<bool>> {
    if roots.is_empty() {
        return Ok(Vec::new());
    }
    let rank = roots[0].len();
    let cols: Vec<Vec<Int>> = simple.iter().map(|&i| roots[i].clone()).collect();
    let s = IntMatrix::from_columns(rank, &cols);
    if rational::rank(&s) != simple.len() {
        return Err(Error::InvalidInput("simple roots are linearly dependent".into()));
    }
    let not_base = || Error::InvalidInput("simple roots do not form a base".into());
    roots
        .iter()
        .map(|r| {
            let c = rational::solve(&s, r).ok_or_else(not_base)?;
            let c = to_integral(&c).ok_or_else(not_base)?;
            if c.iter().all(|x| !x.is_negative()) {
                Ok(true)
            } else if c.iter().all(|x| !x.is_positive()) {
                Ok(false)
            } else {
                Err(not_base())
            }
        })
        .collect()
}

fn max_weyl() -> usize {
    std::env::var(MAX_WEYL_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_WEYL)
}

/// `ℤR^∨ ⊆ Y`.
pub fn coroot_sublattice(rd: &RootDatum) -> SubLattice {
    SubLattice::from_vectors(rd.rank, &rd.coroots)
}

/// The Weyl group as matrices on `Y`, generated by the simple reflections,
/// with the bound from the environment. Computed once per datum.
pub fn weyl_group(rd: &RootDatum) -> Result<&[IntMatrix]> {
    match rd.weyl.get_or_init(|| weyl_group_bounded(rd, max_weyl()).map(Arc::new)) {
        Ok(v) => Ok(v.as_slice()),
        Err(e) => Err(e.clone()),
    }
}

/// Closure of the simple reflections under multiplication, failing with
/// `TooLarge` once it exceeds `bound` elements.
pub fn weyl_group_bounded(rd: &RootDatum, bound: usize) -> Result<Vec<IntMatrix>> {
    let gens: Vec<IntMatrix> = rd.simple.iter().map(|&i| rd.reflection(i)).collect();
    let id = IntMatrix::identity(rd.rank);
    let mut seen: HashSet<Vec<Int>> = HashSet::from([id.entries().to_vec()]);
    let mut elems = vec![id];
    let mut next = 0;
    while next < elems.len() {
        let x = elems[next].clone();
        next += 1;
        for g in &gens {
            let y = &x * g;
            if seen.insert(y.entries().to_vec()) {
                if elems.len() >= bound {
                    return Err(Error::TooLarge { bound });
                }
                elems.push(y);
            }
        }
    }
    Ok(elems)
}

/// `rank(Yᴳ) = rank(X_*(Z(G)°)ᴳ)`: the torus is anisotropic modulo the
/// connected center.
pub fn is_elliptic(rd: &RootDatum) -> bool {
    let inv = invariants_sublattice(&rd.galois);
    if rd.roots.is_empty() {
        return true;
    }
    let center = SubLattice::kernel_of(&IntMatrix::from_rows(rd.rank, rd.roots.clone()));
    inv.rank() == inv.intersection(&center).rank()
}

/// Swaps `X ↔ Y` and roots with coroots; `Γ` acts on the new `Y` by the
/// contragredient action.
pub fn dual_root_datum(rd: &RootDatum) -> RootDatum {
    RootDatum::new(rd.coroots.clone(), rd.roots.clone(), rd.simple.clone(), rd.galois.dual())
        .expect("the dual of a root datum is a root datum")
}

/// A root datum together with a finite central subgroup `Z`, encoded by the
/// isogeny pair `Y ↪ Ȳ = X_*(S/Z)`.
#[derive(Clone, Debug)]
pub struct ReductivePair {
    datum: RootDatum,
    pair: IsogenyPair,
}

impl ReductivePair {
    /// Fails with `InvalidInput` unless every root is integral on `Ȳ`.
    pub fn new(datum: RootDatum, pair: IsogenyPair) -> Result<Self> {
        if pair.y() != datum.cochar_lattice() {
            return Err(Error::InvalidInput("isogeny pair is not over the cocharacter lattice of the datum".into()));
        }
        let mt = pair.matrix().transpose();
        for r in &datum.roots {
            let v = rational::solve(&mt, r).expect("inclusion is nonsingular");
            if to_integral(&v).is_none() {
                return Err(Error::InvalidInput("Z is not central: a root is not integral on Ȳ".into()));
            }
        }
        Ok(ReductivePair { datum, pair })
    }

    /// `Z = 1`.
    pub fn trivial_center(datum: RootDatum) -> Self {
        let pair = IsogenyPair::trivial(datum.cochar_lattice());
        Self::new(datum, pair).expect("roots are integral on Y")
    }

    /// `Z = Z(G)` for semisimple `G`: `Ȳ` is the dual of the root lattice.
    pub fn full_center(datum: RootDatum) -> Result<Self> {
        if !datum.is_semisimple() {
            return Err(Error::InvalidInput("full center needs a semisimple datum".into()));
        }
        let b = row_lattice_basis(&IntMatrix::from_rows(datum.rank, datum.roots.clone()));
        let pair = IsogenyPair::from_inclusion_matrix(datum.cochar_lattice(), &b)?;
        Self::new(datum, pair)
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn isogeny_pair(&self) -> &IsogenyPair {
        &self.pair
    }

    /// `Y_sc = ℤR^∨` inside `Ȳ`.
    pub fn sc_in_ybar(&self) -> SubLattice {
        coroot_sublattice(&self.datum).map(self.pair.matrix())
    }

    /// `I·Y + Y_sc` inside `Ȳ`.
    pub fn plus_denominator(&self) -> SubLattice {
        self.pair.iy_in_ybar().sum(&self.sc_in_ybar())
    }

    /// `{λ̄ ∈ Ȳ : N·λ̄ ∈ Y_sc}`.
    pub fn rigid_numerator(&self) -> SubLattice {
        SubLattice::preimage(&norm_matrix(self.pair.ybar()), &self.sc_in_ybar())
    }
}

/// `(Ȳ/Y_sc)ᴺ / I·(Y/Y_sc)`, with classes of `Ȳ`-representatives.
pub fn rigid_h1_reductive(pair: &ReductivePair) -> FinAbGroup {
    FinAbGroup::subquotient(&pair.rigid_numerator(), &pair.plus_denominator())
        .expect("I·Y + Y_sc has full rank in the norm preimage of Y_sc")
}

/// The torsion of `Ȳ/(I·Y + Y_sc)`.
pub fn component_group_dual_center(pair: &ReductivePair) -> FinAbGroup {
    let d = pair.plus_denominator();
    FinAbGroup::subquotient(&d.saturation(), &d).expect("a lattice has full rank in its saturation")
}

/// The map `Ȳᴺ/IY → rigid_h1_reductive` from the torus to the group.
pub fn torus_to_reductive(pair: &ReductivePair) -> GroupHom {
    GroupHom::induced(&rigid_h1_torus(&pair.pair), &rigid_h1_reductive(pair), |v| Ok(v.to_vec()))
        .expect("Ȳᴺ and IY lie in the reductive numerator and denominator")
}

fn check_plus(pair: &ReductivePair, chi: &TorsionCharacter) -> Result<()> {
    if chi.rank() != pair.pair.ybar().rank() {
        return Err(Error::DimensionMismatch("character rank differs from rank of Ȳ".into()));
    }
    if !chi.vanishes_on(&pair.pair.iy_in_ybar()) {
        return Err(Error::CharacterNotPlus("I·Y".into()));
    }
    if !chi.vanishes_on(&pair.sc_in_ybar()) {
        return Err(Error::CharacterNotPlus("Y_sc".into()));
    }
    Ok(())
}

/// `⟨[λ̄], χ⟩ = χ(λ̄)` for `χ` killing `I·Y + Y_sc`.
pub fn tn_pairing(pair: &ReductivePair, representative: &[Int], chi: &TorsionCharacter) -> Result<QModZ> {
    check_plus(pair, chi)?;
    if !pair.rigid_numerator().contains(representative) {
        return Err(Error::RepresentativeInvalid("N·λ̄ does not lie in Y_sc".into()));
    }
    Ok(chi.eval(representative))
}

/// The pairing matrix between the generators of the rigid group and the
/// characters dual to the generators of the component group.
#[derive(Clone, Debug)]
pub struct PairingReport {
    pub rigid: FinAbGroup,
    pub component: FinAbGroup,
    pub characters: Vec<TorsionCharacter>,
    pub matrix: Vec<Vec<QModZ>>,
    pub injective: bool,
    pub orders_equal: bool,
}

impl PairingReport {
    pub fn is_perfect(&self) -> bool {
        self.injective && self.orders_equal
    }
}

/// The characters of `Ȳ` killing `I·Y + Y_sc` dual to the generators of the
/// component group.
pub fn component_characters(pair: &ReductivePair) -> Vec<TorsionCharacter> {
    let comp = component_group_dual_center(pair);
    comp.dual_basis_on_ambient()
        .expect("a saturated lattice has an integral right inverse")
        .into_iter()
        .map(|row| TorsionCharacter::new(row.into_iter().map(|(a, d)| QModZ::new(a, d)).collect()))
        .collect()
}

pub fn pairing_perfectness(pair: &ReductivePair) -> PairingReport {
    let rigid = rigid_h1_reductive(pair);
    let component = component_group_dual_center(pair);
    let characters = component_characters(pair);
    let matrix: Vec<Vec<QModZ>> =
        rigid.generator_lifts().iter().map(|g| characters.iter().map(|chi| chi.eval(g)).collect()).collect();
    let dual = FinAbGroup::from_orders(component.invariant_factors());
    let images: Vec<Vec<Int>> = matrix
        .iter()
        .map(|row| row.iter().zip(component.invariant_factors()).map(|(v, d)| v.numerator() * d / v.denominator()).collect())
        .collect();
    let hom = GroupHom::new(rigid.clone(), dual, images).expect("pairing values respect the relations");
    PairingReport {
        injective: hom.is_injective(),
        orders_equal: rigid.order() == component.order(),
        rigid,
        component,
        characters,
        matrix,
    }
}

/// Result of checking `w·λ̄ − λ̄ ∈ ℤR^∨` over the Weyl group and a basis of `Ȳ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylTrivialityReport {
    pub weyl_order: usize,
    pub checked: usize,
    /// `(index into weyl_group, basis vector of Ȳ)` pairs that fail.
    pub failures: Vec<(usize, usize)>,
}

impl WeylTrivialityReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `w·λ̄ − λ̄` for every basis vector `λ̄` of `Ȳ`, as `Ȳ`-columns of `M(w−1)M⁻¹`.
/// `None` if `w` does not preserve `Ȳ`.
pub fn weyl_defect_on_ybar(pair: &ReductivePair, w: &IntMatrix) -> Option<IntMatrix> {
    let r = pair.datum.rank;
    conjugate(pair.pair.matrix(), &(w - &IntMatrix::identity(r)))
}

pub fn weyl_quotient_triviality(pair: &ReductivePair) -> Result<WeylTrivialityReport> {
    let w = weyl_group(&pair.datum)?;
    let sc = pair.sc_in_ybar();
    let r = pair.datum.rank;
    let mut failures = Vec::new();
    for (k, x) in w.iter().enumerate() {
        match weyl_defect_on_ybar(pair, x) {
            Some(d) => failures.extend((0..r).filter(|&j| !sc.contains(&d.column(j))).map(|j| (k, j))),
            None => failures.extend((0..r).map(|j| (k, j))),
        }
    }
    Ok(WeylTrivialityReport { weyl_order: w.len(), checked: w.len() * r, failures })
}

/// How the Galois group acts in a catalogue entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Twist {
    /// `ℤ/e` acting trivially, with `e` the exponent of the coweights modulo
    /// the coroots.
    Split,
    /// A diagram automorphism generating `ℤ/2` or `ℤ/3`.
    Diagram,
    /// A Coxeter element generating `ℤ/h`.
    Elliptic,
}

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub name: String,
    pub twist: Twist,
    pub full_center: bool,
    pub pair: ReductivePair,
}

fn order_of(m: &IntMatrix) -> usize {
    let id = IntMatrix::identity(m.nrows());
    let mut p = m.clone();
    let mut k = 1;
    while p != id {
        p = &p * m;
        k += 1;
        assert!(k <= 64, "matrix of infinite order");
    }
    k
}

/// One family with its twists and both centers.
fn family(name: &str, split: &RootDatum, diagram: Option<&[usize]>, out: &mut Vec<CatalogueEntry>) -> Result<()> {
    let mut twists = Vec::new();
    // the split level must kill the coweight lattice modulo the coroot lattice
    let e = component_group_dual_center(&ReductivePair::full_center(split.clone())?).exponent();
    let e: usize = e.try_into().expect("small center");
    let split_level = split.with_galois(GaloisLattice::trivial(Arc::new(FiniteGroup::cyclic(e)), split.rank()))?;
    twists.push((Twist::Split, split_level));
    if let Some(perm) = diagram {
        let a = split.diagram_automorphism(perm)?;
        twists.push((Twist::Diagram, split.with_cyclic_action(order_of(&a), &a)?));
    }
    let c = split.coxeter_element();
    twists.push((Twist::Elliptic, split.with_cyclic_action(order_of(&c), &c)?));
    for (twist, rd) in twists {
        for full_center in [false, true] {
            let pair =
                if full_center { ReductivePair::full_center(rd.clone())? } else { ReductivePair::trivial_center(rd.clone()) };
            let label = match twist {
                Twist::Split => "split",
                Twist::Diagram => "outer",
                Twist::Elliptic => "elliptic",
            };
            let z = if full_center { "Z(G)" } else { "1" };
            out.push(CatalogueEntry { name: format!("[{z} → {name}] {label}"), twist, full_center, pair });
        }
    }
    Ok(())
}

/// `SL₂, SL₃, SL₄, PGL₂, PGL₃, Sp₄, Spin₈`, each split, with its diagram
/// twist where one exists (outer `A₂`, `A₃`, triality on `D₄`) and with a
/// Coxeter-elliptic twist, for `Z = 1` and `Z = Z(G)`.
pub fn catalogue() -> Vec<CatalogueEntry> {
    let mut out = Vec::new();
    let build = |out: &mut Vec<CatalogueEntry>| -> Result<()> {
        family("SL2", &RootDatum::type_a(2, Form::SimplyConnected)?, None, out)?;
        family("SL3", &RootDatum::type_a(3, Form::SimplyConnected)?, Some(&[1, 0]), out)?;
        family("SL4", &RootDatum::type_a(4, Form::SimplyConnected)?, Some(&[2, 1, 0]), out)?;
        family("PGL2", &RootDatum::type_a(2, Form::Adjoint)?, None, out)?;
        family("PGL3", &RootDatum::type_a(3, Form::Adjoint)?, Some(&[1, 0]), out)?;
        family("Sp4", &RootDatum::from_cartan(&cartan_matrix('C', 2)?, Form::SimplyConnected)?, None, out)?;
        family("Spin8", &RootDatum::from_cartan(&cartan_matrix('D', 4)?, Form::SimplyConnected)?, Some(&[2, 1, 3, 0]), out)?;
        Ok(())
    };
    build(&mut out).expect("catalogue data are valid");
    out
}
