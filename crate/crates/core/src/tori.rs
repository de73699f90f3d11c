//! Isogeny pairs `Y ↪ Ȳ` and the rigid cohomology group `Ȳᴺ / I·Y` of a
//! torus with a finite central subgroup, together with the exact row
//!
//! ```text
//! 0 → Ĥ⁻¹(Y) → Ȳᴺ/IY → (Ȳ/Y)ᴺ → Ĥ⁰(Y)
//! ```
//!
//! `Ȳ` is always presented in its own integral basis; the inclusion matrix
//! `M` sends `Y`-coordinates to `Ȳ`-coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::finabgroup::{exact_at, FinAbGroup, GroupHom};
use crate::galois::{
    augmentation_sublattice, norm_matrix, tate_h0, tate_h_neg1, EquivariantMap, FiniteGaloisModule, GaloisLattice,
};
use crate::lattice::{solve_integer, SubLattice};
use crate::normal_form::row_lattice_basis;
use crate::rational::conjugate;
use crate::{Int, IntMatrix};

/// An equivariant inclusion `Y ↪ Ȳ` of finite index.
#[derive(Clone, Debug)]
pub struct IsogenyPair {
    inclusion: EquivariantMap,
    cokernel: FiniteGaloisModule,
}

impl IsogenyPair {
    pub fn new(inclusion: EquivariantMap) -> Result<Self> {
        let m = inclusion.matrix();
        if !m.is_square() || m.determinant().is_zero() {
            return Err(Error::InvalidInput("inclusion matrix must be square and nonsingular".into()));
        }
        let cokernel = FiniteGaloisModule::new(inclusion.clone())?;
        Ok(IsogenyPair { inclusion, cokernel })
    }

    /// `Z = 1`: `Ȳ = Y`.
    pub fn trivial(y: &GaloisLattice) -> Self {
        Self::new(EquivariantMap::identity(y)).expect("identity inclusion")
    }

    /// `Ȳ = Y + Σ ℤ·gᵢ` for rational vectors `gᵢ` in `Y ⊗ ℚ`.
    ///
    /// Fails with `NotEquivariant` if the overlattice is not `Γ`-stable.
    pub fn from_overlattice(y: &GaloisLattice, generators: &[Vec<BigRational>]) -> Result<Self> {
        let m = overlattice_inclusion(y.rank(), generators)?;
        Self::from_inclusion_matrix(y, &m)
    }

    /// `Ȳ` determined by `M`; its action is `M·A(σ)·M⁻¹`.
    pub fn from_inclusion_matrix(y: &GaloisLattice, m: &IntMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() != y.rank() {
            return Err(Error::DimensionMismatch("inclusion matrix must be square of the lattice rank".into()));
        }
        let mut action = Vec::with_capacity(y.group().order());
        for a in y.actions() {
            action.push(conjugate(m, a).ok_or_else(|| Error::NotEquivariant("overlattice is not Γ-stable".into()))?);
        }
        let ybar = GaloisLattice::new(y.group_arc().clone(), y.rank(), action)?;
        Self::new(EquivariantMap::new(y.clone(), ybar, m.clone())?)
    }

    pub fn y(&self) -> &GaloisLattice {
        self.inclusion.source()
    }

    pub fn ybar(&self) -> &GaloisLattice {
        self.inclusion.target()
    }

    pub fn inclusion(&self) -> &EquivariantMap {
        &self.inclusion
    }

    pub fn matrix(&self) -> &IntMatrix {
        self.inclusion.matrix()
    }

    /// `Ȳ/Y`, which represents `X*(Z)` up to duality.
    pub fn cokernel(&self) -> &FiniteGaloisModule {
        &self.cokernel
    }

    pub fn index(&self) -> Int {
        self.matrix().determinant().abs()
    }

    /// `Y` as a sublattice of `Ȳ`.
    pub fn y_in_ybar(&self) -> SubLattice {
        SubLattice::image_of(self.matrix())
    }

    /// `I·Y` as a sublattice of `Ȳ`.
    pub fn iy_in_ybar(&self) -> SubLattice {
        augmentation_sublattice(self.y()).map(self.matrix())
    }

    pub fn norm_ybar(&self) -> IntMatrix {
        norm_matrix(self.ybar())
    }

    /// `{λ̄ ∈ Ȳ : N·λ̄ = 0}`.
    pub fn norm_kernel(&self) -> SubLattice {
        SubLattice::kernel_of(&self.norm_ybar())
    }

    pub fn rigid_class(&self, representative: Vec<Int>) -> Result<RigidClass> {
        if representative.len() != self.ybar().rank() {
            return Err(Error::DimensionMismatch("representative length differs from rank of Ȳ".into()));
        }
        if self.norm_ybar().mul_vec(&representative).iter().any(|x| !x.is_zero()) {
            return Err(Error::NormNonzero);
        }
        Ok(RigidClass { representative })
    }

    /// `Y` coordinates of `M⁻¹v` for `v ∈ MY`.
    pub fn y_coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        solve_integer(self.matrix(), v)
    }
}

/// Integral inclusion matrix of `Y ⊂ Y + Σ ℤ·gᵢ` (`Ȳ` in its Hermite basis).
pub fn overlattice_inclusion(rank: usize, generators: &[Vec<BigRational>]) -> Result<IntMatrix> {
    let mut d = BigInt::one();
    for g in generators {
        if g.len() != rank {
            return Err(Error::DimensionMismatch("overlattice generator has the wrong length".into()));
        }
        for x in g {
            d = d.lcm(x.denom());
        }
    }
    let dq = BigRational::from_integer(d.clone());
    let mut rows: Vec<Vec<Int>> = (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { d.clone() } else { BigInt::zero() }).collect())
        .collect();
    for g in generators {
        rows.push(g.iter().map(|x| (x * &dq).to_integer()).collect());
    }
    let c = row_lattice_basis(&IntMatrix::from_rows(rank, rows));
    if c.nrows() != rank {
        return Err(Error::InvalidInput("overlattice basis is degenerate".into()));
    }
    // column j: coordinates of d·eⱼ in the rows of c
    let ct = c.transpose();
    let mut m = IntMatrix::zeros(rank, rank);
    for j in 0..rank {
        let mut target = vec![BigInt::zero(); rank];
        target[j] = d.clone();
        let x = solve_integer(&ct, &target).expect("dY lies in the overlattice");
        for (i, v) in x.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

/// A class in `Ȳᴺ / I·Y`, given by a representative with `N·λ̄ = 0`.
///
/// Classes are compared through `class_of` in [`rigid_h1_torus`], never by
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidClass {
    representative: Vec<Int>,
}

impl RigidClass {
    pub fn representative(&self) -> &[Int] {
        &self.representative
    }
}

/// `Ȳᴺ / I·Y`.
pub fn rigid_h1_torus(pair: &IsogenyPair) -> FinAbGroup {
    FinAbGroup::subquotient(&pair.norm_kernel(), &pair.iy_in_ybar()).expect("I·Y has full rank in Ȳᴺ")
}

/// `H¹(F, S)` at this level, realized as `Ĥ⁻¹(Γ, Y)`.
pub fn h1_f_torus(y: &GaloisLattice) -> FinAbGroup {
    tate_h_neg1(y)
}

/// `H²(F, S)` at this level, realized as `Ĥ⁰(Γ, Y)`.
pub fn h2_f_torus(y: &GaloisLattice) -> FinAbGroup {
    tate_h0(y)
}

/// `(Ȳ/Y)ᴺ = {λ̄ : N·λ̄ ∈ Y} / Y`.
pub fn band_group(pair: &IsogenyPair) -> FinAbGroup {
    let y = pair.y_in_ybar();
    let num = SubLattice::preimage(&pair.norm_ybar(), &y);
    FinAbGroup::subquotient(&num, &y).expect("Y has full rank")
}

/// The class of a rigid representative in `(Ȳ/Y)ᴺ`.
pub fn restriction_to_band(pair: &IsogenyPair, c: &RigidClass) -> Vec<Int> {
    band_group(pair).class_of(&c.representative).expect("Ȳᴺ lies in the band numerator")
}

/// `[λ̄] ↦ [N·λ̄]` from `(Ȳ/Y)ᴺ` to `Ĥ⁰(Γ, Y)`, on a representative `λ̄ ∈ Ȳ`.
pub fn transgression(pair: &IsogenyPair, lambda_bar: &[Int]) -> Result<Vec<Int>> {
    let nl = pair.norm_ybar().mul_vec(lambda_bar);
    let y = pair
        .y_coordinates(&nl)
        .ok_or_else(|| Error::RepresentativeInvalid("N·λ̄ does not lie in Y".into()))?;
    tate_h0(pair.y()).class_of(&y)
}

/// The three maps of the exact row, and the exactness verdicts.
#[derive(Clone, Debug)]
pub struct InfResReport {
    pub h_neg1: FinAbGroup,
    pub rigid: FinAbGroup,
    pub band: FinAbGroup,
    pub h0: FinAbGroup,
    pub inclusion: GroupHom,
    pub restriction: GroupHom,
    pub transgression: GroupHom,
    pub injective_at_h_neg1: bool,
    pub exact_at_rigid: bool,
    pub exact_at_band: bool,
}

impl InfResReport {
    pub fn is_exact(&self) -> bool {
        self.injective_at_h_neg1 && self.exact_at_rigid && self.exact_at_band
    }
}

pub fn infres_check(pair: &IsogenyPair) -> InfResReport {
    let h_neg1 = tate_h_neg1(pair.y());
    let rigid = rigid_h1_torus(pair);
    let band = band_group(pair);
    let h0 = tate_h0(pair.y());
    let m = pair.matrix().clone();
    let inclusion = GroupHom::induced(&h_neg1, &rigid, |v| Ok(m.mul_vec(v))).expect("Yᴺ ⊂ Ȳᴺ and IY ↦ IY");
    let restriction = GroupHom::induced(&rigid, &band, |v| Ok(v.to_vec())).expect("Ȳᴺ lies in the band numerator");
    let trans = GroupHom::induced(&band, &h0, |v| {
        let nl = pair.norm_ybar().mul_vec(v);
        pair.y_coordinates(&nl).ok_or_else(|| Error::RepresentativeInvalid("N·λ̄ does not lie in Y".into()))
    })
    .expect("transgression is well defined");
    InfResReport {
        injective_at_h_neg1: inclusion.is_injective(),
        exact_at_rigid: exact_at(&inclusion, &restriction),
        exact_at_band: exact_at(&restriction, &trans),
        h_neg1,
        rigid,
        band,
        h0,
        inclusion,
        restriction,
        transgression: trans,
    }
}

/// A morphism of isogeny pairs: equivariant maps `Y₁ → Y₂` and `Ȳ₁ → Ȳ₂`
/// forming a commuting square with the inclusions.
#[derive(Clone, Debug)]
pub struct PairMorphism {
    pub source: IsogenyPair,
    pub target: IsogenyPair,
    y_map: EquivariantMap,
    ybar_map: EquivariantMap,
}

impl PairMorphism {
    pub fn new(source: &IsogenyPair, target: &IsogenyPair, y_matrix: &IntMatrix, ybar_matrix: &IntMatrix) -> Result<Self> {
        let y_map = EquivariantMap::new(source.y().clone(), target.y().clone(), y_matrix.clone())?;
        let ybar_map = EquivariantMap::new(source.ybar().clone(), target.ybar().clone(), ybar_matrix.clone())?;
        if ybar_matrix * source.matrix() != target.matrix() * y_matrix {
            return Err(Error::NotEquivariant("square with the inclusions does not commute".into()));
        }
        Ok(PairMorphism { source: source.clone(), target: target.clone(), y_map, ybar_map })
    }

    pub fn identity(pair: &IsogenyPair) -> Self {
        let r = pair.y().rank();
        Self::new(pair, pair, &IntMatrix::identity(r), &IntMatrix::identity(r)).expect("identity square")
    }

    /// `[Z → S] ↪ [Z′ → S]` for the same `Y` and `Ȳ ⊆ Ȳ′`: the map on `Ȳ`
    /// coordinates is `J = M′·M⁻¹`.
    pub fn enlarge_center(small: &IsogenyPair, large: &IsogenyPair) -> Result<Self> {
        if small.y() != large.y() {
            return Err(Error::InvalidInput("pairs do not share the lattice Y".into()));
        }
        let j = ybar_transfer_matrix(small, large)?;
        let r = small.y().rank();
        Self::new(small, large, &IntMatrix::identity(r), &j)
    }

    pub fn y_matrix(&self) -> &IntMatrix {
        self.y_map.matrix()
    }

    pub fn ybar_matrix(&self) -> &IntMatrix {
        self.ybar_map.matrix()
    }

    /// `then ∘ self`.
    pub fn compose(&self, then: &PairMorphism) -> Result<PairMorphism> {
        Self::new(
            &self.source,
            &then.target,
            &(then.y_matrix() * self.y_matrix()),
            &(then.ybar_matrix() * self.ybar_matrix()),
        )
    }

    /// The induced homomorphism `Ȳ₁ᴺ/IY₁ → Ȳ₂ᴺ/IY₂`.
    pub fn induced_rigid(&self) -> GroupHom {
        GroupHom::induced(&rigid_h1_torus(&self.source), &rigid_h1_torus(&self.target), |v| {
            Ok(self.ybar_map.apply(v))
        })
        .expect("morphisms of pairs preserve Ȳᴺ and IY")
    }
}

/// `J = M′·M⁻¹`, the map `Ȳ → Ȳ′` when `Ȳ ⊆ Ȳ′` over the same `Y`.
pub fn ybar_transfer_matrix(small: &IsogenyPair, large: &IsogenyPair) -> Result<IntMatrix> {
    let inv = crate::rational::inverse(small.matrix()).expect("inclusion is nonsingular");
    let mp = large.matrix();
    let r = mp.nrows();
    let mut j = IntMatrix::zeros(r, r);
    for a in 0..r {
        for b in 0..r {
            let mut s = BigRational::zero();
            for k in 0..r {
                s += BigRational::from_integer(mp[(a, k)].clone()) * &inv[k][b];
            }
            if !s.is_integer() {
                return Err(Error::NotContained);
            }
            j[(a, b)] = s.to_integer();
        }
    }
    Ok(j)
}

/// Pushes a class through a morphism of pairs.
pub fn induced_class_map(f: &PairMorphism, c: &RigidClass) -> Result<RigidClass> {
    f.target.rigid_class(f.ybar_map.apply(&c.representative))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int, int_vec};
    use crate::rational::rat;
    use std::sync::Arc;

    fn sign() -> GaloisLattice {
        GaloisLattice::cyclic(2, &IntMatrix::from_i64_rows(&[&[-1]])).unwrap()
    }

    fn split_mu2() -> IsogenyPair {
        let y = GaloisLattice::trivial(Arc::new(crate::group::FiniteGroup::cyclic(2)), 1);
        IsogenyPair::from_overlattice(&y, &[vec![rat(1, 2)]]).unwrap()
    }

    #[test]
    fn overlattice_matrix() {
        let p = split_mu2();
        assert_eq!(p.matrix(), &IntMatrix::from_i64_rows(&[&[2]]));
        assert_eq!(p.index(), int(2));
        assert_eq!(p.cokernel().order(), int(2));
    }

    #[test]
    fn rigid_examples() {
        assert!(rigid_h1_torus(&split_mu2()).is_trivial());
        let norm_one = IsogenyPair::trivial(&sign());
        assert_eq!(rigid_h1_torus(&norm_one).invariant_factors(), &[int(2)]);
        let triv = IsogenyPair::trivial(&GaloisLattice::trivial(Arc::new(crate::group::FiniteGroup::trivial()), 2));
        assert!(rigid_h1_torus(&triv).is_trivial());
    }

    #[test]
    fn h2_examples() {
        let split = GaloisLattice::trivial(Arc::new(crate::group::FiniteGroup::cyclic(2)), 1);
        assert_eq!(h2_f_torus(&split).invariant_factors(), &[int(2)]);
        assert!(h2_f_torus(&sign()).is_trivial());
        assert!(h1_f_torus(&split).is_trivial());
    }

    #[test]
    fn sl2_elliptic_band_and_restriction() {
        let p = IsogenyPair::from_overlattice(&sign(), &[vec![rat(1, 2)]]).unwrap();
        assert_eq!(band_group(&p).invariant_factors(), &[int(2)]);
        let c = p.rigid_class(int_vec(&[1])).unwrap();
        let r = restriction_to_band(&p, &c);
        assert!(!band_group(&p).is_zero_element(&r));
        let y = p.rigid_class(int_vec(&[2])).unwrap();
        assert!(band_group(&p).is_zero_element(&restriction_to_band(&p, &y)));
    }

    #[test]
    fn transgression_split_mu2() {
        let p = split_mu2();
        let t = transgression(&p, &int_vec(&[1])).unwrap();
        assert_eq!(t, int_vec(&[1]));
        assert!(tate_h0(p.y()).is_zero_element(&transgression(&p, &int_vec(&[0])).unwrap()));
        let rep = IsogenyPair::from_overlattice(&GaloisLattice::trivial(Arc::new(crate::group::FiniteGroup::cyclic(3)), 1), &[vec![rat(1, 2)]])
            .unwrap();
        // N = ×3 and M = ×2: N·1 = 3 is not in 2ℤ
        assert!(matches!(transgression(&rep, &int_vec(&[1])), Err(Error::RepresentativeInvalid(_))));
    }

    #[test]
    fn infres_closed_forms() {
        let r = infres_check(&IsogenyPair::trivial(&sign()));
        assert!(r.is_exact());
        assert_eq!(r.rigid.invariant_factors(), &[int(2)]);
        assert!(r.band.is_trivial() && r.h0.is_trivial());

        let r = infres_check(&split_mu2());
        assert!(r.is_exact());
        assert!(r.h_neg1.is_trivial() && r.rigid.is_trivial());
        assert_eq!(r.band.invariant_factors(), &[int(2)]);
        assert!(r.transgression.is_injective());
    }

    #[test]
    fn morphisms() {
        let p = IsogenyPair::trivial(&sign());
        let c = p.rigid_class(int_vec(&[1])).unwrap();
        let id = PairMorphism::identity(&p);
        assert_eq!(induced_class_map(&id, &c).unwrap(), c);
        let two = IntMatrix::from_i64_rows(&[&[2]]);
        let double = PairMorphism::new(&p, &p, &two, &two).unwrap();
        assert!(double.induced_rigid().is_zero());
        let g = rigid_h1_torus(&p);
        let img = induced_class_map(&double, &c).unwrap();
        assert!(g.is_zero_element(&g.class_of(img.representative()).unwrap()));
        assert!(matches!(p.rigid_class(int_vec(&[1, 0])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn norm_nonzero_is_rejected() {
        assert_eq!(split_mu2().rigid_class(int_vec(&[1])), Err(Error::NormNonzero));
    }
}
