//! Endoscopic root subsystems cut out by a torsion parameter, refined
//! endoscopic data, and the rigid pairing term of the transfer factor.
//!
//! Sign convention: [`transfer_pairing_term`] returns `−ṡ(λ̄)`. The factor
//! appears with exponent `−1` multiplicatively, which is negation in `ℚ/ℤ`;
//! map to `ℂ^×` by `x ↦ exp(2πi·x)`.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::finabgroup::FinAbGroup;
use crate::galois::augmentation_sublattice;
use crate::lattice::SubLattice;
use crate::qmodz::{QModZ, TorsionCharacter};
use crate::rational;
use crate::reductive::{ReductivePair, RootDatum};
use crate::tori::{induced_class_map, ybar_transfer_matrix, IsogenyPair, PairMorphism, RigidClass};
use crate::{Int, IntMatrix};

/// The unique `t` with `t·K = v` over `ℚ`, read in `ℚ/ℤ`. `K` is square
/// and nonsingular.
fn divide_rational(v: &[BigRational], k: &IntMatrix) -> TorsionCharacter {
    let inv = rational::inverse(k).expect("nonsingular matrix");
    let n = k.nrows();
    TorsionCharacter::new(
        (0..n)
            .map(|i| {
                let t: BigRational = (0..n).map(|j| &v[j] * &inv[j][i]).sum();
                QModZ::new(t.numer().clone(), t.denom().clone())
            })
            .collect(),
    )
}

fn divide_along(chi: &TorsionCharacter, k: &IntMatrix) -> TorsionCharacter {
    let v: Vec<BigRational> =
        chi.values().iter().map(|x| BigRational::new(x.numerator().clone(), x.denominator().clone())).collect();
    divide_rational(&v, k)
}

/// The coroots `α^∨` with `s(α^∨) = 0` and their roots, as a datum with the
/// inherited action. `s` is a character of `Y`.
pub fn endoscopic_subsystem(pair: &ReductivePair, s: &TorsionCharacter) -> Result<RootDatum> {
    let rd = pair.datum();
    if s.rank() != rd.rank() {
        return Err(Error::DimensionMismatch("character rank differs from rank of Y".into()));
    }
    let keep: Vec<usize> = (0..rd.coroots().len()).filter(|&i| s.eval(&rd.coroots()[i]).is_zero()).collect();
    rd.subsystem(&keep)
}

/// `ṡ` on `Ȳ` together with the endoscopic datum it is meant to cut out.
#[derive(Clone, Debug)]
pub struct RefinedEndoscopicDatum {
    pub ambient: ReductivePair,
    pub s_dot: TorsionCharacter,
    pub h_datum: RootDatum,
}

impl RefinedEndoscopicDatum {
    /// Derives `H` from the restriction of `ṡ` to `Y`.
    pub fn new(ambient: ReductivePair, s_dot: TorsionCharacter) -> Result<Self> {
        if s_dot.rank() != ambient.datum().rank() {
            return Err(Error::DimensionMismatch("character rank differs from rank of Ȳ".into()));
        }
        let s = restrict_to_y(ambient.isogeny_pair(), &s_dot);
        let h_datum = endoscopic_subsystem(&ambient, &s)?;
        Ok(RefinedEndoscopicDatum { ambient, s_dot, h_datum })
    }
}

/// `s = ṡ ∘ M`, the restriction of a character of `Ȳ` to `Y`.
pub fn restrict_to_y(pair: &IsogenyPair, s_dot: &TorsionCharacter) -> TorsionCharacter {
    s_dot.pull_back(pair.matrix())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefinedViolation {
    /// The coroots of `H` are not the zero locus of `s` on the coroots.
    CorootMismatch,
    /// `Γ` does not preserve the coroots of `H`.
    NotGaloisStable,
    /// `ṡ ∘ (σ − 1)` is nonzero on `Y` for this group element.
    NotPlus { sigma: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedReport {
    pub violations: Vec<RefinedViolation>,
}

impl RefinedReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_refined(datum: &RefinedEndoscopicDatum) -> RefinedReport {
    let pair = datum.ambient.isogeny_pair();
    let rd = datum.ambient.datum();
    let s = restrict_to_y(pair, &datum.s_dot);
    let mut violations = Vec::new();

    let mut expected: Vec<&Vec<Int>> = rd.coroots().iter().filter(|c| s.eval(c).is_zero()).collect();
    let mut actual: Vec<&Vec<Int>> = datum.h_datum.coroots().iter().collect();
    expected.sort();
    actual.sort();
    if expected != actual {
        violations.push(RefinedViolation::CorootMismatch);
    }

    let y = rd.cochar_lattice();
    let group = y.group();
    let stable = (0..group.order()).all(|g| {
        datum.h_datum.coroots().iter().all(|c| actual.binary_search(&&y.action(g).mul_vec(c)).is_ok())
    });
    if !stable {
        violations.push(RefinedViolation::NotGaloisStable);
    }

    let r = y.rank();
    for g in 0..group.order() {
        let d = &(pair.ybar().action(g) - &IntMatrix::identity(r)) * pair.matrix();
        if (0..r).any(|j| !datum.s_dot.eval(&d.column(j)).is_zero()) {
            violations.push(RefinedViolation::NotPlus { sigma: g });
        }
    }
    RefinedReport { violations }
}

fn check_plus_on_y(pair: &IsogenyPair, s: &TorsionCharacter) -> Result<()> {
    if s.rank() != pair.y().rank() {
        return Err(Error::DimensionMismatch("character rank differs from rank of Y".into()));
    }
    if !s.vanishes_on(&augmentation_sublattice(pair.y())) {
        return Err(Error::CharacterNotPlus("I·Y".into()));
    }
    Ok(())
}

/// One `ṡ` on `Ȳ` with `ṡ ∘ M = s`, namely `s·M⁻¹` read in `ℚ/ℤ`.
pub fn lift_to_refined(pair: &ReductivePair, s: &TorsionCharacter) -> Result<TorsionCharacter> {
    check_plus_on_y(pair.isogeny_pair(), s)?;
    Ok(divide_along(s, pair.isogeny_pair().matrix()))
}

/// The characters of `Ȳ` killing `Y`: the dual of `Ȳ/Y`, as a list.
pub fn characters_of_cokernel(pair: &IsogenyPair) -> Vec<TorsionCharacter> {
    let r = pair.y().rank();
    let m = pair.matrix();
    // χ∘M = 0 exactly for χ = c·M⁻¹ with c ∈ ℤʳ, and c only matters modulo the rows of M
    let rows = SubLattice::from_generators(r, m);
    let quotient = FinAbGroup::subquotient(&SubLattice::full(r), &rows).expect("M is nonsingular");
    quotient
        .elements()
        .iter()
        .map(|e| {
            let c: Vec<BigRational> = quotient.lift(e).into_iter().map(BigRational::from_integer).collect();
            divide_rational(&c, m)
        })
        .collect()
}

/// Every lift of `s` to `Ȳ`: the lift from [`lift_to_refined`] shifted by
/// each character of `Ȳ/Y`.
pub fn all_refined_lifts(pair: &ReductivePair, s: &TorsionCharacter) -> Result<Vec<TorsionCharacter>> {
    let base = lift_to_refined(pair, s)?;
    Ok(characters_of_cokernel(pair.isogeny_pair()).iter().map(|c| base.add(c)).collect())
}

/// A rigid class of `[Z → S]`, supplied as data.
#[derive(Clone, Debug)]
pub struct InvariantClass {
    pub torus_pair: IsogenyPair,
    pub class: RigidClass,
}

impl InvariantClass {
    pub fn new(torus_pair: IsogenyPair, representative: Vec<Int>) -> Result<Self> {
        let class = torus_pair.rigid_class(representative)?;
        Ok(InvariantClass { torus_pair, class })
    }
}

fn check_plus_on_ybar(pair: &IsogenyPair, s_dot: &TorsionCharacter) -> Result<()> {
    if s_dot.rank() != pair.ybar().rank() {
        return Err(Error::DimensionMismatch("character rank differs from rank of Ȳ".into()));
    }
    if !s_dot.vanishes_on(&pair.iy_in_ybar()) {
        return Err(Error::CharacterNotPlus("I·Y".into()));
    }
    Ok(())
}

/// `−ṡ(λ̄)` for the representative `λ̄` of the class.
pub fn transfer_pairing_term(inv: &InvariantClass, s_dot: &TorsionCharacter) -> Result<QModZ> {
    check_plus_on_ybar(&inv.torus_pair, s_dot)?;
    Ok(-s_dot.eval(inv.class.representative()))
}

/// `s̈` on `Ȳ′` with `s̈ ∘ J = ṡ`, where `J : Ȳ → Ȳ′`.
pub fn lift_along_enlargement(small: &IsogenyPair, large: &IsogenyPair, s_dot: &TorsionCharacter) -> Result<TorsionCharacter> {
    let j = ybar_transfer_matrix(small, large)?;
    Ok(divide_along(s_dot, &j))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnlargementReport {
    pub value_small: QModZ,
    pub value_large: QModZ,
    /// Whether `s̈ ∘ J = ṡ`.
    pub restricts: bool,
}

impl EnlargementReport {
    pub fn equal(&self) -> bool {
        self.value_small == self.value_large
    }
}

/// Compares the pairing term over `Z` with the term over `Z′ ⊇ Z` after
/// pushing the class forward and pairing with `s̈`.
pub fn enlarge_center_invariance(
    pair_z: &IsogenyPair,
    pair_zprime: &IsogenyPair,
    inv: &InvariantClass,
    s_dot: &TorsionCharacter,
    s_ddot: &TorsionCharacter,
) -> Result<EnlargementReport> {
    let f = PairMorphism::enlarge_center(pair_z, pair_zprime)?;
    let pushed = InvariantClass { torus_pair: pair_zprime.clone(), class: induced_class_map(&f, &inv.class)? };
    let value_small = transfer_pairing_term(inv, s_dot)?;
    let value_large = transfer_pairing_term(&pushed, s_ddot)?;
    Ok(EnlargementReport { value_small, value_large, restricts: s_ddot.pull_back(f.ybar_matrix()) == *s_dot })
}

/// Characters of `Ȳ` killing `I·Y` and dual to the torsion of `Ȳ/I·Y`.
pub fn plus_torsion_characters(pair: &IsogenyPair) -> Vec<TorsionCharacter> {
    let iy = pair.iy_in_ybar();
    let tors = FinAbGroup::subquotient(&iy.saturation(), &iy).expect("full rank in the saturation");
    tors.dual_basis_on_ambient()
        .expect("saturated numerator")
        .into_iter()
        .map(|row| TorsionCharacter::new(row.into_iter().map(|(a, d)| QModZ::new(a, d)).collect()))
        .filter(|c| !c.values().iter().all(|v| v.numerator().is_zero()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::GaloisLattice;
    use crate::group::FiniteGroup;
    use crate::lattice::int_vec;
    use crate::rational::rat;
    use crate::reductive::{Form, RootDatum};
    use std::sync::Arc;

    fn q(a: i64, b: i64) -> QModZ {
        QModZ::from_i64(a, b)
    }

    fn sl2_mu2(m: usize) -> ReductivePair {
        let rd = RootDatum::type_a(2, Form::SimplyConnected).unwrap();
        let rd = rd.with_galois(GaloisLattice::trivial(Arc::new(FiniteGroup::cyclic(m)), 1)).unwrap();
        ReductivePair::full_center(rd).unwrap()
    }

    #[test]
    fn subsystems() {
        let pair = sl2_mu2(1);
        let full = endoscopic_subsystem(&pair, &TorsionCharacter::zero(1)).unwrap();
        assert_eq!(full.roots().len(), 2);
        let torus = endoscopic_subsystem(&pair, &TorsionCharacter::new(vec![q(1, 2)])).unwrap();
        assert!(torus.roots().is_empty());

        // A₂ in coweight coordinates; brute-force evaluation over the 6 coroots
        let pgl3 = ReductivePair::trivial_center(RootDatum::type_a(3, Form::Adjoint).unwrap());
        let s = TorsionCharacter::new(vec![q(1, 3), q(2, 3)]);
        let h = endoscopic_subsystem(&pgl3, &s).unwrap();
        let expected: Vec<&Vec<Int>> = pgl3.datum().coroots().iter().filter(|c| s.eval(c).is_zero()).collect();
        assert_eq!(h.coroots().len(), expected.len());
        assert!(h.coroots().iter().all(|c| expected.contains(&c)));
    }

    #[test]
    fn refined_sl2() {
        let pair = sl2_mu2(1);
        let zero = RefinedEndoscopicDatum::new(pair.clone(), TorsionCharacter::zero(1)).unwrap();
        assert!(validate_refined(&zero).is_valid());
        let d = RefinedEndoscopicDatum::new(pair.clone(), TorsionCharacter::new(vec![q(1, 4)])).unwrap();
        assert!(validate_refined(&d).is_valid());
        let s = restrict_to_y(pair.isogeny_pair(), &d.s_dot);
        assert_eq!(s.values(), &[q(1, 2)]);
        assert!(d.h_datum.roots().is_empty());

        let lift = lift_to_refined(&pair, &s).unwrap();
        assert!(lift == TorsionCharacter::new(vec![q(1, 4)]) || lift == TorsionCharacter::new(vec![q(3, 4)]));
        let lifts = all_refined_lifts(&pair, &s).unwrap();
        let mut vals: Vec<QModZ> = lifts.iter().map(|l| l.values()[0].clone()).collect();
        vals.sort();
        assert_eq!(vals, vec![q(1, 4), q(3, 4)]);
    }

    #[test]
    fn swap_action_violates_plus() {
        let y = GaloisLattice::cyclic(2, &IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])).unwrap();
        let t = RootDatum::torus(y.clone());
        let pair = ReductivePair::trivial_center(t);
        let d = RefinedEndoscopicDatum::new(pair, TorsionCharacter::new(vec![q(1, 2), q(0, 1)])).unwrap();
        let report = validate_refined(&d);
        assert_eq!(report.violations, vec![RefinedViolation::NotPlus { sigma: 1 }]);
    }

    #[test]
    fn pairing_term() {
        // the elliptic torus of SL₂: Γ = ℤ/2 acting by −1, Ȳᴺ/IY = ℤ/4
        let rd = RootDatum::type_a(2, Form::SimplyConnected).unwrap();
        let rd = rd.with_cyclic_action(2, &IntMatrix::from_i64_rows(&[&[-1]])).unwrap();
        let pair = ReductivePair::full_center(rd).unwrap();
        let inv = InvariantClass::new(pair.isogeny_pair().clone(), int_vec(&[1])).unwrap();
        let s_dot = TorsionCharacter::new(vec![q(1, 4)]);
        assert_eq!(transfer_pairing_term(&inv, &s_dot).unwrap(), q(3, 4));
        let zero = InvariantClass::new(pair.isogeny_pair().clone(), int_vec(&[0])).unwrap();
        assert!(transfer_pairing_term(&zero, &s_dot).unwrap().is_zero());
    }

    #[test]
    fn pairing_term_rejects_non_plus() {
        let y = GaloisLattice::cyclic(2, &IntMatrix::from_i64_rows(&[&[-1]])).unwrap();
        let p = IsogenyPair::trivial(&y);
        let inv = InvariantClass::new(p, int_vec(&[1])).unwrap();
        let err = transfer_pairing_term(&inv, &TorsionCharacter::new(vec![q(1, 3)])).unwrap_err();
        assert_eq!(err.code(), "CharacterNotPlus");
    }

    #[test]
    fn rank_two_enlargement() {
        // swap torus, Z = μ₂ diagonal inside Z′ = μ₄ diagonal
        let y = GaloisLattice::cyclic(2, &IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])).unwrap();
        let small = IsogenyPair::from_overlattice(&y, &[vec![rat(1, 2), rat(1, 2)]]).unwrap();
        let large = IsogenyPair::from_overlattice(&y, &[vec![rat(1, 4), rat(1, 4)]]).unwrap();
        for rep in crate::tori::rigid_h1_torus(&small).generator_lifts() {
            let inv = InvariantClass::new(small.clone(), rep.clone()).unwrap();
            for s_dot in plus_torsion_characters(&small) {
                let s_ddot = lift_along_enlargement(&small, &large, &s_dot).unwrap();
                let r = enlarge_center_invariance(&small, &large, &inv, &s_dot, &s_ddot).unwrap();
                assert!(r.restricts && r.equal());
            }
        }
    }

    #[test]
    fn representative_independence() {
        let y = GaloisLattice::cyclic(3, &IntMatrix::from_i64_rows(&[&[0, -1], &[1, -1]])).unwrap();
        let p = IsogenyPair::from_overlattice(&y, &[vec![rat(1, 3), rat(2, 3)]]).unwrap();
        let chars = plus_torsion_characters(&p);
        let g = crate::tori::rigid_h1_torus(&p);
        for rep in g.generator_lifts() {
            for shift in p.iy_in_ybar().basis_vectors() {
                let moved: Vec<Int> = rep.iter().zip(&shift).map(|(a, b)| a + b).collect();
                let a = InvariantClass::new(p.clone(), rep.clone()).unwrap();
                let b = InvariantClass::new(p.clone(), moved).unwrap();
                for c in &chars {
                    assert_eq!(transfer_pairing_term(&a, c).unwrap(), transfer_pairing_term(&b, c).unwrap());
                }
            }
        }
    }
}
