//! Finite levels of the band: the character module `ℤ/n[Γ]₀`, its `H²`,
//! and the transition maps between levels.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::finabgroup::{FinAbGroup, GroupHom};
use crate::galois::{FiniteGaloisModule, GaloisLattice};
use crate::group::{FiniteGroup, GroupMap};
use crate::tori::{band_group, IsogenyPair};
use crate::{Int, IntMatrix};

/// A level `(Γ, n)` with its character module `ℤ/n[Γ]₀`.
///
/// The module is `L₀/nL₀` for `L₀ = ℤ[Γ]₀` with basis `b_σ = e_σ − e_1`
/// (`σ ≠ 1`), on which `Γ` acts by left translation.
#[derive(Clone, Debug)]
pub struct ULevel {
    group: Arc<FiniteGroup>,
    n: u64,
    char_module: FiniteGaloisModule,
}

/// Index of `b_σ` in the basis of `ℤ[Γ]₀`, for `σ ≠ 1`.
fn b_index(sigma: usize) -> usize {
    sigma - 1
}

/// The augmentation lattice `ℤ[Γ]₀` with left translation.
pub fn augmentation_lattice(group: &Arc<FiniteGroup>) -> GaloisLattice {
    let order = group.order();
    let r = order - 1;
    let action = (0..order)
        .map(|t| {
            let mut a = IntMatrix::zeros(r, r);
            for s in 1..order {
                // t·b_s = b_{ts} − b_t
                let ts = group.mul(t, s);
                if ts != 0 {
                    a[(b_index(ts), b_index(s))] += BigInt::one();
                }
                if t != 0 {
                    a[(b_index(t), b_index(s))] -= BigInt::one();
                }
            }
            a
        })
        .collect();
    GaloisLattice::new(group.clone(), r, action).expect("left translation is an action")
}

/// `b`-coordinates of an element `Σ c_σ e_σ` of `ℤ[Γ]₀`.
fn to_b_coords(c: &[Int]) -> Vec<Int> {
    c[1..].to_vec()
}

impl ULevel {
    pub fn new(group: Arc<FiniteGroup>, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("level exponent n must be positive".into()));
        }
        let l0 = augmentation_lattice(&group);
        let p = IntMatrix::identity(l0.rank()).scale(&BigInt::from(n));
        let char_module = FiniteGaloisModule::quotient(&l0, &p)?;
        Ok(ULevel { group, n, char_module })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn char_module(&self) -> &FiniteGaloisModule {
        &self.char_module
    }

    /// `gcd(n, |Γ|)`.
    pub fn gcd(&self) -> u64 {
        self.n.gcd(&(self.group.order() as u64))
    }

    /// `(n/g)·N` written in `ℤ[Γ]₀`, where `g = gcd(n, |Γ|)`: the canonical
    /// generator of `H⁰(Γ, ℤ/n[Γ]₀)`.
    pub fn canonical_invariant(&self) -> Vec<Int> {
        let c = BigInt::from(self.n / self.gcd());
        vec![c; self.group.order() - 1]
    }
}

/// `ℤ/n[Γ]₀`.
pub fn char_module(group: Arc<FiniteGroup>, n: u64) -> Result<ULevel> {
    ULevel::new(group, n)
}

/// `Hom_F(u, Z)` at this level, realized as `(Ȳ/Y)ᴺ`.
pub fn hom_u_to_z(level: &ULevel, pair: &IsogenyPair) -> Result<FinAbGroup> {
    if level.group() != pair.y().group() {
        return Err(Error::InvalidInput("level and pair have different Galois groups".into()));
    }
    let e = pair.cokernel().exponent();
    if !BigInt::from(level.n).is_multiple_of(&e) {
        return Err(Error::ExponentMismatch { n: level.n.to_string(), exponent: e.to_string() });
    }
    Ok(band_group(pair))
}

/// `H⁰(Γ, X*(u))` and the class of the canonical generator in it.
fn invariants_with_generator(level: &ULevel) -> (FinAbGroup, Vec<Int>) {
    let h0 = level.char_module.invariants();
    let q = level.char_module.class_of(&level.canonical_invariant());
    let c = h0.class_of(&q).expect("the norm element is invariant");
    (h0, c)
}

/// `H²(F, u)` at this level, as `Hom(H⁰(Γ, X*(u)), ℚ/ℤ) ≅ ℤ/g`.
///
/// The element `k` is the character sending the canonical generator
/// `(n/g)·N` of `H⁰` to `k/g`.
pub fn h2_u_level(level: &ULevel) -> Result<FinAbGroup> {
    let g = BigInt::from(level.gcd());
    let expected = FinAbGroup::cyclic(&g);
    let (h0, c) = invariants_with_generator(level);
    // the dual of a finite abelian group has the same invariant factors
    if h0.invariant_factors() != expected.invariant_factors() || h0.element_order(&c) != g {
        return Err(Error::FormulaMismatch { computed: h0.to_string(), expected: expected.to_string() });
    }
    Ok(expected)
}

/// `p♯ : X*(coarse) → X*(fine)` on `L₀`-coordinates, `[γ] ↦ (n_f/n_c)·Σ_{σ↦γ}[σ]`.
#[derive(Clone, Debug)]
pub struct CharTransition {
    pub matrix: IntMatrix,
}

impl CharTransition {
    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        self.matrix.mul_vec(v)
    }
}

pub fn transition_char(fine: &ULevel, coarse: &ULevel, quotient_map: &GroupMap) -> Result<CharTransition> {
    if fine.n % coarse.n != 0 {
        return Err(Error::DivisibilityViolated(format!("{} does not divide {}", coarse.n, fine.n)));
    }
    if quotient_map.images().len() != fine.group.order() || !quotient_map.is_surjective(&coarse.group) {
        return Err(Error::NotSurjective);
    }
    GroupMap::new(&fine.group, &coarse.group, quotient_map.images().to_vec())?;
    let scale = BigInt::from(fine.n / coarse.n);
    let (rf, rc) = (fine.group.order() - 1, coarse.group.order() - 1);
    let mut m = IntMatrix::zeros(rf, rc);
    for gamma in 1..coarse.group.order() {
        let mut c = vec![BigInt::zero(); fine.group.order()];
        for sigma in 0..fine.group.order() {
            let image = quotient_map.apply(sigma);
            if image == gamma {
                c[sigma] += &scale;
            } else if image == 0 {
                c[sigma] -= &scale;
            }
        }
        for (i, x) in to_b_coords(&c).into_iter().enumerate() {
            m[(i, b_index(gamma))] = x;
        }
    }
    // equivariance: σ·p♯(x) = p♯(p(σ)·x)
    for sigma in 0..fine.group.order() {
        let lhs = fine.char_module.presentation().target().action(sigma) * &m;
        let rhs = &m * coarse.char_module.presentation().target().action(quotient_map.apply(sigma));
        if lhs != rhs {
            return Err(Error::NotEquivariant(format!("character transition fails at {sigma}")));
        }
    }
    Ok(CharTransition { matrix: m })
}

/// The map `H²(fine) → H²(coarse)` dual to `p♯` on `H⁰`, checked against the
/// reduction `ℤ/g_f → ℤ/g_c`.
pub fn transition_h2(fine: &ULevel, coarse: &ULevel, quotient_map: &GroupMap) -> Result<GroupHom> {
    let t = transition_char(fine, coarse, quotient_map)?;
    let src = h2_u_level(fine)?;
    let dst = h2_u_level(coarse)?;
    let (gf, gc) = (BigInt::from(fine.gcd()), BigInt::from(coarse.gcd()));
    let (h0f, genf) = invariants_with_generator(fine);
    // p♯ of the coarse generator, as a multiple m of the fine generator
    let image = t.apply(&coarse.canonical_invariant());
    let image = h0f
        .class_of(&fine.char_module.class_of(&image))
        .expect("p♯ preserves invariants");
    let mut m = None;
    let mut k = BigInt::zero();
    while k < gf {
        if h0f.scale(&genf, &k) == image {
            m = Some(k.clone());
            break;
        }
        k += 1;
    }
    let m = m.ok_or_else(|| Error::FormulaMismatch {
        computed: "p♯ leaves the cyclic span of the canonical generator".into(),
        expected: "a multiple of the generator".into(),
    })?;
    // χ_f = 1/g_f on the generator; χ_f ∘ p♯ takes the value m/g_f = j/g_c
    let images = if src.is_trivial() {
        vec![]
    } else {
        let num = &m * &gc;
        if !num.is_multiple_of(&gf) {
            return Err(Error::FormulaMismatch { computed: format!("{m}/{gf}"), expected: format!("a multiple of 1/{gc}") });
        }
        vec![if dst.is_trivial() { vec![] } else { vec![num / &gf] }]
    };
    let hom = GroupHom::new(src.clone(), dst.clone(), images)?;
    let reduction_ok = dst.is_trivial() || src.is_trivial() || dst.reduce(&hom.images()[0]) == dst.reduce(&[BigInt::one()]);
    if !reduction_ok {
        return Err(Error::FormulaMismatch {
            computed: format!("{:?}", hom.images()),
            expected: "the natural projection".into(),
        });
    }
    Ok(hom)
}

/// The class `α` at this level: `−1 ∈ ℤ/gcd(n, |Γ|)`.
pub fn alpha_level(level: &ULevel) -> Vec<Int> {
    let g = BigInt::from(level.gcd());
    if g.is_one() {
        vec![]
    } else {
        vec![g - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;

    fn cyc(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    #[test]
    fn char_module_orders() {
        let l = char_module(cyc(2), 2).unwrap();
        assert_eq!(l.char_module().order(), int(2));
        // the swap fixes (1,1)
        assert_eq!(l.char_module().invariants().order(), int(2));
        assert!(char_module(cyc(1), 5).unwrap().char_module().order() == int(1));
        assert_eq!(char_module(cyc(3), 3).unwrap().char_module().order(), int(9));
    }

    #[test]
    fn h2_closed_form() {
        assert_eq!(h2_u_level(&char_module(cyc(2), 2).unwrap()).unwrap().invariant_factors(), &[int(2)]);
        assert!(h2_u_level(&char_module(cyc(2), 3).unwrap()).unwrap().is_trivial());
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        assert_eq!(h2_u_level(&char_module(s3, 4).unwrap()).unwrap().invariant_factors(), &[int(2)]);
    }

    #[test]
    fn transitions() {
        let fine = char_module(cyc(4), 4).unwrap();
        let coarse = char_module(cyc(2), 2).unwrap();
        let p = GroupMap::cyclic_reduction(4, 2).unwrap();
        let t = transition_char(&fine, &coarse, &p).unwrap();
        // b_1 = e_1 − e_0 in ℤ[ℤ/2] ↦ 2(e_1 + e_3) − 2(e_0 + e_2)
        assert_eq!(t.matrix.column(0), vec![int(2), int(-2), int(2)]);
        let h = transition_h2(&fine, &coarse, &p).unwrap();
        assert_eq!(h.images(), &[vec![int(1)]]);
        assert_eq!(h.apply(&alpha_level(&fine)), alpha_level(&coarse));

        let id = GroupMap::identity(fine.group());
        let h = transition_h2(&fine, &fine, &id).unwrap();
        assert_eq!(h.images(), &[vec![int(1)]]);

        let gcd1 = char_module(cyc(2), 3).unwrap();
        let fine6 = char_module(cyc(2), 6).unwrap();
        assert!(transition_h2(&fine6, &gcd1, &GroupMap::identity(fine6.group())).unwrap().is_zero());
        assert!(matches!(
            transition_char(&coarse, &fine, &GroupMap::identity(coarse.group())),
            Err(Error::DivisibilityViolated(_))
        ));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_level(&char_module(cyc(2), 2).unwrap()), vec![int(1)]);
        assert!(alpha_level(&char_module(cyc(2), 3).unwrap()).is_empty());
        let a = alpha_level(&char_module(cyc(4), 4).unwrap());
        assert_eq!(FinAbGroup::cyclic(&int(4)).element_order(&a), int(4));
    }

    #[test]
    fn hom_u_to_z_examples() {
        let y = GaloisLattice::trivial(cyc(2), 1);
        let mu2 = IsogenyPair::from_inclusion_matrix(&y, &IntMatrix::from_i64_rows(&[&[2]])).unwrap();
        let level = char_module(cyc(2), 2).unwrap();
        assert_eq!(hom_u_to_z(&level, &mu2).unwrap().invariant_factors(), &[int(2)]);
        assert!(hom_u_to_z(&level, &IsogenyPair::trivial(&y)).unwrap().is_trivial());
        let odd = char_module(cyc(2), 3).unwrap();
        assert!(matches!(hom_u_to_z(&odd, &mu2), Err(Error::ExponentMismatch { .. })));
    }
}
