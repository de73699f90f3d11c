//! The dispatcher table: one entry per task `op`.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use rigidcoh::endoscopy::{
    all_refined_lifts, endoscopic_subsystem, enlarge_center_invariance, lift_along_enlargement, lift_to_refined,
    plus_torsion_characters, transfer_pairing_term, validate_refined, InvariantClass, RefinedEndoscopicDatum,
    RefinedViolation,
};
use rigidcoh::galois::{
    augmentation_sublattice, dual_module, h1_finite, h1_lattice, invariants_sublattice, norm_matrix, tate_h0,
    tate_h_neg1, tate_h_neg2_finite,
};
use rigidcoh::lattice::int_vec;
use rigidcoh::local_field::{abs_value, delta_iv, is_strongly_regular, valuation, LaurentSeries};
use rigidcoh::normal_form::{hermite_normal_form, integer_kernel, saturate, smith_normal_form};
use rigidcoh::reductive::{
    component_group_dual_center, coroot_sublattice, dual_root_datum, is_elliptic, pairing_perfectness,
    rigid_h1_reductive, tn_pairing, torus_to_reductive, weyl_group, weyl_quotient_triviality,
};
use rigidcoh::tori::{
    band_group, h1_f_torus, h2_f_torus, induced_class_map, infres_check, restriction_to_band, rigid_h1_torus,
    transgression, PairMorphism,
};
use rigidcoh::u_band::{alpha_level, h2_u_level, hom_u_to_z, transition_char, transition_h2, ULevel};
use rigidcoh::{FinAbGroup, GroupMap, IntMatrix, SubLattice};

use crate::document::{InputError, Rows};
use crate::env::{self, Env, Kind, TaskError};
use crate::payload::{self as p, report};

/// A reference from an argument to a declaration.
pub struct Ref<'a> {
    pub field: String,
    pub kind: Kind,
    pub id: &'a str,
}

fn r<'a>(field: &str, kind: Kind, id: &'a str) -> Ref<'a> {
    Ref { field: field.to_string(), kind, id }
}

/// Arguments of one operation, and how to run it.
pub trait Op: DeserializeOwned {
    fn refs(&self) -> Vec<Ref<'_>>;
    fn run(&self, env: &Env) -> Result<Value, TaskError>;
}

pub struct Entry {
    pub name: &'static str,
    /// Library module the operation belongs to.
    pub module: &'static str,
    check: fn(&Map<String, Value>, &Env, &str) -> Result<(), InputError>,
    run: fn(&Map<String, Value>, &Env) -> Result<Value, TaskError>,
}

impl Entry {
    /// Decodes the arguments and resolves their references.
    pub fn check(&self, args: &Map<String, Value>, env: &Env, at: &str) -> Result<(), InputError> {
        (self.check)(args, env, at)
    }

    pub fn run(&self, args: &Map<String, Value>, env: &Env) -> Result<Value, TaskError> {
        (self.run)(args, env)
    }
}

fn check_op<T: Op>(args: &Map<String, Value>, env: &Env, at: &str) -> Result<(), InputError> {
    let op: T = serde_path_to_error::deserialize(Value::Object(args.clone())).map_err(|e| {
        let path = e.path().to_string();
        let loc = if path == "." { at.to_string() } else { format!("{at}.{path}") };
        InputError::schema(loc, e.into_inner())
    })?;
    for rf in op.refs() {
        env.need(rf.kind, rf.id, &format!("{at}.{}", rf.field))?;
    }
    Ok(())
}

fn run_op<T: Op>(args: &Map<String, Value>, env: &Env) -> Result<Value, TaskError> {
    let op: T = serde_json::from_value(Value::Object(args.clone())).map_err(|e| TaskError::new("SchemaError", e))?;
    op.run(env)
}

macro_rules! entries {
    ($($module:literal: [$($name:literal => $ty:ty),* $(,)?]),* $(,)?) => {
        static TABLE: &[Entry] = &[
            $($(Entry { name: $name, module: $module, check: check_op::<$ty>, run: run_op::<$ty> },)*)*
        ];
    };
}

entries! {
    "exact_lattice": [
        "smith_normal_form" => SmithNormalForm,
        "hermite_normal_form" => HermiteNormalForm,
        "kernel_basis" => KernelBasis,
        "subquotient" => Subquotient,
        "saturation" => Saturation,
    ],
    "galois": [
        "norm_matrix" => NormMatrix,
        "augmentation_sublattice" => AugmentationSublattice,
        "invariants_sublattice" => InvariantsSublattice,
        "tate_h0" => TateH0,
        "tate_h_neg1" => TateHNeg1,
        "h1_lattice" => H1Lattice,
        "tate_h_neg2_finite" => TateHNeg2Finite,
        "h1_finite" => H1Finite,
        "module_invariants" => ModuleInvariants,
        "dual_module" => DualModule,
    ],
    "tori": [
        "rigid_h1_torus" => RigidH1Torus,
        "h1_F_torus" => H1FTorus,
        "h2_F_torus" => H2FTorus,
        "band_group" => BandGroup,
        "restriction_to_band" => RestrictionToBand,
        "transgression" => Transgression,
        "infres_check" => InfresCheck,
        "induced_class_map" => InducedClassMap,
    ],
    "u_band": [
        "char_module" => CharModule,
        "hom_u_to_Z" => HomUToZ,
        "h2_u_level" => H2ULevel,
        "transition_char" => TransitionChar,
        "transition_h2" => TransitionH2,
        "alpha_level" => AlphaLevel,
    ],
    "reductive": [
        "coroot_sublattice" => CorootSublattice,
        "rigid_h1_reductive" => RigidH1Reductive,
        "component_group_dual_center" => ComponentGroupDualCenter,
        "torus_to_reductive" => TorusToReductive,
        "tn_pairing" => TnPairing,
        "pairing_perfectness" => PairingPerfectness,
        "weyl_group" => WeylGroup,
        "weyl_quotient_triviality" => WeylQuotientTriviality,
        "is_elliptic" => IsElliptic,
        "dual_root_datum" => DualRootDatum,
    ],
    "endoscopy": [
        "endoscopic_subsystem" => EndoscopicSubsystem,
        "validate_refined" => ValidateRefined,
        "lift_to_refined" => LiftToRefined,
        "all_refined_lifts" => AllRefinedLifts,
        "plus_torsion_characters" => PlusTorsionCharacters,
        "transfer_pairing_term" => TransferPairingTerm,
        "enlarge_center_invariance" => EnlargeCenterInvariance,
    ],
    "local_field": [
        "valuation" => Valuation,
        "abs_value" => AbsValue,
        "is_strongly_regular" => IsStronglyRegular,
        "delta_IV" => DeltaIv,
    ],
}

pub fn table() -> &'static [Entry] {
    TABLE
}

pub fn lookup(name: &str) -> Option<&'static Entry> {
    TABLE.iter().find(|e| e.name == name)
}

fn mat(rows: &Rows, cols: usize) -> Result<IntMatrix, TaskError> {
    env::matrix(rows, cols).map_err(|e| TaskError::new("InvalidInput", e))
}

fn sublattice(rank: usize, vectors: &Rows) -> Result<SubLattice, TaskError> {
    if vectors.iter().any(|v| v.len() != rank) {
        return Err(TaskError::new("DimensionMismatch", format!("vectors must have length {rank}")));
    }
    Ok(SubLattice::from_vectors(rank, &vectors.iter().map(|v| int_vec(v)).collect::<Vec<_>>()))
}

fn group(g: FinAbGroup) -> Result<Value, TaskError> {
    Ok(p::group(&g))
}

/// Declares an argument struct whose only field references a declaration.
macro_rules! single_ref_op {
    ($ty:ident, $field:ident, $kind:expr, |$env:ident, $x:ident| $body:expr) => {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $ty {
            $field: String,
        }

        impl Op for $ty {
            fn refs(&self) -> Vec<Ref<'_>> {
                vec![r(stringify!($field), $kind, &self.$field)]
            }

            fn run(&self, $env: &Env) -> Result<Value, TaskError> {
                let $x = &self.$field;
                $body
            }
        }
    };
}

// exact_lattice

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmithNormalForm {
    matrix: Rows,
}

impl Op for SmithNormalForm {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![]
    }

    fn run(&self, _: &Env) -> Result<Value, TaskError> {
        let a = mat(&self.matrix, 0)?;
        let s = smith_normal_form(&a);
        let k = a.nrows().min(a.ncols());
        let diagonal: Vec<_> = (0..k).map(|i| s.d[(i, i)].clone()).collect();
        Ok(json!({ "diagonal": p::ints(&diagonal), "u": p::matrix(&s.u), "v": p::matrix(&s.v) }))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HermiteNormalForm {
    matrix: Rows,
}

impl Op for HermiteNormalForm {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![]
    }

    fn run(&self, _: &Env) -> Result<Value, TaskError> {
        let h = hermite_normal_form(&mat(&self.matrix, 0)?, false);
        let form: Vec<_> = h.form.to_rows().into_iter().take(h.rank).collect();
        Ok(json!({ "form": p::rows(&form), "pivots": h.pivots }))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelBasis {
    matrix: Rows,
}

impl Op for KernelBasis {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![]
    }

    fn run(&self, _: &Env) -> Result<Value, TaskError> {
        Ok(json!({ "basis": p::matrix(&integer_kernel(&mat(&self.matrix, 0)?)) }))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subquotient {
    rank: usize,
    numerator: Rows,
    denominator: Rows,
}

impl Op for Subquotient {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![]
    }

    fn run(&self, _: &Env) -> Result<Value, TaskError> {
        let num = sublattice(self.rank, &self.numerator)?;
        let den = sublattice(self.rank, &self.denominator)?;
        group(FinAbGroup::subquotient(&num, &den)?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Saturation {
    rank: usize,
    generators: Rows,
}

impl Op for Saturation {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![]
    }

    fn run(&self, _: &Env) -> Result<Value, TaskError> {
        let l = sublattice(self.rank, &self.generators)?;
        Ok(json!({ "basis": p::matrix(&saturate(l.basis())) }))
    }
}

// galois

single_ref_op!(NormMatrix, lattice, Kind::Lattice, |env, id| Ok(
    json!({ "matrix": p::matrix(&norm_matrix(env.lattice(id)?)) })
));
single_ref_op!(AugmentationSublattice, lattice, Kind::Lattice, |env, id| Ok(p::basis(&augmentation_sublattice(
    env.lattice(id)?
))));
single_ref_op!(InvariantsSublattice, lattice, Kind::Lattice, |env, id| Ok(p::basis(&invariants_sublattice(
    env.lattice(id)?
))));
single_ref_op!(TateH0, lattice, Kind::Lattice, |env, id| group(tate_h0(env.lattice(id)?)));
single_ref_op!(TateHNeg1, lattice, Kind::Lattice, |env, id| group(tate_h_neg1(env.lattice(id)?)));
single_ref_op!(H1Lattice, lattice, Kind::Lattice, |env, id| group(h1_lattice(env.lattice(id)?)));
single_ref_op!(TateHNeg2Finite, module, Kind::Module, |env, id| group(tate_h_neg2_finite(env.module(id)?)));
single_ref_op!(H1Finite, module, Kind::Module, |env, id| group(h1_finite(env.module(id)?)));
single_ref_op!(ModuleInvariants, module, Kind::Module, |env, id| group(env.module(id)?.invariants()));
single_ref_op!(DualModule, module, Kind::Module, |env, id| {
    let d = dual_module(env.module(id)?);
    Ok(json!({ "group": p::group(&d.as_group()), "invariants": p::group(&d.invariants()) }))
});

// tori

single_ref_op!(RigidH1Torus, pair, Kind::Pair, |env, id| group(rigid_h1_torus(env.pair(id)?)));
single_ref_op!(H1FTorus, lattice, Kind::Lattice, |env, id| group(h1_f_torus(env.lattice(id)?)));
single_ref_op!(H2FTorus, lattice, Kind::Lattice, |env, id| group(h2_f_torus(env.lattice(id)?)));
single_ref_op!(BandGroup, pair, Kind::Pair, |env, id| group(band_group(env.pair(id)?)));
single_ref_op!(InfresCheck, pair, Kind::Pair, |env, id| {
    let rep = infres_check(env.pair(id)?);
    let mut extra = Map::new();
    extra.insert("h_neg1".into(), p::group(&rep.h_neg1));
    extra.insert("rigid".into(), p::group(&rep.rigid));
    extra.insert("band".into(), p::group(&rep.band));
    extra.insert("h0".into(), p::group(&rep.h0));
    Ok(report(
        &[
            ("injective_at_h_neg1", rep.injective_at_h_neg1),
            ("exact_at_rigid", rep.exact_at_rigid),
            ("exact_at_band", rep.exact_at_band),
        ],
        extra,
    ))
});

fn vector(v: &[i64], rank: usize) -> Result<Vec<rigidcoh::Int>, TaskError> {
    if v.len() != rank {
        return Err(TaskError::new("DimensionMismatch", format!("vector must have length {rank}")));
    }
    Ok(int_vec(v))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionToBand {
    pair: String,
    /// A norm-zero vector of `Ȳ`.
    representative: Vec<i64>,
}

impl Op for RestrictionToBand {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![r("pair", Kind::Pair, &self.pair)]
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let pair = env.pair(&self.pair)?;
        let c = pair.rigid_class(vector(&self.representative, pair.y().rank())?)?;
        let band = band_group(pair);
        Ok(json!({ "class": p::ints(&band.reduce(&restriction_to_band(pair, &c))), "band": p::group(&band) }))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transgression {
    pair: String,
    /// A vector of `Ȳ` whose image in `Ȳ/Y` is `Γ`-fixed.
    element: Vec<i64>,
}

impl Op for Transgression {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![r("pair", Kind::Pair, &self.pair)]
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let pair = env.pair(&self.pair)?;
        Ok(json!({ "class": p::ints(&transgression(pair, &vector(&self.element, pair.y().rank())?)?) }))
    }
}

/// Pushes a rigid class along a morphism of pairs; without matrices the
/// morphism is the enlargement of the center.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InducedClassMap {
    source: String,
    target: String,
    representative: Vec<i64>,
    #[serde(default)]
    y_matrix: Option<Rows>,
    #[serde(default)]
    ybar_matrix: Option<Rows>,
}

impl Op for InducedClassMap {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![r("source", Kind::Pair, &self.source), r("target", Kind::Pair, &self.target)]
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let (src, tgt) = (env.pair(&self.source)?, env.pair(&self.target)?);
        let f = match (&self.y_matrix, &self.ybar_matrix) {
            (None, None) => PairMorphism::enlarge_center(src, tgt)?,
            (Some(y), Some(yb)) => PairMorphism::new(src, tgt, &mat(y, src.y().rank())?, &mat(yb, src.y().rank())?)?,
            _ => return Err(TaskError::new("InvalidInput", "give both y_matrix and ybar_matrix or neither")),
        };
        let c = src.rigid_class(vector(&self.representative, src.y().rank())?)?;
        let image = induced_class_map(&f, &c)?;
        let coords = rigid_h1_torus(tgt).class_of(image.representative())?;
        Ok(json!({ "representative": p::ints(image.representative()), "class": p::ints(&coords) }))
    }
}

// u_band

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level {
    group: String,
    n: u64,
}

impl Level {
    fn get(&self, env: &Env) -> Result<ULevel, TaskError> {
        Ok(ULevel::new(env.group(&self.group)?.clone(), self.n)?)
    }
}

macro_rules! level_op {
    ($ty:ident, |$level:ident| $body:expr) => {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $ty {
            group: String,
            n: u64,
        }

        impl Op for $ty {
            fn refs(&self) -> Vec<Ref<'_>> {
                vec![r("group", Kind::Group, &self.group)]
            }

            fn run(&self, env: &Env) -> Result<Value, TaskError> {
                let $level = ULevel::new(env.group(&self.group)?.clone(), self.n)?;
                $body
            }
        }
    };
}

level_op!(CharModule, |level| {
    let m = level.char_module();
    Ok(json!({ "group": p::group(&m.as_group()), "order": p::int(&m.order()) }))
});
level_op!(H2ULevel, |level| group(h2_u_level(&level)?));
level_op!(AlphaLevel, |level| Ok(json!({ "class": p::ints(&alpha_level(&level)) })));

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomUToZ {
    group: String,
    n: u64,
    pair: String,
}

impl Op for HomUToZ {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![r("group", Kind::Group, &self.group), r("pair", Kind::Pair, &self.pair)]
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let level = ULevel::new(env.group(&self.group)?.clone(), self.n)?;
        group(hom_u_to_z(&level, env.pair(&self.pair)?)?)
    }
}

/// A fine and a coarse level with a surjection of groups, given by images.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transition {
    fine: Level,
    coarse: Level,
    map: Vec<usize>,
}

impl Transition {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![r("fine.group", Kind::Group, &self.fine.group), r("coarse.group", Kind::Group, &self.coarse.group)]
    }

    fn get(&self, env: &Env) -> Result<(ULevel, ULevel, GroupMap), TaskError> {
        let (fine, coarse) = (self.fine.get(env)?, self.coarse.get(env)?);
        let map = GroupMap::new(fine.group(), coarse.group(), self.map.clone())?;
        Ok((fine, coarse, map))
    }
}

#[derive(Deserialize)]
#[serde(transparent)]
pub struct TransitionChar(Transition);

impl Op for TransitionChar {
    fn refs(&self) -> Vec<Ref<'_>> {
        self.0.refs()
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let (fine, coarse, map) = self.0.get(env)?;
        Ok(json!({ "matrix": p::matrix(&transition_char(&fine, &coarse, &map)?.matrix) }))
    }
}

#[derive(Deserialize)]
#[serde(transparent)]
pub struct TransitionH2(Transition);

impl Op for TransitionH2 {
    fn refs(&self) -> Vec<Ref<'_>> {
        self.0.refs()
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let (fine, coarse, map) = self.0.get(env)?;
        let h = transition_h2(&fine, &coarse, &map)?;
        let alpha = h.target.reduce(&h.apply(&alpha_level(&fine)));
        let mut out = p::hom(&h);
        out["alpha_image"] = p::ints(&alpha);
        out["alpha_coarse"] = p::ints(&h.target.reduce(&alpha_level(&coarse)));
        Ok(out)
    }
}

// reductive

single_ref_op!(CorootSublattice, datum, Kind::Datum, |env, id| Ok(p::basis(&coroot_sublattice(env.datum(id)?))));
single_ref_op!(RigidH1Reductive, reductive, Kind::Reductive, |env, id| group(rigid_h1_reductive(
    env.reductive(id)?
)));
single_ref_op!(ComponentGroupDualCenter, reductive, Kind::Reductive, |env, id| group(
    component_group_dual_center(env.reductive(id)?)
));
single_ref_op!(TorusToReductive, reductive, Kind::Reductive, |env, id| {
    let h = torus_to_reductive(env.reductive(id)?);
    let mut out = p::hom(&h);
    out["surjective"] = Value::Bool(h.is_surjective());
    Ok(out)
});
single_ref_op!(PairingPerfectness, reductive, Kind::Reductive, |env, id| {
    let rep = pairing_perfectness(env.reductive(id)?);
    let mut extra = Map::new();
    extra.insert("rigid".into(), p::group(&rep.rigid));
    extra.insert("component".into(), p::group(&rep.component));
    extra.insert("characters".into(), Value::Array(rep.characters.iter().map(p::character).collect()));
    extra.insert(
        "matrix".into(),
        Value::Array(rep.matrix.iter().map(|row| Value::Array(row.iter().map(p::qmodz).collect())).collect()),
    );
    Ok(report(&[("injective", rep.injective), ("orders_equal", rep.orders_equal)], extra))
});
single_ref_op!(WeylGroup, datum, Kind::Datum, |env, id| Ok(json!({ "order": weyl_group(env.datum(id)?)?.len() })));
single_ref_op!(WeylQuotientTriviality, reductive, Kind::Reductive, |env, id| {
    let rep = weyl_quotient_triviality(env.reductive(id)?)?;
    let mut extra = Map::new();
    extra.insert("weyl_order".into(), rep.weyl_order.into());
    extra.insert("checked".into(), rep.checked.into());
    extra.insert("failures".into(), json!(rep.failures));
    Ok(report(&[("defects_in_coroot_lattice", rep.passes())], extra))
});
single_ref_op!(IsElliptic, datum, Kind::Datum, |env, id| Ok(json!({ "elliptic": is_elliptic(env.datum(id)?) })));
single_ref_op!(DualRootDatum, datum, Kind::Datum, |env, id| {
    let d = dual_root_datum(env.datum(id)?);
    Ok(json!({ "roots": p::rows(d.roots()), "coroots": p::rows(d.coroots()), "simple": d.simple_indices() }))
});

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TnPairing {
    reductive: String,
    representative: Vec<i64>,
    character: String,
}

impl Op for TnPairing {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![r("reductive", Kind::Reductive, &self.reductive), r("character", Kind::Character, &self.character)]
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let pair = env.reductive(&self.reductive)?;
        let rep = vector(&self.representative, pair.datum().rank())?;
        Ok(json!({ "value": p::qmodz(&tn_pairing(pair, &rep, env.character(&self.character)?)?) }))
    }
}

// endoscopy

/// A reductive pair and a character, shared by several endoscopy ops.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WithCharacter {
    reductive: String,
    character: String,
}

impl WithCharacter {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![r("reductive", Kind::Reductive, &self.reductive), r("character", Kind::Character, &self.character)]
    }
}

macro_rules! character_op {
    ($ty:ident, |$env:ident, $pair:ident, $s:ident| $body:expr) => {
        #[derive(Deserialize)]
        #[serde(transparent)]
        pub struct $ty(WithCharacter);

        impl Op for $ty {
            fn refs(&self) -> Vec<Ref<'_>> {
                self.0.refs()
            }

            fn run(&self, $env: &Env) -> Result<Value, TaskError> {
                let $pair = $env.reductive(&self.0.reductive)?;
                let $s = $env.character(&self.0.character)?;
                $body
            }
        }
    };
}

character_op!(EndoscopicSubsystem, |env, pair, s| {
    let h = endoscopic_subsystem(pair, s)?;
    Ok(json!({ "roots": p::rows(h.roots()), "coroots": p::rows(h.coroots()) }))
});
character_op!(ValidateRefined, |env, pair, s| {
    let datum = RefinedEndoscopicDatum::new(pair.clone(), s.clone())?;
    let rep = validate_refined(&datum);
    let has = |f: &dyn Fn(&RefinedViolation) -> bool| !rep.violations.iter().any(f);
    let not_plus: Vec<usize> = rep
        .violations
        .iter()
        .filter_map(|v| match v {
            RefinedViolation::NotPlus { sigma } => Some(*sigma),
            _ => None,
        })
        .collect();
    let mut extra = Map::new();
    extra.insert("not_plus_at".into(), json!(not_plus));
    extra.insert("h_coroots".into(), p::rows(datum.h_datum.coroots()));
    Ok(report(
        &[
            ("coroots_match", has(&|v| *v == RefinedViolation::CorootMismatch)),
            ("galois_stable", has(&|v| *v == RefinedViolation::NotGaloisStable)),
            ("plus", not_plus.is_empty()),
        ],
        extra,
    ))
});
character_op!(LiftToRefined, |env, pair, s| Ok(json!({ "character": p::character(&lift_to_refined(pair, s)?) })));
character_op!(AllRefinedLifts, |env, pair, s| {
    let lifts = all_refined_lifts(pair, s)?;
    Ok(json!({ "lifts": lifts.iter().map(p::character).collect::<Vec<_>>() }))
});

single_ref_op!(PlusTorsionCharacters, pair, Kind::Pair, |env, id| {
    let chars = plus_torsion_characters(env.pair(id)?);
    Ok(json!({ "characters": chars.iter().map(p::character).collect::<Vec<_>>() }))
});

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferPairingTerm {
    pair: String,
    /// Norm-zero vector of `Ȳ` representing the invariant class.
    representative: Vec<i64>,
    character: String,
}

impl Op for TransferPairingTerm {
    fn refs(&self) -> Vec<Ref<'_>> {
        vec![r("pair", Kind::Pair, &self.pair), r("character", Kind::Character, &self.character)]
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let pair = env.pair(&self.pair)?;
        let inv = InvariantClass::new(pair.clone(), vector(&self.representative, pair.y().rank())?)?;
        Ok(json!({ "value": p::qmodz(&transfer_pairing_term(&inv, env.character(&self.character)?)?) }))
    }
}

/// Compares the pairing term before and after enlarging the center. Without
/// `s_ddot` the canonical lift of `s_dot` is used.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnlargeCenterInvariance {
    small: String,
    large: String,
    representative: Vec<i64>,
    s_dot: String,
    #[serde(default)]
    s_ddot: Option<String>,
}

impl Op for EnlargeCenterInvariance {
    fn refs(&self) -> Vec<Ref<'_>> {
        let mut out = vec![
            r("small", Kind::Pair, &self.small),
            r("large", Kind::Pair, &self.large),
            r("s_dot", Kind::Character, &self.s_dot),
        ];
        if let Some(s) = &self.s_ddot {
            out.push(r("s_ddot", Kind::Character, s));
        }
        out
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let (small, large) = (env.pair(&self.small)?, env.pair(&self.large)?);
        let s_dot = env.character(&self.s_dot)?;
        let s_ddot = match &self.s_ddot {
            Some(id) => env.character(id)?.clone(),
            None => lift_along_enlargement(small, large, s_dot)?,
        };
        let inv = InvariantClass::new(small.clone(), vector(&self.representative, small.y().rank())?)?;
        let rep = enlarge_center_invariance(small, large, &inv, s_dot, &s_ddot)?;
        let mut extra = Map::new();
        extra.insert("value_small".into(), p::qmodz(&rep.value_small));
        extra.insert("value_large".into(), p::qmodz(&rep.value_large));
        extra.insert("s_ddot".into(), p::character(&s_ddot));
        Ok(report(&[("restricts", rep.restricts), ("equal", rep.equal())], extra))
    }
}

// local_field

single_ref_op!(Valuation, series, Kind::Series, |env, id| Ok(json!({ "valuation": valuation(env.series(id)?)? })));
single_ref_op!(AbsValue, series, Kind::Series, |env, id| Ok(p::valued(&abs_value(env.series(id)?)?)));

fn gamma_refs(gamma: &[String]) -> Vec<Ref<'_>> {
    gamma.iter().enumerate().map(|(i, g)| r(&format!("gamma[{i}]"), Kind::Series, g)).collect()
}

fn gamma_values(env: &Env, gamma: &[String]) -> Result<Vec<LaurentSeries>, TaskError> {
    gamma.iter().map(|g| env.series(g).cloned()).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsStronglyRegular {
    datum: String,
    /// Coordinates of `γ` in `Y ⊗ F^×`, one series per basis vector of `Y`.
    gamma: Vec<String>,
}

impl Op for IsStronglyRegular {
    fn refs(&self) -> Vec<Ref<'_>> {
        let mut out = vec![r("datum", Kind::Datum, &self.datum)];
        out.extend(gamma_refs(&self.gamma));
        out
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let rd = env.datum(&self.datum)?;
        Ok(json!({ "strongly_regular": is_strongly_regular(rd, &gamma_values(env, &self.gamma)?)? }))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaIv {
    datum: String,
    /// Indices of the roots of `H` among the roots of the datum.
    subsystem: Vec<usize>,
    gamma: Vec<String>,
}

impl Op for DeltaIv {
    fn refs(&self) -> Vec<Ref<'_>> {
        let mut out = vec![r("datum", Kind::Datum, &self.datum)];
        out.extend(gamma_refs(&self.gamma));
        out
    }

    fn run(&self, env: &Env) -> Result<Value, TaskError> {
        let rd = env.datum(&self.datum)?;
        if let Some(&i) = self.subsystem.iter().find(|&&i| i >= rd.roots().len()) {
            return Err(TaskError::new("InvalidInput", format!("no root with index {i}")));
        }
        let h = rd.subsystem(&self.subsystem)?;
        Ok(p::valued(&delta_iv(rd, &h, &gamma_values(env, &self.gamma)?)?))
    }
}
