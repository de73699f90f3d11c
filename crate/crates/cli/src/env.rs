//! Resolved declarations, keyed by identifier.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use rigidcoh::local_field::LaurentSeries;
use rigidcoh::qmodz::TorsionCharacter;
use rigidcoh::reductive::{cartan_matrix, Form, ReductivePair, RootDatum};
use rigidcoh::tori::IsogenyPair;
use rigidcoh::u_band::augmentation_lattice;
use rigidcoh::{FiniteGaloisModule, FiniteGroup, GaloisLattice, IntMatrix, QModZ};

use crate::document::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Group,
    Lattice,
    Module,
    /// An isogeny pair; a reductive pair stands for its torus pair.
    Pair,
    /// A root datum; a reductive pair stands for its datum.
    Datum,
    Reductive,
    Character,
    Series,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Group => "group",
            Kind::Lattice => "lattice",
            Kind::Module => "module",
            Kind::Pair => "pair",
            Kind::Datum => "root datum",
            Kind::Reductive => "reductive pair",
            Kind::Character => "character",
            Kind::Series => "series",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Decl {
    Group(Arc<FiniteGroup>),
    Lattice(GaloisLattice),
    Module(FiniteGaloisModule),
    Pair(IsogenyPair),
    Datum(RootDatum),
    Reductive(ReductivePair),
    Character(TorsionCharacter),
    Series(LaurentSeries),
}

/// Failure of a single task. `code` is the library's error code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskError {
    pub code: String,
    pub message: String,
}

impl TaskError {
    pub fn new(code: &str, message: impl fmt::Display) -> Self {
        TaskError { code: code.to_string(), message: message.to_string() }
    }
}

impl From<rigidcoh::Error> for TaskError {
    fn from(e: rigidcoh::Error) -> Self {
        TaskError::new(e.code(), &e)
    }
}

#[derive(Debug, Default)]
pub struct Env {
    decls: HashMap<String, Decl>,
}

fn missing(kind: Kind, id: &str) -> TaskError {
    TaskError::new("DanglingReference", format!("no {kind} named {id:?}"))
}

impl Env {
    pub fn has(&self, kind: Kind, id: &str) -> bool {
        matches!(
            (kind, self.decls.get(id)),
            (Kind::Group, Some(Decl::Group(_)))
                | (Kind::Lattice, Some(Decl::Lattice(_)))
                | (Kind::Module, Some(Decl::Module(_)))
                | (Kind::Pair, Some(Decl::Pair(_) | Decl::Reductive(_)))
                | (Kind::Datum, Some(Decl::Datum(_) | Decl::Reductive(_)))
                | (Kind::Reductive, Some(Decl::Reductive(_)))
                | (Kind::Character, Some(Decl::Character(_)))
                | (Kind::Series, Some(Decl::Series(_)))
        )
    }

    pub fn group(&self, id: &str) -> Result<&Arc<FiniteGroup>, TaskError> {
        match self.decls.get(id) {
            Some(Decl::Group(g)) => Ok(g),
            _ => Err(missing(Kind::Group, id)),
        }
    }

    pub fn lattice(&self, id: &str) -> Result<&GaloisLattice, TaskError> {
        match self.decls.get(id) {
            Some(Decl::Lattice(l)) => Ok(l),
            _ => Err(missing(Kind::Lattice, id)),
        }
    }

    pub fn module(&self, id: &str) -> Result<&FiniteGaloisModule, TaskError> {
        match self.decls.get(id) {
            Some(Decl::Module(m)) => Ok(m),
            _ => Err(missing(Kind::Module, id)),
        }
    }

    pub fn pair(&self, id: &str) -> Result<&IsogenyPair, TaskError> {
        match self.decls.get(id) {
            Some(Decl::Pair(p)) => Ok(p),
            Some(Decl::Reductive(r)) => Ok(r.isogeny_pair()),
            _ => Err(missing(Kind::Pair, id)),
        }
    }

    pub fn datum(&self, id: &str) -> Result<&RootDatum, TaskError> {
        match self.decls.get(id) {
            Some(Decl::Datum(d)) => Ok(d),
            Some(Decl::Reductive(r)) => Ok(r.datum()),
            _ => Err(missing(Kind::Datum, id)),
        }
    }

    pub fn reductive(&self, id: &str) -> Result<&ReductivePair, TaskError> {
        match self.decls.get(id) {
            Some(Decl::Reductive(r)) => Ok(r),
            _ => Err(missing(Kind::Reductive, id)),
        }
    }

    pub fn character(&self, id: &str) -> Result<&TorsionCharacter, TaskError> {
        match self.decls.get(id) {
            Some(Decl::Character(c)) => Ok(c),
            _ => Err(missing(Kind::Character, id)),
        }
    }

    pub fn series(&self, id: &str) -> Result<&LaurentSeries, TaskError> {
        match self.decls.get(id) {
            Some(Decl::Series(s)) => Ok(s),
            _ => Err(missing(Kind::Series, id)),
        }
    }

    /// Builds every declaration. References between declarations must point
    /// at an earlier category (groups, lattices, modules, pairs, root data,
    /// reductive pairs, characters, series); order within a category is free.
    pub fn build(doc: &TaskDocument) -> Result<Env, InputError> {
        let mut env = Env::default();
        env.check_unique(doc)?;
        for (i, d) in doc.groups.iter().enumerate() {
            let at = format!("groups[{i}]");
            let g = build_group(&d.spec).map_err(|e| InputError::schema(spec_path(&at, &d.spec), e))?;
            env.insert(&d.id, Decl::Group(Arc::new(g)));
        }
        for (i, d) in doc.lattices.iter().enumerate() {
            let at = format!("lattices[{i}]");
            let g = env.need(Kind::Group, &d.group, &format!("{at}.group"))?;
            let Decl::Group(g) = g else { unreachable!() };
            let l = build_lattice(g.clone(), &d.spec).map_err(|e| InputError::schema(&at, e))?;
            env.insert(&d.id, Decl::Lattice(l));
        }
        for (i, d) in doc.modules.iter().enumerate() {
            let at = format!("modules[{i}]");
            let l = env.lattice_at(&d.lattice, &format!("{at}.lattice"))?;
            let m = matrix(&d.relations, l.rank())
                .and_then(|p| FiniteGaloisModule::quotient(l, &p).map_err(|e| e.to_string()))
                .map_err(|e| InputError::schema(format!("{at}.relations"), e))?;
            env.insert(&d.id, Decl::Module(m));
        }
        for (i, d) in doc.pairs.iter().enumerate() {
            let at = format!("pairs[{i}]");
            let y = env.lattice_at(&d.lattice, &format!("{at}.lattice"))?;
            let p = build_pair(y, &d.spec).map_err(|e| InputError::schema(&at, e))?;
            env.insert(&d.id, Decl::Pair(p));
        }
        for (i, d) in doc.root_data.iter().enumerate() {
            let at = format!("root_data[{i}]");
            let rd = env.build_datum(&d.spec, &at)?;
            env.insert(&d.id, Decl::Datum(rd));
        }
        for (i, d) in doc.reductive_pairs.iter().enumerate() {
            let at = format!("reductive_pairs[{i}]");
            let rp = env.build_reductive(d, &at)?;
            env.insert(&d.id, Decl::Reductive(rp));
        }
        for (i, d) in doc.characters.iter().enumerate() {
            let at = format!("characters[{i}].values");
            let values: Result<Vec<QModZ>, _> = d.values.iter().map(|s| s.parse::<QModZ>()).collect();
            let values = values.map_err(|e| InputError::schema(at, e))?;
            env.insert(&d.id, Decl::Character(TorsionCharacter::new(values)));
        }
        for (i, d) in doc.series.iter().enumerate() {
            let s = LaurentSeries::new(d.p, d.start, &d.coeffs, d.precision)
                .map_err(|e| InputError::schema(format!("series[{i}]"), e))?;
            env.insert(&d.id, Decl::Series(s));
        }
        Ok(env)
    }

    fn insert(&mut self, id: &str, d: Decl) {
        self.decls.insert(id.to_string(), d);
    }

    fn check_unique(&self, doc: &TaskDocument) -> Result<(), InputError> {
        let ids = [
            ("groups", doc.groups.iter().map(|d| d.id.as_str()).collect::<Vec<_>>()),
            ("lattices", doc.lattices.iter().map(|d| d.id.as_str()).collect()),
            ("modules", doc.modules.iter().map(|d| d.id.as_str()).collect()),
            ("pairs", doc.pairs.iter().map(|d| d.id.as_str()).collect()),
            ("root_data", doc.root_data.iter().map(|d| d.id.as_str()).collect()),
            ("reductive_pairs", doc.reductive_pairs.iter().map(|d| d.id.as_str()).collect()),
            ("characters", doc.characters.iter().map(|d| d.id.as_str()).collect()),
            ("series", doc.series.iter().map(|d| d.id.as_str()).collect()),
        ];
        let mut seen = HashMap::new();
        for (section, list) in &ids {
            for (i, id) in list.iter().enumerate() {
                let at = format!("{section}[{i}].id");
                if let Some(first) = seen.insert(*id, at.clone()) {
                    return Err(InputError::schema(at, format!("identifier {id:?} already declared at {first}")));
                }
            }
        }
        Ok(())
    }

    /// Looks up a reference made by a declaration or task argument.
    pub fn need(&self, kind: Kind, id: &str, at: &str) -> Result<&Decl, InputError> {
        if self.has(kind, id) {
            Ok(&self.decls[id])
        } else {
            Err(InputError::dangling(at, id, &kind.to_string()))
        }
    }

    fn lattice_at(&self, id: &str, at: &str) -> Result<&GaloisLattice, InputError> {
        self.need(Kind::Lattice, id, at)?;
        Ok(self.lattice(id).expect("checked"))
    }

    fn build_datum(&self, spec: &DatumSpec, at: &str) -> Result<RootDatum, InputError> {
        match spec {
            DatumSpec::Cartan { family, rank, form, action } => {
                let form = match form {
                    FormSpec::SimplyConnected => Form::SimplyConnected,
                    FormSpec::Adjoint => Form::Adjoint,
                };
                let rd = cartan_matrix(*family, *rank)
                    .and_then(|c| RootDatum::from_cartan(&c, form))
                    .map_err(|e| InputError::schema(at, e))?;
                let Some(action) = action else { return Ok(rd) };
                let at = format!("{at}.action");
                let generator = match action {
                    ActionSpec::Split { group } => {
                        self.need(Kind::Group, group, &format!("{at}.group"))?;
                        let g = self.group(group).expect("checked").clone();
                        let rank = rd.rank();
                        return rd.with_galois(GaloisLattice::trivial(g, rank)).map_err(|e| InputError::schema(at, e));
                    }
                    ActionSpec::Diagram { permutation } => {
                        rd.diagram_automorphism(permutation).map_err(|e| InputError::schema(&at, e))?
                    }
                    ActionSpec::Coxeter => rd.coxeter_element(),
                    ActionSpec::Weyl { word } => {
                        let simple = rd.simple_indices();
                        let mut w = IntMatrix::identity(rd.rank());
                        for &k in word {
                            let &i = simple
                                .get(k)
                                .ok_or_else(|| InputError::schema(format!("{at}.word"), format!("no simple root {k}")))?;
                            w = &w * &rd.reflection(i);
                        }
                        w
                    }
                    ActionSpec::Matrix { generator } => matrix(generator, rd.rank()).map_err(|e| InputError::schema(&at, e))?,
                };
                let m = order_of(&generator)
                    .ok_or_else(|| InputError::schema(&at, "generator does not have finite order"))?;
                rd.with_cyclic_action(m, &generator).map_err(|e| InputError::schema(at, e))
            }
            DatumSpec::Torus { lattice } => {
                Ok(RootDatum::torus(self.lattice_at(lattice, &format!("{at}.lattice"))?.clone()))
            }
            DatumSpec::Explicit { lattice, roots, coroots, simple } => {
                let y = self.lattice_at(lattice, &format!("{at}.lattice"))?.clone();
                let rows = |r: &Rows| r.iter().map(|v| rigidcoh::lattice::int_vec(v)).collect();
                RootDatum::new(rows(roots), rows(coroots), simple.clone(), y).map_err(|e| InputError::schema(at, e))
            }
        }
    }

    fn build_reductive(&self, d: &ReductiveDecl, at: &str) -> Result<ReductivePair, InputError> {
        self.need(Kind::Datum, &d.datum, &format!("{at}.datum"))?;
        let rd = self.datum(&d.datum).expect("checked").clone();
        match (d.center, &d.pair) {
            (CenterSpec::Trivial, None) => Ok(ReductivePair::trivial_center(rd)),
            (CenterSpec::Full, None) => ReductivePair::full_center(rd).map_err(|e| InputError::schema(at, e)),
            (CenterSpec::Pair, Some(p)) => {
                let at_pair = format!("{at}.pair");
                self.need(Kind::Pair, p, &at_pair)?;
                let pair = self.pair(p).expect("checked").clone();
                ReductivePair::new(rd, pair).map_err(|e| InputError::schema(at_pair, e))
            }
            (CenterSpec::Pair, None) => Err(InputError::schema(format!("{at}.pair"), "center \"pair\" needs a pair")),
            (_, Some(_)) => Err(InputError::schema(format!("{at}.pair"), "a pair is only allowed with center \"pair\"")),
        }
    }
}

fn spec_path(at: &str, spec: &GroupSpec) -> String {
    match spec {
        GroupSpec::Table { .. } => format!("{at}.table"),
        GroupSpec::Permutations { .. } => format!("{at}.generators"),
        _ => at.to_string(),
    }
}

fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, String> {
    let positive = |n: usize, what: &str| if n == 0 { Err(format!("{what} must be positive")) } else { Ok(n) };
    Ok(match spec {
        GroupSpec::Trivial => FiniteGroup::trivial(),
        GroupSpec::Cyclic { order } => FiniteGroup::cyclic(positive(*order, "order")?),
        GroupSpec::Dihedral { n } => {
            if *n < 2 {
                return Err("dihedral groups need n ≥ 2".into());
            }
            FiniteGroup::dihedral(*n)
        }
        GroupSpec::Quaternion => FiniteGroup::quaternion(),
        GroupSpec::Symmetric { n } => FiniteGroup::symmetric(positive(*n, "n")?),
        GroupSpec::Abelian { orders } => {
            let mut g = FiniteGroup::trivial();
            for &o in orders {
                g = FiniteGroup::direct_product(&g, &FiniteGroup::cyclic(positive(o, "order")?));
            }
            g
        }
        GroupSpec::Named { name } => FiniteGroup::small_groups_up_to_8()
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
            .ok_or_else(|| format!("unknown group name {name:?}"))?,
        GroupSpec::Table { table } => FiniteGroup::from_table(table.clone()).map_err(|e| e.to_string())?,
        GroupSpec::Permutations { degree, generators } => {
            for g in generators {
                let mut seen = vec![false; *degree];
                if g.len() != *degree || g.iter().any(|&x| x >= *degree || std::mem::replace(&mut seen[x], true)) {
                    return Err(format!("{g:?} is not a permutation of 0..{degree}"));
                }
            }
            FiniteGroup::from_permutations(*degree, generators)
        }
    })
}

fn build_lattice(g: Arc<FiniteGroup>, spec: &LatticeSpec) -> Result<GaloisLattice, String> {
    match spec {
        LatticeSpec::Action { rank, generators, images } => {
            if generators.iter().any(|&s| s >= g.order()) {
                return Err("generator index out of range".into());
            }
            let images = images.iter().map(|m| matrix(m, *rank)).collect::<Result<Vec<_>, _>>()?;
            GaloisLattice::from_generator_images(g, *rank, generators, &images).map_err(|e| e.to_string())
        }
        LatticeSpec::Full { rank, matrices } => {
            let action = matrices.iter().map(|m| matrix(m, *rank)).collect::<Result<Vec<_>, _>>()?;
            GaloisLattice::new(g, *rank, action).map_err(|e| e.to_string())
        }
        LatticeSpec::Trivial { rank } => Ok(GaloisLattice::trivial(g, *rank)),
        LatticeSpec::Regular { copies } => Ok(GaloisLattice::regular(g, *copies)),
        LatticeSpec::Augmentation => Ok(augmentation_lattice(&g)),
    }
}

fn build_pair(y: &GaloisLattice, spec: &PairSpec) -> Result<IsogenyPair, String> {
    match spec {
        PairSpec::Trivial => Ok(IsogenyPair::trivial(y)),
        PairSpec::Overlattice { generators } => {
            let mut gens = Vec::new();
            for v in generators {
                let row: Result<Vec<BigRational>, _> = v.iter().map(|s| s.trim().parse::<BigRational>()).collect();
                gens.push(row.map_err(|_| format!("not a vector of fractions: {v:?}"))?);
            }
            IsogenyPair::from_overlattice(y, &gens).map_err(|e| e.to_string())
        }
        PairSpec::Inclusion { matrix: m } => {
            IsogenyPair::from_inclusion_matrix(y, &matrix(m, y.rank())?).map_err(|e| e.to_string())
        }
    }
}

/// Matrix from rows. `cols` is only used when there are no rows.
pub fn matrix(rows: &Rows, cols: usize) -> Result<IntMatrix, String> {
    let cols = rows.first().map_or(cols, |r| r.len());
    if rows.iter().any(|r| r.len() != cols) {
        return Err("matrix rows have different lengths".into());
    }
    Ok(IntMatrix::from_rows(cols, rows.iter().map(|r| rigidcoh::lattice::int_vec(r)).collect()))
}

/// Multiplicative order of a square integer matrix, if at most 1000.
pub fn order_of(m: &IntMatrix) -> Option<usize> {
    if m.nrows() != m.ncols() {
        return None;
    }
    let mut p = m.clone();
    for k in 1..=1000 {
        if p.is_identity() {
            return Some(k);
        }
        p = &p * m;
    }
    None
}
