//! The bar resolution `B_• → Z`, the Hom-complex `Hom(B_•, D)`, the maps
//! `Ψ` and `Ψ⁻¹` between it and the cochain complex, and the lifting of
//! transformations out of `B_n` through objectwise epimorphisms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::cohomology::{CochainComplex, CochainLevel, CohomologyError};
use crate::exactalg::{homology, solve, AbelianInvariants, AlgebraError, GroupHom, IntMatrix, Lattice, PresentedAbelianGroup};
use crate::facnerve::{all_morphisms, nerve, FacMorphism};
use crate::monoid::{Elem, MonoidWithZero};
use crate::natsys::{check_functoriality, trivial_z, BarSystem, NatSysError, NaturalSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    NatSys(#[from] NatSysError),
    #[error("boundary ∂_n needs n ≥ 1")]
    DegreeTooSmall,
    #[error("component at object {0} has the wrong shape or is missing")]
    BadComponent(Elem),
    #[error("transformations do not share the intermediate system")]
    NotComposable,
}

/// A family of maps `source(a) → target(a)`, one per nonzero object.
#[derive(Clone, Debug)]
pub struct NatTransformation {
    source: Arc<NaturalSystem>,
    target: Arc<NaturalSystem>,
    components: BTreeMap<Elem, IntMatrix>,
}

/// A morphism `(α, a, β)` whose naturality square fails, or an object whose
/// component does not respect relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NaturalityViolation {
    NotWellDefined(Elem),
    Square(FacMorphism),
}

impl NaturalityViolation {
    pub fn describe(&self, m: &MonoidWithZero) -> String {
        match self {
            NaturalityViolation::NotWellDefined(a) => {
                format!("component at {} does not respect relations", m.name(*a))
            }
            NaturalityViolation::Square(f) => format!(
                "square for ({}, {}, {}) does not commute",
                m.name(f.alpha),
                m.name(f.source),
                m.name(f.beta)
            ),
        }
    }
}

impl NatTransformation {
    pub fn new(
        m: &MonoidWithZero,
        source: Arc<NaturalSystem>,
        target: Arc<NaturalSystem>,
        components: BTreeMap<Elem, IntMatrix>,
    ) -> Result<Self, ResolutionError> {
        for a in m.nonzero() {
            let expected = (target.value(a).rank(), source.value(a).rank());
            match components.get(&a) {
                Some(c) if c.shape() == expected => {}
                _ => return Err(ResolutionError::BadComponent(a)),
            }
        }
        if components.len() != m.order() - 1 {
            let extra = components.keys().copied().find(|&a| a == m.zero()).unwrap_or(m.zero());
            return Err(ResolutionError::BadComponent(extra));
        }
        Ok(NatTransformation {
            source,
            target,
            components,
        })
    }

    pub fn identity(m: &MonoidWithZero, system: Arc<NaturalSystem>) -> Self {
        let components = m
            .nonzero()
            .map(|a| (a, IntMatrix::identity(system.value(a).rank())))
            .collect();
        NatTransformation {
            source: system.clone(),
            target: system,
            components,
        }
    }

    pub fn zero(m: &MonoidWithZero, source: Arc<NaturalSystem>, target: Arc<NaturalSystem>) -> Self {
        let components = m
            .nonzero()
            .map(|a| (a, IntMatrix::zeros(target.value(a).rank(), source.value(a).rank())))
            .collect();
        NatTransformation {
            source,
            target,
            components,
        }
    }

    pub fn source(&self) -> &Arc<NaturalSystem> {
        &self.source
    }

    pub fn target(&self) -> &Arc<NaturalSystem> {
        &self.target
    }

    pub fn component(&self, a: Elem) -> &IntMatrix {
        &self.components[&a]
    }

    pub fn components(&self) -> &BTreeMap<Elem, IntMatrix> {
        &self.components
    }

    pub fn component_hom(&self, a: Elem) -> GroupHom {
        GroupHom::new_unchecked(
            self.source.value(a).clone(),
            self.target.value(a).clone(),
            self.components[&a].clone(),
        )
        .expect("shapes checked on construction")
    }

    /// `self ∘ other`, objectwise.
    pub fn compose(&self, other: &NatTransformation) -> Result<NatTransformation, ResolutionError> {
        if !Arc::ptr_eq(&other.target, &self.source) && *other.target != *self.source {
            return Err(ResolutionError::NotComposable);
        }
        let components = self
            .components
            .iter()
            .map(|(&a, c)| (a, c * &other.components[&a]))
            .collect();
        Ok(NatTransformation {
            source: other.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    /// Objectwise equality modulo the relations of the target.
    pub fn agrees_with(&self, other: &NatTransformation) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().all(|(&a, c)| {
                other
                    .components
                    .get(&a)
                    .is_some_and(|d| c.shape() == d.shape() && self.target.value(a).maps_agree(c, d))
            })
    }

    pub fn is_zero(&self) -> bool {
        self.components
            .iter()
            .all(|(&a, c)| self.target.value(a).annihilates_columns(c))
    }

    /// Every failure of well-definedness or of a naturality square, over all
    /// morphisms of the category.
    pub fn check_naturality(&self, m: &MonoidWithZero) -> Vec<NaturalityViolation> {
        let mut out = Vec::new();
        for a in m.nonzero() {
            if !self.component_hom(a).is_well_defined() {
                out.push(NaturalityViolation::NotWellDefined(a));
            }
        }
        for f in all_morphisms(m) {
            let b = f.target;
            let lhs = &self.target.morphism_map(m, f.alpha, f.source, f.beta) * &self.components[&f.source];
            let rhs = &self.components[&b] * &self.source.morphism_map(m, f.alpha, f.source, f.beta);
            if !self.target.value(b).maps_agree(&lhs, &rhs) {
                out.push(NaturalityViolation::Square(f));
            }
        }
        out
    }

    pub fn is_natural(&self, m: &MonoidWithZero) -> bool {
        self.check_naturality(m).is_empty()
    }

    /// First object whose component is not onto.
    pub fn first_non_surjective(&self) -> Option<Elem> {
        self.components
            .keys()
            .copied()
            .find(|&a| !self.component_hom(a).is_surjective())
    }
}

/// `B_0, …, B_top` with shared handles.
#[derive(Clone, Debug)]
pub struct BarComplex {
    levels: Vec<BarSystem>,
    systems: Vec<Arc<NaturalSystem>>,
}

impl BarComplex {
    pub fn new(m: &MonoidWithZero, top: usize) -> Self {
        let levels: Vec<BarSystem> = (0..=top).map(|n| BarSystem::build(m, n)).collect();
        let systems = levels.iter().map(|b| Arc::new(b.system().clone())).collect();
        BarComplex { levels, systems }
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &BarSystem {
        &self.levels[n]
    }

    pub fn system(&self, n: usize) -> &Arc<NaturalSystem> {
        &self.systems[n]
    }

    /// `∂_n : B_n → B_{n−1}` for `1 ≤ n ≤ top`.
    pub fn boundary(&self, m: &MonoidWithZero, n: usize) -> Result<NatTransformation, ResolutionError> {
        if n == 0 || n > self.top() {
            return Err(ResolutionError::DegreeTooSmall);
        }
        let (hi, lo) = (&self.levels[n], &self.levels[n - 1]);
        let components = m
            .nonzero()
            .map(|a| (a, boundary_component(m, hi, lo, a)))
            .collect();
        Ok(NatTransformation {
            source: self.systems[n].clone(),
            target: self.systems[n - 1].clone(),
            components,
        })
    }
}

/// Faces `d_i [a_0, …, a_{n+1}] = [a_0, …, a_i a_{i+1}, …, a_{n+1}]`, `0 ≤ i ≤ n`.
fn faces<'a>(m: &'a MonoidWithZero, g: &'a [Elem]) -> impl Iterator<Item = (usize, Vec<Elem>)> + 'a {
    (0..g.len() - 1).map(move |i| {
        let mut h = Vec::with_capacity(g.len() - 1);
        h.extend_from_slice(&g[..i]);
        h.push(m.mul(g[i], g[i + 1]));
        h.extend_from_slice(&g[i + 2..]);
        (i, h)
    })
}

fn sign(i: usize) -> BigInt {
    if i.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn boundary_component(m: &MonoidWithZero, hi: &BarSystem, lo: &BarSystem, a: Elem) -> IntMatrix {
    let gens = hi.generators(a);
    let mut mat = IntMatrix::zeros(lo.generators(a).len(), gens.len());
    for (j, g) in gens.iter().enumerate() {
        for (i, h) in faces(m, g) {
            let row = lo.position(a, &h).expect("faces keep the product");
            mat[(row, j)] += sign(i);
        }
    }
    mat
}

/// `∂_n : B_n → B_{n−1}`.
pub fn bar_boundary(m: &MonoidWithZero, n: usize) -> Result<NatTransformation, ResolutionError> {
    if n == 0 {
        return Err(ResolutionError::DegreeTooSmall);
    }
    BarComplex::new(m, n).boundary(m, n)
}

/// `ε : B_0 → Z`, `ε_a[a_0, a_1] = [a]`.
pub fn augmentation(m: &MonoidWithZero) -> NatTransformation {
    let b0 = BarSystem::build(m, 0);
    augmentation_from(m, &b0)
}

fn augmentation_from(m: &MonoidWithZero, b0: &BarSystem) -> NatTransformation {
    let components = m
        .nonzero()
        .map(|a| (a, IntMatrix::from_fn(1, b0.generators(a).len(), |_, _| BigInt::one())))
        .collect();
    NatTransformation {
        source: Arc::new(b0.system().clone()),
        target: Arc::new(trivial_z(m)),
        components,
    }
}

/// Where the augmented bar complex at an object fails to be exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessFailure {
    pub object: Elem,
    pub position: ComplexPosition,
    pub kind: FailureKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexPosition {
    /// `Z_a`, i.e. surjectivity of `ε_a`.
    Augmentation,
    /// `B_k(a)`.
    Bar(usize),
}

impl fmt::Display for ComplexPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexPosition::Augmentation => write!(f, "Z"),
            ComplexPosition::Bar(k) => write!(f, "B_{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// Consecutive maps do not compose to zero.
    NotAComplex,
    /// Nonzero homology.
    Homology(AbelianInvariants),
}

/// Matrices `ε_a, ∂_1, …, ∂_top` at object `a`, the first one `1 × |B_0(a)|`.
pub fn augmented_bar_matrices(m: &MonoidWithZero, bar: &BarComplex, a: Elem) -> Vec<IntMatrix> {
    let mut out = vec![IntMatrix::from_fn(1, bar.level(0).generators(a).len(), |_, _| BigInt::one())];
    for n in 1..=bar.top() {
        out.push(boundary_component(m, bar.level(n), bar.level(n - 1), a));
    }
    out
}

/// Exactness of `F_top → … → F_0 → F_{−1} → 0` for free groups, where
/// `maps[k] : F_k → F_{k−1}`. Checked at `F_{−1}` and `F_0 … F_{top−1}`; the
/// error carries the position (`None` for `F_{−1}`).
pub fn check_exact_sequence(maps: &[IntMatrix]) -> Result<(), (Option<usize>, FailureKind)> {
    let free = |n: usize| PresentedAbelianGroup::free(n);
    let hom = |mat: &IntMatrix| {
        GroupHom::new_unchecked(free(mat.cols()), free(mat.rows()), mat.clone()).expect("shape from matrix")
    };
    let Some(first) = maps.first() else {
        return Ok(());
    };
    let to_zero = GroupHom::zero(&free(first.rows()), &PresentedAbelianGroup::trivial());
    let mut position = None;
    let mut outgoing = to_zero;
    for (k, mat) in maps.iter().enumerate() {
        let incoming = hom(mat);
        match homology(&outgoing, &incoming) {
            Ok(h) if h.is_trivial() => {}
            Ok(h) => return Err((position, FailureKind::Homology(h))),
            Err(_) => return Err((position, FailureKind::NotAComplex)),
        }
        position = Some(k);
        outgoing = incoming;
    }
    Ok(())
}

/// Exactness of the augmented bar complex at every object, positions `Z_a`
/// and `B_0 … B_{n_max − 1}`.
pub fn check_resolution_exact(m: &MonoidWithZero, n_max: usize) -> Result<(), ExactnessFailure> {
    let bar = BarComplex::new(m, n_max.max(1));
    check_resolution_exact_with(m, &bar)
}

pub fn check_resolution_exact_with(m: &MonoidWithZero, bar: &BarComplex) -> Result<(), ExactnessFailure> {
    for a in m.nonzero() {
        let maps = augmented_bar_matrices(m, bar, a);
        check_exact_sequence(&maps).map_err(|(pos, kind)| ExactnessFailure {
            object: a,
            position: pos.map_or(ComplexPosition::Augmentation, ComplexPosition::Bar),
            kind,
        })?;
    }
    Ok(())
}

/// Coordinates of `X_n = ⊕_a ⊕_{g ∈ gen B_n(a)} D_a`: a transformation
/// `B_n → D` written as the list of its values on generators.
#[derive(Clone, Debug)]
struct Ambient {
    /// `offsets[a][j]`: first coordinate of generator `j` of `B_n(a)`.
    offsets: Vec<Vec<usize>>,
    total: usize,
    group: PresentedAbelianGroup,
}

impl Ambient {
    fn new(m: &MonoidWithZero, d: &NaturalSystem, bar: &BarSystem) -> Self {
        let mut offsets = vec![Vec::new(); m.order()];
        let mut total = 0;
        let mut groups = Vec::new();
        for a in m.nonzero() {
            let r = d.value(a).rank();
            for _ in bar.generators(a) {
                offsets[a].push(total);
                total += r;
                groups.push(d.value(a));
            }
        }
        Ambient {
            offsets,
            total,
            group: PresentedAbelianGroup::direct_sum(groups),
        }
    }

    fn to_transformation(
        &self,
        m: &MonoidWithZero,
        bar: &Arc<NaturalSystem>,
        d: &Arc<NaturalSystem>,
        x: &[BigInt],
    ) -> NatTransformation {
        let components = m
            .nonzero()
            .map(|a| {
                let r = d.value(a).rank();
                let offs = &self.offsets[a];
                (a, IntMatrix::from_fn(r, offs.len(), |i, j| x[offs[j] + i].clone()))
            })
            .collect();
        NatTransformation {
            source: bar.clone(),
            target: d.clone(),
            components,
        }
    }
}

/// `Hom_NatS(B_n, D)`, computed by solving every naturality equation.
///
/// `lattice` is the set of integer vectors of `X_n` that are natural modulo
/// the relations of `D`; the group is that lattice modulo the relations of
/// `X_n`, presented on the lattice basis.
#[derive(Clone, Debug)]
pub struct HomGroup {
    degree: usize,
    ambient: Ambient,
    lattice: Lattice,
    basis: IntMatrix,
    group: PresentedAbelianGroup,
}

impl HomGroup {
    pub fn build(m: &MonoidWithZero, d: &NaturalSystem, bar: &BarSystem) -> Result<Self, ResolutionError> {
        let ambient = Ambient::new(m, d, bar);
        let (constraints, targets) = naturality_constraints(m, d, bar, &ambient);
        let target_group = PresentedAbelianGroup::direct_sum(targets);
        let hom = GroupHom::new_unchecked(ambient.group.clone(), target_group, constraints)?;
        let lattice = hom.kernel_lattice();
        let basis = lattice.basis_matrix();
        let rel_cols: Vec<Vec<BigInt>> = ambient
            .group
            .relations()
            .columns()
            .map(|c| {
                lattice
                    .coordinates(&c)
                    .expect("relations of D_a are natural since D is a functor")
            })
            .collect();
        let group = PresentedAbelianGroup::new(lattice.rank(), IntMatrix::from_columns(lattice.rank(), &rel_cols))?;
        Ok(HomGroup {
            degree: bar.degree(),
            ambient,
            lattice,
            basis,
            group,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &PresentedAbelianGroup {
        &self.group
    }

    pub fn invariants(&self) -> AbelianInvariants {
        self.group.invariants()
    }

    /// Dimension of the ambient space `X_n`.
    pub fn ambient_rank(&self) -> usize {
        self.ambient.total
    }

    /// The lattice basis as columns of an `ambient × rank` matrix.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Lattice coordinates of an ambient vector, if it is natural.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        self.lattice.coordinates(x)
    }

    pub fn element(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.basis.mul_vec(coords)
    }
}

/// Rows `D(α, β) x_{a, g} − x_{b, B_n(α, β) g}` for every morphism
/// `(α, a, β) : a → b` and generator `g` of `B_n(a)`, with the group each
/// row block lives in.
fn naturality_constraints<'d>(
    m: &MonoidWithZero,
    d: &'d NaturalSystem,
    bar: &BarSystem,
    ambient: &Ambient,
) -> (IntMatrix, Vec<&'d PresentedAbelianGroup>) {
    let mut blocks: Vec<(usize, usize, IntMatrix, usize)> = Vec::new();
    let mut targets = Vec::new();
    let mut rows = 0;
    for f in all_morphisms(m) {
        // identity squares commute trivially
        if f.alpha == m.identity() && f.beta == m.identity() {
            continue;
        }
        let map = d.morphism_map(m, f.alpha, f.source, f.beta);
        let b = f.target;
        for (j, g) in bar.generators(f.source).iter().enumerate() {
            let mut h = g.clone();
            h[0] = m.mul(f.alpha, h[0]);
            let last = h.len() - 1;
            h[last] = m.mul(h[last], f.beta);
            let k = bar.position(b, &h).expect("bar maps preserve generators");
            blocks.push((rows, ambient.offsets[f.source][j], map.clone(), ambient.offsets[b][k]));
            targets.push(d.value(b));
            rows += map.rows();
        }
    }
    let mut c = IntMatrix::zeros(rows, ambient.total);
    for (r0, src, map, dst) in blocks {
        c.add_block(r0, src, &map, 1);
        c.add_block(r0, dst, &IntMatrix::identity(map.rows()), -1);
    }
    (c, targets)
}

/// `X_n → X_{n+1}`, `τ ↦ τ ∘ ∂_{n+1}`, in ambient coordinates.
fn precompose_boundary(
    m: &MonoidWithZero,
    d: &NaturalSystem,
    lo: (&BarSystem, &Ambient),
    hi: (&BarSystem, &Ambient),
) -> IntMatrix {
    let mut mat = IntMatrix::zeros(hi.1.total, lo.1.total);
    for a in m.nonzero() {
        let id = IntMatrix::identity(d.value(a).rank());
        for (j, g) in hi.0.generators(a).iter().enumerate() {
            for (i, h) in faces(m, g) {
                let k = lo.0.position(a, &h).expect("faces keep the product");
                let sgn = if i % 2 == 0 { 1 } else { -1 };
                mat.add_block(hi.1.offsets[a][j], lo.1.offsets[a][k], &id, sgn);
            }
        }
    }
    mat
}

/// `Hom(B_0, D) → … → Hom(B_{top+1}, D)` with `P_n = Hom(∂_{n+1}, D)`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    bar: BarComplex,
    system: Arc<NaturalSystem>,
    levels: Vec<HomGroup>,
    differentials: Vec<GroupHom>,
}

impl HomComplex {
    pub fn new(m: &MonoidWithZero, d: &NaturalSystem, top: usize) -> Result<Self, ResolutionError> {
        ensure_functorial(m, d)?;
        let bar = BarComplex::new(m, top + 1);
        let levels = (0..=top + 1)
            .map(|n| HomGroup::build(m, d, bar.level(n)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut differentials = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let (lo, hi) = (&levels[n], &levels[n + 1]);
            let q = precompose_boundary(m, d, (bar.level(n), &lo.ambient), (bar.level(n + 1), &hi.ambient));
            let image = &q * &lo.basis;
            let cols: Vec<Vec<BigInt>> = image
                .columns()
                .map(|c| {
                    hi.lattice
                        .coordinates(&c)
                        .expect("precomposition with a natural map is natural")
                })
                .collect();
            let mat = IntMatrix::from_columns(hi.group.rank(), &cols);
            differentials.push(GroupHom::new(lo.group.clone(), hi.group.clone(), mat)?);
        }
        Ok(HomComplex {
            bar,
            system: Arc::new(d.clone()),
            levels,
            differentials,
        })
    }

    pub fn top(&self) -> usize {
        self.differentials.len() - 1
    }

    pub fn level(&self, n: usize) -> &HomGroup {
        &self.levels[n]
    }

    pub fn differential(&self, n: usize) -> &GroupHom {
        &self.differentials[n]
    }

    pub fn bar(&self) -> &BarComplex {
        &self.bar
    }

    /// `Ext^n(Z, D)` read off this complex, `n ≤ top`.
    pub fn cohomology(&self, n: usize) -> Result<AbelianInvariants, ResolutionError> {
        if n > self.top() {
            return Err(CohomologyError::DegreeOutOfRange(n).into());
        }
        let incoming = if n == 0 {
            GroupHom::zero(&PresentedAbelianGroup::trivial(), self.levels[0].group())
        } else {
            self.differentials[n - 1].clone()
        };
        Ok(homology(&self.differentials[n], &incoming)?)
    }

    /// The element of `Hom(B_n, D)` with the given lattice coordinates.
    pub fn transformation(&self, m: &MonoidWithZero, n: usize, coords: &[BigInt]) -> NatTransformation {
        let level = &self.levels[n];
        level
            .ambient
            .to_transformation(m, self.bar.system(n), &self.system, &level.element(coords))
    }

    /// `Ψ^n` as a map `Hom(B_n, D) → C^n(S, D)`.
    pub fn psi_matrix(&self, m: &MonoidWithZero, cochains: &CochainLevel) -> GroupHom {
        let n = cochains.degree();
        let select = psi_selection(m, &self.system, self.bar.level(n), &self.levels[n].ambient, cochains);
        GroupHom::new_unchecked(
            self.levels[n].group.clone(),
            cochains.group().clone(),
            &select * &self.levels[n].basis,
        )
        .expect("shapes agree")
    }

    /// `Ψ⁻¹` as a map `C^n(S, D) → Hom(B_n, D)`. Fails with the index of a
    /// cochain basis element whose image is not natural.
    pub fn psi_inverse_matrix(&self, m: &MonoidWithZero, cochains: &CochainLevel) -> Result<GroupHom, usize> {
        let n = cochains.degree();
        let ext = psi_inverse_extension(m, &self.system, self.bar.level(n), &self.levels[n].ambient, cochains);
        let mut cols = Vec::with_capacity(ext.cols());
        for (j, c) in ext.columns().enumerate() {
            cols.push(self.levels[n].lattice.coordinates(&c).ok_or(j)?);
        }
        Ok(GroupHom::new_unchecked(
            cochains.group().clone(),
            self.levels[n].group.clone(),
            IntMatrix::from_columns(self.levels[n].group.rank(), &cols),
        )
        .expect("shapes agree"))
    }
}

fn ensure_functorial(m: &MonoidWithZero, d: &NaturalSystem) -> Result<(), ResolutionError> {
    let violations = check_functoriality(m, d)?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CohomologyError::NotFunctorial(violations).into())
    }
}

/// Ambient-to-cochain matrix reading `τ_{prod t}[1, t, 1]` for each `t ∈ Ner_n`.
fn psi_selection(
    m: &MonoidWithZero,
    d: &NaturalSystem,
    bar: &BarSystem,
    ambient: &Ambient,
    cochains: &CochainLevel,
) -> IntMatrix {
    let mut mat = IntMatrix::zeros(cochains.rank(), ambient.total);
    for (i, t) in cochains.tuples().iter().enumerate() {
        let a = t.product(m);
        let g = distinguished(m, t.entries());
        let j = bar.position(a, &g).expect("[1, t, 1] is a generator");
        let r = d.value(a).rank();
        mat.add_block(cochains.block(i).start, ambient.offsets[a][j], &IntMatrix::identity(r), 1);
    }
    mat
}

/// Cochain-to-ambient matrix `f ↦ (D(a_0, a_{n+1}) f(a_1, …, a_n))`.
fn psi_inverse_extension(
    m: &MonoidWithZero,
    d: &NaturalSystem,
    bar: &BarSystem,
    ambient: &Ambient,
    cochains: &CochainLevel,
) -> IntMatrix {
    let mut mat = IntMatrix::zeros(ambient.total, cochains.rank());
    for a in m.nonzero() {
        for (j, g) in bar.generators(a).iter().enumerate() {
            let inner = &g[1..g.len() - 1];
            let block = cochains.block_of(inner).expect("inner tuple has nonzero product");
            let map = d.morphism_map(m, g[0], m.product(inner), g[g.len() - 1]);
            mat.set_block(ambient.offsets[a][j], block.start, &map);
        }
    }
    mat
}

fn distinguished(m: &MonoidWithZero, t: &[Elem]) -> Vec<Elem> {
    let mut g = Vec::with_capacity(t.len() + 2);
    g.push(m.identity());
    g.extend_from_slice(t);
    g.push(m.identity());
    g
}

/// `Ψ^n τ`: the cochain `t ↦ τ_{prod t}[1, t, 1]`.
pub fn psi(m: &MonoidWithZero, d: &NaturalSystem, n: usize, tau: &NatTransformation) -> Vec<BigInt> {
    let bar = BarSystem::build(m, n);
    let mut out = Vec::new();
    for t in nerve(m, n) {
        let a = t.product(m);
        let j = bar.position(a, &distinguished(m, t.entries())).expect("[1, t, 1] is a generator");
        let c = tau.component(a);
        debug_assert_eq!(c.rows(), d.value(a).rank());
        out.extend((0..c.rows()).map(|i| c[(i, j)].clone()));
    }
    out
}

/// `Ψ⁻¹ f`: `φ_a[a_0, …, a_{n+1}] = D(a_0, a_{n+1}) f(a_1, …, a_n)`.
pub fn psi_inverse(
    m: &MonoidWithZero,
    d: &Arc<NaturalSystem>,
    n: usize,
    f: &[BigInt],
) -> Result<NatTransformation, ResolutionError> {
    let level = crate::cohomology::cochain_level(m, d, n)?;
    if f.len() != level.rank() {
        return Err(AlgebraError::ShapeMismatch {
            context: "cochain",
            expected: (level.rank(), 1),
            found: (f.len(), 1),
        }
        .into());
    }
    let bar = BarSystem::build(m, n);
    let components = m
        .nonzero()
        .map(|a| {
            let gens = bar.generators(a);
            let mut c = IntMatrix::zeros(d.value(a).rank(), gens.len());
            for (j, g) in gens.iter().enumerate() {
                let inner = &g[1..g.len() - 1];
                let block = level.block_of(inner).expect("inner tuple has nonzero product");
                let map = d.morphism_map(m, g[0], m.product(inner), g[g.len() - 1]);
                let v = map.mul_vec(&f[block]);
                for (i, x) in v.into_iter().enumerate() {
                    c[(i, j)] = x;
                }
            }
            (a, c)
        })
        .collect();
    Ok(NatTransformation {
        source: Arc::new(bar.into_system()),
        target: d.clone(),
        components,
    })
}

/// Outcome of comparing the cochain complex with the Hom-complex at one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiDegreeReport {
    pub degree: usize,
    pub cochain_rank: usize,
    pub hom_rank: usize,
    pub cochain_group: AbelianInvariants,
    pub hom_group: AbelianInvariants,
    pub inverse_natural: bool,
    pub injective: bool,
    pub surjective: bool,
    pub roundtrip_cochains: bool,
    pub roundtrip_hom: bool,
    pub chain_map: bool,
    pub cochain_cohomology: AbelianInvariants,
    pub hom_cohomology: AbelianInvariants,
}

impl PsiDegreeReport {
    pub fn passed(&self) -> bool {
        self.cochain_group == self.hom_group
            && self.inverse_natural
            && self.injective
            && self.surjective
            && self.roundtrip_cochains
            && self.roundtrip_hom
            && self.chain_map
            && self.cochain_cohomology == self.hom_cohomology
    }

    /// Names of the checks that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let checks = [
            (self.cochain_group == self.hom_group, "group"),
            (self.inverse_natural, "inverse-natural"),
            (self.injective, "injective"),
            (self.surjective, "surjective"),
            (self.roundtrip_cochains, "psi∘psi⁻¹"),
            (self.roundtrip_hom, "psi⁻¹∘psi"),
            (self.chain_map, "chain-map"),
            (self.cochain_cohomology == self.hom_cohomology, "cohomology"),
        ];
        checks.iter().filter(|c| !c.0).map(|c| c.1).collect()
    }
}

/// Builds both complexes up to `top` and runs every Ψ check at degrees `0..=top`.
pub fn psi_check(m: &MonoidWithZero, d: &NaturalSystem, top: usize) -> Result<Vec<PsiDegreeReport>, ResolutionError> {
    let cochains = CochainComplex::new(m, d, top)?;
    let hom = HomComplex::new(m, d, top)?;
    let mut out = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let level = cochains.level(n);
        let psi_n = hom.psi_matrix(m, level);
        let psi_next = hom.psi_matrix(m, cochains.level(n + 1));
        let inverse = hom.psi_inverse_matrix(m, level);
        let (roundtrip_cochains, roundtrip_hom) = match &inverse {
            Ok(inv) => (
                psi_n.compose(inv)?.agrees_with(&GroupHom::identity(level.group())),
                inv.compose(&psi_n)?.agrees_with(&GroupHom::identity(hom.level(n).group())),
            ),
            Err(_) => (false, false),
        };
        let left = psi_next.compose(hom.differential(n))?;
        let right = cochains.coboundary(n).compose(&psi_n)?;
        out.push(PsiDegreeReport {
            degree: n,
            cochain_rank: level.rank(),
            hom_rank: hom.level(n).group().rank(),
            cochain_group: level.group().invariants(),
            hom_group: hom.level(n).invariants(),
            inverse_natural: inverse.is_ok(),
            injective: psi_n.is_well_defined() && psi_n.is_injective(),
            surjective: psi_n.is_surjective(),
            roundtrip_cochains,
            roundtrip_hom,
            chain_map: left.agrees_with(&right),
            cochain_cohomology: cochains.cohomology(n)?,
            hom_cohomology: hom.cohomology(n)?,
        });
    }
    Ok(out)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("component of μ at object {0} is not surjective")]
    NotEpi(Elem),
    #[error("no preimage under μ at object {object} for tuple {tuple:?}")]
    NoPreimage { object: Elem, tuple: Vec<Elem> },
    #[error("ν is not a transformation out of B_{0}")]
    WrongSource(usize),
    #[error("μ and ν have different targets")]
    TargetMismatch,
    #[error("lift fails μ∘τ = ν at object {0}")]
    NotAFactorization(Elem),
    #[error("lift is not natural: {0:?}")]
    NotNatural(Vec<NaturalityViolation>),
}

/// Lifts `ν : B_n → E` through an objectwise epimorphism `μ : D → E`.
///
/// For each `s ∈ Ner_n` a preimage `x_s` of `ν_ŝ[1, s, 1]` is chosen (the
/// canonical representative modulo the relations of `D_ŝ`), and
/// `τ_a[s_0, …, s_{n+1}] = D(s_0, s_{n+1}) x_{(s_1 … s_n)}`. The result is
/// checked for `μ∘τ = ν` and for naturality before it is returned.
pub fn lift_through_epi(
    m: &MonoidWithZero,
    n: usize,
    mu: &NatTransformation,
    nu: &NatTransformation,
) -> Result<NatTransformation, LiftError> {
    if let Some(a) = mu.first_non_surjective() {
        return Err(LiftError::NotEpi(a));
    }
    if *mu.target != *nu.target {
        return Err(LiftError::TargetMismatch);
    }
    let bar = BarSystem::build(m, n);
    if m.nonzero().any(|a| nu.source.value(a).rank() != bar.generators(a).len()) {
        return Err(LiftError::WrongSource(n));
    }
    let d = &mu.source;
    let e = &mu.target;
    let mut chosen: BTreeMap<Vec<Elem>, Vec<BigInt>> = BTreeMap::new();
    for t in nerve(m, n) {
        let a = t.product(m);
        let j = bar
            .position(a, &distinguished(m, t.entries()))
            .expect("[1, t, 1] is a generator");
        let target = e.value(a).reduce(&nu.component(a).column(j));
        let x = preimage(mu.component(a), e.value(a), &target).ok_or_else(|| LiftError::NoPreimage {
            object: a,
            tuple: t.0.clone(),
        })?;
        chosen.insert(t.0, d.value(a).reduce(&x));
    }
    let components = m
        .nonzero()
        .map(|a| {
            let gens = bar.generators(a);
            let mut c = IntMatrix::zeros(d.value(a).rank(), gens.len());
            for (j, g) in gens.iter().enumerate() {
                let inner = &g[1..g.len() - 1];
                let map = d.morphism_map(m, g[0], m.product(inner), g[g.len() - 1]);
                for (i, x) in map.mul_vec(&chosen[inner]).into_iter().enumerate() {
                    c[(i, j)] = x;
                }
            }
            (a, c)
        })
        .collect();
    let tau = NatTransformation {
        source: nu.source.clone(),
        target: d.clone(),
        components,
    };
    let composite = mu.compose(&tau).expect("τ lands in the source of μ");
    if let Some(a) = m
        .nonzero()
        .find(|&a| !e.value(a).maps_agree(composite.component(a), nu.component(a)))
    {
        return Err(LiftError::NotAFactorization(a));
    }
    let violations = tau.check_naturality(m);
    if !violations.is_empty() {
        return Err(LiftError::NotNatural(violations));
    }
    Ok(tau)
}

/// Some `x` with `μ x = y` in `E`: an exact solution if there is one,
/// otherwise one modulo the relations of `E`.
fn preimage(mu: &IntMatrix, e: &PresentedAbelianGroup, y: &[BigInt]) -> Option<Vec<BigInt>> {
    if let Some(x) = solve(mu, y) {
        return Some(x);
    }
    let x = solve(&mu.hcat(e.relations()), y)?;
    Some(x[..mu.cols()].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{builtin, example_uvw};
    use crate::natsys::{from_zero_module, group_from_factors, ZeroModule};
    use num_traits::Zero;

    #[test]
    fn boundary_on_trivial_monoid_alternates() {
        let m = builtin("trivial").unwrap();
        let d1 = bar_boundary(&m, 1).unwrap();
        assert!(d1.component(0).is_zero());
        let d2 = bar_boundary(&m, 2).unwrap();
        assert_eq!(d2.component(0), &IntMatrix::identity(1));
        assert!(matches!(bar_boundary(&m, 0), Err(ResolutionError::DegreeTooSmall)));
    }

    #[test]
    fn boundaries_compose_to_zero_and_are_natural() {
        let m = example_uvw();
        let bar = BarComplex::new(&m, 3);
        let eps = augmentation_from(&m, bar.level(0));
        let d1 = bar.boundary(&m, 1).unwrap();
        assert!(eps.compose(&d1).unwrap().is_zero());
        for n in 1..3 {
            let lo = bar.boundary(&m, n).unwrap();
            let hi = bar.boundary(&m, n + 1).unwrap();
            assert!(lo.compose(&hi).unwrap().is_zero());
            assert!(lo.is_natural(&m));
        }
        assert!(eps.is_natural(&m));
    }

    #[test]
    fn augmentation_kernel_rank() {
        let m = example_uvw();
        let w = m.element("w").unwrap();
        let eps = augmentation(&m);
        assert_eq!(eps.component(w).cols(), 6);
        let ker = crate::exactalg::kernel_basis(eps.component(w));
        assert_eq!(ker.cols(), 5);
    }

    #[test]
    fn mutated_boundary_breaks_exactness() {
        let m = example_uvw();
        let bar = BarComplex::new(&m, 3);
        assert!(check_resolution_exact_with(&m, &bar).is_ok());
        let w = m.element("w").unwrap();
        let mut maps = augmented_bar_matrices(&m, &bar, w);
        let col = maps[2].columns().position(|c| c.iter().filter(|x| !x.is_zero()).count() > 1);
        let col = col.expect("some generator has two distinct faces");
        let row = (0..maps[2].rows()).find(|&r| !maps[2][(r, col)].is_zero()).unwrap();
        maps[2][(row, col)] = -maps[2][(row, col)].clone();
        assert!(check_exact_sequence(&maps).is_err());
    }

    #[test]
    fn hom_group_ranks_match_nerve() {
        let m = example_uvw();
        let z = trivial_z(&m);
        let hom = HomComplex::new(&m, &z, 2).unwrap();
        let sizes: Vec<usize> = (0..=2).map(|n| hom.level(n).group().rank()).collect();
        assert_eq!(sizes, vec![1, 4, 11]);
    }

    #[test]
    fn psi_checks_pass_on_uvw() {
        let m = example_uvw();
        let z = trivial_z(&m);
        for r in psi_check(&m, &z, 2).unwrap() {
            assert!(r.passed(), "degree {}: {:?}", r.degree, r.failures());
        }
        let a = ZeroModule::trivial_action(&m, group_from_factors(&[2]));
        let d = from_zero_module(&m, &a).unwrap();
        for r in psi_check(&m, &d, 2).unwrap() {
            assert!(r.passed(), "degree {}: {:?}", r.degree, r.failures());
        }
    }

    #[test]
    fn psi_roundtrip_elementwise() {
        let m = example_uvw();
        let z = Arc::new(trivial_z(&m));
        let f: Vec<BigInt> = (1..=4).map(BigInt::from).collect();
        let phi = psi_inverse(&m, &z, 1, &f).unwrap();
        assert!(phi.is_natural(&m));
        assert_eq!(psi(&m, &z, 1, &phi), f);
        let zero = psi_inverse(&m, &z, 1, &[BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()]).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn lift_through_identity_returns_nu() {
        let m = example_uvw();
        let z = Arc::new(trivial_z(&m));
        let f: Vec<BigInt> = vec![BigInt::from(3), BigInt::from(-1), BigInt::from(2), BigInt::from(5)];
        let nu = psi_inverse(&m, &z, 1, &f).unwrap();
        let id = NatTransformation::identity(&m, z.clone());
        let tau = lift_through_epi(&m, 1, &id, &nu).unwrap();
        assert!(tau.agrees_with(&nu));
    }

    #[test]
    fn lift_rejects_non_epi() {
        let m = example_uvw();
        let z = Arc::new(trivial_z(&m));
        let mut two = NatTransformation::identity(&m, z.clone());
        for c in two.components.values_mut() {
            *c = c.scaled(&BigInt::from(2));
        }
        let nu = NatTransformation::zero(&m, Arc::new(crate::natsys::bar_system(&m, 0)), z);
        assert!(matches!(lift_through_epi(&m, 0, &two, &nu), Err(LiftError::NotEpi(_))));
    }
}
