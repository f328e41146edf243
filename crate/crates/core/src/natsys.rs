//! Natural systems on the category of factorizations: functors
//! `D : Fac S → Ab`, stored as a group `D_a` per nonzero `a` together with
//! every left map `α_* : D_a → D_{αa}` and right map `β^* : D_a → D_{aβ}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exactalg::{AbelianInvariants, GroupHom, IntMatrix, PresentedAbelianGroup};
use crate::facnerve::tuples_with_nonzero_product;
use crate::monoid::{Elem, MonoidWithZero};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NatSysError {
    #[error("system has {found} slots but the monoid has {expected} elements")]
    WrongOrder { expected: usize, found: usize },
    #[error("no group given for object {0}")]
    MissingValue(Elem),
    #[error("zero element {0} cannot carry a group or a map")]
    ZeroIndex(Elem),
    #[error("missing {side} map for ({x}, {a})")]
    MissingMap { side: Side, x: Elem, a: Elem },
    #[error("{side} map for ({x}, {a}) has shape {found:?}, expected {expected:?}")]
    MapShape {
        side: Side,
        x: Elem,
        a: Elem,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("0-module action fails at ({0}, {1})")]
    BadAction(Elem, Elem),
    #[error("0-module action of {0} is missing or has the wrong shape")]
    MissingAction(Elem),
    #[error("endomorphism enumeration too large: {0}")]
    TooLarge(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A failed functor law, with the indices where it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorViolation {
    /// The stored matrix does not respect the relations of its source.
    NotWellDefined { side: Side, x: Elem, a: Elem },
    LeftIdentity { a: Elem },
    RightIdentity { a: Elem },
    /// `left(α′, αa) ∘ left(α, a) ≠ left(α′α, a)`.
    LeftComposition { outer: Elem, inner: Elem, a: Elem },
    /// `right(aβ, β′) ∘ right(a, β) ≠ right(a, ββ′)`.
    RightComposition { a: Elem, inner: Elem, outer: Elem },
    /// `left(α, aβ) ∘ right(a, β) ≠ right(αa, β) ∘ left(α, a)`.
    Interchange { alpha: Elem, a: Elem, beta: Elem },
}

impl FunctorViolation {
    pub fn describe(&self, m: &MonoidWithZero) -> String {
        let n = |e: &Elem| m.name(*e).to_string();
        match self {
            FunctorViolation::NotWellDefined { side, x, a } => {
                format!("{side} map ({}, {}) is not well defined", n(x), n(a))
            }
            FunctorViolation::LeftIdentity { a } => format!("left(1, {}) is not the identity", n(a)),
            FunctorViolation::RightIdentity { a } => format!("right({}, 1) is not the identity", n(a)),
            FunctorViolation::LeftComposition { outer, inner, a } => format!(
                "left composition law fails for α′={}, α={}, a={}",
                n(outer),
                n(inner),
                n(a)
            ),
            FunctorViolation::RightComposition { a, inner, outer } => format!(
                "right composition law fails for a={}, β={}, β′={}",
                n(a),
                n(inner),
                n(outer)
            ),
            FunctorViolation::Interchange { alpha, a, beta } => format!(
                "left/right maps do not commute for α={}, a={}, β={}",
                n(alpha),
                n(a),
                n(beta)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalSystem {
    zero: Elem,
    values: Vec<Option<PresentedAbelianGroup>>,
    left: BTreeMap<(Elem, Elem), IntMatrix>,
    right: BTreeMap<(Elem, Elem), IntMatrix>,
}

impl NaturalSystem {
    /// Assembles a system. Every nonzero object needs a group and every map
    /// must have the right shape; missing maps are tolerated here and
    /// reported by [`check_functoriality`].
    pub fn new(
        m: &MonoidWithZero,
        values: Vec<Option<PresentedAbelianGroup>>,
        left: BTreeMap<(Elem, Elem), IntMatrix>,
        right: BTreeMap<(Elem, Elem), IntMatrix>,
    ) -> Result<Self, NatSysError> {
        if values.len() != m.order() {
            return Err(NatSysError::WrongOrder {
                expected: m.order(),
                found: values.len(),
            });
        }
        for (e, v) in values.iter().enumerate() {
            match (e == m.zero(), v.is_some()) {
                (true, true) => return Err(NatSysError::ZeroIndex(e)),
                (false, false) => return Err(NatSysError::MissingValue(e)),
                _ => {}
            }
        }
        let d = NaturalSystem {
            zero: m.zero(),
            values,
            left,
            right,
        };
        for (side, maps) in [(Side::Left, &d.left), (Side::Right, &d.right)] {
            for (&(p, q), mat) in maps {
                let (x, a, target) = match side {
                    Side::Left => (p, q, m.mul(p, q)),
                    Side::Right => (q, p, m.mul(p, q)),
                };
                if a == m.zero() || target == m.zero() || x >= m.order() {
                    return Err(NatSysError::ZeroIndex(target));
                }
                let expected = (d.value(target).rank(), d.value(a).rank());
                if mat.shape() != expected {
                    return Err(NatSysError::MapShape {
                        side,
                        x,
                        a,
                        expected,
                        found: mat.shape(),
                    });
                }
            }
        }
        Ok(d)
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `D_a`. Panics on the zero element.
    pub fn value(&self, a: Elem) -> &PresentedAbelianGroup {
        self.values[a]
            .as_ref()
            .unwrap_or_else(|| panic!("no value at zero element {a}"))
    }

    /// `α_* : D_a → D_{αa}` as stored.
    pub fn left(&self, alpha: Elem, a: Elem) -> Option<&IntMatrix> {
        self.left.get(&(alpha, a))
    }

    /// `β^* : D_a → D_{aβ}` as stored.
    pub fn right(&self, a: Elem, beta: Elem) -> Option<&IntMatrix> {
        self.right.get(&(a, beta))
    }

    /// Like [`left`](Self::left) for systems already known to be complete.
    pub fn left_map(&self, alpha: Elem, a: Elem) -> &IntMatrix {
        self.left(alpha, a)
            .unwrap_or_else(|| panic!("missing left map ({alpha}, {a})"))
    }

    pub fn right_map(&self, a: Elem, beta: Elem) -> &IntMatrix {
        self.right(a, beta)
            .unwrap_or_else(|| panic!("missing right map ({a}, {beta})"))
    }

    /// `D(α, β) = α_* β^* : D_a → D_{αaβ}`.
    pub fn morphism_map(&self, m: &MonoidWithZero, alpha: Elem, a: Elem, beta: Elem) -> IntMatrix {
        let ab = m.mul(a, beta);
        self.left_map(alpha, ab) * self.right_map(a, beta)
    }

    /// `β^* α_*`, the other factorization order of `D(α, β)`.
    pub fn morphism_map_swapped(
        &self,
        m: &MonoidWithZero,
        alpha: Elem,
        a: Elem,
        beta: Elem,
    ) -> IntMatrix {
        let aa = m.mul(alpha, a);
        self.right_map(aa, beta) * self.left_map(alpha, a)
    }

    pub fn left_hom(&self, m: &MonoidWithZero, alpha: Elem, a: Elem) -> Option<GroupHom> {
        let mat = self.left(alpha, a)?.clone();
        GroupHom::new_unchecked(
            self.value(a).clone(),
            self.value(m.mul(alpha, a)).clone(),
            mat,
        )
        .ok()
    }

    /// Objectwise direct sum `D ⊕ E`.
    pub fn direct_sum(&self, other: &NaturalSystem) -> NaturalSystem {
        assert_eq!(self.order(), other.order(), "systems over different monoids");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(PresentedAbelianGroup::direct_sum([a, b])),
                _ => None,
            })
            .collect();
        let merge = |x: &BTreeMap<(Elem, Elem), IntMatrix>, y: &BTreeMap<(Elem, Elem), IntMatrix>| {
            x.iter()
                .filter_map(|(k, a)| y.get(k).map(|b| (*k, IntMatrix::block_diagonal([a, b]))))
                .collect()
        };
        NaturalSystem {
            zero: self.zero,
            values,
            left: merge(&self.left, &other.left),
            right: merge(&self.right, &other.right),
        }
    }

    /// Every `(side, x, a)` for which a map is required.
    fn required_maps(m: &MonoidWithZero) -> Vec<(Side, Elem, Elem)> {
        let mut out = Vec::new();
        for a in m.nonzero() {
            for x in 0..m.order() {
                if m.mul(x, a) != m.zero() {
                    out.push((Side::Left, x, a));
                }
                if m.mul(a, x) != m.zero() {
                    out.push((Side::Right, x, a));
                }
            }
        }
        out
    }

    /// Errors with [`NatSysError::MissingMap`] on the first absent map.
    pub fn require_complete(&self, m: &MonoidWithZero) -> Result<(), NatSysError> {
        if self.order() != m.order() {
            return Err(NatSysError::WrongOrder {
                expected: m.order(),
                found: self.order(),
            });
        }
        for (side, x, a) in Self::required_maps(m) {
            let present = match side {
                Side::Left => self.left.contains_key(&(x, a)),
                Side::Right => self.right.contains_key(&(a, x)),
            };
            if !present {
                return Err(NatSysError::MissingMap { side, x, a });
            }
        }
        Ok(())
    }
}

/// Checks every functor law. The list is empty iff `D` is a natural system.
pub fn check_functoriality(
    m: &MonoidWithZero,
    d: &NaturalSystem,
) -> Result<Vec<FunctorViolation>, NatSysError> {
    d.require_complete(m)?;
    let mut out = Vec::new();
    let one = m.identity();
    let z = m.zero();
    for a in m.nonzero() {
        let da = d.value(a);
        for x in 0..m.order() {
            let xa = m.mul(x, a);
            if xa != z {
                let hom = GroupHom::new_unchecked(da.clone(), d.value(xa).clone(), d.left_map(x, a).clone())
                    .expect("shape checked at construction");
                if !hom.is_well_defined() {
                    out.push(FunctorViolation::NotWellDefined { side: Side::Left, x, a });
                }
            }
            let ax = m.mul(a, x);
            if ax != z {
                let hom = GroupHom::new_unchecked(da.clone(), d.value(ax).clone(), d.right_map(a, x).clone())
                    .expect("shape checked at construction");
                if !hom.is_well_defined() {
                    out.push(FunctorViolation::NotWellDefined { side: Side::Right, x, a });
                }
            }
        }
        let id = IntMatrix::identity(da.rank());
        if !da.maps_agree(d.left_map(one, a), &id) {
            out.push(FunctorViolation::LeftIdentity { a });
        }
        if !da.maps_agree(d.right_map(a, one), &id) {
            out.push(FunctorViolation::RightIdentity { a });
        }
    }
    for a in m.nonzero() {
        for inner in 0..m.order() {
            let ia = m.mul(inner, a);
            if ia == z {
                continue;
            }
            for outer in 0..m.order() {
                let target = m.mul(outer, ia);
                if target == z {
                    continue;
                }
                let lhs = d.left_map(outer, ia) * d.left_map(inner, a);
                let rhs = d.left_map(m.mul(outer, inner), a);
                if !d.value(target).maps_agree(&lhs, rhs) {
                    out.push(FunctorViolation::LeftComposition { outer, inner, a });
                }
            }
        }
        for inner in 0..m.order() {
            let ai = m.mul(a, inner);
            if ai == z {
                continue;
            }
            for outer in 0..m.order() {
                let target = m.mul(ai, outer);
                if target == z {
                    continue;
                }
                let lhs = d.right_map(ai, outer) * d.right_map(a, inner);
                let rhs = d.right_map(a, m.mul(inner, outer));
                if !d.value(target).maps_agree(&lhs, rhs) {
                    out.push(FunctorViolation::RightComposition { a, inner, outer });
                }
            }
        }
        for alpha in 0..m.order() {
            for beta in 0..m.order() {
                let target = m.sandwich(alpha, a, beta);
                if target == z {
                    continue;
                }
                let lhs = d.morphism_map(m, alpha, a, beta);
                let rhs = d.morphism_map_swapped(m, alpha, a, beta);
                if !d.value(target).maps_agree(&lhs, &rhs) {
                    out.push(FunctorViolation::Interchange { alpha, a, beta });
                }
            }
        }
    }
    Ok(out)
}

/// The trivial system: `Z` at every object, every structure map the identity.
pub fn trivial_z(m: &MonoidWithZero) -> NaturalSystem {
    constant_system(m, &PresentedAbelianGroup::free(1), |_| IntMatrix::identity(1))
}

/// Constant value `A` with left maps `action(α)` and identity right maps.
fn constant_system(
    m: &MonoidWithZero,
    group: &PresentedAbelianGroup,
    action: impl Fn(Elem) -> IntMatrix,
) -> NaturalSystem {
    let values = (0..m.order())
        .map(|e| (e != m.zero()).then(|| group.clone()))
        .collect();
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    let id = IntMatrix::identity(group.rank());
    for (side, x, a) in NaturalSystem::required_maps(m) {
        match side {
            Side::Left => {
                left.insert((x, a), action(x));
            }
            Side::Right => {
                right.insert((a, x), id.clone());
            }
        }
    }
    NaturalSystem {
        zero: m.zero(),
        values,
        left,
        right,
    }
}

/// An abelian group with a partial action of `S ∖ 0`:
/// `s(a + b) = sa + sb` and `st ≠ 0 ⇒ s(ta) = (st)a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroModule {
    pub group: PresentedAbelianGroup,
    /// Action matrix of every nonzero element.
    pub action: BTreeMap<Elem, IntMatrix>,
}

impl ZeroModule {
    /// Every nonzero element acting as the identity.
    pub fn trivial_action(m: &MonoidWithZero, group: PresentedAbelianGroup) -> Self {
        let id = IntMatrix::identity(group.rank());
        ZeroModule {
            action: m.nonzero().map(|s| (s, id.clone())).collect(),
            group,
        }
    }

    /// Checks the 0-module laws, naming the failing pair.
    pub fn check(&self, m: &MonoidWithZero) -> Result<(), NatSysError> {
        let r = self.group.rank();
        for s in m.nonzero() {
            match self.action.get(&s) {
                Some(a) if a.shape() == (r, r) => {}
                _ => return Err(NatSysError::MissingAction(s)),
            }
            let hom = GroupHom::new_unchecked(self.group.clone(), self.group.clone(), self.action[&s].clone())
                .expect("shape checked");
            if !hom.is_well_defined() {
                return Err(NatSysError::BadAction(s, s));
            }
        }
        let one = m.identity();
        if !self
            .group
            .maps_agree(&self.action[&one], &IntMatrix::identity(r))
        {
            return Err(NatSysError::BadAction(one, one));
        }
        for s in m.nonzero() {
            for t in m.nonzero() {
                let st = m.mul(s, t);
                if st == m.zero() {
                    continue;
                }
                let lhs = &self.action[&s] * &self.action[&t];
                if !self.group.maps_agree(&lhs, &self.action[&st]) {
                    return Err(NatSysError::BadAction(s, t));
                }
            }
        }
        Ok(())
    }

    /// Short label: `identity`, `zero`, or `name=k,…` for cyclic groups.
    pub fn label(&self, m: &MonoidWithZero) -> String {
        let r = self.group.rank();
        let id = IntMatrix::identity(r);
        let zero = IntMatrix::zeros(r, r);
        let non_identity: Vec<Elem> = m.nonzero().filter(|&s| s != m.identity()).collect();
        if non_identity.iter().all(|s| self.group.maps_agree(&self.action[s], &id)) {
            return "identity".into();
        }
        if non_identity.iter().all(|s| self.group.maps_agree(&self.action[s], &zero)) {
            return "zero".into();
        }
        non_identity
            .iter()
            .map(|&s| {
                let mat = self.group.reduce_columns(&self.action[&s]);
                let entries: Vec<String> = mat.to_rows().concat().iter().map(ToString::to_string).collect();
                format!("{}={}", m.name(s), entries.join(";"))
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// The natural system with constant value `A`, `α_*β^* a = αa`.
pub fn from_zero_module(m: &MonoidWithZero, module: &ZeroModule) -> Result<NaturalSystem, NatSysError> {
    module.check(m)?;
    Ok(constant_system(m, &module.group, |x| {
        if x == m.zero() {
            IntMatrix::zeros(module.group.rank(), module.group.rank())
        } else {
            module.action[&x].clone()
        }
    }))
}

/// Cap on `|End(A)|` for enumeration.
pub const MAX_ENDOMORPHISMS: usize = 1 << 12;

/// All 0-module structures on `A` (taken in its canonical diagonal
/// presentation), deduplicated by exact equality of reduced action
/// matrices. Free summands need `free_bound`: images of free generators are
/// restricted to coordinates in `[-free_bound, free_bound]`.
pub fn enumerate_zero_modules(
    m: &MonoidWithZero,
    group: &PresentedAbelianGroup,
    free_bound: Option<u32>,
) -> Result<Vec<ZeroModule>, NatSysError> {
    let canonical = PresentedAbelianGroup::from_invariants(&group.invariants());
    let endos = endomorphisms(&canonical, free_bound)?;
    let elems: Vec<Elem> = m.nonzero().filter(|&s| s != m.identity()).collect();
    let mut assigned: HashMap<Elem, usize> = HashMap::new();
    let mut out = Vec::new();
    let id = IntMatrix::identity(canonical.rank());
    let ctx = Search {
        m,
        group: &canonical,
        endos: &endos,
        elems: &elems,
        identity: &id,
    };
    ctx.extend(0, &mut assigned, &mut out);
    Ok(out)
}

struct Search<'a> {
    m: &'a MonoidWithZero,
    group: &'a PresentedAbelianGroup,
    endos: &'a [IntMatrix],
    elems: &'a [Elem],
    identity: &'a IntMatrix,
}

impl Search<'_> {
    fn action<'b>(&'b self, assigned: &HashMap<Elem, usize>, s: Elem) -> Option<&'b IntMatrix> {
        if s == self.m.identity() {
            Some(self.identity)
        } else {
            assigned.get(&s).map(|&i| &self.endos[i])
        }
    }

    fn consistent(&self, assigned: &HashMap<Elem, usize>, fresh: Elem) -> bool {
        let m = self.m;
        for s in m.nonzero() {
            for t in m.nonzero() {
                let st = m.mul(s, t);
                if st == m.zero() || (s != fresh && t != fresh && st != fresh) {
                    continue;
                }
                let (Some(a), Some(b), Some(c)) = (
                    self.action(assigned, s),
                    self.action(assigned, t),
                    self.action(assigned, st),
                ) else {
                    continue;
                };
                if !self.group.maps_agree(&(a * b), c) {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&self, k: usize, assigned: &mut HashMap<Elem, usize>, out: &mut Vec<ZeroModule>) {
        if k == self.elems.len() {
            let mut action = BTreeMap::new();
            for s in self.m.nonzero() {
                action.insert(s, self.action(assigned, s).expect("all assigned").clone());
            }
            out.push(ZeroModule {
                group: self.group.clone(),
                action,
            });
            return;
        }
        let s = self.elems[k];
        for i in 0..self.endos.len() {
            assigned.insert(s, i);
            if self.consistent(assigned, s) {
                self.extend(k + 1, assigned, out);
            }
        }
        assigned.remove(&s);
    }
}

/// `End(A)` for a diagonal presentation `Z/d_1 ⊕ … ⊕ Z/d_k ⊕ Z^f`, as reduced matrices.
fn endomorphisms(
    group: &PresentedAbelianGroup,
    free_bound: Option<u32>,
) -> Result<Vec<IntMatrix>, NatSysError> {
    let r = group.rank();
    let rel = group.relations();
    // order of each generator; 0 for free generators
    let orders: Vec<BigInt> = (0..r)
        .map(|i| if i < rel.cols() { rel[(i, i)].clone() } else { BigInt::zero() })
        .collect();
    let mut choices: Vec<Vec<BigInt>> = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            // entry (j, i): coordinate j of the image of generator i
            let (oi, oj) = (&orders[i], &orders[j]);
            let options: Vec<BigInt> = if oj.is_zero() {
                if !oi.is_zero() {
                    vec![BigInt::zero()]
                } else {
                    let b = free_bound.ok_or_else(|| {
                        NatSysError::TooLarge("End(A) is infinite; give a bound for free generators".into())
                    })?;
                    (-(b as i64)..=b as i64).map(BigInt::from).collect()
                }
            } else {
                let n = oj.to_u64().filter(|&n| n <= MAX_ENDOMORPHISMS as u64).ok_or_else(|| {
                    NatSysError::TooLarge(format!("torsion coefficient {oj} too large"))
                })?;
                (0..n)
                    .map(BigInt::from)
                    .filter(|c| oi.is_zero() || (oi * c % oj).is_zero())
                    .collect()
            };
            choices.push(options);
        }
    }
    let total = choices
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .filter(|&t| t <= MAX_ENDOMORPHISMS)
        .ok_or_else(|| NatSysError::TooLarge(format!("more than {MAX_ENDOMORPHISMS} endomorphisms")))?;
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; choices.len()];
    for _ in 0..total {
        let mut mat = IntMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                mat[(j, i)] = choices[i * r + j][idx[i * r + j]].clone();
            }
        }
        out.push(mat);
        for (k, c) in idx.iter_mut().zip(&choices).rev() {
            *k += 1;
            if *k < c.len() {
                break;
            }
            *k = 0;
        }
    }
    Ok(out)
}

/// The bar system `B_n`: `B_n(a)` is free on the `(n+2)`-tuples with
/// product `a`, ordered lexicographically, and `B_n(α, β)` sends
/// `[a_0, …, a_{n+1}]` to `[α a_0, …, a_{n+1} β]`.
#[derive(Clone, Debug)]
pub struct BarSystem {
    degree: usize,
    generators: Vec<Vec<Vec<Elem>>>,
    position: Vec<HashMap<Vec<Elem>, usize>>,
    system: NaturalSystem,
}

impl BarSystem {
    pub fn build(m: &MonoidWithZero, degree: usize) -> Self {
        let mut generators = vec![Vec::new(); m.order()];
        for t in tuples_with_nonzero_product(m, degree + 2) {
            generators[m.product(&t)].push(t);
        }
        let position: Vec<HashMap<Vec<Elem>, usize>> = generators
            .iter()
            .map(|gs| gs.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect())
            .collect();
        let values = (0..m.order())
            .map(|a| (a != m.zero()).then(|| PresentedAbelianGroup::free(generators[a].len())))
            .collect();
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        for (side, x, a) in NaturalSystem::required_maps(m) {
            let target = match side {
                Side::Left => m.mul(x, a),
                Side::Right => m.mul(a, x),
            };
            let mut mat = IntMatrix::zeros(generators[target].len(), generators[a].len());
            for (j, g) in generators[a].iter().enumerate() {
                let mut h = g.clone();
                match side {
                    Side::Left => h[0] = m.mul(x, h[0]),
                    Side::Right => {
                        let last = h.len() - 1;
                        h[last] = m.mul(h[last], x);
                    }
                }
                mat[(position[target][&h], j)] = BigInt::from(1);
            }
            match side {
                Side::Left => left.insert((x, a), mat),
                Side::Right => right.insert((a, x), mat),
            };
        }
        let system = NaturalSystem {
            zero: m.zero(),
            values,
            left,
            right,
        };
        BarSystem {
            degree,
            generators,
            position,
            system,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn system(&self) -> &NaturalSystem {
        &self.system
    }

    pub fn into_system(self) -> NaturalSystem {
        self.system
    }

    /// Generators of `B_n(a)` in basis order.
    pub fn generators(&self, a: Elem) -> &[Vec<Elem>] {
        &self.generators[a]
    }

    pub fn position(&self, a: Elem, generator: &[Elem]) -> Option<usize> {
        self.position[a].get(generator).copied()
    }
}

pub fn bar_system(m: &MonoidWithZero, n: usize) -> NaturalSystem {
    BarSystem::build(m, n).into_system()
}

/// Group `A` from a list of invariant factors, `0` meaning a copy of `Z`.
pub fn group_from_factors(factors: &[u64]) -> PresentedAbelianGroup {
    let free = factors.iter().filter(|&&d| d == 0).count();
    let torsion: Vec<u64> = factors.iter().copied().filter(|&d| d != 0).collect();
    if torsion.iter().all(|&d| d >= 2) && sorted_divisibility(&torsion) {
        PresentedAbelianGroup::from_invariants(&AbelianInvariants::new(free, torsion))
    } else {
        let r = factors.len();
        let nonzero: Vec<usize> = (0..r).filter(|&i| factors[i] != 0).collect();
        let mut rel = IntMatrix::zeros(r, nonzero.len());
        for (c, &i) in nonzero.iter().enumerate() {
            rel[(i, c)] = BigInt::from(factors[i]);
        }
        PresentedAbelianGroup::new(r, rel).expect("shape is consistent")
    }
}

fn sorted_divisibility(t: &[u64]) -> bool {
    t.windows(2).all(|w| w[1] % w[0] == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{builtin, example_uvw};

    #[test]
    fn trivial_z_is_functorial() {
        for name in crate::monoid::BUILTIN_MONOIDS {
            let m = builtin(name).unwrap();
            let d = trivial_z(&m);
            assert_eq!(check_functoriality(&m, &d).unwrap(), vec![]);
        }
        let m = builtin("trivial").unwrap();
        let d = trivial_z(&m);
        assert_eq!(d.left(0, 0), Some(&IntMatrix::identity(1)));
    }

    #[test]
    fn broken_left_map_is_named() {
        let m = example_uvw();
        let u = m.element("u").unwrap();
        let mut d = trivial_z(&m);
        d.left.insert((u, u), IntMatrix::scalar(1, 2));
        let v = check_functoriality(&m, &d).unwrap();
        assert!(v.iter().any(|x| matches!(x, FunctorViolation::LeftComposition { .. })));
        assert!(v.iter().any(|x| matches!(x, FunctorViolation::Interchange { .. })));
    }

    #[test]
    fn missing_map_is_reported() {
        let m = example_uvw();
        let u = m.element("u").unwrap();
        let mut d = trivial_z(&m);
        d.right.remove(&(u, u));
        assert_eq!(
            check_functoriality(&m, &d),
            Err(NatSysError::MissingMap { side: Side::Right, x: u, a: u })
        );
    }

    #[test]
    fn z2_modules_on_uvw() {
        let m = example_uvw();
        let mods = enumerate_zero_modules(&m, &PresentedAbelianGroup::cyclic(2), None).unwrap();
        assert_eq!(mods.len(), 2);
        let labels: Vec<String> = mods.iter().map(|z| z.label(&m)).collect();
        assert_eq!(labels, vec!["zero", "identity"]);
        for z in &mods {
            let d = from_zero_module(&m, z).unwrap();
            assert!(check_functoriality(&m, &d).unwrap().is_empty());
        }
    }

    #[test]
    fn trivial_monoid_has_one_module() {
        let m = builtin("trivial").unwrap();
        for g in [PresentedAbelianGroup::cyclic(2), PresentedAbelianGroup::cyclic(6)] {
            assert_eq!(enumerate_zero_modules(&m, &g, None).unwrap().len(), 1);
        }
        assert_eq!(
            enumerate_zero_modules(&m, &PresentedAbelianGroup::free(1), Some(3))
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn infinite_endomorphisms_need_a_bound() {
        let m = example_uvw();
        assert!(matches!(
            enumerate_zero_modules(&m, &PresentedAbelianGroup::free(1), None),
            Err(NatSysError::TooLarge(_))
        ));
    }

    #[test]
    fn bad_action_is_rejected() {
        let m = example_uvw();
        let u = m.element("u").unwrap();
        let w = m.element("w").unwrap();
        let mut z = ZeroModule::trivial_action(&m, PresentedAbelianGroup::free(1));
        z.action.insert(w, IntMatrix::scalar(1, 2));
        assert_eq!(from_zero_module(&m, &z), Err(NatSysError::BadAction(u, u)));
    }

    #[test]
    fn bar_zero_generators() {
        let t = builtin("trivial").unwrap();
        let b = BarSystem::build(&t, 0);
        assert_eq!(b.generators(0), &[vec![0, 0]]);

        let m = example_uvw();
        let e = |n: &str| m.element(n).unwrap();
        let b = BarSystem::build(&m, 0);
        let (one, u, v, w) = (e("1"), e("u"), e("v"), e("w"));
        assert_eq!(
            b.generators(w),
            &[vec![one, w], vec![u, u], vec![u, v], vec![v, u], vec![v, v], vec![w, one]]
        );
        // B_0(u, 1) : [1, u] ↦ [u, u]
        let src = b.position(u, &[one, u]).unwrap();
        let dst = b.position(w, &[u, u]).unwrap();
        let map = b.system().left_map(u, u);
        assert_eq!(map[(dst, src)], BigInt::from(1));
        assert!(check_functoriality(&m, b.system()).unwrap().is_empty());
    }
}
