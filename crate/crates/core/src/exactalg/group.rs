use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::lattice::{kernel_basis, Lattice};
use super::snf::invariant_factors;
use super::{AlgebraError, IntMatrix};

/// Finitely generated abelian group `Z^rank / colspan(relations)`.
#[derive(Clone)]
pub struct PresentedAbelianGroup {
    rank: usize,
    relations: IntMatrix,
    lattice: OnceLock<Arc<Lattice>>,
}

impl PartialEq for PresentedAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.relations == other.relations
    }
}

impl Eq for PresentedAbelianGroup {}

impl fmt::Debug for PresentedAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PresentedAbelianGroup")
            .field("rank", &self.rank)
            .field("relations", &self.relations)
            .finish()
    }
}

impl PresentedAbelianGroup {
    pub fn new(rank: usize, relations: IntMatrix) -> Result<Self, AlgebraError> {
        if relations.rows() != rank {
            return Err(AlgebraError::ShapeMismatch {
                context: "relation matrix must have one row per generator",
                expected: (rank, relations.cols()),
                found: relations.shape(),
            });
        }
        Ok(PresentedAbelianGroup {
            rank,
            relations,
            lattice: OnceLock::new(),
        })
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, IntMatrix::zeros(rank, 0)).expect("shape is consistent")
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z/n`; `n = 0` gives `Z`.
    pub fn cyclic(n: u64) -> Self {
        if n == 0 {
            Self::free(1)
        } else {
            Self::new(1, IntMatrix::scalar(1, n)).expect("shape is consistent")
        }
    }

    /// `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` in diagonal form (torsion generators first).
    pub fn from_invariants(inv: &AbelianInvariants) -> Self {
        let rank = inv.torsion.len() + inv.free_rank;
        let mut rel = IntMatrix::zeros(rank, inv.torsion.len());
        for (i, d) in inv.torsion.iter().enumerate() {
            rel[(i, i)] = d.clone();
        }
        Self::new(rank, rel).expect("shape is consistent")
    }

    pub fn direct_sum<'a>(groups: impl IntoIterator<Item = &'a PresentedAbelianGroup>) -> Self {
        let groups: Vec<&PresentedAbelianGroup> = groups.into_iter().collect();
        let rank = groups.iter().map(|g| g.rank).sum();
        let rel = IntMatrix::block_diagonal(groups.iter().map(|g| &g.relations));
        Self::new(rank, rel).expect("block sizes add up")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// True iff the presentation has no (nonzero) relations.
    pub fn is_free_presentation(&self) -> bool {
        self.relations.is_zero()
    }

    pub fn relation_lattice(&self) -> &Lattice {
        self.lattice
            .get_or_init(|| Arc::new(Lattice::from_columns(&self.relations)))
    }

    /// True iff `v` represents the zero element.
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        if self.is_free_presentation() {
            v.iter().all(Zero::is_zero)
        } else {
            self.relation_lattice().contains(v)
        }
    }

    /// True iff every column of `m` represents the zero element.
    pub fn annihilates_columns(&self, m: &IntMatrix) -> bool {
        assert_eq!(m.rows(), self.rank, "matrix height must match group rank");
        if self.is_free_presentation() {
            m.is_zero()
        } else {
            self.relation_lattice().contains_columns(m)
        }
    }

    /// True iff two maps into this group agree as homomorphisms.
    pub fn maps_agree(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        self.annihilates_columns(&a.sub(b))
    }

    /// Canonical representative of an element.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        if self.is_free_presentation() {
            v.to_vec()
        } else {
            self.relation_lattice().reduce(v)
        }
    }

    pub fn reduce_columns(&self, m: &IntMatrix) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = m.columns().map(|c| self.reduce(&c)).collect();
        IntMatrix::from_columns(self.rank, &cols)
    }

    pub fn invariants(&self) -> AbelianInvariants {
        let diag = invariant_factors(&self.relations);
        AbelianInvariants::from_diagonal(self.rank, &diag)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants().is_trivial()
    }
}

/// Homomorphism of presented groups, as a `target.rank × source.rank` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: PresentedAbelianGroup,
    target: PresentedAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks both shape and well-definedness.
    pub fn new(
        source: PresentedAbelianGroup,
        target: PresentedAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self, AlgebraError> {
        let hom = Self::new_unchecked(source, target, matrix)?;
        if !hom.is_well_defined() {
            return Err(AlgebraError::NotWellDefined);
        }
        Ok(hom)
    }

    /// Checks the shape only.
    pub fn new_unchecked(
        source: PresentedAbelianGroup,
        target: PresentedAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self, AlgebraError> {
        let expected = (target.rank, source.rank);
        if matrix.shape() != expected {
            return Err(AlgebraError::ShapeMismatch {
                context: "homomorphism matrix must be target.rank × source.rank",
                expected,
                found: matrix.shape(),
            });
        }
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(group: &PresentedAbelianGroup) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            matrix: IntMatrix::identity(group.rank),
        }
    }

    pub fn zero(source: &PresentedAbelianGroup, target: &PresentedAbelianGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.rank, source.rank),
        }
    }

    pub fn source(&self) -> &PresentedAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &PresentedAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// The matrix sends source relations into the target relation lattice.
    pub fn is_well_defined(&self) -> bool {
        if self.source.relations.cols() == 0 {
            return true;
        }
        self.target
            .annihilates_columns(&(&self.matrix * &self.source.relations))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom, AlgebraError> {
        if other.target != self.source {
            return Err(AlgebraError::IncompatibleComplex);
        }
        Ok(GroupHom {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Equality as homomorphisms (matrices agree modulo target relations).
    pub fn agrees_with(&self, other: &GroupHom) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.target.maps_agree(&self.matrix, &other.matrix)
    }

    pub fn is_zero_map(&self) -> bool {
        self.target.annihilates_columns(&self.matrix)
    }

    /// Lattice of source coordinate vectors mapping to zero in the target.
    pub fn kernel_lattice(&self) -> Lattice {
        preimage_of_zero(&self.matrix, &self.target)
    }

    pub fn is_injective(&self) -> bool {
        let ker = self.kernel_lattice();
        if self.source.is_free_presentation() {
            ker.rank() == 0
        } else {
            self.source.relation_lattice().contains_lattice(&ker)
        }
    }

    pub fn is_surjective(&self) -> bool {
        Lattice::from_columns(&self.matrix.hcat(&self.target.relations)).is_full()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_well_defined() && self.is_injective() && self.is_surjective()
    }
}

/// `{x : m·x ∈ colspan(target relations)}`, via the kernel of `[m | relations]`.
fn preimage_of_zero(m: &IntMatrix, target: &PresentedAbelianGroup) -> Lattice {
    let s = m.cols();
    if target.is_free_presentation() {
        return Lattice::from_columns(&kernel_basis(m));
    }
    let block = m.hcat(target.relations());
    let k = kernel_basis(&block);
    Lattice::from_generators(s, k.columns().map(|c| c[..s].to_vec()))
}

/// Free rank plus invariant-factor torsion `d_1 | d_2 | … | d_k`, each `d_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(free_rank: usize, torsion: impl IntoIterator<Item = u64>) -> Self {
        AbelianInvariants {
            free_rank,
            torsion: torsion.into_iter().map(BigInt::from).collect(),
        }
    }

    /// Invariants of `Z^generators / D` where `diagonal` holds the nonzero
    /// Smith diagonal of the relation matrix.
    pub fn from_diagonal(generators: usize, diagonal: &[BigInt]) -> Self {
        let nonzero: Vec<&BigInt> = diagonal.iter().filter(|d| !d.is_zero()).collect();
        AbelianInvariants {
            free_rank: generators - nonzero.len(),
            torsion: nonzero
                .into_iter()
                .map(|d| d.abs())
                .filter(|d| !d.is_one())
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order, if finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for AbelianInvariants {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let torsion: Vec<serde_json::Value> = self.torsion.iter().map(bigint_json).collect();
        let mut st = serializer.serialize_struct("AbelianInvariants", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &torsion)?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

/// JSON number when the value fits in 64 bits, decimal string otherwise.
pub fn bigint_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

/// Homology `ker(d_out) / im(d_in)` at the middle group of `· → · → ·`.
pub fn homology(d_out: &GroupHom, d_in: &GroupHom) -> Result<AbelianInvariants, AlgebraError> {
    if d_in.target != d_out.source {
        return Err(AlgebraError::IncompatibleComplex);
    }
    let middle = &d_out.source;
    let composite = &d_out.matrix * &d_in.matrix;
    if !d_out.target.annihilates_columns(&composite) {
        return Err(AlgebraError::CompositionNotZero);
    }
    if middle.is_free_presentation() && d_out.target.is_free_presentation() {
        // all groups involved are free: ker(d_out) is saturated
        let out_rank = invariant_factors(&d_out.matrix).len();
        let in_factors = invariant_factors(&d_in.matrix);
        return Ok(AbelianInvariants::from_diagonal(
            middle.rank - out_rank,
            &in_factors,
        ));
    }
    homology_via_preimage(d_out, d_in)
}

/// The general route: the cycle lattice is the preimage of the target
/// relations, and the quotient is presented by re-expressing boundaries and
/// source relations in a cycle basis.
pub fn homology_via_preimage(
    d_out: &GroupHom,
    d_in: &GroupHom,
) -> Result<AbelianInvariants, AlgebraError> {
    let middle = &d_out.source;
    let cycles = preimage_of_zero(&d_out.matrix, &d_out.target);
    let mut columns = Vec::new();
    for gen in d_in.matrix.columns().chain(middle.relations.columns()) {
        let c = cycles
            .coordinates(&gen)
            .ok_or(AlgebraError::CompositionNotZero)?;
        columns.push(c);
    }
    let quotient = IntMatrix::from_columns(cycles.rank(), &columns);
    let diag = invariant_factors(&quotient);
    Ok(AbelianInvariants::from_diagonal(cycles.rank(), &diag))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows)
    }

    #[test]
    fn invariants_of_presentations() {
        let g = PresentedAbelianGroup::new(2, m(2, &[vec![2, 4], vec![6, 10]])).unwrap();
        assert_eq!(g.invariants(), AbelianInvariants::new(0, [2, 2]));
        let h = PresentedAbelianGroup::new(2, m(1, &[vec![2], vec![3]])).unwrap();
        assert_eq!(h.invariants(), AbelianInvariants::new(1, []));
        assert_eq!(PresentedAbelianGroup::cyclic(0).invariants(), AbelianInvariants::free(1));
        assert!(PresentedAbelianGroup::cyclic(1).is_trivial());
    }

    #[test]
    fn bad_relation_shape_is_rejected() {
        assert!(PresentedAbelianGroup::new(2, IntMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(AbelianInvariants::trivial().to_string(), "0");
        assert_eq!(AbelianInvariants::new(1, []).to_string(), "Z");
        assert_eq!(AbelianInvariants::new(2, [2, 4]).to_string(), "Z^2 + Z/2 + Z/4");
    }

    #[test]
    fn hom_well_definedness() {
        let z2 = PresentedAbelianGroup::cyclic(2);
        let z4 = PresentedAbelianGroup::cyclic(4);
        // Z/2 → Z/4, 1 ↦ 2 is fine; 1 ↦ 1 is not
        assert!(GroupHom::new(z2.clone(), z4.clone(), IntMatrix::scalar(1, 2)).is_ok());
        assert_eq!(
            GroupHom::new(z2, z4, IntMatrix::scalar(1, 1)),
            Err(AlgebraError::NotWellDefined)
        );
    }

    #[test]
    fn injective_and_surjective() {
        let z = PresentedAbelianGroup::free(1);
        let z2 = PresentedAbelianGroup::cyclic(2);
        let reduce = GroupHom::new(z.clone(), z2.clone(), IntMatrix::scalar(1, 1)).unwrap();
        assert!(reduce.is_surjective());
        assert!(!reduce.is_injective());
        let double = GroupHom::new(z.clone(), z.clone(), IntMatrix::scalar(1, 2)).unwrap();
        assert!(double.is_injective());
        assert!(!double.is_surjective());
        let z6 = PresentedAbelianGroup::cyclic(6);
        let z3 = PresentedAbelianGroup::cyclic(3);
        let incl = GroupHom::new(z3, z6, IntMatrix::scalar(1, 2)).unwrap();
        assert!(incl.is_injective());
        assert!(!incl.is_surjective());
    }

    #[test]
    fn homology_of_trivial_complexes() {
        let z = PresentedAbelianGroup::free(1);
        let zero_out = GroupHom::zero(&z, &z);
        let zero_in = GroupHom::zero(&z, &z);
        assert_eq!(homology(&zero_out, &zero_in).unwrap(), AbelianInvariants::free(1));
        let two = GroupHom::new(z.clone(), z.clone(), IntMatrix::scalar(1, 2)).unwrap();
        assert_eq!(homology(&zero_out, &two).unwrap(), AbelianInvariants::new(0, [2]));
    }

    #[test]
    fn composition_not_zero_is_reported() {
        let z = PresentedAbelianGroup::free(1);
        let id = GroupHom::identity(&z);
        assert_eq!(homology(&id, &id), Err(AlgebraError::CompositionNotZero));
    }

    #[test]
    fn fast_and_general_routes_agree() {
        let z3 = PresentedAbelianGroup::free(3);
        let z2 = PresentedAbelianGroup::free(2);
        let d_in = GroupHom::new(z2.clone(), z3.clone(), m(2, &[vec![2, 0], vec![0, 6], vec![0, 0]]))
            .unwrap();
        let d_out = GroupHom::new(z3, z2, m(3, &[vec![0, 0, 1], vec![0, 0, 0]])).unwrap();
        let fast = homology(&d_out, &d_in).unwrap();
        assert_eq!(fast, AbelianInvariants::new(0, [2, 6]));
        assert_eq!(homology_via_preimage(&d_out, &d_in).unwrap(), fast);
    }
}
