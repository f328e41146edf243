//! The cochain complex `C^n(S, D)` over the nerve and its cohomology.

use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{homology, AbelianInvariants, AlgebraError, GroupHom, IntMatrix, PresentedAbelianGroup};
use crate::facnerve::{NerveIndex, NerveTuple};
use crate::monoid::{Elem, MonoidWithZero};
use crate::natsys::{
    bar_system, check_functoriality, enumerate_zero_modules, from_zero_module, trivial_z, FunctorViolation,
    NatSysError, NaturalSystem,
};

/// Default cap on the top degree.
pub const DEFAULT_MAX_DEGREE: usize = 3;
/// Default cap on the monoid order (`|Ner_n|` grows like `(m − 1)^n`).
pub const MAX_MONOID_ORDER: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error(transparent)]
    NatSys(#[from] NatSysError),
    #[error("coefficient system is not functorial ({} violations)", .0.len())]
    NotFunctorial(Vec<FunctorViolation>),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("degree {0} was not built")]
    DegreeOutOfRange(usize),
}

/// `C^n(S, D) = ⊕_{t ∈ Ner_n} D_{prod t}` with block offsets.
#[derive(Clone, Debug)]
pub struct CochainLevel {
    degree: usize,
    index: NerveIndex,
    offsets: Vec<usize>,
    group: PresentedAbelianGroup,
}

impl CochainLevel {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn index(&self) -> &NerveIndex {
        &self.index
    }

    pub fn tuples(&self) -> &[NerveTuple] {
        self.index.tuples()
    }

    /// Generator range of the block belonging to tuple number `i`.
    pub fn block(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn block_of(&self, tuple: &[Elem]) -> Option<Range<usize>> {
        self.index.position(tuple).map(|i| self.block(i))
    }

    pub fn group(&self) -> &PresentedAbelianGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }
}

pub fn cochain_level(m: &MonoidWithZero, d: &NaturalSystem, n: usize) -> Result<CochainLevel, CohomologyError> {
    ensure_functorial(m, d)?;
    Ok(build_level(m, d, n))
}

fn ensure_functorial(m: &MonoidWithZero, d: &NaturalSystem) -> Result<(), CohomologyError> {
    let violations = check_functoriality(m, d)?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CohomologyError::NotFunctorial(violations))
    }
}

fn build_level(m: &MonoidWithZero, d: &NaturalSystem, n: usize) -> CochainLevel {
    let index = NerveIndex::new(m, n);
    let mut offsets = vec![0];
    let mut groups = Vec::with_capacity(index.len());
    for t in index.tuples() {
        let g = d.value(t.product(m));
        offsets.push(offsets.last().unwrap() + g.rank());
        groups.push(g);
    }
    let group = PresentedAbelianGroup::direct_sum(groups);
    CochainLevel {
        degree: n,
        index,
        offsets,
        group,
    }
}

/// `δ^n : C^n → C^{n+1}`.
#[derive(Clone, Debug)]
pub struct CoboundaryMap {
    pub source_degree: usize,
    pub map: GroupHom,
}

/// Assembles the matrix of `δ^n`:
///
/// `(δf)(a_1,…,a_{n+1}) = a_1* f(a_2,…) + Σ_{i=1}^{n} (−1)^i f(…, a_i a_{i+1}, …) + (−1)^{n+1} a_{n+1}^* f(a_1,…,a_n)`.
///
/// Middle terms land in `D` of the same full product, so they are identity blocks.
fn coboundary_matrix(
    m: &MonoidWithZero,
    d: &NaturalSystem,
    source: &CochainLevel,
    target: &CochainLevel,
) -> IntMatrix {
    let n = source.degree;
    let mut mat = IntMatrix::zeros(target.rank(), source.rank());
    for (r, b) in target.tuples().iter().enumerate() {
        let b = b.entries();
        let row0 = target.block(r).start;
        let full = m.product(b);

        let tail = &b[1..];
        let col = source.block_of(tail).expect("tail of a nerve tuple is in the nerve");
        mat.add_block(row0, col.start, d.left_map(b[0], m.product(tail)), 1);

        let rank = d.value(full).rank();
        let id = IntMatrix::identity(rank);
        for i in 1..=n {
            let mut c = Vec::with_capacity(n);
            c.extend_from_slice(&b[..i - 1]);
            c.push(m.mul(b[i - 1], b[i]));
            c.extend_from_slice(&b[i + 1..]);
            let col = source.block_of(&c).expect("contraction keeps the product");
            mat.add_block(row0, col.start, &id, if i % 2 == 0 { 1 } else { -1 });
        }

        let head = &b[..n];
        let col = source.block_of(head).expect("head of a nerve tuple is in the nerve");
        let sign = if (n + 1).is_multiple_of(2) { 1 } else { -1 };
        mat.add_block(row0, col.start, d.right_map(m.product(head), b[n]), sign);
    }
    mat
}

pub fn coboundary(m: &MonoidWithZero, d: &NaturalSystem, n: usize) -> Result<CoboundaryMap, CohomologyError> {
    ensure_functorial(m, d)?;
    let source = build_level(m, d, n);
    let target = build_level(m, d, n + 1);
    let mat = coboundary_matrix(m, d, &source, &target);
    Ok(CoboundaryMap {
        source_degree: n,
        map: GroupHom::new(source.group, target.group, mat)?,
    })
}

/// Levels `C^0 … C^{top+1}` and coboundaries `δ^0 … δ^top`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    levels: Vec<CochainLevel>,
    coboundaries: Vec<GroupHom>,
}

impl CochainComplex {
    pub fn new(m: &MonoidWithZero, d: &NaturalSystem, top: usize) -> Result<Self, CohomologyError> {
        ensure_functorial(m, d)?;
        let levels: Vec<CochainLevel> = (0..=top + 1).map(|n| build_level(m, d, n)).collect();
        let coboundaries = levels
            .windows(2)
            .map(|w| {
                let mat = coboundary_matrix(m, d, &w[0], &w[1]);
                GroupHom::new(w[0].group.clone(), w[1].group.clone(), mat)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CochainComplex { levels, coboundaries })
    }

    pub fn top(&self) -> usize {
        self.coboundaries.len() - 1
    }

    pub fn level(&self, n: usize) -> &CochainLevel {
        &self.levels[n]
    }

    pub fn coboundary(&self, n: usize) -> &GroupHom {
        &self.coboundaries[n]
    }

    /// `H^n`, for `n ≤ top`.
    pub fn cohomology(&self, n: usize) -> Result<AbelianInvariants, CohomologyError> {
        if n > self.top() {
            return Err(CohomologyError::DegreeOutOfRange(n));
        }
        let incoming = if n == 0 {
            GroupHom::zero(&PresentedAbelianGroup::trivial(), self.levels[0].group())
        } else {
            self.coboundaries[n - 1].clone()
        };
        Ok(homology(&self.coboundaries[n], &incoming)?)
    }
}

pub fn cohomology_group(m: &MonoidWithZero, d: &NaturalSystem, n: usize) -> Result<AbelianInvariants, CohomologyError> {
    CochainComplex::new(m, d, n)?.cohomology(n)
}

/// Where `δ^n ∘ δ^{n−1}` fails to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdCounterexample {
    /// `n` in `δ^n ∘ δ^{n−1}`.
    pub degree: usize,
    /// Nerve tuple of the input cochain basis element (degree `n − 1`).
    pub source: Vec<Elem>,
    /// Nerve tuple of the offending output block (degree `n + 1`).
    pub target: Vec<Elem>,
}

/// Checks `second ∘ first = 0` modulo the relations of `target`, block by block.
pub fn composite_counterexample(
    degree: usize,
    source: &CochainLevel,
    target: &CochainLevel,
    first: &IntMatrix,
    second: &IntMatrix,
) -> Option<DdCounterexample> {
    let composite = second * first;
    let groups: Vec<PresentedAbelianGroup> = (0..target.tuples().len()).map(|i| block_group(target, i)).collect();
    for (ci, st) in source.tuples().iter().enumerate() {
        for col in source.block(ci) {
            let column = composite.column(col);
            for (ri, tt) in target.tuples().iter().enumerate() {
                if !groups[ri].is_zero_element(&column[target.block(ri)]) {
                    return Some(DdCounterexample {
                        degree,
                        source: st.0.clone(),
                        target: tt.0.clone(),
                    });
                }
            }
        }
    }
    None
}

fn block_group(level: &CochainLevel, i: usize) -> PresentedAbelianGroup {
    let r = level.block(i);
    let rel = level.group.relations();
    let cols: Vec<Vec<num_bigint::BigInt>> = rel
        .columns()
        .filter(|c| c.iter().enumerate().all(|(k, x)| r.contains(&k) || num_traits::Zero::is_zero(x)))
        .map(|c| c[r.clone()].to_vec())
        .collect();
    PresentedAbelianGroup::new(r.len(), IntMatrix::from_columns(r.len(), &cols)).expect("block shape")
}

/// Checks `δ^n ∘ δ^{n−1} = 0` for `1 ≤ n ≤ n_max`.
pub fn check_dd_zero(m: &MonoidWithZero, d: &NaturalSystem, n_max: usize) -> Result<Result<(), DdCounterexample>, CohomologyError> {
    let complex = CochainComplex::new(m, d, n_max)?;
    for n in 1..=n_max {
        let first = complex.coboundary(n - 1);
        let second = complex.coboundary(n);
        if second.target().annihilates_columns(&(second.matrix() * first.matrix())) {
            continue;
        }
        let cx = composite_counterexample(n, complex.level(n - 1), complex.level(n + 1), first.matrix(), second.matrix())
            .expect("a failing composite has a failing block");
        return Ok(Err(cx));
    }
    Ok(Ok(()))
}

/// Coefficient battery for the cohomological-dimension probe: trivial `Z`,
/// every 0-module on `Z/2` and `Z/3`, and the bar systems `B_0`, `B_1`.
pub fn default_battery(m: &MonoidWithZero) -> Result<Vec<(String, NaturalSystem)>, CohomologyError> {
    let mut out = vec![("trivial-Z".to_string(), trivial_z(m))];
    for (tag, n) in [("z2", 2), ("z3", 3)] {
        for module in enumerate_zero_modules(m, &PresentedAbelianGroup::cyclic(n), None)? {
            let name = format!("zero-module:{tag}:{}", module.label(m));
            out.push((name, from_zero_module(m, &module)?));
        }
    }
    for k in 0..2 {
        out.push((format!("bar:{k}"), bar_system(m, k)));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CdEntry {
    pub coefficient: String,
    pub degree: usize,
    pub group: AbelianInvariants,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CdReport {
    pub max_degree: usize,
    pub entries: Vec<CdEntry>,
    /// Highest degree with a nonzero group across the battery.
    pub top_nonvanishing: Option<usize>,
    pub verdict: String,
}

impl CdReport {
    /// Entries with `degree ≥ from` and a nonzero group.
    pub fn nonvanishing_from(&self, from: usize) -> impl Iterator<Item = &CdEntry> {
        self.entries
            .iter()
            .filter(move |e| e.degree >= from && !e.group.is_trivial())
    }
}

/// Computes `H^n(M, D)` for every `D` in the battery and `0 ≤ n ≤ n_max`.
///
/// A nonzero `H^k` proves `c.d. ≥ k`; vanishing above `k` is only evidence,
/// since finitely many coefficient systems are tested.
pub fn cd_probe(
    m: &MonoidWithZero,
    battery: &[(String, NaturalSystem)],
    n_max: usize,
) -> Result<CdReport, CohomologyError> {
    let mut entries = Vec::new();
    for (name, d) in battery {
        let complex = CochainComplex::new(m, d, n_max)?;
        for n in 0..=n_max {
            entries.push(CdEntry {
                coefficient: name.clone(),
                degree: n,
                group: complex.cohomology(n)?,
            });
        }
    }
    let top = entries
        .iter()
        .filter(|e| !e.group.is_trivial())
        .map(|e| e.degree)
        .max();
    let verdict = match top {
        Some(k) => format!(
            "evidence only ({} coefficient systems, degrees 0..={n_max}): c.d. ≥ {k} is witnessed; \
             no nonzero H^n above degree {k} was found, consistent with c.d. ≤ {k}",
            battery.len()
        ),
        None => format!(
            "evidence only ({} coefficient systems, degrees 0..={n_max}): every group vanished",
            battery.len()
        ),
    };
    Ok(CdReport {
        max_degree: n_max,
        entries,
        top_nonvanishing: top,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{builtin, example_uvw};
    use num_bigint::BigInt;

    #[test]
    fn degree_zero_is_d1() {
        let m = example_uvw();
        let d = trivial_z(&m);
        let c0 = cochain_level(&m, &d, 0).unwrap();
        assert_eq!(c0.rank(), 1);
        assert_eq!(c0.tuples(), &[NerveTuple(vec![])]);
        assert_eq!(cochain_level(&m, &d, 2).unwrap().rank(), 11);
    }

    #[test]
    fn uvw_delta1_row() {
        let m = example_uvw();
        let e = |n: &str| m.element(n).unwrap();
        let d = trivial_z(&m);
        let delta = coboundary(&m, &d, 1).unwrap();
        assert_eq!(delta.map.matrix().shape(), (11, 4));
        let target = cochain_level(&m, &d, 2).unwrap();
        let r = target.block_of(&[e("u"), e("v")]).unwrap().start;
        let row: Vec<BigInt> = delta.map.matrix().row(r).to_vec();
        let expect: Vec<BigInt> = [0, 1, 1, -1].into_iter().map(BigInt::from).collect();
        assert_eq!(row, expect);
    }

    #[test]
    fn delta0_vanishes_for_trivial_action() {
        let m = builtin("z2-with-zero").unwrap();
        let delta = coboundary(&m, &trivial_z(&m), 0).unwrap();
        assert!(delta.map.matrix().is_zero());
    }

    #[test]
    fn trivial_monoid_cohomology() {
        let m = builtin("trivial").unwrap();
        let c = CochainComplex::new(&m, &trivial_z(&m), 3).unwrap();
        assert_eq!(c.cohomology(0).unwrap(), AbelianInvariants::free(1));
        for n in 1..=3 {
            assert!(c.cohomology(n).unwrap().is_trivial());
        }
        assert_eq!(c.cohomology(4), Err(CohomologyError::DegreeOutOfRange(4)));
    }

    #[test]
    fn z2_with_zero_trivial_coefficients() {
        let m = builtin("z2-with-zero").unwrap();
        let c = CochainComplex::new(&m, &trivial_z(&m), 2).unwrap();
        assert_eq!(c.cohomology(0).unwrap(), AbelianInvariants::free(1));
        assert!(c.cohomology(1).unwrap().is_trivial());
        assert_eq!(c.cohomology(2).unwrap(), AbelianInvariants::new(0, [2]));
    }

    #[test]
    fn corrupted_middle_sign_is_caught() {
        let m = example_uvw();
        let d = trivial_z(&m);
        let c = CochainComplex::new(&m, &d, 2).unwrap();
        let mut d1 = c.coboundary(1).matrix().clone();
        // row (1,u): flip the middle term −f(1·u) to +f(u)
        let e = |n: &str| m.element(n).unwrap();
        let r = c.level(2).block_of(&[e("1"), e("u")]).unwrap().start;
        let col = c.level(1).block_of(&[e("u")]).unwrap().start;
        d1[(r, col)] += BigInt::from(2);
        let cx = composite_counterexample(2, c.level(1), c.level(3), &d1, c.coboundary(2).matrix()).unwrap();
        assert_eq!(cx.source, vec![e("u")]);
        assert!(composite_counterexample(1, c.level(0), c.level(2), c.coboundary(0).matrix(), &d1).is_none());
        assert!(check_dd_zero(&m, &d, 3).unwrap().is_ok());
    }

    #[test]
    fn battery_names() {
        let m = example_uvw();
        let names: Vec<String> = default_battery(&m).unwrap().into_iter().map(|(n, _)| n).collect();
        assert!(names.contains(&"trivial-Z".to_string()));
        assert!(names.contains(&"zero-module:z2:identity".to_string()));
        assert!(names.contains(&"bar:1".to_string()));
    }
}
