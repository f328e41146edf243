//! Finite monoids with zero given by multiplication tables.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Dense element id, `0..order`.
pub type Elem = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("table row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry ({row}, {col}) = {value} is not an element id")]
    InvalidEntry { row: usize, col: usize, value: usize },
    #[error("element id {0} out of range")]
    UnknownElement(usize),
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
    #[error("identity and zero coincide")]
    IdentityEqualsZero,
    #[error("identity law fails at {0}")]
    BadIdentity(String),
    #[error("zero law fails at {0}")]
    BadZero(String),
    #[error("not associative: ({0}·{1})·{2} ≠ {0}·({1}·{2})")]
    NotAssociative(String, String, String),
    #[error("word set is not factor-closed: {word} is allowed but its factor {factor} is not")]
    NotFactorClosed { word: String, factor: String },
    #[error("word set must contain the empty word")]
    MissingEmptyWord,
    #[error("word uses letter index {0} outside the alphabet")]
    UnknownLetter(usize),
    #[error("infinite monoid: only finite factor-closed truncations can be materialized")]
    InfiniteInput,
}

/// A finite monoid with a designated identity and absorbing zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidWithZero {
    names: Vec<String>,
    identity: Elem,
    zero: Elem,
    table: Vec<Elem>,
}

/// A plain multiplication table with an identity and no zero requirement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidTable {
    pub names: Vec<String>,
    pub identity: Elem,
    pub table: Vec<Vec<Elem>>,
}

/// A plain multiplication table of a semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupTable {
    pub names: Vec<String>,
    pub table: Vec<Vec<Elem>>,
}

/// A finite factor-closed set of words over an alphabet. Words are stored as
/// sequences of letter indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordTruncationSpec {
    pub alphabet: Vec<String>,
    pub allowed_words: BTreeSet<Vec<usize>>,
}

impl WordTruncationSpec {
    /// All words of length at most `max_len`.
    pub fn up_to_length(alphabet: &[&str], max_len: usize) -> Self {
        let mut words = BTreeSet::new();
        let mut frontier = vec![Vec::new()];
        for _ in 0..=max_len {
            let mut next = Vec::new();
            for w in frontier {
                for l in 0..alphabet.len() {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
                words.insert(w);
            }
            frontier = next;
        }
        WordTruncationSpec {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            allowed_words: words,
        }
    }

    fn spell(&self, word: &[usize]) -> String {
        if word.is_empty() {
            "1".to_string()
        } else {
            word.iter().map(|&l| self.alphabet[l].as_str()).collect()
        }
    }
}

fn check_square(table: &[Vec<Elem>]) -> Result<(), MonoidError> {
    let m = table.len();
    for (row, r) in table.iter().enumerate() {
        if r.len() != m {
            return Err(MonoidError::NotSquare {
                row,
                len: r.len(),
                expected: m,
            });
        }
        for (col, &value) in r.iter().enumerate() {
            if value >= m {
                return Err(MonoidError::InvalidEntry { row, col, value });
            }
        }
    }
    Ok(())
}

fn check_names(names: &[String], m: usize) -> Result<(), MonoidError> {
    if names.len() != m {
        return Err(MonoidError::NotSquare {
            row: 0,
            len: names.len(),
            expected: m,
        });
    }
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(MonoidError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

fn check_associative(names: &[String], table: &[Vec<Elem>]) -> Result<(), MonoidError> {
    let m = table.len();
    for a in 0..m {
        for b in 0..m {
            let ab = table[a][b];
            for c in 0..m {
                if table[ab][c] != table[a][table[b][c]] {
                    return Err(MonoidError::NotAssociative(
                        names[a].clone(),
                        names[b].clone(),
                        names[c].clone(),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_identity(names: &[String], table: &[Vec<Elem>], identity: Elem) -> Result<(), MonoidError> {
    for a in 0..table.len() {
        if table[identity][a] != a || table[a][identity] != a {
            return Err(MonoidError::BadIdentity(names[a].clone()));
        }
    }
    Ok(())
}

/// Checks every invariant of a monoid with zero and builds it.
pub fn validate(
    names: Vec<String>,
    identity: Elem,
    zero: Elem,
    table: Vec<Vec<Elem>>,
) -> Result<MonoidWithZero, MonoidError> {
    check_square(&table)?;
    let m = table.len();
    check_names(&names, m)?;
    for e in [identity, zero] {
        if e >= m {
            return Err(MonoidError::UnknownElement(e));
        }
    }
    if identity == zero {
        return Err(MonoidError::IdentityEqualsZero);
    }
    check_identity(&names, &table, identity)?;
    for a in 0..m {
        if table[zero][a] != zero || table[a][zero] != zero {
            return Err(MonoidError::BadZero(names[a].clone()));
        }
    }
    check_associative(&names, &table)?;
    Ok(MonoidWithZero {
        names,
        identity,
        zero,
        table: table.into_iter().flatten().collect(),
    })
}

/// `S⁰`: appends a fresh absorbing element named `0`.
pub fn adjoin_zero(monoid: &MonoidTable) -> Result<MonoidWithZero, MonoidError> {
    check_square(&monoid.table)?;
    let m = monoid.table.len();
    check_names(&monoid.names, m)?;
    if monoid.identity >= m {
        return Err(MonoidError::UnknownElement(monoid.identity));
    }
    check_identity(&monoid.names, &monoid.table, monoid.identity)?;
    check_associative(&monoid.names, &monoid.table)?;
    let zero = m;
    let mut names = monoid.names.clone();
    names.push(fresh_name(&names, "0"));
    let mut table: Vec<Vec<Elem>> = monoid
        .table
        .iter()
        .map(|row| {
            let mut row = row.clone();
            row.push(zero);
            row
        })
        .collect();
    table.push(vec![zero; m + 1]);
    validate(names, monoid.identity, zero, table)
}

/// Prepends a fresh two-sided identity named `1` (always, even if the input
/// already has one). Old element ids shift up by one.
pub fn adjoin_identity(semigroup: &SemigroupTable) -> Result<MonoidTable, MonoidError> {
    check_square(&semigroup.table)?;
    check_names(&semigroup.names, semigroup.table.len())?;
    check_associative(&semigroup.names, &semigroup.table)?;
    let m = semigroup.table.len();
    let mut names = vec![fresh_name(&semigroup.names, "1")];
    names.extend(semigroup.names.iter().cloned());
    let mut table = vec![(0..=m).collect::<Vec<_>>()];
    for (a, row) in semigroup.table.iter().enumerate() {
        let mut r = vec![a + 1];
        r.extend(row.iter().map(|&x| x + 1));
        table.push(r);
    }
    Ok(MonoidTable {
        names,
        identity: 0,
        table,
    })
}

fn fresh_name(existing: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while existing.contains(&name) {
        name.push('\'');
    }
    name
}

/// The free monoid on a nonempty alphabet is infinite; only the empty
/// alphabet gives a finite result, `{1, 0}`.
pub fn free_monoid_with_zero(alphabet: &[&str]) -> Result<MonoidWithZero, MonoidError> {
    if !alphabet.is_empty() {
        return Err(MonoidError::InfiniteInput);
    }
    zero_free(&WordTruncationSpec {
        alphabet: Vec::new(),
        allowed_words: [Vec::new()].into_iter().collect(),
    })
}

/// The Rees quotient of the free monoid by the ideal of words outside
/// `spec.allowed_words`: products that leave the word set become `0`.
///
/// Elements are ordered shortlex with the empty word (the identity) first
/// and `0` last.
pub fn zero_free(spec: &WordTruncationSpec) -> Result<MonoidWithZero, MonoidError> {
    if !spec.allowed_words.contains(&Vec::new()) {
        return Err(MonoidError::MissingEmptyWord);
    }
    for w in &spec.allowed_words {
        if let Some(&l) = w.iter().find(|&&l| l >= spec.alphabet.len()) {
            return Err(MonoidError::UnknownLetter(l));
        }
        for i in 0..w.len() {
            for j in i + 1..=w.len() {
                if !spec.allowed_words.contains(&w[i..j]) {
                    return Err(MonoidError::NotFactorClosed {
                        word: spec.spell(w),
                        factor: spec.spell(&w[i..j]),
                    });
                }
            }
        }
    }
    let mut words: Vec<&Vec<usize>> = spec.allowed_words.iter().collect();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: HashMap<&Vec<usize>, Elem> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let m = words.len() + 1;
    let zero = m - 1;
    let mut table = vec![vec![zero; m]; m];
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            let mut ab = (*a).clone();
            ab.extend(b.iter());
            if let Some(&k) = index.get(&ab) {
                table[i][j] = k;
            }
        }
    }
    let mut names: Vec<String> = words.iter().map(|w| spec.spell(w)).collect();
    names.push(fresh_name(&names, "0"));
    validate(names, 0, zero, table)
}

/// Failure of 0-cancellativity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CancellationWitness {
    /// `a·x = b·x ≠ 0` with `a ≠ b`.
    Right { a: Elem, b: Elem, x: Elem },
    /// `x·a = x·b ≠ 0` with `a ≠ b`.
    Left { a: Elem, b: Elem, x: Elem },
}

/// `Ok(())` iff `ax = bx ≠ 0 ⇒ a = b` and `xa = xb ≠ 0 ⇒ a = b` for all
/// `a, b, x`; otherwise the first witness in id order.
pub fn is_zero_cancellative(m: &MonoidWithZero) -> Result<(), CancellationWitness> {
    let n = m.order();
    for a in 0..n {
        for b in a + 1..n {
            for x in 0..n {
                let (ax, bx) = (m.mul(a, x), m.mul(b, x));
                if ax == bx && ax != m.zero {
                    return Err(CancellationWitness::Right { a, b, x });
                }
                let (xa, xb) = (m.mul(x, a), m.mul(x, b));
                if xa == xb && xa != m.zero {
                    return Err(CancellationWitness::Left { a, b, x });
                }
            }
        }
    }
    Ok(())
}

impl MonoidWithZero {
    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn element(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.names.len() + b]
    }

    /// Product of a tuple; the empty product is the identity.
    pub fn product(&self, tuple: &[Elem]) -> Elem {
        tuple.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    /// `α·a·β`.
    pub fn sandwich(&self, alpha: Elem, a: Elem, beta: Elem) -> Elem {
        self.mul(self.mul(alpha, a), beta)
    }

    /// Nonzero elements in id order.
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order()).filter(move |&e| e != self.zero)
    }

    pub fn table(&self) -> Vec<Vec<Elem>> {
        self.table.chunks(self.order()).map(<[Elem]>::to_vec).collect()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// True iff the nonzero elements are closed under multiplication.
    pub fn nonzero_closed(&self) -> bool {
        self.nonzero()
            .all(|a| self.nonzero().all(|b| self.mul(a, b) != self.zero))
    }

    /// Renames element `e` to `perm[e]`. `perm` must be a permutation of ids.
    pub fn relabel(&self, perm: &[Elem]) -> MonoidWithZero {
        let n = self.order();
        assert_eq!(perm.len(), n, "permutation of wrong length");
        let mut names = vec![String::new(); n];
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            names[perm[a]] = self.names[a].clone();
            for b in 0..n {
                table[perm[a]][perm[b]] = perm[self.mul(a, b)];
            }
        }
        validate(names, perm[self.identity], perm[self.zero], table)
            .expect("relabeling preserves the monoid laws")
    }
}

impl fmt::Display for MonoidWithZero {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.names.iter().map(String::len).max().unwrap_or(1);
        write!(f, "{:>width$} |", "·")?;
        for n in &self.names {
            write!(f, " {n:>width$}")?;
        }
        writeln!(f)?;
        for a in 0..self.order() {
            write!(f, "{:>width$} |", self.names[a])?;
            for b in 0..self.order() {
                write!(f, " {:>width$}", self.names[self.mul(a, b)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Cyclic group `Z/n` as a table, elements `1, g, g^2, …`.
pub fn cyclic_group(n: usize) -> MonoidTable {
    assert!(n >= 1);
    let names = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "g".to_string(),
            k => format!("g{k}"),
        })
        .collect();
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    MonoidTable {
        names,
        identity: 0,
        table,
    }
}

/// Klein four-group `{1, a, b, c}`.
pub fn klein_four_group() -> MonoidTable {
    let names = ["1", "a", "b", "c"].map(String::from).to_vec();
    let table = (0..4).map(|a: usize| (0..4).map(|b| a ^ b).collect()).collect();
    MonoidTable {
        names,
        identity: 0,
        table,
    }
}

/// The commutative semigroup `{u, v, w, 0}` with `u² = v² = uv = w` and
/// `uw = vw = 0`, with an identity adjoined.
pub fn example_uvw() -> MonoidWithZero {
    // ids: u=0, v=1, w=2, 0=3
    let (u, v, w, z) = (0, 1, 2, 3);
    let mut table = vec![vec![z; 4]; 4];
    for a in [u, v] {
        for b in [u, v] {
            table[a][b] = w;
        }
    }
    let semigroup = SemigroupTable {
        names: ["u", "v", "w", "0"].map(String::from).to_vec(),
        table,
    };
    let m = adjoin_identity(&semigroup).expect("example semigroup is associative");
    validate(m.names, m.identity, z + 1, m.table).expect("example monoid is valid")
}

/// Names of the builtin monoids.
pub const BUILTIN_MONOIDS: [&str; 5] = ["trivial", "z2-with-zero", "example-uvw", "m3", "free2-len1"];

pub fn builtin(name: &str) -> Option<MonoidWithZero> {
    match name {
        "trivial" => Some(free_monoid_with_zero(&[]).expect("empty alphabet is finite")),
        "z2-with-zero" => Some(adjoin_zero(&cyclic_group(2)).expect("Z/2 is a group")),
        "example-uvw" => Some(example_uvw()),
        "m3" => {
            let spec = WordTruncationSpec::up_to_length(&["x"], 2);
            Some(zero_free(&spec).expect("truncation is factor-closed"))
        }
        "free2-len1" => {
            let spec = WordTruncationSpec::up_to_length(&["x", "y"], 1);
            Some(zero_free(&spec).expect("truncation is factor-closed"))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn two_element_monoid_is_valid() {
        let m = validate(names(&["1", "0"]), 0, 1, vec![vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.order(), 2);
    }

    #[test]
    fn associativity_violation_has_witness() {
        // left-zero-ish corruption of {1, a, 0}: a·a = 1 but a·0 ... keep zero
        // law and identity, break associativity through a 4-element table
        let t = vec![
            vec![0, 1, 2, 3],
            vec![1, 2, 3, 3],
            vec![2, 1, 3, 3],
            vec![3, 3, 3, 3],
        ];
        let err = validate(names(&["1", "a", "b", "0"]), 0, 3, t).unwrap_err();
        assert!(matches!(err, MonoidError::NotAssociative(..)), "{err}");
    }

    #[test]
    fn identity_and_zero_errors() {
        let t = vec![vec![0, 1], vec![1, 1]];
        assert_eq!(
            validate(names(&["1", "0"]), 0, 0, t.clone()),
            Err(MonoidError::IdentityEqualsZero)
        );
        let bad_zero = vec![vec![0, 1], vec![1, 0]];
        assert!(matches!(
            validate(names(&["1", "z"]), 0, 1, bad_zero),
            Err(MonoidError::BadZero(_))
        ));
        let bad_id = vec![vec![1, 1], vec![1, 1]];
        assert!(matches!(
            validate(names(&["1", "0"]), 0, 1, bad_id),
            Err(MonoidError::BadIdentity(_))
        ));
        assert!(matches!(
            validate(names(&["1", "0"]), 0, 1, vec![vec![0, 2], vec![1, 1]]),
            Err(MonoidError::InvalidEntry { .. })
        ));
    }

    #[test]
    fn uvw_example_products() {
        let m = example_uvw();
        let e = |n: &str| m.element(n).unwrap();
        assert_eq!(m.order(), 5);
        assert_eq!(m.identity(), 0);
        assert_eq!(m.mul(e("u"), e("v")), e("w"));
        assert_eq!(m.mul(e("u"), e("u")), e("w"));
        assert_eq!(m.mul(e("v"), e("v")), e("w"));
        assert_eq!(m.mul(e("u"), e("w")), e("0"));
        assert_eq!(m.mul(e("w"), e("w")), e("0"));
        assert!(m.is_commutative());
    }

    #[test]
    fn adjoin_zero_to_groups() {
        let m = adjoin_zero(&cyclic_group(1)).unwrap();
        assert_eq!(m.names(), &names(&["1", "0"]));
        let z2 = adjoin_zero(&cyclic_group(2)).unwrap();
        let g = z2.element("g").unwrap();
        assert_eq!(z2.mul(g, g), z2.identity());
        assert_eq!(z2.mul(g, z2.zero()), z2.zero());
        assert!(z2.nonzero_closed());
    }

    #[test]
    fn free_monoid_is_rejected() {
        assert_eq!(free_monoid_with_zero(&["x"]), Err(MonoidError::InfiniteInput));
        assert_eq!(free_monoid_with_zero(&[]).unwrap().order(), 2);
    }

    #[test]
    fn adjoin_identity_always_adds_an_element() {
        let z2 = cyclic_group(2);
        let s = SemigroupTable {
            names: z2.names.clone(),
            table: z2.table.clone(),
        };
        let m = adjoin_identity(&s).unwrap();
        assert_eq!(m.names, names(&["1'", "1", "g"]));
        assert_eq!(m.table[0], vec![0, 1, 2]);
        assert_eq!(m.table[2][2], 1);
        let single = SemigroupTable {
            names: names(&["z"]),
            table: vec![vec![0]],
        };
        let m = adjoin_identity(&single).unwrap();
        assert_eq!(m.names, names(&["1", "z"]));
        let m = validate(m.names, 0, 1, m.table).unwrap();
        assert_eq!(m.mul(1, 1), 1);
    }

    #[test]
    fn zero_free_truncations() {
        let m3 = builtin("m3").unwrap();
        assert_eq!(m3.names(), &names(&["1", "x", "xx", "0"]));
        let x = m3.element("x").unwrap();
        let xx = m3.element("xx").unwrap();
        assert_eq!(m3.mul(x, x), xx);
        assert_eq!(m3.mul(x, xx), m3.zero());

        let f = builtin("free2-len1").unwrap();
        assert_eq!(f.order(), 4);
        for a in ["x", "y"] {
            for b in ["x", "y"] {
                assert_eq!(f.mul(f.element(a).unwrap(), f.element(b).unwrap()), f.zero());
            }
        }
    }

    #[test]
    fn not_factor_closed() {
        let spec = WordTruncationSpec {
            alphabet: names(&["x"]),
            allowed_words: [vec![], vec![0, 0]].into_iter().collect(),
        };
        assert_eq!(
            zero_free(&spec),
            Err(MonoidError::NotFactorClosed {
                word: "xx".into(),
                factor: "x".into()
            })
        );
    }

    #[test]
    fn zero_cancellativity() {
        assert_eq!(is_zero_cancellative(&builtin("z2-with-zero").unwrap()), Ok(()));
        assert_eq!(is_zero_cancellative(&builtin("m3").unwrap()), Ok(()));
        let e4 = example_uvw();
        let (u, v) = (e4.element("u").unwrap(), e4.element("v").unwrap());
        assert_eq!(
            is_zero_cancellative(&e4),
            Err(CancellationWitness::Right { a: u, b: v, x: u })
        );
    }

    #[test]
    fn relabel_round_trip() {
        let m = example_uvw();
        let perm = [4, 2, 0, 1, 3];
        let r = m.relabel(&perm);
        assert_eq!(r.identity(), 4);
        assert_eq!(r.zero(), 3);
        let inv: Vec<usize> = (0..5).map(|i| perm.iter().position(|&p| p == i).unwrap()).collect();
        assert_eq!(r.relabel(&inv), m);
    }
}
