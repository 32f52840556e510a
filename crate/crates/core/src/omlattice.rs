//! Finite ortholattices given by an explicit order and orthocomplement.
//!
//! Elements are addressed by index ([`Elem`]); labels exist for I/O and
//! witnesses. Meet and join tables are computed once at construction, so every
//! lattice operation afterwards is a table lookup.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Elem = usize;

pub const MAX_BOOLEAN_ATOMS: usize = 8;
pub const MAX_MO_PAIRS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice has no elements")]
    Empty,
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("not a poset: {0} and {1} lie on an order cycle")]
    NotAPoset(String, String),
    #[error("no unique bottom element")]
    MissingBottom,
    #[error("no unique top element")]
    MissingTop,
    #[error("missing meet: {0} and {1} have no greatest lower bound")]
    MissingMeet(String, String),
    #[error("missing join: {0} and {1} have no least upper bound")]
    MissingJoin(String, String),
    #[error("ortho undefined for {0}")]
    OrthoUndefined(String),
    #[error("ortho not involutive: ortho(ortho({0})) = {1}")]
    OrthoNotInvolutive(String, String),
    #[error("ortho not antitone: {0} <= {1} but ortho({1}) is not below ortho({0})")]
    OrthoNotAntitone(String, String),
    #[error("ortho not a complement: {0} {1} ortho({0}) = {2}")]
    OrthoNotComplement(String, &'static str, String),
    #[error("lattice {name} is not orthomodular (witness {a} <= {b})")]
    NotOrthomodular { name: String, a: String, b: String },
    #[error("generators {0} and {1} are not commensurable")]
    IncompatibleGenerators(String, String),
    #[error("parameter {0} out of range for {1}")]
    OutOfRange(usize, &'static str),
    #[error("unrecognised lattice name {0:?} (expected boolean(n), MO(n) or O6)")]
    UnknownStandard(String),
    #[error("closure of commensurable generators is not distributive (witness {0:?})")]
    ClosureNotBoolean(Vec<String>),
}

/// On-disk description of a lattice. `leq` lists generating pairs; the
/// reflexive-transitive closure is taken on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub name: String,
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub ortho: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct OrthoLattice {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, Elem>,
    leq: Vec<bool>,
    ortho: Vec<Elem>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    om_witness: Option<(Elem, Elem)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Orthomodular,
    Distributive,
    Modular,
    Atomic,
    Covering,
}

impl Law {
    pub const ALL: [Law; 5] = [Law::Orthomodular, Law::Distributive, Law::Modular, Law::Atomic, Law::Covering];

    pub fn name(self) -> &'static str {
        match self {
            Law::Orthomodular => "orthomodular",
            Law::Distributive => "distributive",
            Law::Modular => "modular",
            Law::Atomic => "atomic",
            Law::Covering => "covering",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown law {s:?}"))
    }
}

/// Result of an exhaustive law check. The witness lists element labels in
/// the order the law's variables are quantified:
///
/// * orthomodular: `(a, b)` with `a <= b` and `b != a | (b & a')`
/// * distributive: `(a, b, c)` with `a & (b | c) != (a & b) | (a & c)`
/// * modular: `(a, b, c)` with `a <= c` and `a | (b & c) != (a | b) & c`
/// * atomic: `(x)`, a nonzero element above no atom
/// * covering: `(p, b, c)`, atom `p` with `p & b = 0` and `b < c < p | b`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawVerdict {
    pub law: Law,
    pub holds: bool,
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeOps {
    pub meet: String,
    pub join: String,
    pub ortho_a: String,
    pub ortho_b: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Standard {
    Boolean(usize),
    Mo(usize),
    O6,
}

impl fmt::Display for Standard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Standard::Boolean(n) => write!(f, "boolean({n})"),
            Standard::Mo(n) => write!(f, "MO({n})"),
            Standard::O6 => f.write_str("O6"),
        }
    }
}

impl FromStr for Standard {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LatticeError::UnknownStandard(s.to_string());
        let s = s.trim();
        if s.eq_ignore_ascii_case("o6") {
            return Ok(Standard::O6);
        }
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let n: usize = rest.strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        match head.trim().to_ascii_lowercase().as_str() {
            "boolean" => Ok(Standard::Boolean(n)),
            "mo" => Ok(Standard::Mo(n)),
            _ => Err(bad()),
        }
    }
}

fn atom_name(i: usize) -> String {
    // a..z, then a26, a27, ...
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("a{i}")
    }
}

/// Builds one of the named lattices.
///
/// Indices are chosen so that `ortho(i) = len - 1 - i`: boolean(n) indexes
/// subsets by bitmask, and MO(n) lists `0, a, b, .., b', a', 1`.
pub fn standard(which: Standard) -> Result<OrthoLattice, LatticeError> {
    match which {
        Standard::Boolean(n) => {
            if n == 0 || n > MAX_BOOLEAN_ATOMS {
                return Err(LatticeError::OutOfRange(n, "boolean(n)"));
            }
            let size = 1usize << n;
            let full = size - 1;
            let labels = (0..size)
                .map(|m| match m {
                    0 => "0".to_string(),
                    m if m == full => "1".to_string(),
                    m => (0..n).filter(|i| m >> i & 1 == 1).map(atom_name).collect::<Vec<_>>().join(""),
                })
                .collect();
            let mut leq = vec![false; size * size];
            for x in 0..size {
                for y in 0..size {
                    leq[x * size + y] = x & !y == 0;
                }
            }
            let ortho = (0..size).map(|m| full ^ m).collect();
            OrthoLattice::from_parts(which.to_string(), labels, leq, ortho)
        }
        Standard::Mo(n) => {
            if n == 0 || n > MAX_MO_PAIRS {
                return Err(LatticeError::OutOfRange(n, "MO(n)"));
            }
            let size = 2 * n + 2;
            let mut labels = vec!["0".to_string()];
            labels.extend((0..n).map(atom_name));
            labels.extend((0..n).rev().map(|i| format!("{}'", atom_name(i))));
            labels.push("1".to_string());
            let mut leq = vec![false; size * size];
            for x in 0..size {
                leq[x * size + x] = true;
                leq[x] = true;
                leq[x * size + size - 1] = true;
            }
            let ortho = (0..size).map(|i| size - 1 - i).collect();
            OrthoLattice::from_parts(which.to_string(), labels, leq, ortho)
        }
        Standard::O6 => {
            // 0 < a < b < 1, 0 < b' < a' < 1
            let labels: Vec<String> = ["0", "a", "b", "b'", "a'", "1"].iter().map(|s| s.to_string()).collect();
            let mut leq = vec![false; 36];
            let pairs = [(1, 2), (3, 4)];
            for x in 0..6 {
                leq[x * 6 + x] = true;
                leq[x] = true;
                leq[x * 6 + 5] = true;
            }
            for (x, y) in pairs {
                leq[x * 6 + y] = true;
            }
            OrthoLattice::from_parts("O6".into(), labels, leq, vec![5, 4, 3, 2, 1, 0])
        }
    }
}

impl OrthoLattice {
    /// Validates a lattice description: order closure, antisymmetry, bounds,
    /// meets and joins, then the orthocomplement axioms.
    pub fn from_spec(spec: &LatticeSpec) -> Result<Self, LatticeError> {
        let n = spec.elements.len();
        let mut index = HashMap::new();
        for (i, l) in spec.elements.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        let lookup = |l: &str| index.get(l).copied().ok_or_else(|| LatticeError::UnknownElement(l.to_string()));
        let mut leq = vec![false; n * n];
        for (a, b) in &spec.leq {
            leq[lookup(a)? * n + lookup(b)?] = true;
        }
        let mut ortho = Vec::with_capacity(n);
        for l in &spec.elements {
            let target = spec.ortho.get(l).ok_or_else(|| LatticeError::OrthoUndefined(l.clone()))?;
            ortho.push(lookup(target)?);
        }
        for key in spec.ortho.keys() {
            lookup(key)?;
        }
        Self::from_parts(spec.name.clone(), spec.elements.clone(), leq, ortho)
    }

    /// Same validation as [`from_spec`](Self::from_spec) for an order given
    /// as a row-major `n x n` matrix of generating pairs.
    pub fn from_parts(
        name: String,
        labels: Vec<String>,
        mut leq: Vec<bool>,
        ortho: Vec<Elem>,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        assert_eq!(leq.len(), n * n, "order matrix must be n x n");
        assert_eq!(ortho.len(), n, "ortho map must be total");
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }

        for i in 0..n {
            leq[i * n + i] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(LatticeError::NotAPoset(labels[i].clone(), labels[j].clone()));
                }
            }
        }

        let bottom = (0..n).find(|&b| (0..n).all(|x| leq[b * n + x])).ok_or(LatticeError::MissingBottom)?;
        let top = (0..n).find(|&t| (0..n).all(|x| leq[x * n + t])).ok_or(LatticeError::MissingTop)?;

        let meet = bound_table(n, &leq, true, &labels)?;
        let join = bound_table(n, &leq, false, &labels)?;

        let mut lattice = OrthoLattice {
            name,
            labels,
            index,
            leq,
            ortho,
            meet,
            join,
            bottom,
            top,
            om_witness: None,
        };
        lattice.check_ortho()?;
        lattice.om_witness = lattice.orthomodular_violation();
        Ok(lattice)
    }

    fn check_ortho(&self) -> Result<(), LatticeError> {
        let n = self.len();
        for a in 0..n {
            let back = self.ortho[self.ortho[a]];
            if back != a {
                return Err(LatticeError::OrthoNotInvolutive(self.label(a).into(), self.label(back).into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.leq(a, b) && !self.leq(self.ortho[b], self.ortho[a]) {
                    return Err(LatticeError::OrthoNotAntitone(self.label(a).into(), self.label(b).into()));
                }
            }
        }
        for a in 0..n {
            let m = self.meet(a, self.ortho[a]);
            if m != self.bottom {
                return Err(LatticeError::OrthoNotComplement(self.label(a).into(), "&", self.label(m).into()));
            }
            let j = self.join(a, self.ortho[a]);
            if j != self.top {
                return Err(LatticeError::OrthoNotComplement(self.label(a).into(), "|", self.label(j).into()));
            }
        }
        Ok(())
    }

    fn orthomodular_violation(&self) -> Option<(Elem, Elem)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.leq(a, b) && self.join(a, self.meet(b, self.ortho(a))) != b)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.labels[e]
    }

    pub fn elem(&self, label: &str) -> Result<Elem, LatticeError> {
        self.index.get(label).copied().ok_or_else(|| LatticeError::UnknownElement(label.to_string()))
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.len() + b]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.len() + b]
    }

    #[inline]
    pub fn ortho(&self, a: Elem) -> Elem {
        self.ortho[a]
    }

    /// Meet, join and both orthocomplements, addressed by label.
    pub fn ops(&self, a: &str, b: &str) -> Result<LatticeOps, LatticeError> {
        let (x, y) = (self.elem(a)?, self.elem(b)?);
        Ok(LatticeOps {
            meet: self.label(self.meet(x, y)).to_string(),
            join: self.label(self.join(x, y)).to_string(),
            ortho_a: self.label(self.ortho(x)).to_string(),
            ortho_b: self.label(self.ortho(y)).to_string(),
        })
    }

    pub fn is_orthomodular(&self) -> bool {
        self.om_witness.is_none()
    }

    fn require_orthomodular(&self) -> Result<(), LatticeError> {
        match self.om_witness {
            None => Ok(()),
            Some((a, b)) => Err(LatticeError::NotOrthomodular {
                name: self.name.clone(),
                a: self.label(a).to_string(),
                b: self.label(b).to_string(),
            }),
        }
    }

    /// `b` covers `a`: `a < b` with nothing strictly between.
    pub fn covers(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b) && (0..self.len()).all(|c| c == a || c == b || !(self.leq(a, c) && self.leq(c, b)))
    }

    pub fn atoms(&self) -> Vec<Elem> {
        (0..self.len()).filter(|&p| self.covers(self.bottom, p)).collect()
    }

    fn witness(&self, elems: &[Elem]) -> Option<Vec<String>> {
        Some(elems.iter().map(|&e| self.label(e).to_string()).collect())
    }

    /// Exhaustive check; the witness is the first violation in lexicographic
    /// index order.
    pub fn check_law(&self, law: Law) -> LawVerdict {
        let n = self.len();
        let found: Option<Vec<Elem>> = match law {
            Law::Orthomodular => self.om_witness.map(|(a, b)| vec![a, b]),
            Law::Distributive => triples(n)
                .find(|&(a, b, c)| {
                    self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c))
                })
                .map(|(a, b, c)| vec![a, b, c]),
            Law::Modular => triples(n)
                .find(|&(a, b, c)| {
                    self.leq(a, c) && self.join(a, self.meet(b, c)) != self.meet(self.join(a, b), c)
                })
                .map(|(a, b, c)| vec![a, b, c]),
            Law::Atomic => {
                let atoms = self.atoms();
                (0..n)
                    .find(|&x| x != self.bottom && !atoms.iter().any(|&p| self.leq(p, x)))
                    .map(|x| vec![x])
            }
            Law::Covering => self.covering_violation(),
        };
        LawVerdict { law, holds: found.is_none(), witness: found.and_then(|w| self.witness(&w)) }
    }

    fn covering_violation(&self) -> Option<Vec<Elem>> {
        let n = self.len();
        for p in self.atoms() {
            for b in 0..n {
                if self.meet(p, b) != self.bottom {
                    continue;
                }
                let pb = self.join(p, b);
                if let Some(c) = (0..n).find(|&c| c != b && c != pb && self.leq(b, c) && self.leq(c, pb)) {
                    return Some(vec![p, b, c]);
                }
            }
        }
        None
    }

    /// Algebraic compatibility: `a = (a & b) | (a & b')`.
    pub fn commensurable(&self, a: Elem, b: Elem) -> bool {
        self.join(self.meet(a, b), self.meet(a, self.ortho(b))) == a
    }

    /// Smallest sub-ortholattice containing the generators, which must be
    /// pairwise commensurable. The result keeps the parent's labels.
    pub fn boolean_closure(&self, gens: &[Elem]) -> Result<OrthoLattice, LatticeError> {
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                if !self.commensurable(a, b) {
                    return Err(LatticeError::IncompatibleGenerators(
                        self.label(a).to_string(),
                        self.label(b).to_string(),
                    ));
                }
            }
        }
        let mut set: BTreeSet<Elem> = [self.bottom, self.top].into_iter().chain(gens.iter().copied()).collect();
        loop {
            let current: Vec<Elem> = set.iter().copied().collect();
            let before = set.len();
            for &x in &current {
                set.insert(self.ortho(x));
                for &y in &current {
                    set.insert(self.meet(x, y));
                    set.insert(self.join(x, y));
                }
            }
            if set.len() == before {
                break;
            }
        }
        let sub = self.restrict(&set.into_iter().collect::<Vec<_>>(), format!("{}[closure]", self.name))?;
        let verdict = sub.check_law(Law::Distributive);
        if !verdict.holds {
            return Err(LatticeError::ClosureNotBoolean(verdict.witness.unwrap_or_default()));
        }
        Ok(sub)
    }

    /// Induced ortholattice on a subset closed under the operations.
    pub fn restrict(&self, elems: &[Elem], name: String) -> Result<OrthoLattice, LatticeError> {
        let m = elems.len();
        let pos: HashMap<Elem, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let labels = elems.iter().map(|&e| self.label(e).to_string()).collect();
        let mut leq = vec![false; m * m];
        for (i, &x) in elems.iter().enumerate() {
            for (j, &y) in elems.iter().enumerate() {
                leq[i * m + j] = self.leq(x, y);
            }
        }
        let ortho = elems
            .iter()
            .map(|&e| pos.get(&self.ortho(e)).copied().ok_or_else(|| LatticeError::OrthoUndefined(self.label(e).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        OrthoLattice::from_parts(name, labels, leq, ortho)
    }

    /// `a & (a' | b)`.
    pub fn sasaki_projection(&self, a: Elem, b: Elem) -> Result<Elem, LatticeError> {
        self.require_orthomodular()?;
        Ok(self.meet(a, self.join(self.ortho(a), b)))
    }

    /// `a' | (a & b)`; equals the top element exactly when `a <= b`.
    pub fn sasaki_hook(&self, a: Elem, b: Elem) -> Result<Elem, LatticeError> {
        self.require_orthomodular()?;
        Ok(self.hook_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn hook_unchecked(&self, a: Elem, b: Elem) -> Elem {
        self.join(self.ortho(a), self.meet(a, b))
    }

    /// Serializable description listing only covering pairs.
    pub fn to_spec(&self) -> LatticeSpec {
        let n = self.len();
        let mut leq = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.covers(a, b) {
                    leq.push((self.label(a).to_string(), self.label(b).to_string()));
                }
            }
        }
        LatticeSpec {
            name: self.name.clone(),
            elements: self.labels.clone(),
            leq,
            ortho: (0..n).map(|a| (self.label(a).to_string(), self.label(self.ortho(a)).to_string())).collect(),
        }
    }
}

fn triples(n: usize) -> impl Iterator<Item = (Elem, Elem, Elem)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
}

/// Greatest lower bounds (`lower = true`) or least upper bounds for all pairs.
fn bound_table(n: usize, leq: &[bool], lower: bool, labels: &[String]) -> Result<Vec<Elem>, LatticeError> {
    let rel = |x: Elem, y: Elem| if lower { leq[x * n + y] } else { leq[y * n + x] };
    let mut table = vec![0; n * n];
    let mut candidates = Vec::with_capacity(n);
    for a in 0..n {
        for b in a..n {
            candidates.clear();
            candidates.extend((0..n).filter(|&x| rel(x, a) && rel(x, b)));
            let mut best = candidates.first().copied();
            if let Some(mut m) = best {
                for &x in &candidates {
                    if rel(m, x) {
                        m = x;
                    }
                }
                best = candidates.iter().all(|&x| rel(x, m)).then_some(m);
            }
            let m = best.ok_or_else(|| {
                let (x, y) = (labels[a].clone(), labels[b].clone());
                if lower {
                    LatticeError::MissingMeet(x, y)
                } else {
                    LatticeError::MissingJoin(x, y)
                }
            })?;
            table[a * n + b] = m;
            table[b * n + a] = m;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(elements: &[&str], leq: &[(&str, &str)], ortho: &[(&str, &str)]) -> LatticeSpec {
        LatticeSpec {
            name: "t".into(),
            elements: elements.iter().map(|s| s.to_string()).collect(),
            leq: leq.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            ortho: ortho.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        }
    }

    #[test]
    fn two_element_chain() {
        let l = OrthoLattice::from_spec(&spec(&["0", "1"], &[("0", "1")], &[("0", "1"), ("1", "0")])).unwrap();
        assert_eq!(l.len(), 2);
        for law in Law::ALL {
            assert!(l.check_law(law).holds, "{law}");
        }
    }

    #[test]
    fn diamond_with_self_ortho_fails_complementation() {
        let s = spec(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
            &[("0", "1"), ("1", "0"), ("a", "a"), ("b", "b")],
        );
        assert_eq!(
            OrthoLattice::from_spec(&s).unwrap_err(),
            LatticeError::OrthoNotComplement("a".into(), "&", "a".into())
        );
    }

    #[test]
    fn hexagon_spec_is_valid_ortholattice() {
        let s = spec(
            &["0", "a", "b", "b'", "a'", "1"],
            &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "b'"), ("b'", "a'"), ("a'", "1")],
            &[("0", "1"), ("1", "0"), ("a", "a'"), ("a'", "a"), ("b", "b'"), ("b'", "b")],
        );
        let l = OrthoLattice::from_spec(&s).unwrap();
        assert_eq!(l.len(), 6);
        assert!(!l.is_orthomodular());
    }

    #[test]
    fn distinct_construction_errors() {
        let cyc = spec(&["0", "a", "1"], &[("0", "a"), ("a", "0"), ("a", "1")], &[("0", "1"), ("1", "0"), ("a", "a")]);
        assert!(matches!(OrthoLattice::from_spec(&cyc), Err(LatticeError::NotAPoset(..))));

        let no_top = spec(&["0", "a", "b"], &[("0", "a"), ("0", "b")], &[("0", "a"), ("a", "0"), ("b", "b")]);
        assert_eq!(OrthoLattice::from_spec(&no_top).unwrap_err(), LatticeError::MissingTop);

        let no_bottom = spec(&["a", "b", "1"], &[("a", "1"), ("b", "1")], &[("a", "b"), ("b", "a"), ("1", "1")]);
        assert_eq!(OrthoLattice::from_spec(&no_bottom).unwrap_err(), LatticeError::MissingBottom);

        // 0 < a,b < c,d < 1 : {a,b} has two minimal upper bounds, {c,d} two maximal lower ones
        let no_join = spec(
            &["0", "a", "b", "c", "d", "1"],
            &[("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")],
            &[("0", "1"), ("1", "0"), ("a", "d"), ("d", "a"), ("b", "c"), ("c", "b")],
        );
        assert_eq!(OrthoLattice::from_spec(&no_join).unwrap_err(), LatticeError::MissingMeet("c".into(), "d".into()));

        let not_inv = spec(&["0", "a", "1"], &[("0", "a"), ("a", "1")], &[("0", "1"), ("1", "a"), ("a", "0")]);
        assert_eq!(
            OrthoLattice::from_spec(&not_inv).unwrap_err().to_string(),
            "ortho not involutive: ortho(ortho(0)) = a"
        );

        let dup = spec(&["0", "0"], &[], &[]);
        assert_eq!(OrthoLattice::from_spec(&dup).unwrap_err(), LatticeError::DuplicateLabel("0".into()));

        let missing = spec(&["0", "1"], &[("0", "1")], &[("0", "1")]);
        assert_eq!(OrthoLattice::from_spec(&missing).unwrap_err(), LatticeError::OrthoUndefined("1".into()));

        let unknown = spec(&["0", "1"], &[("0", "x")], &[("0", "1"), ("1", "0")]);
        assert_eq!(OrthoLattice::from_spec(&unknown).unwrap_err(), LatticeError::UnknownElement("x".into()));
    }

    #[test]
    fn antitone_violation_detected() {
        // chain 0 < a < b < 1 with a and b self-orthogonal
        let s = spec(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("a", "b"), ("b", "1")],
            &[("0", "1"), ("1", "0"), ("a", "a"), ("b", "b")],
        );
        assert!(matches!(OrthoLattice::from_spec(&s), Err(LatticeError::OrthoNotAntitone(..))));
    }

    #[test]
    fn standard_sizes() {
        assert_eq!(standard(Standard::Boolean(1)).unwrap().len(), 2);
        assert_eq!(standard(Standard::Boolean(3)).unwrap().len(), 8);
        assert_eq!(standard(Standard::Mo(2)).unwrap().len(), 6);
        assert_eq!(standard(Standard::Mo(4)).unwrap().len(), 10);
        assert_eq!(standard(Standard::O6).unwrap().len(), 6);
        assert_eq!(standard(Standard::Boolean(0)).unwrap_err(), LatticeError::OutOfRange(0, "boolean(n)"));
        assert_eq!(standard(Standard::Mo(0)).unwrap_err(), LatticeError::OutOfRange(0, "MO(n)"));
    }

    #[test]
    fn standard_names_parse() {
        assert_eq!("boolean(3)".parse::<Standard>().unwrap(), Standard::Boolean(3));
        assert_eq!("MO(2)".parse::<Standard>().unwrap(), Standard::Mo(2));
        assert_eq!("O6".parse::<Standard>().unwrap(), Standard::O6);
        assert!("MO2".parse::<Standard>().is_err());
        assert_eq!(Standard::Mo(3).to_string(), "MO(3)");
    }

    #[test]
    fn mo2_laws_and_witness() {
        let l = standard(Standard::Mo(2)).unwrap();
        assert_eq!(l.labels(), ["0", "a", "b", "b'", "a'", "1"]);
        assert!(l.check_law(Law::Orthomodular).holds);
        let d = l.check_law(Law::Distributive);
        assert!(!d.holds);
        assert_eq!(d.witness.unwrap(), ["a", "b", "b'"]);
        assert!(l.check_law(Law::Modular).holds);
        assert!(l.check_law(Law::Atomic).holds);
        assert!(l.check_law(Law::Covering).holds);
    }

    #[test]
    fn o6_orthomodular_witness() {
        let l = standard(Standard::O6).unwrap();
        let v = l.check_law(Law::Orthomodular);
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap(), ["a", "b"]);
        // substituting: a | (b & a') = a != b
        let (a, b) = (l.elem("a").unwrap(), l.elem("b").unwrap());
        assert_eq!(l.join(a, l.meet(b, l.ortho(a))), a);
        assert!(l.sasaki_hook(a, b).is_err());
        assert!(matches!(l.sasaki_projection(a, b), Err(LatticeError::NotOrthomodular { .. })));
    }

    #[test]
    fn ops_by_label() {
        let l = standard(Standard::Mo(2)).unwrap();
        let ops = l.ops("a", "b").unwrap();
        assert_eq!((ops.meet.as_str(), ops.join.as_str()), ("0", "1"));
        assert_eq!(ops.ortho_a, "a'");
        assert_eq!(l.ops("a", "z").unwrap_err(), LatticeError::UnknownElement("z".into()));
        for x in 0..l.len() {
            assert_eq!(l.meet(x, l.top()), x);
            assert_eq!(l.join(x, l.bottom()), x);
            assert_eq!(l.ortho(l.ortho(x)), x);
        }
    }

    #[test]
    fn commensurability_in_mo2() {
        let l = standard(Standard::Mo(2)).unwrap();
        let e = |s| l.elem(s).unwrap();
        assert!(l.commensurable(e("a"), e("1")));
        assert!(l.commensurable(e("a"), e("a'")));
        assert!(!l.commensurable(e("a"), e("b")));
    }

    #[test]
    fn boolean_closure_cases() {
        let l = standard(Standard::Mo(2)).unwrap();
        let e = |s| l.elem(s).unwrap();
        let c = l.boolean_closure(&[e("a")]).unwrap();
        assert_eq!(c.labels(), ["0", "a", "a'", "1"]);
        let empty = l.boolean_closure(&[]).unwrap();
        assert_eq!(empty.labels(), ["0", "1"]);
        assert_eq!(
            l.boolean_closure(&[e("a"), e("b")]).unwrap_err(),
            LatticeError::IncompatibleGenerators("a".into(), "b".into())
        );
    }

    #[test]
    fn sasaki_examples() {
        let l = standard(Standard::Mo(2)).unwrap();
        let e = |s| l.elem(s).unwrap();
        assert_eq!(l.sasaki_projection(e("a"), l.top()).unwrap(), e("a"));
        assert_eq!(l.sasaki_projection(e("a"), e("b")).unwrap(), e("a"));
        assert_eq!(l.sasaki_hook(e("a"), e("b")).unwrap(), e("a'"));
        assert_eq!(l.sasaki_hook(e("a"), e("a")).unwrap(), l.top());
        for name in [Standard::Mo(2), Standard::Boolean(3)] {
            let l = standard(name).unwrap();
            for a in 0..l.len() {
                for b in 0..l.len() {
                    if l.leq(b, a) {
                        assert_eq!(l.sasaki_projection(a, b).unwrap(), b);
                    }
                }
            }
        }
    }

    #[test]
    fn boolean2_hook_is_material() {
        let l = standard(Standard::Boolean(2)).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(l.sasaki_hook(a, b).unwrap(), l.join(l.ortho(a), b));
            }
        }
    }

    #[test]
    fn spec_round_trip() {
        let l = standard(Standard::Mo(3)).unwrap();
        let json = serde_json::to_string(&l.to_spec()).unwrap();
        let back: LatticeSpec = serde_json::from_str(&json).unwrap();
        let l2 = OrthoLattice::from_spec(&back).unwrap();
        assert_eq!(l2.labels(), l.labels());
        for a in 0..l.len() {
            for b in 0..l.len() {
                assert_eq!(l.leq(a, b), l2.leq(a, b));
            }
        }
    }
}
